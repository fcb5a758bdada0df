#pragma once
//
// predictor.hpp
//
// Heuristic predictions for the census, evaluated exactly. Every cell of a
// prediction grid names one formula in phi = phi(p-1) and n = p-1; the
// divisor-sum value for the (ANY, ANY) cell of HA comes with two independent
// product forms that must agree with it as rationals.
//

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlcensus/census.hpp"
#include "dlcensus/errors.hpp"
#include "dlcensus/numtheory.hpp"
#include "dlcensus/rational.hpp"

namespace dlc {

// p together with the factorization, divisors and totient of p-1.
struct PrimeContext {
  u64 p = 0;
  u64 n = 0;
  u64 phi = 0;
  Factored factored;
  std::vector<u64> divisors;
};

inline PrimeContext make_prime_context(u64 p) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  PrimeContext ctx;
  ctx.p = p;
  ctx.n = p - 1;
  ctx.factored = factorize(ctx.n);
  ctx.phi = euler_phi(ctx.factored);
  ctx.divisors = divisors(ctx.factored);
  return ctx;
}

enum class FormulaId : std::uint8_t { N, PHI, PHI2_N, PHI3_N2, PHI4_N3, HA_SUM, EXACT_PHI, NONE };

inline constexpr std::string_view formula_name(FormulaId id) {
  switch (id) {
    case FormulaId::N: return "N";
    case FormulaId::PHI: return "PHI";
    case FormulaId::PHI2_N: return "PHI2_N";
    case FormulaId::PHI3_N2: return "PHI3_N2";
    case FormulaId::PHI4_N3: return "PHI4_N3";
    case FormulaId::HA_SUM: return "HA_SUM";
    case FormulaId::EXACT_PHI: return "EXACT_PHI";
    case FormulaId::NONE: return "NONE";
  }
  return "?";
}

// sum_{m | n} phi(m)/m^2 * (sum_{d | n/m} phi(dm)/d)^2
inline Rational ha_sum_form(const Factored& f) {
  Rational total = 0;
  for (u64 m : divisors(f)) {
    Rational inner = 0;
    for (u64 d : divisors(factorize(f.n / m)))
      inner += Rational(BigInt(phi_of_divisor(f, d * m)), BigInt(d));
    total += Rational(BigInt(phi_of_divisor(f, m)), BigInt(m) * m) * inner * inner;
  }
  return total;
}

// prod_q sum_{beta=0}^{alpha} phi(q^beta) [(1 - 1/q)(alpha - beta) + phi(q^beta)/q^beta]^2
inline Rational ha_geneq_form(const Factored& f) {
  Rational product = 1;
  for (const auto& [q, alpha] : f.factors) {
    const Rational shrink = 1 - Rational(1, BigInt(q));
    Rational factor = 0;
    BigInt qpow = 1;
    for (unsigned beta = 0; beta <= alpha; ++beta) {
      const BigInt phi_qb = beta == 0 ? BigInt(1) : qpow / q * (q - 1);
      const Rational bracket = shrink * int(alpha - beta) + Rational(phi_qb, qpow);
      factor += Rational(phi_qb) * bracket * bracket;
      qpow *= q;
    }
    product *= factor;
  }
  return product;
}

// The same product with the beta-sum summed in closed form.
inline Rational ha_geneq_closed_form(const Factored& f) {
  Rational product = 1;
  for (const auto& [q_, alpha] : f.factors) {
    const Rational q{BigInt(q_)};
    const Rational a{int(alpha)};
    auto qp = [&](unsigned e) {
      Rational r = 1;
      for (unsigned i = 0; i < e; ++i) r *= q;
      return r;
    };
    const Rational shrink = 1 - 1 / q;
    const Rational lead = (shrink * a + 1) * (shrink * a + 1);
    const Rational t1 = (a + 1) * (a + 1) * (qp(alpha + 1) - q) / (q - 1);
    const Rational t2 =
        2 * (a + 1) * (a * qp(alpha + 2) - (a + 1) * qp(alpha + 1) + q) / ((q - 1) * (q - 1));
    const Rational t3 = (a * a * qp(alpha + 3) - (2 * a * a + 2 * a - 1) * qp(alpha + 2) +
                         (a * a + 2 * a + 1) * qp(alpha + 1) - q * q - q) /
                        ((q - 1) * (q - 1) * (q - 1));
    product *= lead + shrink * shrink * shrink * (t1 - t2 + t3);
  }
  return product;
}

// phi(q)^3/q^2 + (1 + phi(q)/q)^2 for a prime q.
inline Rational squarefree_factor_expanded(u64 q) {
  const Rational ratio(BigInt(q - 1), BigInt(q));
  return Rational(BigInt(q - 1) * (q - 1) * (q - 1), BigInt(q) * q) + (1 + ratio) * (1 + ratio);
}

// q + 1 - 1/q for a prime q.
inline Rational squarefree_factor(u64 q) { return Rational(BigInt(q) + 1) - Rational(1, BigInt(q)); }

inline Rational ha_squarefree_form(const Factored& f) {
  if (!f.squarefree())
    throw InputError("ha_squarefree_form: " + std::to_string(f.n) + " is not squarefree");
  Rational product = 1;
  for (const auto& pf : f.factors) product *= squarefree_factor(pf.q);
  return product;
}

inline Rational formula_value(FormulaId id, const PrimeContext& ctx) {
  const BigInt phi(ctx.phi);
  const BigInt n(ctx.n);
  switch (id) {
    case FormulaId::N: return Rational(n);
    case FormulaId::PHI:
    case FormulaId::EXACT_PHI: return Rational(phi);
    case FormulaId::PHI2_N: return Rational(phi * phi, n);
    case FormulaId::PHI3_N2: return Rational(phi * phi * phi, n * n);
    case FormulaId::PHI4_N3: return Rational(phi * phi * phi * phi, n * n * n);
    case FormulaId::HA_SUM: return ha_sum_form(ctx.factored);
    case FormulaId::NONE: break;
  }
  throw InputError("formula_value: no prediction for NONE");
}

struct PredictionCell {
  FormulaId id = FormulaId::NONE;
  std::optional<Rational> value;

  friend bool operator==(const PredictionCell&, const PredictionCell&) = default;
};

// Predictions for the nontrivial part (FP: the total). Row/column layout
// follows CountMatrix; ord_row is indexed by the class of h.
struct PredictionMatrix {
  Equation equation = Equation::FP;
  u64 p = 0;
  std::array<std::array<PredictionCell, 4>, 4> grid{};
  std::array<PredictionCell, 4> ord_row{};

  const PredictionCell& at(ConditionClass row, ConditionClass col) const {
    return grid[idx(row)][idx(col)];
  }

  friend bool operator==(const PredictionMatrix&, const PredictionMatrix&) = default;
};

namespace detail {

using FormulaGrid = std::array<std::array<FormulaId, 4>, 4>;

inline constexpr FormulaGrid formula_grid(Equation eq) {
  using F = FormulaId;
  switch (eq) {
    case Equation::FP:
      return {{{F::N, F::PHI2_N, F::EXACT_PHI, F::PHI2_N},
               {F::PHI, F::PHI2_N, F::PHI2_N, F::PHI2_N},
               {F::PHI, F::PHI3_N2, F::PHI2_N, F::PHI3_N2},
               {F::PHI2_N, F::PHI3_N2, F::PHI3_N2, F::PHI3_N2}}};
    case Equation::HA:
      return {{{F::HA_SUM, F::PHI, F::PHI, F::PHI3_N2},
               {F::PHI, F::PHI2_N, F::PHI2_N, F::PHI3_N2},
               {F::PHI, F::PHI2_N, F::PHI2_N, F::PHI3_N2},
               {F::PHI3_N2, F::PHI3_N2, F::PHI3_N2, F::PHI3_N2}}};
    case Equation::TC:
      return {{{F::N, F::PHI2_N, F::PHI, F::PHI3_N2},
               {F::PHI, F::PHI2_N, F::PHI2_N, F::PHI3_N2},
               {F::PHI, F::PHI3_N2, F::PHI2_N, F::PHI4_N3},
               {F::PHI2_N, F::PHI3_N2, F::PHI3_N2, F::PHI4_N3}}};
  }
  return {};
}

}  // namespace detail

inline PredictionMatrix predict_matrix(Equation eq, const PrimeContext& ctx) {
  PredictionMatrix m;
  m.equation = eq;
  m.p = ctx.p;
  const auto formulas = detail::formula_grid(eq);
  std::optional<Rational> ha_sum;  // evaluated at most once
  auto cell = [&](FormulaId id) {
    PredictionCell c{id, std::nullopt};
    if (id == FormulaId::HA_SUM) {
      if (!ha_sum) ha_sum = formula_value(id, ctx);
      c.value = *ha_sum;
    } else if (id != FormulaId::NONE) {
      c.value = formula_value(id, ctx);
    }
    return c;
  };
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t col = 0; col < 4; ++col) m.grid[r][col] = cell(formulas[r][col]);
  for (auto& c : m.ord_row) c = cell(FormulaId::NONE);
  if (eq == Equation::TC) {
    m.ord_row[idx(ConditionClass::Any)] = cell(FormulaId::PHI);
    m.ord_row[idx(ConditionClass::RP)] = cell(FormulaId::PHI2_N);
  }
  return m;
}

}  // namespace dlc
