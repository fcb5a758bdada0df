#pragma once
//
// oracle.hpp
//
// Naive quadratic counters for small primes. They use mod_pow and the class
// definitions straight from numtheory; no index tables, no buckets. The
// census must agree with these entry for entry.
//

#include <numeric>
#include <string>
#include <vector>

#include "dlcensus/census.hpp"
#include "dlcensus/numtheory.hpp"

namespace dlc::oracle {

inline constexpr u64 kOracleLimit = 2000;

namespace detail {

struct Residues {
  u64 p = 0;
  u64 n = 0;
  std::vector<Kind> kind;
  std::vector<u64> order;

  explicit Residues(u64 prime) : p(prime), n(prime - 1), kind(prime, 0), order(prime, 0) {
    if (prime > kOracleLimit)
      throw InputError("oracle: p=" + std::to_string(prime) + " exceeds limit " +
                       std::to_string(kOracleLimit));
    if (!is_prime(prime)) throw InputError(std::to_string(prime) + " is not prime");
    const auto f = factorize(n);
    for (u64 x = 1; x < p; ++x) {
      order[x] = multiplicative_order(x, p, f);
      Kind k = 0;
      if (order[x] == n) k |= kPRBit;
      if (std::gcd(x, n) == 1) k |= kRPBit;
      kind[x] = k;
    }
  }
};

struct Split {
  KindGrid trivial{};
  KindGrid nontrivial{};
  std::array<u64, 4> ord_trivial{}, ord_nontrivial{};
  std::array<u64, 4> same_trivial{}, same_nontrivial{};
};

inline CountMatrix finish(Equation eq, u64 p, const Split& s) {
  CountMatrix m;
  m.equation = eq;
  m.p = p;
  m.trivial = fold_kinds(s.trivial);
  m.nontrivial = fold_kinds(s.nontrivial);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) m.total[r][c] = m.trivial[r][c] + m.nontrivial[r][c];
  if (eq == Equation::TC) {
    m.ord_trivial = fold_kinds(s.ord_trivial);
    m.ord_nontrivial = fold_kinds(s.ord_nontrivial);
    m.same_order_trivial = fold_kinds(s.same_trivial);
    m.same_order_nontrivial = fold_kinds(s.same_nontrivial);
    for (std::size_t k = 0; k < 4; ++k) {
      m.ord_total[k] = m.ord_trivial[k] + m.ord_nontrivial[k];
      m.same_order_total[k] = m.same_order_trivial[k] + m.same_order_nontrivial[k];
    }
  }
  return m;
}

}  // namespace detail

inline CountMatrix oracle_fp(u64 p) {
  const detail::Residues r(p);
  detail::Split s;
  for (u64 g = 1; g < p; ++g)
    for (u64 h = 1; h < p; ++h)
      if (mod_pow(g, h, p) == h) ++s.nontrivial[r.kind[g]][r.kind[h]];
  return detail::finish(Equation::FP, p, s);
}

// Rows a, columns h.
inline CountMatrix oracle_ha(u64 p) {
  const detail::Residues r(p);
  detail::Split s;
  for (u64 a = 1; a < p; ++a)
    for (u64 h = 1; h < p; ++h) {
      if (mod_pow(h, h, p) != mod_pow(a, a, p)) continue;
      auto& grid = (h == a) ? s.trivial : s.nontrivial;
      ++grid[r.kind[a]][r.kind[h]];
    }
  return detail::finish(Equation::HA, p, s);
}

inline CountMatrix oracle_tc(u64 p) {
  const detail::Residues r(p);
  detail::Split s;
  for (u64 g = 1; g < p; ++g)
    for (u64 h = 1; h < p; ++h) {
      const u64 a = mod_pow(g, h, p);
      if (mod_pow(g, a, p) != h) continue;
      const bool trivial = (a == h);
      ++(trivial ? s.trivial : s.nontrivial)[r.kind[g]][r.kind[h]];
      if (std::gcd(a, r.n) == 1) ++(trivial ? s.ord_trivial : s.ord_nontrivial)[r.kind[h]];
      if (r.order[g] == r.order[h]) ++(trivial ? s.same_trivial : s.same_nontrivial)[r.kind[h]];
    }
  return detail::finish(Equation::TC, p, s);
}

}  // namespace dlc::oracle
