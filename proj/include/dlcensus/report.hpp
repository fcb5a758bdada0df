#pragma once
//
// report.hpp
//
// Observed counts next to exact predictions, the exact claims that every
// census must satisfy, table/CSV/JSON rendering, and the append-only JSONL
// result log used by sweeps.
//

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlcensus/census.hpp"
#include "dlcensus/errors.hpp"
#include "dlcensus/predictor.hpp"
#include "dlcensus/rational.hpp"
#include "dlcensus/residue_tables.hpp"

namespace dlc {

enum class Part : std::uint8_t { Total, Trivial, Nontrivial };

inline constexpr std::string_view part_name(Part p) {
  switch (p) {
    case Part::Total: return "total";
    case Part::Trivial: return "trivial";
    case Part::Nontrivial: return "nontrivial";
  }
  return "?";
}

inline std::optional<Part> parse_part(std::string_view s) {
  for (auto p : {Part::Total, Part::Trivial, Part::Nontrivial})
    if (part_name(p) == s) return p;
  return std::nullopt;
}

// Row labels beyond the four condition classes, for the TC tallies.
inline constexpr std::string_view kOrdRow = "ORD";
inline constexpr std::string_view kSameOrderRow = "SAMEORD";

struct ComparisonCell {
  std::string row;
  std::string col;
  Part part = Part::Total;
  u64 observed = 0;
  FormulaId formula = FormulaId::NONE;
  std::optional<Rational> predicted;
  std::optional<Rational> ratio;  // observed / predicted

  friend bool operator==(const ComparisonCell&, const ComparisonCell&) = default;
};

struct ExactClaim {
  std::string name;
  u64 lhs = 0;
  u64 rhs = 0;

  bool pass() const { return lhs == rhs; }
  friend bool operator==(const ExactClaim&, const ExactClaim&) = default;
};

struct ComparisonReport {
  u64 p = 0;
  Equation equation = Equation::FP;
  std::vector<ComparisonCell> cells;
  std::vector<ExactClaim> claims;

  bool all_claims_pass() const {
    for (const auto& c : claims)
      if (!c.pass()) return false;
    return true;
  }
  const ComparisonCell* find(std::string_view row, std::string_view col, Part part) const {
    for (const auto& c : cells)
      if (c.row == row && c.col == col && c.part == part) return &c;
    return nullptr;
  }

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

namespace detail {

inline std::string cell_name(std::string_view eq, std::string_view row, std::string_view col,
                             std::string_view part = "") {
  std::string s(eq);
  if (!part.empty()) s += "." + std::string(part);
  return s + "(" + std::string(row) + "," + std::string(col) + ")";
}

inline std::string cls(ConditionClass c) { return std::string(class_name(c)); }

inline void claim(std::vector<ExactClaim>& out, std::string name, u64 lhs, u64 rhs) {
  out.push_back({std::move(name), lhs, rhs});
}

inline void structural_claims(const CountMatrix& m, std::vector<ExactClaim>& out) {
  using C = ConditionClass;
  const auto eq = equation_name(m.equation);
  for (auto r : kClasses)
    for (auto c : kClasses) {
      const u64 sum = m.get(m.trivial, r, c) + m.get(m.nontrivial, r, c);
      if (sum != m.get(m.total, r, c))
        claim(out, "total = trivial + nontrivial at " + cell_name(eq, cls(r), cls(c)),
              m.get(m.total, r, c), sum);
    }
  // X' subset of X: ANY contains PR and RP, both contain RPPR.
  const std::array<std::pair<C, C>, 4> inclusions = {
      {{C::Any, C::PR}, {C::Any, C::RP}, {C::PR, C::RPPR}, {C::RP, C::RPPR}}};
  std::size_t violations = 0;
  for (const ClassGrid* g : {&m.trivial, &m.nontrivial, &m.total})
    for (auto [big, small] : inclusions)
      for (auto other : kClasses) {
        if (m.get(*g, big, other) < m.get(*g, small, other)) ++violations;
        if (m.get(*g, other, big) < m.get(*g, other, small)) ++violations;
      }
  claim(out, std::string(eq) + " monotone in both class arguments (violations)", violations, 0);
}

}  // namespace detail

// Exact claims that involve one equation only.
inline std::vector<ExactClaim> matrix_claims(const CountMatrix& m, const ClassCounts& counts,
                                             u64 phi) {
  using C = ConditionClass;
  using detail::cell_name;
  std::vector<ExactClaim> out;
  detail::structural_claims(m, out);
  switch (m.equation) {
    case Equation::FP: {
      auto t = [&](C r, C c) { return m.get(m.total, r, c); };
      detail::claim(out, "fp(ANY,RP) = phi(p-1)", t(C::Any, C::RP), phi);
      detail::claim(out, "fp h PR forces g PR: fp(ANY,PR) = fp(PR,PR)", t(C::Any, C::PR),
                    t(C::PR, C::PR));
      detail::claim(out, "fp h PR forces g PR: fp(RP,PR) = fp(RPPR,PR)", t(C::RP, C::PR),
                    t(C::RPPR, C::PR));
      const std::array<std::pair<C, C>, 4> chain = {
          {{C::PR, C::RP}, {C::PR, C::PR}, {C::Any, C::RPPR}, {C::Any, C::PR}}};
      for (auto [r, c] : chain)
        detail::claim(out, "fp(PR,RPPR) = " + cell_name("fp", detail::cls(r), detail::cls(c)),
                      t(C::PR, C::RPPR), t(r, c));
      break;
    }
    case Equation::HA: {
      std::size_t asymmetric = 0;
      for (const ClassGrid* g : {&m.trivial, &m.nontrivial, &m.total})
        for (auto r : kClasses)
          for (auto c : kClasses)
            if (m.get(*g, r, c) != m.get(*g, c, r)) ++asymmetric;
      detail::claim(out, "ha symmetric in (a,h) (asymmetric cells)", asymmetric, 0);
      for (auto c : {C::Any, C::PR, C::RP})
        detail::claim(out,
                      "ha h RPPR forces a RPPR: ha.nontrivial(RPPR,RPPR) = " +
                          cell_name("ha.nontrivial", "RPPR", detail::cls(c)),
                      m.get(m.nontrivial, C::RPPR, C::RPPR), m.get(m.nontrivial, C::RPPR, c));
      std::size_t trivial_mismatch = 0;
      for (auto r : kClasses)
        for (auto c : kClasses)
          if (m.get(m.trivial, r, c) != counts.both(r, c)) ++trivial_mismatch;
      detail::claim(out, "ha trivial part = |X cap Y| (mismatched cells)", trivial_mismatch, 0);
      break;
    }
    case Equation::TC: {
      auto nt = [&](C r, C c) { return m.get(m.nontrivial, r, c); };
      detail::claim(out, "tc h PR forces g PR: tc.nontrivial(ANY,PR) = tc.nontrivial(PR,PR)",
                    nt(C::Any, C::PR), nt(C::PR, C::PR));
      detail::claim(out,
                    "tc h PR forces g PR: tc.nontrivial(ANY,RPPR) = tc.nontrivial(PR,RPPR)",
                    nt(C::Any, C::RPPR), nt(C::PR, C::RPPR));
      detail::claim(out, "tc ORD trivial part = fp(ANY,RP) = phi(p-1)",
                    m.ord_trivial[idx(C::Any)], phi);
      break;
    }
  }
  return out;
}

// Claims linking FP, HA and TC at the same prime (nontrivial parts).
inline std::vector<ExactClaim> cross_claims(const CountMatrix& fp, const CountMatrix& ha,
                                            const CountMatrix& tc) {
  using C = ConditionClass;
  if (fp.p != ha.p || fp.p != tc.p) throw InputError("cross_claims: matrices for different primes");
  std::vector<ExactClaim> out;
  auto H = [&](C r, C c) { return ha.get(ha.nontrivial, r, c); };
  auto T = [&](C r, C c) { return tc.get(tc.nontrivial, r, c); };

  std::size_t trivial_mismatch = 0;
  for (auto r : kClasses)
    for (auto c : kClasses)
      if (tc.get(tc.trivial, r, c) != fp.get(fp.total, r, c)) ++trivial_mismatch;
  detail::claim(out, "tc trivial part = fp (mismatched cells)", trivial_mismatch, 0);

  detail::claim(out, "tc(ANY,RP) = ha(ANY,RP)", T(C::Any, C::RP), H(C::Any, C::RP));
  detail::claim(out, "tc(PR,RPPR) = ha(ANY,RPPR)", T(C::PR, C::RPPR), H(C::Any, C::RPPR));
  detail::claim(out, "tc(PR,RPPR) = ha(PR,RPPR)", T(C::PR, C::RPPR), H(C::PR, C::RPPR));
  detail::claim(out, "tc(PR,RPPR) = ha(RP,RPPR)", T(C::PR, C::RPPR), H(C::RP, C::RPPR));
  for (auto c : kClasses)
    detail::claim(out, "tc(PR,RPPR) = ha(RPPR," + detail::cls(c) + ")", T(C::PR, C::RPPR),
                  H(C::RPPR, c));
  detail::claim(out, "tc(PR,RP) = ha(PR,RP)", T(C::PR, C::RP), H(C::PR, C::RP));
  detail::claim(out, "tc(PR,PR) = ha(RP,PR)", T(C::PR, C::PR), H(C::RP, C::PR));
  detail::claim(out, "tc.ORD(ANY) = ha(RP,ANY)", tc.ord_nontrivial[idx(C::Any)], H(C::RP, C::Any));
  detail::claim(out, "tc.ORD(RP) = ha(RP,RP)", tc.ord_nontrivial[idx(C::RP)], H(C::RP, C::RP));
  return out;
}

inline std::vector<ExactClaim> completion_claims(const CompletionLaw& law, const CountMatrix& tc) {
  using C = ConditionClass;
  std::vector<ExactClaim> out;
  detail::claim(out, "sum of |completions| over nontrivial ha pairs = tc.nontrivial(ANY,ANY)",
                law.completion_sum, tc.get(tc.nontrivial, C::Any, C::Any));
  detail::claim(out, "pairs with gcd(h,a,p-1)=1 without exactly one completion",
                law.coprime_pairs_not_unique, 0);
  return out;
}

namespace detail {

inline ComparisonCell make_cell(std::string row, std::string col, Part part, u64 observed,
                                FormulaId id, std::optional<Rational> predicted) {
  ComparisonCell c{std::move(row), std::move(col), part, observed, id, std::move(predicted), {}};
  if (c.predicted && *c.predicted != 0) c.ratio = Rational(BigInt(observed)) / *c.predicted;
  return c;
}

inline std::optional<Rational> plus(const std::optional<Rational>& x, u64 exact) {
  if (!x) return std::nullopt;
  return *x + Rational(BigInt(exact));
}

}  // namespace detail

// `counts` supplies the exact HA trivial part; the TC trivial part is the
// observed FP count carried by the TC matrix.
inline ComparisonReport compare(const CountMatrix& observed, const PredictionMatrix& predicted,
                                const ClassCounts& counts) {
  if (observed.p != predicted.p || observed.equation != predicted.equation)
    throw InputError("compare: observed and predicted matrices differ in prime or equation");
  ComparisonReport rep;
  rep.p = observed.p;
  rep.equation = observed.equation;

  for (auto r : kClasses)
    for (auto c : kClasses) {
      const auto& pc = predicted.at(r, c);
      const std::string row = detail::cls(r), col = detail::cls(c);
      if (observed.equation == Equation::FP) {
        rep.cells.push_back(
            detail::make_cell(row, col, Part::Total, observed.get(observed.total, r, c), pc.id, pc.value));
        continue;
      }
      const u64 exact_trivial = observed.equation == Equation::HA ? counts.both(r, c)
                                                                  : observed.get(observed.trivial, r, c);
      rep.cells.push_back(detail::make_cell(row, col, Part::Nontrivial,
                                            observed.get(observed.nontrivial, r, c), pc.id, pc.value));
      rep.cells.push_back(detail::make_cell(row, col, Part::Trivial,
                                            observed.get(observed.trivial, r, c), FormulaId::NONE, {}));
      rep.cells.push_back(detail::make_cell(row, col, Part::Total, observed.get(observed.total, r, c),
                                            pc.id, detail::plus(pc.value, exact_trivial)));
    }

  if (observed.equation == Equation::TC) {
    for (auto c : kClasses) {
      const auto& pc = predicted.ord_row[idx(c)];
      const std::string col = detail::cls(c);
      const std::string ord(kOrdRow), same(kSameOrderRow);
      rep.cells.push_back(detail::make_cell(ord, col, Part::Nontrivial,
                                            observed.ord_nontrivial[idx(c)], pc.id, pc.value));
      rep.cells.push_back(detail::make_cell(ord, col, Part::Trivial, observed.ord_trivial[idx(c)],
                                            FormulaId::NONE, {}));
      rep.cells.push_back(detail::make_cell(ord, col, Part::Total, observed.ord_total[idx(c)], pc.id,
                                            detail::plus(pc.value, observed.ord_trivial[idx(c)])));
      rep.cells.push_back(detail::make_cell(same, col, Part::Nontrivial,
                                            observed.same_order_nontrivial[idx(c)], FormulaId::NONE, {}));
      rep.cells.push_back(detail::make_cell(same, col, Part::Trivial,
                                            observed.same_order_trivial[idx(c)], FormulaId::NONE, {}));
      rep.cells.push_back(detail::make_cell(same, col, Part::Total, observed.same_order_total[idx(c)],
                                            FormulaId::NONE, {}));
    }
  }

  rep.claims = matrix_claims(observed, counts, euler_phi(factorize(observed.p - 1)));
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering

enum class Format : std::uint8_t { Text, Csv, Json };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::Text;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return std::nullopt;
}

struct RenderOptions {
  unsigned precision = 3;
};

inline constexpr std::string_view kCsvHeader =
    "p,equation,row_class,col_class,part,observed,predicted_num,predicted_den,ratio";

namespace detail {

inline std::string row_variable(Equation e) { return e == Equation::HA ? "a" : "g"; }

inline std::vector<std::string> report_rows(const ComparisonReport& rep) {
  std::vector<std::string> rows;
  for (auto c : kClasses) rows.push_back(cls(c));
  if (rep.equation == Equation::TC) {
    rows.emplace_back(kOrdRow);
    rows.emplace_back(kSameOrderRow);
  }
  return rows;
}

inline std::vector<Part> report_parts(Equation e) {
  if (e == Equation::FP) return {Part::Total};
  return {Part::Nontrivial, Part::Trivial, Part::Total};
}

template <typename CellText>
void text_table(std::ostream& os, const std::string& title, const std::string& corner,
                const std::vector<std::string>& rows, CellText&& text) {
  constexpr int w = 14;
  os << title << "\n";
  os << std::setw(9) << std::left << corner << std::right;
  for (auto c : kClasses) os << std::setw(w) << class_name(c);
  os << "\n";
  for (const auto& r : rows) {
    os << std::setw(9) << std::left << r << std::right;
    for (auto c : kClasses) os << std::setw(w) << text(r, cls(c));
    os << "\n";
  }
  os << "\n";
}

}  // namespace detail

inline std::string render_text(const ComparisonReport& rep, const RenderOptions& opt = {}) {
  std::ostringstream os;
  const std::string eq(equation_name(rep.equation));
  const std::string corner = detail::row_variable(rep.equation) + " \\ h";
  const auto rows = detail::report_rows(rep);
  os << "equation " << eq << ", p = " << rep.p << "\n\n";
  for (auto part : detail::report_parts(rep.equation)) {
    const std::string pn(part_name(part));
    detail::text_table(os, "observed " + pn, corner, rows, [&](const std::string& r, const std::string& c) {
      const auto* cell = rep.find(r, c, part);
      return cell ? std::to_string(cell->observed) : std::string("-");
    });
    if (part == Part::Trivial) continue;
    detail::text_table(os, "predicted " + pn, corner, rows, [&](const std::string& r, const std::string& c) {
      const auto* cell = rep.find(r, c, part);
      return cell && cell->predicted ? to_decimal(*cell->predicted, opt.precision) : std::string("-");
    });
    detail::text_table(os, "ratio observed/predicted " + pn, corner, rows,
                       [&](const std::string& r, const std::string& c) {
                         const auto* cell = rep.find(r, c, part);
                         return cell && cell->ratio ? to_decimal(*cell->ratio, opt.precision)
                                                    : std::string("-");
                       });
  }
  os << "exact claims\n";
  for (const auto& c : rep.claims) {
    os << (c.pass() ? "  [ok]   " : "  [FAIL] ") << c.name << ": " << c.lhs
       << (c.pass() ? " = " : " != ") << c.rhs << "\n";
  }
  return os.str();
}

inline std::string render_csv(const ComparisonReport& rep, const RenderOptions& opt = {}) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& c : rep.cells) {
    os << rep.p << ',' << equation_name(rep.equation) << ',' << c.row << ',' << c.col << ','
       << part_name(c.part) << ',' << c.observed << ',';
    if (c.predicted)
      os << boost::multiprecision::numerator(*c.predicted) << ','
         << boost::multiprecision::denominator(*c.predicted);
    else
      os << ',';
    os << ',';
    if (c.ratio) os << to_decimal(*c.ratio, opt.precision);
    os << "\n";
  }
  return os.str();
}

inline nlohmann::ordered_json report_json(const ComparisonReport& rep, const RenderOptions& opt = {}) {
  nlohmann::ordered_json j;
  j["p"] = rep.p;
  j["equation"] = equation_name(rep.equation);
  j["precision"] = opt.precision;
  auto& parts = j["matrices"];
  for (auto part : detail::report_parts(rep.equation)) {
    auto& pj = parts[std::string(part_name(part))];
    for (const auto& row : detail::report_rows(rep))
      for (auto c : kClasses) {
        const auto* cell = rep.find(row, class_name(c), part);
        if (!cell) continue;
        nlohmann::ordered_json cj;
        cj["observed"] = cell->observed;
        cj["formula"] = formula_name(cell->formula);
        if (cell->predicted) {
          cj["predicted_num"] = boost::multiprecision::numerator(*cell->predicted).str();
          cj["predicted_den"] = boost::multiprecision::denominator(*cell->predicted).str();
          cj["predicted"] = to_decimal(*cell->predicted, opt.precision);
        } else {
          cj["predicted_num"] = nullptr;
          cj["predicted_den"] = nullptr;
          cj["predicted"] = nullptr;
        }
        cj["ratio"] = cell->ratio ? nlohmann::ordered_json(to_decimal(*cell->ratio, opt.precision))
                                  : nlohmann::ordered_json(nullptr);
        pj[row][std::string(class_name(c))] = std::move(cj);
      }
  }
  auto& claims = j["claims"];
  claims = nlohmann::ordered_json::array();
  for (const auto& c : rep.claims)
    claims.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass()}});
  return j;
}

inline std::string render(const ComparisonReport& rep, Format format, const RenderOptions& opt = {}) {
  switch (format) {
    case Format::Text: return render_text(rep, opt);
    case Format::Csv: return render_csv(rep, opt);
    case Format::Json: return report_json(rep, opt).dump(2) + "\n";
  }
  throw InputError("render: unknown format");
}

// Observed matrices alone, for `count`. The JSON form doubles as the
// canonical serialization used by determinism checks.
inline nlohmann::ordered_json counts_json(const CountMatrix& m) {
  nlohmann::ordered_json j;
  j["p"] = m.p;
  j["equation"] = equation_name(m.equation);
  auto grid = [](const ClassGrid& g) {
    nlohmann::ordered_json out;
    for (auto r : kClasses)
      for (auto c : kClasses) out[detail::cls(r)][detail::cls(c)] = g[idx(r)][idx(c)];
    return out;
  };
  auto row = [](const ClassRow& v) {
    nlohmann::ordered_json out;
    for (auto c : kClasses) out[detail::cls(c)] = v[idx(c)];
    return out;
  };
  j["trivial"] = grid(m.trivial);
  j["nontrivial"] = grid(m.nontrivial);
  j["total"] = grid(m.total);
  if (m.equation == Equation::TC) {
    j["ord"] = {{"trivial", row(m.ord_trivial)},
                {"nontrivial", row(m.ord_nontrivial)},
                {"total", row(m.ord_total)}};
    j["same_order"] = {{"trivial", row(m.same_order_trivial)},
                       {"nontrivial", row(m.same_order_nontrivial)},
                       {"total", row(m.same_order_total)}};
  }
  return j;
}

inline std::string render_counts(const CountMatrix& m, Format format) {
  const auto parts = m.equation == Equation::FP ? std::vector<Part>{Part::Total} : detail::report_parts(m.equation);
  auto grid_of = [&](Part part) -> const ClassGrid& {
    return part == Part::Total ? m.total : part == Part::Trivial ? m.trivial : m.nontrivial;
  };
  auto row_of = [&](Part part, bool same) -> const ClassRow& {
    if (same) return part == Part::Total ? m.same_order_total : part == Part::Trivial ? m.same_order_trivial : m.same_order_nontrivial;
    return part == Part::Total ? m.ord_total : part == Part::Trivial ? m.ord_trivial : m.ord_nontrivial;
  };
  std::vector<std::string> rows;
  for (auto c : kClasses) rows.push_back(detail::cls(c));
  if (m.equation == Equation::TC) {
    rows.emplace_back(kOrdRow);
    rows.emplace_back(kSameOrderRow);
  }
  auto value = [&](Part part, const std::string& r, ConditionClass c) -> u64 {
    if (r == kOrdRow) return row_of(part, false)[idx(c)];
    if (r == kSameOrderRow) return row_of(part, true)[idx(c)];
    return grid_of(part)[idx(*parse_class(r))][idx(c)];
  };

  std::ostringstream os;
  switch (format) {
    case Format::Json: return counts_json(m).dump(2) + "\n";
    case Format::Csv:
      os << "p,equation,row_class,col_class,part,observed\n";
      for (auto part : parts)
        for (const auto& r : rows)
          for (auto c : kClasses)
            os << m.p << ',' << equation_name(m.equation) << ',' << r << ',' << class_name(c) << ','
               << part_name(part) << ',' << value(part, r, c) << "\n";
      return os.str();
    case Format::Text:
      os << "equation " << equation_name(m.equation) << ", p = " << m.p << "\n\n";
      for (auto part : parts)
        detail::text_table(os, "observed " + std::string(part_name(part)),
                           detail::row_variable(m.equation) + " \\ h", rows,
                           [&](const std::string& r, const std::string& c) {
                             return std::to_string(value(part, r, *parse_class(c)));
                           });
      return os.str();
  }
  throw InputError("render: unknown format");
}

inline std::string render_prediction(const PredictionMatrix& m, Format format,
                                     const RenderOptions& opt = {}) {
  std::vector<std::string> rows;
  for (auto c : kClasses) rows.push_back(detail::cls(c));
  if (m.equation == Equation::TC) rows.emplace_back(kOrdRow);
  auto cell = [&](const std::string& r, ConditionClass c) -> const PredictionCell& {
    if (r == kOrdRow) return m.ord_row[idx(c)];
    return m.grid[idx(*parse_class(r))][idx(c)];
  };
  const std::string part = m.equation == Equation::FP ? "total" : "nontrivial";
  std::ostringstream os;
  switch (format) {
    case Format::Json: {
      nlohmann::ordered_json j;
      j["p"] = m.p;
      j["equation"] = equation_name(m.equation);
      j["part"] = part;
      j["precision"] = opt.precision;
      for (const auto& r : rows)
        for (auto c : kClasses) {
          const auto& pc = cell(r, c);
          nlohmann::ordered_json cj;
          cj["formula"] = formula_name(pc.id);
          if (pc.value) {
            cj["predicted_num"] = boost::multiprecision::numerator(*pc.value).str();
            cj["predicted_den"] = boost::multiprecision::denominator(*pc.value).str();
            cj["predicted"] = to_decimal(*pc.value, opt.precision);
          } else {
            cj["predicted_num"] = nullptr;
            cj["predicted_den"] = nullptr;
            cj["predicted"] = nullptr;
          }
          j["predicted"][r][detail::cls(c)] = std::move(cj);
        }
      return j.dump(2) + "\n";
    }
    case Format::Csv:
      os << "p,equation,row_class,col_class,part,formula,predicted_num,predicted_den,predicted\n";
      for (const auto& r : rows)
        for (auto c : kClasses) {
          const auto& pc = cell(r, c);
          os << m.p << ',' << equation_name(m.equation) << ',' << r << ',' << class_name(c) << ','
             << part << ',' << formula_name(pc.id) << ',';
          if (pc.value)
            os << boost::multiprecision::numerator(*pc.value) << ','
               << boost::multiprecision::denominator(*pc.value) << ','
               << to_decimal(*pc.value, opt.precision);
          else
            os << ",,";
          os << "\n";
        }
      return os.str();
    case Format::Text:
      os << "equation " << equation_name(m.equation) << ", p = " << m.p << "\n\n";
      detail::text_table(os, "predicted " + part, detail::row_variable(m.equation) + " \\ h", rows,
                         [&](const std::string& r, const std::string& c) {
                           const auto& pc = cell(r, *parse_class(c));
                           return pc.value ? to_decimal(*pc.value, opt.precision) : std::string("-");
                         });
      detail::text_table(os, "formulas", detail::row_variable(m.equation) + " \\ h", rows,
                         [&](const std::string& r, const std::string& c) {
                           return std::string(formula_name(cell(r, *parse_class(c)).id));
                         });
      return os.str();
  }
  throw InputError("render: unknown format");
}

// ---------------------------------------------------------------------------
// Persistence: one JSON object per line.

inline constexpr int kSchemaVersion = 1;

struct ResultRecord {
  int schema_version = kSchemaVersion;
  u64 p = 0;
  std::string equation;
  std::string part;
  std::string row_class;
  std::string col_class;
  u64 observed = 0;
  std::optional<std::string> predicted_num;
  std::optional<std::string> predicted_den;
  std::string timestamp;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

class RecordError : public InputError {
 public:
  RecordError(const std::string& path, std::size_t line, const std::string& why)
      : InputError(path + ":" + std::to_string(line) + ": " + why), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::vector<ResultRecord> records_from_report(const ComparisonReport& rep,
                                                     const std::string& timestamp) {
  std::vector<ResultRecord> out;
  out.reserve(rep.cells.size());
  for (const auto& c : rep.cells) {
    ResultRecord r;
    r.p = rep.p;
    r.equation = equation_name(rep.equation);
    r.part = part_name(c.part);
    r.row_class = c.row;
    r.col_class = c.col;
    r.observed = c.observed;
    if (c.predicted) {
      r.predicted_num = boost::multiprecision::numerator(*c.predicted).str();
      r.predicted_den = boost::multiprecision::denominator(*c.predicted).str();
    }
    r.timestamp = timestamp;
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = r.schema_version;
  j["p"] = r.p;
  j["equation"] = r.equation;
  j["part"] = r.part;
  j["row_class"] = r.row_class;
  j["col_class"] = r.col_class;
  j["observed"] = r.observed;
  j["predicted_num"] = r.predicted_num ? nlohmann::ordered_json(*r.predicted_num) : nlohmann::ordered_json(nullptr);
  j["predicted_den"] = r.predicted_den ? nlohmann::ordered_json(*r.predicted_den) : nlohmann::ordered_json(nullptr);
  j["timestamp"] = r.timestamp;
  return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion)
    throw std::runtime_error("unknown schema_version " + std::to_string(r.schema_version));
  r.p = j.at("p").get<u64>();
  r.equation = j.at("equation").get<std::string>();
  r.part = j.at("part").get<std::string>();
  r.row_class = j.at("row_class").get<std::string>();
  r.col_class = j.at("col_class").get<std::string>();
  r.observed = j.at("observed").get<u64>();
  auto opt = [&](const char* key) -> std::optional<std::string> {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<std::string>();
  };
  r.predicted_num = opt("predicted_num");
  r.predicted_den = opt("predicted_den");
  if (r.predicted_num.has_value() != r.predicted_den.has_value())
    throw std::runtime_error("predicted_num and predicted_den must both be present or both null");
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

inline void append_records(const std::string& path, const std::vector<ResultRecord>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw InputError("cannot open " + path + " for appending");
  for (const auto& r : records) out << to_json(r).dump() << "\n";
  out.flush();
  if (!out) throw InputError("write to " + path + " failed");
}

inline std::vector<ResultRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path + " for reading");
  std::vector<ResultRecord> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw RecordError(path, no, e.what());
    }
  }
  if (in.bad()) throw InputError("read from " + path + " failed");
  return out;
}

}  // namespace dlc
