#pragma once
//
// census.hpp
//
// Exact solution counts, classified by condition class, for
//
//   FP:  g^h == h              (mod p)   over pairs (g, h)
//   HA:  h^h == a^a            (mod p)   over ordered pairs (h, a)
//   TC:  g^h == a, g^a == h    (mod p)   over pairs (g, h), a = g^h
//
// Everything runs in index form. With g = root^u and x = root^ind(x):
//
//   FP:  h*u == ind(h)                      (mod n)
//   HA:  key(h) == key(a), key(x) = x*ind(x) (mod n)
//   TC:  h*u == ind(a) and a*u == ind(h)    (mod n)
//
// FP costs sum_h gcd(h, n); HA is a bucket sort on key; TC nontrivial walks
// the ordered pairs of every HA bucket and intersects two progressions.
//

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlcensus/errors.hpp"
#include "dlcensus/numtheory.hpp"
#include "dlcensus/parallel.hpp"
#include "dlcensus/residue_tables.hpp"

namespace dlc {

enum class Equation : std::uint8_t { FP, HA, TC };

inline constexpr std::string_view equation_name(Equation e) {
  switch (e) {
    case Equation::FP: return "fp";
    case Equation::HA: return "ha";
    case Equation::TC: return "tc";
  }
  return "?";
}

inline std::optional<Equation> parse_equation(std::string_view s) {
  for (auto e : {Equation::FP, Equation::HA, Equation::TC})
    if (equation_name(e) == s) return e;
  return std::nullopt;
}

// Rows are the class of g (FP, TC) or a (HA); columns are the class of h.
// TC only: ord_* are indexed by the class of h and count two-cycles in which
// h = g^a with gcd(a, p-1) = 1 (the ORD row); same_order_* count two-cycles
// with ord(g) = ord(h), a strictly weaker condition.
struct CountMatrix {
  Equation equation = Equation::FP;
  u64 p = 0;
  ClassGrid trivial{};
  ClassGrid nontrivial{};
  ClassGrid total{};
  ClassRow ord_trivial{};
  ClassRow ord_nontrivial{};
  ClassRow ord_total{};
  ClassRow same_order_trivial{};
  ClassRow same_order_nontrivial{};
  ClassRow same_order_total{};

  u64 get(const ClassGrid& g, ConditionClass row, ConditionClass col) const {
    return g[idx(row)][idx(col)];
  }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;
};

namespace detail {

struct Tally {
  KindGrid grid{};
  std::array<u64, 4> ord{};         // by kind of h
  std::array<u64, 4> same_order{};  // by kind of h

  Tally& operator+=(const Tally& o) {
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) grid[r][c] += o.grid[r][c];
    for (std::size_t k = 0; k < 4; ++k) {
      ord[k] += o.ord[k];
      same_order[k] += o.same_order[k];
    }
    return *this;
  }
};

// One solution (g, h) whose partner is a = g^h (a = h for FP).
inline void record(Tally& tally, const ResidueTables& t, u64 g, u64 h, u64 a) {
  ++tally.grid[t.kind(g)][t.kind(h)];
  if (t.is_rp(a)) ++tally.ord[t.kind(h)];
  if (t.ord(g) == t.ord(h)) ++tally.same_order[t.kind(h)];
}

// FP solutions with h in [first, last) (h = first+1 .. last).
inline Tally fp_tally(const ResidueTables& t, u64 first, u64 last) {
  Tally tally;
  const u64 n = t.n();
  for (u64 h = first + 1; h <= last; ++h) {
    const auto sol = solve_linear_congruence(h % n, t.ind(h), n);
    for (u64 k = 0; k < sol.count; ++k) record(tally, t, t.pow(sol.at(k)), h, h);
  }
  return tally;
}

// Calls f(g) for every g with g^h == a and g^a == h (mod p).
template <typename F>
void for_each_completion(const ResidueTables& t, u64 h, u64 a, F&& f) {
  const u64 n = t.n();
  const auto first = solve_linear_congruence(h % n, t.ind(a), n);
  if (!first.solvable()) return;
  const auto second = solve_linear_congruence(a % n, t.ind(h), n);
  const auto both = intersect_progressions(first, second, n);
  for (u64 k = 0; k < both.count; ++k) f(t.pow(both.at(k)));
}

inline ClassGrid subtract(const ClassGrid& a, const ClassGrid& b) {
  ClassGrid out{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      if (b[r][c] > a[r][c]) throw InvariantViolation("census: trivial part exceeds total");
      out[r][c] = a[r][c] - b[r][c];
    }
  return out;
}

inline ClassGrid add(const ClassGrid& a, const ClassGrid& b) {
  ClassGrid out{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out[r][c] = a[r][c] + b[r][c];
  return out;
}

inline ClassRow add(const ClassRow& a, const ClassRow& b) {
  ClassRow out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = a[k] + b[k];
  return out;
}

}  // namespace detail

inline CountMatrix count_fp(const ResidueTables& t, unsigned workers = 1) {
  const auto tally = parallel_fold<detail::Tally>(
      t.n(), workers, [&](std::size_t b, std::size_t e) { return detail::fp_tally(t, b, e); });
  CountMatrix m;
  m.equation = Equation::FP;
  m.p = t.p();
  m.nontrivial = fold_kinds(tally.grid);
  m.total = m.nontrivial;
  return m;
}

// Residues grouped by key(x) = x*ind(x) mod n, so that h^h == a^a exactly
// when h and a share a bucket. Members are sorted by (key, residue).
struct HaBuckets {
  struct Bucket {
    u64 key = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::array<std::uint32_t, 4> kinds{};  // member count per residue kind

    std::size_t size() const { return end - begin; }
  };

  std::vector<std::uint32_t> key;      // key[x], x in [1, p); key[0] unused
  std::vector<std::uint32_t> members;  // residues ordered by bucket
  std::vector<Bucket> buckets;         // non-empty buckets, ascending key

  std::span<const std::uint32_t> bucket_members(const Bucket& b) const {
    return std::span(members).subspan(b.begin, b.size());
  }
};

inline HaBuckets build_ha_buckets(const ResidueTables& t) {
  const u64 n = t.n();
  const u64 p = t.p();
  HaBuckets out;
  out.key.assign(p, 0);
  std::vector<std::uint32_t> start(n + 1, 0);
  for (u64 x = 1; x < p; ++x) {
    const auto k = static_cast<std::uint32_t>(mul_mod(x % n, t.ind(x), n));
    out.key[x] = k;
    ++start[k + 1];
  }
  for (u64 k = 0; k < n; ++k) start[k + 1] += start[k];

  out.members.resize(n);
  std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
  for (u64 x = 1; x < p; ++x) out.members[fill[out.key[x]]++] = static_cast<std::uint32_t>(x);

  for (u64 k = 0; k < n; ++k) {
    if (start[k] == start[k + 1]) continue;
    HaBuckets::Bucket b;
    b.key = k;
    b.begin = start[k];
    b.end = start[k + 1];
    for (auto x : out.bucket_members(b)) ++b.kinds[t.kind(x)];
    out.buckets.push_back(b);
  }
  return out;
}

inline CountMatrix count_ha(const HaBuckets& b, const ResidueTables& t, unsigned workers = 1) {
  const auto tally = parallel_fold<detail::Tally>(
      b.buckets.size(), workers, [&](std::size_t first, std::size_t last) {
        detail::Tally tl;
        for (std::size_t i = first; i < last; ++i) {
          const auto& c = b.buckets[i].kinds;
          for (Kind ka = 0; ka < 4; ++ka)
            for (Kind kh = 0; kh < 4; ++kh) tl.grid[ka][kh] += u64{c[ka]} * c[kh];
        }
        return tl;
      });
  CountMatrix m;
  m.equation = Equation::HA;
  m.p = t.p();
  m.total = fold_kinds(tally.grid);
  m.trivial = class_counts(t).intersection;
  m.nontrivial = detail::subtract(m.total, m.trivial);
  return m;
}

// All g with g^h == a and g^a == h (mod p), ascending.
inline std::vector<u64> completions(u64 h, u64 a, const ResidueTables& t) {
  if (h == 0 || h >= t.p() || a == 0 || a >= t.p())
    throw InputError("completions: residue out of range");
  std::vector<u64> out;
  detail::for_each_completion(t, h, a, [&](u64 g) { out.push_back(g); });
  std::sort(out.begin(), out.end());
  return out;
}

inline CountMatrix count_tc(const HaBuckets& b, const ResidueTables& t, const CountMatrix& fp,
                            unsigned workers = 1) {
  if (fp.equation != Equation::FP || fp.p != t.p())
    throw InputError("count_tc: fp matrix does not belong to p=" + std::to_string(t.p()));

  const auto nontrivial = parallel_fold<detail::Tally>(
      b.buckets.size(), workers, [&](std::size_t first, std::size_t last) {
        detail::Tally tl;
        for (std::size_t i = first; i < last; ++i) {
          const auto members = b.bucket_members(b.buckets[i]);
          for (auto h : members)
            for (auto a : members) {
              if (h == a) continue;
              detail::for_each_completion(t, h, a, [&](u64 g) { detail::record(tl, t, g, h, a); });
            }
        }
        return tl;
      });
  // a == h reduces to FP; its ORD tallies are not carried by the FP matrix.
  const auto trivial = parallel_fold<detail::Tally>(
      t.n(), workers, [&](std::size_t s, std::size_t e) { return detail::fp_tally(t, s, e); });
  if (fold_kinds(trivial.grid) != fp.total)
    throw InvariantViolation("count_tc: supplied fp matrix disagrees with recount");

  CountMatrix m;
  m.equation = Equation::TC;
  m.p = t.p();
  m.trivial = fp.total;
  m.nontrivial = fold_kinds(nontrivial.grid);
  m.total = detail::add(m.trivial, m.nontrivial);
  m.ord_trivial = fold_kinds(trivial.ord);
  m.ord_nontrivial = fold_kinds(nontrivial.ord);
  m.ord_total = detail::add(m.ord_trivial, m.ord_nontrivial);
  m.same_order_trivial = fold_kinds(trivial.same_order);
  m.same_order_nontrivial = fold_kinds(nontrivial.same_order);
  m.same_order_total = detail::add(m.same_order_trivial, m.same_order_nontrivial);
  return m;
}

struct Census {
  CountMatrix fp;
  CountMatrix ha;
  CountMatrix tc;

  friend bool operator==(const Census&, const Census&) = default;
};

inline Census census_all(const ResidueTables& t, unsigned workers = 1) {
  Census c;
  c.fp = count_fp(t, workers);
  const auto buckets = build_ha_buckets(t);
  c.ha = count_ha(buckets, t, workers);
  c.tc = count_tc(buckets, t, c.fp, workers);
  return c;
}

inline Census census_all(u64 p, unsigned workers = 1) {
  if (workers == 0) throw InputError("census_all: workers must be at least 1");
  return census_all(build_tables(p), workers);
}

// Sum of |completions(h, a)| over ordered nontrivial HA solutions, and how
// many pairs with gcd(h, a, n) = 1 failed to have exactly one completion.
struct CompletionLaw {
  u64 completion_sum = 0;
  u64 coprime_pairs = 0;
  u64 coprime_pairs_not_unique = 0;
  u64 pairs_with_multiple = 0;
};

inline CompletionLaw completion_law(const HaBuckets& b, const ResidueTables& t) {
  CompletionLaw law;
  for (const auto& bucket : b.buckets) {
    const auto members = b.bucket_members(bucket);
    for (auto h : members)
      for (auto a : members) {
        if (h == a) continue;
        const auto gs = completions(h, a, t);
        law.completion_sum += gs.size();
        if (gs.size() > 1) ++law.pairs_with_multiple;
        if (std::gcd(std::gcd(u64{h}, u64{a}), t.n()) == 1) {
          ++law.coprime_pairs;
          if (gs.size() != 1) ++law.coprime_pairs_not_unique;
        }
      }
  }
  return law;
}

}  // namespace dlc
