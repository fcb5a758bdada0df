#pragma once
//
// residue_tables.hpp
//
// Per-prime lookup tables: powers of the smallest primitive root, the
// discrete-log (index) table, multiplicative orders, and PR/RP flags.
// Residues are integers in [1, p-1], indices in [0, n-1] with n = p-1,
// pow[0] = 1. Entries are 32-bit, so p < 2^31; memory is 3 x 4 x p bytes
// plus one flag byte per residue.
//

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlcensus/errors.hpp"
#include "dlcensus/numtheory.hpp"

namespace dlc {

inline constexpr u64 kDefaultTableLimit = u64{1} << 31;

enum class ConditionClass : std::uint8_t { Any = 0, PR = 1, RP = 2, RPPR = 3 };

inline constexpr std::array<ConditionClass, 4> kClasses = {
    ConditionClass::Any, ConditionClass::PR, ConditionClass::RP, ConditionClass::RPPR};

inline constexpr std::string_view class_name(ConditionClass c) {
  switch (c) {
    case ConditionClass::Any: return "ANY";
    case ConditionClass::PR: return "PR";
    case ConditionClass::RP: return "RP";
    case ConditionClass::RPPR: return "RPPR";
  }
  return "?";
}

inline std::optional<ConditionClass> parse_class(std::string_view s) {
  for (auto c : kClasses)
    if (class_name(c) == s) return c;
  return std::nullopt;
}

// Every residue falls in exactly one of four kinds, encoded as the bit pair
// (PR, RP): 0 = neither, 1 = PR only, 2 = RP only, 3 = both. Condition
// classes are unions of kinds, so counting by kind and folding afterwards
// gives all 16 class pairs at once.
using Kind = std::uint8_t;
inline constexpr Kind kPRBit = 1;
inline constexpr Kind kRPBit = 2;

inline constexpr bool kind_in_class(Kind k, ConditionClass c) {
  switch (c) {
    case ConditionClass::Any: return true;
    case ConditionClass::PR: return (k & kPRBit) != 0;
    case ConditionClass::RP: return (k & kRPBit) != 0;
    case ConditionClass::RPPR: return k == (kPRBit | kRPBit);
  }
  return false;
}

inline constexpr std::size_t idx(ConditionClass c) { return static_cast<std::size_t>(c); }

using ClassRow = std::array<u64, 4>;
using ClassGrid = std::array<ClassRow, 4>;
using KindGrid = std::array<std::array<u64, 4>, 4>;

// Fold a kind-by-kind tally into the 4x4 grid of class pairs.
inline ClassGrid fold_kinds(const KindGrid& tally) {
  ClassGrid out{};
  for (auto row : kClasses)
    for (auto col : kClasses) {
      u64 sum = 0;
      for (Kind kr = 0; kr < 4; ++kr)
        for (Kind kc = 0; kc < 4; ++kc)
          if (kind_in_class(kr, row) && kind_in_class(kc, col)) sum += tally[kr][kc];
      out[idx(row)][idx(col)] = sum;
    }
  return out;
}

inline ClassRow fold_kinds(const std::array<u64, 4>& tally) {
  ClassRow out{};
  for (auto c : kClasses)
    for (Kind k = 0; k < 4; ++k)
      if (kind_in_class(k, c)) out[idx(c)] += tally[k];
  return out;
}

struct ClassMembership {
  bool any = true;
  bool pr = false;
  bool rp = false;
  bool rppr = false;

  bool contains(ConditionClass c) const {
    switch (c) {
      case ConditionClass::Any: return any;
      case ConditionClass::PR: return pr;
      case ConditionClass::RP: return rp;
      case ConditionClass::RPPR: return rppr;
    }
    return false;
  }
  friend bool operator==(const ClassMembership&, const ClassMembership&) = default;
};

class ResidueTables {
 public:
  ResidueTables(u64 p, u64 limit = kDefaultTableLimit) : p_(p) {
    if (p < 2 || p > limit || p >= kDefaultTableLimit)
      throw InputError("prime " + std::to_string(p) + " out of range [2, " +
                       std::to_string(std::min(limit, kDefaultTableLimit - 1)) + "]");
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    n_ = p - 1;
    factored_ = factorize(n_);
    phi_ = euler_phi(factored_);
    root_ = smallest_primitive_root(p, factored_);

    pow_.resize(n_);
    ind_.assign(p, 0);
    ord_.assign(p, 0);
    kind_.assign(p, 0);
    u64 x = 1;
    for (u64 k = 0; k < n_; ++k) {
      pow_[k] = static_cast<std::uint32_t>(x);
      ind_[x] = static_cast<std::uint32_t>(k);
      x = mul_mod(x, root_, p);
    }
    for (u64 r = 1; r < p; ++r) {
      const u64 ord = n_ / std::gcd(u64{ind_[r]}, n_);
      ord_[r] = static_cast<std::uint32_t>(ord);
      Kind k = 0;
      if (ord == n_) k |= kPRBit;
      if (std::gcd(r, n_) == 1) k |= kRPBit;
      kind_[r] = k;
    }
  }

  u64 p() const { return p_; }
  u64 n() const { return n_; }
  u64 root() const { return root_; }
  u64 phi() const { return phi_; }
  const Factored& factored() const { return factored_; }

  // root^k mod p, k in [0, n).
  u64 pow(u64 k) const { return pow_[k]; }
  // Discrete log of x to the base root, x in [1, p).
  u64 ind(u64 x) const { return ind_[x]; }
  u64 ord(u64 x) const { return ord_[x]; }
  Kind kind(u64 x) const { return kind_[x]; }
  bool is_pr(u64 x) const { return (kind_[x] & kPRBit) != 0; }
  bool is_rp(u64 x) const { return (kind_[x] & kRPBit) != 0; }

 private:
  u64 p_ = 0;
  u64 n_ = 0;
  u64 root_ = 0;
  u64 phi_ = 0;
  Factored factored_;
  std::vector<std::uint32_t> pow_;
  std::vector<std::uint32_t> ind_;
  std::vector<std::uint32_t> ord_;
  std::vector<Kind> kind_;
};

inline ResidueTables build_tables(u64 p, u64 limit = kDefaultTableLimit) {
  return ResidueTables(p, limit);
}

inline ClassMembership classify(u64 x, const ResidueTables& t) {
  if (x == 0 || x >= t.p()) throw InputError("classify: residue out of range");
  const bool pr = t.is_pr(x);
  const bool rp = t.is_rp(x);
  return {true, pr, rp, pr && rp};
}

// |X ∩ Y| for every pair of condition classes; the diagonal gives |X|.
struct ClassCounts {
  ClassGrid intersection{};

  u64 size(ConditionClass c) const { return intersection[idx(c)][idx(c)]; }
  u64 both(ConditionClass x, ConditionClass y) const { return intersection[idx(x)][idx(y)]; }
};

inline ClassCounts class_counts(const ResidueTables& t) {
  KindGrid diag{};
  for (u64 x = 1; x < t.p(); ++x) ++diag[t.kind(x)][t.kind(x)];
  return {fold_kinds(diag)};
}

}  // namespace dlc
