#include <gtest/gtest.h>

#include <numeric>

#include "dlcensus/census.hpp"
#include "dlcensus/oracle.hpp"
#include "dlcensus/report.hpp"

using namespace dlc;
using C = ConditionClass;

namespace {

u64 at(const ClassGrid& g, C r, C c) { return g[idx(r)][idx(c)]; }

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  for (u64 p = 2; p <= limit; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

}  // namespace

TEST(CountFp, SmallPrimes) {
  const auto five = count_fp(build_tables(5));
  EXPECT_EQ(at(five.total, C::Any, C::Any), 2u);
  EXPECT_EQ(at(five.total, C::Any, C::RP), 2u);

  const auto seven = count_fp(build_tables(7));
  EXPECT_EQ(at(seven.total, C::Any, C::Any), 6u);
  EXPECT_EQ(at(seven.total, C::Any, C::PR), 1u);
  EXPECT_EQ(at(seven.total, C::PR, C::PR), 1u);
  for (auto r : kClasses)
    for (auto c : kClasses) EXPECT_EQ(at(seven.trivial, r, c), 0u);
  EXPECT_EQ(seven.total, seven.nontrivial);
}

TEST(CountFp, ReferencePrime) {
  const auto m = count_fp(build_tables(100057));
  EXPECT_EQ(at(m.total, C::Any, C::Any), 98506u);
  EXPECT_EQ(at(m.total, C::PR, C::Any), 29630u);
  EXPECT_EQ(at(m.total, C::Any, C::RP), 30240u);
  EXPECT_EQ(at(m.total, C::RPPR, C::RPPR), 2784u);
}

TEST(HaBuckets, SmallPrimes) {
  auto groups = [](u64 p) {
    const auto t = build_tables(p);
    const auto b = build_ha_buckets(t);
    std::vector<std::vector<u64>> out;
    u64 total = 0;
    for (const auto& bucket : b.buckets) {
      auto m = b.bucket_members(bucket);
      out.emplace_back(m.begin(), m.end());
      total += bucket.size();
    }
    EXPECT_EQ(total, t.n());
    std::sort(out.begin(), out.end());
    return out;
  };
  using V = std::vector<std::vector<u64>>;
  EXPECT_EQ(groups(7), (V{{1, 6}, {2, 4}, {3}, {5}}));
  EXPECT_EQ(groups(5), (V{{1, 4}, {2}, {3}}));
  EXPECT_EQ(groups(2), (V{{1}}));
}

TEST(HaBuckets, KeyEqualityIsTheEquation) {
  for (u64 p : {11u, 31u, 97u}) {
    const auto t = build_tables(p);
    const auto b = build_ha_buckets(t);
    for (u64 h = 1; h < p; ++h)
      for (u64 a = 1; a < p; ++a)
        ASSERT_EQ(b.key[h] == b.key[a], mod_pow(h, h, p) == mod_pow(a, a, p));
  }
}

TEST(CountHa, SmallPrimes) {
  const auto seven = build_tables(7);
  const auto m = count_ha(build_ha_buckets(seven), seven);
  EXPECT_EQ(at(m.nontrivial, C::Any, C::Any), 4u);
  EXPECT_EQ(at(m.trivial, C::Any, C::Any), 6u);

  const auto two = build_tables(2);
  const auto m2 = count_ha(build_ha_buckets(two), two);
  EXPECT_EQ(at(m2.trivial, C::Any, C::Any), 1u);
  EXPECT_EQ(at(m2.nontrivial, C::Any, C::Any), 0u);
}

TEST(CountHa, ReferencePrime) {
  const auto t = build_tables(100057);
  const auto m = count_ha(build_ha_buckets(t), t);
  EXPECT_EQ(at(m.nontrivial, C::Any, C::Any), 190526u);
  EXPECT_EQ(at(m.nontrivial, C::Any, C::PR), 30226u);
  EXPECT_EQ(at(m.nontrivial, C::RP, C::RP), 9086u);
  EXPECT_EQ(at(m.nontrivial, C::RPPR, C::RPPR), 2820u);
}

TEST(Completions, Examples) {
  const auto t = build_tables(7);
  EXPECT_EQ(completions(2, 4, t), (std::vector<u64>{2, 5}));
  EXPECT_EQ(completions(1, 6, t), (std::vector<u64>{6}));
  EXPECT_TRUE(completions(3, 5, t).empty());
  EXPECT_THROW(completions(0, 1, t), InputError);
}

TEST(Completions, MatchBruteForce) {
  for (u64 p : {13u, 31u, 61u}) {
    const auto t = build_tables(p);
    for (u64 h = 1; h < p; ++h)
      for (u64 a = 1; a < p; ++a) {
        std::vector<u64> brute;
        for (u64 g = 1; g < p; ++g)
          if (mod_pow(g, h, p) == a && mod_pow(g, a, p) == h) brute.push_back(g);
        ASSERT_EQ(completions(h, a, t), brute) << p << " " << h << " " << a;
      }
  }
}

TEST(CountTc, SmallPrimes) {
  for (u64 p : {5u, 7u}) {
    const auto t = build_tables(p);
    const auto fp = count_fp(t);
    const auto m = count_tc(build_ha_buckets(t), t, fp);
    EXPECT_EQ(at(m.nontrivial, C::Any, C::Any), p == 5 ? 2u : 6u);
    EXPECT_EQ(m.trivial, fp.total);
  }
  const auto five = build_tables(5);
  EXPECT_EQ(at(count_tc(build_ha_buckets(five), five, count_fp(five)).trivial, C::Any, C::Any), 2u);
}

TEST(CountTc, RejectsForeignFpMatrix) {
  const auto t = build_tables(7);
  const auto other = count_fp(build_tables(11));
  EXPECT_THROW(count_tc(build_ha_buckets(t), t, other), InputError);
  auto forged = count_fp(t);
  forged.total[0][0] += 1;
  EXPECT_THROW(count_tc(build_ha_buckets(t), t, forged), InvariantViolation);
}

TEST(CountTc, ReferencePrime) {
  const auto t = build_tables(100057);
  const auto m = count_tc(build_ha_buckets(t), t, count_fp(t));
  EXPECT_EQ(at(m.nontrivial, C::Any, C::Any), 100860u);
  EXPECT_EQ(at(m.nontrivial, C::PR, C::Any), 30850u);
  EXPECT_EQ(at(m.nontrivial, C::RP, C::RPPR), 916u);
}

TEST(CensusAll, TinyPrimes) {
  const auto three = census_all(3);
  EXPECT_EQ(at(three.fp.total, C::Any, C::Any), 1u);
  EXPECT_EQ(at(three.tc.trivial, C::Any, C::Any), 1u);
  EXPECT_EQ(at(three.tc.nontrivial, C::Any, C::Any), 2u);
  EXPECT_THROW(census_all(4), InputError);
  EXPECT_THROW(census_all(7, 0), InputError);
}

TEST(CensusAll, WorkerCountDoesNotChangeResult) {
  for (u64 p : {2u, 3u, 101u, 7919u}) {
    const auto one = census_all(p, 1);
    for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(census_all(p, w), one) << p << " workers " << w;
  }
}

TEST(CensusAll, EqualsOracleForAllPrimesUpTo311) {
  for (u64 p : primes_up_to(311)) {
    const auto c = census_all(p);
    ASSERT_EQ(c.fp, oracle::oracle_fp(p)) << p;
    ASSERT_EQ(c.ha, oracle::oracle_ha(p)) << p;
    ASSERT_EQ(c.tc, oracle::oracle_tc(p)) << p;
  }
}

// Exact claims that hold for every prime, written out directly rather than
// through the report module.
TEST(CensusInvariants, HoldForAllPrimesUpTo311) {
  for (u64 p : primes_up_to(311)) {
    const auto t = build_tables(p);
    const auto c = census_all(t);
    const auto& fp = c.fp.total;
    const auto& ha = c.ha;
    const auto& tc = c.tc.nontrivial;
    SCOPED_TRACE(p);

    EXPECT_EQ(at(fp, C::Any, C::RP), t.phi());
    EXPECT_EQ(at(fp, C::Any, C::PR), at(fp, C::PR, C::PR));
    EXPECT_EQ(at(fp, C::RP, C::PR), at(fp, C::RPPR, C::PR));
    EXPECT_EQ(at(tc, C::Any, C::PR), at(tc, C::PR, C::PR));
    EXPECT_EQ(at(tc, C::Any, C::RPPR), at(tc, C::PR, C::RPPR));

    for (const auto* g : {&ha.trivial, &ha.nontrivial, &ha.total})
      for (auto r : kClasses)
        for (auto col : kClasses) EXPECT_EQ(at(*g, r, col), at(*g, col, r));
    for (auto col : kClasses)
      EXPECT_EQ(at(ha.nontrivial, C::RPPR, col), at(ha.nontrivial, C::RPPR, C::RPPR));

    const auto& hn = ha.nontrivial;
    EXPECT_EQ(at(tc, C::Any, C::RP), at(hn, C::Any, C::RP));
    for (auto r : {C::Any, C::PR, C::RP}) EXPECT_EQ(at(tc, C::PR, C::RPPR), at(hn, r, C::RPPR));
    for (auto col : kClasses) EXPECT_EQ(at(tc, C::PR, C::RPPR), at(hn, C::RPPR, col));
    EXPECT_EQ(at(tc, C::PR, C::RP), at(hn, C::PR, C::RP));
    EXPECT_EQ(at(tc, C::PR, C::PR), at(hn, C::RP, C::PR));
    EXPECT_EQ(c.tc.ord_nontrivial[idx(C::Any)], at(hn, C::RP, C::Any));
    EXPECT_EQ(c.tc.ord_nontrivial[idx(C::RP)], at(hn, C::RP, C::RP));

    const auto law = completion_law(build_ha_buckets(t), t);
    EXPECT_EQ(law.completion_sum, at(tc, C::Any, C::Any));
    EXPECT_EQ(law.coprime_pairs_not_unique, 0u);
  }
}

TEST(CensusInvariants, SameOrderIsWeakerThanOrd) {
  for (u64 p : primes_up_to(311)) {
    const auto c = census_all(p);
    for (auto col : kClasses) {
      EXPECT_GE(c.tc.same_order_nontrivial[idx(col)], c.tc.ord_nontrivial[idx(col)]);
      EXPECT_GE(c.tc.same_order_trivial[idx(col)], c.tc.ord_trivial[idx(col)]);
    }
  }
}

TEST(CensusInvariants, MonotoneInBothClassArguments) {
  const std::array<std::pair<C, C>, 4> inclusions = {
      {{C::Any, C::PR}, {C::Any, C::RP}, {C::PR, C::RPPR}, {C::RP, C::RPPR}}};
  for (u64 p : {97u, 211u, 311u}) {
    const auto c = census_all(p);
    for (const auto* m : {&c.fp, &c.ha, &c.tc})
      for (const auto* g : {&m->trivial, &m->nontrivial, &m->total})
        for (auto [big, small] : inclusions)
          for (auto other : kClasses) {
            EXPECT_GE(at(*g, big, other), at(*g, small, other));
            EXPECT_GE(at(*g, other, big), at(*g, other, small));
          }
  }
}
