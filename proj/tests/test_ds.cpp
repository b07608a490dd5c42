#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "qsm/ds.hpp"
#include "qsm/selftest.hpp"

namespace {

using namespace qsm;

std::string random_string(Rng& rng, std::size_t len, unsigned sigma) {
  std::string s(len, 'a');
  for (char& c : s) c = static_cast<char>('a' + rng.index(sigma));
  return s;
}

std::size_t ceil_log2(std::size_t x) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < x) ++k;
  return k;
}

bool has_period(const std::string& p, std::size_t v) {
  for (std::size_t i = 0; i + v < p.size(); ++i)
    if (p[i] != p[i + v]) return false;
  return true;
}

TEST(Classical, WorkedExample) {
  const Preprocessing pre = build_ds_classical("aabb");
  ASSERT_TRUE(std::holds_alternative<DeterministicSample>(pre));
  const auto& ds = std::get<DeterministicSample>(pre);
  EXPECT_EQ(ds.focal, 1u);
  EXPECT_EQ(ds.points, (std::vector<SamplePoint>{{2, 'b'}}));
  EXPECT_EQ(ds.built_from, SampleSource::classical);
}

TEST(Classical, PeriodicPatterns) {
  for (const char* p : {"abab", "aaaa", "abcabcab", "aabaabaab"}) {
    const Preprocessing pre = build_ds_classical(p);
    ASSERT_TRUE(is_periodic(pre)) << p;
    const auto& info = std::get<PeriodInfo>(pre);
    EXPECT_EQ(info.period, detect_period_classical(p).period) << p;
    ASSERT_TRUE(info.partial_sample.has_value());
  }
  EXPECT_EQ(std::get<PeriodInfo>(build_ds_classical("abab")).period, 2u);
}

TEST(Classical, ShortPatterns) {
  EXPECT_THROW(build_ds_classical(""), std::invalid_argument);
  const auto one = std::get<DeterministicSample>(build_ds_classical("a"));
  EXPECT_TRUE(one.points.empty());
  EXPECT_TRUE(verify_ds_property("ab", std::get<DeterministicSample>(build_ds_classical("ab"))));
}

TEST(Classical, ExhaustiveBinaryUpTo10) {
  const auto r = check_ds_exhaustive(10);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Classical, RandomPatternsSatisfyPropertyAndSize) {
  Rng rng(3);
  for (int it = 0; it < 400; ++it) {
    const std::size_t m = 2 + rng.index(200);
    const std::string p = random_string(rng, m, 2 + it % 4);
    const Preprocessing pre = build_ds_classical(p);
    if (is_periodic(pre)) {
      EXPECT_TRUE(has_period(p, std::get<PeriodInfo>(pre).period));
      continue;
    }
    const auto& ds = std::get<DeterministicSample>(pre);
    EXPECT_TRUE(verify_ds_property(p, ds)) << p;
    EXPECT_LE(ds.points.size(), std::max<std::size_t>(1, ceil_log2(num_copies(m)))) << p;
  }
}

TEST(Columns, StabbingRange) {
  const ColumnRange r = stabbing_range(8, 2, 4);
  EXPECT_EQ(r.first, 3u);
  EXPECT_EQ(r.last, 8u);
  EXPECT_EQ(r.width(), 6u);
  EXPECT_THROW(stabbing_range(8, 0, 2), std::invalid_argument);
  EXPECT_THROW(stabbing_range(8, 3, 2), std::invalid_argument);
  EXPECT_THROW(stabbing_range(8, 1, 9), std::invalid_argument);
}

TEST(Columns, ConsistencyOracle) {
  QueryLedger ledger;
  EXPECT_FALSE(consistency_oracle("aabb", {{2, 'b'}}, 2, ledger));
  EXPECT_TRUE(consistency_oracle("aabb", {{2, 'b'}}, 1, ledger));
  EXPECT_EQ(ledger.total(), 2u);
  EXPECT_TRUE(consistency_oracle("aabb", {}, 2, ledger));
  EXPECT_EQ(ledger.total(), 2u);
  EXPECT_THROW(consistency_oracle("aabb", {}, 3, ledger), std::invalid_argument);
  EXPECT_THROW(consistency_oracle("aabb", {}, 0, ledger), std::invalid_argument);
}

TEST(Columns, FrameTranslation) {
  const auto ds = sample_from_columns({{3, 'x'}, {5, 'y'}}, 3, SampleSource::quantum_sim);
  EXPECT_EQ(ds.focal, 3u);
  EXPECT_EQ(ds.points, (std::vector<SamplePoint>{{1, 'x'}, {3, 'y'}}));
  EXPECT_THROW(sample_from_columns({{0, 'x'}}, 2, SampleSource::quantum_sim), MalformedSample);
}

TEST(Quantum, SoundOnAperiodicPatterns) {
  Rng gen(4);
  int built = 0, missed = 0, total = 0;
  for (int it = 0; it < 150; ++it) {
    const std::size_t m = 8 + gen.index(120);
    const std::string p = random_string(gen, m, 2 + it % 3);
    if (is_periodic(build_ds_classical(p))) continue;
    ++total;
    Rng rng(derive_seed(5, it));
    QueryLedger ledger;
    const auto pre = build_ds_quantum(p, rng, ledger);
    EXPECT_GT(ledger.total(), 0u);
    if (!pre) {
      ++missed;
      continue;
    }
    ASSERT_TRUE(std::holds_alternative<DeterministicSample>(*pre)) << p;
    const auto& ds = std::get<DeterministicSample>(*pre);
    EXPECT_EQ(ds.built_from, SampleSource::quantum_sim);
    EXPECT_TRUE(verify_ds_property(p, ds)) << p;
    ++built;
  }
  EXPECT_GE(built, total * 9 / 10);
}

TEST(Quantum, PeriodicPatternsReportAPeriod) {
  Rng gen(6);
  int reported = 0, separable = 0, total = 0;
  for (int it = 0; it < 60; ++it) {
    const std::size_t v = 1 + gen.index(6);
    const std::string word = random_string(gen, v, 2 + it % 3);
    const std::size_t m = 2 * v + 2 + gen.index(60);
    std::string p;
    for (std::size_t i = 0; i < m; ++i) p += word[i % v];
    const std::size_t truth = detect_period_classical(p).period;
    if (2 * truth >= m) continue;
    ++total;
    Rng rng(derive_seed(7, it));
    QueryLedger ledger;
    const auto pre = build_ds_quantum(p, rng, ledger);
    if (!pre) continue;
    if (const auto* ds = std::get_if<DeterministicSample>(&*pre)) {
      // Possible only when the period's shift leaves some copy separable.
      EXPECT_TRUE(verify_ds_property(p, *ds)) << p;
      EXPECT_GT(truth + 1, num_copies(m) / 2) << p;
      ++separable;
      continue;
    }
    const auto& info = std::get<PeriodInfo>(*pre);
    EXPECT_TRUE(has_period(p, info.period)) << p << " " << info.period;
    reported += info.period == truth;
  }
  EXPECT_GE(reported + separable, total * 9 / 10);
  EXPECT_GE(reported, total / 2);
}

TEST(Quantum, Deterministic) {
  const std::string p = "abbabaababbbabaabbbaabab";
  Rng a(11), b(11);
  QueryLedger la, lb;
  const auto x = build_ds_quantum(p, a, la), y = build_ds_quantum(p, b, lb);
  EXPECT_EQ(la.total(), lb.total());
  ASSERT_EQ(x.has_value(), y.has_value());
  EXPECT_THROW(build_ds_quantum("a", a, la), std::invalid_argument);
}

}  // namespace
