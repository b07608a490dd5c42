#include <gtest/gtest.h>

#include <string>

#include "qsm/ds.hpp"
#include "qsm/reference.hpp"
#include "qsm/rng.hpp"

namespace {

using namespace qsm;

PeriodInfo periodic(std::size_t v) {
  PeriodInfo p;
  p.classification = Periodicity::periodic;
  p.period = v;
  return p;
}

std::string random_string(Rng& rng, std::size_t len, unsigned sigma) {
  std::string s(len, 'a');
  for (char& c : s) c = static_cast<char>('a' + rng.index(sigma));
  return s;
}

TEST(Kmp, Examples) {
  EXPECT_EQ(kmp_all("aaaa", "aa"), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(kmp_all("abracadabra", "cad"), (std::vector<std::size_t>{4}));
  EXPECT_EQ(kmp_all("abracadabra", "abra"), (std::vector<std::size_t>{0, 7}));
  EXPECT_TRUE(kmp_all("ab", "abc").empty());
  EXPECT_THROW(kmp_all("abc", ""), std::invalid_argument);
}

TEST(Kmp, AgreesWithNaiveScan) {
  Rng rng(1);
  for (int it = 0; it < 300; ++it) {
    const std::string text = random_string(rng, 1 + rng.index(80), 2 + it % 3);
    const std::string pat = random_string(rng, 1 + rng.index(6), 2 + it % 3);
    std::vector<std::size_t> naive;
    for (std::size_t x = 0; x + pat.size() <= text.size(); ++x)
      if (text.compare(x, pat.size(), pat) == 0) naive.push_back(x);
    EXPECT_EQ(kmp_all(text, pat), naive);
  }
}

TEST(Period, Classical) {
  EXPECT_EQ(detect_period_classical("abab").period, 2u);
  EXPECT_EQ(detect_period_classical("aaaa").period, 1u);
  EXPECT_EQ(detect_period_classical("abcabcab").period, 3u);
  EXPECT_EQ(detect_period_classical("abc").classification, Periodicity::aperiodic);
  EXPECT_EQ(detect_period_classical("abcab").classification, Periodicity::aperiodic);
  EXPECT_EQ(detect_period_classical("a").classification, Periodicity::aperiodic);
  EXPECT_THROW(detect_period_classical(""), std::invalid_argument);
}

TEST(DsProperty, HandBuiltSamples) {
  DeterministicSample ds{1, {{2, 'b'}}, SampleSource::classical};
  EXPECT_TRUE(verify_ds_property("aabb", ds));
  EXPECT_TRUE(copy_consistent("aabb", ds, 1));
  EXPECT_FALSE(copy_consistent("aabb", ds, 2));
  DeterministicSample empty{1, {}, SampleSource::classical};
  EXPECT_FALSE(verify_ds_property("aabb", empty));
  // A single copy has nothing to separate.
  EXPECT_TRUE(verify_ds_property("ab", empty));
}

TEST(DsProperty, MalformedSamplesThrow) {
  DeterministicSample outside{1, {{4, 'b'}}, SampleSource::classical};
  EXPECT_THROW(verify_ds_property("aabb", outside), MalformedSample);
  DeterministicSample wrong{1, {{0, 'b'}}, SampleSource::classical};
  EXPECT_THROW(verify_ds_property("aabb", wrong), MalformedSample);
  DeterministicSample focal{3, {}, SampleSource::classical};
  EXPECT_THROW(verify_ds_property("aabb", focal), MalformedSample);
}

TEST(Instance, ConsistencyAndBounds) {
  const std::vector<SamplePoint> pts{{1, 'b'}, {3, 'a'}};
  EXPECT_TRUE(instance_consistent("xbyaz", "abca", pts, 0));
  EXPECT_FALSE(instance_consistent("xbyaz", "abca", pts, 1));
  EXPECT_FALSE(instance_consistent("xbya", "abca", pts, 1));
}

TEST(Windows, WorkedExample) {
  const PeriodInfo p = periodic(2);
  EXPECT_EQ(brute_force_windows("abababab", "abab", p, 0), std::optional<std::size_t>{0});
  EXPECT_EQ(brute_force_windows("abababab", "abab", p, 2), std::optional<std::size_t>{4});
  EXPECT_EQ(brute_force_windows("abababab", "abab", p, 3), std::nullopt);
  EXPECT_EQ(brute_force_windows("abababab", "abab", p, 9), std::nullopt);
  EXPECT_EQ(brute_force_windows("ab", "abab", p, 0), std::nullopt);
  EXPECT_THROW(brute_force_windows("abab", "abab", PeriodInfo{}, 0), std::invalid_argument);
}

TEST(Windows, Candidate) {
  // Window [e - back + 1, e + fwd] = [3, 12], anchor residue 1 mod 3.
  EXPECT_EQ(window_candidate(5, 3, 7, 1, 3, 6), std::optional<std::size_t>{4});
  EXPECT_EQ(window_candidate(5, 3, 3, 1, 3, 6), std::nullopt);
  EXPECT_EQ(window_candidate(5, 0, 7, 1, 3, 6), std::nullopt);
  EXPECT_EQ(window_candidate(5, 2, 9, 3, 3, 6), std::nullopt);
}

TEST(Windows, AgreesWithKmpOnRandomPeriodicTexts) {
  Rng rng(2);
  for (int it = 0; it < 400; ++it) {
    const unsigned sigma = 2 + it % 3;
    const std::size_t v = 1 + rng.index(4);
    const std::size_t m = 2 * v + rng.index(12);
    const std::string word = random_string(rng, v, sigma);
    std::string pat;
    for (std::size_t i = 0; i < m; ++i) pat += word[i % v];
    // Anchors need the partial sample carried by the DS builder's answer.
    const Preprocessing pre = build_ds_classical(pat);
    ASSERT_TRUE(is_periodic(pre));
    const PeriodInfo& info = std::get<PeriodInfo>(pre);
    ASSERT_EQ(info.period, detect_period_classical(pat).period);
    // Periodic text with sparse defects.
    std::string text;
    const std::size_t n = m + rng.index(60);
    for (std::size_t i = 0; i < n; ++i)
      text += rng.bernoulli(0.08) ? static_cast<char>('a' + rng.index(sigma)) : word[(i + it) % v];
    const auto occ = kmp_all(text, pat);
    const std::size_t B = block_length(m);
    for (std::size_t b = 0; b * B < n; ++b)
      EXPECT_EQ(brute_force_windows(text, pat, info, b), leftmost_in_block(occ, m, b))
          << text << " " << pat << " block " << b;
  }
}

TEST(Leftmost, InBlock) {
  const std::vector<std::size_t> occ{1, 4, 5, 11};
  EXPECT_EQ(leftmost_in_block(occ, 6, 0), std::optional<std::size_t>{1});
  EXPECT_EQ(leftmost_in_block(occ, 6, 1), std::optional<std::size_t>{4});
  EXPECT_EQ(leftmost_in_block(occ, 6, 2), std::nullopt);
  EXPECT_EQ(leftmost_in_block(occ, 6, 3), std::optional<std::size_t>{11});
}

}  // namespace
