#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qsm/analysis.hpp"
#include "qsm/search.hpp"

namespace {

using namespace qsm;

double binomial_tail(unsigned r, double e) {
  // Direct sum with exact integer binomials, independent of the lgamma form.
  double sum = 0.0;
  for (unsigned k = (r + 1) / 2; k <= r; ++k) {
    double c = 1.0;
    for (unsigned i = 1; i <= k; ++i) c = c * (r - k + i) / i;
    sum += c * std::pow(e, k) * std::pow(1.0 - e, r - k);
  }
  return sum;
}

double sigma(double p, int n) { return std::sqrt(std::max(p * (1 - p), 1e-4) / n); }

TEST(Budget, CallCap) {
  EXPECT_EQ(call_cap(1024, 9.0), 288u);
  EXPECT_EQ(call_cap(1, 9.0), 9u);
  EXPECT_EQ(call_cap(100, 22.5), 225u);
  EXPECT_EQ(call_cap(2, 0.1), 1u);
}

TEST(Budget, Repetitions) {
  EXPECT_EQ(amplification_repetitions(1024, 1.0), 11u);
  EXPECT_EQ(amplification_repetitions(1024, 4.0), 41u);
  EXPECT_EQ(amplification_repetitions(1, 1.0), 3u);
  EXPECT_EQ(amplification_repetitions(2, 1.0), 3u);
}

TEST(Majority, MatchesDirectTail) {
  EXPECT_NEAR(majority_error(15, 0.25), 0.0173, 5e-5);
  for (unsigned r : {1u, 3u, 11u, 41u})
    for (double e : {0.01, 0.1, 0.25, 0.4})
      EXPECT_NEAR(majority_error(r, e), binomial_tail(r, e), 1e-12);
  EXPECT_EQ(majority_error(5, 0.0), 0.0);
  EXPECT_THROW(majority_error(4, 0.1), std::invalid_argument);
}

TEST(Amplified, ProfileAndValidation) {
  SetOracle noisy(64, {3, 9}, 2, 0.8);
  EXPECT_THROW(AmplifiedOracle(noisy, 4), std::invalid_argument);
  AmplifiedOracle amp(noisy, 11);
  EXPECT_EQ(amp.cost(), 22u);
  EXPECT_EQ(amp.kind(), OracleKind::amplified);
  const ErrorProfile pr = amp.error_profile();
  EXPECT_NEAR(pr.marked, binomial_tail(11, 0.2), 1e-12);
  EXPECT_NEAR(pr.unmarked, binomial_tail(11, 0.2), 1e-12);
  SetOracle clean(64, {3}, 1);
  EXPECT_EQ(AmplifiedOracle(clean, 3).kind(), OracleKind::deterministic);
}

TEST(Amplified, MajorityFrequency) {
  SetOracle noisy(16, {5}, 1, 0.75);
  AmplifiedOracle amp(noisy, 15);
  Rng rng(3);
  QueryLedger ledger;
  const int trials = 40000;
  int wrong = 0;
  for (int i = 0; i < trials; ++i) wrong += amp.evaluate(5, rng, ledger) != true;
  const double p = binomial_tail(15, 0.25);
  EXPECT_NEAR(static_cast<double>(wrong) / trials, p, 4 * sigma(p, trials));
  EXPECT_EQ(ledger.total(), 15u * trials);
}

TEST(Bbht, NoMarkedElementsRespectsCap) {
  SetOracle none(400, {}, 3);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    QueryLedger ledger;
    const auto r = bbht_search(none, rng, ledger);
    EXPECT_FALSE(r.found);
    EXPECT_LE(r.calls_used, call_cap(400, 9.0));
    EXPECT_EQ(r.oracle_calls, 3 * r.calls_used);
  }
}

TEST(Bbht, RejectsRawNoisyOracle) {
  SetOracle noisy(16, {1}, 1, 0.9);
  Rng rng(1);
  QueryLedger ledger;
  EXPECT_THROW(bbht_search(noisy, rng, ledger), std::invalid_argument);
}

TEST(Bbht, FoundElementsAreMarked) {
  SetOracle o(1000, {17, 400, 999}, 1);
  Rng rng(2);
  QueryLedger ledger;
  for (int i = 0; i < 500; ++i) {
    const auto r = bbht_search(o, rng, ledger);
    if (r.found) {
      EXPECT_TRUE(o.ideal(*r.found));
      EXPECT_TRUE(r.verified);
    }
  }
}

TEST(Bbht, SuccessMatchesExactDistribution) {
  for (auto [N, t] : {std::pair<std::size_t, std::size_t>{256, 1}, {1024, 1}, {64, 5}}) {
    std::vector<std::size_t> marked(t);
    std::iota(marked.begin(), marked.end(), 0);
    SetOracle o(N, marked, 1);
    Rng rng(N + t);
    QueryLedger ledger;
    const int trials = 4000;
    int hits = 0;
    double calls_found = 0;
    for (int i = 0; i < trials; ++i) {
      const auto r = bbht_search(o, rng, ledger);
      if (r.found) {
        ++hits;
        calls_found += static_cast<double>(r.calls_used);
      }
    }
    const double p = bbht_success_probability(N, t);
    EXPECT_NEAR(static_cast<double>(hits) / trials, p, 4 * sigma(p, trials)) << N << " " << t;
    const auto& found = bbht_found_at(N, t, call_cap(N, 9.0), 1.2);
    double mean = 0;
    for (std::size_t c = 0; c < found.size(); ++c) mean += static_cast<double>(c) * found[c];
    EXPECT_NEAR(calls_found / hits, mean / p, 0.1 * mean / p);
  }
}

TEST(Bbht, AllMarkedFindsImmediately) {
  SetOracle all(8, {0, 1, 2, 3, 4, 5, 6, 7}, 1);
  Rng rng(4);
  QueryLedger ledger;
  const auto r = bbht_search(all, rng, ledger);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.calls_used, 1u);
  EXPECT_DOUBLE_EQ(bbht_success_probability(8, 8), 1.0);
}

TEST(Bbht, AmplifiedNoisySearchStaysSound) {
  SetOracle noisy(256, {77}, 1, 0.8);
  Rng rng(6);
  QueryLedger ledger;
  int hits = 0, wrong = 0;
  for (int i = 0; i < 300; ++i) {
    const auto r = search_amplified(noisy, rng, ledger);
    if (r.found) (*r.found == 77 ? hits : wrong)++;
  }
  EXPECT_GT(hits, 240);
  EXPECT_LE(wrong, 3);
}

TEST(Bbht, SameSeedSameRun) {
  SetOracle o(4096, {1234}, 1);
  for (std::uint64_t seed : {1ull, 99ull}) {
    Rng a(seed), b(seed);
    QueryLedger la, lb;
    const auto ra = bbht_search(o, a, la), rb = bbht_search(o, b, lb);
    EXPECT_EQ(ra.found, rb.found);
    EXPECT_EQ(ra.calls_used, rb.calls_used);
  }
}

TEST(FindMin, MatchesExactDescent) {
  const std::size_t N = 200;
  ComparisonOracle cmp;
  Rng perm(8);
  for (std::size_t i = 0; i < N; ++i) cmp.keys.push_back(static_cast<double>(i));
  for (std::size_t i = N - 1; i > 0; --i) std::swap(cmp.keys[i], cmp.keys[perm.index(i + 1)]);
  const std::size_t argmin = std::min_element(cmp.keys.begin(), cmp.keys.end()) - cmp.keys.begin();
  std::vector<std::size_t> sizes(N, 1);
  const auto dist = descent_level_distribution(sizes);
  Rng rng(9);
  QueryLedger ledger;
  const int trials = 3000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    const auto r = find_min(cmp, rng, ledger);
    ASSERT_TRUE(r.found);
    hits += *r.found == argmin;
    EXPECT_LE(r.calls_used, call_cap(N, 22.5));
  }
  EXPECT_NEAR(static_cast<double>(hits) / trials, dist[0], 4 * sigma(dist[0], trials));
  EXPECT_GT(dist[0], 0.9);
}

TEST(FindMin, LevelsWithInfinity) {
  // Two finite keys among 98 infinite ones.
  ComparisonOracle cmp;
  cmp.keys.assign(100, INFINITY);
  cmp.keys[40] = 2.0;
  cmp.keys[70] = 1.0;
  const auto& dist = descent_singletons(100, 2);
  ASSERT_EQ(dist.size(), 3u);
  EXPECT_NEAR(dist[0] + dist[1] + dist[2], 1.0, 1e-12);
  Rng rng(10);
  QueryLedger ledger;
  const int trials = 4000;
  std::vector<int> hist(3, 0);
  for (int i = 0; i < trials; ++i) {
    const std::size_t y = *find_min(cmp, rng, ledger).found;
    ++hist[y == 70 ? 0 : y == 40 ? 1 : 2];
  }
  for (int l = 0; l < 3; ++l)
    EXPECT_NEAR(static_cast<double>(hist[l]) / trials, dist[l], 4 * sigma(dist[l], trials));
}

TEST(FindMin, CheckerDecidesVerified) {
  ComparisonOracle cmp{{5, 3, 8, 1}, 1, 1.0};
  Rng rng(11);
  QueryLedger ledger;
  const auto r = find_min(cmp, rng, ledger, {}, [](std::size_t) { return false; });
  EXPECT_FALSE(r.verified);
}

TEST(FindMin, NoisyComparisonsNeedAmplification) {
  ComparisonOracle cmp{{}, 1, 0.8};
  for (int i = 0; i < 64; ++i) cmp.keys.push_back(static_cast<double>((i * 37) % 64));
  Rng rng(12);
  QueryLedger ledger;
  EXPECT_THROW(find_min(cmp, rng, ledger), std::invalid_argument);
  int hits = 0;
  for (int i = 0; i < 200; ++i) hits += cmp.keys[*find_min_amplified(cmp, rng, ledger).found] == 0.0;
  EXPECT_GT(hits, 170);
}

TEST(BestOf, OrderStatistics) {
  const auto d = best_of({0.5, 0.5}, 2);
  EXPECT_NEAR(d[0], 0.75, 1e-12);
  EXPECT_NEAR(d[1], 0.25, 1e-12);
  const auto e = best_of({0.2, 0.3, 0.5}, 3);
  EXPECT_NEAR(e[2], 0.125, 1e-12);
  EXPECT_NEAR(e[0], 1 - 0.8 * 0.8 * 0.8, 1e-12);
}

TEST(Ledger, PhasesNest) {
  QueryLedger ledger;
  ledger.charge(2);
  {
    QueryLedger::Scope a(ledger, Phase::preprocess);
    ledger.charge(3);
    {
      QueryLedger::Scope b(ledger, Phase::in_block);
      ledger.charge(5);
    }
    ledger.charge(7);
  }
  EXPECT_EQ(ledger.total(), 17u);
  EXPECT_EQ(ledger.phase_total(Phase::none), 2u);
  EXPECT_EQ(ledger.phase_total(Phase::preprocess), 10u);
  EXPECT_EQ(ledger.phase_total(Phase::in_block), 5u);
  EXPECT_EQ(ledger.phase(), Phase::none);
}

TEST(RngTest, IndexInRangeAndSeeded) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.index(7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, b.index(7));
  }
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2, 0), derive_seed(2, 1, 0));
}

}  // namespace
