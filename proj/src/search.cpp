#include "qsm/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsm/grover.hpp"

namespace qsm {

namespace {

// One Grover run followed by measurement.  On a noisy oracle each coherent
// call errs with the class-weighted rate of the current amplitude split; any
// error scrambles the run into a uniform outcome.
std::size_t measure(const Oracle& oracle, std::uint64_t j, const ErrorProfile* noise, Rng& rng) {
  const std::size_t N = oracle.size();
  const std::size_t t = oracle.marked_count();
  if (noise && j > 0) {
    const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
    double clean = 1.0;
    for (std::uint64_t k = 0; k < j; ++k) {
      const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
      const double w = s * s;
      clean *= 1.0 - (w * noise->marked + (1.0 - w) * noise->unmarked);
    }
    if (!rng.bernoulli(clean)) return rng.index(N);
  }
  if (rng.bernoulli(success_probability(N, t, j))) return oracle.marked_at(rng.index(t));
  return oracle.unmarked_at(rng.index(N - t));
}

}  // namespace

std::uint64_t call_cap(std::size_t N, double factor) {
  const double c = std::floor(factor * std::sqrt(static_cast<double>(N)) + 1e-9);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
}

std::size_t bbht_choices(double mcap) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(mcap - 1e-12)));
}

SearchResult grover_search(const Oracle& oracle, std::uint64_t cap, Rng& rng,
                           QueryLedger& ledger, const SearchOptions& opts) {
  const std::uint64_t start = ledger.total();
  const double root = std::sqrt(static_cast<double>(oracle.size()));
  ErrorProfile profile;
  const ErrorProfile* noise = nullptr;
  if (oracle.kind() != OracleKind::deterministic) {
    profile = oracle.error_profile();
    if (profile.marked > 0.0 || profile.unmarked > 0.0) noise = &profile;
  }
  SearchResult res;
  double mcap = 1.0;
  while (true) {
    const std::uint64_t j = rng.index(bbht_choices(mcap));
    if (res.calls_used + j + 1 > cap) break;
    res.calls_used += j + 1;
    ledger.charge(j * oracle.cost());
    const std::size_t candidate = measure(oracle, j, noise, rng);
    if (oracle.evaluate(candidate, rng, ledger)) {
      res.found = candidate;
      res.verified = true;
      break;
    }
    mcap = std::min(mcap * opts.growth, root);
  }
  res.oracle_calls = ledger.total() - start;
  return res;
}

SearchResult bbht_search(const Oracle& oracle, Rng& rng, QueryLedger& ledger,
                         const SearchOptions& opts) {
  if (oracle.kind() == OracleKind::probabilistic)
    throw std::invalid_argument("bbht_search: probabilistic oracle must be amplified");
  return grover_search(oracle, call_cap(oracle.size(), opts.budget_factor), rng, ledger, opts);
}

unsigned amplification_repetitions(std::size_t N, double scale) {
  const double lg = std::log2(std::max(2.0, std::sqrt(static_cast<double>(N))));
  return 2 * static_cast<unsigned>(std::ceil(scale * lg - 1e-12)) + 1;
}

AmplifiedOracle amplify(const Oracle& oracle, unsigned repetitions) {
  return AmplifiedOracle(oracle, repetitions);
}

SearchResult search_amplified(const Oracle& oracle, Rng& rng, QueryLedger& ledger,
                              const SearchOptions& opts) {
  const AmplifiedOracle amp(oracle,
                            amplification_repetitions(oracle.size(), opts.repetition_scale));
  return grover_search(amp, call_cap(oracle.size(), opts.budget_factor), rng, ledger, opts);
}

SearchResult threshold_descent(std::size_t N, const BetterFactory& better, Rng& rng,
                               QueryLedger& ledger, const SearchOptions& opts,
                               const Checker& checker) {
  if (N == 0) throw std::invalid_argument("threshold_descent: empty domain");
  const std::uint64_t start = ledger.total();
  const std::uint64_t local = call_cap(N, opts.budget_factor);
  const std::uint64_t total = call_cap(N, opts.descent_budget_factor);
  std::size_t y = rng.index(N);
  std::uint64_t used = 0;
  bool settled = false;
  while (used < total) {
    const std::uint64_t cap = std::min(local, total - used);
    const std::unique_ptr<Oracle> oracle = better(y);
    const SearchResult step = grover_search(*oracle, cap, rng, ledger, opts);
    used += step.calls_used;
    if (step.found) {
      y = *step.found;
      continue;
    }
    settled = cap == local;
    break;
  }
  SearchResult res;
  res.found = y;
  res.calls_used = used;
  res.verified = checker ? checker(y) : settled;
  res.oracle_calls = ledger.total() - start;
  return res;
}

SearchResult find_min(const ComparisonOracle& cmp, Rng& rng, QueryLedger& ledger,
                      const SearchOptions& opts, const Checker& checker) {
  if (cmp.correct_prob < 1.0)
    throw std::invalid_argument("find_min: comparison oracle must be deterministic");
  const KeyOrder order(cmp.keys);
  return threshold_descent(
      cmp.size(),
      [&](std::size_t y) { return std::make_unique<BetterThanOracle>(cmp, order, y); }, rng,
      ledger, opts, checker);
}

SearchResult find_min_amplified(const ComparisonOracle& cmp, Rng& rng, QueryLedger& ledger,
                                const SearchOptions& opts, const Checker& checker) {
  const KeyOrder order(cmp.keys);
  const unsigned r = amplification_repetitions(cmp.size(), opts.repetition_scale);
  return threshold_descent(
      cmp.size(),
      [&](std::size_t y) -> std::unique_ptr<Oracle> {
        auto inner = std::make_shared<const BetterThanOracle>(cmp, order, y);
        return std::make_unique<AmplifiedOracle>(std::move(inner), r);
      },
      rng, ledger, opts, checker);
}

}  // namespace qsm
