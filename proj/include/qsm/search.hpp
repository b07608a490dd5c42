#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "qsm/ledger.hpp"
#include "qsm/oracle.hpp"
#include "qsm/rng.hpp"

namespace qsm {

struct SearchOptions {
  double budget_factor = 9.0;           // BBHT cap: calls per sqrt(N)
  double growth = 1.2;                  // BBHT iteration-cap growth
  double descent_budget_factor = 22.5;  // threshold descent cap: calls per sqrt(N)
  double repetition_scale = 4.0;        // majority repetitions per log2(sqrt(N))
};

struct SearchResult {
  std::optional<std::size_t> found;
  std::uint64_t oracle_calls = 0;  // ledger delta
  bool verified = false;
  std::uint64_t calls_used = 0;  // oracle invocations, counted against budgets
};

// floor(factor * sqrt(N)), at least 1.
std::uint64_t call_cap(std::size_t N, double factor);

// Number of admissible iteration counts, [0, ceil(mcap)).
std::size_t bbht_choices(double mcap);

// BBHT with an explicit call cap.  Each run of j iterations costs j + 1 calls,
// the extra one being the direct check of the measured candidate.
SearchResult grover_search(const Oracle& oracle, std::uint64_t cap, Rng& rng,
                           QueryLedger& ledger, const SearchOptions& opts = {});

// Unknown-count search with cap call_cap(N, budget_factor).  Rejects raw
// probabilistic oracles; amplify them first.
SearchResult bbht_search(const Oracle& oracle, Rng& rng, QueryLedger& ledger,
                         const SearchOptions& opts = {});

// 2 * ceil(scale * log2(max(2, sqrt(N)))) + 1.
unsigned amplification_repetitions(std::size_t N, double scale);

// Non-owning majority wrapper; `oracle` must outlive the result.
AmplifiedOracle amplify(const Oracle& oracle, unsigned repetitions);

SearchResult search_amplified(const Oracle& oracle, Rng& rng, QueryLedger& ledger,
                              const SearchOptions& opts = {});

// Builds the oracle marking elements strictly better than y.
using BetterFactory = std::function<std::unique_ptr<Oracle>(std::size_t y)>;
using Checker = std::function<bool(std::size_t)>;

// Start from a uniform index; keep jumping to any strictly better element
// until a search comes back empty or the descent budget is spent.  Without a
// checker, `verified` means the last search had its full budget and found nothing.
SearchResult threshold_descent(std::size_t N, const BetterFactory& better, Rng& rng,
                               QueryLedger& ledger, const SearchOptions& opts = {},
                               const Checker& checker = {});

SearchResult find_min(const ComparisonOracle& cmp, Rng& rng, QueryLedger& ledger,
                      const SearchOptions& opts = {}, const Checker& checker = {});

SearchResult find_min_amplified(const ComparisonOracle& cmp, Rng& rng, QueryLedger& ledger,
                                const SearchOptions& opts = {}, const Checker& checker = {});

}  // namespace qsm
