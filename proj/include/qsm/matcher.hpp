#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsm/ledger.hpp"
#include "qsm/rng.hpp"
#include "qsm/search.hpp"
#include "qsm/types.hpp"

namespace qsm {

struct PatternText {
  std::string text;
  std::string pattern;
  std::size_t alphabet_size = 2;  // symbols 'a', 'b', ...

  // Throws std::invalid_argument unless 1 <= m <= n and all symbols are in range.
  void validate() const;
  std::size_t n() const { return text.size(); }
  std::size_t m() const { return pattern.size(); }
};

struct BlockGrid {
  std::size_t n = 0;
  std::size_t block_len = 1;
  std::size_t num_blocks = 0;

  BlockGrid(std::size_t n, std::size_t m);
  std::size_t first(std::size_t block) const { return block * block_len; }
  std::size_t last(std::size_t block) const;  // inclusive
  std::size_t block_of(std::size_t pos) const { return pos / block_len; }
};

enum class MatchMode { baseline, aperiodic, periodic };

struct MatchResult {
  std::optional<std::size_t> occurrence;
  MatchMode mode = MatchMode::baseline;
  std::uint64_t ledger_total = 0;
  std::optional<bool> correct;
};

struct MatchOptions {
  SearchOptions search;
  unsigned aperiodic_repetitions = 1;  // independent min-finding runs per extreme instance
  unsigned periodic_repetitions = 3;   // same, for the periodic oracle's searches
  bool memoize_h = true;               // reuse amplified block answers in the leftmost descent
  bool final_verification = true;      // exact check of the reported position
  unsigned extraction_attempts = 3;
};

// 1 iff t[i + j] != p[j].  Charges one comparison.
bool oracle_g(const PatternText& pt, std::size_t i, std::size_t j, QueryLedger& ledger);

// Grover search over pattern positions for a mismatch at alignment i; 1 if
// none is found.  Never wrong on a true occurrence.
bool verify_instance(const PatternText& pt, std::size_t i, Rng& rng, QueryLedger& ledger,
                     const SearchOptions& opts = {});

// Exact P(verify_instance returns 1) at alignment i.
double verify_accept_probability(const PatternText& pt, std::size_t i,
                                 const SearchOptions& opts = {});

MatchResult match_baseline(const PatternText& pt, Rng& rng, QueryLedger& ledger,
                           const MatchOptions& opts = {});

// Instance j of block i agrees with the text on every sample point.
// Charges |points| comparisons; instances running past the text give 0.
bool oracle_k(const PatternText& pt, const DeterministicSample& ds, std::size_t block,
              std::size_t j, QueryLedger& ledger);

// Block oracle for samples with the separation property: finds the leftmost
// and rightmost sample-consistent instances and verifies them.
bool oracle_h_aperiodic(const PatternText& pt, const DeterministicSample& ds, std::size_t block,
                        Rng& rng, QueryLedger& ledger, const MatchOptions& opts = {});

// Block oracle for periodic patterns; returns the leftmost occurrence it
// certifies in the block.
std::optional<std::size_t> oracle_h_periodic(const PatternText& pt, const PeriodInfo& pinfo,
                                             std::size_t block, Rng& rng, QueryLedger& ledger,
                                             const MatchOptions& opts = {});

MatchResult find_any_occurrence(const PatternText& pt, const Preprocessing& prep, Rng& rng,
                                QueryLedger& ledger, const MatchOptions& opts = {});

MatchResult find_leftmost_occurrence(const PatternText& pt, const Preprocessing& prep, Rng& rng,
                                     QueryLedger& ledger, const MatchOptions& opts = {});

// Per-instance state of the block algorithm: block facts, the direct block
// oracle, and exact success probabilities of that oracle per block.
class BlockMatcher {
 public:
  BlockMatcher(const PatternText& pt, const Preprocessing& prep, const MatchOptions& opts = {});
  ~BlockMatcher();
  BlockMatcher(const BlockMatcher&) = delete;
  BlockMatcher& operator=(const BlockMatcher&) = delete;

  MatchMode mode() const;
  const BlockGrid& grid() const;

  // Charge of one coherent block-oracle call (sum of subroutine caps).
  std::uint64_t h_cost() const;

  // Block holds the left endpoint of an occurrence.
  bool block_has_occurrence(std::size_t block) const;

  // Exact probability that one direct evaluation reports a candidate.
  double h_report_probability(std::size_t block) const;

  // One direct block-oracle evaluation; the reported candidate, if any.
  std::optional<std::size_t> run_h(std::size_t block, Rng& rng, QueryLedger& ledger) const;

  MatchResult find_any(Rng& rng, QueryLedger& ledger) const;
  MatchResult find_leftmost(Rng& rng, QueryLedger& ledger) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qsm
