#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qsm/ledger.hpp"
#include "qsm/reference.hpp"
#include "qsm/rng.hpp"
#include "qsm/search.hpp"
#include "qsm/types.hpp"

namespace qsm {

struct DsOptions {
  SearchOptions search;
  unsigned stall_factor = 8;        // consecutive stalls allowed per ceil(log2 m)
  unsigned stage_factor = 64;       // hard stage limit per ceil(log2 m)
  unsigned attempts = 3;            // retries per primitive before a stage stalls
};

// Text-aligned columns (copy 1 starts at column 0) shared by every copy in
// [lo, hi], where copy j occupies columns [j - 1, j - 2 + m].
struct ColumnRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  std::size_t width() const { return last + 1 - first; }
};
ColumnRange stabbing_range(std::size_t m, std::size_t lo, std::size_t hi);

// Greedy construction over floor(m/2) copies.  Each stage takes the leftmost
// column, among those shared by all survivors, where survivors disagree, and
// keeps the holders of the rarest character there (ties: the character of the
// lowest-labeled holder).  A periodic pattern yields PeriodInfo whose partial
// sample holds the points chosen so far.
Preprocessing build_ds_classical(std::string_view pattern);

// Staged construction through minimum finding and Grover search, charged to
// `ledger`.  Returns nullopt when the run detects its own inconsistency.
std::optional<Preprocessing> build_ds_quantum(std::string_view pattern, Rng& rng,
                                              QueryLedger& ledger, const DsOptions& opts = {});

// 1 iff copy `label` agrees with every chosen point it overlaps; points are
// given as (column, char) in copy 1's frame.  Charges |points| comparisons.
bool consistency_oracle(std::string_view pattern, const std::vector<SamplePoint>& column_points,
                        std::size_t label, QueryLedger& ledger);

// Same predicate, uncharged.
bool copy_matches_columns(std::string_view pattern, const std::vector<SamplePoint>& column_points,
                          std::size_t label);

// Translate column points into the frame of copy `focal`.
DeterministicSample sample_from_columns(const std::vector<SamplePoint>& column_points,
                                        std::size_t focal, SampleSource source);

}  // namespace qsm
