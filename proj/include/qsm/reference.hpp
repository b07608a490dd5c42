#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qsm/types.hpp"

// Classical ground truth.  Nothing here touches a ledger.
namespace qsm {

// All left endpoints of `pattern` in `text`, ascending.
std::vector<std::size_t> kmp_all(std::string_view text, std::string_view pattern);

// Smallest s in [1, floor(m/2)] with p[i] == p[i + s] throughout, if any.
PeriodInfo detect_period_classical(std::string_view pattern);

// True iff every copy other than the focal one demands, at some sample point,
// a character different from the focal copy's.  Throws MalformedSample when
// a point falls outside the focal copy or disagrees with the pattern.
bool verify_ds_property(std::string_view pattern, const DeterministicSample& ds);

// Copy `label` (1-based, placed at shift label - 1) agrees with every point.
bool copy_consistent(std::string_view pattern, const DeterministicSample& ds, std::size_t label);

// Text position x agrees with the pattern on every sample position.
bool instance_consistent(std::string_view text, std::string_view pattern,
                         const std::vector<SamplePoint>& points, std::size_t x);

// Window rule for a periodic pattern evaluated by direct scanning: the answer
// the randomized periodic block oracle gives when every internal search succeeds.
std::optional<std::size_t> brute_force_windows(std::string_view text, std::string_view pattern,
                                               const PeriodInfo& pinfo, std::size_t block);

// Leftmost occurrence whose left endpoint lies in `block`, by KMP.
std::optional<std::size_t> leftmost_in_block(const std::vector<std::size_t>& occurrences,
                                             std::size_t m, std::size_t block);

}  // namespace qsm

namespace qsm {

// Periodic-extension character demanded at text position x by an anchor z.
inline char periodic_char(std::string_view pattern, std::size_t period, std::size_t z,
                          std::size_t x) {
  const auto v = static_cast<long long>(period);
  const long long d = static_cast<long long>(x) - static_cast<long long>(z);
  return pattern[static_cast<std::size_t>(((d % v) + v) % v)];
}

// Smallest q congruent to z mod period whose window [q, q + m) lies inside
// [e - back + 1, e + fwd] with q <= e.
std::optional<std::size_t> window_candidate(std::size_t e, std::size_t back, std::size_t fwd,
                                            std::size_t z, std::size_t period, std::size_t m);

}  // namespace qsm
