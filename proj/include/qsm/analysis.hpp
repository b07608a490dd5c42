#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qsm/search.hpp"

// Exact outcome distributions of the search primitives on noise-free oracles.
// Results are cached; all functions are safe to call concurrently.
namespace qsm {

// P(more than half of r independent calls err), each erring with probability e.
double majority_error(unsigned r, double e);

// found[c] = P(grover_search stops successfully having used exactly c calls).
const std::vector<double>& bbht_found_at(std::size_t N, std::size_t t, std::uint64_t cap,
                                         double growth);

// P(bbht_search finds a marked element) with default cap.
double bbht_success_probability(std::size_t N, std::size_t t, const SearchOptions& opts = {});

// Distribution of the key level returned by threshold descent.  level_sizes[i]
// is the number of elements sharing the i-th smallest key.
std::vector<double> descent_level_distribution(const std::vector<std::size_t>& level_sizes,
                                               const SearchOptions& opts = {});

// Descent over N elements of which K carry distinct finite keys and the rest
// share +infinity.  Entry K is the infinity level.
const std::vector<double>& descent_singletons(std::size_t N, std::size_t K,
                                              const SearchOptions& opts = {});

// Level distribution of the best of R independent draws from `dist`.
std::vector<double> best_of(const std::vector<double>& dist, unsigned R);

}  // namespace qsm
