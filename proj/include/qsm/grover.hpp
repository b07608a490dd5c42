#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qsm/ledger.hpp"
#include "qsm/rng.hpp"

namespace qsm {

inline constexpr std::size_t kStatevectorMaxSize = 4096;

struct SearchSpace {
  std::size_t size = 1;
  std::vector<std::size_t> marked;  // sorted, distinct
  std::uint64_t per_call_cost = 1;

  // Sorts and deduplicates `marked`; throws std::invalid_argument on bad fields.
  void normalize();
};

struct GroverOutcome {
  std::size_t measured_index = 0;
  bool was_marked = false;
  std::uint64_t iterations_used = 0;
  std::uint64_t oracle_calls_charged = 0;
};

// Probability that j Grover iterations over t of N marked items measure a marked one.
double success_probability(std::size_t N, std::size_t t, std::uint64_t j);

// One measured Grover run; charges j * per_call_cost.
GroverOutcome sample_measurement(const SearchSpace& space, std::uint64_t j, Rng& rng,
                                 QueryLedger& ledger);

// Explicit real-amplitude simulation; returns the probability mass on `marked`.
double statevector_grover(std::size_t N, const std::vector<std::size_t>& marked, std::uint64_t j);

// Same simulation, also returning the squared norm after every round.
double statevector_grover(std::size_t N, const std::vector<std::size_t>& marked, std::uint64_t j,
                          std::vector<double>* norms);

// k-th (0-based) index of [0, N) absent from the sorted list `marked`.
std::size_t kth_unmarked(const std::vector<std::size_t>& marked, std::size_t k);

}  // namespace qsm
