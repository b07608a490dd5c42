#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qsm {

enum class SampleSource { classical, quantum_sim };

// A required character at a pattern position, in the focal copy's frame.
struct SamplePoint {
  std::size_t position = 0;
  char ch = 0;
  bool operator==(const SamplePoint&) const = default;
};

struct DeterministicSample {
  std::size_t focal = 1;  // copy label, 1-based
  std::vector<SamplePoint> points;
  SampleSource built_from = SampleSource::classical;
};

enum class Periodicity { aperiodic, periodic };

struct PeriodInfo {
  Periodicity classification = Periodicity::aperiodic;
  std::size_t period = 0;  // set iff periodic
  std::optional<DeterministicSample> partial_sample;
};

using Preprocessing = std::variant<DeterministicSample, PeriodInfo>;

struct MalformedSample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Copies placed during sampling: floor(m / 2), but at least one.
inline std::size_t num_copies(std::size_t m) { return m / 2 > 0 ? m / 2 : 1; }

// Block length ceil(m / 2).
inline std::size_t block_length(std::size_t m) { return (m + 1) / 2; }

inline bool is_periodic(const Preprocessing& p) {
  const auto* info = std::get_if<PeriodInfo>(&p);
  return info && info->classification == Periodicity::periodic;
}

}  // namespace qsm
