#include "qsm/grover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsm {

void SearchSpace::normalize() {
  if (size == 0) throw std::invalid_argument("SearchSpace: size must be positive");
  if (per_call_cost == 0) throw std::invalid_argument("SearchSpace: per_call_cost must be >= 1");
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  if (!marked.empty() && marked.back() >= size)
    throw std::invalid_argument("SearchSpace: marked index out of range");
}

double success_probability(std::size_t N, std::size_t t, std::uint64_t j) {
  if (N == 0) throw std::invalid_argument("success_probability: N must be positive");
  if (t > N) throw std::invalid_argument("success_probability: t exceeds N");
  if (t == 0) return 0.0;
  if (t == N) return 1.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
  const double s = std::sin((2.0 * static_cast<double>(j) + 1.0) * theta);
  return s * s;
}

std::size_t kth_unmarked(const std::vector<std::size_t>& marked, std::size_t k) {
  // marked[i] - i counts the unmarked indices below marked[i]; it never decreases.
  std::size_t lo = 0, hi = marked.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (marked[mid] - mid <= k) lo = mid + 1;
    else hi = mid;
  }
  return k + lo;
}

GroverOutcome sample_measurement(const SearchSpace& space, std::uint64_t j, Rng& rng,
                                 QueryLedger& ledger) {
  const std::size_t N = space.size;
  const std::size_t t = space.marked.size();
  GroverOutcome out;
  out.iterations_used = j;
  out.oracle_calls_charged = j * space.per_call_cost;
  ledger.charge(out.oracle_calls_charged);
  if (rng.bernoulli(success_probability(N, t, j))) {
    out.measured_index = space.marked[rng.index(t)];
    out.was_marked = true;
  } else {
    out.measured_index = kth_unmarked(space.marked, rng.index(N - t));
    out.was_marked = false;
  }
  return out;
}

double statevector_grover(std::size_t N, const std::vector<std::size_t>& marked, std::uint64_t j,
                          std::vector<double>* norms) {
  if (N == 0) throw std::invalid_argument("statevector_grover: N must be positive");
  if (N > kStatevectorMaxSize) throw std::length_error("statevector_grover: N exceeds 4096");
  std::vector<char> flag(N, 0);
  for (std::size_t i : marked) {
    if (i >= N) throw std::invalid_argument("statevector_grover: marked index out of range");
    flag[i] = 1;
  }
  std::vector<double> amp(N, 1.0 / std::sqrt(static_cast<double>(N)));
  if (norms) norms->clear();
  for (std::uint64_t round = 0; round < j; ++round) {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (flag[i]) amp[i] = -amp[i];
      sum += amp[i];
    }
    const double twice_mean = 2.0 * sum / static_cast<double>(N);
    double norm = 0.0;
    for (double& a : amp) {
      a = twice_mean - a;
      norm += a * a;
    }
    if (norms) norms->push_back(norm);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    if (flag[i]) mass += amp[i] * amp[i];
  return mass;
}

double statevector_grover(std::size_t N, const std::vector<std::size_t>& marked, std::uint64_t j) {
  return statevector_grover(N, marked, j, nullptr);
}

}  // namespace qsm
