#include "qsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "qsm/grover.hpp"

namespace qsm {

double majority_error(unsigned r, double e) {
  if (r == 0 || r % 2 == 0) throw std::invalid_argument("majority_error: r must be odd");
  if (e <= 0.0) return 0.0;
  if (e >= 1.0) return 1.0;
  const double le = std::log(e), lc = std::log1p(-e);
  const double lr = std::lgamma(static_cast<double>(r) + 1.0);
  double sum = 0.0;
  for (unsigned k = (r + 1) / 2; k <= r; ++k) {
    const double kk = static_cast<double>(k);
    sum += std::exp(lr - std::lgamma(kk + 1.0) - std::lgamma(static_cast<double>(r - k) + 1.0) +
                    kk * le + static_cast<double>(r - k) * lc);
  }
  return std::min(1.0, sum);
}

namespace {

std::vector<double> compute_found_at(std::size_t N, std::size_t t, std::uint64_t cap,
                                     double growth) {
  std::vector<double> found(cap + 1, 0.0);
  if (t == 0) return found;
  const double root = std::sqrt(static_cast<double>(N));
  std::vector<double> mcaps{1.0};
  while (mcaps.back() != root && mcaps.size() <= cap)
    mcaps.push_back(std::min(mcaps.back() * growth, root));
  const std::size_t last = mcaps.size() - 1;
  std::vector<std::vector<double>> mass(mcaps.size(), std::vector<double>(cap + 1, 0.0));
  mass[0][0] = 1.0;
  std::vector<double> succ;
  for (std::size_t s = 0; s <= last; ++s) {
    const std::size_t J = bbht_choices(mcaps[s]);
    while (succ.size() < J) succ.push_back(success_probability(N, t, succ.size()));
    const std::size_t next = std::min(s + 1, last);
    for (std::uint64_t u = 0; u <= cap; ++u) {
      const double m = mass[s][u];
      if (m == 0.0) continue;
      const double share = m / static_cast<double>(J);
      for (std::size_t j = 0; j < J; ++j) {
        const std::uint64_t nu = u + j + 1;
        if (nu > cap) break;
        found[nu] += share * succ[j];
        mass[next][nu] += share * (1.0 - succ[j]);
      }
    }
  }
  return found;
}

std::vector<double> compute_descent(const std::vector<std::size_t>& sizes,
                                    const SearchOptions& opts) {
  const std::size_t L = sizes.size();
  const std::size_t N = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (N == 0) throw std::invalid_argument("descent_level_distribution: empty domain");
  const std::uint64_t local = call_cap(N, opts.budget_factor);
  const std::uint64_t total = call_cap(N, opts.descent_budget_factor);
  std::vector<std::size_t> prefix(L, 0);
  for (std::size_t l = 1; l < L; ++l) prefix[l] = prefix[l - 1] + sizes[l - 1];

  std::vector<double> returned(L, 0.0);
  std::vector<double> acc(total + 1, 0.0);  // pending jumps, per better element
  std::vector<double> mass(total + 1);
  for (std::size_t l = L; l-- > 0;) {
    const double c = static_cast<double>(sizes[l]);
    for (std::uint64_t u = 0; u <= total; ++u) mass[u] = c * acc[u];
    mass[0] += c / static_cast<double>(N);
    const std::size_t t = prefix[l];
    if (t == 0) {
      for (double m : mass) returned[l] += m;
      continue;
    }
    const std::vector<double>& fb = bbht_found_at(N, t, local, opts.growth);
    for (std::uint64_t u = 0; u < total; ++u) {
      const double m = mass[u];
      if (m == 0.0) continue;
      const std::uint64_t cap = std::min(local, total - u);
      double hit = 0.0;
      for (std::uint64_t k = 1; k <= cap; ++k) {
        acc[u + k] += m * fb[k] / static_cast<double>(t);
        hit += fb[k];
      }
      returned[l] += m * (1.0 - hit);
    }
    returned[l] += mass[total];
  }
  return returned;
}

std::mutex cache_mutex;

}  // namespace

const std::vector<double>& bbht_found_at(std::size_t N, std::size_t t, std::uint64_t cap,
                                         double growth) {
  if (N == 0 || t > N) throw std::invalid_argument("bbht_found_at: bad arguments");
  if (!(growth > 1.0)) throw std::invalid_argument("bbht_found_at: growth must exceed 1");
  using Key = std::tuple<std::size_t, std::size_t, std::uint64_t, double>;
  static std::map<Key, std::vector<double>> cache;
  const Key key{N, t, cap, growth};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<double> v = compute_found_at(N, t, cap, growth);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(key, std::move(v)).first->second;
}

double bbht_success_probability(std::size_t N, std::size_t t, const SearchOptions& opts) {
  const auto& f = bbht_found_at(N, t, call_cap(N, opts.budget_factor), opts.growth);
  return std::min(1.0, std::accumulate(f.begin(), f.end(), 0.0));
}

std::vector<double> descent_level_distribution(const std::vector<std::size_t>& level_sizes,
                                               const SearchOptions& opts) {
  for (std::size_t s : level_sizes)
    if (s == 0) throw std::invalid_argument("descent_level_distribution: empty level");
  return compute_descent(level_sizes, opts);
}

const std::vector<double>& descent_singletons(std::size_t N, std::size_t K,
                                              const SearchOptions& opts) {
  if (N == 0 || K > N) throw std::invalid_argument("descent_singletons: bad arguments");
  using Key = std::tuple<std::size_t, std::size_t, double, double, double>;
  static std::map<Key, std::vector<double>> cache;
  const Key key{N, K, opts.budget_factor, opts.descent_budget_factor, opts.growth};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<std::size_t> sizes(K, 1);
  if (N > K) sizes.push_back(N - K);
  std::vector<double> v = compute_descent(sizes, opts);
  if (N == K) v.push_back(0.0);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(key, std::move(v)).first->second;
}

std::vector<double> best_of(const std::vector<double>& dist, unsigned R) {
  if (R == 0) throw std::invalid_argument("best_of: R must be positive");
  std::vector<double> out(dist.size(), 0.0);
  double tail = 0.0;
  double prev = 0.0;  // P(best >= l + 1)
  for (std::size_t l = dist.size(); l-- > 0;) {
    tail += dist[l];
    const double cur = std::pow(std::min(1.0, tail), static_cast<double>(R));
    out[l] = std::max(0.0, cur - prev);
    prev = cur;
  }
  return out;
}

}  // namespace qsm
