#include "qsm/reference.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsm {

std::vector<std::size_t> kmp_all(std::string_view text, std::string_view pattern) {
  const std::size_t m = pattern.size();
  if (m == 0) throw std::invalid_argument("kmp_all: empty pattern");
  std::vector<std::size_t> fail(m, 0);
  for (std::size_t i = 1, k = 0; i < m; ++i) {
    while (k > 0 && pattern[i] != pattern[k]) k = fail[k - 1];
    if (pattern[i] == pattern[k]) ++k;
    fail[i] = k;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0, k = 0; i < text.size(); ++i) {
    while (k > 0 && text[i] != pattern[k]) k = fail[k - 1];
    if (text[i] == pattern[k]) ++k;
    if (k == m) {
      out.push_back(i + 1 - m);
      k = fail[k - 1];
    }
  }
  return out;
}

PeriodInfo detect_period_classical(std::string_view pattern) {
  const std::size_t m = pattern.size();
  if (m == 0) throw std::invalid_argument("detect_period_classical: empty pattern");
  PeriodInfo info;
  for (std::size_t s = 1; s <= m / 2; ++s) {
    bool ok = true;
    for (std::size_t i = 0; i + s < m && ok; ++i) ok = pattern[i] == pattern[i + s];
    if (ok) {
      info.classification = Periodicity::periodic;
      info.period = s;
      return info;
    }
  }
  return info;
}

namespace {

void check_sample(std::string_view pattern, const DeterministicSample& ds) {
  const std::size_t m = pattern.size();
  if (ds.focal < 1 || ds.focal > num_copies(m))
    throw MalformedSample("deterministic sample: focal label out of range");
  for (const SamplePoint& pt : ds.points) {
    if (pt.position >= m) throw MalformedSample("deterministic sample: point outside focal copy");
    if (pattern[pt.position] != pt.ch)
      throw MalformedSample("deterministic sample: point disagrees with pattern");
  }
}

}  // namespace

bool copy_consistent(std::string_view pattern, const DeterministicSample& ds, std::size_t label) {
  const std::size_t m = pattern.size();
  for (const SamplePoint& pt : ds.points) {
    // Column of the point is (focal - 1) + position; copy `label` starts at label - 1.
    const long long q = static_cast<long long>(ds.focal + pt.position) - static_cast<long long>(label);
    if (q < 0 || q >= static_cast<long long>(m)) continue;
    if (pattern[static_cast<std::size_t>(q)] != pt.ch) return false;
  }
  return true;
}

bool verify_ds_property(std::string_view pattern, const DeterministicSample& ds) {
  check_sample(pattern, ds);
  for (std::size_t j = 1; j <= num_copies(pattern.size()); ++j)
    if (j != ds.focal && copy_consistent(pattern, ds, j)) return false;
  return true;
}

bool instance_consistent(std::string_view text, std::string_view pattern,
                         const std::vector<SamplePoint>& points, std::size_t x) {
  if (x + pattern.size() > text.size()) return false;
  for (const SamplePoint& pt : points)
    if (text[x + pt.position] != pt.ch) return false;
  return true;
}

std::optional<std::size_t> window_candidate(std::size_t e, std::size_t back, std::size_t fwd,
                                            std::size_t z, std::size_t period, std::size_t m) {
  if (back == 0) return std::nullopt;
  const std::size_t lo = e + 1 - back;
  const auto v = static_cast<long long>(period);
  const long long shift = ((static_cast<long long>(z) - static_cast<long long>(lo)) % v + v) % v;
  const std::size_t q = lo + static_cast<std::size_t>(shift);
  if (q > e || q + m - 1 > e + fwd) return std::nullopt;
  return q;
}

std::optional<std::size_t> brute_force_windows(std::string_view text, std::string_view pattern,
                                               const PeriodInfo& pinfo, std::size_t block) {
  if (pinfo.classification != Periodicity::periodic || pinfo.period == 0)
    throw std::invalid_argument("brute_force_windows: pattern info is not periodic");
  const std::size_t n = text.size(), m = pattern.size(), B = block_length(m);
  if (m > n) return std::nullopt;
  const std::size_t s0 = block * B;
  if (s0 > n - m) return std::nullopt;
  const std::size_t e = std::min(n, s0 + B) - 1;
  const std::size_t last = std::min(e, n - m);
  static const std::vector<SamplePoint> kNone;
  const auto& pts = pinfo.partial_sample ? pinfo.partial_sample->points : kNone;

  std::optional<std::size_t> k, l;
  for (std::size_t x = s0; x <= last; ++x) {
    if (!instance_consistent(text, pattern, pts, x)) continue;
    if (!k) k = x;
    l = x;
  }
  if (!k) return std::nullopt;

  std::optional<std::size_t> best;
  for (std::size_t z : {*k, *l}) {
    std::size_t back = 0;
    while (back < e - s0 + 1 && text[e - back] == periodic_char(pattern, pinfo.period, z, e - back))
      ++back;
    const std::size_t fwd_cap = std::min(m, n - 1 - e);
    std::size_t fwd = 0;
    while (fwd < fwd_cap &&
           text[e + 1 + fwd] == periodic_char(pattern, pinfo.period, z, e + 1 + fwd))
      ++fwd;
    const auto q = window_candidate(e, back, fwd, z, pinfo.period, m);
    if (q && (!best || *q < *best)) best = q;
  }
  return best;
}

std::optional<std::size_t> leftmost_in_block(const std::vector<std::size_t>& occurrences,
                                             std::size_t m, std::size_t block) {
  const std::size_t B = block_length(m);
  const auto it = std::lower_bound(occurrences.begin(), occurrences.end(), block * B);
  if (it == occurrences.end() || *it >= (block + 1) * B) return std::nullopt;
  return *it;
}

}  // namespace qsm
