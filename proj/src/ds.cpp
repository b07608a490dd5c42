#include "qsm/ds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace qsm {

namespace {

std::size_t ceil_log2(std::size_t x) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < x) ++k;
  return k;
}

char copy_char(std::string_view p, std::size_t label, std::size_t column) {
  return p[column - (label - 1)];
}

}  // namespace

ColumnRange stabbing_range(std::size_t m, std::size_t lo, std::size_t hi) {
  if (lo < 1 || hi < lo || hi - lo >= m) throw std::invalid_argument("stabbing_range: bad copies");
  return {hi - 1, lo + m - 2};
}

bool copy_matches_columns(std::string_view pattern, const std::vector<SamplePoint>& column_points,
                          std::size_t label) {
  const std::size_t m = pattern.size();
  for (const SamplePoint& pt : column_points) {
    if (pt.position + 1 < label) continue;
    const std::size_t q = pt.position + 1 - label;
    if (q < m && pattern[q] != pt.ch) return false;
  }
  return true;
}

bool consistency_oracle(std::string_view pattern, const std::vector<SamplePoint>& column_points,
                        std::size_t label, QueryLedger& ledger) {
  if (label < 1 || label > num_copies(pattern.size()))
    throw std::invalid_argument("consistency_oracle: copy label out of range");
  ledger.charge(column_points.size());
  return copy_matches_columns(pattern, column_points, label);
}

DeterministicSample sample_from_columns(const std::vector<SamplePoint>& column_points,
                                        std::size_t focal, SampleSource source) {
  DeterministicSample ds;
  ds.focal = focal;
  ds.built_from = source;
  for (const SamplePoint& pt : column_points) {
    if (pt.position + 1 < focal) throw MalformedSample("sample point left of the focal copy");
    ds.points.push_back({pt.position + 1 - focal, pt.ch});
  }
  return ds;
}

Preprocessing build_ds_classical(std::string_view pattern) {
  const std::size_t m = pattern.size();
  if (m == 0) throw std::invalid_argument("build_ds_classical: empty pattern");
  std::vector<std::size_t> survivors;
  for (std::size_t j = 1; j <= num_copies(m); ++j) survivors.push_back(j);
  std::vector<SamplePoint> columns;

  while (survivors.size() > 1) {
    const ColumnRange range = stabbing_range(m, survivors.front(), survivors.back());
    std::optional<std::size_t> pick;
    for (std::size_t c = range.first; c <= range.last && !pick; ++c) {
      const char first = copy_char(pattern, survivors.front(), c);
      for (std::size_t j : survivors)
        if (copy_char(pattern, j, c) != first) {
          pick = c;
          break;
        }
    }
    if (!pick) {
      PeriodInfo info;
      info.classification = Periodicity::periodic;
      info.period = survivors[1] - survivors[0];
      info.partial_sample = sample_from_columns(columns, survivors.front(), SampleSource::classical);
      return info;
    }
    // Rarest character; scanning survivors in label order breaks ties toward
    // the lowest-labeled holder.
    std::map<char, std::size_t> count;
    for (std::size_t j : survivors) ++count[copy_char(pattern, j, *pick)];
    char keep = 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t j : survivors) {
      const char ch = copy_char(pattern, j, *pick);
      if (count[ch] < best) {
        best = count[ch];
        keep = ch;
      }
    }
    std::erase_if(survivors, [&](std::size_t j) { return copy_char(pattern, j, *pick) != keep; });
    columns.push_back({*pick, keep});
  }

  DeterministicSample ds = sample_from_columns(columns, survivors.front(), SampleSource::classical);
  PeriodInfo scan = detect_period_classical(pattern);
  if (scan.classification == Periodicity::periodic) {
    scan.partial_sample = std::move(ds);
    return scan;
  }
  return ds;
}

std::optional<Preprocessing> build_ds_quantum(std::string_view pattern, Rng& rng,
                                              QueryLedger& ledger, const DsOptions& opts) {
  const std::size_t m = pattern.size();
  if (m < 2) throw std::invalid_argument("build_ds_quantum: pattern shorter than 2");
  const std::size_t C = num_copies(m);
  const std::size_t lg = std::max<std::size_t>(1, ceil_log2(m));
  const std::size_t stall_limit = opts.stall_factor * lg;
  const std::size_t stage_limit = opts.stage_factor * lg;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<SamplePoint> columns;

  auto unit_cost = [&] { return std::max<std::uint64_t>(1, columns.size()); };

  // Leftmost (or rightmost) consistent copy with label above `above`.
  auto extreme = [&](bool leftmost, std::size_t above) -> std::optional<std::size_t> {
    ComparisonOracle cmp;
    cmp.cost = unit_cost();
    cmp.keys.resize(C);
    for (std::size_t i = 0; i < C; ++i) {
      const std::size_t label = i + 1;
      const bool ok = label > above && copy_matches_columns(pattern, columns, label);
      cmp.keys[i] = ok ? (leftmost ? static_cast<double>(i) : -static_cast<double>(i)) : kInf;
    }
    for (unsigned a = 0; a < opts.attempts; ++a) {
      const SearchResult r = find_min(cmp, rng, ledger, opts.search);
      const std::size_t label = *r.found + 1;
      if (label > above && consistency_oracle(pattern, columns, label, ledger)) return label;
    }
    return std::nullopt;
  };

  // A column shared by all copies in [lo, hi] where copies a and b differ.
  auto differing_column = [&](std::size_t lo, std::size_t hi, std::size_t a,
                              std::size_t b) -> std::optional<std::size_t> {
    const ColumnRange range = stabbing_range(m, lo, hi);
    std::vector<std::size_t> marked;
    for (std::size_t c = range.first; c <= range.last; ++c)
      if (copy_char(pattern, a, c) != copy_char(pattern, b, c)) marked.push_back(c - range.first);
    const SetOracle oracle(range.width(), std::move(marked));
    for (unsigned t = 0; t < opts.attempts; ++t) {
      const SearchResult r = bbht_search(oracle, rng, ledger, opts.search);
      if (r.found) return range.first + *r.found;
    }
    return std::nullopt;
  };

  auto choose = [&](std::size_t col, std::size_t a, std::size_t b) {
    const char ch = copy_char(pattern, rng.bernoulli(0.5) ? a : b, col);
    columns.push_back({col, ch});
  };

  auto framed = [&](std::size_t focal) -> std::optional<DeterministicSample> {
    for (const SamplePoint& pt : columns)
      if (pt.position + 1 < focal || pt.position + 1 - focal >= m) return std::nullopt;
    return sample_from_columns(columns, focal, SampleSource::quantum_sim);
  };

  std::size_t stalls = 0;
  std::optional<std::size_t> gap;
  std::size_t focal = 0;
  for (std::size_t stage = 1;; ++stage) {
    if (stage > stage_limit) throw std::runtime_error("build_ds_quantum: stage limit exceeded");
    auto lo = extreme(true, 0);
    auto hi = extreme(false, 0);
    if (lo && hi && *lo == *hi) {
      // Confirm no other copy survives.
      const std::size_t only = *lo;
      std::vector<std::size_t> others;
      for (std::size_t j = 1; j <= C; ++j)
        if (j != only && copy_matches_columns(pattern, columns, j)) others.push_back(j - 1);
      const SetOracle oracle(C, std::move(others), unit_cost());
      const SearchResult r = bbht_search(oracle, rng, ledger, opts.search);
      if (!r.found) {
        focal = only;
        break;
      }
      const std::size_t other = *r.found + 1;
      lo = std::min(only, other);
      hi = std::max(only, other);
    }
    if (lo && hi && *lo < *hi) {
      if (auto col = differing_column(*lo, *hi, *lo, *hi)) {
        choose(*col, *lo, *hi);
        stalls = 0;
        continue;
      }
      // Leftmost and rightmost agree; compare the leftmost with its successor.
      if (auto lo2 = extreme(true, *lo); lo2 && *lo2 <= *hi) {
        if (auto col = differing_column(*lo, *hi, *lo, *lo2)) {
          choose(*col, *lo, *lo2);
          stalls = 0;
          continue;
        }
        gap = *lo2 - *lo;
      }
    }
    if (++stalls >= stall_limit) {
      if (!gap || !lo) return std::nullopt;
      auto partial = framed(*lo);
      if (!partial) return std::nullopt;
      PeriodInfo info;
      info.classification = Periodicity::periodic;
      info.period = *gap;
      info.partial_sample = std::move(partial);
      return info;
    }
  }

  auto ds = framed(focal);
  if (!ds) return std::nullopt;
  return Preprocessing{std::move(*ds)};
}

}  // namespace qsm
