#include "qsm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "qsm/analysis.hpp"
#include "qsm/reference.hpp"

namespace qsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Best of R independent minimum-finding runs.  Each returned element is
// checked with one direct predicate call; elements at +infinity are dropped.
std::optional<std::size_t> repeated_min(const ComparisonOracle& cmp, unsigned R, Rng& rng,
                                        QueryLedger& ledger, const SearchOptions& opts) {
  std::optional<std::size_t> best;
  for (unsigned r = 0; r < R; ++r) {
    const std::size_t y = *find_min(cmp, rng, ledger, opts).found;
    ledger.charge(cmp.cost);
    if (std::isfinite(cmp.keys[y]) && (!best || cmp.keys[y] < cmp.keys[*best])) best = y;
  }
  return best;
}

// P(report) for a two-candidate oracle.  dk is the distribution of the
// leftmost pick over consistent ranks (last entry: none), dl the same for the
// rightmost pick counted from the right; p(rank) is the report probability of
// a single candidate; distinct candidates run independently.
template <class F>
double combine_pair(const std::vector<double>& dk, const std::vector<double>& dl, std::size_t K,
                    F&& p) {
  double sum = 0.0;
  for (std::size_t a = 0; a <= K; ++a) {
    if (dk[a] == 0.0) continue;
    for (std::size_t b = 0; b <= K; ++b) {
      const double w = dk[a] * dl[b];
      if (w == 0.0) continue;
      const bool has_k = a < K, has_l = b < K;
      double v = 0.0;
      if (has_k && has_l) {
        const std::size_t rk = a, rl = K - 1 - b;
        v = rk == rl ? p(rk) : 1.0 - (1.0 - p(rk)) * (1.0 - p(rl));
      } else if (has_k) {
        v = p(a);
      } else if (has_l) {
        v = p(K - 1 - b);
      }
      sum += w * v;
    }
  }
  return sum;
}

std::size_t mismatches(const std::string& text, const std::string& pattern, std::size_t x) {
  const char* t = text.data() + x;
  const char* p = pattern.data();
  std::size_t d = 0;
  for (std::size_t j = 0; j < pattern.size(); ++j) d += t[j] != p[j];
  return d;
}

}  // namespace

void PatternText::validate() const {
  if (pattern.empty()) throw std::invalid_argument("PatternText: empty pattern");
  if (pattern.size() > text.size()) throw std::invalid_argument("PatternText: m exceeds n");
  if (alphabet_size < 1 || alphabet_size > 26)
    throw std::invalid_argument("PatternText: alphabet size must lie in [1, 26]");
  const char top = static_cast<char>('a' + alphabet_size - 1);
  for (const std::string* s : {&text, &pattern})
    for (char c : *s)
      if (c < 'a' || c > top) throw std::invalid_argument("PatternText: symbol outside alphabet");
}

BlockGrid::BlockGrid(std::size_t n_, std::size_t m) : n(n_), block_len(block_length(m)) {
  if (m == 0) throw std::invalid_argument("BlockGrid: empty pattern");
  num_blocks = (n + block_len - 1) / block_len;
}

std::size_t BlockGrid::last(std::size_t block) const {
  return std::min(n, (block + 1) * block_len) - 1;
}

bool oracle_g(const PatternText& pt, std::size_t i, std::size_t j, QueryLedger& ledger) {
  if (pt.m() > pt.n() || i > pt.n() - pt.m() || j >= pt.m())
    throw std::invalid_argument("oracle_g: position out of range");
  ledger.charge(1);
  return pt.text[i + j] != pt.pattern[j];
}

namespace {

SetOracle mismatch_oracle(const PatternText& pt, std::size_t i) {
  std::vector<std::size_t> bad;
  for (std::size_t j = 0; j < pt.m(); ++j)
    if (pt.text[i + j] != pt.pattern[j]) bad.push_back(j);
  return SetOracle(pt.m(), std::move(bad));
}

}  // namespace

bool verify_instance(const PatternText& pt, std::size_t i, Rng& rng, QueryLedger& ledger,
                     const SearchOptions& opts) {
  if (pt.m() > pt.n() || i > pt.n() - pt.m())
    throw std::invalid_argument("verify_instance: alignment out of range");
  return !bbht_search(mismatch_oracle(pt, i), rng, ledger, opts).found.has_value();
}

double verify_accept_probability(const PatternText& pt, std::size_t i, const SearchOptions& opts) {
  if (pt.m() > pt.n() || i > pt.n() - pt.m())
    throw std::invalid_argument("verify_accept_probability: alignment out of range");
  return 1.0 - bbht_success_probability(pt.m(), mismatches(pt.text, pt.pattern, i), opts);
}

namespace {

bool exact_check(const PatternText& pt, std::size_t x, bool enabled, QueryLedger& ledger) {
  if (!enabled) return true;
  ledger.charge(pt.m());
  return pt.text.compare(x, pt.m(), pt.pattern) == 0;
}

}  // namespace

MatchResult match_baseline(const PatternText& pt, Rng& rng, QueryLedger& ledger,
                           const MatchOptions& opts) {
  pt.validate();
  const std::size_t n = pt.n(), m = pt.m(), N = n - m + 1;
  const std::vector<std::size_t> occ = kmp_all(pt.text, pt.pattern);
  std::vector<double> accept_by_d(m + 1, -1.0);
  std::vector<double> error(N, 0.0);
  for (std::size_t x = 0; x < N; ++x) {
    const std::size_t d = mismatches(pt.text, pt.pattern, x);
    if (d == 0) continue;
    if (accept_by_d[d] < 0.0) accept_by_d[d] = 1.0 - bbht_success_probability(m, d, opts.search);
    error[x] = accept_by_d[d];
  }
  MatchResult res;
  res.mode = MatchMode::baseline;
  std::optional<std::size_t> hit;
  {
    QueryLedger::Scope scope(ledger, Phase::block_search);
    const FunctionOracle f(
        N, occ, call_cap(m, opts.search.budget_factor), OracleKind::probabilistic,
        [&](std::size_t x, Rng& r, QueryLedger& l) { return verify_instance(pt, x, r, l, opts.search); },
        [&](std::size_t x) { return error[x]; });
    hit = search_amplified(f, rng, ledger, opts.search).found;
  }
  if (hit) {
    QueryLedger::Scope scope(ledger, Phase::in_block);
    if (exact_check(pt, *hit, opts.final_verification, ledger)) res.occurrence = hit;
  }
  res.ledger_total = ledger.total();
  return res;
}

bool oracle_k(const PatternText& pt, const DeterministicSample& ds, std::size_t block,
              std::size_t j, QueryLedger& ledger) {
  const BlockGrid grid(pt.n(), pt.m());
  if (block >= grid.num_blocks || j >= grid.block_len)
    throw std::invalid_argument("oracle_k: instance out of range");
  const std::size_t x = grid.first(block) + j;
  if (x + pt.m() > pt.n()) return false;
  ledger.charge(ds.points.size());
  return instance_consistent(pt.text, pt.pattern, ds.points, x);
}

struct BlockMatcher::Impl {
  struct Block {
    std::size_t s0 = 0, e = 0;
    std::size_t count = 0;                // admissible left endpoints
    std::vector<std::size_t> consistent;  // sample-consistent endpoints, ascending
    bool has_occurrence = false;
  };

  const PatternText& pt;
  MatchOptions opts;
  MatchMode mode;
  std::vector<SamplePoint> points;
  std::size_t period = 0;
  BlockGrid grid;
  std::vector<char> occurs;  // by text position
  std::vector<Block> blocks;
  std::vector<std::size_t> good_blocks;
  unsigned reps;
  std::uint64_t unit_cost;
  std::uint64_t coherent_cost;
  mutable std::vector<double> report_prob;  // NaN until computed
  mutable std::vector<double> accept_by_d;

  Impl(const PatternText& p, const Preprocessing& prep, const MatchOptions& o)
      : pt(p), opts(o), mode(MatchMode::aperiodic), grid(p.n(), p.m()) {
    pt.validate();
    const std::size_t n = pt.n(), m = pt.m();
    if (const auto* ds = std::get_if<DeterministicSample>(&prep)) {
      points = ds->points;
    } else {
      const auto& info = std::get<PeriodInfo>(prep);
      if (info.classification != Periodicity::periodic || info.period == 0)
        throw std::invalid_argument("BlockMatcher: PeriodInfo must describe a periodic pattern");
      mode = MatchMode::periodic;
      period = info.period;
      if (info.partial_sample) points = info.partial_sample->points;
    }
    for (const SamplePoint& sp : points)
      if (sp.position >= m || pt.pattern[sp.position] != sp.ch)
        throw MalformedSample("BlockMatcher: sample point does not fit the pattern");
    reps = mode == MatchMode::periodic ? opts.periodic_repetitions : opts.aperiodic_repetitions;
    if (reps == 0) throw std::invalid_argument("BlockMatcher: repetitions must be positive");

    occurs.assign(n, 0);
    for (std::size_t x : kmp_all(pt.text, pt.pattern)) occurs[x] = 1;
    blocks.resize(grid.num_blocks);
    for (std::size_t i = 0; i < grid.num_blocks; ++i) {
      Block& b = blocks[i];
      b.s0 = grid.first(i);
      b.e = grid.last(i);
      if (b.s0 > n - m) continue;
      const std::size_t top = std::min(b.e, n - m);
      b.count = top - b.s0 + 1;
      for (std::size_t x = b.s0; x <= top; ++x) {
        if (instance_consistent(pt.text, pt.pattern, points, x)) b.consistent.push_back(x);
        if (occurs[x]) b.has_occurrence = true;
      }
      if (b.has_occurrence) good_blocks.push_back(i);
    }

    const SearchOptions& s = opts.search;
    const std::size_t B = grid.block_len;
    unit_cost = std::max<std::uint64_t>(1, points.size());
    const std::uint64_t extreme = reps * (call_cap(B, s.descent_budget_factor) + 1) * unit_cost;
    if (mode == MatchMode::aperiodic) {
      coherent_cost = 2 * extreme + 2 * call_cap(m, s.budget_factor);
    } else {
      const std::uint64_t stretch =
          reps * ((call_cap(B, s.descent_budget_factor) + 1) + (call_cap(m, s.descent_budget_factor) + 1));
      coherent_cost = 2 * extreme + 2 * stretch;
    }
    report_prob.assign(grid.num_blocks, std::numeric_limits<double>::quiet_NaN());
    accept_by_d.assign(m + 1, -1.0);
  }

  // ---- direct evaluation ----

  std::optional<std::size_t> extreme(const Block& b, bool leftmost, Rng& rng,
                                     QueryLedger& ledger) const {
    ComparisonOracle cmp;
    cmp.cost = unit_cost;
    cmp.keys.assign(b.count, kInf);
    for (std::size_t x : b.consistent) {
      const double o = static_cast<double>(x - b.s0);
      cmp.keys[x - b.s0] = leftmost ? o : -o;
    }
    const auto r = repeated_min(cmp, reps, rng, ledger, opts.search);
    if (!r) return std::nullopt;
    return b.s0 + *r;
  }

  std::size_t back_limit(const Block& b) const { return b.e - b.s0 + 1; }
  std::size_t fwd_limit(const Block& b) const { return std::min(pt.m(), pt.n() - 1 - b.e); }

  std::vector<std::size_t> back_mismatches(const Block& b, std::size_t z) const {
    std::vector<std::size_t> out;
    for (std::size_t o = 0; o < back_limit(b); ++o) {
      const std::size_t x = b.e - o;
      if (pt.text[x] != periodic_char(pt.pattern, period, z, x)) out.push_back(o);
    }
    return out;
  }

  std::vector<std::size_t> fwd_mismatches(const Block& b, std::size_t z) const {
    std::vector<std::size_t> out;
    for (std::size_t o = 0; o < fwd_limit(b); ++o) {
      const std::size_t x = b.e + 1 + o;
      if (pt.text[x] != periodic_char(pt.pattern, period, z, x)) out.push_back(o);
    }
    return out;
  }

  // Length of the consistent stretch: first mismatch offset found, or the limit.
  std::size_t stretch(std::size_t limit, const std::vector<std::size_t>& bad, Rng& rng,
                      QueryLedger& ledger) const {
    if (limit == 0) return 0;
    ComparisonOracle cmp;
    cmp.keys.assign(limit, kInf);
    for (std::size_t o : bad) cmp.keys[o] = static_cast<double>(o);
    const auto r = repeated_min(cmp, reps, rng, ledger, opts.search);
    return r ? *r : limit;
  }

  std::optional<std::size_t> run_h(std::size_t i, Rng& rng, QueryLedger& ledger) const {
    const Block& b = blocks.at(i);
    if (b.count == 0) return std::nullopt;
    const auto k = extreme(b, true, rng, ledger);
    const auto l = extreme(b, false, rng, ledger);
    std::vector<std::size_t> anchors;
    if (k) anchors.push_back(*k);
    if (l && l != k) anchors.push_back(*l);
    if (mode == MatchMode::aperiodic) {
      for (std::size_t z : anchors)
        if (verify_instance(pt, z, rng, ledger, opts.search)) return z;
      return std::nullopt;
    }
    std::optional<std::size_t> best;
    for (std::size_t z : anchors) {
      const std::size_t back = stretch(back_limit(b), back_mismatches(b, z), rng, ledger);
      const std::size_t fwd = stretch(fwd_limit(b), fwd_mismatches(b, z), rng, ledger);
      const auto q = window_candidate(b.e, back, fwd, z, period, pt.m());
      if (q && (!best || *q < *best)) best = q;
    }
    return best;
  }

  // ---- exact analysis ----

  double accept(std::size_t x) const {
    const std::size_t d = mismatches(pt.text, pt.pattern, x);
    if (d == 0) return 1.0;
    if (accept_by_d[d] < 0.0)
      accept_by_d[d] = 1.0 - bbht_success_probability(pt.m(), d, opts.search);
    return accept_by_d[d];
  }

  // P(anchor z yields a candidate).
  double anchor_probability(const Block& b, std::size_t z) const {
    const std::size_t nb = back_limit(b), nf = fwd_limit(b), m = pt.m();
    const auto mb = back_mismatches(b, z);
    const auto db = best_of(descent_singletons(nb, mb.size(), opts.search), reps);
    std::vector<double> fwd_tail;  // fwd_tail[a] = P(forward stretch >= a)
    fwd_tail.assign(nf + 2, 0.0);
    if (nf == 0) {
      fwd_tail[0] = 1.0;
    } else {
      const auto mf = fwd_mismatches(b, z);
      const auto df = best_of(descent_singletons(nf, mf.size(), opts.search), reps);
      for (std::size_t lvl = 0; lvl < df.size(); ++lvl) {
        const std::size_t a = lvl < mf.size() ? mf[lvl] : nf;
        fwd_tail[a] += df[lvl];
      }
      for (std::size_t a = nf; a-- > 0;) fwd_tail[a] += fwd_tail[a + 1];
    }
    double p = 0.0;
    for (std::size_t lvl = 0; lvl < db.size(); ++lvl) {
      if (db[lvl] == 0.0) continue;
      const std::size_t back = lvl < mb.size() ? mb[lvl] : nb;
      const auto q = window_candidate(b.e, back, nf, z, period, m);
      if (!q) continue;
      const std::size_t need = *q + m - 1 - b.e;
      if (need <= nf) p += db[lvl] * fwd_tail[need];
    }
    return p;
  }

  double compute_report(std::size_t i) const {
    const Block& b = blocks[i];
    const std::size_t K = b.consistent.size();
    if (K == 0) return 0.0;
    const auto dk = best_of(descent_singletons(b.count, K, opts.search), reps);
    std::vector<double> single(K, -1.0);
    std::map<std::size_t, double> by_residue;
    auto p = [&](std::size_t rank) {
      double& v = single[rank];
      if (v < 0.0) {
        const std::size_t z = b.consistent[rank];
        if (mode == MatchMode::aperiodic) {
          v = accept(z);
        } else {
          auto it = by_residue.find(z % period);
          if (it == by_residue.end())
            it = by_residue.emplace(z % period, anchor_probability(b, z)).first;
          v = it->second;
        }
      }
      return v;
    };
    return std::clamp(combine_pair(dk, dk, K, p), 0.0, 1.0);
  }

  double report(std::size_t i) const {
    if (std::isnan(report_prob.at(i))) report_prob[i] = compute_report(i);
    return report_prob[i];
  }

  double h_error(std::size_t i) const {
    return blocks[i].has_occurrence ? 1.0 - report(i) : report(i);
  }

  // ---- drivers ----

  std::optional<std::size_t> extract(std::size_t block, Rng& rng, QueryLedger& ledger) const {
    QueryLedger::Scope scope(ledger, Phase::in_block);
    for (unsigned a = 0; a < opts.extraction_attempts; ++a) {
      const auto cand = run_h(block, rng, ledger);
      if (cand && exact_check(pt, *cand, opts.final_verification, ledger)) return cand;
    }
    return std::nullopt;
  }

  MatchResult find_any(Rng& rng, QueryLedger& ledger) const {
    MatchResult res;
    res.mode = mode;
    std::optional<std::size_t> block;
    {
      QueryLedger::Scope scope(ledger, Phase::block_search);
      const FunctionOracle h(
          grid.num_blocks, good_blocks, coherent_cost, OracleKind::probabilistic,
          [this](std::size_t i, Rng& r, QueryLedger& l) { return run_h(i, r, l).has_value(); },
          [this](std::size_t i) { return h_error(i); });
      block = search_amplified(h, rng, ledger, opts.search).found;
    }
    if (block) res.occurrence = extract(*block, rng, ledger);
    res.ledger_total = ledger.total();
    return res;
  }

  MatchResult find_leftmost(Rng& rng, QueryLedger& ledger) const {
    MatchResult res;
    res.mode = mode;
    const std::size_t nb = grid.num_blocks;
    const unsigned r = amplification_repetitions(nb, opts.search.repetition_scale);
    std::vector<double> amp_error(nb);
    for (std::size_t i = 0; i < nb; ++i) amp_error[i] = majority_error(r, h_error(i));
    std::vector<signed char> memo(nb, -1);

    auto amplified_h = [&](std::size_t i, Rng& rr, QueryLedger& ll) {
      if (opts.memoize_h && memo[i] >= 0) return memo[i] == 1;
      unsigned ones = 0;
      for (unsigned t = 0; t < r; ++t) ones += run_h(i, rr, ll).has_value() ? 1 : 0;
      const bool v = 2 * ones > r;
      if (opts.memoize_h) memo[i] = v ? 1 : 0;
      return v;
    };

    std::optional<std::size_t> block;
    {
      QueryLedger::Scope scope(ledger, Phase::block_search);
      // Blocks reporting compare by index; silent blocks sit at +infinity.
      const BetterFactory better = [&](std::size_t y) -> std::unique_ptr<Oracle> {
        const std::size_t tau = amplified_h(y, rng, ledger) ? y : nb;
        std::vector<std::size_t> marked;
        for (std::size_t g : good_blocks)
          if (g < tau) marked.push_back(g);
        return std::make_unique<FunctionOracle>(
            nb, std::move(marked), coherent_cost * r, OracleKind::amplified,
            [&, tau](std::size_t i, Rng& rr, QueryLedger& ll) {
              return i < tau && amplified_h(i, rr, ll);
            },
            [&, tau](std::size_t i) { return i < tau ? amp_error[i] : 0.0; });
      };
      const std::size_t y = *threshold_descent(nb, better, rng, ledger, opts.search).found;
      if (amplified_h(y, rng, ledger)) block = y;
    }
    if (block) res.occurrence = extract(*block, rng, ledger);
    res.ledger_total = ledger.total();
    return res;
  }
};

BlockMatcher::BlockMatcher(const PatternText& pt, const Preprocessing& prep,
                           const MatchOptions& opts)
    : impl_(std::make_unique<Impl>(pt, prep, opts)) {}
BlockMatcher::~BlockMatcher() = default;

MatchMode BlockMatcher::mode() const { return impl_->mode; }
const BlockGrid& BlockMatcher::grid() const { return impl_->grid; }
std::uint64_t BlockMatcher::h_cost() const { return impl_->coherent_cost; }
bool BlockMatcher::block_has_occurrence(std::size_t block) const {
  return impl_->blocks.at(block).has_occurrence;
}
double BlockMatcher::h_report_probability(std::size_t block) const { return impl_->report(block); }
std::optional<std::size_t> BlockMatcher::run_h(std::size_t block, Rng& rng,
                                               QueryLedger& ledger) const {
  return impl_->run_h(block, rng, ledger);
}
MatchResult BlockMatcher::find_any(Rng& rng, QueryLedger& ledger) const {
  return impl_->find_any(rng, ledger);
}
MatchResult BlockMatcher::find_leftmost(Rng& rng, QueryLedger& ledger) const {
  return impl_->find_leftmost(rng, ledger);
}

bool oracle_h_aperiodic(const PatternText& pt, const DeterministicSample& ds, std::size_t block,
                        Rng& rng, QueryLedger& ledger, const MatchOptions& opts) {
  const BlockMatcher bm(pt, Preprocessing{ds}, opts);
  return bm.run_h(block, rng, ledger).has_value();
}

std::optional<std::size_t> oracle_h_periodic(const PatternText& pt, const PeriodInfo& pinfo,
                                             std::size_t block, Rng& rng, QueryLedger& ledger,
                                             const MatchOptions& opts) {
  const BlockMatcher bm(pt, Preprocessing{pinfo}, opts);
  return bm.run_h(block, rng, ledger);
}

MatchResult find_any_occurrence(const PatternText& pt, const Preprocessing& prep, Rng& rng,
                                QueryLedger& ledger, const MatchOptions& opts) {
  return BlockMatcher(pt, prep, opts).find_any(rng, ledger);
}

MatchResult find_leftmost_occurrence(const PatternText& pt, const Preprocessing& prep, Rng& rng,
                                     QueryLedger& ledger, const MatchOptions& opts) {
  return BlockMatcher(pt, prep, opts).find_leftmost(rng, ledger);
}

}  // namespace qsm
