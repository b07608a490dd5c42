#include "qsm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "qsm/ds.hpp"
#include "qsm/reference.hpp"

namespace qsm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_unsigned(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_unsigned<std::size_t>(key, item));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

template <class E>
E parse_enum(const std::string& key, const std::string& v,
             std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, value] : options)
    if (v == name) return value;
  throw ConfigError("config key '" + key + "': unknown value '" + v + "'");
}

char symbol(std::size_t k) { return static_cast<char>('a' + k); }

std::string random_string(std::size_t len, std::size_t sigma, Rng& rng) {
  std::string s(len, 'a');
  for (char& c : s) c = symbol(rng.index(sigma));
  return s;
}

}  // namespace

std::string to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::baseline: return "baseline";
    case ExperimentMode::aperiodic: return "aperiodic";
    case ExperimentMode::periodic: return "periodic";
    case ExperimentMode::preprocess: return "preprocess";
    case ExperimentMode::primitives: return "primitives";
  }
  return "?";
}

std::string to_string(MatchMode m) {
  switch (m) {
    case MatchMode::baseline: return "baseline";
    case MatchMode::aperiodic: return "aperiodic";
    case MatchMode::periodic: return "periodic";
  }
  return "?";
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::none: return "none";
    case Normalization::log_ratio_log_m: return "log2(sqrt(n/m))*log2(m)";
    case Normalization::log2_m_squared: return "log2(m)^2";
    case Normalization::sqrt_m: return "sqrt(m)";
  }
  return "?";
}

std::string to_string(FitMetric m) {
  switch (m) {
    case FitMetric::total: return "total";
    case FitMetric::matcher: return "matcher";
    case FitMetric::preprocess: return "preprocess";
  }
  return "?";
}

Normalization parse_normalization(const std::string& s) {
  return parse_enum<Normalization>("normalize", s,
                                   {{"none", Normalization::none},
                                    {"log_ratio_log_m", Normalization::log_ratio_log_m},
                                    {"log2_m_squared", Normalization::log2_m_squared},
                                    {"sqrt_m", Normalization::sqrt_m}});
}

FitMetric parse_metric(const std::string& s) {
  return parse_enum<FitMetric>("metric", s,
                               {{"total", FitMetric::total},
                                {"matcher", FitMetric::matcher},
                                {"preprocess", FitMetric::preprocess}});
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "mode") {
    cfg.mode = parse_enum<ExperimentMode>(key, v,
                                          {{"baseline", ExperimentMode::baseline},
                                           {"aperiodic", ExperimentMode::aperiodic},
                                           {"periodic", ExperimentMode::periodic},
                                           {"preprocess", ExperimentMode::preprocess},
                                           {"primitives", ExperimentMode::primitives}});
  } else if (key == "n_values") {
    cfg.n_values = parse_list(key, v);
  } else if (key == "m_values") {
    cfg.m_values = parse_list(key, v);
  } else if (key == "alphabet_size") {
    cfg.alphabet_size = parse_unsigned<std::size_t>(key, v);
  } else if (key == "trials") {
    cfg.trials = parse_unsigned<std::size_t>(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_unsigned<std::uint64_t>(key, v);
  } else if (key == "generator") {
    cfg.generator = parse_enum<Generator>(key, v,
                                          {{"random", Generator::random},
                                           {"planted", Generator::planted},
                                           {"adversarial_periodic", Generator::adversarial_periodic},
                                           {"all_same", Generator::all_same}});
  } else if (key == "budget_factor") {
    cfg.budget_factor = parse_real(key, v);
  } else if (key == "memoize_h") {
    cfg.memoize_h = parse_bool(key, v);
  } else if (key == "output_path") {
    cfg.output_path = v;
  } else if (key == "query") {
    cfg.query = parse_enum<QueryKind>(key, v, {{"any", QueryKind::any}, {"leftmost", QueryKind::leftmost}});
  } else if (key == "preprocess") {
    cfg.preprocess = parse_enum<PreprocessKind>(
        key, v, {{"quantum", PreprocessKind::quantum}, {"classical", PreprocessKind::classical}});
  } else if (key == "plant") {
    cfg.plant = parse_bool(key, v);
  } else if (key == "period_word") {
    cfg.period_word = v;
  } else if (key == "period_length") {
    cfg.period_length = parse_unsigned<std::size_t>(key, v);
  } else if (key == "defect_spacing") {
    cfg.defect_spacing = parse_unsigned<std::size_t>(key, v);
  } else if (key == "final_verification") {
    cfg.final_verification = parse_bool(key, v);
  } else if (key == "repetition_scale") {
    cfg.repetition_scale = parse_real(key, v);
  } else if (key == "aperiodic_repetitions") {
    cfg.aperiodic_repetitions = parse_unsigned<unsigned>(key, v);
  } else if (key == "periodic_repetitions") {
    cfg.periodic_repetitions = parse_unsigned<unsigned>(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (alphabet_size < 2 || alphabet_size > 26) throw ConfigError("alphabet_size must lie in [2, 26]");
  if (!(budget_factor > 0.0)) throw ConfigError("budget_factor must be positive");
  if (!(repetition_scale > 0.0)) throw ConfigError("repetition_scale must be positive");
  if (aperiodic_repetitions < 1 || periodic_repetitions < 1)
    throw ConfigError("repetition counts must be at least 1");
  if (n_values.empty() || m_values.empty()) throw ConfigError("n_values and m_values are required");
  for (std::size_t n : n_values) {
    if (n == 0) throw ConfigError("n_values entries must be positive");
    for (std::size_t m : m_values) {
      if (mode != ExperimentMode::primitives && m == 0) throw ConfigError("m_values entries must be positive");
      if (m > n) throw ConfigError("m = " + std::to_string(m) + " exceeds n = " + std::to_string(n));
    }
  }
  if (generator == Generator::adversarial_periodic) {
    if (period_word.empty() && period_length == 0) throw ConfigError("period_length must be positive");
    for (char c : period_word)
      if (c < 'a' || c >= symbol(alphabet_size)) throw ConfigError("period_word symbol outside alphabet");
  }
}

MatchOptions ExperimentConfig::match_options() const {
  MatchOptions o;
  o.search.budget_factor = budget_factor;
  o.search.repetition_scale = repetition_scale;
  o.memoize_h = memoize_h;
  o.final_verification = final_verification;
  o.aperiodic_repetitions = aperiodic_repetitions;
  o.periodic_repetitions = periodic_repetitions;
  return o;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

PatternText generate_instance(const ExperimentConfig& cfg, std::size_t n, std::size_t m, Rng& rng) {
  if (m == 0 || m > n) throw ConfigError("generate_instance: need 1 <= m <= n");
  const std::size_t sigma = cfg.alphabet_size;
  PatternText pt;
  pt.alphabet_size = sigma;
  switch (cfg.generator) {
    case Generator::random:
      pt.text = random_string(n, sigma, rng);
      pt.pattern = random_string(m, sigma, rng);
      break;
    case Generator::planted: {
      pt.text = random_string(n, sigma, rng);
      pt.pattern = random_string(m, sigma, rng);
      const std::size_t at = rng.index(n - m + 1);
      pt.text.replace(at, m, pt.pattern);
      break;
    }
    case Generator::adversarial_periodic: {
      const std::string v =
          cfg.period_word.empty() ? random_string(cfg.period_length, sigma, rng) : cfg.period_word;
      pt.pattern.resize(m);
      for (std::size_t i = 0; i < m; ++i) pt.pattern[i] = v[i % v.size()];
      const std::size_t phase = rng.index(v.size());
      pt.text.resize(n);
      for (std::size_t i = 0; i < n; ++i) pt.text[i] = v[(i + phase) % v.size()];
      // Periodic text broken at regular intervals: every window of length m
      // holds a defect, so only a planted copy can match.
      const std::size_t spacing = cfg.defect_spacing ? cfg.defect_spacing : std::max<std::size_t>(1, m / 2);
      for (std::size_t pos = rng.index(spacing); pos < n; pos += spacing) {
        const std::size_t shift = 1 + rng.index(sigma - 1);
        pt.text[pos] = symbol((static_cast<std::size_t>(pt.text[pos] - 'a') + shift) % sigma);
      }
      if (cfg.plant) pt.text.replace(rng.index(n - m + 1), m, pt.pattern);
      break;
    }
    case Generator::all_same:
      pt.text.assign(n, 'a');
      pt.pattern.assign(m, 'a');
      break;
  }
  return pt;
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t config_id, std::size_t trial) {
  return derive_seed(cfg.seed, config_id, trial);
}

namespace {

void fill_truth(TrialRecord& rec, const std::vector<std::size_t>& occ) {
  rec.truth_count = occ.size();
  if (!occ.empty()) rec.truth_leftmost = occ.front();
}

void fill_ledger(TrialRecord& rec, const QueryLedger& ledger) {
  rec.ledger_total = ledger.total();
  rec.ledger_preprocess = ledger.phase_total(Phase::preprocess);
  rec.ledger_block_search = ledger.phase_total(Phase::block_search);
  rec.ledger_in_block = ledger.phase_total(Phase::in_block);
}

std::optional<Preprocessing> preprocess(const ExperimentConfig& cfg, const std::string& pattern,
                                        Rng& rng, QueryLedger& ledger) {
  QueryLedger::Scope scope(ledger, Phase::preprocess);
  if (cfg.preprocess == PreprocessKind::classical || pattern.size() < 2)
    return build_ds_classical(pattern);
  DsOptions opts;
  opts.search.budget_factor = cfg.budget_factor;
  for (int attempt = 0; attempt < 3; ++attempt)
    if (auto p = build_ds_quantum(pattern, rng, ledger, opts)) return p;
  return std::nullopt;
}

TrialRecord run_match_trial(const ExperimentConfig& cfg, std::size_t config_id, std::size_t trial,
                            std::size_t n, std::size_t m) {
  TrialRecord rec;
  rec.config_id = config_id;
  rec.trial_index = trial;
  rec.seed = trial_seed(cfg, config_id, trial);
  rec.n = n;
  rec.m = m;
  Rng gen(derive_seed(rec.seed, 1));
  Rng alg(derive_seed(rec.seed, 2));
  const PatternText pt = generate_instance(cfg, n, m, gen);
  const std::vector<std::size_t> occ = kmp_all(pt.text, pt.pattern);
  fill_truth(rec, occ);
  const MatchOptions opts = cfg.match_options();
  QueryLedger ledger;
  MatchResult res;
  if (cfg.mode == ExperimentMode::baseline) {
    res = match_baseline(pt, alg, ledger, opts);
  } else {
    const auto prep = preprocess(cfg, pt.pattern, alg, ledger);
    if (prep) {
      const BlockMatcher bm(pt, *prep, opts);
      res = cfg.query == QueryKind::leftmost ? bm.find_leftmost(alg, ledger) : bm.find_any(alg, ledger);
    } else {
      res.mode = cfg.mode == ExperimentMode::periodic ? MatchMode::periodic : MatchMode::aperiodic;
    }
  }
  rec.mode = to_string(res.mode);
  rec.reported = res.occurrence;
  const bool in_truth = res.occurrence && std::binary_search(occ.begin(), occ.end(), *res.occurrence);
  rec.false_positive = res.occurrence && !in_truth;
  if (cfg.query == QueryKind::leftmost && cfg.mode != ExperimentMode::baseline)
    rec.correct = res.occurrence ? (rec.truth_leftmost == res.occurrence) : occ.empty();
  else
    rec.correct = res.occurrence ? in_truth : occ.empty();
  fill_ledger(rec, ledger);
  return rec;
}

TrialRecord run_preprocess_trial(const ExperimentConfig& cfg, std::size_t config_id,
                                 std::size_t trial, std::size_t n, std::size_t m) {
  TrialRecord rec;
  rec.config_id = config_id;
  rec.trial_index = trial;
  rec.seed = trial_seed(cfg, config_id, trial);
  rec.n = n;
  rec.m = m;
  rec.mode = "preprocess";
  Rng gen(derive_seed(rec.seed, 1));
  Rng alg(derive_seed(rec.seed, 2));
  const PatternText pt = generate_instance(cfg, n, m, gen);
  const PeriodInfo truth = detect_period_classical(pt.pattern);
  rec.truth_count = truth.period;
  QueryLedger ledger;
  const auto prep = preprocess(cfg, pt.pattern, alg, ledger);
  if (prep) {
    if (const auto* ds = std::get_if<DeterministicSample>(&*prep)) {
      const bool valid = verify_ds_property(pt.pattern, *ds);
      rec.false_positive = !valid;
      rec.correct = valid && truth.classification == Periodicity::aperiodic;
    } else {
      const auto& info = std::get<PeriodInfo>(*prep);
      rec.reported = info.period;
      rec.correct = truth.classification == Periodicity::periodic && info.period == truth.period;
    }
  }
  fill_ledger(rec, ledger);
  return rec;
}

TrialRecord run_primitive_trial(const ExperimentConfig& cfg, std::size_t config_id,
                                std::size_t trial, std::size_t N, std::size_t t, bool minimum) {
  TrialRecord rec;
  rec.config_id = config_id;
  rec.trial_index = trial;
  rec.seed = trial_seed(cfg, config_id, trial);
  rec.n = N;
  rec.m = t;
  rec.mode = minimum ? "find_min" : "bbht";
  Rng gen(derive_seed(rec.seed, 1));
  Rng alg(derive_seed(rec.seed, 2));
  SearchOptions opts;
  opts.budget_factor = cfg.budget_factor;
  QueryLedger ledger;
  // Partial Fisher-Yates: a uniform permutation prefix.
  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i + 1 < N; ++i) std::swap(perm[i], perm[i + gen.index(N - i)]);
  if (minimum) {
    ComparisonOracle cmp;
    cmp.keys.resize(N);
    for (std::size_t i = 0; i < N; ++i) cmp.keys[perm[i]] = static_cast<double>(i);
    rec.truth_count = 1;
    rec.truth_leftmost = perm[0];
    const SearchResult r = find_min(cmp, alg, ledger, opts);
    rec.reported = r.found;
    rec.correct = r.found == perm[0];
  } else {
    std::vector<std::size_t> marked(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(t));
    std::sort(marked.begin(), marked.end());
    rec.truth_count = t;
    if (!marked.empty()) rec.truth_leftmost = marked.front();
    const SetOracle oracle(N, marked);
    const SearchResult r = bbht_search(oracle, alg, ledger, opts);
    rec.reported = r.found;
    rec.correct = r.found ? std::binary_search(marked.begin(), marked.end(), *r.found) : t == 0;
    rec.false_positive = r.found && !rec.correct;
  }
  fill_ledger(rec, ledger);
  return rec;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> out;
  std::size_t config_id = 0;
  for (std::size_t n : cfg.n_values) {
    for (std::size_t m : cfg.m_values) {
      if (cfg.mode == ExperimentMode::primitives) {
        for (bool minimum : {false, true}) {
          for (std::size_t t = 0; t < cfg.trials; ++t)
            out.push_back(run_primitive_trial(cfg, config_id, t, n, m, minimum));
          ++config_id;
        }
        continue;
      }
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (cfg.mode == ExperimentMode::preprocess)
          out.push_back(run_preprocess_trial(cfg, config_id, t, n, m));
        else
          out.push_back(run_match_trial(cfg, config_id, t, n, m));
      }
      ++config_id;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.config_id, a.trial_index) < std::tie(b.config_id, b.trial_index);
  });
  return out;
}

ScalingFit fit_points(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_points: size mismatch");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 4) throw InsufficientData("scaling fit needs at least 4 distinct values");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InsufficientData("scaling fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  const double ss_res = syy - fit.exponent * sxy;
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.points = lx.size();
  fit.normalization = to_string(Normalization::none);
  return fit;
}

ScalingFit fit_scaling(const std::vector<TrialRecord>& records, const std::string& variable,
                       FitMetric metric, Normalization norm) {
  if (variable != "n" && variable != "m") throw std::invalid_argument("fit_scaling: variable must be n or m");
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t n = 0, m = 0;
  };
  std::map<std::size_t, Acc> groups;
  for (const TrialRecord& r : records) {
    const std::size_t key = variable == "n" ? r.n : r.m;
    Acc& a = groups[key];
    double v = static_cast<double>(r.ledger_total);
    if (metric == FitMetric::matcher) v = static_cast<double>(r.ledger_block_search + r.ledger_in_block);
    if (metric == FitMetric::preprocess) v = static_cast<double>(r.ledger_preprocess);
    a.sum += v;
    ++a.count;
    a.n = r.n;
    a.m = r.m;
  }
  if (groups.size() < 4) throw InsufficientData("scaling fit needs at least 4 distinct values of " + variable);
  std::vector<double> xs, ys;
  for (const auto& [key, a] : groups) {
    const double n = static_cast<double>(a.n), m = static_cast<double>(a.m);
    double d = 1.0;
    switch (norm) {
      case Normalization::none: break;
      case Normalization::log_ratio_log_m:
        d = std::log2(std::max(2.0, std::sqrt(n / m))) * std::log2(std::max(2.0, m));
        break;
      case Normalization::log2_m_squared: d = std::pow(std::log2(std::max(2.0, m)), 2); break;
      case Normalization::sqrt_m: d = std::sqrt(m); break;
    }
    xs.push_back(static_cast<double>(key));
    ys.push_back(a.sum / static_cast<double>(a.count) / d);
  }
  ScalingFit fit = fit_points(xs, ys);
  fit.variable = variable;
  fit.normalization = to_string(norm);
  fit.metric = to_string(metric);
  return fit;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "config_id,trial_index,seed,n,m,mode,reported,truth_count,truth_leftmost,correct,"
         "false_positive,ledger_total,ledger_preprocess,ledger_block_search,ledger_in_block\n";
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const TrialRecord& r : records) {
    out << r.config_id << ',' << r.trial_index << ',' << r.seed << ',' << r.n << ',' << r.m << ','
        << r.mode << ',' << opt(r.reported) << ',' << r.truth_count << ',' << opt(r.truth_leftmost)
        << ',' << (r.correct ? 1 : 0) << ',' << (r.false_positive ? 1 : 0) << ',' << r.ledger_total
        << ',' << r.ledger_preprocess << ',' << r.ledger_block_search << ',' << r.ledger_in_block
        << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("records CSV is empty");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 15) throw ConfigError("records CSV line " + std::to_string(lineno) + ": expected 15 fields");
    auto u = [&](std::size_t i) { return parse_unsigned<std::uint64_t>("records", f[i]); };
    auto o = [&](std::size_t i) -> std::optional<std::size_t> {
      if (f[i].empty()) return std::nullopt;
      return static_cast<std::size_t>(u(i));
    };
    TrialRecord r;
    r.config_id = u(0);
    r.trial_index = u(1);
    r.seed = u(2);
    r.n = u(3);
    r.m = u(4);
    r.mode = f[5];
    r.reported = o(6);
    r.truth_count = u(7);
    r.truth_leftmost = o(8);
    r.correct = u(9) != 0;
    r.false_positive = u(10) != 0;
    r.ledger_total = u(11);
    r.ledger_preprocess = u(12);
    r.ledger_block_search = u(13);
    r.ledger_in_block = u(14);
    out.push_back(std::move(r));
  }
  return out;
}

void write_fits_csv(std::ostream& out, const std::vector<ScalingFit>& fits) {
  out << "variable,metric,normalization,exponent,r_squared,points\n";
  for (const ScalingFit& f : fits)
    out << f.variable << ',' << f.metric << ',' << f.normalization << ',' << format_number(f.exponent)
        << ',' << format_number(f.r_squared) << ',' << f.points << '\n';
}

std::vector<ScalingFit> default_fits(const ExperimentConfig& cfg,
                                     const std::vector<TrialRecord>& records) {
  std::vector<ScalingFit> fits;
  const bool block = cfg.mode == ExperimentMode::aperiodic || cfg.mode == ExperimentMode::periodic;
  const FitMetric metric = cfg.mode == ExperimentMode::preprocess ? FitMetric::preprocess
                           : block                                ? FitMetric::matcher
                                                                  : FitMetric::total;
  for (const std::string var : {"n", "m"}) {
    const auto& values = var == "n" ? cfg.n_values : cfg.m_values;
    const std::set<std::size_t> distinct(values.begin(), values.end());
    if (distinct.size() < 4 || cfg.mode == ExperimentMode::primitives) continue;
    // Only fit along one axis at a time, holding the other fixed.
    const auto& other = var == "n" ? cfg.m_values : cfg.n_values;
    for (std::size_t fixed : std::set<std::size_t>(other.begin(), other.end())) {
      std::vector<TrialRecord> subset;
      for (const TrialRecord& r : records)
        if ((var == "n" ? r.m : r.n) == fixed) subset.push_back(r);
      try {
        fits.push_back(fit_scaling(subset, var, metric, Normalization::none));
      } catch (const InsufficientData&) {
      }
    }
  }
  if (cfg.mode == ExperimentMode::primitives) {
    for (const char* kind : {"bbht", "find_min"}) {
      std::set<std::size_t> ts(cfg.m_values.begin(), cfg.m_values.end());
      for (std::size_t t : ts) {
        std::vector<TrialRecord> subset;
        for (const TrialRecord& r : records)
          if (r.mode == kind && r.m == t) subset.push_back(r);
        try {
          ScalingFit f = fit_scaling(subset, "n");
          f.metric = std::string(kind) + " total";
          fits.push_back(f);
        } catch (const InsufficientData&) {
        }
      }
    }
  }
  return fits;
}

void emit(const std::vector<TrialRecord>& records, const std::vector<ScalingFit>& fits,
          const std::filesystem::path& dir, const std::vector<CheckResult>& checks) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("records.csv");
    write_records_csv(f, records);
    if (!f) throw std::runtime_error("write failed: " + (dir / "records.csv").string());
  }
  {
    auto f = open("fits.csv");
    write_fits_csv(f, fits);
    if (!f) throw std::runtime_error("write failed: " + (dir / "fits.csv").string());
  }
  auto f = open("summary.txt");
  struct Agg {
    std::size_t n = 0, m = 0, trials = 0, correct = 0, fp = 0, reported = 0;
    std::string mode;
    double charge = 0.0;
  };
  std::map<std::size_t, Agg> by_config;
  for (const TrialRecord& r : records) {
    Agg& a = by_config[r.config_id];
    a.n = r.n;
    a.m = r.m;
    a.mode = r.mode;
    ++a.trials;
    a.correct += r.correct;
    a.fp += r.false_positive;
    a.reported += r.reported.has_value();
    a.charge += static_cast<double>(r.ledger_total);
  }
  f << "records: " << records.size() << "\n";
  for (const auto& [id, a] : by_config)
    f << "config " << id << ": mode=" << a.mode << " n=" << a.n << " m=" << a.m << " trials=" << a.trials
      << " correct_rate=" << format_number(static_cast<double>(a.correct) / static_cast<double>(a.trials))
      << " reported=" << a.reported << " false_positives=" << a.fp
      << " mean_ledger_total=" << format_number(a.charge / static_cast<double>(a.trials)) << "\n";
  for (const ScalingFit& s : fits)
    f << "fit " << s.variable << " (" << s.metric << ", normalized by " << s.normalization
      << "): exponent=" << format_number(s.exponent) << " r2=" << format_number(s.r_squared) << "\n";
  for (const CheckResult& c : checks)
    f << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
}

}  // namespace qsm
