#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qsm/harness.hpp"
#include "qsm/reference.hpp"

namespace {

using namespace qsm;

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::vector<TrialRecord> synthetic(const std::vector<std::size_t>& ns, double (*f)(double)) {
  std::vector<TrialRecord> out;
  for (std::size_t n : ns) {
    TrialRecord r;
    r.n = n;
    r.m = 8;
    r.ledger_total = static_cast<std::uint64_t>(std::llround(f(static_cast<double>(n))));
    out.push_back(r);
  }
  return out;
}

std::size_t columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

TEST(Config, ParsesKeysAndComments) {
  const auto cfg = parse(
      "# comment\n"
      "mode = periodic\n"
      "n_values = 256, 512\n"
      "m_values = 8\n"
      "trials = 3   # trailing\n"
      "seed = 77\n"
      "generator = adversarial_periodic\n"
      "period_word = ab\n"
      "memoize_h = false\n");
  EXPECT_EQ(cfg.mode, ExperimentMode::periodic);
  EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{256, 512}));
  EXPECT_EQ(cfg.trials, 3u);
  EXPECT_EQ(cfg.seed, 77u);
  EXPECT_EQ(cfg.generator, Generator::adversarial_periodic);
  EXPECT_EQ(cfg.period_word, "ab");
  EXPECT_FALSE(cfg.memoize_h);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("colour = red\n"), ConfigError);
  EXPECT_THROW(parse("trials\n"), ConfigError);
  EXPECT_THROW(parse("trials = -1\n"), ConfigError);
  EXPECT_THROW(parse("mode = fastest\n"), ConfigError);
  EXPECT_THROW(parse("trials = 0\n").validate(), ConfigError);
  EXPECT_THROW(parse("n_values = 8\nm_values = 16\n").validate(), ConfigError);
  EXPECT_THROW(parse("alphabet_size = 1\n").validate(), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/qsm.cfg"), ConfigError);
}

TEST(Generate, Examples) {
  ExperimentConfig cfg;
  Rng rng(1);
  cfg.generator = Generator::planted;
  for (int i = 0; i < 20; ++i) {
    const PatternText pt = generate_instance(cfg, 256, 16, rng);
    EXPECT_GE(kmp_all(pt.text, pt.pattern).size(), 1u);
  }
  cfg.generator = Generator::all_same;
  const PatternText same = generate_instance(cfg, 8, 2, rng);
  EXPECT_EQ(same.text, "aaaaaaaa");
  EXPECT_EQ(same.pattern, "aa");
  cfg.generator = Generator::adversarial_periodic;
  cfg.period_word = "ab";
  const PatternText adv = generate_instance(cfg, 64, 6, rng);
  EXPECT_EQ(adv.pattern, "ababab");
  EXPECT_EQ(detect_period_classical(adv.pattern).period, 2u);
  EXPECT_THROW(generate_instance(cfg, 4, 6, rng), ConfigError);
}

TEST(Generate, AdversarialWithoutPlantHasNoOccurrence) {
  ExperimentConfig cfg;
  cfg.generator = Generator::adversarial_periodic;
  cfg.period_word = "ab";
  cfg.plant = false;
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const PatternText pt = generate_instance(cfg, 512, 64, rng);
    EXPECT_TRUE(kmp_all(pt.text, pt.pattern).empty());
  }
}

TEST(Run, DeterministicAndDistinctSeeds) {
  const auto cfg = parse("mode = aperiodic\nn_values = 128, 256\nm_values = 8\ntrials = 4\nseed = 5\n");
  const auto a = run_experiment(cfg), b = run_experiment(cfg);
  std::ostringstream sa, sb;
  write_records_csv(sa, a);
  write_records_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  std::set<std::uint64_t> seeds;
  for (const auto& r : a) seeds.insert(r.seed);
  EXPECT_EQ(seeds.size(), a.size());
  for (const auto& r : a) EXPECT_FALSE(r.false_positive);
}

TEST(Run, ModeDispatch) {
  const auto prim = run_experiment(parse("mode = primitives\nn_values = 64\nm_values = 1\ntrials = 3\n"));
  ASSERT_EQ(prim.size(), 6u);
  EXPECT_EQ(prim.front().mode, "bbht");
  EXPECT_EQ(prim.back().mode, "find_min");
  const auto pre = run_experiment(parse("mode = preprocess\nn_values = 64\nm_values = 16\ntrials = 2\n"));
  for (const auto& r : pre) {
    EXPECT_EQ(r.mode, "preprocess");
    EXPECT_EQ(r.ledger_total, r.ledger_preprocess);
  }
  const auto base = run_experiment(parse("mode = baseline\nn_values = 64\nm_values = 8\ntrials = 2\n"));
  for (const auto& r : base) EXPECT_EQ(r.mode, "baseline");
}

TEST(Run, PlantedSuccessRate) {
  const auto recs = run_experiment(
      parse("mode = aperiodic\ngenerator = planted\nn_values = 512\nm_values = 16\ntrials = 100\n"));
  double correct = 0;
  for (const auto& r : recs) correct += r.correct;
  EXPECT_GT(correct / static_cast<double>(recs.size()), 0.5);
}

TEST(Fit, SyntheticExponents) {
  const std::vector<std::size_t> ns{1 << 10, 1 << 12, 1 << 14, 1 << 16, 1 << 18};
  const auto half = fit_scaling(synthetic(ns, [](double n) { return 7 * std::sqrt(n); }), "n");
  EXPECT_NEAR(half.exponent, 0.5, 1e-6);
  EXPECT_NEAR(half.r_squared, 1.0, 1e-9);
  EXPECT_EQ(half.points, 5u);
  const auto one = fit_scaling(synthetic(ns, [](double n) { return 3 * n; }), "n");
  EXPECT_NEAR(one.exponent, 1.0, 1e-6);
  const auto pts = fit_points({1, 2, 4, 8}, {5, 5, 5, 5});
  EXPECT_NEAR(pts.exponent, 0.0, 1e-12);
}

TEST(Fit, InsufficientData) {
  const auto few = synthetic({16, 32, 64}, [](double n) { return n; });
  EXPECT_THROW(fit_scaling(few, "n"), InsufficientData);
  EXPECT_THROW(fit_points({1, 2, 3}, {1, 2, 3}), InsufficientData);
  // Repeated values count once.
  EXPECT_THROW(fit_points({1, 1, 2, 3}, {1, 1, 2, 3}), InsufficientData);
}

TEST(Fit, NormalizationDividesOut) {
  std::vector<TrialRecord> recs;
  for (std::size_t m : {16u, 64u, 256u, 1024u}) {
    TrialRecord r;
    r.n = 4096;
    r.m = m;
    const double lg = std::log2(static_cast<double>(m));
    r.ledger_total = static_cast<std::uint64_t>(std::llround(1000 * std::sqrt(static_cast<double>(m)) * lg * lg));
    r.ledger_preprocess = r.ledger_total;
    recs.push_back(r);
  }
  const auto fit = fit_scaling(recs, "m", FitMetric::preprocess, Normalization::log2_m_squared);
  EXPECT_NEAR(fit.exponent, 0.5, 1e-4);
  EXPECT_EQ(fit.metric, "preprocess");
}

TEST(Csv, EmptyAndRoundTrip) {
  std::ostringstream empty;
  write_records_csv(empty, {});
  const std::string header = empty.str();
  EXPECT_EQ(std::count(header.begin(), header.end(), '\n'), 1);
  EXPECT_EQ(columns(header.substr(0, header.size() - 1)), 15u);
  EXPECT_EQ(header.rfind("config_id,trial_index,seed,n,m,mode,reported,truth_count,truth_leftmost,correct,", 0), 0u);

  TrialRecord r;
  r.config_id = 2;
  r.trial_index = 9;
  r.seed = 18446744073709551615ull;
  r.n = 100;
  r.m = 10;
  r.mode = "periodic";
  r.reported = 42;
  r.truth_count = 3;
  r.truth_leftmost = 42;
  r.correct = true;
  r.ledger_total = 1234;
  r.ledger_in_block = 34;
  std::ostringstream one;
  write_records_csv(one, {r});
  std::istringstream in(one.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(columns(line), 15u);
  std::istringstream back(one.str());
  const auto recs = read_records_csv(back);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].seed, r.seed);
  EXPECT_EQ(recs[0].reported, r.reported);
  EXPECT_EQ(recs[0].mode, "periodic");
  EXPECT_TRUE(recs[0].correct);
  EXPECT_EQ(recs[0].ledger_in_block, 34u);
}

TEST(Emit, WritesThreeFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "qsm_emit_test";
  std::filesystem::remove_all(dir);
  emit({}, {}, dir, {{"example", true, "ok"}});
  for (const char* f : {"records.csv", "fits.csv", "summary.txt"}) EXPECT_TRUE(std::filesystem::exists(dir / f));
  std::ifstream in(dir / "summary.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(text.find("PASS"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Format, NineDigits) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
}

}  // namespace
