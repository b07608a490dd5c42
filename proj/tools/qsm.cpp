// qsm: experiment runner for the simulated quantum string matcher.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qsm/harness.hpp"
#include "qsm/selftest.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

int do_run(const std::string& config_path, const std::optional<std::string>& mode,
           const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& trials,
           const std::optional<std::string>& out, bool no_memo) {
  qsm::ExperimentConfig cfg = qsm::load_config(config_path);
  if (mode) qsm::apply_setting(cfg, "mode", *mode);
  if (seed) cfg.seed = *seed;
  if (trials) cfg.trials = *trials;
  if (out) cfg.output_path = *out;
  if (no_memo) cfg.memoize_h = false;
  cfg.validate();

  const auto records = qsm::run_experiment(cfg);
  const auto fits = qsm::default_fits(cfg, records);
  std::size_t fp = 0, correct = 0;
  for (const auto& r : records) {
    fp += r.false_positive;
    correct += r.correct;
  }
  std::vector<qsm::CheckResult> checks;
  checks.push_back({"no false positives", fp == 0, std::to_string(fp) + " false positives"});
  qsm::emit(records, fits, cfg.output_path, checks);

  std::cout << records.size() << " records, " << correct << " correct, " << fp
            << " false positives -> " << cfg.output_path << "\n";
  for (const auto& f : fits)
    std::cout << "fit " << f.variable << " (" << f.metric << "): exponent "
              << qsm::format_number(f.exponent) << ", r2 " << qsm::format_number(f.r_squared) << "\n";
  return fp == 0 ? kOk : kCheckFailed;
}

int do_fit(const std::string& path, const std::string& variable, const std::string& metric,
           const std::string& normalize) {
  std::ifstream in(path);
  if (!in) throw qsm::ConfigError("cannot open records file " + path);
  const auto records = qsm::read_records_csv(in);
  const auto fit = qsm::fit_scaling(records, variable, qsm::parse_metric(metric),
                                    qsm::parse_normalization(normalize));
  qsm::write_fits_csv(std::cout, {fit});
  return kOk;
}

int do_selftest() {
  bool all = true;
  for (const auto& c : qsm::run_selftest()) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    all = all && c.passed;
  }
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated quantum string matching: experiments, fits and self-checks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  std::optional<std::string> mode, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool no_memo = false;
  run->add_option("--config", config_path, "key = value config file")->required();
  run->add_option("--mode", mode, "baseline|aperiodic|periodic|preprocess|primitives");
  run->add_option("--seed", seed, "64-bit seed");
  run->add_option("--trials", trials, "trials per (n, m) pair");
  run->add_option("--out", out, "output directory");
  run->add_flag("--no-memoize-h", no_memo, "re-evaluate block answers in the leftmost search");

  auto* fit = app.add_subcommand("fit", "Fit a scaling exponent to a records CSV");
  std::string records_path, variable, metric = "total", normalize = "none";
  fit->add_option("--records", records_path, "records.csv")->required();
  fit->add_option("--variable", variable, "n or m")->required()->check(CLI::IsMember({"n", "m"}));
  fit->add_option("--metric", metric, "total|matcher|preprocess");
  fit->add_option("--normalize", normalize, "none|log_ratio_log_m|log2_m_squared|sqrt_m");

  auto* self = app.add_subcommand("selftest", "Run the exhaustive small-instance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return do_run(config_path, mode, seed, trials, out, no_memo);
    if (*fit) return do_fit(records_path, variable, metric, normalize);
    if (*self) return do_selftest();
  } catch (const qsm::ConfigError& e) {
    std::cerr << "qsm: " << e.what() << "\n";
    return kUsage;
  } catch (const qsm::InsufficientData& e) {
    std::cerr << "qsm: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qsm: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
