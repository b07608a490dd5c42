#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsm/matcher.hpp"
#include "qsm/rng.hpp"

namespace qsm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentMode { baseline, aperiodic, periodic, preprocess, primitives };
enum class Generator { random, planted, adversarial_periodic, all_same };
enum class QueryKind { any, leftmost };
enum class PreprocessKind { quantum, classical };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::aperiodic;
  std::vector<std::size_t> n_values{4096};
  std::vector<std::size_t> m_values{64};
  std::size_t alphabet_size = 2;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  Generator generator = Generator::planted;
  double budget_factor = 9.0;
  bool memoize_h = true;
  std::string output_path = "qsm_out";

  QueryKind query = QueryKind::any;
  PreprocessKind preprocess = PreprocessKind::quantum;
  bool plant = true;               // adversarial_periodic: overwrite one window with p
  std::string period_word;         // adversarial_periodic: v (random when empty)
  std::size_t period_length = 2;   // length of a random v
  std::size_t defect_spacing = 0;  // adversarial_periodic: 0 means m / 2
  bool final_verification = true;
  double repetition_scale = 4.0;
  unsigned aperiodic_repetitions = 1;
  unsigned periodic_repetitions = 3;

  void validate() const;
  MatchOptions match_options() const;
};

// Flat `key = value` lines, `#` comments.  Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct TrialRecord {
  std::size_t config_id = 0;
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string mode;
  std::optional<std::size_t> reported;
  std::size_t truth_count = 0;
  std::optional<std::size_t> truth_leftmost;
  bool correct = false;
  bool false_positive = false;
  std::uint64_t ledger_total = 0;
  std::uint64_t ledger_preprocess = 0;
  std::uint64_t ledger_block_search = 0;
  std::uint64_t ledger_in_block = 0;
};

enum class FitMetric { total, matcher, preprocess };
enum class Normalization { none, log_ratio_log_m, log2_m_squared, sqrt_m };

struct ScalingFit {
  std::string variable;
  double exponent = 0.0;
  double r_squared = 0.0;
  std::string normalization;
  std::string metric = "total";
  std::size_t points = 0;
};

// Instance for one trial of a (n, m) pair.
PatternText generate_instance(const ExperimentConfig& cfg, std::size_t n, std::size_t m, Rng& rng);

// Seeds of the generator and algorithm streams of one trial.
std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t config_id, std::size_t trial);

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

// Least squares of log(mean metric / normalization) on log(variable),
// grouping records by the variable's value.  Needs four distinct values.
ScalingFit fit_scaling(const std::vector<TrialRecord>& records, const std::string& variable,
                       FitMetric metric = FitMetric::total,
                       Normalization norm = Normalization::none);

// Same fit on raw (x, y) points.
ScalingFit fit_points(const std::vector<double>& x, const std::vector<double>& y);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& in);
void write_fits_csv(std::ostream& out, const std::vector<ScalingFit>& fits);

// records.csv, fits.csv and summary.txt under `dir`.
void emit(const std::vector<TrialRecord>& records, const std::vector<ScalingFit>& fits,
          const std::filesystem::path& dir, const std::vector<CheckResult>& checks = {});

// Fits that the record set supports: versus n and versus m where possible.
std::vector<ScalingFit> default_fits(const ExperimentConfig& cfg,
                                     const std::vector<TrialRecord>& records);

std::string format_number(double v);  // 9 significant digits

std::string to_string(ExperimentMode m);
std::string to_string(MatchMode m);
std::string to_string(Normalization n);
std::string to_string(FitMetric m);
Normalization parse_normalization(const std::string& s);
FitMetric parse_metric(const std::string& s);

}  // namespace qsm
