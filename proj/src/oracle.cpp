#include "qsm/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "qsm/analysis.hpp"
#include "qsm/grover.hpp"

namespace qsm {

namespace {

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v, std::size_t size) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (!v.empty() && v.back() >= size) throw std::invalid_argument("oracle: marked index out of range");
  return v;
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

}  // namespace

ErrorProfile Oracle::error_profile() const {
  if (kind() == OracleKind::deterministic) return {};
  double sum_marked = 0.0, sum_unmarked = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (ideal(i)) sum_marked += error_probability(i);
    else sum_unmarked += error_probability(i);
  }
  const std::size_t t = marked_count();
  ErrorProfile p;
  if (t > 0) p.marked = sum_marked / static_cast<double>(t);
  if (t < size()) p.unmarked = sum_unmarked / static_cast<double>(size() - t);
  return p;
}

SetOracle::SetOracle(std::size_t size, std::vector<std::size_t> marked, std::uint64_t cost,
                     double correct_prob)
    : size_(size), marked_(sorted_unique(std::move(marked), size)), cost_(cost),
      correct_(correct_prob) {
  if (size_ == 0) throw std::invalid_argument("SetOracle: empty domain");
  if (cost_ == 0) throw std::invalid_argument("SetOracle: cost must be >= 1");
  if (!(correct_ >= 0.5 && correct_ <= 1.0))
    throw std::invalid_argument("SetOracle: correct_prob must lie in [1/2, 1]");
}

OracleKind SetOracle::kind() const {
  return correct_ < 1.0 ? OracleKind::probabilistic : OracleKind::deterministic;
}

bool SetOracle::ideal(std::size_t i) const { return contains(marked_, i); }

bool SetOracle::evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const {
  ledger.charge(cost_);
  const bool truth = ideal(i);
  if (correct_ < 1.0 && !rng.bernoulli(correct_)) return !truth;
  return truth;
}

std::size_t SetOracle::unmarked_at(std::size_t k) const { return kth_unmarked(marked_, k); }

FunctionOracle::FunctionOracle(std::size_t size, std::vector<std::size_t> marked,
                               std::uint64_t cost, OracleKind kind, Evaluator evaluate,
                               ErrorFn error)
    : size_(size), marked_(sorted_unique(std::move(marked), size)), cost_(cost), kind_(kind),
      eval_(std::move(evaluate)), error_(std::move(error)) {
  if (size_ == 0) throw std::invalid_argument("FunctionOracle: empty domain");
  if (cost_ == 0) throw std::invalid_argument("FunctionOracle: cost must be >= 1");
}

bool FunctionOracle::ideal(std::size_t i) const { return contains(marked_, i); }

std::size_t FunctionOracle::unmarked_at(std::size_t k) const { return kth_unmarked(marked_, k); }

ErrorProfile FunctionOracle::error_profile() const {
  if (!profile_ready_) {
    profile_ = Oracle::error_profile();
    profile_ready_ = true;
  }
  return profile_;
}

AmplifiedOracle::AmplifiedOracle(const Oracle& inner, unsigned repetitions)
    : inner_(&inner), repetitions_(repetitions) {
  if (repetitions_ == 0 || repetitions_ % 2 == 0)
    throw std::invalid_argument("amplify: repetitions must be odd");
}

AmplifiedOracle::AmplifiedOracle(std::shared_ptr<const Oracle> inner, unsigned repetitions)
    : owned_(std::move(inner)), inner_(owned_.get()), repetitions_(repetitions) {
  if (!inner_) throw std::invalid_argument("amplify: null oracle");
  if (repetitions_ == 0 || repetitions_ % 2 == 0)
    throw std::invalid_argument("amplify: repetitions must be odd");
}

OracleKind AmplifiedOracle::kind() const {
  return inner_->kind() == OracleKind::deterministic ? OracleKind::deterministic
                                                     : OracleKind::amplified;
}

bool AmplifiedOracle::evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const {
  unsigned ones = 0;
  for (unsigned r = 0; r < repetitions_; ++r) ones += inner_->evaluate(i, rng, ledger) ? 1 : 0;
  return 2 * ones > repetitions_;
}

double AmplifiedOracle::error_probability(std::size_t i) const {
  return majority_error(repetitions_, inner_->error_probability(i));
}

ErrorProfile AmplifiedOracle::error_profile() const {
  if (kind() == OracleKind::deterministic) return {};
  // Per-element errors usually take few distinct values.
  std::unordered_map<double, double> memo;
  double sum_marked = 0.0, sum_unmarked = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double e = inner_->error_probability(i);
    auto it = memo.find(e);
    if (it == memo.end()) it = memo.emplace(e, majority_error(repetitions_, e)).first;
    if (ideal(i)) sum_marked += it->second;
    else sum_unmarked += it->second;
  }
  const std::size_t t = marked_count();
  ErrorProfile p;
  if (t > 0) p.marked = sum_marked / static_cast<double>(t);
  if (t < size()) p.unmarked = sum_unmarked / static_cast<double>(size() - t);
  return p;
}

KeyOrder::KeyOrder(const std::vector<double>& keys) : order_(keys.size()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  sorted_.reserve(keys.size());
  for (std::size_t i : order_) sorted_.push_back(keys[i]);
}

std::size_t KeyOrder::count_below(double key) const {
  return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), key) -
                                  sorted_.begin());
}

BetterThanOracle::BetterThanOracle(const ComparisonOracle& cmp, const KeyOrder& order,
                                   std::size_t y)
    : cmp_(cmp), order_(order), threshold_(cmp.keys.at(y)), below_(order.count_below(threshold_)) {}

OracleKind BetterThanOracle::kind() const {
  return cmp_.correct_prob < 1.0 ? OracleKind::probabilistic : OracleKind::deterministic;
}

bool BetterThanOracle::evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const {
  ledger.charge(cmp_.cost);
  const bool truth = ideal(i);
  if (cmp_.correct_prob < 1.0 && !rng.bernoulli(cmp_.correct_prob)) return !truth;
  return truth;
}

}  // namespace qsm
