#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "qsm/ledger.hpp"
#include "qsm/rng.hpp"

namespace qsm {

enum class OracleKind { deterministic, probabilistic, amplified };

// Mean per-call error over the ideally marked and ideally unmarked elements.
struct ErrorProfile {
  double marked = 0.0;
  double unmarked = 0.0;
};

// Predicate over [0, size()).  `ideal` is the noise-free bit; `evaluate` is one
// direct call that may err with probability error_probability(i).  Coherent
// calls inside a Grover run are charged cost() each.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual std::size_t size() const = 0;
  virtual std::uint64_t cost() const = 0;
  virtual OracleKind kind() const = 0;

  virtual bool evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const = 0;
  virtual bool ideal(std::size_t i) const = 0;

  virtual std::size_t marked_count() const = 0;
  virtual std::size_t marked_at(std::size_t k) const = 0;
  virtual std::size_t unmarked_at(std::size_t k) const = 0;

  virtual double error_probability(std::size_t) const { return 0.0; }
  virtual ErrorProfile error_profile() const;
};

// Explicit marked set, optionally answering wrongly with a fixed probability.
class SetOracle final : public Oracle {
 public:
  SetOracle(std::size_t size, std::vector<std::size_t> marked, std::uint64_t cost = 1,
            double correct_prob = 1.0);

  std::size_t size() const override { return size_; }
  std::uint64_t cost() const override { return cost_; }
  OracleKind kind() const override;
  bool evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const override;
  bool ideal(std::size_t i) const override;
  std::size_t marked_count() const override { return marked_.size(); }
  std::size_t marked_at(std::size_t k) const override { return marked_[k]; }
  std::size_t unmarked_at(std::size_t k) const override;
  double error_probability(std::size_t) const override { return 1.0 - correct_; }
  ErrorProfile error_profile() const override { return {1.0 - correct_, 1.0 - correct_}; }

  const std::vector<std::size_t>& marked() const { return marked_; }

 private:
  std::size_t size_;
  std::vector<std::size_t> marked_;
  std::uint64_t cost_;
  double correct_;
};

// Arbitrary probabilistic predicate; the caller supplies the ideal marked set,
// a direct evaluator, and the exact per-element error.
class FunctionOracle final : public Oracle {
 public:
  using Evaluator = std::function<bool(std::size_t, Rng&, QueryLedger&)>;
  using ErrorFn = std::function<double(std::size_t)>;

  FunctionOracle(std::size_t size, std::vector<std::size_t> marked, std::uint64_t cost,
                 OracleKind kind, Evaluator evaluate, ErrorFn error);

  std::size_t size() const override { return size_; }
  std::uint64_t cost() const override { return cost_; }
  OracleKind kind() const override { return kind_; }
  bool evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const override {
    return eval_(i, rng, ledger);
  }
  bool ideal(std::size_t i) const override;
  std::size_t marked_count() const override { return marked_.size(); }
  std::size_t marked_at(std::size_t k) const override { return marked_[k]; }
  std::size_t unmarked_at(std::size_t k) const override;
  double error_probability(std::size_t i) const override { return error_ ? error_(i) : 0.0; }
  ErrorProfile error_profile() const override;

 private:
  std::size_t size_;
  std::vector<std::size_t> marked_;
  std::uint64_t cost_;
  OracleKind kind_;
  Evaluator eval_;
  ErrorFn error_;
  mutable bool profile_ready_ = false;
  mutable ErrorProfile profile_;
};

// Majority vote over `repetitions` direct calls of an inner oracle.
class AmplifiedOracle final : public Oracle {
 public:
  AmplifiedOracle(const Oracle& inner, unsigned repetitions);
  AmplifiedOracle(std::shared_ptr<const Oracle> inner, unsigned repetitions);

  std::size_t size() const override { return inner_->size(); }
  std::uint64_t cost() const override { return inner_->cost() * repetitions_; }
  OracleKind kind() const override;
  bool evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const override;
  bool ideal(std::size_t i) const override { return inner_->ideal(i); }
  std::size_t marked_count() const override { return inner_->marked_count(); }
  std::size_t marked_at(std::size_t k) const override { return inner_->marked_at(k); }
  std::size_t unmarked_at(std::size_t k) const override { return inner_->unmarked_at(k); }
  double error_probability(std::size_t i) const override;
  ErrorProfile error_profile() const override;

  unsigned repetitions() const { return repetitions_; }
  const Oracle& inner() const { return *inner_; }

 private:
  std::shared_ptr<const Oracle> owned_;
  const Oracle* inner_;
  unsigned repetitions_;
};

// Keys to minimize; +infinity is allowed.  Each comparison costs `cost` and is
// correct with probability `correct_prob`.
struct ComparisonOracle {
  std::vector<double> keys;
  std::uint64_t cost = 1;
  double correct_prob = 1.0;

  std::size_t size() const { return keys.size(); }
};

// Elements sorted by key, shared by all threshold oracles of one search.
class KeyOrder {
 public:
  explicit KeyOrder(const std::vector<double>& keys);
  // Number of elements whose key is strictly below `key`.
  std::size_t count_below(double key) const;
  std::size_t at(std::size_t rank) const { return order_[rank]; }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> sorted_;
};

// "Is key[i] strictly smaller than key[y]?"
class BetterThanOracle final : public Oracle {
 public:
  BetterThanOracle(const ComparisonOracle& cmp, const KeyOrder& order, std::size_t y);

  std::size_t size() const override { return cmp_.size(); }
  std::uint64_t cost() const override { return cmp_.cost; }
  OracleKind kind() const override;
  bool evaluate(std::size_t i, Rng& rng, QueryLedger& ledger) const override;
  bool ideal(std::size_t i) const override { return cmp_.keys[i] < threshold_; }
  std::size_t marked_count() const override { return below_; }
  std::size_t marked_at(std::size_t k) const override { return order_.at(k); }
  std::size_t unmarked_at(std::size_t k) const override { return order_.at(below_ + k); }
  double error_probability(std::size_t) const override { return 1.0 - cmp_.correct_prob; }
  ErrorProfile error_profile() const override {
    return {1.0 - cmp_.correct_prob, 1.0 - cmp_.correct_prob};
  }

 private:
  const ComparisonOracle& cmp_;
  const KeyOrder& order_;
  double threshold_;
  std::size_t below_;
};

}  // namespace qsm
