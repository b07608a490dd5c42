#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace qsm {

enum class Phase : std::uint8_t { none, preprocess, block_search, in_block };

std::string_view phase_name(Phase p);

// Counts base character comparisons, split by the phase active at charge time.
class QueryLedger {
 public:
  class Scope {
   public:
    Scope(QueryLedger& ledger, Phase phase) : ledger_(ledger), saved_(ledger.phase_) {
      ledger_.phase_ = phase;
    }
    ~Scope() { ledger_.phase_ = saved_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    QueryLedger& ledger_;
    Phase saved_;
  };

  void charge(std::uint64_t units) {
    total_ += units;
    by_phase_[static_cast<std::size_t>(phase_)] += units;
  }

  std::uint64_t total() const { return total_; }
  std::uint64_t phase_total(Phase p) const { return by_phase_[static_cast<std::size_t>(p)]; }
  Phase phase() const { return phase_; }

 private:
  std::uint64_t total_ = 0;
  std::array<std::uint64_t, 4> by_phase_{};
  Phase phase_ = Phase::none;
};

}  // namespace qsm
