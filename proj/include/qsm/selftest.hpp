#pragma once

#include <cstddef>
#include <vector>

#include "qsm/harness.hpp"

// Exhaustive small-instance checks shared by `qsm selftest` and the tests.
namespace qsm {

// Statevector vs closed form over N = 2..max_n (powers of two), t in
// {0, 1, 2, N/4, N}, j <= 3 sqrt(N), tolerance 1e-9; also norm drift.
CheckResult check_grover_crosscheck(std::size_t max_n = 4096);

// Every binary pattern with 2 <= m <= max_m: aperiodic ones get a sample
// within ceil(log2 floor(m/2)) points that verifies; periodic ones get the
// classically detected period.
CheckResult check_ds_exhaustive(std::size_t max_m = 16);

// Window rule against KMP for every periodic binary pattern with m <= max_m.
// Every text is covered through its block-local windows: the rule and the
// truth for a block depend only on the block and the following m symbols
// (length up to ceil(m/2) + m), so enumerating all strings up to that length
// as block 0 covers all texts of any length.
CheckResult check_window_rule_exhaustive(std::size_t max_m = 12);

std::vector<CheckResult> run_selftest();

}  // namespace qsm
