#include "qsm/selftest.hpp"

#include <cmath>
#include <sstream>

#include "qsm/ds.hpp"
#include "qsm/grover.hpp"
#include "qsm/reference.hpp"

namespace qsm {

namespace {

std::string binary_string(std::uint64_t bits, std::size_t len) {
  std::string s(len, 'a');
  for (std::size_t i = 0; i < len; ++i)
    if ((bits >> i) & 1U) s[i] = 'b';
  return s;
}

std::size_t ceil_log2(std::size_t x) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < x) ++k;
  return k;
}

}  // namespace

CheckResult check_grover_crosscheck(std::size_t max_n) {
  CheckResult res{"grover statevector vs closed form", true, ""};
  double worst = 0.0, worst_norm = 0.0;
  std::size_t cases = 0;
  std::vector<double> norms;
  for (std::size_t N = 2; N <= max_n; N *= 2) {
    const auto jmax = static_cast<std::uint64_t>(std::floor(3.0 * std::sqrt(static_cast<double>(N))));
    for (std::size_t t : {std::size_t{0}, std::size_t{1}, std::size_t{2}, N / 4, N}) {
      if (t > N) continue;
      std::vector<std::size_t> marked;
      for (std::size_t i = 0; i < t; ++i) marked.push_back((i * 7919) % N);
      // Stride 7919 is odd and prime, so these t indices are distinct.
      for (std::uint64_t j = 0; j <= jmax; ++j) {
        const double sv = statevector_grover(N, marked, j, &norms);
        const double cf = success_probability(N, t, j);
        worst = std::max(worst, std::abs(sv - cf));
        for (double nn : norms) worst_norm = std::max(worst_norm, std::abs(nn - 1.0));
        ++cases;
      }
    }
  }
  res.passed = worst <= 1e-9 && worst_norm <= 1e-9;
  std::ostringstream os;
  os << cases << " cases, max |diff| = " << format_number(worst)
     << ", max norm drift = " << format_number(worst_norm);
  res.detail = os.str();
  return res;
}

CheckResult check_ds_exhaustive(std::size_t max_m) {
  CheckResult res{"classical deterministic samples, binary m <= " + std::to_string(max_m), true, ""};
  std::size_t patterns = 0, failures = 0, periodic = 0;
  std::string first_failure;
  for (std::size_t m = 2; m <= max_m; ++m) {
    const std::size_t bound = ceil_log2(m / 2);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
      const std::string p = binary_string(bits, m);
      ++patterns;
      const Preprocessing prep = build_ds_classical(p);
      const PeriodInfo truth = detect_period_classical(p);
      bool ok = false;
      if (const auto* ds = std::get_if<DeterministicSample>(&prep)) {
        ok = truth.classification == Periodicity::aperiodic && ds->points.size() <= bound &&
             verify_ds_property(p, *ds);
      } else {
        const auto& info = std::get<PeriodInfo>(prep);
        ok = truth.classification == Periodicity::periodic &&
             info.classification == Periodicity::periodic && info.period == truth.period;
        ++periodic;
      }
      if (!ok && failures++ == 0) first_failure = p;
    }
  }
  res.passed = failures == 0;
  std::ostringstream os;
  os << patterns << " patterns (" << periodic << " periodic), " << failures << " failures";
  if (failures) os << ", first: " << first_failure;
  res.detail = os.str();
  return res;
}

CheckResult check_window_rule_exhaustive(std::size_t max_m) {
  CheckResult res{"periodic window rule vs KMP, binary m <= " + std::to_string(max_m), true, ""};
  std::size_t patterns = 0, windows = 0, failures = 0;
  std::string first_failure;
  for (std::size_t m = 2; m <= max_m; ++m) {
    const std::size_t span = block_length(m) + m;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
      const std::string p = binary_string(bits, m);
      if (detect_period_classical(p).classification != Periodicity::periodic) continue;
      ++patterns;
      const Preprocessing prep = build_ds_classical(p);
      const auto* info = std::get_if<PeriodInfo>(&prep);
      if (!info) {
        ++failures;
        continue;
      }
      for (std::size_t len = 1; len <= span; ++len) {
        for (std::uint64_t tb = 0; tb < (std::uint64_t{1} << len); ++tb) {
          const std::string t = binary_string(tb, len);
          ++windows;
          const auto rule = brute_force_windows(t, p, *info, 0);
          const auto truth =
              m <= len ? leftmost_in_block(kmp_all(t, p), m, 0) : std::optional<std::size_t>{};
          if (rule != truth && failures++ == 0) first_failure = p + " / " + t;
        }
      }
    }
  }
  res.passed = failures == 0;
  std::ostringstream os;
  os << patterns << " periodic patterns, " << windows << " block windows, " << failures << " failures";
  if (failures) os << ", first: " << first_failure;
  res.detail = os.str();
  return res;
}

std::vector<CheckResult> run_selftest() {
  return {check_grover_crosscheck(), check_ds_exhaustive(16), check_window_rule_exhaustive(12)};
}

}  // namespace qsm
