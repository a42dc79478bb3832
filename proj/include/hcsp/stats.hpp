#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hcsp/error.hpp"

namespace hcsp {

struct PairedSamples {
  std::vector<std::string> labels;
  std::vector<double> a;
  std::vector<double> b;
};

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_effective = 0;
  std::size_t n_dropped = 0;  // zero differences removed before ranking
  double p_two_sided = 1.0;
  bool exact = true;
};

inline constexpr std::size_t kExactWilcoxonLimit = 25;

/// Average ranks (1-based) of the values in ascending order.
inline std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

/// Two-sided exact p-value of the signed-rank statistic. Ranks are doubled so
/// tied (half-integer) ranks stay integral; the null distribution of W+ is
/// the subset-sum count over all 2^n sign assignments.
inline double wilcoxon_exact_p(std::span<const double> ranks, double w_plus) {
  std::vector<std::uint64_t> doubled(ranks.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = static_cast<std::uint64_t>(std::llround(ranks[i] * 2.0));
    total += doubled[i];
  }
  std::vector<std::uint64_t> count(total + 1, 0);
  count[0] = 1;
  std::uint64_t reach = 0;
  for (auto r : doubled) {
    reach += r;
    for (std::uint64_t s = reach; s >= r; --s) {
      count[s] += count[s - r];
      if (s == r) break;
    }
  }
  const auto observed = static_cast<std::uint64_t>(std::llround(w_plus * 2.0));
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  for (std::uint64_t s = 0; s <= total; ++s) {
    if (s <= observed) lower += count[s];
    if (s >= observed) upper += count[s];
  }
  const double patterns = std::ldexp(1.0, static_cast<int>(ranks.size()));
  return std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / patterns);
}

/// Normal approximation with continuity correction and tie-corrected variance.
inline double wilcoxon_normal_p(std::span<const double> abs_diffs, double w_plus) {
  const auto n = static_cast<double>(abs_diffs.size());
  const double mean = n * (n + 1.0) / 4.0;
  double tie_term = 0.0;
  std::vector<double> sorted(abs_diffs.begin(), abs_diffs.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (variance <= 0.0) return 1.0;
  const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

/// Wilcoxon matched-pairs signed-ranks test on d_i = a_i - b_i. Zero
/// differences are dropped; the exact null distribution is used up to
/// kExactWilcoxonLimit pairs, the normal approximation beyond.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorKind::InvalidArgument, "paired samples must have equal, non-zero length");
  }
  std::vector<double> diffs;
  std::vector<double> abs_diffs;
  WilcoxonResult out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) {
      ++out.n_dropped;
      continue;
    }
    diffs.push_back(d);
    abs_diffs.push_back(std::abs(d));
  }
  if (diffs.empty()) throw Error(ErrorKind::AllDifferencesZero, "every paired difference is zero");

  const auto ranks = average_ranks(abs_diffs);
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    (diffs[i] > 0 ? out.w_plus : out.w_minus) += ranks[i];
  }
  out.n_effective = diffs.size();
  out.exact = out.n_effective <= kExactWilcoxonLimit;
  out.p_two_sided = out.exact ? wilcoxon_exact_p(ranks, out.w_plus) : wilcoxon_normal_p(abs_diffs, out.w_plus);
  return out;
}

inline WilcoxonResult wilcoxon_signed_rank(const PairedSamples& s) {
  if (!s.labels.empty() && s.labels.size() != s.a.size()) {
    throw Error(ErrorKind::InvalidArgument, "label count does not match sample count");
  }
  return wilcoxon_signed_rank(s.a, s.b);
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;      // sample (n - 1) standard deviation
  double cv_percent = 0.0;  // stddev / mean * 100
};

inline Summary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "cannot summarize an empty sample");
  Summary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  if (s.mean <= 0.0) throw Error(ErrorKind::NonPositiveMean, "coefficient of variation needs a positive mean");
  s.cv_percent = s.stddev / s.mean * 100.0;
  return s;
}

/// "0.07%"
inline std::string format_percent(double percent) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f%%", percent);
  return buf;
}

/// "2932328.8 / 0.07%"
inline std::string format_mean_cv(const Summary& s) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.1f / %.2f%%", s.mean, s.cv_percent);
  return buf;
}

/// Percentage above the lower bound. A negative result means the solution
/// undercuts the bound; it is returned, not rejected.
inline double gap_to_lower_bound(double solution, double lower_bound) {
  if (!(lower_bound > 0.0)) throw Error(ErrorKind::NonPositiveLowerBound, "lower bound must be positive");
  return (solution - lower_bound) / lower_bound * 100.0;
}

}  // namespace hcsp
