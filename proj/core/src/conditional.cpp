#include "sharpe/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "sharpe/error.hpp"

namespace sharpe {

namespace {

// Deterministic total order so that equal-m samples are summed identically
// however the input is permuted.
std::vector<SampleStats> sorted_by_m(const JointSampleSet& set) {
  std::vector<SampleStats> sorted = set.samples;
  std::sort(sorted.begin(), sorted.end(), [](const SampleStats& a, const SampleStats& b) {
    return std::tie(a.m, a.sharpe, a.s, a.T) < std::tie(b.m, b.sharpe, b.s, b.T);
  });
  return sorted;
}

// Type-7 (linear interpolation) quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view to_string(CurveShape shape) {
  switch (shape) {
    case CurveShape::increasing:
      return "increasing";
    case CurveShape::non_monotonic:
      return "non_monotonic";
    case CurveShape::decreasing:
      return "decreasing";
  }
  return "unknown";
}

ConditionalCurve conditional_sharpe(const JointSampleSet& set, std::span<const double> thresholds) {
  if (set.empty()) throw ValidationError("conditional_sharpe: empty sample set");
  if (thresholds.empty()) throw ValidationError("conditional_sharpe: empty threshold grid");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw ValidationError("conditional_sharpe: thresholds must be strictly increasing");
    }
  }

  const auto sorted = sorted_by_m(set);
  const std::size_t g = thresholds.size();
  ConditionalCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  curve.values.assign(g, std::nullopt);
  curve.std_errors.assign(g, std::nullopt);
  curve.counts.assign(g, 0);

  // Sweep from the largest m downward with a running Welford accumulator,
  // snapshotting it each time a threshold is crossed.
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  auto next = sorted.rbegin();
  for (std::size_t j = g; j-- > 0;) {
    const double cut = thresholds[j];
    for (; next != sorted.rend() && next->m >= cut; ++next) {
      ++count;
      const double delta = next->sharpe - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (next->sharpe - mean);
    }
    curve.counts[j] = count;
    if (count >= 1) curve.values[j] = mean;
    if (count >= 2) {
      const double var = m2 / static_cast<double>(count - 1);
      curve.std_errors[j] = std::sqrt(var / static_cast<double>(count));
    }
  }
  return curve;
}

std::vector<double> default_threshold_grid(const JointSampleSet& set, std::size_t points,
                                           const GridOptions& options) {
  if (set.empty()) throw ValidationError("default_threshold_grid: empty sample set");
  if (points < 2) throw ValidationError("default_threshold_grid: need at least 2 points");
  if (!(options.quantile > 0.0 && options.quantile <= 1.0)) {
    throw ValidationError("default_threshold_grid: quantile must lie in (0, 1]");
  }

  std::vector<double> m = mean_returns(set);
  std::sort(m.begin(), m.end());
  const double lower = m.front();
  double upper = sorted_quantile(m, options.quantile);
  if (options.min_tail >= 1 && m.size() >= options.min_tail) {
    // k-th largest value: m >= it holds for at least min_tail samples.
    upper = std::min(upper, m[m.size() - options.min_tail]);
  }
  if (!(upper > lower)) {
    throw ValidationError("default_threshold_grid: degenerate m range, cannot build a grid");
  }

  std::vector<double> grid(points);
  const double step = (upper - lower) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lower + step * static_cast<double>(i);
  grid.back() = upper;
  return grid;
}

CurvePeak curve_peak(const ConditionalCurve& curve) {
  std::optional<CurvePeak> best;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!curve.values[i]) continue;
    if (!best || *curve.values[i] > best->value) {
      best = CurvePeak{i, curve.thresholds[i], *curve.values[i]};
    }
  }
  if (!best) throw ValidationError("curve_peak: curve has no defined values");
  return *best;
}

MonotonicityReport monotonicity_report(const ConditionalCurve& curve, std::size_t min_count,
                                       std::optional<double> tolerance) {
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.values[i] && curve.counts[i] >= min_count) used.push_back(i);
  }
  if (used.size() < 3) {
    throw ValidationError("monotonicity_report: fewer than 3 entries with count >= " +
                          std::to_string(min_count));
  }

  MonotonicityReport report;
  report.min_count = min_count;
  report.entries_used = used.size();

  if (tolerance) {
    if (!(*tolerance >= 0.0)) throw ValidationError("monotonicity_report: tolerance must be >= 0");
    report.tolerance = *tolerance;
  } else {
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i : used) {
      if (curve.std_errors[i]) {
        sum_sq += *curve.std_errors[i] * *curve.std_errors[i];
        ++n;
      }
    }
    report.tolerance = n == 0 ? 0.0 : 2.0 * std::sqrt(sum_sq / static_cast<double>(n));
  }

  const double tol = report.tolerance;
  bool increasing = true;
  bool decreasing = true;
  double running_max = -std::numeric_limits<double>::infinity();
  double running_min = std::numeric_limits<double>::infinity();
  std::size_t peak_pos = 0;
  for (std::size_t k = 0; k < used.size(); ++k) {
    const double v = *curve.values[used[k]];
    if (v < running_max - tol) increasing = false;
    if (v > running_min + tol) decreasing = false;
    if (v > running_max) {
      running_max = v;
      peak_pos = k;
    }
    running_min = std::min(running_min, v);
  }

  const std::size_t peak_index = used[peak_pos];
  report.peak = CurvePeak{peak_index, curve.thresholds[peak_index], *curve.values[peak_index]};
  report.interior_peak = peak_pos + 1 < used.size();
  report.final_value = *curve.values[used.back()];
  if (increasing) {
    report.shape = CurveShape::increasing;
  } else if (decreasing) {
    report.shape = CurveShape::decreasing;
  } else {
    report.shape = CurveShape::non_monotonic;
  }
  return report;
}

double top_fraction_mean_sharpe(const JointSampleSet& set, double fraction) {
  if (set.empty()) throw ValidationError("top_fraction_mean_sharpe: empty sample set");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("top_fraction_mean_sharpe: fraction must lie in (0, 1]");
  }
  const auto sorted = sorted_by_m(set);
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(sorted.size()))), 1,
      sorted.size());
  std::vector<double> tail;
  tail.reserve(k);
  for (std::size_t i = sorted.size() - k; i < sorted.size(); ++i) tail.push_back(sorted[i].sharpe);
  return mean_return(tail);
}

ExtremeRanks extreme_ranks(const JointSampleSet& set) {
  if (set.empty()) throw ValidationError("extreme_ranks: empty sample set");
  const auto& xs = set.samples;
  const auto by_sharpe = std::max_element(xs.begin(), xs.end(), [](const auto& a, const auto& b) {
    return a.sharpe < b.sharpe;
  });
  const auto by_m =
      std::max_element(xs.begin(), xs.end(), [](const auto& a, const auto& b) { return a.m < b.m; });

  ExtremeRanks ranks;
  ranks.max_sharpe_m_rank =
      1 + static_cast<std::size_t>(std::count_if(xs.begin(), xs.end(), [&](const auto& s) {
        return s.m > by_sharpe->m;
      }));
  ranks.max_m_sharpe_rank =
      1 + static_cast<std::size_t>(std::count_if(xs.begin(), xs.end(), [&](const auto& s) {
        return s.sharpe > by_m->sharpe;
      }));
  return ranks;
}

}  // namespace sharpe
