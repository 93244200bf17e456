#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sharpe/montecarlo.hpp"

namespace sharpe {

/// Conditional Sharpe S(m): mean Sharpe over samples with mean return >= m.
///
/// Entries whose tail is empty have no value (std::nullopt), never zero.
struct ConditionalCurve {
  std::vector<double> thresholds;
  std::vector<std::optional<double>> values;
  std::vector<std::size_t> counts;
  /// Standard error of each conditional mean; defined where count >= 2.
  std::vector<std::optional<double>> std_errors;

  [[nodiscard]] std::size_t size() const { return thresholds.size(); }
};

/// `thresholds` must be strictly increasing. The result does not depend on
/// the order of samples in `set`.
[[nodiscard]] ConditionalCurve conditional_sharpe(const JointSampleSet& set,
                                                  std::span<const double> thresholds);

struct GridOptions {
  double quantile = 0.9999;   ///< upper end of the grid as a quantile of m
  std::size_t min_tail = 10;  ///< the last threshold keeps at least this many samples
};

/// `points` equally spaced thresholds from min(m) up to the `quantile` of m,
/// lowered if needed so the last one retains `min_tail` samples. The tail
/// guard only applies when the set has at least `min_tail` samples.
[[nodiscard]] std::vector<double> default_threshold_grid(const JointSampleSet& set,
                                                         std::size_t points,
                                                         const GridOptions& options = {});

struct CurvePeak {
  std::size_t index = 0;
  double threshold = 0.0;
  double value = 0.0;
};

/// Argmax over defined entries; ties go to the smallest threshold.
[[nodiscard]] CurvePeak curve_peak(const ConditionalCurve& curve);

enum class CurveShape { increasing, non_monotonic, decreasing };
[[nodiscard]] std::string_view to_string(CurveShape shape);

struct MonotonicityReport {
  CurveShape shape = CurveShape::increasing;
  CurvePeak peak;              ///< over the entries passing the count guard
  bool interior_peak = false;  ///< peak strictly before the last used entry
  double final_value = 0.0;    ///< value at the last used entry
  double tolerance = 0.0;
  std::size_t entries_used = 0;
  std::size_t min_count = 0;
};

/// Classifies the curve restricted to entries with count >= min_count.
///
///   increasing     no value falls more than `tolerance` below an earlier one
///   decreasing     no value rises more than `tolerance` above an earlier one
///   non_monotonic  neither
///
/// A curve flat within tolerance counts as increasing. The default tolerance
/// is twice the pooled (root-mean-square) standard error of the used entries.
/// Fewer than 3 qualifying entries throws ValidationError.
[[nodiscard]] MonotonicityReport monotonicity_report(const ConditionalCurve& curve,
                                                     std::size_t min_count,
                                                     std::optional<double> tolerance = std::nullopt);

/// Mean Sharpe over the `fraction` of samples with the largest m.
[[nodiscard]] double top_fraction_mean_sharpe(const JointSampleSet& set, double fraction);

/// Descriptive ranks of the per-sample extremes (1 = largest).
struct ExtremeRanks {
  std::size_t max_sharpe_m_rank = 0;  ///< rank by m of the sample with the largest Sharpe
  std::size_t max_m_sharpe_rank = 0;  ///< rank by Sharpe of the sample with the largest m
};
[[nodiscard]] ExtremeRanks extreme_ranks(const JointSampleSet& set);

}  // namespace sharpe
