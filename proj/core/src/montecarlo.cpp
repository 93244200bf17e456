#include "sharpe/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sharpe/error.hpp"

namespace sharpe {

std::string_view to_string(WindowPolicy policy) {
  switch (policy) {
    case WindowPolicy::calendar_year:
      return "calendar_year";
    case WindowPolicy::rolling_block:
      return "rolling_block";
  }
  return "unknown";
}

WindowPolicy parse_window_policy(std::string_view name) {
  if (name == "calendar_year") return WindowPolicy::calendar_year;
  if (name == "rolling_block") return WindowPolicy::rolling_block;
  throw ValidationError("unknown window policy '" + std::string(name) +
                        "' (expected calendar_year or rolling_block)");
}

namespace {

template <typename Field>
std::vector<double> column(const JointSampleSet& set, Field field) {
  std::vector<double> out;
  out.reserve(set.size());
  for (const auto& s : set.samples) out.push_back(s.*field);
  return out;
}

void simulate_range(const DistributionSpec& spec, std::size_t periods, std::size_t begin,
                    std::size_t end, const RandomStream& root, std::vector<SampleStats>& out) {
  std::vector<double> buffer(periods);
  for (std::size_t i = begin; i < end; ++i) {
    RandomStream stream = root.substream(i);
    draw_returns(spec, buffer, stream);
    try {
      out[i] = sample_stats(buffer);
    } catch (const DegenerateVolatilityError& e) {
      throw DegenerateVolatilityError("window " + std::to_string(i) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<double> mean_returns(const JointSampleSet& set) { return column(set, &SampleStats::m); }
std::vector<double> volatilities(const JointSampleSet& set) { return column(set, &SampleStats::s); }
std::vector<double> sharpes(const JointSampleSet& set) { return column(set, &SampleStats::sharpe); }

JointSampleSet simulate_joint(const DistributionSpec& spec, std::size_t periods,
                              std::size_t count, std::uint64_t seed, unsigned workers) {
  spec.validate();
  if (count < 1) throw ValidationError("simulate_joint requires N >= 1");
  if (periods < 2) throw ValidationError("simulate_joint requires T >= 2");

  JointSampleSet set;
  set.provenance = SimulationProvenance{spec, periods, seed};
  set.samples.resize(count);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));

  const RandomStream root(seed);
  if (workers == 1) {
    simulate_range(spec, periods, 0, count, root, set.samples);
    return set;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(count, w * chunk);
      const std::size_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, begin, end] {
        try {
          simulate_range(spec, periods, begin, end, root, set.samples);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return set;
}

double exceedance_fraction(const JointSampleSet& set, double threshold) {
  if (set.empty()) throw ValidationError("exceedance_fraction: empty sample set");
  const auto hits = std::count_if(set.samples.begin(), set.samples.end(),
                                  [threshold](const SampleStats& s) { return s.sharpe >= threshold; });
  return static_cast<double>(hits) / static_cast<double>(set.size());
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("pearson_correlation: length mismatch");
  if (xs.size() < 2) throw ValidationError("pearson_correlation: need at least 2 pairs");
  const double mx = mean_return(xs);
  const double my = mean_return(ys);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw ValidationError("pearson_correlation: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double Histogram::density(std::size_t bin) const {
  const double width = edges.at(bin + 1) - edges.at(bin);
  return total == 0 ? 0.0 : static_cast<double>(counts.at(bin)) / (static_cast<double>(total) * width);
}

Histogram histogram(std::span<const double> values, std::size_t bins,
                    std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw ValidationError("histogram: bins must be >= 1");
  if (values.empty()) throw ValidationError("histogram: empty input");
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw ValidationError("histogram: non-finite value");
  }

  double lo = 0.0;
  double hi = 0.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ValidationError("histogram: range must be finite and increasing");
    }
  } else {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
    // All values equal: centre a unit-width range on them.
    if (!(lo < hi)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }

  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);

  const auto last = static_cast<std::ptrdiff_t>(bins - 1);
  for (double v : values) {
    auto idx = static_cast<std::ptrdiff_t>(std::floor((v - lo) / width));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, last);
    // Reconcile the floating-point estimate with the stored edges.
    while (idx > 0 && v < h.edges[idx]) --idx;
    while (idx < last && v >= h.edges[idx + 1]) ++idx;
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  h.total = values.size();
  return h;
}

double tail_association(const JointSampleSet& set, double quantile) {
  if (set.empty()) throw ValidationError("tail_association: empty sample set");
  if (!(quantile > 0.0 && quantile <= 0.5)) {
    throw ValidationError("tail_association: quantile must lie in (0, 0.5]");
  }
  const auto n = set.size();
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n))), 1, n);

  std::vector<const SampleStats*> order;
  order.reserve(n);
  for (const auto& s : set.samples) order.push_back(&s);
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(),
                   [](const SampleStats* a, const SampleStats* b) {
                     return std::abs(a->m) > std::abs(b->m);
                   });

  std::vector<double> ratios;
  ratios.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const SampleStats& s = *order[i];
    if (s.m == 0.0) continue;
    ratios.push_back(s.s / (std::sqrt(static_cast<double>(s.T)) * std::abs(s.m)));
  }
  if (ratios.empty()) throw ValidationError("tail_association: all selected samples have m == 0");

  const std::size_t mid = ratios.size() / 2;
  std::nth_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(mid), ratios.end());
  if (ratios.size() % 2 == 1) return ratios[mid];
  const double upper = ratios[mid];
  const double lower = *std::max_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace sharpe
