#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sharpe/conditional.hpp"
#include "sharpe/ingestion.hpp"
#include "sharpe/montecarlo.hpp"

namespace sharpe {

/// Version string baked in at build time.
[[nodiscard]] std::string_view library_version();

/// Shortest decimal form that parses back to the identical double.
[[nodiscard]] std::string format_double(double value);

/// Ordered key/value run metadata. Written as `# key: value` comment lines at
/// the top of CSV outputs and as a "run" object in JSON outputs.
using RunInfo = std::vector<std::pair<std::string, std::string>>;

/// Provenance as a compact JSON object string.
[[nodiscard]] std::string provenance_json(const Provenance& provenance);
[[nodiscard]] Provenance parse_provenance_json(std::string_view json);

// Sample sets. CSV layout:
//   # <run info lines>
//   # schema: sharpe.sample_set/1
//   # provenance: {...}
//   index,m,s,sharpe,growth,T
inline constexpr std::string_view kSampleSetSchema = "sharpe.sample_set";
inline constexpr int kSampleSetVersion = 1;

void write_sample_set_csv(std::ostream& out, const JointSampleSet& set, const RunInfo& run = {});
[[nodiscard]] JointSampleSet read_sample_set_csv(std::istream& in);
void write_sample_set_json(std::ostream& out, const JointSampleSet& set, const RunInfo& run = {});
[[nodiscard]] JointSampleSet read_sample_set_json(std::istream& in);
/// Dispatches on extension: `.json` or anything else as CSV.
[[nodiscard]] JointSampleSet read_sample_set_file(const std::filesystem::path& path);

// Conditional curves: threshold,value,count,defined,std_error. Undefined
// entries have empty value/std_error cells and defined = 0.
inline constexpr std::string_view kCurveSchema = "sharpe.conditional_curve";
void write_curve_csv(std::ostream& out, const ConditionalCurve& curve, const RunInfo& run = {});
[[nodiscard]] ConditionalCurve read_curve_csv(std::istream& in);
void write_curve_json(std::ostream& out, const ConditionalCurve& curve, const RunInfo& run = {});
[[nodiscard]] ConditionalCurve read_curve_json(std::istream& in);

/// bin_left,bin_right,count,density
void write_histogram_csv(std::ostream& out, const Histogram& hist, const RunInfo& run = {});

/// Generic numeric table: header row plus rows of doubles.
void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, const RunInfo& run = {});

void write_manifest_json(std::ostream& out, const LoadManifest& manifest, const RunInfo& run = {});

/// Writes `content` to `<path>.tmp` then renames over `path`, so a reader
/// never observes a partially written file.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace sharpe
