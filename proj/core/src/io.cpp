#include "sharpe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "sharpe/error.hpp"

#ifndef SHARPE_VERSION
#define SHARPE_VERSION "0.0.0"
#endif

namespace sharpe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kSampleHeader = "index,m,s,sharpe,growth,T";
constexpr std::string_view kCurveHeader = "threshold,value,count,defined,std_error";

void write_run_comments(std::ostream& out, const RunInfo& run) {
  for (const auto& [key, value] : run) out << "# " << key << ": " << value << '\n';
}

ordered_json run_object(const RunInfo& run) {
  ordered_json obj = ordered_json::object();
  for (const auto& [key, value] : run) obj[key] = value;
  return obj;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("line " + std::to_string(line) + ": invalid number `" + std::string(text) + "`");
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("line " + std::to_string(line) + ": invalid count `" + std::string(text) + "`");
  }
  return v;
}

// Reads leading `# key: value` comments, then checks the column header.
// Returns the comment map; `line_no` is left at the header line.
std::vector<std::pair<std::string, std::string>> read_preamble(std::istream& in,
                                                               std::string_view header,
                                                               std::size_t& line_no) {
  std::vector<std::pair<std::string, std::string>> comments;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("#")) {
      std::string_view body = std::string_view(line).substr(1);
      if (body.starts_with(" ")) body.remove_prefix(1);
      const auto colon = body.find(": ");
      if (colon != std::string_view::npos) {
        comments.emplace_back(std::string(body.substr(0, colon)), std::string(body.substr(colon + 2)));
      }
      continue;
    }
    if (line != header) {
      throw DataError("line " + std::to_string(line_no) + ": expected header `" +
                      std::string(header) + "`");
    }
    return comments;
  }
  throw DataError("missing header `" + std::string(header) + "`");
}

const std::string* find_comment(const std::vector<std::pair<std::string, std::string>>& comments,
                                std::string_view key) {
  for (const auto& [k, v] : comments) {
    if (k == key) return &v;
  }
  return nullptr;
}

void check_schema(const std::string* value, std::string_view schema) {
  if (value == nullptr) return;
  if (!value->starts_with(schema)) {
    throw DataError("unexpected schema `" + *value + "` (expected " + std::string(schema) + ")");
  }
}

ordered_json provenance_object(const Provenance& provenance) {
  ordered_json p;
  if (const auto* sim = std::get_if<SimulationProvenance>(&provenance)) {
    p["kind"] = "simulation";
    p["family"] = std::string(to_string(sim->spec.family));
    p["mu"] = sim->spec.mu;
    p["sigma"] = sim->spec.sigma;
    if (sim->spec.nu) p["nu"] = *sim->spec.nu;
    p["T"] = sim->T;
    p["seed"] = sim->seed;
  } else {
    const auto& data = std::get<DatasetProvenance>(provenance);
    p["kind"] = "dataset";
    p["label"] = data.label;
    p["policy"] = std::string(to_string(data.policy));
    p["T"] = data.T;
    p["min_length"] = data.min_length;
  }
  return p;
}

Provenance provenance_from(const json& p) {
  try {
    const auto kind = p.at("kind").get<std::string>();
    if (kind == "simulation") {
      SimulationProvenance sim;
      sim.spec.family = parse_family(p.at("family").get<std::string>());
      sim.spec.mu = p.at("mu").get<double>();
      sim.spec.sigma = p.at("sigma").get<double>();
      if (p.contains("nu")) sim.spec.nu = p.at("nu").get<double>();
      sim.T = p.at("T").get<std::size_t>();
      sim.seed = p.at("seed").get<std::uint64_t>();
      return sim;
    }
    if (kind == "dataset") {
      DatasetProvenance data;
      data.label = p.at("label").get<std::string>();
      data.policy = parse_window_policy(p.at("policy").get<std::string>());
      data.T = p.at("T").get<std::size_t>();
      data.min_length = p.at("min_length").get<std::size_t>();
      return data;
    }
    throw DataError("unknown provenance kind `" + kind + "`");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed provenance: ") + e.what());
  } catch (const ValidationError& e) {
    throw DataError(std::string("malformed provenance: ") + e.what());
  }
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string_view library_version() { return SHARPE_VERSION; }

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::string provenance_json(const Provenance& provenance) {
  return provenance_object(provenance).dump();
}

Provenance parse_provenance_json(std::string_view text) {
  json p;
  try {
    p = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid provenance JSON: ") + e.what());
  }
  return provenance_from(p);
}

void write_sample_set_csv(std::ostream& out, const JointSampleSet& set, const RunInfo& run) {
  write_run_comments(out, run);
  out << "# schema: " << kSampleSetSchema << '/' << kSampleSetVersion << '\n';
  out << "# provenance: " << provenance_json(set.provenance) << '\n';
  out << kSampleHeader << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& s = set.samples[i];
    out << i << ',' << format_double(s.m) << ',' << format_double(s.s) << ','
        << format_double(s.sharpe) << ',' << format_double(s.growth) << ',' << s.T << '\n';
  }
}

JointSampleSet read_sample_set_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto comments = read_preamble(in, kSampleHeader, line_no);
  check_schema(find_comment(comments, "schema"), kSampleSetSchema);

  JointSampleSet set;
  if (const auto* prov = find_comment(comments, "provenance")) {
    set.provenance = parse_provenance_json(*prov);
  } else {
    set.provenance = DatasetProvenance{"unknown", WindowPolicy::rolling_block, 0, 0};
  }

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 6) {
      throw DataError("line " + std::to_string(line_no) + ": expected 6 columns");
    }
    if (parse_count(cells[0], line_no) != set.size()) {
      throw DataError("line " + std::to_string(line_no) + ": index out of sequence");
    }
    SampleStats s;
    s.m = parse_double(cells[1], line_no);
    s.s = parse_double(cells[2], line_no);
    s.sharpe = parse_double(cells[3], line_no);
    s.growth = parse_double(cells[4], line_no);
    s.T = parse_count(cells[5], line_no);
    set.samples.push_back(s);
  }
  return set;
}

void write_sample_set_json(std::ostream& out, const JointSampleSet& set, const RunInfo& run) {
  ordered_json doc;
  doc["schema"] = kSampleSetSchema;
  doc["version"] = kSampleSetVersion;
  if (!run.empty()) doc["run"] = run_object(run);
  doc["provenance"] = provenance_object(set.provenance);
  doc["N"] = set.size();
  ordered_json cols;
  cols["m"] = mean_returns(set);
  cols["s"] = volatilities(set);
  cols["sharpe"] = sharpes(set);
  std::vector<double> growth;
  std::vector<std::size_t> periods;
  growth.reserve(set.size());
  periods.reserve(set.size());
  for (const auto& s : set.samples) {
    growth.push_back(s.growth);
    periods.push_back(s.T);
  }
  cols["growth"] = growth;
  cols["T"] = periods;
  doc["columns"] = std::move(cols);
  out << doc.dump() << '\n';
}

JointSampleSet read_sample_set_json(std::istream& in) {
  const json doc = parse_json(in);
  try {
    if (doc.at("schema").get<std::string>() != kSampleSetSchema) {
      throw DataError("unexpected schema in sample set JSON");
    }
    if (doc.at("version").get<int>() != kSampleSetVersion) {
      throw DataError("unsupported sample set version");
    }
    JointSampleSet set;
    set.provenance = provenance_from(doc.at("provenance"));
    const auto& cols = doc.at("columns");
    const auto m = cols.at("m").get<std::vector<double>>();
    const auto s = cols.at("s").get<std::vector<double>>();
    const auto sh = cols.at("sharpe").get<std::vector<double>>();
    const auto g = cols.at("growth").get<std::vector<double>>();
    const auto t = cols.at("T").get<std::vector<std::size_t>>();
    const std::size_t n = doc.at("N").get<std::size_t>();
    if (m.size() != n || s.size() != n || sh.size() != n || g.size() != n || t.size() != n) {
      throw DataError("sample set JSON columns disagree with N");
    }
    set.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) set.samples[i] = SampleStats{m[i], s[i], t[i], sh[i], g[i]};
    return set;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed sample set JSON: ") + e.what());
  }
}

JointSampleSet read_sample_set_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return path.extension() == ".json" ? read_sample_set_json(in) : read_sample_set_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_curve_csv(std::ostream& out, const ConditionalCurve& curve, const RunInfo& run) {
  write_run_comments(out, run);
  out << "# schema: " << kCurveSchema << "/1\n";
  out << kCurveHeader << '\n';
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << format_double(curve.thresholds[i]) << ',';
    if (curve.values[i]) out << format_double(*curve.values[i]);
    out << ',' << curve.counts[i] << ',' << (curve.values[i] ? 1 : 0) << ',';
    if (curve.std_errors[i]) out << format_double(*curve.std_errors[i]);
    out << '\n';
  }
}

ConditionalCurve read_curve_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto comments = read_preamble(in, kCurveHeader, line_no);
  check_schema(find_comment(comments, "schema"), kCurveSchema);
  ConditionalCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5) throw DataError("line " + std::to_string(line_no) + ": expected 5 columns");
    curve.thresholds.push_back(parse_double(cells[0], line_no));
    const bool defined = parse_count(cells[3], line_no) != 0;
    if (defined != !cells[1].empty()) {
      throw DataError("line " + std::to_string(line_no) + ": defined flag disagrees with value");
    }
    curve.values.push_back(defined ? std::optional(parse_double(cells[1], line_no)) : std::nullopt);
    curve.counts.push_back(parse_count(cells[2], line_no));
    curve.std_errors.push_back(cells[4].empty() ? std::nullopt
                                                : std::optional(parse_double(cells[4], line_no)));
  }
  return curve;
}

void write_curve_json(std::ostream& out, const ConditionalCurve& curve, const RunInfo& run) {
  ordered_json doc;
  doc["schema"] = kCurveSchema;
  doc["version"] = 1;
  if (!run.empty()) doc["run"] = run_object(run);
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    ordered_json e;
    e["threshold"] = curve.thresholds[i];
    e["value"] = curve.values[i] ? ordered_json(*curve.values[i]) : ordered_json(nullptr);
    e["count"] = curve.counts[i];
    e["defined"] = curve.values[i].has_value();
    e["std_error"] = curve.std_errors[i] ? ordered_json(*curve.std_errors[i]) : ordered_json(nullptr);
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  out << doc.dump(1) << '\n';
}

ConditionalCurve read_curve_json(std::istream& in) {
  const json doc = parse_json(in);
  try {
    if (doc.at("schema").get<std::string>() != kCurveSchema) {
      throw DataError("unexpected schema in curve JSON");
    }
    ConditionalCurve curve;
    for (const auto& e : doc.at("entries")) {
      curve.thresholds.push_back(e.at("threshold").get<double>());
      const auto& v = e.at("value");
      curve.values.push_back(v.is_null() ? std::nullopt : std::optional(v.get<double>()));
      curve.counts.push_back(e.at("count").get<std::size_t>());
      const auto& se = e.at("std_error");
      curve.std_errors.push_back(se.is_null() ? std::nullopt : std::optional(se.get<double>()));
    }
    return curve;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed curve JSON: ") + e.what());
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist, const RunInfo& run) {
  write_run_comments(out, run);
  out << "# total: " << hist.total << '\n';
  out << "bin_left,bin_right,count,density\n";
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    out << format_double(hist.edges[i]) << ',' << format_double(hist.edges[i + 1]) << ','
        << hist.counts[i] << ',' << format_double(hist.density(i)) << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, const RunInfo& run) {
  write_run_comments(out, run);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::logic_error("write_table_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_manifest_json(std::ostream& out, const LoadManifest& manifest, const RunInfo& run) {
  ordered_json doc;
  doc["schema"] = "sharpe.load_manifest";
  doc["version"] = 1;
  if (!run.empty()) doc["run"] = run_object(run);
  doc["files"] = manifest.entries.size();
  doc["failures"] = manifest.failures();
  ordered_json entries = ordered_json::array();
  for (const auto& e : manifest.entries) {
    ordered_json j;
    j["path"] = e.path;
    j["label"] = e.label;
    j["status"] = e.ok ? "ok" : "failed";
    j["rows"] = e.rows;
    j["returns"] = e.returns;
    j["windows"] = e.windows;
    j["degenerate_windows"] = e.degenerate_windows;
    if (!e.ok) j["reason"] = e.reason;
    entries.push_back(std::move(j));
  }
  doc["entries"] = std::move(entries);
  out << doc.dump(1) << '\n';
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sharpe
