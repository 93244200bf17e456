#include "sharpe/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>
#include <utility>

#include "sharpe/error.hpp"
#include "sharpe/io.hpp"

namespace sharpe {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string row_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

struct CsvRow {
  std::size_t line;
  std::string_view date;
  std::string_view value;
};

// Minimal two-column reader: no quoting, blank lines skipped, optional BOM.
class TwoColumnCsv {
 public:
  TwoColumnCsv(std::istream& in, std::string_view expected_header) : in_(in) {
    if (!next_line()) throw DataError("empty file: missing header `" + std::string(expected_header) + "`");
    std::string_view header = trim(line_);
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    if (header != expected_header) {
      throw DataError(row_error(line_no_, "expected header `" + std::string(expected_header) +
                                              "`, got `" + std::string(header) + "`"));
    }
  }

  bool next(CsvRow& row) {
    while (next_line()) {
      const std::string_view text = trim(line_);
      if (text.empty()) continue;
      const auto comma = text.find(',');
      if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
        throw DataError(row_error(line_no_, "expected exactly 2 comma-separated fields"));
      }
      row = CsvRow{line_no_, trim(text.substr(0, comma)), trim(text.substr(comma + 1))};
      return true;
    }
    return false;
  }

 private:
  bool next_line() {
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    return true;
  }

  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

double parse_number(std::string_view text, std::size_t line, const char* field) {
  if (text.empty()) throw DataError(row_error(line, std::string("missing ") + field));
  double value = 0.0;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw DataError(row_error(line, std::string("invalid ") + field + " `" + std::string(text) + "`"));
  }
  return value;
}

void check_increasing(const std::vector<Date>& dates, Date next, std::size_t line) {
  if (dates.empty()) return;
  if (next == dates.back()) throw DataError(row_error(line, "duplicate date " + format_iso_date(next)));
  if (next < dates.back()) {
    throw DataError(row_error(line, "non-increasing dates: " + format_iso_date(next) + " after " +
                                        format_iso_date(dates.back())));
  }
}

Date parse_row_date(std::string_view text, std::size_t line) {
  try {
    return parse_iso_date(text);
  } catch (const DataError& e) {
    throw DataError(row_error(line, e.what()));
  }
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  auto bad = [&] { return DataError("invalid ISO-8601 date `" + std::string(text) + "`"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto field = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (ec != std::errc() || ptr != text.data() + pos + len) throw bad();
    return v;
  };
  const Date date{std::chrono::year{field(0, 4)},
                  std::chrono::month{static_cast<unsigned>(field(5, 2))},
                  std::chrono::day{static_cast<unsigned>(field(8, 2))}};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_iso_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

double RiskfreeCurve::yield_at(Date date) const {
  const auto it = std::upper_bound(dates.begin(), dates.end(), date);
  if (it == dates.begin()) {
    throw DataError("riskfree curve has no yield on or before " + format_iso_date(date));
  }
  return annual_yields[static_cast<std::size_t>(it - dates.begin()) - 1];
}

PriceSeries load_price_csv(std::istream& in, std::string label) {
  TwoColumnCsv csv(in, "date,adjusted_close");
  PriceSeries series;
  series.label = std::move(label);
  CsvRow row{};
  while (csv.next(row)) {
    const Date date = parse_row_date(row.date, row.line);
    const double price = parse_number(row.value, row.line, "price");
    if (!(price > 0.0)) {
      throw DataError(row_error(row.line, "non-positive price " + std::string(row.value)));
    }
    check_increasing(series.dates, date, row.line);
    series.dates.push_back(date);
    series.prices.push_back(price);
  }
  return series;
}

PriceSeries load_price_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return load_price_csv(in, path.stem().string());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_price_csv(std::ostream& out, const PriceSeries& prices) {
  out << "date,adjusted_close\n";
  for (std::size_t i = 0; i < prices.size(); ++i) {
    out << format_iso_date(prices.dates[i]) << ',' << format_double(prices.prices[i]) << '\n';
  }
}

RiskfreeCurve load_riskfree_csv(std::istream& in) {
  TwoColumnCsv csv(in, "date,yield_percent");
  RiskfreeCurve curve;
  CsvRow row{};
  while (csv.next(row)) {
    const Date date = parse_row_date(row.date, row.line);
    const double percent = parse_number(row.value, row.line, "yield");
    check_increasing(curve.dates, date, row.line);
    curve.dates.push_back(date);
    curve.annual_yields.push_back(percent / 100.0);
  }
  if (curve.dates.empty()) throw DataError("riskfree file has no observations");
  return curve;
}

RiskfreeCurve load_riskfree_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return load_riskfree_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

DatedReturns log_returns(const PriceSeries& prices) {
  if (prices.size() < 2) throw ValidationError("log_returns: need at least 2 prices");
  DatedReturns out;
  out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  out.values.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    out.values.push_back(std::log(prices.prices[i] / prices.prices[i - 1]));
  }
  return out;
}

double periodic_riskfree_rate(double annual_yield, std::size_t periods_per_year) {
  if (periods_per_year == 0) throw ValidationError("periods_per_year must be >= 1");
  if (!(annual_yield > -1.0)) throw ValidationError("annual yield must exceed -100%");
  return std::log1p(annual_yield) / static_cast<double>(periods_per_year);
}

ReturnSeries excess_returns(const DatedReturns& returns, const RiskfreeCurve& riskfree,
                            std::size_t periods_per_year) {
  if (returns.dates.size() != returns.values.size()) {
    throw ValidationError("excess_returns: dates and values differ in length");
  }
  ReturnSeries series;
  series.periods_per_year = periods_per_year;
  series.dates = returns.dates;
  series.values.reserve(returns.values.size());
  for (std::size_t i = 0; i < returns.values.size(); ++i) {
    const double r0 = periodic_riskfree_rate(riskfree.yield_at(returns.dates[i]), periods_per_year);
    series.values.push_back(returns.values[i] - r0);
  }
  return series;
}

std::vector<ReturnSeries> windows(const ReturnSeries& series, WindowPolicy policy,
                                  std::size_t periods, std::size_t min_length) {
  if (min_length > periods) throw ValidationError("windows: min_length must not exceed T");
  const bool dated = !series.dates.empty();
  if (dated && series.dates.size() != series.values.size()) {
    throw ValidationError("windows: dates and values differ in length");
  }

  auto slice = [&](std::size_t begin, std::size_t end, std::string suffix) {
    ReturnSeries w;
    w.periods_per_year = series.periods_per_year;
    w.label = series.label.empty() ? std::move(suffix) : series.label + ":" + suffix;
    w.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(begin),
                    series.values.begin() + static_cast<std::ptrdiff_t>(end));
    if (dated) {
      w.dates.assign(series.dates.begin() + static_cast<std::ptrdiff_t>(begin),
                     series.dates.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return w;
  };

  std::vector<ReturnSeries> out;
  switch (policy) {
    case WindowPolicy::rolling_block: {
      if (periods < 2) throw ValidationError("windows: rolling_block requires T >= 2");
      for (std::size_t b = 0; b + periods <= series.size(); b += periods) {
        out.push_back(slice(b, b + periods, "block" + std::to_string(b / periods)));
      }
      break;
    }
    case WindowPolicy::calendar_year: {
      if (!dated) throw ValidationError("windows: calendar_year requires dated returns");
      if (min_length < 2) throw ValidationError("windows: calendar_year requires min_length >= 2");
      std::size_t begin = 0;
      while (begin < series.size()) {
        const auto year = series.dates[begin].year();
        std::size_t end = begin;
        while (end < series.size() && series.dates[end].year() == year) ++end;
        if (end - begin >= min_length) {
          out.push_back(slice(begin, end, std::to_string(static_cast<int>(year))));
        }
        begin = end;
      }
      break;
    }
  }
  return out;
}

std::size_t LoadManifest::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const ManifestEntry& e) { return !e.ok; }));
}

PanelResult panel_stats(std::span<const std::filesystem::path> price_files,
                        const RiskfreeCurve& riskfree, const WindowingOptions& options,
                        std::string dataset_label) {
  if (price_files.empty()) throw ValidationError("panel_stats: no price files given");
  if (options.min_length > options.T) throw ValidationError("panel_stats: min_length must not exceed T");

  struct Item {
    std::filesystem::path path;
    std::string label;
  };
  std::vector<Item> items;
  items.reserve(price_files.size());
  for (const auto& p : price_files) items.push_back({p, p.stem().string()});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::tie(a.label, a.path) < std::tie(b.label, b.path);
  });

  PanelResult result;
  result.set.provenance =
      DatasetProvenance{std::move(dataset_label), options.policy, options.T, options.min_length};

  for (const auto& item : items) {
    ManifestEntry entry;
    entry.path = item.path.string();
    entry.label = item.label;
    try {
      const PriceSeries prices = load_price_file(item.path);
      entry.rows = prices.size();
      ReturnSeries eta = excess_returns(log_returns(prices), riskfree);
      eta.label = item.label;
      entry.returns = eta.size();
      std::vector<SampleStats> stats;
      for (const auto& w : windows(eta, options.policy, options.T, options.min_length)) {
        try {
          stats.push_back(sample_stats(w));
        } catch (const DegenerateVolatilityError&) {
          ++entry.degenerate_windows;
        }
      }
      entry.windows = stats.size();
      entry.ok = true;
      result.set.samples.insert(result.set.samples.end(), stats.begin(), stats.end());
      result.pooled.insert(result.pooled.end(), eta.values.begin(), eta.values.end());
    } catch (const std::exception& e) {
      entry.ok = false;
      entry.reason = e.what();
    }
    result.manifest.entries.push_back(std::move(entry));
  }

  if (result.set.empty()) {
    throw DataError("panel_stats: no usable windows across " + std::to_string(items.size()) +
                    " file(s) (" + std::to_string(result.manifest.failures()) + " failed to load)");
  }
  result.pooled_mean = mean_return(result.pooled);
  result.pooled_sd = volatility(result.pooled);
  return result;
}

}  // namespace sharpe
