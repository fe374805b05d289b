#include "distclust/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "distclust/errors.hpp"
#include "distclust/io.hpp"

namespace distclust {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<double> to_double(const std::string& field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

bool is_iso_day(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

struct Columns {
  std::size_t date, symbol, open, close, low, high, width;
};

Columns locate_columns(const std::vector<std::string>& header) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = lower(header[i]);
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name = name.substr(3);
    index.try_emplace(name, i);
  }
  auto need = [&](const char* name) {
    const auto it = index.find(name);
    if (it == index.end()) throw Error(Errc::SchemaError, std::string("stock CSV is missing column '") + name + "'");
    return it->second;
  };
  return {need("date"), need("symbol"), need("open"), need("close"), need("low"), need("high"), header.size()};
}

}  // namespace

LoadResult parse_stock_csv(std::string_view text, const LoadOptions& opts) {
  std::istringstream in{std::string(text)};
  std::string line;
  LoadResult out;
  if (!std::getline(in, line)) return out;
  const Columns col = locate_columns(split_csv_line(line));

  // symbol -> date -> sample; later rows overwrite earlier ones.
  std::map<std::string, std::map<std::string, Vector>> series;
  std::size_t line_no = 1;
  auto reject = [&](const std::string& why) {
    if (opts.strict) throw Error(Errc::RowError, "line " + std::to_string(line_no) + ": " + why);
    ++out.skipped_rows;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    ++out.rows_read;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() < col.width) {
      reject("expected " + std::to_string(col.width) + " fields, got " + std::to_string(f.size()));
      continue;
    }
    StockRecord rec;
    rec.date = f[col.date].substr(0, 10);
    rec.symbol = f[col.symbol];
    const auto open = to_double(f[col.open]);
    const auto close = to_double(f[col.close]);
    const auto low = to_double(f[col.low]);
    const auto high = to_double(f[col.high]);
    if (!is_iso_day(rec.date) || rec.symbol.empty()) {
      reject("bad date or symbol");
      continue;
    }
    if (!open || !close || !low || !high || *open <= 0 || *close <= 0 || *low <= 0 || *high <= 0) {
      reject("unparsable or non-positive price");
      continue;
    }
    rec.open = *open;
    rec.close = *close;
    rec.low = *low;
    rec.high = *high;
    if (rec.low > std::min(rec.open, rec.close) || rec.high < std::max(rec.open, rec.close)) {
      if (opts.strict) throw Error(Errc::RowError, "line " + std::to_string(line_no) + ": low/high do not bracket open/close");
      ++out.range_violations;
    }
    Vector sample(4);
    sample << rec.open, rec.close, rec.low, rec.high;
    auto [it, inserted] = series[rec.symbol].insert_or_assign(rec.date, std::move(sample));
    if (!inserted) ++out.duplicate_rows;
  }

  for (auto& [symbol, days] : series) {
    if (static_cast<int>(days.size()) < opts.min_days) {
      ++out.dropped_symbols;
      out.dropped_rows += days.size();
      continue;
    }
    SampleGroup g{symbol, {}};
    for (auto& [date, sample] : days) g.samples.push_back(std::move(sample));
    if (opts.log_returns) {
      std::vector<Vector> returns;
      for (std::size_t t = 1; t < g.samples.size(); ++t) {
        returns.emplace_back((g.samples[t].array() / g.samples[t - 1].array()).log().matrix());
      }
      g.samples = std::move(returns);
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

LoadResult load_stock_csv(const std::filesystem::path& path, const LoadOptions& opts) {
  return parse_stock_csv(read_text(path), opts);
}

std::vector<SampleGroup> add_noise(std::span<const SampleGroup> groups, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw Error(Errc::InvalidConfig, "noise sigma must be non-negative");
  std::vector<SampleGroup> out(groups.begin(), groups.end());
  if (sigma == 0.0) return out;
  std::normal_distribution<double> normal(0.0, sigma);
  for (SampleGroup& g : out) {
    for (Vector& s : g.samples) {
      for (Eigen::Index j = 0; j < s.size(); ++j) s(j) += normal(rng);
    }
  }
  return out;
}

}  // namespace distclust
