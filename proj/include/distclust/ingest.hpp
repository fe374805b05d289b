#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distclust/gaussian.hpp"
#include "distclust/rng.hpp"

namespace distclust {

struct StockRecord {
  std::string date;  // ISO-8601 day, YYYY-MM-DD (a trailing time part is dropped)
  std::string symbol;
  double open = 0.0;
  double close = 0.0;
  double low = 0.0;
  double high = 0.0;
};

struct LoadOptions {
  int min_days = 30;
  // Strict mode turns skipped rows and OHLC-range violations into RowError.
  bool strict = false;
  // Replace each price series by its day-over-day log returns.
  bool log_returns = false;
};

struct LoadResult {
  std::vector<SampleGroup> groups;  // sorted by symbol
  std::size_t rows_read = 0;
  std::size_t skipped_rows = 0;
  std::size_t duplicate_rows = 0;
  std::size_t dropped_symbols = 0;
  std::size_t dropped_rows = 0;
  std::size_t range_violations = 0;
};

/// Parses OHLC rows (header with date, symbol, open, close, low, high in any
/// order and case; extra columns ignored). One group per symbol, samples
/// (open, close, low, high) ordered by date; duplicate (symbol, date) rows
/// keep the last occurrence.
LoadResult parse_stock_csv(std::string_view text, const LoadOptions& opts = {});
LoadResult load_stock_csv(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Adds independent N(0, sigma^2) noise to every coordinate.
std::vector<SampleGroup> add_noise(std::span<const SampleGroup> groups, double sigma, Rng& rng);

}  // namespace distclust
