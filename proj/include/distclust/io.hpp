#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "distclust/gaussian.hpp"

namespace distclust {

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
nlohmann::json read_json(const std::filesystem::path& path);

/// Shortest round-trip decimal; integral values keep a trailing ".0".
std::string format_number(double value);

/// groups.csv: header `object_id,sample_index,x_0,...,x_{d-1}`, one row per sample.
std::string groups_to_csv(std::span<const SampleGroup> groups);
/// Groups come back in first-appearance order, samples sorted by sample_index.
std::vector<SampleGroup> groups_from_csv(std::string_view text);

/// [{"mean": [...], "cov": [[...], ...]}, ...]
nlohmann::json models_to_json(std::span<const GaussianModel> models);
std::vector<GaussianModel> models_from_json(const nlohmann::json& j);

/// Splits one CSV line on commas, trimming whitespace and surrounding quotes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace distclust
