#include "distclust/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "distclust/errors.hpp"

namespace distclust {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path.string() + "'");
  out << text;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::SchemaError, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, res.ptr);
  if (std::isfinite(value) && s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string groups_to_csv(std::span<const SampleGroup> groups) {
  std::string out = "object_id,sample_index";
  const Eigen::Index d = groups.empty() ? 0 : groups.front().dim();
  for (Eigen::Index j = 0; j < d; ++j) out += ",x_" + std::to_string(j);
  out += '\n';
  for (const SampleGroup& g : groups) {
    for (std::size_t s = 0; s < g.samples.size(); ++s) {
      out += g.id;
      out += ',';
      out += std::to_string(s);
      for (Eigen::Index j = 0; j < g.samples[s].size(); ++j) {
        out += ',';
        out += format_number(g.samples[s](j));
      }
      out += '\n';
    }
  }
  return out;
}

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
    throw Error(Errc::RowError, "line " + std::to_string(line_no) + ": cannot parse number '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<SampleGroup> groups_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::SchemaError, "groups.csv is empty");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "object_id" || header[1] != "sample_index") {
    throw Error(Errc::SchemaError, "groups.csv header must start with object_id,sample_index,x_0");
  }
  const std::size_t d = header.size() - 2;

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<long, Vector>>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != d + 2) {
      throw Error(Errc::RowError, "line " + std::to_string(line_no) + ": expected " + std::to_string(d + 2) + " fields");
    }
    Vector x(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(j)) = parse_double(fields[j + 2], line_no);
    auto [it, inserted] = rows.try_emplace(fields[0]);
    if (inserted) order.push_back(fields[0]);
    it->second.emplace_back(static_cast<long>(parse_double(fields[1], line_no)), std::move(x));
  }

  std::vector<SampleGroup> out;
  for (const std::string& id : order) {
    auto& samples = rows[id];
    std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SampleGroup g{id, {}};
    for (auto& [idx, x] : samples) g.samples.push_back(std::move(x));
    out.push_back(std::move(g));
  }
  return out;
}

nlohmann::json models_to_json(std::span<const GaussianModel> models) {
  nlohmann::json out = nlohmann::json::array();
  for (const GaussianModel& g : models) {
    std::vector<double> mean(g.mean.data(), g.mean.data() + g.mean.size());
    nlohmann::json cov = nlohmann::json::array();
    for (Eigen::Index i = 0; i < g.dim(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < g.dim(); ++j) row.push_back(g.covariance(i, j));
      cov.push_back(std::move(row));
    }
    out.push_back({{"mean", mean}, {"cov", std::move(cov)}});
  }
  return out;
}

std::vector<GaussianModel> models_from_json(const nlohmann::json& j) {
  std::vector<GaussianModel> out;
  try {
    for (const auto& item : j) {
      const auto mean = item.at("mean").get<std::vector<double>>();
      const auto cov = item.at("cov").get<std::vector<std::vector<double>>>();
      const auto d = static_cast<Eigen::Index>(mean.size());
      if (d < 1 || static_cast<Eigen::Index>(cov.size()) != d) throw Error(Errc::SchemaError, "model covariance shape does not match mean");
      Matrix m(d, d);
      for (Eigen::Index r = 0; r < d; ++r) {
        if (static_cast<Eigen::Index>(cov[r].size()) != d) throw Error(Errc::SchemaError, "covariance row has wrong length");
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = cov[r][c];
      }
      out.push_back({Eigen::Map<const Vector>(mean.data(), d), SymMatrix(m)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("models JSON: ") + e.what());
  }
  return out;
}

}  // namespace distclust
