#include "catamp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <fmt/format.h>
#include <unistd.h>

namespace catamp {

double parse_engineering(std::string_view text, std::string_view field) {
  auto fail = [&] { return ConfigError(fmt::format("{}: cannot parse '{}' as a number", field, text)); };
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  if (text.empty()) throw fail();
  double scale = 1.0;
  switch (text.back()) {
    case 'f': scale = 1e-15; break;
    case 'p': scale = 1e-12; break;
    case 'n': scale = 1e-9; break;
    case 'u': scale = 1e-6; break;
    case 'm': scale = 1e-3; break;
    case 'k': scale = 1e3; break;
    case 'M': scale = 1e6; break;
    case 'G': scale = 1e9; break;
    case 'T': scale = 1e12; break;
    default: break;
  }
  if (scale != 1.0) text.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) throw fail();
  return v * scale;
}

double parse_engineering(const Json& value, std::string_view field) {
  if (value.is_number()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw ConfigError(fmt::format("{}: value must be finite", field));
    return v;
  }
  if (value.is_string()) return parse_engineering(std::string_view(value.get_ref<const std::string&>()), field);
  throw ConfigError(fmt::format("{}: expected a number or an engineering-notation string", field));
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.9g}", v);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw InvalidArgument("CSV header must not be empty");
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> s;
  s.reserve(row.size());
  for (double v : row) s.push_back(format_number(v));
  add_row(s);
}

void CsvTable::add_row(const std::vector<std::string>& row) {
  if (row.size() != header_.size()) throw InvalidArgument("CSV row width does not match the header");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(r[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
  }
  fs::path tmp = path;
  tmp += fmt::format(".tmp.{}", static_cast<long>(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) {
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError(fmt::format("cannot move {} into place: {}", path.string(), ec.message()));
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(r));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("matrix must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto c = n ? static_cast<Eigen::Index>(j[0].size()) : 0;
  CMatrix m(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != c) throw ConfigError("ragged matrix rows");
    for (Eigen::Index k = 0; k < c; ++k) {
      const Json& e = j[i][k];
      if (!e.is_array() || e.size() != 2) throw ConfigError("matrix entries must be [re, im] pairs");
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace catamp
