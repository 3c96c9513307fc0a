#pragma once

// CSV and JSON output. Files are written to a temporary sibling and renamed
// into place.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "catamp/errors.hpp"
#include "catamp/hilbert.hpp"

namespace catamp {

class IoError : public Error {
 public:
  using Error::Error;
};

using Json = nlohmann::ordered_json;

// "6G", "3.58u", "250", 1e-8 ... SI prefixes f p n u m k M G T; 'm' is milli.
double parse_engineering(const Json& value, std::string_view field);
double parse_engineering(std::string_view text, std::string_view field);
inline double parse_engineering(const char* text, std::string_view field) {
  return parse_engineering(std::string_view(text), field);
}
inline double parse_engineering(const std::string& text, std::string_view field) {
  return parse_engineering(std::string_view(text), field);
}

std::string format_number(double v);  // 9 significant digits

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  void add_row(const std::vector<std::string>& row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(std::string_view field);

void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// FNV-1a over the bytes of s.
std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t v);

// Full complex matrix as nested [re, im] pairs.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

}  // namespace catamp
