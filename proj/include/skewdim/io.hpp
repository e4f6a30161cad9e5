#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skewdim {

/// Nine significant digits, the fixed CSV precision.
std::string fmt_g9(double x);
/// Six decimals, used for SVG coordinates.
std::string fmt_f6(double x);

/// Writes to a sibling temp file and renames it into place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Key-value report grouped by `[section]` headers, in insertion order.
class Report {
 public:
  void section(std::string name);
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void add(std::string key, long long value);
  void add(std::string key, bool value);
  std::string str() const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> items;
  };
  std::vector<Section> sections_;
};

}  // namespace skewdim
