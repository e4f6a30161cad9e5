#include "skewdim/io.hpp"

#include <cstdio>
#include <fstream>

#include "skewdim/error.hpp"

namespace skewdim {

std::string fmt_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string fmt_f6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

void Report::section(std::string name) { sections_.push_back({std::move(name), {}}); }

void Report::add(std::string key, std::string value) {
  if (sections_.empty()) section("general");
  sections_.back().items.emplace_back(std::move(key), std::move(value));
}

void Report::add(std::string key, double value) { add(std::move(key), fmt_g9(value)); }
void Report::add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
void Report::add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }

std::string Report::str() const {
  std::string out;
  for (std::size_t s = 0; s < sections_.size(); ++s) {
    if (s) out += '\n';
    out += '[' + sections_[s].name + "]\n";
    for (const auto& [k, v] : sections_[s].items) out += k + " = " + v + '\n';
  }
  return out;
}

}  // namespace skewdim
