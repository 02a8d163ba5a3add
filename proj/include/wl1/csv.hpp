/// Deterministic CSV output: fixed "%.12g" float formatting so a rerun with
/// the same configuration and seed reproduces files byte for byte.
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace wl1 {

inline std::string formatDouble(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path + " for writing");
  }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& cell : cells) {
      if (!first) out_ << ',';
      out_ << cell;
      first = false;
    }
    out_ << '\n';
  }

  static std::string cell(double v) { return formatDouble(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

 private:
  std::ofstream out_;
};

}  // namespace wl1
