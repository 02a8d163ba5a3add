/**
 * Flat key-value configuration with [section] prefixes.
 *
 *   # comment
 *   d = 128
 *   [dist]
 *   type = bernoulli-blocks
 *
 * keys a section contributes are addressed as "dist.type". The raw file text
 * is retained so outputs can record a content hash.
 */
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wl1 {

class Config {
 public:
  static Config fromString(std::string text) {
    Config cfg;
    cfg.text_ = std::move(text);
    std::istringstream in(cfg.text_);
    std::string line, section;
    int lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      const std::string trimmed = trim(line);
      if (trimmed.empty() || trimmed[0] == '#') continue;
      if (trimmed.front() == '[' && trimmed.back() == ']') {
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config: line " + std::to_string(lineNo) + ": expected key = value");
      std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw std::runtime_error("config: line " + std::to_string(lineNo) + ": empty key");
      if (!section.empty()) key = section + "." + key;
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static Config fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fromString(buffer.str());
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string getString(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    return it->second;
  }

  std::string getString(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double getDouble(const std::string& key) const { return parseDouble(key, getString(key)); }
  double getDouble(const std::string& key, double fallback) const {
    return has(key) ? getDouble(key) : fallback;
  }

  long long getInt(const std::string& key) const {
    try {
      return std::stoll(getString(key));
    } catch (const std::exception&) {
      throw std::runtime_error("config: key '" + key + "' is not an integer");
    }
  }
  long long getInt(const std::string& key, long long fallback) const {
    return has(key) ? getInt(key) : fallback;
  }

  std::uint64_t getU64(const std::string& key) const {
    try {
      return std::stoull(getString(key));
    } catch (const std::exception&) {
      throw std::runtime_error("config: key '" + key + "' is not an unsigned integer");
    }
  }
  std::uint64_t getU64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? getU64(key) : fallback;
  }

  std::vector<double> getDoubleList(const std::string& key) const {
    std::vector<double> out;
    for (const auto& token : splitList(getString(key))) out.push_back(parseDouble(key, token));
    return out;
  }

  std::vector<int> getIntList(const std::string& key) const {
    std::vector<int> out;
    for (const auto& token : splitList(getString(key))) {
      try {
        out.push_back(std::stoi(token));
      } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + key + "' has a non-integer entry");
      }
    }
    return out;
  }

  const std::string& text() const { return text_; }

  /// FNV-1a over the raw configuration text.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text_) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  static std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
  }

  /// Comma- and/or whitespace-separated tokens.
  static std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> out;
    std::string token;
    for (char c : s) {
      if (c == ',' || c == ' ' || c == '\t') {
        if (!token.empty()) out.push_back(std::move(token));
        token.clear();
      } else {
        token.push_back(c);
      }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
  }

 private:
  static double parseDouble(const std::string& key, const std::string& value) {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      throw std::runtime_error("config: key '" + key + "' is not a number");
    }
  }

  std::map<std::string, std::string> values_;
  std::string text_;
};

}  // namespace wl1
