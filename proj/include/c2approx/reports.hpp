#pragma once

#include "c2approx/types.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace c2approx {

/// CSV writer with a reproducibility comment header (build id, seed, config
/// hash); reruns of the same configuration are byte-identical.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header_line,
            std::uint64_t seed, const std::string& config);

  template <typename... Ts>
  void row(const Ts&... vals) {
    std::ostringstream os;
    os.precision(17);
    int i = 0;
    ((os << (i++ ? "," : "") << vals), ...);
    lines_.push_back(os.str());
  }
  void close();
  ~CsvWriter();

 private:
  std::string path_;
  std::vector<std::string> lines_;
  bool closed_ = false;
};

std::uint64_t config_hash(const std::string& config);
std::string build_id();

/// Minimal ordered JSON object writer for run summaries.
class JsonSummary {
 public:
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, bool value);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const Vector& x, const Vector& y);

}  // namespace c2approx
