#include "c2approx/reports.hpp"

#ifndef C2APPROX_GIT_DESCRIBE
#define C2APPROX_GIT_DESCRIBE "unknown"
#endif

namespace c2approx {

std::uint64_t config_hash(const std::string& config) {
  // FNV-1a
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string build_id() { return C2APPROX_GIT_DESCRIBE; }

CsvWriter::CsvWriter(const std::string& path, const std::string& header_line,
                     std::uint64_t seed, const std::string& config)
    : path_(path) {
  std::ostringstream os;
  os << "# build=" << build_id() << " seed=" << seed << " config=" << std::hex
     << config_hash(config);
  lines_.push_back(os.str());
  lines_.push_back(header_line);
}

void CsvWriter::close() {
  if (closed_) return;
  std::ofstream out(path_, std::ios::binary);
  for (const auto& l : lines_) out << l << '\n';
  closed_ = true;
}

CsvWriter::~CsvWriter() { close(); }

void JsonSummary::set(const std::string& key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  items_.emplace_back(key, os.str());
}

void JsonSummary::set(const std::string& key, const std::string& value) {
  items_.emplace_back(key, "\"" + value + "\"");
}

void JsonSummary::set(const std::string& key, bool value) {
  items_.emplace_back(key, value ? "true" : "false");
}

std::string JsonSummary::str() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < items_.size(); ++i) {
    if (i) os << ",";
    os << "\n  \"" << items_[i].first << "\": " << items_[i].second;
  }
  os << "\n}\n";
  return os.str();
}

void JsonSummary::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  out << str();
}

double loglog_slope(const Vector& x, const Vector& y) {
  const Index n = x.size();
  Vector lx(n), ly(n);
  for (Index i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::max(y[i], 1e-300));
  }
  const double mx = lx.mean(), my = ly.mean();
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += sqr(lx[i] - mx);
  }
  return num / den;
}

}  // namespace c2approx
