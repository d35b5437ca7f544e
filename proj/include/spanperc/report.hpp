#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace spanperc {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Ordered key=value echo of the run configuration; embedded verbatim at the
// top of every output file so results are self-describing.
using Config = std::vector<std::pair<std::string, std::string>>;

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string fmt_bool(bool b) { return b ? "1" : "0"; }

// CSV with `# key=value` header lines. All formatting is locale-free and
// deterministic, so identical runs produce identical bytes.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const Config& config,
            const std::vector<std::string>& columns)
      : os_(path, std::ios::binary) {
    if (!os_) throw std::runtime_error("cannot open for writing: " + path);
    os_ << "# version=" << kArtifactVersion << "\n";
    for (const auto& [k, v] : config) os_ << "# " << k << "=" << v << "\n";
    write_row(columns);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ",";
      os_ << cells[i];
    }
    os_ << "\n";
  }

  void close() {
    os_.close();
    if (!os_) throw std::runtime_error("csv write failed");
  }

 private:
  std::ofstream os_;
};

inline nlohmann::json json_summary_base(const Config& config) {
  nlohmann::json j;
  j["version"] = kArtifactVersion;
  auto& c = j["config"];
  for (const auto& [k, v] : config) c[k] = v;
  return j;
}

inline void write_json_file(const std::string& path,
                            const nlohmann::json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
  if (!os) throw std::runtime_error("json write failed: " + path);
}

}  // namespace spanperc
