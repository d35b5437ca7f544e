#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanperc/vec.hpp"

namespace spanperc::io {

// Edge-list snapshot: one header line of key=value tokens, then one canonical
// edge per line. Round-trips bit-exactly. `k` is 0 when the edge set has no
// cell-scale context, `eps` is negative when there is no percolation density.
template <int D>
struct EdgeListSnapshot {
  int k = 0;
  double eps = -1.0;
  std::uint64_t seed = 0;
  std::vector<Edge<D>> edges;
};

inline std::string format_double_exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <int D>
void write_edge_list(std::ostream& os, const EdgeListSnapshot<D>& snap) {
  os << "d=" << D << " k=" << snap.k;
  if (snap.eps >= 0.0) os << " eps=" << format_double_exact(snap.eps);
  os << " seed=" << snap.seed << "\n";
  for (const auto& e : snap.edges) os << format_edge(e) << "\n";
}

template <int D>
EdgeListSnapshot<D> read_edge_list(std::istream& is) {
  std::string header;
  if (!std::getline(is, header))
    throw std::invalid_argument("edge list: missing header");
  EdgeListSnapshot<D> snap;
  bool saw_d = false;
  std::istringstream hs(header);
  std::string token;
  while (hs >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("edge list: malformed header token '" +
                                  token + "'");
    std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    if (key == "d") {
      if (std::stoi(value) != D)
        throw std::invalid_argument("edge list: dimension mismatch, file has " +
                                    value);
      saw_d = true;
    } else if (key == "k") {
      snap.k = std::stoi(value);
    } else if (key == "eps") {
      snap.eps = std::strtod(value.c_str(), nullptr);
    } else if (key == "seed") {
      snap.seed = std::stoull(value);
    } else {
      throw std::invalid_argument("edge list: unknown header key '" + key +
                                  "'");
    }
  }
  if (!saw_d) throw std::invalid_argument("edge list: header lacks d=");
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    snap.edges.push_back(parse_edge<D>(line));
  }
  return snap;
}

template <int D>
void write_edge_list_file(const std::string& path,
                          const EdgeListSnapshot<D>& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_edge_list(os, snap);
  if (!os) throw std::runtime_error("write failed: " + path);
}

template <int D>
EdgeListSnapshot<D> read_edge_list_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return read_edge_list<D>(is);
}

}  // namespace spanperc::io
