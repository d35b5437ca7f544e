#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spanperc/cell.hpp"
#include "spanperc/rng.hpp"
#include "spanperc/vec.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

// One draw of (k, eps)-box percolation on a window: per cell, one uniformly
// chosen in-window cell edge, open with probability eps. Cells touching the
// window rim choose among fewer edges and carry the clipped flag so bulk
// statistics can exclude them.
template <int D>
struct BoxPercolationSample {
  struct CellEntry {
    Vec<D> center;
    Edge<D> chosen;
    bool open = false;
    bool clipped = false;
  };

  int k = 1;
  double eps = 0.0;
  std::uint64_t seed = 0;
  Window<D> window;
  std::vector<CellEntry> cells;  // sorted by center, lexicographic

  std::vector<Edge<D>> open_edges() const {
    std::vector<Edge<D>> out;
    for (const auto& c : cells)
      if (c.open) out.push_back(c.chosen);
    std::sort(out.begin(), out.end());
    return out;
  }
};

// The per-cell stream depends only on (seed, center), so enlarging the window
// never reshuffles cells it already covered.
template <int D>
BoxPercolationSample<D> sample_box_percolation(const Window<D>& window, int k,
                                               double eps,
                                               std::uint64_t seed) {
  check_scale(k);
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("sample_box_percolation: eps out of range");
  BoxPercolationSample<D> out;
  out.k = k;
  out.eps = eps;
  out.seed = seed;
  out.window = window;
  const std::size_t full = cell_edge_count<D>(k);
  for (const auto& z : cell_centers_meeting(window, k)) {
    std::vector<Edge<D>> inside;
    for (const auto& e : cell_edges(z, k))
      if (window.contains(e)) inside.push_back(e);
    // cell_centers_meeting guarantees at least one in-window edge.
    Rng rng(derive_cell(seed, z));
    std::size_t pick = rng.below(inside.size());
    double u = rng.uniform01();  // shared uniform: monotone coupling in eps
    out.cells.push_back({z, inside[pick], u < eps, inside.size() < full});
  }
  return out;
}

// Open edges with both endpoints in the region (Window or Annulus).
template <int D, class Region>
std::vector<Edge<D>> restrict_open(const BoxPercolationSample<D>& sample,
                                   const Region& region) {
  std::vector<Edge<D>> out;
  for (const auto& c : sample.cells)
    if (c.open && region.contains(c.chosen)) out.push_back(c.chosen);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spanperc
