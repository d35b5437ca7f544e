#pragma once

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "spanperc/window.hpp"

namespace spanperc {

// Edge cells for scale k: centers z range over (2kZ)^D and the cell at z
// holds the edges of the box [z-k, z+k]^D minus its "lower face" edges,
// i.e. edges whose endpoints both have some coordinate pinned at z_l - k.
// Every lattice edge lies in exactly one cell and each cell has D*(2k)^D
// edges.

inline void check_scale(int k) {
  if (k < 1) throw std::invalid_argument("cell scale k must be >= 1");
}

// Number of coordinates of u lying in k + 2kZ.
template <int D>
inline int coordinate_rank(const Vec<D>& u, int k) {
  check_scale(k);
  int r = 0;
  for (int i = 0; i < D; ++i) {
    int rem = (u[i] - k) % (2 * k);
    if (rem == 0) ++r;
  }
  return r;
}

// Membership test without enumerating the cell.
template <int D>
inline bool in_cell(const Edge<D>& e, const Vec<D>& z, int k) {
  check_scale(k);
  const Vec<D> v = e.other();
  for (int i = 0; i < D; ++i) {
    if (e.base[i] < z[i] - k || e.base[i] > z[i] + k) return false;
    if (v[i] < z[i] - k || v[i] > z[i] + k) return false;
  }
  for (int i = 0; i < D; ++i)
    if (i != e.axis && e.base[i] == z[i] - k) return false;
  return true;
}

// Center of the unique cell containing e. Built from the endpoint of
// smaller coordinate rank: each of its coordinates is rounded to the
// nearest 2k-multiple n with coordinate - 2k*n in (-k, k].
template <int D>
inline Vec<D> cell_of_edge(const Edge<D>& e, int k) {
  check_scale(k);
  const Vec<D> v = e.other();
  const Vec<D>& w =
      coordinate_rank(e.base, k) <= coordinate_rank(v, k) ? e.base : v;
  Vec<D> z{};
  for (int i = 0; i < D; ++i) z[i] = 2 * k * floor_div(w[i] + k - 1, 2 * k);
  return z;
}

// |E(Q_k^z)| = D * (2k)^D for every cell.
template <int D>
inline std::size_t cell_edge_count(int k) {
  check_scale(k);
  std::size_t n = D;
  for (int i = 0; i < D; ++i) n *= static_cast<std::size_t>(2 * k);
  return n;
}

template <int D>
inline std::vector<Edge<D>> cell_edges(const Vec<D>& z, int k) {
  check_scale(k);
  Vec<D> lo = z, hi = z;
  for (int i = 0; i < D; ++i) {
    lo[i] -= k;
    hi[i] += k;
  }
  Window<D> b(lo, hi);
  std::vector<Edge<D>> out;
  for (std::int64_t i = 0; i < b.edge_count(); ++i) {
    Edge<D> e = b.edge_at(i);
    bool lower_face = false;
    for (int j = 0; j < D; ++j)
      if (j != e.axis && e.base[j] == z[j] - k) {
        lower_face = true;
        break;
      }
    if (!lower_face) out.push_back(e);
  }
  return out;
}

// Cell centers whose cells contain at least one edge with both endpoints in
// the window, in deterministic (lexicographic) order.
template <int D>
inline std::vector<Vec<D>> cell_centers_meeting(const Window<D>& w, int k) {
  check_scale(k);
  Vec<D> zlo{}, zhi{};
  for (int i = 0; i < D; ++i) {
    zlo[i] = 2 * k * floor_div(w.lo[i] + k - 1, 2 * k);
    zhi[i] = 2 * k * floor_div(w.hi[i] + k - 1, 2 * k);
  }
  std::vector<Vec<D>> out;
  Vec<D> z = zlo;
  while (true) {
    bool any = false;
    for (const Edge<D>& e : cell_edges(z, k))
      if (w.contains(e)) {
        any = true;
        break;
      }
    if (any) out.push_back(z);
    int i = D - 1;
    while (i >= 0) {
      z[i] += 2 * k;
      if (z[i] <= zhi[i]) break;
      z[i] = zlo[i];
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

struct VecHash {
  template <int D>
  std::size_t operator()(const Vec<D>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int c : v) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(c));
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

// Edges with exactly one endpoint in the vertex set W. Edges of the window
// itself always count; edges leaving the window are included on request
// (wired reading of the window).
template <int D>
inline std::vector<Edge<D>> boundary_edges(const std::vector<Vec<D>>& w_set,
                                           const Window<D>& window,
                                           bool include_exterior = false) {
  std::unordered_set<Vec<D>, VecHash> in(w_set.begin(), w_set.end());
  for (const Vec<D>& v : w_set)
    if (!window.contains(v))
      throw std::invalid_argument("vertex outside window: " + format_vec(v));
  std::vector<Edge<D>> out;
  for (const Vec<D>& v : w_set) {
    for (int a = 0; a < D; ++a) {
      for (int s : {-1, +1}) {
        Vec<D> u = v;
        u[a] += s;
        if (in.count(u)) continue;
        if (!window.contains(u) && !include_exterior) continue;
        out.push_back(edge_between(v, u));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spanperc
