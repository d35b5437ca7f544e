#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spanperc/vec.hpp"

namespace spanperc {

// Finite axis-aligned box of lattice sites, [lo, hi] in every coordinate.
// Vertices are indexed row-major so index <-> coordinates round-trips.
template <int D>
struct Window {
  Vec<D> lo{};
  Vec<D> hi{};

  Window() = default;
  Window(const Vec<D>& lo_, const Vec<D>& hi_) : lo(lo_), hi(hi_) {
    for (int i = 0; i < D; ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("empty window extent");
  }

  // Centered box [-r, r]^D.
  static Window box(int radius) {
    if (radius < 0) throw std::invalid_argument("negative box radius");
    Window w;
    for (int i = 0; i < D; ++i) {
      w.lo[i] = -radius;
      w.hi[i] = radius;
    }
    return w;
  }

  Window grown(int pad) const {
    if (pad < 0) throw std::invalid_argument("negative padding");
    Window w = *this;
    for (int i = 0; i < D; ++i) {
      w.lo[i] -= pad;
      w.hi[i] += pad;
    }
    return w;
  }

  int size(int axis) const { return hi[axis] - lo[axis] + 1; }

  bool contains(const Vec<D>& v) const {
    for (int i = 0; i < D; ++i)
      if (v[i] < lo[i] || v[i] > hi[i]) return false;
    return true;
  }

  bool contains(const Edge<D>& e) const {
    return contains(e.base) && contains(e.other());
  }

  // True when v lies on the window frame (some coordinate at lo or hi).
  bool on_frame(const Vec<D>& v) const {
    for (int i = 0; i < D; ++i)
      if (v[i] == lo[i] || v[i] == hi[i]) return true;
    return false;
  }

  std::int64_t vertex_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < D; ++i) n *= size(i);
    return n;
  }

  std::int64_t index(const Vec<D>& v) const {
    std::int64_t idx = 0;
    for (int i = 0; i < D; ++i) idx = idx * size(i) + (v[i] - lo[i]);
    return idx;
  }

  Vec<D> vertex(std::int64_t idx) const {
    Vec<D> v{};
    for (int i = D - 1; i >= 0; --i) {
      v[i] = lo[i] + static_cast<int>(idx % size(i));
      idx /= size(i);
    }
    return v;
  }

  // In-window edges per axis: along axis a the base ranges over size(a)-1
  // slots. Edges are indexed axis-major.
  std::int64_t edge_count_axis(int axis) const {
    std::int64_t n = 1;
    for (int i = 0; i < D; ++i) n *= size(i) - (i == axis ? 1 : 0);
    return n;
  }

  std::int64_t edge_count() const {
    std::int64_t n = 0;
    for (int a = 0; a < D; ++a) n += edge_count_axis(a);
    return n;
  }

  std::int64_t edge_index(const Edge<D>& e) const {
    std::int64_t idx = 0;
    for (int a = 0; a < e.axis; ++a) idx += edge_count_axis(a);
    std::int64_t off = 0;
    for (int i = 0; i < D; ++i) {
      int sz = size(i) - (i == e.axis ? 1 : 0);
      off = off * sz + (e.base[i] - lo[i]);
    }
    return idx + off;
  }

  Edge<D> edge_at(std::int64_t idx) const {
    for (int a = 0; a < D; ++a) {
      std::int64_t na = edge_count_axis(a);
      if (idx >= na) {
        idx -= na;
        continue;
      }
      Edge<D> e;
      e.axis = a;
      for (int i = D - 1; i >= 0; --i) {
        int sz = size(i) - (i == a ? 1 : 0);
        e.base[i] = lo[i] + static_cast<int>(idx % sz);
        idx /= sz;
      }
      return e;
    }
    throw std::out_of_range("edge index out of range");
  }

  std::vector<Edge<D>> all_edges() const {
    std::vector<Edge<D>> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (std::int64_t i = 0; i < edge_count(); ++i) out.push_back(edge_at(i));
    return out;
  }

  auto operator<=>(const Window&) const = default;
};

// Centered Chebyshev annulus: sites v with inner < |v - center| <= outer.
template <int D>
struct Annulus {
  Vec<D> center{};
  int inner = 0;
  int outer = 0;

  Annulus(int inner_, int outer_, const Vec<D>& center_ = zero<D>())
      : center(center_), inner(inner_), outer(outer_) {
    if (inner < 0 || inner >= outer)
      throw std::invalid_argument("annulus radii must satisfy 0 <= inner < outer");
  }

  bool contains(const Vec<D>& v) const {
    int r = cheb_dist(v, center);
    return r > inner && r <= outer;
  }

  bool contains(const Edge<D>& e) const {
    return contains(e.base) && contains(e.other());
  }
};

}  // namespace spanperc
