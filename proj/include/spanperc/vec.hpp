#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spanperc {

// Lattice site in Z^D.
template <int D>
struct Vec {
  static constexpr int dim = D;
  std::array<int, D> c{};

  int& operator[](int i) { return c[i]; }
  int operator[](int i) const { return c[i]; }
  auto begin() const { return c.begin(); }
  auto end() const { return c.end(); }
  auto operator<=>(const Vec&) const = default;
};

template <int D>
inline Vec<D> zero() {
  return Vec<D>{};
}

template <int D>
inline Vec<D> unit(int axis) {
  Vec<D> v{};
  v[axis] = 1;
  return v;
}

template <int D>
inline Vec<D> ones() {
  Vec<D> v{};
  for (int i = 0; i < D; ++i) v[i] = 1;
  return v;
}

template <int D>
inline Vec<D> add(Vec<D> a, const Vec<D>& b) {
  for (int i = 0; i < D; ++i) a[i] += b[i];
  return a;
}

template <int D>
inline Vec<D> sub(Vec<D> a, const Vec<D>& b) {
  for (int i = 0; i < D; ++i) a[i] -= b[i];
  return a;
}

template <int D>
inline Vec<D> scale(Vec<D> a, int s) {
  for (int i = 0; i < D; ++i) a[i] *= s;
  return a;
}

// Chebyshev (sup) norm.
template <int D>
inline int cheb_norm(const Vec<D>& v) {
  int m = 0;
  for (int x : v) m = std::max(m, std::abs(x));
  return m;
}

template <int D>
inline int cheb_dist(const Vec<D>& a, const Vec<D>& b) {
  return cheb_norm(sub(a, b));
}

// Floor division for possibly negative numerators, b > 0.
inline int floor_div(int a, int b) {
  int q = a / b;
  if (a % b != 0 && (a < 0) != (b < 0)) --q;
  return q;
}

template <int D>
inline std::string format_vec(const Vec<D>& v) {
  std::string s;
  for (int i = 0; i < D; ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

template <int D>
inline Vec<D> parse_vec(const std::string& text) {
  Vec<D> v{};
  std::istringstream in(text);
  for (int i = 0; i < D; ++i) {
    if (!(in >> v[i])) throw std::invalid_argument("bad vertex tuple: " + text);
    if (i + 1 < D) {
      char sep = 0;
      if (!(in >> sep) || sep != ',')
        throw std::invalid_argument("bad vertex tuple: " + text);
    }
  }
  char extra = 0;
  if (in >> extra) throw std::invalid_argument("bad vertex tuple: " + text);
  return v;
}

// Nearest-neighbour edge, stored canonically: endpoints are base and
// base + e_axis.
template <int D>
struct Edge {
  Vec<D> base{};
  int axis = 0;

  Vec<D> other() const { return add(base, unit<D>(axis)); }
  auto operator<=>(const Edge&) const = default;
};

// Canonical edge from an arbitrary pair of adjacent sites.
template <int D>
inline Edge<D> edge_between(const Vec<D>& u, const Vec<D>& v) {
  int axis = -1;
  for (int i = 0; i < D; ++i) {
    if (u[i] == v[i]) continue;
    if (axis >= 0 || std::abs(u[i] - v[i]) != 1)
      throw std::invalid_argument("not a lattice edge: " + format_vec(u) + ";" +
                                  format_vec(v));
    axis = i;
  }
  if (axis < 0)
    throw std::invalid_argument("not a lattice edge (equal endpoints): " +
                                format_vec(u));
  return u[axis] < v[axis] ? Edge<D>{u, axis} : Edge<D>{v, axis};
}

template <int D>
inline std::string format_edge(const Edge<D>& e) {
  return format_vec(e.base) + ";" + format_vec(e.other());
}

template <int D>
inline Edge<D> parse_edge(const std::string& line) {
  auto sep = line.find(';');
  if (sep == std::string::npos)
    throw std::invalid_argument("bad edge line: " + line);
  return edge_between(parse_vec<D>(line.substr(0, sep)),
                      parse_vec<D>(line.substr(sep + 1)));
}

}  // namespace spanperc
