#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spanperc/exactdet.hpp"
#include "spanperc/unionfind.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

// Small multigraph with unit conductances. Parallel edges are tracked by
// multiplicity; they matter after contractions. Everything downstream is
// exact, so the vertex bound refuses instead of approximating.
class DenseNetwork {
 public:
  static constexpr int kDefaultMaxVertices = 4096;

  explicit DenseNetwork(int vertices, int max_vertices = kDefaultMaxVertices)
      : n_(vertices), max_(max_vertices) {
    if (vertices <= 0) throw std::invalid_argument("DenseNetwork: empty");
    if (vertices > max_vertices)
      throw std::invalid_argument("DenseNetwork: exceeds size bound");
    mult_.assign(static_cast<std::size_t>(n_) * n_, 0);
  }

  int vertex_count() const { return n_; }
  int max_vertices() const { return max_; }

  int multiplicity(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return mult_[static_cast<std::size_t>(u) * n_ + v];
  }

  void add_edge(int u, int v, int copies = 1) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("DenseNetwork: self-loop");
    if (copies <= 0) throw std::invalid_argument("DenseNetwork: bad copies");
    mult_[static_cast<std::size_t>(u) * n_ + v] += copies;
    mult_[static_cast<std::size_t>(v) * n_ + u] += copies;
  }

  void remove_edge(int u, int v, int copies = 1) {
    check_vertex(u);
    check_vertex(v);
    if (copies <= 0) throw std::invalid_argument("DenseNetwork: bad copies");
    int& fwd = mult_[static_cast<std::size_t>(u) * n_ + v];
    if (fwd < copies)
      throw std::invalid_argument("DenseNetwork: removing absent edge");
    fwd -= copies;
    mult_[static_cast<std::size_t>(v) * n_ + u] -= copies;
  }

  int degree(int u) const {
    check_vertex(u);
    int d = 0;
    for (int v = 0; v < n_; ++v)
      d += mult_[static_cast<std::size_t>(u) * n_ + v];
    return d;
  }

  // Wired fixtures mark which vertex plays the boundary; purely advisory.
  std::optional<int> wired_vertex;

  bool connected() const {
    return reachable_from(0).second == n_;
  }

  bool same_component(int a, int b) const {
    check_vertex(a);
    check_vertex(b);
    return reachable_from(a).first[b];
  }

  // Relabels the component of `keep` (ascending old index order); returns the
  // induced subnetwork and the new index of each kept vertex (-1 elsewhere).
  std::pair<DenseNetwork, std::vector<int>> component_of(int keep) const {
    auto [in, count] = reachable_from(keep);
    std::vector<int> remap(n_, -1);
    int next = 0;
    for (int v = 0; v < n_; ++v)
      if (in[v]) remap[v] = next++;
    DenseNetwork sub(count, max_);
    for (int u = 0; u < n_; ++u) {
      if (!in[u]) continue;
      for (int v = u + 1; v < n_; ++v) {
        int m = mult_[static_cast<std::size_t>(u) * n_ + v];
        if (in[v] && m > 0) sub.add_edge(remap[u], remap[v], m);
      }
    }
    if (wired_vertex && in[*wired_vertex])
      sub.wired_vertex = remap[*wired_vertex];
    return {std::move(sub), std::move(remap)};
  }

  IntMatrix laplacian() const {
    IntMatrix l(n_);
    for (int u = 0; u < n_; ++u) {
      long deg = 0;
      for (int v = 0; v < n_; ++v) {
        int m = mult_[static_cast<std::size_t>(u) * n_ + v];
        deg += m;
        if (m > 0) l.at(u, v) = -m;
      }
      l.at(u, u) = deg;
    }
    return l;
  }

  // Debug dump: one "u v xm" line per unordered pair with multiplicity m.
  std::string edge_list_dump() const {
    std::ostringstream out;
    out << "vertices " << n_;
    if (wired_vertex) out << " wired " << *wired_vertex;
    out << '\n';
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v) {
        int m = mult_[static_cast<std::size_t>(u) * n_ + v];
        if (m > 0) out << u << ' ' << v << " x" << m << '\n';
      }
    return out.str();
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_)
      throw std::out_of_range("DenseNetwork: vertex out of range");
  }

  std::pair<std::vector<bool>, int> reachable_from(int s) const {
    std::vector<bool> in(n_, false);
    std::vector<int> stack{s};
    in[s] = true;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n_; ++v)
        if (!in[v] && mult_[static_cast<std::size_t>(u) * n_ + v] > 0) {
          in[v] = true;
          ++count;
          stack.push_back(v);
        }
    }
    return {std::move(in), count};
  }

  int n_ = 0;
  int max_ = kDefaultMaxVertices;
  std::vector<int> mult_;
};

// Matrix-tree theorem: any cofactor of the Laplacian. Zero when disconnected.
inline BigInt spanning_tree_count(const DenseNetwork& g) {
  if (g.vertex_count() == 1) return 1;
  return bareiss_det(g.laplacian().minor_without({0}));
}

// R_eff(a,b) with unit conductances; std::nullopt signals infinite
// resistance (a and b in different components).
inline std::optional<Rational> effective_resistance_exact(
    const DenseNetwork& g, int a, int b) {
  if (a == b) throw std::invalid_argument("effective_resistance_exact: a == b");
  if (!g.same_component(a, b)) return std::nullopt;
  auto [sub, remap] = g.component_of(a);
  int sa = remap[a], sb = remap[b];
  BigInt trees = bareiss_det(sub.laplacian().minor_without({sa}));
  BigInt two_trees = bareiss_det(sub.laplacian().minor_without({sa, sb}));
  Rational r(two_trees, trees);
  r.canonicalize();
  return r;
}

// Kirchhoff: Pr(a copy of e is in the uniform spanning tree) = R_eff(e).
inline Rational edge_in_ust_probability(const DenseNetwork& g, int u, int v) {
  if (!g.connected())
    throw std::invalid_argument("edge_in_ust_probability: disconnected");
  if (g.multiplicity(u, v) < 1)
    throw std::invalid_argument("edge_in_ust_probability: edge absent");
  return *effective_resistance_exact(g, u, v);
}

using VertexPair = std::pair<int, int>;

// Pr(e in tree | A in tree, B disjoint from tree) via the spatial Markov
// property: contract A, delete one copy per B entry, measure e there.
// Returns 0 when A already connects e's endpoints (e would close a cycle).
inline Rational conditional_edge_probability(const DenseNetwork& g,
                                             VertexPair e,
                                             const std::vector<VertexPair>& a,
                                             const std::vector<VertexPair>& b) {
  const int n = g.vertex_count();
  UnionFind uf(static_cast<std::size_t>(n));
  for (auto [x, y] : a) {
    if (g.multiplicity(x, y) < 1)
      throw std::invalid_argument("conditional_edge_probability: A edge absent");
    if (!uf.unite(x, y))
      throw std::invalid_argument("conditional_edge_probability: A has a cycle");
  }
  // Contract A: one quotient vertex per union-find class.
  std::vector<int> quot(n, -1);
  int qn = 0;
  for (int v = 0; v < n; ++v) {
    std::size_t r = uf.find(v);
    if (quot[r] < 0) quot[r] = qn++;
  }
  auto q = [&](int v) { return quot[uf.find(v)]; };

  DenseNetwork h(qn, g.max_vertices());
  // A-copies are consumed by the contraction; extra parallel copies between
  // merged classes become loops and vanish with them.
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      int m = g.multiplicity(u, v);
      if (m >= 1 && q(u) != q(v)) h.add_edge(q(u), q(v), m);
    }
  for (auto [x, y] : b) {
    if (g.multiplicity(x, y) < 1)
      throw std::invalid_argument("conditional_edge_probability: B edge absent");
    if (q(x) == q(y)) continue;  // loop after contraction: no effect on trees
    h.remove_edge(q(x), q(y));
  }

  auto [eu, ev] = e;
  if (g.multiplicity(eu, ev) < 1)
    throw std::invalid_argument("conditional_edge_probability: e absent");
  if (q(eu) == q(ev)) return Rational(0);
  if (h.multiplicity(q(eu), q(ev)) < 1)
    throw std::invalid_argument("conditional_edge_probability: e deleted by B");
  if (!h.same_component(q(eu), q(ev)))
    throw std::invalid_argument(
        "conditional_edge_probability: endpoints separated");
  // The spanning tree of g restricted by the conditioning restricts, within
  // the component of e, to a uniform spanning tree of that component.
  auto [sub, remap] = h.component_of(q(eu));
  return edge_in_ust_probability(sub, remap[q(eu)], remap[q(ev)]);
}

// Lattice window -> DenseNetwork. Wired mode appends one boundary vertex and
// keeps one parallel copy per lattice edge leaving the window, so every
// non-frame vertex keeps its full lattice degree.
template <int D>
struct WindowNetwork {
  Window<D> window;
  bool wired = false;
  DenseNetwork net;

  int vertex(const Vec<D>& v) const {
    return static_cast<int>(window.index(v));
  }
  int boundary_vertex() const {
    if (!wired) throw std::logic_error("WindowNetwork: free boundary");
    return static_cast<int>(window.vertex_count());
  }
  VertexPair endpoints(const Edge<D>& e) const {
    bool bin = window.contains(e.base), oin = window.contains(e.other());
    if (bin && oin) return {vertex(e.base), vertex(e.other())};
    if (wired && (bin || oin))
      return {vertex(bin ? e.base : e.other()), boundary_vertex()};
    throw std::invalid_argument("WindowNetwork: edge leaves the window");
  }
  std::vector<VertexPair> endpoint_list(const std::vector<Edge<D>>& es) const {
    std::vector<VertexPair> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(endpoints(e));
    return out;
  }
};

template <int D>
WindowNetwork<D> build_window_network(
    const Window<D>& w, bool wired,
    int max_vertices = DenseNetwork::kDefaultMaxVertices) {
  std::size_t v = w.vertex_count() + (wired ? 1 : 0);
  if (v > static_cast<std::size_t>(max_vertices))
    throw std::invalid_argument("build_window_network: exceeds size bound");
  WindowNetwork<D> out{w, wired, DenseNetwork(static_cast<int>(v), max_vertices)};
  if (wired) out.net.wired_vertex = out.boundary_vertex();
  for (std::int64_t i = 0; i < w.vertex_count(); ++i) {
    Vec<D> u = w.vertex(i);
    for (int axis = 0; axis < D; ++axis) {
      // Up-neighbor covers every in-window edge once.
      Vec<D> up = add(u, unit<D>(axis));
      if (w.contains(up))
        out.net.add_edge(static_cast<int>(i), out.vertex(up));
      else if (wired)
        out.net.add_edge(static_cast<int>(i), out.boundary_vertex());
      if (wired) {
        Vec<D> down = sub(u, unit<D>(axis));
        if (!w.contains(down))
          out.net.add_edge(static_cast<int>(i), out.boundary_vertex());
      }
    }
  }
  return out;
}

}  // namespace spanperc
