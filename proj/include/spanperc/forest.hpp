#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spanperc/rng.hpp"
#include "spanperc/unionfind.hpp"
#include "spanperc/vec.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

// Finite lattice network: a window with wired or free boundary plus optional
// contracted (A) and deleted (B) constraint edge sets. Wired mode identifies
// all exterior endpoints with one boundary vertex and keeps one parallel copy
// per leaving lattice edge, so every window vertex keeps degree 2D.
template <int D>
struct Network {
  Window<D> window;
  bool wired = true;
  std::vector<Edge<D>> contracted;  // A: forced into every spanning tree
  std::vector<Edge<D>> deleted;     // B: removed from the network

  bool touches_window(const Edge<D>& e) const {
    return window.contains(e.base) || window.contains(e.other());
  }
  bool leaves_window(const Edge<D>& e) const {
    return window.contains(e.base) != window.contains(e.other());
  }
};

// Spanning forest of a window: canonical sorted edge set plus a component id
// per window vertex. Unlike ComponentLabeling, singleton trees count: every
// vertex carries an id.
template <int D>
struct Forest {
  Window<D> window;
  std::vector<Edge<D>> edges;
  std::vector<int> component;  // per window vertex index
  int component_count = 0;

  int component_of(const Vec<D>& v) const {
    return component[static_cast<std::size_t>(window.index(v))];
  }
  bool has_edge(const Edge<D>& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
  }
};

template <int D>
Forest<D> make_forest(const Window<D>& window, std::vector<Edge<D>> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const std::size_t v = static_cast<std::size_t>(window.vertex_count());
  UnionFind uf(v);
  for (const auto& e : edges) {
    if (!window.contains(e))
      throw std::invalid_argument("make_forest: edge outside window");
    if (!uf.unite(static_cast<std::size_t>(window.index(e.base)),
                  static_cast<std::size_t>(window.index(e.other()))))
      throw std::invalid_argument("make_forest: cycle through " +
                                  format_edge(e));
  }
  Forest<D> out;
  out.window = window;
  out.edges = std::move(edges);
  out.component.assign(v, -1);
  std::vector<int> root_id(v, -1);
  for (std::size_t i = 0; i < v; ++i) {
    std::size_t r = uf.find(i);
    if (root_id[r] < 0) root_id[r] = out.component_count++;
    out.component[i] = root_id[r];
  }
  return out;
}

namespace detail {

// Wilson's algorithm on the implicit window graph (no constraints): states
// are window indices plus one absorbing root; steps are uniform over the 2D
// directions, re-drawn when a free boundary forbids the move.
template <int D>
std::vector<Edge<D>> wilson_plain(const Window<D>& w, bool wired, Rng& rng) {
  const std::int64_t v = w.vertex_count();
  std::vector<char> in_forest(static_cast<std::size_t>(v) + 1, 0);
  std::vector<std::uint8_t> exit_dir(static_cast<std::size_t>(v), 0);
  const std::int64_t root = wired ? v : 0;
  in_forest[static_cast<std::size_t>(root)] = 1;

  auto step = [&](std::int64_t idx, int dir) -> std::int64_t {
    Vec<D> p = w.vertex(idx);
    int axis = dir >> 1;
    p[axis] += (dir & 1) ? -1 : 1;
    if (w.contains(p)) return w.index(p);
    return wired ? v : -1;
  };

  std::vector<Edge<D>> edges;
  edges.reserve(static_cast<std::size_t>(v));
  for (std::int64_t s = 0; s < v; ++s) {
    if (in_forest[static_cast<std::size_t>(s)]) continue;
    std::int64_t cur = s;
    while (!in_forest[static_cast<std::size_t>(cur)]) {
      int dir;
      std::int64_t nxt;
      do {
        dir = static_cast<int>(rng.below(2 * D));
        nxt = step(cur, dir);
      } while (nxt < 0);  // free boundary: unavailable direction, redraw
      exit_dir[static_cast<std::size_t>(cur)] = static_cast<std::uint8_t>(dir);
      cur = nxt;
    }
    cur = s;  // retrace the loop-erased path into the forest
    while (!in_forest[static_cast<std::size_t>(cur)]) {
      in_forest[static_cast<std::size_t>(cur)] = 1;
      int dir = exit_dir[static_cast<std::size_t>(cur)];
      std::int64_t nxt = step(cur, dir);
      if (nxt < v) {
        Vec<D> a = w.vertex(cur);
        Vec<D> b = a;
        b[dir >> 1] += (dir & 1) ? -1 : 1;
        edges.push_back(edge_between(a, b));
      }
      cur = nxt;
    }
  }
  return edges;
}

// All lattice edges with exactly one endpoint in the window.
template <int D>
std::vector<Edge<D>> boundary_edges_of_window(const Window<D>& w) {
  std::vector<Edge<D>> out;
  for (std::int64_t i = 0; i < w.vertex_count(); ++i) {
    Vec<D> p = w.vertex(i);
    if (!w.on_frame(p)) continue;
    for (int axis = 0; axis < D; ++axis)
      for (int sgn : {1, -1}) {
        Vec<D> q = p;
        q[axis] += sgn;
        if (!w.contains(q)) out.push_back(edge_between(p, q));
      }
  }
  return out;
}

// Wilson's algorithm on the quotient graph (contractions A, deletions B):
// classes of the contraction are states, each retaining its full incident
// multi-edge list, so parallel copies keep their weight in the walk.
template <int D>
std::vector<Edge<D>> wilson_quotient(const Network<D>& net, Rng& rng) {
  const Window<D>& w = net.window;
  const std::int64_t v = w.vertex_count();
  const std::int64_t universe = v + 1;  // last slot: wired boundary

  UnionFind uf(static_cast<std::size_t>(universe));
  auto slot = [&](const Vec<D>& p) -> std::int64_t {
    return w.contains(p) ? w.index(p) : v;
  };
  for (const auto& e : net.contracted) {
    if (!net.touches_window(e))
      throw std::invalid_argument("Network: contracted edge outside window");
    if (!net.wired && !w.contains(e))
      throw std::invalid_argument("Network: contracted edge leaves free window");
    if (!uf.unite(static_cast<std::size_t>(slot(e.base)),
                  static_cast<std::size_t>(slot(e.other()))))
      throw std::invalid_argument("Network: contracted set has a cycle at " +
                                  format_edge(e));
  }
  std::vector<Edge<D>> b_sorted = net.deleted;
  for (const auto& e : b_sorted) {
    if (!net.touches_window(e))
      throw std::invalid_argument("Network: deleted edge outside window");
    if (!net.wired && !w.contains(e))
      throw std::invalid_argument("Network: deleted edge leaves free window");
  }
  std::sort(b_sorted.begin(), b_sorted.end());
  for (const auto& e : net.contracted)
    if (std::binary_search(b_sorted.begin(), b_sorted.end(), e))
      throw std::invalid_argument("Network: edge both contracted and deleted: " +
                                  format_edge(e));
  auto is_deleted = [&](const Edge<D>& e) {
    return std::binary_search(b_sorted.begin(), b_sorted.end(), e);
  };

  // Compact class ids over occupied slots.
  std::vector<int> class_of(static_cast<std::size_t>(universe), -1);
  int classes = 0;
  for (std::int64_t i = 0; i < universe; ++i) {
    if (!net.wired && i == v) continue;
    std::size_t r = uf.find(static_cast<std::size_t>(i));
    if (class_of[r] < 0) class_of[r] = classes++;
    class_of[static_cast<std::size_t>(i)] = class_of[r];
  }
  auto cls = [&](const Vec<D>& p) {
    return class_of[static_cast<std::size_t>(slot(p))];
  };

  struct Arc {
    int to;
    Edge<D> via;
    bool in_window;
  };
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(classes));
  auto add_arc = [&](const Edge<D>& e) {
    if (is_deleted(e)) return;
    int a = cls(e.base), b = cls(e.other());
    if (a == b) return;  // contracted or loop: invisible to the walk
    adj[static_cast<std::size_t>(a)].push_back({b, e, w.contains(e)});
    adj[static_cast<std::size_t>(b)].push_back({a, e, w.contains(e)});
  };
  for (const auto& e : w.all_edges()) add_arc(e);
  if (net.wired)
    for (const auto& e : boundary_edges_of_window(w)) add_arc(e);

  const int root = net.wired ? class_of[uf.find(static_cast<std::size_t>(v))]
                             : cls(w.vertex(0));

  // Reachability check: Wilson diverges on disconnected networks.
  {
    std::vector<char> seen(static_cast<std::size_t>(classes), 0);
    std::vector<int> stack{root};
    seen[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (const Arc& arc : adj[static_cast<std::size_t>(c)])
        if (!seen[static_cast<std::size_t>(arc.to)]) {
          seen[static_cast<std::size_t>(arc.to)] = 1;
          stack.push_back(arc.to);
        }
    }
    for (std::int64_t i = 0; i < v; ++i)
      if (!seen[static_cast<std::size_t>(class_of[static_cast<std::size_t>(
              uf.find(static_cast<std::size_t>(i)))])])
        throw std::invalid_argument("Network: vertex separated from root: " +
                                    format_vec(w.vertex(i)));
  }

  std::vector<char> in_forest(static_cast<std::size_t>(classes), 0);
  std::vector<std::int32_t> exit_arc(static_cast<std::size_t>(classes), -1);
  in_forest[static_cast<std::size_t>(root)] = 1;

  std::vector<Edge<D>> edges;
  for (const auto& e : net.contracted)
    if (w.contains(e)) edges.push_back(e);

  for (int s = 0; s < classes; ++s) {
    if (in_forest[static_cast<std::size_t>(s)]) continue;
    int cur = s;
    while (!in_forest[static_cast<std::size_t>(cur)]) {
      const auto& arcs = adj[static_cast<std::size_t>(cur)];
      std::int32_t pick =
          static_cast<std::int32_t>(rng.below(arcs.size()));
      exit_arc[static_cast<std::size_t>(cur)] = pick;
      cur = arcs[static_cast<std::size_t>(pick)].to;
    }
    cur = s;
    while (!in_forest[static_cast<std::size_t>(cur)]) {
      in_forest[static_cast<std::size_t>(cur)] = 1;
      const Arc& arc = adj[static_cast<std::size_t>(
          cur)][static_cast<std::size_t>(exit_arc[static_cast<std::size_t>(cur)])];
      if (arc.in_window) edges.push_back(arc.via);
      cur = arc.to;
    }
  }
  return edges;
}

}  // namespace detail

// Uniform spanning tree of the constrained network, restricted to the window
// (leaving edges dropped, contracted in-window edges kept).
template <int D>
Forest<D> sample_ust(const Network<D>& net, std::uint64_t seed) {
  Rng rng(derive(seed, StreamTag::kForest));
  std::vector<Edge<D>> edges;
  if (net.contracted.empty() && net.deleted.empty())
    edges = detail::wilson_plain(net.window, net.wired, rng);
  else
    edges = detail::wilson_quotient(net, rng);
  return make_forest(net.window, std::move(edges));
}

// Wired-forest approximation on a window: sample the wired UST on a padded
// copy and restrict to the requested window. pad < 0 picks the default of
// half the window's largest radius.
template <int D>
Forest<D> sample_wusf_window(const Window<D>& w, std::uint64_t seed,
                             int pad = -1) {
  if (pad < 0) {
    int largest = 0;
    for (int axis = 0; axis < D; ++axis)
      largest = std::max(largest, w.size(axis));
    pad = std::max(1, (largest + 3) / 4);  // ~ radius / 2
  }
  Network<D> net{w.grown(pad), true, {}, {}};
  Forest<D> big = sample_ust(net, seed);
  std::vector<Edge<D>> inner;
  for (const auto& e : big.edges)
    if (w.contains(e)) inner.push_back(e);
  return make_forest(w, std::move(inner));
}

// Keep each forest edge independently with probability eps.
template <int D>
Forest<D> bernoulli_thin(const Forest<D>& f, double eps, std::uint64_t seed) {
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("bernoulli_thin: probability out of range");
  Rng rng(derive(seed, StreamTag::kThin));
  std::vector<Edge<D>> kept;
  for (const auto& e : f.edges)
    if (rng.bernoulli(eps)) kept.push_back(e);
  return make_forest(f.window, std::move(kept));
}

// Discovery ordering of an acyclic edge set: each returned edge has at least
// one endpoint untouched by earlier edges. Trees are emitted whole, ordered
// by their lexicographically smallest vertex, which also roots the search.
template <int D>
std::vector<Edge<D>> order_forest_edges(const std::vector<Edge<D>>& h) {
  std::map<Vec<D>, std::vector<std::size_t>> adj;
  for (std::size_t i = 0; i < h.size(); ++i) {
    adj[h[i].base].push_back(i);
    adj[h[i].other()].push_back(i);
  }
  std::map<Vec<D>, bool> seen;
  std::vector<char> used(h.size(), 0);
  std::vector<Edge<D>> ordered;
  ordered.reserve(h.size());
  for (const auto& [root, incident] : adj) {
    if (seen.count(root)) continue;
    seen[root] = true;
    std::vector<Vec<D>> queue{root};
    std::size_t head = 0;  // FIFO: breadth-first, deterministic
    while (head < queue.size()) {
      Vec<D> u = queue[head++];
      for (std::size_t ei : adj[u]) {
        if (used[ei]) continue;
        used[ei] = 1;
        Vec<D> other = h[ei].base == u ? h[ei].other() : h[ei].base;
        if (seen.count(other))
          throw std::invalid_argument("order_forest_edges: cycle through " +
                                      format_edge(h[ei]));
        seen[other] = true;
        ordered.push_back(h[ei]);
        queue.push_back(other);
      }
    }
  }
  return ordered;
}

}  // namespace spanperc
