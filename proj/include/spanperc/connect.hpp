#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spanperc/unionfind.hpp"
#include "spanperc/vec.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

// Connected components of an edge set within a window. Isolated vertices are
// not components: counts and labels cover only vertices incident to an edge
// (label -1 elsewhere). Norms are Chebyshev distances to `center`.
template <int D>
struct ComponentLabeling {
  Window<D> window;
  Vec<D> center{};
  std::vector<int> label;  // per window vertex index; -1 = isolated
  int component_count = 0;
  std::vector<int> min_norm;             // per component
  std::vector<int> max_norm;             // per component
  std::vector<std::int64_t> vertex_count;  // per component
};

template <int D>
ComponentLabeling<D> label_components(const std::vector<Edge<D>>& edges,
                                      const Window<D>& window,
                                      const Vec<D>& center = zero<D>()) {
  const std::size_t v = static_cast<std::size_t>(window.vertex_count());
  UnionFind uf(v);
  for (const auto& e : edges) {
    if (!window.contains(e))
      throw std::invalid_argument("label_components: edge outside window");
    uf.unite(static_cast<std::size_t>(window.index(e.base)),
             static_cast<std::size_t>(window.index(e.other())));
  }
  ComponentLabeling<D> out;
  out.window = window;
  out.center = center;
  out.label.assign(v, -1);
  std::vector<int> root_label(v, -1);
  for (std::size_t i = 0; i < v; ++i) {
    if (uf.set_size(i) < 2) continue;  // isolated vertex
    std::size_t r = uf.find(i);
    if (root_label[r] < 0) {
      root_label[r] = out.component_count++;
      out.min_norm.push_back(INT32_MAX);
      out.max_norm.push_back(0);
      out.vertex_count.push_back(0);
    }
    int id = root_label[r];
    out.label[i] = id;
    int norm = cheb_dist(window.vertex(static_cast<std::int64_t>(i)), center);
    out.min_norm[id] = std::min(out.min_norm[id], norm);
    out.max_norm[id] = std::max(out.max_norm[id], norm);
    ++out.vertex_count[id];
  }
  return out;
}

// U_{j,l}: components whose closest vertex to the center sits at norm in
// [j, l] — i.e. the component meets the radius-l ball but stays outside the
// open radius-j ball.
template <int D>
int count_U(const ComponentLabeling<D>& labeling, int j, int l) {
  if (j > l) throw std::invalid_argument("count_U: j > l");
  int n = 0;
  for (int id = 0; id < labeling.component_count; ++id)
    if (labeling.min_norm[id] >= j && labeling.min_norm[id] <= l) ++n;
  return n;
}

// True iff every vertex of B_n lies in a single component of the edge set,
// which must be contained in B_{2n}. n = 0 is vacuously connected.
template <int D>
bool connection_event(const std::vector<Edge<D>>& edges, int n) {
  if (n < 0) throw std::invalid_argument("connection_event: negative radius");
  auto outer = Window<D>::box(2 * n);
  auto labeling = label_components(edges, outer);
  if (n == 0) return true;
  auto inner = Window<D>::box(n);
  int want = -1;
  for (std::int64_t i = 0; i < inner.vertex_count(); ++i) {
    int lab = labeling.label[outer.index(inner.vertex(i))];
    if (lab < 0) return false;
    if (want < 0) want = lab;
    if (lab != want) return false;
  }
  return true;
}

// Repeated-trial component analysis: the base edge set (typically Lambda) is
// labeled once; each trial overlays its own extra edges and merges base
// classes instead of relabeling the window from scratch. Every vertex owns a
// class (singletons included) so overlay edges can touch anything.
template <int D>
class MergeTracker {
 public:
  MergeTracker(const Window<D>& window, const std::vector<Edge<D>>& base,
               const Vec<D>& center = zero<D>())
      : window_(window), center_(center) {
    const std::size_t v = static_cast<std::size_t>(window.vertex_count());
    UnionFind uf(v);
    for (const auto& e : base) {
      if (!window.contains(e))
        throw std::invalid_argument("MergeTracker: base edge outside window");
      uf.unite(static_cast<std::size_t>(window.index(e.base)),
               static_cast<std::size_t>(window.index(e.other())));
    }
    class_of_.assign(v, -1);
    std::vector<int> root_class(v, -1);
    for (std::size_t i = 0; i < v; ++i) {
      std::size_t r = uf.find(i);
      if (root_class[r] < 0) {
        root_class[r] = class_count_++;
        class_min_norm_.push_back(INT32_MAX);
        class_marked_.push_back(uf.set_size(i) >= 2);
      }
      int id = root_class[r];
      class_of_[i] = id;
      int norm =
          cheb_dist(window.vertex(static_cast<std::int64_t>(i)), center_);
      class_min_norm_[id] = std::min(class_min_norm_[id], norm);
    }
  }

  const Window<D>& window() const { return window_; }
  int class_count() const { return class_count_; }
  int class_at(const Vec<D>& v) const {
    if (!window_.contains(v))
      throw std::invalid_argument("MergeTracker: vertex outside window");
    return class_of_[static_cast<std::size_t>(window_.index(v))];
  }
  // Classes holding at least one base edge (the base components).
  int marked_class_count() const {
    int n = 0;
    for (bool m : class_marked_) n += m ? 1 : 0;
    return n;
  }

  // One trial's worth of extra edges merged on top of the base classes.
  // `glue` pairs are structural identifications (e.g. contracting a family of
  // components into one vertex): they merge classes but do not count as edges.
  class Overlay {
   public:
    Overlay(const MergeTracker& base, const std::vector<Edge<D>>& extra,
            const std::vector<std::pair<Vec<D>, Vec<D>>>& glue = {})
        : base_(&base),
          uf_(static_cast<std::size_t>(base.class_count_)),
          min_norm_(base.class_min_norm_),
          marked_(base.class_marked_),
          touched_(base.class_min_norm_.size(), false) {
      for (const auto& [a, b] : glue)
        merge(static_cast<std::size_t>(base.class_at(a)),
              static_cast<std::size_t>(base.class_at(b)));
      for (const auto& e : extra) {
        std::size_t a = static_cast<std::size_t>(base.class_at(e.base));
        merge(a, static_cast<std::size_t>(base.class_at(e.other())));
        touched_[uf_.find(a)] = true;
      }
    }

    // Components of base ∪ extra (groups holding at least one edge).
    int component_count() {
      int n = 0;
      for (std::size_t c = 0; c < marked_.size(); ++c)
        if (is_root(c) && has_edge(c)) ++n;
      return n;
    }

    // Groups containing at least one base component: K(base ∪ extra)
    // restricted to the base's descendants, monotone under more edges.
    int marked_group_count() {
      int n = 0;
      for (std::size_t c = 0; c < marked_.size(); ++c)
        if (is_root(c) && group_marked(c)) ++n;
      return n;
    }

    int count_u(int j, int l) {
      if (j > l) throw std::invalid_argument("count_u: j > l");
      int n = 0;
      for (std::size_t c = 0; c < marked_.size(); ++c)
        if (is_root(c) && has_edge(c) && min_norm_[c] >= j &&
            min_norm_[c] <= l)
          ++n;
      return n;
    }

    bool same_component(const Vec<D>& a, const Vec<D>& b) {
      return uf_.find(static_cast<std::size_t>(base_->class_at(a))) ==
             uf_.find(static_cast<std::size_t>(base_->class_at(b)));
    }

    // All vertices of `inner` in one group (each of them non-isolated).
    bool vertices_connected(const Window<D>& inner) {
      std::size_t want = SIZE_MAX;
      for (std::int64_t i = 0; i < inner.vertex_count(); ++i) {
        std::size_t c = static_cast<std::size_t>(
            base_->class_at(inner.vertex(i)));
        std::size_t r = uf_.find(c);
        if (!has_edge(r)) return false;
        if (want == SIZE_MAX) want = r;
        if (r != want) return false;
      }
      return true;
    }

   private:
    void merge(std::size_t a, std::size_t b) {
      std::size_t ra = uf_.find(a), rb = uf_.find(b);
      if (ra == rb) return;
      uf_.unite(ra, rb);
      std::size_t r = uf_.find(ra);
      min_norm_[r] = std::min(min_norm_[ra], min_norm_[rb]);
      marked_[r] = marked_[ra] || marked_[rb];
      touched_[r] = touched_[ra] || touched_[rb];
    }

    bool is_root(std::size_t c) { return uf_.find(c) == c; }
    bool group_marked(std::size_t root) { return marked_[root]; }
    bool has_edge(std::size_t c) {
      std::size_t r = uf_.find(c);
      return marked_[r] || touched_[r];
    }

    const MergeTracker* base_;
    UnionFind uf_;
    std::vector<int> min_norm_;   // valid at group roots
    std::vector<bool> marked_;    // valid at group roots
    std::vector<bool> touched_;   // extra edge seen, valid at group roots
  };

  Overlay overlay(const std::vector<Edge<D>>& extra,
                  const std::vector<std::pair<Vec<D>, Vec<D>>>& glue = {})
      const {
    for (const auto& e : extra)
      if (!window_.contains(e))
        throw std::invalid_argument("MergeTracker: extra edge outside window");
    return Overlay(*this, extra, glue);
  }

 private:
  Window<D> window_;
  Vec<D> center_;
  std::vector<int> class_of_;
  int class_count_ = 0;
  std::vector<int> class_min_norm_;
  std::vector<bool> class_marked_;
};

}  // namespace spanperc
