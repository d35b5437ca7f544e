#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanperc/forest.hpp"
#include "spanperc/io.hpp"
#include "spanperc/rng.hpp"
#include "spanperc/vec.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

// The conditioned environment: an edge set that must let every window vertex
// reach the window frame. Generators: the full lattice, all lines along one
// axis, an independent wired-forest sample, or a file in edge-list format.
template <int D>
struct LambdaSpec {
  enum class Kind { kFullLattice, kAxisLines, kIndependentWusf, kFile };
  Kind kind = Kind::kAxisLines;
  int axis = 0;       // kAxisLines
  int pad = -1;       // kIndependentWusf; -1 = sampler default
  std::string path;   // kFile

  std::string describe() const {
    switch (kind) {
      case Kind::kFullLattice: return "full";
      case Kind::kAxisLines: return "axis-lines:" + std::to_string(axis);
      case Kind::kIndependentWusf:
        return pad < 0 ? std::string("wusf") : "wusf:" + std::to_string(pad);
      case Kind::kFile: return "file:" + path;
    }
    return "?";
  }
};

// Accepts "full", "axis-lines[:axis]", "wusf[:pad]", "file:<path>".
template <int D>
LambdaSpec<D> parse_lambda_spec(const std::string& text) {
  LambdaSpec<D> spec;
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "full") {
    spec.kind = LambdaSpec<D>::Kind::kFullLattice;
    if (!arg.empty()) throw std::invalid_argument("lambda: full takes no arg");
  } else if (head == "axis-lines") {
    spec.kind = LambdaSpec<D>::Kind::kAxisLines;
    if (!arg.empty()) spec.axis = std::stoi(arg);
    if (spec.axis < 0 || spec.axis >= D)
      throw std::invalid_argument("lambda: axis out of range");
  } else if (head == "wusf") {
    spec.kind = LambdaSpec<D>::Kind::kIndependentWusf;
    if (!arg.empty()) spec.pad = std::stoi(arg);
  } else if (head == "file") {
    spec.kind = LambdaSpec<D>::Kind::kFile;
    if (arg.empty()) throw std::invalid_argument("lambda: file needs a path");
    spec.path = arg;
  } else {
    throw std::invalid_argument("lambda: unknown generator '" + head + "'");
  }
  return spec;
}

// Every window vertex must reach the window frame inside the edge set
// (frame vertices trivially do). Throws naming the first stranded vertex.
template <int D>
void validate_lambda(const std::vector<Edge<D>>& edges,
                     const Window<D>& window) {
  const std::int64_t v = window.vertex_count();
  std::vector<std::int32_t> head(static_cast<std::size_t>(v), -1);
  struct Arc {
    std::int32_t to, next;
  };
  std::vector<Arc> arcs;
  arcs.reserve(edges.size() * 2);
  auto add = [&](std::int64_t a, std::int64_t b) {
    arcs.push_back({static_cast<std::int32_t>(b),
                    head[static_cast<std::size_t>(a)]});
    head[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(arcs.size()) - 1;
  };
  for (const auto& e : edges) {
    if (!window.contains(e))
      throw std::invalid_argument("lambda: edge outside window: " +
                                  format_edge(e));
    std::int64_t a = window.index(e.base), b = window.index(e.other());
    add(a, b);
    add(b, a);
  }
  std::vector<bool> reached(static_cast<std::size_t>(v), false);
  std::queue<std::int32_t> frontier;
  for (std::int64_t i = 0; i < v; ++i)
    if (window.on_frame(window.vertex(i))) {
      reached[static_cast<std::size_t>(i)] = true;
      frontier.push(static_cast<std::int32_t>(i));
    }
  while (!frontier.empty()) {
    std::int32_t cur = frontier.front();
    frontier.pop();
    for (std::int32_t a = head[static_cast<std::size_t>(cur)]; a >= 0;
         a = arcs[static_cast<std::size_t>(a)].next) {
      std::int32_t to = arcs[static_cast<std::size_t>(a)].to;
      if (!reached[static_cast<std::size_t>(to)]) {
        reached[static_cast<std::size_t>(to)] = true;
        frontier.push(to);
      }
    }
  }
  for (std::int64_t i = 0; i < v; ++i)
    if (!reached[static_cast<std::size_t>(i)])
      throw std::invalid_argument(
          "lambda: not everywhere percolating, vertex stranded at " +
          format_vec(window.vertex(i)));
}

// `salt` varies resampling attempts without changing the base seed.
template <int D>
std::vector<Edge<D>> generate_lambda(const LambdaSpec<D>& spec,
                                     const Window<D>& window,
                                     std::uint64_t seed,
                                     std::uint64_t salt = 0) {
  std::vector<Edge<D>> out;
  switch (spec.kind) {
    case LambdaSpec<D>::Kind::kFullLattice:
      out = window.all_edges();
      break;
    case LambdaSpec<D>::Kind::kAxisLines:
      for (const auto& e : window.all_edges())
        if (e.axis == spec.axis) out.push_back(e);
      break;
    case LambdaSpec<D>::Kind::kIndependentWusf: {
      auto forest = sample_wusf_window(
          window, derive(seed, StreamTag::kLambda, salt), spec.pad);
      out = forest.edges;
      break;
    }
    case LambdaSpec<D>::Kind::kFile: {
      auto snap = io::read_edge_list_file<D>(spec.path);
      for (const auto& e : snap.edges)
        if (window.contains(e)) out.push_back(e);
      break;
    }
  }
  return out;
}

}  // namespace spanperc
