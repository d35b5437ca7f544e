#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanperc/vec.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

struct ReffResult {
  double value = std::numeric_limits<double>::infinity();
  bool connected = false;
  std::int64_t iterations = 0;
  double residual = 0.0;
};

// Effective resistance from `source` to the grounded frame of B_n within the
// given subgraph, via Jacobi-preconditioned conjugate gradients on the
// grounded Laplacian (the source potential under unit injected current).
// Disconnection from the frame is a signal (connected = false), not an error;
// running past the iteration cap is an error carrying the residual.
template <int D>
ReffResult reff_to_boundary(const std::vector<Edge<D>>& edges,
                            const Vec<D>& source, int n, double tol = 1e-8,
                            std::int64_t max_iter = -1) {
  if (n < 0) throw std::invalid_argument("reff_to_boundary: negative radius");
  auto box = Window<D>::box(n);
  if (!box.contains(source))
    throw std::invalid_argument("reff_to_boundary: source outside box");
  for (const auto& e : edges)
    if (!box.contains(e))
      throw std::invalid_argument("reff_to_boundary: edge outside box");
  if (box.on_frame(source)) return {0.0, true, 0, 0.0};

  // Component of the source (restricting the system keeps L positive
  // definite once any frame vertex is reached).
  const std::int64_t v = box.vertex_count();
  std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(v));
  for (const auto& e : edges) {
    auto a = static_cast<std::int32_t>(box.index(e.base));
    auto b = static_cast<std::int32_t>(box.index(e.other()));
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<char> in_comp(static_cast<std::size_t>(v), 0);
  bool grounded = false;
  {
    std::vector<std::int32_t> stack{
        static_cast<std::int32_t>(box.index(source))};
    in_comp[static_cast<std::size_t>(stack[0])] = 1;
    while (!stack.empty()) {
      std::int32_t u = stack.back();
      stack.pop_back();
      if (box.on_frame(box.vertex(u))) {
        grounded = true;
        continue;  // grounded vertices absorb: no need to expand further
      }
      for (std::int32_t t : adj[static_cast<std::size_t>(u)])
        if (!in_comp[static_cast<std::size_t>(t)]) {
          in_comp[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
    }
  }
  if (!grounded) return {};  // infinite resistance signal

  // Unknowns: component vertices off the frame.
  std::vector<std::int32_t> unknown_of(static_cast<std::size_t>(v), -1);
  std::vector<std::int32_t> vertex_of;
  for (std::int64_t i = 0; i < v; ++i)
    if (in_comp[static_cast<std::size_t>(i)] && !box.on_frame(box.vertex(i))) {
      unknown_of[static_cast<std::size_t>(i)] =
          static_cast<std::int32_t>(vertex_of.size());
      vertex_of.push_back(static_cast<std::int32_t>(i));
    }
  const std::size_t m = vertex_of.size();

  std::vector<double> diag(m, 0.0);
  std::vector<std::size_t> rowptr(m + 1, 0);
  std::vector<std::int32_t> col;
  std::vector<double> wgt;
  for (std::size_t i = 0; i < m; ++i) {
    std::map<std::int32_t, double> row;
    for (std::int32_t t : adj[static_cast<std::size_t>(vertex_of[i])]) {
      diag[i] += 1.0;
      std::int32_t j = unknown_of[static_cast<std::size_t>(t)];
      if (j >= 0) row[j] += 1.0;
    }
    for (auto [j, w] : row) {
      col.push_back(j);
      wgt.push_back(w);
    }
    rowptr[i + 1] = col.size();
  }

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = diag[i] * x[i];
      for (std::size_t p = rowptr[i]; p < rowptr[i + 1]; ++p)
        acc -= wgt[p] * x[static_cast<std::size_t>(col[p])];
      y[i] = acc;
    }
  };

  if (max_iter < 0)
    max_iter = 20 * static_cast<std::int64_t>(std::sqrt(double(m))) + 1000;

  const std::size_t src =
      static_cast<std::size_t>(unknown_of[static_cast<std::size_t>(
          box.index(source))]);
  std::vector<double> x(m, 0.0), r(m, 0.0), z(m, 0.0), p(m, 0.0), ap(m, 0.0);
  r[src] = 1.0;  // b = e_source, x0 = 0
  const double bnorm = 1.0;
  double rnorm = 1.0;
  for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < m; ++i) rz += r[i] * z[i];

  std::int64_t it = 0;
  while (rnorm > tol * bnorm) {
    if (it >= max_iter)
      throw std::runtime_error(
          "reff_to_boundary: no convergence after " + std::to_string(it) +
          " iterations, residual " + std::to_string(rnorm));
    apply(p, ap);
    double pap = 0.0;
    for (std::size_t i = 0; i < m; ++i) pap += p[i] * ap[i];
    double alpha = rz / pap;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    double rz_next = 0.0;
    rnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      z[i] = r[i] / diag[i];
      rz_next += r[i] * z[i];
      rnorm += r[i] * r[i];
    }
    rnorm = std::sqrt(rnorm);
    double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
    ++it;
  }
  return {x[src], true, it, rnorm};
}

}  // namespace spanperc
