#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spanperc/boxperc.hpp"
#include "spanperc/cell.hpp"
#include "spanperc/connect.hpp"
#include "spanperc/forest.hpp"
#include "spanperc/lambda.hpp"
#include "spanperc/oracles.hpp"
#include "spanperc/resistance.hpp"
#include "spanperc/rng.hpp"
#include "spanperc/seqreveal.hpp"
#include "spanperc/stats.hpp"
#include "spanperc/window.hpp"

namespace spanperc {

inline std::uint64_t trial_stream(std::uint64_t seed, std::uint64_t a,
                                  std::uint64_t b = 0, std::uint64_t c = 0) {
  return derive(seed, StreamTag::kTrial, mix(mix(a, b), c));
}

// ---------------------------------------------------------------------------
// Domination coupling: reveal the one-edge-per-cell set H through the exact
// sequential engine. A single uniform u per step drives all three indicators:
// the edge is in the forest iff u < p, survives eps-thinning iff u < eps*p,
// and is open on the percolation side iff u < eps/(2d). Since p >= 1/(2d),
// the percolation sample is contained in the thinned forest sample by
// construction; the code still verifies rather than assumes it.
// ---------------------------------------------------------------------------

struct DominationTrialRow {
  int trial = 0;
  int h_size = 0;
  int forest_count = 0;   // |F ∩ H|
  int thinned_count = 0;  // |F_eps ∩ H|
  int phi_count = 0;
  bool contained = false;
  double min_p = 1.0;
};

struct DominationReport {
  int trials = 0;
  int h_size = 0;
  int full_cells = 0;
  bool all_contained = false;
  bool min_p_at_least_inv2d = false;
  std::string min_p_exact;
  double min_p = 1.0;
  std::int64_t phi_total = 0;
  double phi_marginal = 0.0;
  Interval phi_band;
  bool phi_in_band = false;
  std::vector<DominationTrialRow> rows;
};

template <int D>
DominationReport run_domination_coupling(const Window<D>& window, int k,
                                         double eps, int trials,
                                         std::uint64_t seed) {
  if (trials <= 0)
    throw std::invalid_argument("domination: trials must be positive");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("domination: eps out of range");
  int full_cells = 0;
  for (const auto& z : cell_centers_meeting(window, k)) {
    bool full = true;
    for (const auto& e : cell_edges(z, k))
      if (!window.contains(e)) {
        full = false;
        break;
      }
    full_cells += full ? 1 : 0;
  }
  if (full_cells < 4)
    throw std::invalid_argument(
        "domination: window must fully contain at least 4 cells");

  auto net = build_window_network(window, /*wired=*/true);
  const RevealEngine base(net.net, net.boundary_vertex());

  const Rational eps_rat(eps);  // dyadic doubles convert exactly
  const Rational inv2d(1, 2 * D);
  const Rational phi_level = eps_rat * inv2d;

  DominationReport report;
  report.trials = trials;
  report.full_cells = full_cells;
  Rational global_min(1);
  bool any_step = false;

  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = trial_stream(seed, static_cast<std::uint64_t>(t));
    auto sample = sample_box_percolation(window, k, eps, ts);
    std::vector<Edge<D>> h;
    h.reserve(sample.cells.size());
    for (const auto& c : sample.cells) h.push_back(c.chosen);
    auto order = order_forest_edges(h);

    Rng urng(derive(ts, StreamTag::kInstance));
    RevealEngine engine = base;
    DominationTrialRow row;
    row.trial = t;
    row.h_size = static_cast<int>(order.size());
    Rational trial_min(1);
    bool contained = true;
    for (const auto& e : order) {
      auto pr = net.endpoints(e);
      Rational p = engine.edge_probability(pr);
      trial_min = std::min(trial_min, p);
      Rational u;
      mpq_set_d(u.get_mpq_t(), urng.uniform01());
      bool in_forest = u < p;
      bool in_thinned = u < eps_rat * p;
      bool in_phi = u < phi_level;
      if (in_forest)
        engine.contract(pr);
      else
        engine.remove(pr);
      row.forest_count += in_forest ? 1 : 0;
      row.thinned_count += in_thinned ? 1 : 0;
      row.phi_count += in_phi ? 1 : 0;
      if (in_phi && !in_thinned) contained = false;
    }
    row.contained = contained;
    row.min_p = mpq_get_d(trial_min.get_mpq_t());
    if (!order.empty()) {
      any_step = true;
      global_min = std::min(global_min, trial_min);
    }
    if (report.h_size == 0) report.h_size = row.h_size;
    report.phi_total += row.phi_count;
    report.rows.push_back(row);
  }

  report.all_contained = true;
  for (const auto& r : report.rows)
    report.all_contained = report.all_contained && r.contained;
  report.min_p = mpq_get_d(global_min.get_mpq_t());
  report.min_p_exact = global_min.get_str();
  report.min_p_at_least_inv2d = any_step && global_min >= inv2d;
  report.phi_marginal = mpq_get_d(phi_level.get_mpq_t());
  std::int64_t total_steps = 0;
  for (const auto& r : report.rows) total_steps += r.h_size;
  report.phi_band = binomial_band(total_steps, report.phi_marginal);
  report.phi_in_band =
      report.phi_band.contains(static_cast<double>(report.phi_total));
  return report;
}

// ---------------------------------------------------------------------------
// Connection scaling: empirical probability that every vertex of B_n lies in
// one component of (Lambda ∪ percolation) ∩ B_2n.
// ---------------------------------------------------------------------------

struct ConnectScalingRow {
  int n = 0;
  int trials = 0;
  int successes = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct ConnectScalingReport {
  std::vector<ConnectScalingRow> rows;
};

template <int D>
ConnectScalingReport run_connection_scaling(const LambdaSpec<D>& spec, int k,
                                            double eps,
                                            const std::vector<int>& n_list,
                                            int trials, std::uint64_t seed) {
  if (trials <= 0)
    throw std::invalid_argument("connect-scaling: trials must be positive");
  ConnectScalingReport report;
  for (int n : n_list) {
    if (n < 0)
      throw std::invalid_argument("connect-scaling: negative radius");
    auto window = Window<D>::box(2 * n);
    auto lam = generate_lambda(spec, window, seed);
    validate_lambda(lam, window);
    ConnectScalingRow row;
    row.n = n;
    row.trials = trials;
    if (n == 0) {
      row.successes = trials;  // a single vertex is vacuously connected
    } else {
      MergeTracker<D> tracker(window, lam);
      auto inner = Window<D>::box(n);
      for (int t = 0; t < trials; ++t) {
        auto sample = sample_box_percolation(
            window, k, eps,
            trial_stream(seed, static_cast<std::uint64_t>(n),
                         static_cast<std::uint64_t>(t)));
        auto overlay = tracker.overlay(sample.open_edges());
        row.successes += overlay.vertices_connected(inner) ? 1 : 0;
      }
    }
    row.p_hat = static_cast<double>(row.successes) / trials;
    row.ci = wilson_interval(row.successes, trials);
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Annulus sprinkling. H = components of Lambda within B_{m+s} crossing from
// B_m to the frame (s = sqrt(n)). Layer l opens percolation edges inside the
// annulus (m + floor(l*s/4d) + 2k, m + floor((l+1)*s/4d)]; K counts the
// groups of H components after the cumulative layers. The final event uses
// the full buffered band (m+2k, m+s].
// ---------------------------------------------------------------------------

inline bool sprinkle_event_holds(int k_next, int k_prev, int n) {
  if (k_next <= 1) return true;
  auto fourth = [](int x) {
    unsigned __int128 v = static_cast<unsigned __int128>(x);
    return v * v * v * v;
  };
  return fourth(k_next) * static_cast<unsigned __int128>(n) <= fourth(k_prev);
}

struct SprinklingLayer {
  int index = 0;
  int lo = 0;  // annulus is (lo, hi]
  int hi = 0;
  bool empty = true;
  int violations = 0;
};

struct SprinklingTrialRow {
  int trial = 0;
  std::vector<int> k_values;  // K(H_0) .. K(H_{4d})
  std::vector<bool> events;
  bool final_connected = false;
};

struct SprinklingReport {
  int m = 0;
  int n = 0;
  int sqrt_n = 0;
  int trials = 0;
  int h_components = 0;
  int dropped_components = 0;
  std::vector<SprinklingLayer> layers;
  int final_successes = 0;
  std::vector<SprinklingTrialRow> rows;
};

namespace detail {

inline int integer_sqrt_exact(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
  int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  if (s * s != n)
    throw std::invalid_argument(std::string(who) +
                                ": n must be a perfect square");
  return s;
}

template <int D>
std::vector<Edge<D>> annulus_open_edges(const BoxPercolationSample<D>& sample,
                                        int lo, int hi) {
  if (lo >= hi) return {};
  return restrict_open(sample, Annulus<D>(lo, hi));
}

}  // namespace detail

template <int D>
SprinklingReport run_sprinkling(const LambdaSpec<D>& spec, int k, double eps,
                                int m, int n, int trials,
                                std::uint64_t seed) {
  int s = detail::integer_sqrt_exact(n, "sprinkling");
  if (!(n <= m && m + s <= 8 * D * n))
    throw std::invalid_argument(
        "sprinkling: need n <= m and m + sqrt(n) <= 8dn");
  if (trials <= 0)
    throw std::invalid_argument("sprinkling: trials must be positive");

  auto window = Window<D>::box(m + s);
  auto lam = generate_lambda(spec, window, seed);
  validate_lambda(lam, window);
  auto labeling = label_components(lam, window);
  std::vector<bool> crossing(static_cast<std::size_t>(labeling.component_count));
  int kept = 0;
  for (int id = 0; id < labeling.component_count; ++id) {
    crossing[static_cast<std::size_t>(id)] =
        labeling.min_norm[id] <= m && labeling.max_norm[id] == m + s;
    kept += crossing[static_cast<std::size_t>(id)] ? 1 : 0;
  }
  std::vector<Edge<D>> h;
  for (const auto& e : lam) {
    int id = labeling.label[static_cast<std::size_t>(window.index(e.base))];
    if (id >= 0 && crossing[static_cast<std::size_t>(id)]) h.push_back(e);
  }

  SprinklingReport report;
  report.m = m;
  report.n = n;
  report.sqrt_n = s;
  report.trials = trials;
  report.h_components = kept;
  report.dropped_components = labeling.component_count - kept;

  const int layer_count = 4 * D;
  for (int l = 0; l < layer_count; ++l) {
    SprinklingLayer layer;
    layer.index = l;
    layer.lo = m + (l * s) / layer_count + 2 * k;
    layer.hi = m + ((l + 1) * s) / layer_count;
    layer.empty = layer.lo >= layer.hi;
    report.layers.push_back(layer);
  }

  MergeTracker<D> tracker(window, h);
  for (int t = 0; t < trials; ++t) {
    auto sample = sample_box_percolation(
        window, k, eps, trial_stream(seed, static_cast<std::uint64_t>(t)));
    SprinklingTrialRow row;
    row.trial = t;
    row.k_values.push_back(kept);
    std::vector<Edge<D>> cumulative;
    for (int l = 0; l < layer_count; ++l) {
      auto layer_edges = detail::annulus_open_edges(
          sample, report.layers[static_cast<std::size_t>(l)].lo,
          report.layers[static_cast<std::size_t>(l)].hi);
      cumulative.insert(cumulative.end(), layer_edges.begin(),
                        layer_edges.end());
      auto overlay = tracker.overlay(cumulative);
      row.k_values.push_back(overlay.marked_group_count());
      bool ok = sprinkle_event_holds(
          row.k_values[static_cast<std::size_t>(l + 1)],
          row.k_values[static_cast<std::size_t>(l)], n);
      row.events.push_back(ok);
      if (!ok) ++report.layers[static_cast<std::size_t>(l)].violations;
    }
    auto band = detail::annulus_open_edges(sample, m + 2 * k, m + s);
    auto final_overlay = tracker.overlay(band);
    row.final_connected = final_overlay.marked_group_count() <= 1;
    report.final_successes += row.final_connected ? 1 : 0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Special component: same machinery on the window B_{m+2s}, with every
// component of Lambda that avoids B_m contracted into one vertex and the
// layer annuli shifted outward by s. The reported event compares
// U_{0,m}(X ∪ band) against max{U_{m,m+2s}(X), 1} over the full band.
// ---------------------------------------------------------------------------

struct SpecialComponentReport {
  int m = 0;
  int n = 0;
  int sqrt_n = 0;
  int trials = 0;
  int attempts = 1;        // Lambda resamples until U_{m,m+s} >= 1
  bool vacuous = false;    // U_{m,m+s} = 0: no shell-confined component
  int u_m_s = 0;           // U_{m, m+s}(X)
  int u_m_2s = 0;          // U_{m, m+2s}(X)
  int special_components = 0;
  std::vector<SprinklingLayer> layers;  // shifted annuli
  int final_successes = 0;
  std::vector<SprinklingTrialRow> rows;  // k' values, events, final U event
};

template <int D>
SpecialComponentReport run_special_component(const LambdaSpec<D>& spec, int k,
                                             double eps, int m, int n,
                                             int trials, std::uint64_t seed) {
  int s = detail::integer_sqrt_exact(n, "special-component");
  if (!(n <= m && m + 2 * s <= 8 * D * n))
    throw std::invalid_argument(
        "special-component: need n <= m and m + 2*sqrt(n) <= 8dn");
  if (trials <= 0)
    throw std::invalid_argument("special-component: trials must be positive");

  auto window = Window<D>::box(m + 2 * s);
  std::vector<Edge<D>> lam;
  ComponentLabeling<D> labeling;
  int u_m_s = 0;
  int attempts = 0;
  const int max_attempts =
      spec.kind == LambdaSpec<D>::Kind::kIndependentWusf ? 32 : 1;
  for (attempts = 1; attempts <= max_attempts; ++attempts) {
    lam = generate_lambda(spec, window, seed,
                          static_cast<std::uint64_t>(attempts - 1));
    validate_lambda(lam, window);
    labeling = label_components(lam, window);
    u_m_s = count_U(labeling, m, m + s);
    if (u_m_s >= 1) break;
  }
  attempts = std::min(attempts, max_attempts);

  SpecialComponentReport report;
  report.m = m;
  report.n = n;
  report.sqrt_n = s;
  report.trials = trials;
  report.attempts = attempts;
  report.u_m_s = u_m_s;
  report.vacuous = u_m_s == 0;
  report.u_m_2s = count_U(labeling, m, m + 2 * s);

  // Components avoiding B_m get glued into the special vertex.
  std::vector<std::pair<Vec<D>, Vec<D>>> glue;
  {
    std::vector<Vec<D>> reps;
    std::vector<bool> seen(
        static_cast<std::size_t>(labeling.component_count), false);
    for (std::int64_t i = 0; i < window.vertex_count(); ++i) {
      int id = labeling.label[static_cast<std::size_t>(i)];
      if (id < 0 || labeling.min_norm[id] <= m) continue;
      if (!seen[static_cast<std::size_t>(id)]) {
        seen[static_cast<std::size_t>(id)] = true;
        reps.push_back(window.vertex(i));
      }
    }
    report.special_components = static_cast<int>(reps.size());
    for (std::size_t i = 1; i < reps.size(); ++i)
      glue.emplace_back(reps[0], reps[i]);
  }

  const int layer_count = 4 * D;
  for (int l = 0; l < layer_count; ++l) {
    SprinklingLayer layer;
    layer.index = l;
    layer.lo = m + s + (l * s) / layer_count + 2 * k;
    layer.hi = m + s + ((l + 1) * s) / layer_count;
    layer.empty = layer.lo >= layer.hi;
    report.layers.push_back(layer);
  }

  MergeTracker<D> tracker(window, lam);
  int k0 = tracker.overlay({}, glue).marked_group_count();
  for (int t = 0; t < trials; ++t) {
    auto sample = sample_box_percolation(
        window, k, eps, trial_stream(seed, static_cast<std::uint64_t>(t)));
    SprinklingTrialRow row;
    row.trial = t;
    row.k_values.push_back(k0);
    std::vector<Edge<D>> cumulative;
    for (int l = 0; l < layer_count; ++l) {
      auto layer_edges = detail::annulus_open_edges(
          sample, report.layers[static_cast<std::size_t>(l)].lo,
          report.layers[static_cast<std::size_t>(l)].hi);
      cumulative.insert(cumulative.end(), layer_edges.begin(),
                        layer_edges.end());
      auto overlay = tracker.overlay(cumulative, glue);
      row.k_values.push_back(overlay.marked_group_count());
      bool ok = sprinkle_event_holds(
          row.k_values[static_cast<std::size_t>(l + 1)],
          row.k_values[static_cast<std::size_t>(l)], n);
      row.events.push_back(ok);
      if (!ok) ++report.layers[static_cast<std::size_t>(l)].violations;
    }
    auto band = detail::annulus_open_edges(sample, m + 2 * k, m + 2 * s);
    auto final_overlay = tracker.overlay(band);  // no glue: X itself
    int u0m = final_overlay.count_u(0, m);
    row.final_connected = u0m <= std::max(report.u_m_2s, 1);
    report.final_successes += row.final_connected ? 1 : 0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Renormalized field: X_s = 1 iff the block center ns connects to each of
// its 2d neighboring block centers inside the local box of radius 2n around
// ns. Site locality is honored by restricting both Lambda and the shared
// percolation sample to each site's own box.
// ---------------------------------------------------------------------------

template <int D>
struct RenormSiteStat {
  Vec<D> site;
  int successes = 0;
};

struct RenormPairStat {
  int distance = 0;
  int pairs = 0;
  double max_abs_corr = 0.0;
};

template <int D>
struct RenormFieldReport {
  int n = 0;
  int coarse_radius = 0;
  int trials = 0;
  double p_hat = 0.0;  // min site marginal
  Interval p_ci;
  std::vector<RenormSiteStat<D>> sites;
  std::vector<RenormPairStat> by_distance;  // pairs anchored at the center
  std::vector<std::vector<std::uint8_t>> field;  // [trial][site]
};

template <int D>
RenormFieldReport<D> run_renormalized_field(const LambdaSpec<D>& spec, int k,
                                            double eps, int n,
                                            int coarse_radius, int trials,
                                            std::uint64_t seed) {
  if (n <= 2 * k)
    throw std::invalid_argument("renorm-field: requires n > 2k");
  if (coarse_radius < 0)
    throw std::invalid_argument("renorm-field: negative coarse radius");
  if (trials <= 0)
    throw std::invalid_argument("renorm-field: trials must be positive");

  auto coarse = Window<D>::box(coarse_radius);
  auto full = Window<D>::box(coarse_radius * n + 2 * n);
  auto lam_full = generate_lambda(spec, full, seed);
  validate_lambda(lam_full, full);

  const std::size_t site_count = static_cast<std::size_t>(coarse.vertex_count());
  std::vector<Window<D>> site_window;
  std::vector<Vec<D>> site_center;
  std::vector<MergeTracker<D>> site_tracker;
  site_window.reserve(site_count);
  site_tracker.reserve(site_count);
  for (std::size_t si = 0; si < site_count; ++si) {
    Vec<D> s = coarse.vertex(static_cast<std::int64_t>(si));
    Vec<D> ns = scale(s, n);
    Window<D> w{add(ns, scale(ones<D>(), -2 * n)),
                add(ns, scale(ones<D>(), 2 * n))};
    std::vector<Edge<D>> local;
    for (const auto& e : lam_full)
      if (w.contains(e)) local.push_back(e);
    site_center.push_back(ns);
    site_window.push_back(w);
    site_tracker.emplace_back(w, local);
  }

  // Cells are enumerated identically for every trial, so candidate cell
  // indices per site can be cached once from the geometry.
  auto centers = cell_centers_meeting(full, k);
  std::vector<std::vector<std::size_t>> site_cells(site_count);
  for (std::size_t ci = 0; ci < centers.size(); ++ci)
    for (std::size_t si = 0; si < site_count; ++si) {
      bool meets = true;
      for (int i = 0; i < D; ++i)
        if (centers[ci][i] + k < site_window[si].lo[i] ||
            centers[ci][i] - k > site_window[si].hi[i]) {
          meets = false;
          break;
        }
      if (meets) site_cells[si].push_back(ci);
    }

  RenormFieldReport<D> report;
  report.n = n;
  report.coarse_radius = coarse_radius;
  report.trials = trials;
  for (std::size_t si = 0; si < site_count; ++si)
    report.sites.push_back({coarse.vertex(static_cast<std::int64_t>(si)), 0});

  for (int t = 0; t < trials; ++t) {
    auto sample = sample_box_percolation(
        full, k, eps, trial_stream(seed, static_cast<std::uint64_t>(t)));
    std::vector<std::uint8_t> bits(site_count, 0);
    for (std::size_t si = 0; si < site_count; ++si) {
      std::vector<Edge<D>> extra;
      for (std::size_t ci : site_cells[si]) {
        const auto& cell = sample.cells[ci];
        if (cell.open && site_window[si].contains(cell.chosen))
          extra.push_back(cell.chosen);
      }
      auto overlay = site_tracker[si].overlay(extra);
      bool all = true;
      for (int axis = 0; axis < D && all; ++axis)
        for (int sign = -1; sign <= 1 && all; sign += 2) {
          Vec<D> y = add(site_center[si], scale(unit<D>(axis), sign * n));
          all = overlay.same_component(site_center[si], y);
        }
      bits[si] = all ? 1 : 0;
      report.sites[si].successes += all ? 1 : 0;
    }
    report.field.push_back(std::move(bits));
  }

  std::size_t argmin = 0;
  for (std::size_t si = 1; si < site_count; ++si)
    if (report.sites[si].successes < report.sites[argmin].successes)
      argmin = si;
  report.p_hat =
      static_cast<double>(report.sites[argmin].successes) / trials;
  report.p_ci = wilson_interval(report.sites[argmin].successes, trials);

  // Correlations against the center site, grouped by coarse distance.
  std::size_t center_index =
      static_cast<std::size_t>(coarse.index(zero<D>()));
  std::vector<double> xs(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t)
    xs[static_cast<std::size_t>(t)] =
        report.field[static_cast<std::size_t>(t)][center_index];
  std::vector<RenormPairStat> by_dist(
      static_cast<std::size_t>(coarse_radius) + 1);
  for (std::size_t si = 0; si < site_count; ++si) {
    if (si == center_index) continue;
    int dist = cheb_norm(report.sites[si].site);
    std::vector<double> ys(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t)
      ys[static_cast<std::size_t>(t)] =
          report.field[static_cast<std::size_t>(t)][si];
    double corr = pearson_correlation(xs, ys);
    auto& slot = by_dist[static_cast<std::size_t>(dist)];
    slot.distance = dist;
    ++slot.pairs;
    slot.max_abs_corr = std::max(slot.max_abs_corr, std::abs(corr));
  }
  for (const auto& slot : by_dist)
    if (slot.pairs > 0) report.by_distance.push_back(slot);
  return report;
}

// ---------------------------------------------------------------------------
// Transience probe (d >= 3): effective resistance from the origin to the
// frame of B_n for (a) one wired-forest sample, (b) the union of two
// independent samples, (c) one sample plus box percolation. Regime (c)
// shares (a)'s forest, so R_c <= R_a edge-monotonically.
// ---------------------------------------------------------------------------

struct TransienceTrialRow {
  int n = 0;
  int trial = 0;
  double r_single = 0.0;
  double r_union = 0.0;
  double r_phi = 0.0;
  std::int64_t iterations = 0;  // total CG iterations across the three solves
};

struct TransienceRegimeStat {
  int n = 0;
  double median_single = 0.0;
  double median_union = 0.0;
  double median_phi = 0.0;
  Interval ci_single, ci_union, ci_phi;
};

struct TransienceIncrement {
  int n_from = 0;
  int n_to = 0;
  double inc_single = 0.0;
  double inc_union = 0.0;
  double inc_phi = 0.0;
  Interval ci_single, ci_union, ci_phi;  // bootstrap on the median difference
};

struct TransienceReport {
  int trials = 0;
  bool phi_coupling_ok = true;  // r_phi <= r_single + slack, every trial
  std::vector<TransienceTrialRow> rows;
  std::vector<TransienceRegimeStat> stats;
  std::vector<TransienceIncrement> increments;
};

template <int D>
TransienceReport run_transience_probe(int k, double eps,
                                      const std::vector<int>& n_list,
                                      int trials, std::uint64_t seed) {
  static_assert(D >= 3, "transience probe needs a transient lattice");
  if (trials <= 0)
    throw std::invalid_argument("transience: trials must be positive");
  constexpr double kCouplingSlack = 1e-5;
  // Forest subgraphs are cycle-free and condition badly, so the default
  // iteration budget (tuned for bulk lattices) is far too tight here.
  constexpr std::int64_t kSolverCap = 500000;

  TransienceReport report;
  report.trials = trials;
  std::vector<std::vector<double>> singles, unions, phis;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    int n = n_list[ni];
    if (n < 1) throw std::invalid_argument("transience: radius must be >= 1");
    auto window = Window<D>::box(n);
    std::vector<double> rs, ru, rp;
    for (int t = 0; t < trials; ++t) {
      auto f1 = sample_wusf_window(
          window, trial_stream(seed, static_cast<std::uint64_t>(n),
                               static_cast<std::uint64_t>(t), 1));
      auto f2 = sample_wusf_window(
          window, trial_stream(seed, static_cast<std::uint64_t>(n),
                               static_cast<std::uint64_t>(t), 2));
      auto phi = sample_box_percolation(
          window, k, eps,
          trial_stream(seed, static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(t), 3));
      std::vector<Edge<D>> union_ff, union_fp;
      std::set_union(f1.edges.begin(), f1.edges.end(), f2.edges.begin(),
                     f2.edges.end(), std::back_inserter(union_ff));
      auto open = phi.open_edges();
      std::set_union(f1.edges.begin(), f1.edges.end(), open.begin(),
                     open.end(), std::back_inserter(union_fp));

      auto ra = reff_to_boundary<D>(f1.edges, zero<D>(), n, 1e-8, kSolverCap);
      auto rb = reff_to_boundary<D>(union_ff, zero<D>(), n, 1e-8, kSolverCap);
      auto rc = reff_to_boundary<D>(union_fp, zero<D>(), n, 1e-8, kSolverCap);
      if (!ra.connected || !rb.connected || !rc.connected)
        throw std::logic_error(
            "transience: origin cut from the frame, which a wired-forest "
            "restriction cannot produce");
      TransienceTrialRow row;
      row.n = n;
      row.trial = t;
      row.r_single = ra.value;
      row.r_union = rb.value;
      row.r_phi = rc.value;
      row.iterations = ra.iterations + rb.iterations + rc.iterations;
      report.rows.push_back(row);
      rs.push_back(ra.value);
      ru.push_back(rb.value);
      rp.push_back(rc.value);
      if (rc.value > ra.value + kCouplingSlack) report.phi_coupling_ok = false;
    }
    TransienceRegimeStat stat;
    stat.n = n;
    stat.median_single = median(rs);
    stat.median_union = median(ru);
    stat.median_phi = median(rp);
    Rng boot(derive(seed, StreamTag::kBootstrap,
                    static_cast<std::uint64_t>(n)));
    stat.ci_single = bootstrap_median_ci(rs, boot);
    stat.ci_union = bootstrap_median_ci(ru, boot);
    stat.ci_phi = bootstrap_median_ci(rp, boot);
    report.stats.push_back(stat);
    singles.push_back(std::move(rs));
    unions.push_back(std::move(ru));
    phis.push_back(std::move(rp));
  }

  for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
    for (std::size_t j = i + 1; j < n_list.size(); ++j) {
      if (n_list[j] != 2 * n_list[i]) continue;
      TransienceIncrement inc;
      inc.n_from = n_list[i];
      inc.n_to = n_list[j];
      inc.inc_single =
          report.stats[j].median_single - report.stats[i].median_single;
      inc.inc_union =
          report.stats[j].median_union - report.stats[i].median_union;
      inc.inc_phi = report.stats[j].median_phi - report.stats[i].median_phi;
      Rng boot(derive(seed, StreamTag::kBootstrap,
                      mix(static_cast<std::uint64_t>(n_list[i]),
                          static_cast<std::uint64_t>(n_list[j]))));
      inc.ci_single = bootstrap_median_diff_ci(singles[j], singles[i], boot);
      inc.ci_union = bootstrap_median_diff_ci(unions[j], unions[i], boot);
      inc.ci_phi = bootstrap_median_diff_ci(phis[j], phis[i], boot);
      report.increments.push_back(inc);
    }
  return report;
}

}  // namespace spanperc
