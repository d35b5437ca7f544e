#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spanperc/experiments.hpp"
#include "spanperc/io.hpp"
#include "spanperc/lambda.hpp"
#include "spanperc/report.hpp"

namespace spanperc::cli {

// Options shared by every experiment subcommand. Defaults are small desk
// scale; the acceptance-scale configurations are passed explicitly.
struct Opts {
  int d = 2;
  int k = 1;
  double eps = 0.5;
  int trials = 100;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<int> n_list{8, 16};
  int m = 16;
  int window_radius = 4;  // domination
  int coarse_radius = 2;  // renorm-field
  std::string lambda = "axis-lines";
};

namespace detail {

inline std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

inline std::string out_file(const std::string& dir, const std::string& name) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir.empty() ? "." : dir) / name).string();
}

inline Config base_config(const std::string& sub, const Opts& o,
                          bool with_lambda) {
  Config cfg;
  cfg.emplace_back("subcommand", sub);
  cfg.emplace_back("d", std::to_string(o.d));
  cfg.emplace_back("k", std::to_string(o.k));
  cfg.emplace_back("eps", io::format_double_exact(o.eps));
  cfg.emplace_back("trials", std::to_string(o.trials));
  cfg.emplace_back("seed", std::to_string(o.seed));
  if (with_lambda) cfg.emplace_back("lambda", o.lambda);
  return cfg;
}

inline nlohmann::json interval_json(const Interval& iv) {
  return {{"lo", iv.lo}, {"hi", iv.hi}};
}

}  // namespace detail

// --- subcommand executors ---------------------------------------------------

template <int D>
int exec_domination(const Opts& o, const std::string& out_dir) {
  auto report = run_domination_coupling(Window<D>::box(o.window_radius), o.k,
                                        o.eps, o.trials, o.seed);
  Config cfg = detail::base_config("domination", o, false);
  cfg.emplace_back("window_radius", std::to_string(o.window_radius));

  CsvWriter csv(detail::out_file(out_dir, "domination.csv"), cfg,
                {"trial", "h_size", "forest_count", "thinned_count",
                 "phi_count", "contained", "min_p"});
  for (const auto& r : report.rows)
    csv.write_row({std::to_string(r.trial), std::to_string(r.h_size),
                   std::to_string(r.forest_count),
                   std::to_string(r.thinned_count),
                   std::to_string(r.phi_count), fmt_bool(r.contained),
                   fmt_double(r.min_p)});
  csv.close();

  auto j = json_summary_base(cfg);
  j["h_size"] = report.h_size;
  j["full_cells"] = report.full_cells;
  j["all_contained"] = report.all_contained;
  j["min_p_at_least_inv2d"] = report.min_p_at_least_inv2d;
  j["min_p_exact"] = report.min_p_exact;
  j["min_p"] = report.min_p;
  j["phi_total"] = report.phi_total;
  j["phi_marginal"] = report.phi_marginal;
  j["phi_band"] = detail::interval_json(report.phi_band);
  j["phi_in_band"] = report.phi_in_band;
  write_json_file(detail::out_file(out_dir, "domination.json"), j);

  std::printf("domination: trials=%d contained=%s min_p=%s phi_in_band=%s\n",
              report.trials, report.all_contained ? "all" : "NOT ALL",
              fmt_double(report.min_p).c_str(),
              report.phi_in_band ? "yes" : "no");
  return 0;
}

template <int D>
int exec_connect_scaling(const Opts& o, const std::string& out_dir) {
  auto spec = parse_lambda_spec<D>(o.lambda);
  auto report =
      run_connection_scaling(spec, o.k, o.eps, o.n_list, o.trials, o.seed);
  Config cfg = detail::base_config("connect-scaling", o, true);
  cfg.emplace_back("n", detail::join_ints(o.n_list));

  CsvWriter csv(detail::out_file(out_dir, "connect-scaling.csv"), cfg,
                {"n", "trials", "successes", "p_hat", "ci_lo", "ci_hi"});
  for (const auto& r : report.rows)
    csv.write_row({std::to_string(r.n), std::to_string(r.trials),
                   std::to_string(r.successes), fmt_double(r.p_hat),
                   fmt_double(r.ci.lo), fmt_double(r.ci.hi)});
  csv.close();

  auto j = json_summary_base(cfg);
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"n", r.n},
                    {"trials", r.trials},
                    {"successes", r.successes},
                    {"p_hat", r.p_hat},
                    {"ci", detail::interval_json(r.ci)}});
  write_json_file(detail::out_file(out_dir, "connect-scaling.json"), j);

  for (const auto& r : report.rows)
    std::printf("connect-scaling: n=%d p_hat=%s [%s, %s]\n", r.n,
                fmt_double(r.p_hat).c_str(), fmt_double(r.ci.lo).c_str(),
                fmt_double(r.ci.hi).c_str());
  return 0;
}

inline void write_layer_csv(CsvWriter& csv,
                            const std::vector<SprinklingLayer>& layers,
                            int trials) {
  for (const auto& l : layers)
    csv.write_row({std::to_string(l.index), std::to_string(l.lo),
                   std::to_string(l.hi), fmt_bool(l.empty),
                   std::to_string(l.violations), std::to_string(trials)});
}

inline nlohmann::json layers_json(const std::vector<SprinklingLayer>& layers) {
  auto arr = nlohmann::json::array();
  for (const auto& l : layers)
    arr.push_back({{"index", l.index},
                   {"lo", l.lo},
                   {"hi", l.hi},
                   {"empty", l.empty},
                   {"violations", l.violations}});
  return arr;
}

template <int D>
int exec_sprinkling(const Opts& o, const std::string& out_dir) {
  auto spec = parse_lambda_spec<D>(o.lambda);
  int n = o.n_list.empty() ? 0 : o.n_list.front();
  auto report = run_sprinkling(spec, o.k, o.eps, o.m, n, o.trials, o.seed);
  Config cfg = detail::base_config("sprinkling", o, true);
  cfg.emplace_back("m", std::to_string(o.m));
  cfg.emplace_back("n", std::to_string(n));

  CsvWriter csv(detail::out_file(out_dir, "sprinkling.csv"), cfg,
                {"layer", "lo", "hi", "empty", "violations", "trials"});
  write_layer_csv(csv, report.layers, report.trials);
  csv.close();

  auto j = json_summary_base(cfg);
  j["sqrt_n"] = report.sqrt_n;
  j["h_components"] = report.h_components;
  j["dropped_components"] = report.dropped_components;
  j["layers"] = layers_json(report.layers);
  j["final_successes"] = report.final_successes;
  j["final_rate"] =
      static_cast<double>(report.final_successes) / report.trials;
  write_json_file(detail::out_file(out_dir, "sprinkling.json"), j);

  std::printf("sprinkling: m=%d n=%d components=%d final=%d/%d\n", report.m,
              report.n, report.h_components, report.final_successes,
              report.trials);
  return 0;
}

template <int D>
int exec_special_component(const Opts& o, const std::string& out_dir) {
  auto spec = parse_lambda_spec<D>(o.lambda);
  int n = o.n_list.empty() ? 0 : o.n_list.front();
  auto report =
      run_special_component(spec, o.k, o.eps, o.m, n, o.trials, o.seed);
  Config cfg = detail::base_config("special-component", o, true);
  cfg.emplace_back("m", std::to_string(o.m));
  cfg.emplace_back("n", std::to_string(n));

  CsvWriter csv(detail::out_file(out_dir, "special-component.csv"), cfg,
                {"layer", "lo", "hi", "empty", "violations", "trials"});
  write_layer_csv(csv, report.layers, report.trials);
  csv.close();

  auto j = json_summary_base(cfg);
  j["sqrt_n"] = report.sqrt_n;
  j["attempts"] = report.attempts;
  j["vacuous"] = report.vacuous;
  j["u_m_s"] = report.u_m_s;
  j["u_m_2s"] = report.u_m_2s;
  j["special_components"] = report.special_components;
  j["layers"] = layers_json(report.layers);
  j["final_successes"] = report.final_successes;
  write_json_file(detail::out_file(out_dir, "special-component.json"), j);

  std::printf(
      "special-component: m=%d n=%d vacuous=%s special=%d final=%d/%d\n",
      report.m, report.n, report.vacuous ? "yes" : "no",
      report.special_components, report.final_successes, report.trials);
  return 0;
}

template <int D>
int exec_renorm_field(const Opts& o, const std::string& out_dir) {
  auto spec = parse_lambda_spec<D>(o.lambda);
  Config cfg = detail::base_config("renorm-field", o, true);
  cfg.emplace_back("n", detail::join_ints(o.n_list));
  cfg.emplace_back("coarse_radius", std::to_string(o.coarse_radius));

  CsvWriter csv(detail::out_file(out_dir, "renorm-field.csv"), cfg,
                {"n", "site", "successes", "trials", "marginal"});
  auto j = json_summary_base(cfg);
  auto& runs = j["runs"] = nlohmann::json::array();
  for (int n : o.n_list) {
    auto report = run_renormalized_field(spec, o.k, o.eps, n, o.coarse_radius,
                                         o.trials, o.seed);
    for (const auto& site : report.sites) {
      std::string label;
      for (int i = 0; i < D; ++i)
        label += (i ? "_" : "") + std::to_string(site.site[i]);
      csv.write_row({std::to_string(n), label, std::to_string(site.successes),
                     std::to_string(report.trials),
                     fmt_double(static_cast<double>(site.successes) /
                                report.trials)});
    }
    nlohmann::json run;
    run["n"] = n;
    run["p_hat"] = report.p_hat;
    run["p_ci"] = detail::interval_json(report.p_ci);
    auto& dists = run["by_distance"] = nlohmann::json::array();
    for (const auto& slot : report.by_distance)
      dists.push_back({{"distance", slot.distance},
                       {"pairs", slot.pairs},
                       {"max_abs_corr", slot.max_abs_corr}});
    runs.push_back(std::move(run));
    std::printf("renorm-field: n=%d p_hat=%s\n", n,
                fmt_double(report.p_hat).c_str());
  }
  csv.close();
  write_json_file(detail::out_file(out_dir, "renorm-field.json"), j);
  return 0;
}

inline int exec_transience(const Opts& o, const std::string& out_dir) {
  auto report =
      run_transience_probe<3>(o.k, o.eps, o.n_list, o.trials, o.seed);
  Config cfg = detail::base_config("transience", o, false);
  cfg.emplace_back("n", detail::join_ints(o.n_list));

  CsvWriter csv(detail::out_file(out_dir, "transience.csv"), cfg,
                {"n", "trial", "r_single", "r_union", "r_phi", "iterations"});
  for (const auto& r : report.rows)
    csv.write_row({std::to_string(r.n), std::to_string(r.trial),
                   fmt_double(r.r_single), fmt_double(r.r_union),
                   fmt_double(r.r_phi), std::to_string(r.iterations)});
  csv.close();

  auto j = json_summary_base(cfg);
  j["phi_coupling_ok"] = report.phi_coupling_ok;
  auto& stats = j["stats"] = nlohmann::json::array();
  for (const auto& s : report.stats)
    stats.push_back({{"n", s.n},
                     {"median_single", s.median_single},
                     {"median_union", s.median_union},
                     {"median_phi", s.median_phi},
                     {"ci_single", detail::interval_json(s.ci_single)},
                     {"ci_union", detail::interval_json(s.ci_union)},
                     {"ci_phi", detail::interval_json(s.ci_phi)}});
  auto& incs = j["increments"] = nlohmann::json::array();
  for (const auto& inc : report.increments)
    incs.push_back({{"n_from", inc.n_from},
                    {"n_to", inc.n_to},
                    {"inc_single", inc.inc_single},
                    {"inc_union", inc.inc_union},
                    {"inc_phi", inc.inc_phi},
                    {"ci_single", detail::interval_json(inc.ci_single)},
                    {"ci_union", detail::interval_json(inc.ci_union)},
                    {"ci_phi", detail::interval_json(inc.ci_phi)}});
  write_json_file(detail::out_file(out_dir, "transience.json"), j);

  for (const auto& s : report.stats)
    std::printf("transience: n=%d median_single=%s median_union=%s\n", s.n,
                fmt_double(s.median_single).c_str(),
                fmt_double(s.median_union).c_str());
  return 0;
}

// --- verify battery ----------------------------------------------------------

namespace detail {

struct VerifyTable {
  int failures = 0;
  template <class F>
  void check(const char* name, F&& f) {
    bool ok = false;
    std::string note;
    try {
      ok = f();
    } catch (const std::exception& e) {
      note = e.what();
    }
    if (!ok) ++failures;
    std::printf("%-58s %s%s%s\n", name, ok ? "PASS" : "FAIL",
                note.empty() ? "" : "  ", note.c_str());
  }
};

inline bool verify_cell_partition() {
  auto window = Window<2>::box(4);
  std::map<Edge<2>, int> owners;
  for (const auto& z : cell_centers_meeting(window, 1))
    for (const auto& e : cell_edges(z, 1))
      if (window.contains(e)) ++owners[e];
  for (const auto& e : window.all_edges())
    if (owners[e] != 1) return false;
  return cell_edge_count<2>(1) == 8 && cell_edge_count<3>(1) == 24;
}

inline bool verify_cycles_share_cells() {
  Rng rng(derive(11, StreamTag::kInstance));
  for (int t = 0; t < 400; ++t) {
    int w = 1 + static_cast<int>(rng.below(5));
    int h = 1 + static_cast<int>(rng.below(5));
    Vec<2> at{static_cast<int>(rng.below(9)) - 4,
              static_cast<int>(rng.below(9)) - 4};
    std::vector<Edge<2>> loop;
    for (int x = 0; x < w; ++x) {
      loop.push_back({add(at, Vec<2>{x, 0}), 0});
      loop.push_back({add(at, Vec<2>{x, h}), 0});
    }
    for (int y = 0; y < h; ++y) {
      loop.push_back({add(at, Vec<2>{0, y}), 1});
      loop.push_back({add(at, Vec<2>{w, y}), 1});
    }
    std::map<Vec<2>, int> per_cell;
    int repeated = 0;
    for (const auto& e : loop)
      if (++per_cell[cell_of_edge(e, 1)] == 2) repeated = 1;
    if (!repeated) return false;
  }
  return true;
}

inline bool verify_tree_counts() {
  DenseNetwork tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  DenseNetwork k4(4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
  return spanning_tree_count(tri) == 3 && spanning_tree_count(k4) == 16;
}

inline bool verify_sampler_marginal() {
  auto window = Window<2>::box(1);
  auto net = build_window_network(window, false);
  VertexPair e{net.vertex(Vec<2>{0, 0}), net.vertex(Vec<2>{1, 0})};
  double exact =
      mpq_get_d(edge_in_ust_probability(net.net, e.first, e.second).get_mpq_t());
  const int samples = 20000;
  int hits = 0;
  Edge<2> probe{Vec<2>{0, 0}, 0};
  for (int i = 0; i < samples; ++i) {
    auto f = sample_ust(Network<2>{window, false, {}, {}},
                        derive(500, StreamTag::kTrial, i));
    hits += f.has_edge(probe) ? 1 : 0;
  }
  double sigma = std::sqrt(exact * (1 - exact) / samples);
  return std::abs(static_cast<double>(hits) / samples - exact) < 4 * sigma;
}

inline bool verify_resistance_solver() {
  // Exact reference: merge the frame of B_2 into one node, matching the
  // iterative solver's grounded boundary condition.
  auto window = Window<2>::box(2);
  std::vector<int> id(static_cast<std::size_t>(window.vertex_count()), 0);
  int next = 1;
  for (std::int64_t i = 0; i < window.vertex_count(); ++i)
    if (!window.on_frame(window.vertex(i)))
      id[static_cast<std::size_t>(i)] = next++;
  DenseNetwork g(next);
  for (const auto& e : window.all_edges()) {
    int a = id[static_cast<std::size_t>(window.index(e.base))];
    int b = id[static_cast<std::size_t>(window.index(e.other()))];
    if (a != b) g.add_edge(a, b);
  }
  auto exact = effective_resistance_exact(
      g, id[static_cast<std::size_t>(window.index(zero<2>()))], 0);
  if (!exact) return false;
  auto cg = reff_to_boundary<2>(window.all_edges(), zero<2>(), 2, 1e-10);
  return cg.connected &&
         std::abs(cg.value - mpq_get_d(exact->get_mpq_t())) < 1e-6;
}

inline bool verify_reveal_engine() {
  auto net = build_window_network(Window<2>::box(1), true);
  RevealEngine engine(net.net, net.boundary_vertex());
  std::vector<VertexPair> a, b;
  Rng rng(derive(7, StreamTag::kInstance));
  auto tree = sample_ust(Network<2>{Window<2>::box(1), false, {}, {}}, 99);
  for (const auto& e : order_forest_edges(tree.edges)) {
    auto vp = net.endpoints(e);
    if (engine.edge_probability(vp) !=
        conditional_edge_probability(net.net, vp, a, b))
      return false;
    if (rng.bernoulli(0.5) || engine.edge_probability(vp) == Rational(1)) {
      engine.contract(vp);
      a.push_back(vp);
    } else {
      engine.remove(vp);
      b.push_back(vp);
    }
  }
  return true;
}

inline bool verify_boxperc_marginal() {
  auto window = Window<2>::box(320);
  auto sample = sample_box_percolation(window, 1, 0.5, 606060);
  std::int64_t open = 0, cells = 0;
  for (const auto& c : sample.cells) {
    if (c.clipped) continue;
    ++cells;
    open += c.open ? 1 : 0;
  }
  double p = 0.5, phat = static_cast<double>(open) / cells;
  double sigma = std::sqrt(p * (1 - p) / cells);
  return std::abs(phat - p) < 4 * sigma;
}

inline bool verify_io_roundtrip() {
  io::EdgeListSnapshot<2> snap;
  snap.k = 2;
  snap.eps = 0.1;
  snap.seed = 99;
  snap.edges = Window<2>::box(2).all_edges();
  std::ostringstream first;
  io::write_edge_list(first, snap);
  std::istringstream in(first.str());
  auto back = io::read_edge_list<2>(in);
  std::ostringstream second;
  io::write_edge_list(second, back);
  return first.str() == second.str() && back.edges == snap.edges;
}

inline bool verify_rng_streams() {
  Rng a(derive(31, StreamTag::kCell, 4)), b(derive(31, StreamTag::kCell, 4));
  for (int i = 0; i < 100; ++i)
    if (a.next() != b.next()) return false;
  Rng c(derive(31, StreamTag::kCell, 5));
  return c.next() != Rng(derive(31, StreamTag::kCell, 4)).next();
}

inline bool verify_overlay_labeling() {
  auto window = Window<2>::box(5);
  Rng rng(derive(21, StreamTag::kInstance));
  auto all = window.all_edges();
  std::vector<Edge<2>> base, extra;
  for (const auto& e : all) {
    double u = rng.uniform01();
    if (u < 0.3)
      base.push_back(e);
    else if (u < 0.45)
      extra.push_back(e);
  }
  MergeTracker<2> tracker(window, base);
  auto overlay = tracker.overlay(extra);
  std::vector<Edge<2>> joint = base;
  joint.insert(joint.end(), extra.begin(), extra.end());
  auto fresh = label_components(joint, window);
  int fresh_count = 0;
  for (int id = 0; id < fresh.component_count; ++id)
    fresh_count += 1;
  return overlay.count_u(0, window.hi[0]) == fresh_count;
}

}  // namespace detail

inline int exec_verify() {
  detail::VerifyTable table;
  table.check("cells partition window edges with the exact size",
              detail::verify_cell_partition);
  table.check("rectangular loops always repeat a cell",
              detail::verify_cycles_share_cells);
  table.check("spanning tree counts match hand enumeration",
              detail::verify_tree_counts);
  table.check("tree sampler marginal matches the exact oracle",
              detail::verify_sampler_marginal);
  table.check("iterative resistance agrees with exact arithmetic",
              detail::verify_resistance_solver);
  table.check("reveal engine equals the from-scratch conditional oracle",
              detail::verify_reveal_engine);
  table.check("box percolation marginal sits at eps per cell",
              detail::verify_boxperc_marginal);
  table.check("edge snapshots round-trip byte for byte",
              detail::verify_io_roundtrip);
  table.check("derived random streams are reproducible",
              detail::verify_rng_streams);
  table.check("overlay component count matches fresh labeling",
              detail::verify_overlay_labeling);
  std::printf("%s\n", table.failures == 0 ? "all checks passed"
                                          : "SOME CHECKS FAILED");
  return table.failures == 0 ? 0 : 2;
}

// --- driver ------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
  CLI::App app{"spanning-forest and box-percolation laboratory"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "output directory for CSV/JSON")
      ->envname("SPANPERC_OUT_DIR")
      ->capture_default_str();
  bool ci = false;
  app.add_flag("--ci", ci, "CI mode: a seed must be supplied explicitly");

  struct SubSpec {
    CLI::App* sub = nullptr;
    Opts opts;
    bool needs_lambda = false;
  };
  std::map<std::string, SubSpec> subs;

  auto add_common = [&](const std::string& name, const std::string& help,
                        bool lambda_opt) -> SubSpec& {
    auto& spec = subs[name];
    spec.sub = app.add_subcommand(name, help);
    spec.sub->fallthrough();  // parent options may follow the subcommand
    spec.needs_lambda = lambda_opt;
    auto& o = spec.opts;
    spec.sub->add_option("--d", o.d, "lattice dimension")
        ->check(CLI::IsMember({2, 3}))
        ->capture_default_str();
    spec.sub->add_option("--k", o.k, "cell scale k")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    spec.sub->add_option("--eps", o.eps, "per-cell opening probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    spec.sub->add_option("--trials", o.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    spec.sub->add_option("--seed", o.seed, "base RNG seed");
    if (lambda_opt)
      spec.sub
          ->add_option("--lambda", o.lambda,
                       "environment: full | axis-lines[:axis] | wusf[:pad] | "
                       "file:<path>")
          ->capture_default_str();
    return spec;
  };

  {
    auto& s = add_common("domination",
                         "coupled forest-thinning vs box percolation", false);
    s.sub->add_option("--m", s.opts.window_radius, "window radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  {
    auto& s = add_common("connect-scaling",
                         "box connection probability across sizes", true);
    s.sub->add_option("--n", s.opts.n_list, "box radii (comma separated)")
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }
  {
    auto& s = add_common("sprinkling", "annulus sprinkling component decay",
                         true);
    s.sub->add_option("--m", s.opts.m, "inner radius m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s.opts.n_list = {16};
    s.sub->add_option("--n", s.opts.n_list, "sprinkling scale n")
        ->delimiter(',')
        ->expected(1)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  {
    auto& s = add_common("special-component",
                         "shell-confined component absorption", true);
    s.sub->add_option("--m", s.opts.m, "inner radius m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s.opts.n_list = {16};
    s.sub->add_option("--n", s.opts.n_list, "sprinkling scale n")
        ->delimiter(',')
        ->expected(1)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  {
    auto& s = add_common("renorm-field", "coarse-grained block connectivity",
                         true);
    s.sub->add_option("--n", s.opts.n_list, "block sizes (comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s.sub
        ->add_option("--coarse-radius", s.opts.coarse_radius,
                     "coarse window radius")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }
  {
    auto& s = add_common("transience",
                         "effective resistance growth of forest unions",
                         false);
    s.opts.n_list = {8, 16};
    s.sub->get_option("--d")->check(CLI::IsMember({3}))->default_val(3);
    s.sub->add_option("--n", s.opts.n_list, "box radii (comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  CLI::App* verify =
      app.add_subcommand("verify", "run the oracle and property battery");
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (verify->parsed()) return exec_verify();

  for (auto& [name, spec] : subs) {
    if (!spec.sub->parsed()) continue;
    Opts& o = spec.opts;
    o.seed_given = spec.sub->count("--seed") > 0;
    if (!o.seed_given) {
      if (ci) {
        std::fprintf(stderr,
                     "usage error: --seed is required in CI mode (--ci)\n");
        return 1;
      }
      std::random_device rd;
      o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      std::printf("seed=%llu (auto-drawn)\n",
                  static_cast<unsigned long long>(o.seed));
    }
    try {
      if (name == "domination")
        return o.d == 2 ? exec_domination<2>(o, out_dir)
                        : exec_domination<3>(o, out_dir);
      if (name == "connect-scaling")
        return o.d == 2 ? exec_connect_scaling<2>(o, out_dir)
                        : exec_connect_scaling<3>(o, out_dir);
      if (name == "sprinkling")
        return o.d == 2 ? exec_sprinkling<2>(o, out_dir)
                        : exec_sprinkling<3>(o, out_dir);
      if (name == "special-component")
        return o.d == 2 ? exec_special_component<2>(o, out_dir)
                        : exec_special_component<3>(o, out_dir);
      if (name == "renorm-field")
        return o.d == 2 ? exec_renorm_field<2>(o, out_dir)
                        : exec_renorm_field<3>(o, out_dir);
      if (name == "transience") return exec_transience(o, out_dir);
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "usage error: %s\n", e.what());
      return 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }
  return 1;  // unreachable with require_subcommand(1)
}

}  // namespace spanperc::cli
