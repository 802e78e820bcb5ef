// Copyright 2026 The nlgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nlgames/classical.hpp"
#include "nlgames/config.hpp"
#include "nlgames/freefermion.hpp"
#include "nlgames/games.hpp"
#include "nlgames/models.hpp"
#include "nlgames/protocols.hpp"
#include "nlgames/report.hpp"

namespace nlgames::cli {

struct Context {
  Config config;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct CommandResult {
  CsvTable table;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> attachments;  // (file suffix, content)
};

// Sweep over min..max in steps points, both ends included.
struct SweepSpec {
  std::string parameter;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  void validate() const {
    if (steps < 2) throw ConfigError("sweep needs steps >= 2");
    if (!(min < max)) throw ConfigError("sweep needs min < max");
  }
  double at(int i) const { return min + (max - min) * i / (steps - 1); }
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, int workers, F&& f) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ConfigError("expected a fraction such as 1/4, got '" + s + "'");
  }
}

inline std::vector<std::string> row_kv(const std::string& k, const std::string& v) { return {k, v}; }

}  // namespace detail

inline const std::set<std::string>& game_keys() {
  static const std::set<std::string> k{"game", "n", "marked", "alpha", "d", "m", "lx", "ly", "teams", "dual_row"};
  return k;
}

inline GameSpec game_from_config(const Config& c) {
  const std::string kind = c.get_string("game");
  if (kind == "parity") return ParityGame{static_cast<int>(c.get_int("n"))};
  if (kind == "pbit") {
    PBitParityGame g{static_cast<int>(c.get_int("n")), c.get_ints("marked"), Rational(1, 2)};
    if (c.has("alpha")) g.alpha = detail::parse_rational(c.get_string("alpha"));
    return g;
  }
  if (kind == "boyer")
    return BoyerGame{static_cast<int>(c.get_int("n")), static_cast<int>(c.get_int("d")),
                     static_cast<int>(c.get_int("m"))};
  if (kind == "polygon") {
    const int n = static_cast<int>(c.get_int("n"));
    if (!c.has("marked")) return PolygonGame::standalone(n);
    return PolygonGame::inscribed(n, c.get_ints("marked"));
  }
  if (kind == "toric") {
    ToricGame g{ToricLattice(static_cast<int>(c.get_int("lx", 3)), static_cast<int>(c.get_int("ly", 2))),
                c.get_ints("teams", {0, 1, 2}), static_cast<int>(c.get_int("dual_row", 0))};
    return g;
  }
  throw ConfigError("unknown game '" + kind + "' (parity, pbit, boyer, polygon, toric)");
}

inline const std::set<std::string>& state_keys() {
  static const std::set<std::string> k{"state", "j", "g", "gamma", "h", "lambda", "k", "kprime", "hx", "hz",
                                       "label", "state_seed"};
  return k;
}

// Register shape implied by the game.
inline std::pair<int, int> register_shape(const GameSpec& spec) {
  if (const auto* g = std::get_if<ParityGame>(&spec)) return {g->n, 2};
  if (const auto* g = std::get_if<PBitParityGame>(&spec)) return {g->n, 2};
  if (const auto* g = std::get_if<BoyerGame>(&spec)) return {g->n, g->m};
  if (const auto* g = std::get_if<PolygonGame>(&spec)) return {2 * g->n, 2};
  return {std::get<ToricGame>(spec).lattice.num_bonds(), 2};
}

inline PureState state_from_config(const Config& c, const GameSpec& spec, std::uint64_t seed) {
  const auto [n, m] = register_shape(spec);
  const std::string kind = c.get_string("state");
  if (kind == "ghz-plus") return make_named_state(NamedState::GhzPlus, n, m);
  if (kind == "ghz-minus") return make_named_state(NamedState::GhzMinus, n, m);
  if (kind == "ghz-qudit") return make_named_state(NamedState::GhzQudit, n, m);
  if (kind == "x-polarized") return make_named_state(NamedState::XPolarized, n, m);
  if (kind == "cluster") return make_named_state(NamedState::Cluster, n, m);
  if (kind == "basis") {
    const auto label = c.get_ints("label");
    return make_named_state(NamedState::ComputationalBasis, n, m, label);
  }
  if (kind == "random") {
    std::mt19937_64 rng(static_cast<std::uint64_t>(c.get_int("state_seed", static_cast<long long>(seed))));
    return random_state(n, m, rng);
  }
  if (kind == "ising") {
    const double gamma = c.has("gamma") ? c.get_double("gamma") : c.get_double("g");
    return model_ground_state(IsingSpec{n, c.get_double("j", 1.0), gamma, c.get_double("h", 0.0)}).states[0];
  }
  if (kind == "clock")
    return model_ground_state(ClockSpec{n, m, c.get_double("j", 1.0), c.get_double("gamma"), c.get_double("h", 0.0)})
        .states[0];
  if (kind == "cluster-chain") {
    nlgames::detail::require(n % 2 == 0, "cluster chain needs an even register");
    return model_ground_state(ClusterChainSpec{n / 2, c.get_double("lambda", 0.0)}).states[0];
  }
  if (kind == "mean-field-broken" || kind == "mean-field-cat") {
    const auto mk = kind == "mean-field-broken" ? MeanFieldKind::Broken : MeanFieldKind::EvenCat;
    return mean_field_state(mk, n, c.get_double("g"), c.get_double("h", 0.0));
  }
  if (kind == "toric-ideal" || kind == "toric") {
    const auto* t = std::get_if<ToricGame>(&spec);
    if (!t) throw ConfigError("toric states need the toric game");
    if (kind == "toric-ideal") return t->lattice.game_state();
    ToricSpec ts{t->lattice, c.get_double("k", 1.0), c.get_double("kprime", 1.0), c.get_double("hx", 0.0),
                 c.get_double("hz", 0.0)};
    return adiabatic_toric_state(model_ground_state(ts, 4), t->lattice).state;
  }
  throw ConfigError("unknown state '" + kind + "'");
}

inline std::set<std::string> with_keys(std::set<std::string> base, std::initializer_list<std::string> extra) {
  for (const auto& e : extra) base.insert(e);
  return base;
}

// ---- parity-sweep ----

inline CommandResult cmd_parity_sweep(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known({"n", "j", "h", "gmin", "gmax", "steps", "freefermion"});
  const int n = static_cast<int>(c.get_int("n", 6));
  if (n > 16) throw CapacityError("parity sweep ED path supports N <= 16");
  const double j = c.get_double("j", 1.0);
  const auto fields = c.get_doubles("h", {0.0});
  SweepSpec sweep{"g", c.get_double("gmin", 0.0), c.get_double("gmax", 2.0), static_cast<int>(c.get_int("steps", 41))};
  sweep.validate();
  const bool with_ff = c.get_bool("freefermion", true);
  const double pcl = freefermion::pcl_parity(n);

  struct Point {
    double g, h;
  };
  std::vector<Point> pts;
  for (double h : fields)
    for (int i = 0; i < sweep.steps; ++i) pts.push_back({sweep.at(i), h});
  std::vector<std::vector<std::string>> rows(pts.size());
  detail::parallel_for(pts.size(), ctx.workers, [&](std::size_t i) {
    const double g = std::max(pts[i].g, kMinCoupling);
    const auto st = model_ground_state(IsingSpec{n, j, g * j, pts[i].h * j}).states[0];
    std::string ff;
    if (with_ff && pts[i].h == 0.0) ff = format_real(freefermion::pqu_parity_exact(n, g).value);
    rows[i] = {format_real(pts[i].g), format_real(pts[i].h), format_real(pqu_theorem1(st)), ff, format_real(pcl)};
  });
  CommandResult r;
  r.table.header = {"g", "h", "pqu_ed", "pqu_freefermion", "pcl_star"};
  for (auto& row : rows) r.table.add(std::move(row));
  std::string gp = "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'g'\nset ylabel 'p'\n";
  gp += "plot ";
  for (std::size_t k = 0; k < fields.size(); ++k)
    gp += "DATA every ::" + std::to_string(1 + k * sweep.steps) + "::" + std::to_string((k + 1) * sweep.steps) +
          " using 1:3 with linespoints title 'h=" + format_real(fields[k]) + "', ";
  gp += "DATA using 1:5 with lines title 'p_cl'\n";
  r.attachments.push_back({".gp", "DATA = ARG1\n" + gp});
  return r;
}

// ---- threshold ----

inline CommandResult cmd_threshold(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known({"mode", "n", "alpha", "g"});
  const std::string mode = c.get_string("mode", "asymptotic");
  CommandResult r;
  r.table.header = {"quantity", "value"};
  auto add = [&](const std::string& k, double v) { r.table.add(detail::row_kv(k, format_real(v))); };
  if (mode == "finite") {
    const int n = static_cast<int>(c.get_int("n"));
    const auto root = freefermion::threshold_finite(n);
    add("n", n);
    add("g_star", root.value);
    add("bracket_width", root.bracket_width);
    add("pcl_star", freefermion::pcl_parity(n));
    const auto lit = freefermion::threshold_finite_literal(n);
    r.table.add({"g_star_literal_product", lit ? format_real(lit->value) : "none"});
  } else if (mode == "asymptotic") {
    const auto root = freefermion::threshold_asymptotic();
    const auto integral = freefermion::threshold_integral(root.value);
    add("g_star", root.value);
    add("bracket_width", root.bracket_width);
    add("integral_at_root", integral.value);
    add("quadrature_error", integral.error_estimate);
  } else if (mode == "three-bit") {
    add("g_star", three_bit_threshold());
    const auto num =
        freefermion::bisect([](double g) { return pqu_three_bit_asymptotic(g) - 0.75; }, 0.5, 1.0, 1e-14);
    add("g_star_bisection", num.value);
  } else if (mode == "pbit-alpha") {
    const double alpha = c.get_double("alpha", 0.5);
    const double ms = pbit_m_star(alpha);
    add("alpha", alpha);
    add("m_star", ms);
    add("g_star", g_from_magnetization(ms));
    add("m_star_small_alpha", alpha / 2);
    add("g_star_small_alpha", 1.0 - std::pow(alpha, 8) / 512.0);
    add("g_star_uniform", g_from_magnetization(pbit_m_star(0.5)));
    add("g_star_uniform_closed", std::sqrt(408.0 * std::sqrt(2.0) - 576.0));
  } else if (mode == "convention") {
    const int n = static_cast<int>(c.get_int("n"));
    const double g = c.get_double("g", 0.5);
    const double exact = freefermion::pqu_parity_exact(n, g).value;
    const double literal = freefermion::pqu_parity_literal(n, g);
    const double corrected = freefermion::pqu_parity_product(n, g);
    const auto st = model_ground_state(IsingSpec{n, 1.0, g, 0.0}).states[0];
    const double ed = pqu_theorem1(st);
    add("pqu_ed", ed);
    add("pqu_fidelity", exact);
    add("pqu_product_literal", literal);
    add("pqu_product_corrected", corrected);
    r.table.add({"matches_ed", std::abs(literal - ed) < 1e-8 ? "literal" : (std::abs(corrected - ed) < 1e-8 ? "corrected" : "neither")});
  } else {
    throw ConfigError("unknown threshold mode '" + mode + "' (finite, asymptotic, three-bit, pbit-alpha, convention)");
  }
  return r;
}

// ---- classical-search ----

inline CommandResult cmd_classical_search(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known(with_keys(game_keys(), {"restriction", "long_running", "timing"}));
  const GameSpec spec = game_from_config(c);
  SearchOptions opts;
  const std::string restr = c.get_string("restriction", "full");
  if (restr == "condition1")
    opts.restriction = Restriction::Condition1Respecting;
  else if (restr != "full")
    throw ConfigError("restriction must be full or condition1");
  opts.workers = ctx.workers;
  opts.allow_long_running = c.get_bool("long_running", false);
  const auto res = exhaustive_search(spec, opts);
  CommandResult r;
  r.table.header = {"game", "space-size", "optimum", "optimum-num", "optimum-den", "witnesses-count", "seconds"};
  r.table.add({game_name(spec), format_real(res.space_size), format_fraction(res.optimum),
               std::to_string(res.optimum.numerator()), std::to_string(res.optimum.denominator()),
               std::to_string(res.optimal_count), c.get_bool("timing", false) ? format_real(res.seconds) : ""});
  std::string w;
  for (const auto& t : res.witness.table) w += format_bits(t) + " ";
  r.summary = "witness: " + w;
  return r;
}

// ---- boyer ----

inline CommandResult cmd_boyer(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known({"d", "m", "nmin", "nmax", "exhaustive_nmax"});
  const int d = static_cast<int>(c.get_int("d", 3)), m = static_cast<int>(c.get_int("m", 3));
  const int nmin = static_cast<int>(c.get_int("nmin", 2)), nmax = static_cast<int>(c.get_int("nmax", 8));
  const int ex_max = static_cast<int>(c.get_int("exhaustive_nmax", 0));
  if (nmin < 1 || nmax < nmin) throw ConfigError("need 1 <= nmin <= nmax");
  const double s = boyer_s(d, m);
  CommandResult r;
  r.table.header = {"d", "m", "s", "n", "upper_bound", "exhaustive_optimum"};
  for (int n = nmin; n <= nmax; ++n) {
    std::string ex;
    if (n <= ex_max) {
      SearchOptions o;
      o.workers = ctx.workers;
      ex = format_fraction(exhaustive_search(BoyerGame{n, d, m}, o).optimum);
    }
    r.table.add({std::to_string(d), std::to_string(m), format_real(s), std::to_string(n),
                 format_real(boyer_upper_bound(d, m, n)), ex});
  }
  return r;
}

// ---- game-run ----

inline CommandResult cmd_game_run(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known(with_keys(with_keys(game_keys(), {"protocol", "rounds"}), {"state", "j", "g", "gamma", "h", "lambda",
                                                                           "k", "kprime", "hx", "hz", "label",
                                                                           "state_seed"}));
  const GameSpec spec = game_from_config(c);
  Protocol proto = native_protocol(spec);
  if (c.has("protocol")) {
    const std::string p = c.get_string("protocol");
    if (p == "bbt") proto = Protocol::Bbt;
    else if (p == "boyer") proto = Protocol::Boyer;
    else if (p == "cluster") proto = Protocol::Cluster;
    else if (p == "toric") proto = Protocol::Toric;
    else throw ConfigError("unknown protocol '" + p + "'");
  }
  require_compatible(spec, proto);
  const PureState st = state_from_config(c, spec, ctx.seed);
  OracleOptions oo;
  oo.workers = ctx.workers;
  const auto rep = oracle_win_probability(st, spec, proto, oo, c.get_string("state"));
  CommandResult r;
  r.table = protocol_report_table(rep);
  const auto analytic = analytic_win_probability(st, spec);
  if (analytic) r.table.add({rep.game, rep.state, rep.protocol, "analytic", "total", "1/1", format_real(*analytic)});
  r.summary = protocol_report_text(rep);
  if (analytic) r.summary += "analytic: " + format_real(*analytic) + "\n";

  const int rounds = static_cast<int>(c.get_int("rounds", 0));
  if (rounds > 0) {
    std::mt19937_64 rng(ctx.seed);
    const InputSet set = enumerate_inputs(spec);
    CsvTable tr;
    tr.header = {"round", "input", "output", "win"};
    BranchOptions bo;
    bo.keep_post_states = false;
    for (int k = 0; k < rounds; ++k) {
      const std::size_t i = sample_input(set, rng);
      const auto br = nlgames::detail::run_protocol(st, spec, set.inputs[i].bits, bo);
      std::vector<double> w;
      for (const auto& b : br.branches) w.push_back(b.probability);
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      const auto& b = br.branches[pick(rng)];
      const auto out = nlgames::detail::branch_outputs(spec, b);
      std::string os;
      for (std::size_t q = 0; q < out.size(); ++q) os += (q ? " " : "") + std::to_string(out[q]);
      tr.add({std::to_string(k), format_bits(set.inputs[i].bits), os, std::string(judge(spec, set.inputs[i].bits, out) ? "1" : "0")});
    }
    r.attachments.push_back({".transcript.csv", to_csv(tr, {ctx.seed, c.hash(), "game-run-transcript"})});
  }
  return r;
}

// ---- toric-pert ----

inline CommandResult cmd_toric_pert(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known({"lx", "ly", "k", "kprime", "hx", "hz", "teams", "ed"});
  ToricSpec spec{ToricLattice(static_cast<int>(c.get_int("lx", 3)), static_cast<int>(c.get_int("ly", 2))),
                 c.get_double("k", 1.0), c.get_double("kprime", 1.0), c.get_double("hx", 0.0), c.get_double("hz", 0.0)};
  const auto teams = c.get_ints("teams", {0, 1, 2});
  const int t = static_cast<int>(teams.size());
  const auto p = pqu_toric_perturbative(spec, t);
  CommandResult r;
  r.table.header = {"quantity", "value"};
  auto add = [&](const std::string& k, double v) { r.table.add(detail::row_kv(k, format_real(v))); };
  add("wilson_perturbative", p.wilson);
  add("dual_perturbative", p.dual);
  add("wilson_threshold", p.wilson_threshold);
  add("dual_threshold", p.dual_threshold);
  add("team_spacing_bound", p.team_spacing_bound);
  add("hx_bound", p.hx_bound);
  add("hx_window", p.hx_window);
  add("hz_window", p.hz_window);
  add("pqu_wilson_form", p.pqu_wilson_form);
  add("pqu_dual_form", p.pqu_dual_form);
  add("pcl_star", p.pcl);
  if (c.get_bool("ed", false)) {
    const auto& lat = spec.lattice;
    const auto gs = model_ground_state(spec, 4);
    const auto proj = adiabatic_toric_state(gs, lat);
    const PureState ref00 = project_onto_span(gs, lat.ground_state_00()).state;
    for (int x = 0; x < lat.lx(); ++x)
      add("wilson_ed_" + std::to_string(x), expectation(ref00, lat.wilson(lat.column_loop(x))).real());
    add("dual_ed", expectation(proj.state, lat.dual_wilson(lat.row_dual_loop(0))).real());
    ToricGame g{lat, teams, 0};
    add("pqu_exact", pqu_toric_exact(proj.state, g));
    add("projection_norm", proj.projection_norm);
    if (!proj.warning.empty()) r.summary = proj.warning;
  }
  return r;
}

// ---- polygon-estimate ----

inline CommandResult cmd_polygon_estimate(const Context& ctx) {
  const Config& c = ctx.config;
  c.require_known({"p", "s"});
  const int p = static_cast<int>(c.get_int("p", 5));
  const auto ss = c.get_doubles("s", {0.0, 0.25, 0.5, 0.75, 1.0});
  CommandResult r;
  r.table.header = {"p", "s", "pqu_estimate", "matching_sum", "criterion", "golden_ratio", "advantage_lost_large_p",
                    "pcl_lower_bound"};
  const double lower = 1.0 - static_cast<double>(fibonacci(p - 1)) / std::ldexp(1.0, p);
  for (double s : ss) {
    const auto e = pqu_polygon_estimate(s, p);
    r.table.add({std::to_string(p), format_real(s), format_real(e.value), format_real(e.matching_sum),
                 format_real(e.criterion), format_real(e.golden), e.advantage_lost_large_p ? "1" : "0",
                 p % 2 ? format_real(lower) : "1"});
  }
  return r;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"parity-sweep", "threshold",   "classical-search", "boyer",
                                              "game-run",     "toric-pert", "polygon-estimate"};
  return names;
}

inline CommandResult run_command(const std::string& name, const Context& ctx) {
  if (name == "parity-sweep") return cmd_parity_sweep(ctx);
  if (name == "threshold") return cmd_threshold(ctx);
  if (name == "classical-search") return cmd_classical_search(ctx);
  if (name == "boyer") return cmd_boyer(ctx);
  if (name == "game-run") return cmd_game_run(ctx);
  if (name == "toric-pert") return cmd_toric_pert(ctx);
  if (name == "polygon-estimate") return cmd_polygon_estimate(ctx);
  throw ConfigError("unknown command '" + name + "'");
}

// Process exit code for an exception escaping a command.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return 3;
  if (dynamic_cast<const ConvergenceError*>(&e)) return 4;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

}  // namespace nlgames::cli
