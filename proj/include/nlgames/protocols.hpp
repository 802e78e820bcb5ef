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
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nlgames/combinatorics.hpp"
#include "nlgames/error.hpp"
#include "nlgames/games.hpp"
#include "nlgames/models.hpp"
#include "nlgames/statevec.hpp"

namespace nlgames {

enum class Protocol { Bbt, Boyer, Cluster, Toric };

inline std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Bbt: return "bbt";
    case Protocol::Boyer: return "boyer";
    case Protocol::Cluster: return "cluster";
    default: return "toric";
  }
}

// The fixed-point protocol of each game family.
inline Protocol native_protocol(const GameSpec& spec) {
  switch (spec.index()) {
    case 0:
    case 1: return Protocol::Bbt;
    case 2: return Protocol::Boyer;
    case 3: return Protocol::Cluster;
    default: return Protocol::Toric;
  }
}

inline bool compatible(const GameSpec& spec, Protocol p) { return native_protocol(spec) == p; }

inline void require_compatible(const GameSpec& spec, Protocol p) {
  if (!compatible(spec, p))
    throw ParameterError("protocol " + protocol_name(p) + " is not defined for the " + game_name(spec) +
                         " game");
}

namespace detail {

inline BranchOptions oracle_branch_options() {
  BranchOptions o;
  o.keep_post_states = false;
  return o;
}

inline void require_qubits(const PureState& s, int n) {
  require(s.local_dim() == 2, "protocol needs a qubit register");
  require(s.num_sites() == n, "register size does not match the game");
}

}  // namespace detail

// Z^{a/2} then Hadamard on every site, then a computational measurement of all sites.
inline BranchEnumeration run_bbt(const PureState& state, const std::vector<int>& input,
                                 const BranchOptions& opts = {}) {
  if (state.local_dim() != 2) throw ParameterError("BBT protocol needs a qubit register");
  const int n = state.num_sites();
  detail::require(static_cast<int>(input.size()) == n, "BBT input length must equal the site count");
  PureState cur = state;
  for (int j = 0; j < n; ++j) {
    detail::require(input[j] == 0 || input[j] == 1, "BBT inputs are bits");
    if (input[j]) cur = apply_unitary(cur, j, SiteOperator::phase_power(input[j]));
    cur = apply_unitary(cur, j, SiteOperator::hadamard());
  }
  std::vector<int> sites(n);
  for (int j = 0; j < n; ++j) sites[j] = j;
  return enumerate_measurement_branches(cur, sites, opts);
}

// C^{-a/D}, Fourier, clock-basis measurement on every qudit.
inline BranchEnumeration run_boyer(const PureState& state, const std::vector<int>& input, int d, int m,
                                   const BranchOptions& opts = {}) {
  if (state.local_dim() != m) throw ParameterError("Boyer protocol: local dimension must equal M");
  detail::require(d >= 2, "Boyer protocol needs D >= 2");
  const int n = state.num_sites();
  detail::require(static_cast<int>(input.size()) == n, "Boyer input length must equal the site count");
  const SiteOperator w = SiteOperator::fourier(m);
  PureState cur = state;
  for (int j = 0; j < n; ++j) {
    detail::require(input[j] >= 0 && input[j] < d, "Boyer input out of range");
    if (input[j]) cur = apply_unitary(cur, j, SiteOperator::clock_power(m, -static_cast<double>(input[j]) / d));
    cur = apply_unitary(cur, j, w);
  }
  std::vector<int> sites(n);
  for (int j = 0; j < n; ++j) sites[j] = j;
  return enumerate_measurement_branches(cur, sites, opts);
}

// Observables of player p: (X, X', XX') on input 0 and (YX', X', Y) on input 1,
// with X on qubit 2p and X' on qubit 2p + 1.
inline OperatorTuple cluster_player_tuple(int p, int x) {
  const int a = 2 * p, b = 2 * p + 1;
  if (x == 0)
    return {OperatorString::pauli("X", a), OperatorString::pauli("X", b), OperatorString::pauli("XX", a)};
  return {OperatorString::pauli("YX", a), OperatorString::pauli("X", b), OperatorString::pauli("Y", a)};
}

// Branch labels are three bits per player; output codes via polygon_code.
inline BranchEnumeration run_cluster_protocol(const PureState& state, const std::vector<int>& input,
                                              const BranchOptions& opts = {}) {
  detail::require(state.local_dim() == 2 && state.num_sites() % 2 == 0,
                  "cluster protocol needs an even qubit register");
  const int n = state.num_sites() / 2;
  detail::require(static_cast<int>(input.size()) == n, "cluster input length must equal the player count");
  std::vector<OperatorTuple> tuples;
  for (int p = 0; p < n; ++p) {
    detail::require(input[p] == 0 || input[p] == 1, "polygon inputs are bits");
    tuples.push_back(cluster_player_tuple(p, input[p]));
  }
  return enumerate_measurement_branches(state, std::span<const OperatorTuple>(tuples), opts);
}

inline std::vector<int> cluster_outputs(const std::vector<int>& labels) {
  std::vector<int> out(labels.size() / 3);
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = polygon_code(labels[3 * p], labels[3 * p + 1], labels[3 * p + 2]);
  return out;
}

// W^{a/2} = P+ + i^a P- on the column loop qubits, as one dense gate.
inline Eigen::MatrixXcd wilson_root_gate(int loop_length, int a) {
  const std::size_t dim = std::size_t{1} << loop_length;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    g(k, k) = (std::popcount(i) % 2) ? SiteOperator::ipow(a) : cplx(1.0);
  }
  return g;
}

// Teams apply the Wilson-loop root on their columns; players on the dual loop measure X.
inline BranchEnumeration run_toric_protocol(const PureState& state, const ToricGame& game,
                                            const std::vector<int>& input, const BranchOptions& opts = {}) {
  validate(game);
  const auto& lat = game.lattice;
  detail::require_qubits(state, lat.num_bonds());
  detail::require(input.size() == game.teams.size(), "toric input length must equal the team count");
  PureState cur = state;
  for (std::size_t t = 0; t < game.teams.size(); ++t) {
    detail::require(input[t] == 0 || input[t] == 1, "toric inputs are bits");
    if (!input[t]) continue;
    const auto loop = lat.column_loop(game.teams[t]);
    cur = apply_unitary(cur, std::span<const int>(loop), wilson_root_gate(static_cast<int>(loop.size()), 1));
  }
  const auto players = lat.row_dual_loop(game.dual_row);
  for (int b : players) cur = apply_unitary(cur, b, SiteOperator::hadamard());
  return enumerate_measurement_branches(cur, std::span<const int>(players), opts);
}

struct InputReport {
  std::vector<int> input;
  Rational probability{0};
  double win = 0.0;
  double pruned = 0.0;
};

struct ProtocolReport {
  std::string game;
  std::string state;
  std::string protocol;
  double value = 0.0;
  std::string method;
  std::vector<InputReport> per_input;
  double error_bound = 0.0;
};

namespace detail {

inline BranchEnumeration run_protocol(const PureState& state, const GameSpec& spec, const std::vector<int>& input,
                                      const BranchOptions& opts) {
  if (const auto* g = std::get_if<ParityGame>(&spec)) {
    require_qubits(state, g->n);
    return run_bbt(state, input, opts);
  }
  if (const auto* g = std::get_if<PBitParityGame>(&spec)) {
    require_qubits(state, g->n);
    return run_bbt(state, input, opts);
  }
  if (const auto* g = std::get_if<BoyerGame>(&spec)) {
    require(state.num_sites() == g->n, "register size does not match the game");
    return run_boyer(state, input, g->d, g->m, opts);
  }
  if (const auto* g = std::get_if<PolygonGame>(&spec)) {
    require_qubits(state, 2 * g->n);
    return run_cluster_protocol(state, input, opts);
  }
  return run_toric_protocol(state, std::get<ToricGame>(spec), input, opts);
}

inline std::vector<int> branch_outputs(const GameSpec& spec, const Branch& b) {
  if (std::holds_alternative<PolygonGame>(spec)) return cluster_outputs(b.labels);
  return b.labels;
}

}  // namespace detail

struct OracleOptions {
  int workers = 1;
  BranchOptions branches = detail::oracle_branch_options();
};

// Per-input Born-rule sums; value is the game-distribution average.
inline ProtocolReport oracle_win_probability(const PureState& state, const GameSpec& spec, Protocol protocol,
                                             const OracleOptions& opts = {}, std::string state_label = "") {
  require_compatible(spec, protocol);
  const InputSet set = enumerate_inputs(spec);
  ProtocolReport rep;
  rep.game = game_name(spec);
  rep.state = std::move(state_label);
  rep.protocol = protocol_name(protocol);
  rep.method = "branch-enumeration";
  rep.per_input.resize(set.inputs.size());

  auto work = [&](std::size_t i) {
    const auto br = detail::run_protocol(state, spec, set.inputs[i].bits, opts.branches);
    double win = 0.0;
    for (const auto& b : br.branches)
      if (judge(spec, set.inputs[i].bits, detail::branch_outputs(spec, b))) win += b.probability;
    rep.per_input[i] = {set.inputs[i].bits, set.probability(i), win, br.pruned_probability};
  };
  const int workers = std::max(1, opts.workers);
  if (workers == 1 || set.inputs.size() < 2) {
    for (std::size_t i = 0; i < set.inputs.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < set.inputs.size(); i += workers) work(i);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
  double value = 0.0, pruned = 0.0;
  for (const auto& r : rep.per_input) {
    const double p = boost::rational_cast<double>(r.probability);
    value += p * r.win;
    pruned = std::max(pruned, r.pruned);
  }
  rep.value = std::clamp(value, 0.0, 1.0);
  rep.error_bound = pruned + 1e3 * std::numeric_limits<double>::epsilon();
  return rep;
}

// ---- parity and P-bit parity ----

// 1/2 (1 + 2 Re(c_0 c_1^*)) with c_0, c_1 the all-zero and all-one amplitudes.
inline double pqu_theorem1(const PureState& state) {
  if (state.local_dim() != 2) throw ParameterError("parity formula needs a qubit register");
  const cplx c0 = state.amplitude(0);
  const cplx c1 = state.amplitude(state.dimension() - 1);
  return 0.5 * (1.0 + 2.0 * (c0 * std::conj(c1)).real());
}

// GHZ stabilizer (prod (1+Z)/2 + prod (1-Z)/2) prod X over the marked and all sites.
inline std::vector<OperatorString> pbit_stabilizer_terms(int n, const std::vector<int>& marked) {
  OperatorString up, down;
  for (int s : marked) {
    up.multiply(s, SiteOperator::projector_plus());
    down.multiply(s, SiteOperator::projector_minus());
  }
  for (int i = 0; i < n; ++i) {
    up.multiply(i, SiteOperator::pauli_x());
    down.multiply(i, SiteOperator::pauli_x());
  }
  return {up, down};
}

inline double pqu_pbit_stabilizer(const PureState& state, const PBitParityGame& game) {
  validate(game);
  detail::require(game.alpha == Rational(1, 2), "stabilizer formula holds for uniform inputs (alpha = 1/2)");
  detail::require_qubits(state, game.n);
  double b = 0.0;
  for (const auto& t : pbit_stabilizer_terms(game.n, game.marked)) b += expectation(state, t).real();
  return 0.5 * (1.0 + b);
}

// Three marked sites: (4 + <P> + sum <Z_i Z_j P>)/8, P = prod X.
inline double pqu_three_bit_correlators(const PureState& state, const std::vector<int>& marked) {
  detail::require(marked.size() == 3, "three marked sites required");
  detail::require(state.local_dim() == 2, "qubit register required");
  const OperatorString parity = global_flip(state.num_sites());
  double acc = 4.0 + expectation(state, parity).real();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto zz = OperatorString::pauli("Z", marked[i]) * OperatorString::pauli("Z", marked[j]);
      acc += expectation(state, zz * parity).real();
    }
  return acc / 8.0;
}

// Parity-symmetric reduction (5 + sum <Z_i Z_j>)/8.
inline double pqu_three_bit_symmetric(const PureState& state, const std::vector<int>& marked) {
  detail::require(marked.size() == 3, "three marked sites required");
  double acc = 5.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      acc += expectation(state, OperatorString::pauli("Z", marked[i]) * OperatorString::pauli("Z", marked[j])).real();
  return acc / 8.0;
}

struct PBitClosedForm {
  double pqu = 0.0;
  double pcl = 0.0;
  double advantage = 0.0;
  double m_star = 0.0;
  double m_star_small_alpha = 0.0;
  double g_star = 0.0;
  double g_star_small_alpha = 0.0;
};

inline double pbit_m_star(double alpha) {
  detail::require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  return (std::sqrt(alpha * alpha + (1 - alpha) * (1 - alpha)) - (1 - alpha)) / alpha;
}

// Inverts m = (1 - g^2)^{1/8}.
inline double g_from_magnetization(double m) { return std::sqrt(std::max(0.0, 1.0 - std::pow(m, 8))); }

inline double pcl_pbit(int p, double alpha) {
  detail::require(p >= 1, "P must be positive");
  const double q = alpha * alpha + (1 - alpha) * (1 - alpha);
  const double den = 1.0 + std::pow(1 - 2 * alpha, p);
  if (p % 2 == 0) return 0.5 + std::pow(q, p / 2) / den;
  return 0.5 + std::pow(q, (p - 1) / 2) * (1 - alpha) / den;
}

inline PBitClosedForm pqu_pbit_closed_form(double m, int p, double alpha = 0.5) {
  detail::require(m >= 0.0 && m <= 1.0, "magnetization must lie in [0, 1]");
  detail::require(p >= 1, "P must be positive");
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie strictly inside (0, 1)");
  PBitClosedForm c;
  const double den = 1.0 + std::pow(1 - 2 * alpha, p);
  c.pqu = 0.5 + (std::pow(1 - alpha + alpha * m, p) + std::pow(1 - alpha - alpha * m, p)) / (2.0 * den);
  c.pcl = pcl_pbit(p, alpha);
  c.advantage = c.pqu - c.pcl;
  c.m_star = pbit_m_star(alpha);
  c.m_star_small_alpha = alpha / 2;
  c.g_star = g_from_magnetization(c.m_star);
  c.g_star_small_alpha = 1.0 - std::pow(alpha, 8) / 512.0;
  return c;
}

// Large-P form at alpha = 1/2 with the asymptotic magnetization, in terms of g.
inline double pqu_three_bit_asymptotic(double g) {
  return 0.625 + 0.375 * std::pow(std::max(0.0, 1.0 - g * g), 0.25);
}

inline double three_bit_threshold() { return std::sqrt(80.0 / 81.0); }

// ---- Boyer ----

namespace detail {

inline void require_boyer_register(const PureState& s, int m) {
  if (s.local_dim() != m) throw ParameterError("state local dimension does not equal M");
}

}  // namespace detail

// Block form: (1/M) [sum_{min=0,max=M-1} |c_y|^2 + sum_{min=0,max<M-1} |sum_l c_{y+l}|^2].
inline double pqu_theorem2(const PureState& state, int m) {
  detail::require_boyer_register(state, m);
  const int n = state.num_sites();
  double acc = 0.0;
  std::size_t rep = 0;
  for (int s = 0; s < n; ++s) rep = rep * m + 1;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const auto d = state.digits(i);
    const int lo = *std::min_element(d.begin(), d.end());
    const int hi = *std::max_element(d.begin(), d.end());
    if (lo != 0) continue;
    if (hi == m - 1) {
      acc += std::norm(state.amplitude(i));
    } else {
      cplx s = 0.0;
      for (int l = 0; l <= m - 1 - hi; ++l) s += state.amplitude(i + l * rep);
      acc += std::norm(s);
    }
  }
  return acc / m;
}

// Cat-state fidelity sum: (1/M)(1 + sum_l sum_{y in {0..M-1-l}^N} 2 Re(c_y c_{y+l}^*)).
inline double pqu_theorem2_cat(const PureState& state, int m) {
  detail::require_boyer_register(state, m);
  const int n = state.num_sites();
  std::size_t rep = 0;
  for (int s = 0; s < n; ++s) rep = rep * m + 1;
  double acc = 1.0;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const auto d = state.digits(i);
    const int hi = *std::max_element(d.begin(), d.end());
    for (int l = 1; l <= m - 1 - hi; ++l)
      acc += 2.0 * (state.amplitude(i) * std::conj(state.amplitude(i + l * rep))).real();
  }
  return acc / m;
}

// GHZ over the first m_small levels of an M-level register.
inline PureState embedded_ghz(int n, int m_small, int m) {
  detail::require(m_small >= 2 && m_small <= m, "need 2 <= M' <= M");
  const std::size_t dim = register_dimension(n, m);
  std::size_t rep = 0;
  for (int s = 0; s < n; ++s) rep = rep * m + 1;
  Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
  for (int k = 0; k < m_small; ++k) a[static_cast<Eigen::Index>(k * rep)] = 1.0;
  return PureState::normalized(n, m, std::move(a));
}

// ---- polygon ----

inline OperatorString cluster_sublattice_product(int num_players, int parity) {
  OperatorString s;
  for (int p = 0; p < num_players; ++p) s.multiply(2 * p + parity, SiteOperator::pauli_x());
  return s;
}

// prod X on the first qubit of every player, and on the second.
inline OperatorString cluster_ua(int num_players) { return cluster_sublattice_product(num_players, 0); }
inline OperatorString cluster_ub(int num_players) { return cluster_sublattice_product(num_players, 1); }

// Product of the edge strings of a matching times U_a.
inline OperatorString matching_stabilizer(const PolygonGame& game, const Matching& m) {
  OperatorString s;
  const int p = game.p();
  for (int e : m.edges) s = s * cluster_edge_string(game.n, game.marked[e], game.marked[(e + 1) % p]);
  return s * cluster_ua(game.n);
}

// Per input: <prod_c (1 + O_c)/2> over the global conditions of that input.
inline std::vector<double> polygon_input_wins(const PureState& state, const PolygonGame& game) {
  validate(game);
  detail::require_qubits(state, 2 * game.n);
  const auto set = enumerate_inputs(game);
  const OperatorString ua = cluster_ua(game.n), ub = cluster_ub(game.n);
  const int n = state.num_sites();
  std::vector<double> wins;
  for (const auto& in : set.inputs) {
    std::vector<OperatorString> conds{ub};
    std::vector<int> local(game.p());
    for (int k = 0; k < game.p(); ++k) local[k] = in.bits[game.marked[k]];
    if (std::all_of(local.begin(), local.end(), [](int v) { return v == 0; })) conds.push_back(ua);
    for (const auto& m : matchings_for_input(game.p(), local)) conds.push_back(matching_stabilizer(game, m));
    Amplitudes v = state.amplitudes(), img;
    for (const auto& c : conds) {
      apply_string(c, n, 2, v, img);
      v = 0.5 * (v + img);
    }
    wins.push_back(v.squaredNorm());
  }
  return wins;
}

inline double pqu_polygon_stabilizer(const PureState& state, const PolygonGame& game) {
  const auto w = polygon_input_wins(state, game);
  double acc = 0.0;
  for (double x : w) acc += x;
  return acc / static_cast<double>(w.size());
}

// 1 - (L_P - 1)/2^{P+1} + 2^{-(P+1)} sum_M <U_M>, for states with <U_a> = <U_b> = 1; odd P.
inline double pqu_polygon_symmetric(const PureState& state, const PolygonGame& game) {
  validate(game);
  detail::require_qubits(state, 2 * game.n);
  const int p = game.p();
  detail::require(p % 2 == 1, "matching-sum formula needs odd P (even P has a doubly matched input)");
  double sum = 0.0;
  for (int r = 1; r <= p / 2; ++r)
    for (const auto& m : cycle_matchings(p, r)) sum += expectation(state, matching_stabilizer(game, m)).real();
  const double scale = std::ldexp(1.0, -(p + 1));
  return 1.0 - (static_cast<double>(lucas_number(p)) - 1.0) * scale + sum * scale;
}

struct PolygonEstimate {
  double value = 0.0;
  double matching_sum = 0.0;  // sum_r |M_r| S^r
  double criterion = 0.0;     // (1 + sqrt(1 + 4S)) / 2
  double golden = std::numbers::phi;
  bool advantage_lost_large_p = false;
};

// 1 - (L_P - S^{P/2} L_P(S^{-1/2})) / 2^{P+1}.
inline PolygonEstimate pqu_polygon_estimate(double s, int p) {
  detail::require(p >= 3, "polygon needs P >= 3");
  detail::require(s >= 0.0 && s <= 1.0, "string order must lie in [0, 1]");
  PolygonEstimate e;
  for (int r = 0; r <= p / 2; ++r) e.matching_sum += static_cast<double>(matching_count(p, r)) * std::pow(s, r);
  const double lp = static_cast<double>(lucas_number(p));
  const double scale = std::ldexp(1.0, -(p + 1));
  if (s == 0.0) {
    e.value = 1.0 - (lp - 1.0) * scale;
  } else {
    e.value = 1.0 - (lp - std::pow(s, 0.5 * p) * lucas_polynomial(p, 1.0 / std::sqrt(s))) * scale;
  }
  e.criterion = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s));
  e.advantage_lost_large_p = e.criterion < e.golden;
  return e;
}

// ---- toric ----

// 1/2 + 2^{-T} sum over even inputs of <prod W_i^{a_i} V>.
inline double pqu_toric_exact(const PureState& state, const ToricGame& game) {
  validate(game);
  const auto& lat = game.lattice;
  detail::require_qubits(state, lat.num_bonds());
  const int t = static_cast<int>(game.teams.size());
  const auto v = lat.dual_wilson(lat.row_dual_loop(game.dual_row));
  double acc = 0.0;
  for (const auto& in : enumerate_inputs(game).inputs) {
    OperatorString op;
    for (int i = 0; i < t; ++i)
      if (in.bits[i]) op = op * lat.wilson(lat.column_loop(game.teams[i]));
    acc += expectation(state, op * v).real();
  }
  return 0.5 + std::ldexp(acc, -t);
}

// Cluster-decomposed form with a single Wilson-loop expectation W.
inline double pqu_toric_wilson_form(double w, int t) {
  return 0.5 * (1.0 + std::pow(0.5 * (1 + w), t) + std::pow(0.5 * (1 - w), t));
}

inline double pcl_toric(int t) { return 0.5 + std::ldexp(1.0, -((t + 1) / 2)); }

struct ToricPerturbative {
  double wilson = 1.0;            // exp(-2 Ly (hX / 4K)^2)
  double dual = 1.0;              // exp(-2 Lx (hZ / 4K')^2)
  double wilson_threshold = std::numbers::sqrt2 - 1.0;
  double dual_threshold = 0.0;    // 2^{1 - ceil(T/2)}
  double team_spacing_bound = std::numeric_limits<double>::infinity();  // 4 log2 (K'/hZ)^2
  double hx_bound = 0.0;          // 4K sqrt(|log(sqrt2 - 1)| / (2 Ly))
  double hx_window = 0.0;         // Ly^{-1/2}
  double hz_window = 0.0;         // Lx^{-1/2}
  double pqu_wilson_form = 1.0;
  double pqu_dual_form = 1.0;
  double pcl = 0.0;
};

inline ToricPerturbative pqu_toric_perturbative(const ToricSpec& spec, int t) {
  if (t < 3) throw ParameterError("toric game needs T >= 3 teams");
  detail::require(spec.k > 0 && spec.kprime > 0, "toric couplings must be positive");
  const double lx = spec.lattice.lx(), ly = spec.lattice.ly();
  ToricPerturbative r;
  const double ax = spec.hx / (4 * spec.k), az = spec.hz / (4 * spec.kprime);
  r.wilson = std::exp(-2.0 * ly * ax * ax);
  r.dual = std::exp(-2.0 * lx * az * az);
  r.dual_threshold = std::ldexp(1.0, 1 - (t + 1) / 2);
  if (spec.hz != 0.0) {
    const double ratio = spec.kprime / spec.hz;
    r.team_spacing_bound = 4.0 * std::numbers::ln2 * ratio * ratio;
  }
  r.hx_bound = 4.0 * spec.k * std::sqrt(std::abs(std::log(std::numbers::sqrt2 - 1.0)) / (2.0 * ly));
  r.hx_window = 1.0 / std::sqrt(ly);
  r.hz_window = 1.0 / std::sqrt(lx);
  r.pqu_wilson_form = pqu_toric_wilson_form(r.wilson, t);
  r.pqu_dual_form = 0.5 * (1.0 + r.dual);
  r.pcl = pcl_toric(t);
  return r;
}

// ---- dispatch ----

// Closed-form value when the game family has one.
inline std::optional<double> analytic_win_probability(const PureState& state, const GameSpec& spec) {
  if (std::holds_alternative<ParityGame>(spec)) return pqu_theorem1(state);
  if (const auto* g = std::get_if<PBitParityGame>(&spec)) {
    if (g->alpha != Rational(1, 2)) return std::nullopt;
    return pqu_pbit_stabilizer(state, *g);
  }
  if (const auto* g = std::get_if<BoyerGame>(&spec)) {
    if (g->d != g->m) return std::nullopt;
    return pqu_theorem2(state, g->m);
  }
  if (const auto* g = std::get_if<PolygonGame>(&spec)) return pqu_polygon_stabilizer(state, *g);
  return pqu_toric_exact(state, std::get<ToricGame>(spec));
}

}  // namespace nlgames
