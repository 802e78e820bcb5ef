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
#include <bit>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "nlgames/eigensolver.hpp"
#include "nlgames/error.hpp"
#include "nlgames/freefermion.hpp"
#include "nlgames/statevec.hpp"
#include "nlgames/toric_lattice.hpp"

namespace nlgames {

// -J sum Z_j Z_{j+1} - Gamma sum X_j - h sum Z_j, periodic.
struct IsingSpec {
  int n = 2;
  double j = 1.0;
  double gamma = 0.0;
  double h = 0.0;
};

// -J/2 sum (C_j^dag C_{j+1} + h.c.) - Gamma/2 sum (S_j + S_j^dag) - h/2 sum (C_j + C_j^dag).
struct ClockSpec {
  int n = 2;
  int m = 3;
  double j = 1.0;
  double gamma = 0.0;
  double h = 0.0;
};

// -K sum_p A_p - K' sum_s B_s - hX sum X_b - hZ sum Z_b.
struct ToricSpec {
  ToricLattice lattice{3, 2};
  double k = 1.0;
  double kprime = 1.0;
  double hx = 0.0;
  double hz = 0.0;
};

// -sum_i Z_{i-1} X_i Z_{i+1} - lambda sum_i X_i on 2N periodic qubits.
struct ClusterChainSpec {
  int num_players = 3;
  double lambda = 0.0;
};

using ModelSpec = std::variant<IsingSpec, ClockSpec, ToricSpec, ClusterChainSpec>;

class Hamiltonian {
 public:
  Hamiltonian(int num_sites, int local_dim, std::vector<OperatorString> terms)
      : n_(num_sites),
        m_(local_dim),
        dim_(register_dimension(num_sites, local_dim)),
        terms_(std::make_shared<const std::vector<OperatorString>>(std::move(terms))) {
    for (const auto& t : *terms_) {
      for (const auto& [site, f] : t.factors()) {
        detail::require(site < n_, "Hamiltonian term acts outside the register");
        detail::require(f.dim() == m_, "Hamiltonian term has the wrong local dimension");
      }
    }
  }

  int num_sites() const { return n_; }
  int local_dim() const { return m_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<OperatorString>& terms() const { return *terms_; }

  void apply(const Amplitudes& in, Amplitudes& out) const {
    out = Amplitudes::Zero(in.size());
    for (const auto& t : *terms_) apply_string(t, n_, m_, in, out, true);
  }

  HermitianOperator as_operator() const {
    HermitianOperator op;
    op.dim = dim_;
    auto terms = terms_;
    const int n = n_, m = m_;
    op.apply = [terms, n, m](const Amplitudes& in, Amplitudes& out) {
      out = Amplitudes::Zero(in.size());
      for (const auto& t : *terms) apply_string(t, n, m, in, out, true);
    };
    return op;
  }

  Eigen::MatrixXcd dense() const {
    if (dim_ > 4096) throw CapacityError("dense Hamiltonian limited to dimension 4096");
    return detail::materialize(as_operator());
  }

 private:
  int n_;
  int m_;
  std::size_t dim_;
  std::shared_ptr<const std::vector<OperatorString>> terms_;
};

// String operator joining players p and q of the cluster chain (0-based, cyclic p -> q):
// Z_{2p} X_{2p+1} (prod over players strictly between: X_{2l+1}) Z_{2q}.
inline OperatorString cluster_edge_string(int num_players, int p, int q) {
  detail::require(num_players >= 3, "cluster chain needs at least three players");
  detail::require(p >= 0 && p < num_players && q >= 0 && q < num_players && p != q,
                  "edge endpoints out of range");
  OperatorString s = OperatorString::pauli("ZX", 2 * p);
  for (int l = (p + 1) % num_players; l != q; l = (l + 1) % num_players)
    s = s * OperatorString::pauli("X", 2 * l + 1);
  return s * OperatorString::pauli("Z", 2 * q);
}

// Z_{i-1} X_i Z_{i+1} on a ring of num_qubits.
inline OperatorString cluster_stabilizer(int num_qubits, int i) {
  const int l = (i - 1 + num_qubits) % num_qubits;
  const int r = (i + 1) % num_qubits;
  return OperatorString::pauli("Z", l) * OperatorString::pauli("X", i) * OperatorString::pauli("Z", r);
}

namespace detail {

inline Hamiltonian build(const IsingSpec& s) {
  require(s.n >= 2, "Ising chain needs N >= 2");
  std::vector<OperatorString> t;
  for (int i = 0; i < s.n; ++i) {
    const int r = (i + 1) % s.n;
    t.push_back(OperatorString::pauli("Z", i, -s.j) * OperatorString::pauli("Z", r));
  }
  for (int i = 0; i < s.n; ++i) t.push_back(OperatorString::pauli("X", i, -s.gamma));
  for (int i = 0; i < s.n; ++i) t.push_back(OperatorString::pauli("Z", i, -s.h));
  return Hamiltonian(s.n, 2, std::move(t));
}

inline Hamiltonian build(const ClockSpec& s) {
  require(s.n >= 2, "clock chain needs N >= 2");
  require(s.m >= 2, "clock model needs M >= 2");
  const auto c = SiteOperator::clock(s.m);
  const auto cd = c.adjoint();
  const auto sh = SiteOperator::shift(s.m);
  const auto shd = sh.adjoint();
  std::vector<OperatorString> t;
  for (int i = 0; i < s.n; ++i) {
    const int r = (i + 1) % s.n;
    t.push_back(OperatorString(i, cd, -0.5 * s.j) * OperatorString(r, c));
    t.push_back(OperatorString(r, cd, -0.5 * s.j) * OperatorString(i, c));
  }
  for (int i = 0; i < s.n; ++i) {
    t.emplace_back(i, sh, -0.5 * s.gamma);
    t.emplace_back(i, shd, -0.5 * s.gamma);
  }
  for (int i = 0; i < s.n; ++i) {
    t.emplace_back(i, c, -0.5 * s.h);
    t.emplace_back(i, cd, -0.5 * s.h);
  }
  return Hamiltonian(s.n, s.m, std::move(t));
}

inline Hamiltonian build(const ToricSpec& s) {
  require(s.k > 0 && s.kprime > 0, "toric couplings K, K' must be positive");
  const auto& lat = s.lattice;
  std::vector<OperatorString> t;
  for (int y = 0; y < lat.ly(); ++y)
    for (int x = 0; x < lat.lx(); ++x) t.push_back(-s.k * lat.plaquette_operator(x, y));
  for (int y = 0; y < lat.ly(); ++y)
    for (int x = 0; x < lat.lx(); ++x) t.push_back(-s.kprime * lat.star_operator(x, y));
  for (int b = 0; b < lat.num_bonds(); ++b) t.push_back(OperatorString::pauli("X", b, -s.hx));
  for (int b = 0; b < lat.num_bonds(); ++b) t.push_back(OperatorString::pauli("Z", b, -s.hz));
  return Hamiltonian(lat.num_bonds(), 2, std::move(t));
}

inline Hamiltonian build(const ClusterChainSpec& s) {
  require(s.num_players >= 3, "cluster chain needs N >= 3 players");
  const int q = 2 * s.num_players;
  std::vector<OperatorString> t;
  for (int i = 0; i < q; ++i) t.push_back(-1.0 * cluster_stabilizer(q, i));
  for (int i = 0; i < q; ++i) t.push_back(OperatorString::pauli("X", i, -s.lambda));
  return Hamiltonian(q, 2, std::move(t));
}

}  // namespace detail

inline Hamiltonian build_hamiltonian(const ModelSpec& spec) {
  return std::visit([](const auto& s) { return detail::build(s); }, spec);
}

struct Symmetry {
  OperatorString op;
  cplx eigenvalue{1.0, 0.0};
};

struct GroundStateOptions {
  int k = 1;
  std::optional<Symmetry> sector;
  EigenOptions eigen;
};

struct GroundStateResult {
  std::vector<double> energies;
  std::vector<PureState> states;
  EigenMethod method = EigenMethod::Dense;
  std::vector<double> residuals;
};

inline GroundStateResult ground_state(const Hamiltonian& ham, const GroundStateOptions& opts = {}) {
  detail::require(opts.k >= 1, "ground_state needs k >= 1");
  const HermitianOperator full = ham.as_operator();
  EigenResult er;
  std::optional<SymmetrySector> sector;
  if (opts.sector) {
    sector.emplace(opts.sector->op, opts.sector->eigenvalue, ham.num_sites(), ham.local_dim());
    er = lowest_eigenpairs(sector->project(full), opts.k, opts.eigen);
  } else {
    er = lowest_eigenpairs(full, opts.k, opts.eigen);
  }
  GroundStateResult res;
  res.energies = er.energies;
  res.method = er.method;
  Amplitudes hv;
  for (int j = 0; j < opts.k; ++j) {
    Amplitudes v = er.vectors.col(j);
    if (sector) v = sector->embed(v);
    // fix the global phase: largest component real positive
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::abs(v[big]) / v[big];
    full.apply(v, hv);
    const double r = (hv - er.energies[j] * v).norm();
    res.residuals.push_back(r);
    res.states.push_back(PureState::normalized(ham.num_sites(), ham.local_dim(), std::move(v)));
  }
  for (std::size_t j = 0; j < res.residuals.size(); ++j) {
    if (res.residuals[j] > 1e-8) {
      std::ostringstream msg;
      msg << "ground state residual " << res.residuals[j] << " exceeds 1e-8 for state " << j;
      throw ConvergenceError(msg.str());
    }
  }
  return res;
}

inline OperatorString global_flip(int n) {
  OperatorString p;
  for (int i = 0; i < n; ++i) p = p * OperatorString::pauli("X", i);
  return p;
}

inline OperatorString global_shift(int n, int m) {
  OperatorString p;
  for (int i = 0; i < n; ++i) p.multiply(i, SiteOperator::shift(m));
  return p;
}

inline constexpr double kMinCoupling = 1e-6;

// Ground state used for game evaluation. The zero-longitudinal-field Ising and clock
// chains are solved in the symmetric sector, which holds the unique ground state.
inline GroundStateResult model_ground_state(const ModelSpec& spec, int k = 1,
                                            const EigenOptions& eig = {}) {
  GroundStateOptions opts;
  opts.k = k;
  opts.eigen = eig;
  if (const auto* s = std::get_if<IsingSpec>(&spec)) {
    if (s->h == 0.0) {
      if (!(s->gamma >= kMinCoupling * std::abs(s->j)))
        throw ParameterError("transverse field below the supported floor g = 1e-6");
      opts.sector = Symmetry{global_flip(s->n), 1.0};
    }
  } else if (const auto* c = std::get_if<ClockSpec>(&spec)) {
    if (c->h == 0.0) {
      if (!(c->gamma >= kMinCoupling * std::abs(c->j)))
        throw ParameterError("transverse field below the supported floor g = 1e-6");
      opts.sector = Symmetry{global_shift(c->n, c->m), 1.0};
    }
  }
  return ground_state(build_hamiltonian(spec), opts);
}

struct ProjectedState {
  PureState state;
  double projection_norm = 0.0;
  std::string warning;
};

// Normalized projection of reference onto the span of the computed states.
inline ProjectedState project_onto_span(const GroundStateResult& result, const PureState& reference) {
  detail::require(!result.states.empty(), "no states to project onto");
  Amplitudes acc = Amplitudes::Zero(reference.amplitudes().size());
  for (const auto& s : result.states) acc += s.amplitudes() * inner_product(s, reference);
  const double nrm = acc.norm();
  if (!(nrm > 1e-12)) throw ParameterError("reference state is orthogonal to the computed span");
  ProjectedState out{PureState::normalized(reference.num_sites(), reference.local_dim(), acc), nrm, ""};
  if (nrm < 0.5)
    out.warning = "projection norm below 0.5: ground space has rotated outside the perturbative regime";
  return out;
}

inline ProjectedState adiabatic_toric_state(const GroundStateResult& result, const ToricLattice& lattice) {
  detail::require(result.states.size() == 4, "adiabatic toric state needs the four lowest states");
  detail::require(result.states.front().num_sites() == lattice.num_bonds(),
                  "states do not match the lattice");
  return project_onto_span(result, lattice.game_state());
}

enum class MeanFieldKind { Broken, EvenCat };

// Self-consistent magnetization cos(theta) of the product mean-field state.
inline double mean_field_magnetization(double g, double h) {
  detail::require(g >= 0.0, "transverse coupling must be non-negative");
  return freefermion::meanfield_m(g, h);
}

// g = Gamma / J and h in units of J.
inline PureState mean_field_state(MeanFieldKind kind, int n, double g, double h) {
  detail::require(n >= 1, "mean-field state needs at least one site");
  const std::size_t dim = register_dimension(n, 2);
  if (kind == MeanFieldKind::EvenCat) {
    if (h != 0.0) throw ParameterError("even-cat mean-field state requires h = 0");
    if (g > 1.0) throw ParameterError("no ferromagnetic mean-field solution for g > 1");
  }
  const double m = mean_field_magnetization(g, h);
  const double theta = std::acos(std::clamp(m, -1.0, 1.0));
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const bool flipped = h < 0.0;
  Amplitudes a(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const int ones = std::popcount(i);
    const int zeros = n - ones;
    const double up = std::pow(c, zeros) * std::pow(s, ones);
    const double down = std::pow(s, zeros) * std::pow(c, ones);
    if (kind == MeanFieldKind::Broken)
      a[static_cast<Eigen::Index>(i)] = flipped ? down : up;
    else
      a[static_cast<Eigen::Index>(i)] = up + down;
  }
  return PureState::normalized(n, 2, std::move(a));
}

struct PairCorrelation {
  int i;
  int j;
  double value;
};

struct OrderRequest {
  // Marked players of the inscribed polygon (cluster chain); empty means every player.
  std::vector<int> marked;
  // Extra loops (bond lists) on the toric lattice.
  std::vector<std::vector<int>> wilson_loops;
  std::vector<std::vector<int>> dual_loops;
};

struct OrderParameters {
  std::vector<double> magnetization;
  std::vector<PairCorrelation> correlations;
  std::vector<double> string_order;
  std::vector<double> wilson;
  std::vector<double> dual;
};

namespace detail {

inline double real_expectation(const PureState& s, const OperatorString& op) {
  return expectation(s, op).real();
}

}  // namespace detail

inline OrderParameters order_parameters(const PureState& state, const ModelSpec& spec,
                                        const OrderRequest& req = {}) {
  OrderParameters out;
  if (const auto* is = std::get_if<IsingSpec>(&spec)) {
    detail::require(state.num_sites() == is->n && state.local_dim() == 2, "state does not fit the model");
    for (int i = 0; i < is->n; ++i)
      out.magnetization.push_back(detail::real_expectation(state, OperatorString::pauli("Z", i)));
    for (int i = 0; i < is->n; ++i)
      for (int j = i + 1; j < is->n; ++j)
        out.correlations.push_back(
            {i, j, detail::real_expectation(state, OperatorString::pauli("Z", i) * OperatorString::pauli("Z", j))});
  } else if (const auto* cs = std::get_if<ClockSpec>(&spec)) {
    detail::require(state.num_sites() == cs->n && state.local_dim() == cs->m, "state does not fit the model");
    const auto c = SiteOperator::clock(cs->m);
    const auto cd = c.adjoint();
    for (int i = 0; i < cs->n; ++i) {
      const OperatorString op = OperatorString(i, c, 0.5);
      out.magnetization.push_back(2.0 * detail::real_expectation(state, op));
    }
    for (int i = 0; i < cs->n; ++i)
      for (int j = i + 1; j < cs->n; ++j)
        out.correlations.push_back(
            {i, j, detail::real_expectation(state, OperatorString(i, cd) * OperatorString(j, c))});
  } else if (const auto* ts = std::get_if<ToricSpec>(&spec)) {
    const auto& lat = ts->lattice;
    detail::require(state.num_sites() == lat.num_bonds() && state.local_dim() == 2,
                    "state does not fit the lattice");
    for (int x = 0; x < lat.lx(); ++x)
      out.wilson.push_back(detail::real_expectation(state, lat.wilson(lat.column_loop(x))));
    for (int y = 0; y < lat.ly(); ++y)
      out.dual.push_back(detail::real_expectation(state, lat.dual_wilson(lat.row_dual_loop(y))));
    for (const auto& loop : req.wilson_loops)
      out.wilson.push_back(detail::real_expectation(state, lat.wilson(loop)));
    for (const auto& loop : req.dual_loops)
      out.dual.push_back(detail::real_expectation(state, lat.dual_wilson(loop)));
  } else {
    const auto& cc = std::get<ClusterChainSpec>(spec);
    const int n = cc.num_players;
    detail::require(state.num_sites() == 2 * n && state.local_dim() == 2, "state does not fit the chain");
    std::vector<int> marked = req.marked;
    if (marked.empty())
      for (int i = 0; i < n; ++i) marked.push_back(i);
    detail::require(marked.size() >= 2, "string order needs at least two marked players");
    for (std::size_t e = 0; e < marked.size(); ++e) {
      const int p = marked[e];
      const int q = marked[(e + 1) % marked.size()];
      out.string_order.push_back(detail::real_expectation(state, cluster_edge_string(n, p, q)));
    }
    for (int i = 0; i < 2 * n; ++i)
      out.magnetization.push_back(detail::real_expectation(state, OperatorString::pauli("Z", i)));
  }
  return out;
}

}  // namespace nlgames
