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

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlgames/error.hpp"

namespace nlgames {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;

inline constexpr std::size_t kMaxAmplitudes = std::size_t{1} << 22;

// Number of basis states of an n-site register with local dimension m.
inline std::size_t register_dimension(int num_sites, int local_dim) {
  detail::require(num_sites >= 1, "register needs at least one site");
  detail::require(local_dim >= 2, "local dimension must be at least 2");
  std::size_t dim = 1;
  for (int s = 0; s < num_sites; ++s) {
    dim *= static_cast<std::size_t>(local_dim);
    if (dim > kMaxAmplitudes) {
      throw CapacityError("register " + std::to_string(local_dim) + "^" +
                          std::to_string(num_sites) + " exceeds 2^22 amplitudes");
    }
  }
  return dim;
}

class SiteOperator {
 public:
  explicit SiteOperator(Eigen::MatrixXcd matrix, std::string label = "")
      : mat_(std::move(matrix)), label_(std::move(label)) {
    detail::require(mat_.rows() == mat_.cols() && mat_.rows() >= 2,
                    "site operator must be square with dimension >= 2");
    analyse();
  }

  static SiteOperator identity(int m) {
    return SiteOperator(Eigen::MatrixXcd::Identity(m, m), "I");
  }
  static SiteOperator pauli_x() {
    Eigen::MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    return SiteOperator(x, "X");
  }
  static SiteOperator pauli_y() {
    Eigen::MatrixXcd y(2, 2);
    y << 0, cplx(0, -1), cplx(0, 1), 0;
    return SiteOperator(y, "Y");
  }
  static SiteOperator pauli_z() {
    Eigen::MatrixXcd z(2, 2);
    z << 1, 0, 0, -1;
    return SiteOperator(z, "Z");
  }
  static SiteOperator hadamard() {
    Eigen::MatrixXcd h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    return SiteOperator(h, "H");
  }
  // Z^{a/2} = diag(1, i^a).
  static SiteOperator phase_power(int a) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2, 2);
    p(0, 0) = 1.0;
    p(1, 1) = ipow(a);
    return SiteOperator(p, "Zpow" + std::to_string(a));
  }
  // C|k> = w^k |k>, w = exp(2 pi i / m).
  static SiteOperator clock(int m) { return clock_power(m, 1.0); }
  // C^x with the principal branch: diag(exp(2 pi i x k / m)).
  static SiteOperator clock_power(int m, double x) {
    detail::require(m >= 2, "clock dimension must be at least 2");
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < m; ++k) c(k, k) = root_of_unity(x * k, m);
    return SiteOperator(c, "C");
  }
  // S|k> = |k+1 mod m>.
  static SiteOperator shift(int m) {
    detail::require(m >= 2, "shift dimension must be at least 2");
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < m; ++k) s((k + 1) % m, k) = 1.0;
    return SiteOperator(s, "S");
  }
  // W_{y,k} = w^{yk} / sqrt(m).
  static SiteOperator fourier(int m) {
    detail::require(m >= 2, "fourier dimension must be at least 2");
    Eigen::MatrixXcd w(m, m);
    const double r = 1.0 / std::sqrt(static_cast<double>(m));
    for (int y = 0; y < m; ++y)
      for (int k = 0; k < m; ++k) w(y, k) = r * root_of_unity((y * k) % m, m);
    return SiteOperator(w, "W");
  }
  static SiteOperator projector_plus() {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2, 2);
    p(0, 0) = 1.0;
    return SiteOperator(p, "P+");
  }
  static SiteOperator projector_minus() {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2, 2);
    p(1, 1) = 1.0;
    return SiteOperator(p, "P-");
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  const std::string& label() const { return label_; }

  bool is_unitary(double tol = 1e-12) const {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim(), dim());
    return ((mat_.adjoint() * mat_) - id).cwiseAbs().maxCoeff() <= tol;
  }
  bool is_hermitian(double tol = 1e-12) const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }
  SiteOperator adjoint() const {
    return SiteOperator(mat_.adjoint(), label_.empty() ? "" : label_ + "^dag");
  }
  friend SiteOperator operator*(const SiteOperator& a, const SiteOperator& b) {
    detail::require(a.dim() == b.dim(), "site operator dimension mismatch");
    return SiteOperator(a.mat_ * b.mat_, a.label_ + b.label_);
  }

  // At most one nonzero entry per column.
  bool monomial() const { return monomial_; }
  // Column k maps to row targets()[k] with weight phases()[k].
  const std::vector<int>& targets() const { return targets_; }
  const std::vector<cplx>& phases() const { return phases_; }

  static cplx root_of_unity(double k, int m) {
    const double t = 2.0 * std::numbers::pi * k / m;
    return {std::cos(t), std::sin(t)};
  }
  static cplx ipow(int a) {
    switch (((a % 4) + 4) % 4) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }

 private:
  void analyse() {
    const int m = dim();
    monomial_ = true;
    targets_.assign(m, 0);
    phases_.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
      int nz = 0;
      targets_[k] = k;
      for (int r = 0; r < m; ++r) {
        if (mat_(r, k) != cplx(0.0, 0.0)) {
          ++nz;
          targets_[k] = r;
          phases_[k] = mat_(r, k);
        }
      }
      if (nz > 1) monomial_ = false;
    }
    if (!monomial_) {
      targets_.clear();
      phases_.clear();
    }
  }

  Eigen::MatrixXcd mat_;
  std::string label_;
  bool monomial_ = false;
  std::vector<int> targets_;
  std::vector<cplx> phases_;
};

class OperatorString {
 public:
  OperatorString() = default;
  explicit OperatorString(cplx coefficient) : coef_(coefficient) {}
  OperatorString(int site, SiteOperator op, cplx coefficient = 1.0) : coef_(coefficient) {
    multiply(site, std::move(op));
  }

  // Pauli pattern such as "ZXZ" starting at first_site; 'I' leaves a site empty.
  static OperatorString pauli(std::string_view pattern, int first_site = 0, cplx coefficient = 1.0) {
    OperatorString s(coefficient);
    for (std::size_t k = 0; k < pattern.size(); ++k) {
      const int site = first_site + static_cast<int>(k);
      switch (pattern[k]) {
        case 'I': break;
        case 'X': s.multiply(site, SiteOperator::pauli_x()); break;
        case 'Y': s.multiply(site, SiteOperator::pauli_y()); break;
        case 'Z': s.multiply(site, SiteOperator::pauli_z()); break;
        default: throw ParameterError("unknown Pauli letter in pattern");
      }
    }
    return s;
  }
  // Same Pauli on every listed site.
  static OperatorString pauli_on(char letter, std::span<const int> sites, cplx coefficient = 1.0) {
    OperatorString s(coefficient);
    const std::string one(1, letter);
    for (int site : sites) s = s * pauli(one, site);
    return s;
  }

  // Replaces the factor at site by factor * op (op acts first).
  OperatorString& multiply(int site, SiteOperator op) {
    detail::require(site >= 0, "negative site index");
    auto it = factors_.find(site);
    if (it == factors_.end()) {
      factors_.emplace(site, std::move(op));
    } else {
      it->second = it->second * op;
    }
    return *this;
  }

  cplx coefficient() const { return coef_; }
  OperatorString& scale(cplx c) {
    coef_ *= c;
    return *this;
  }
  const std::map<int, SiteOperator>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  int max_site() const { return factors_.empty() ? -1 : factors_.rbegin()->first; }

  bool monomial() const {
    for (const auto& [site, op] : factors_)
      if (!op.monomial()) return false;
    return true;
  }

  OperatorString adjoint() const {
    OperatorString s(std::conj(coef_));
    for (const auto& [site, op] : factors_) s.factors_.emplace(site, op.adjoint());
    return s;
  }

  friend OperatorString operator*(const OperatorString& a, const OperatorString& b) {
    OperatorString s = a;
    s.coef_ *= b.coef_;
    for (const auto& [site, op] : b.factors_) s.multiply(site, op);
    return s;
  }
  friend OperatorString operator*(cplx c, OperatorString s) {
    s.coef_ *= c;
    return s;
  }

 private:
  cplx coef_{1.0, 0.0};
  std::map<int, SiteOperator> factors_;
};

namespace detail {

inline std::vector<std::size_t> strides(int n, int m) {
  std::vector<std::size_t> st(n);
  std::size_t s = 1;
  for (int k = n - 1; k >= 0; --k) {
    st[k] = s;
    s *= static_cast<std::size_t>(m);
  }
  return st;
}

// out = M_site * in, with M acting on one tensor factor.
inline void apply_site_matrix(int n, int m, int site, const Eigen::MatrixXcd& mat,
                              const Amplitudes& in, Amplitudes& out) {
  const std::size_t dim = static_cast<std::size_t>(in.size());
  const std::size_t stride = strides(n, m)[site];
  const std::size_t block = stride * m;
  out.resize(in.size());
  Eigen::VectorXcd g(m), r(m);
  for (std::size_t base = 0; base < dim; base += block) {
    for (std::size_t low = 0; low < stride; ++low) {
      for (int k = 0; k < m; ++k) g[k] = in[base + k * stride + low];
      r.noalias() = mat * g;
      for (int k = 0; k < m; ++k) out[base + k * stride + low] = r[k];
    }
  }
}

}  // namespace detail

// out (+)= op * in on an n-site register of local dimension m.
inline void apply_string(const OperatorString& op, int n, int m, const Amplitudes& in,
                         Amplitudes& out, bool accumulate = false) {
  const std::size_t dim = static_cast<std::size_t>(in.size());
  if (!accumulate) out = Amplitudes::Zero(in.size());
  for (const auto& [site, f] : op.factors()) {
    if (site >= n) throw ParameterError("operator site " + std::to_string(site) + " out of range");
    if (f.dim() != m) throw ParameterError("operator dimension does not match register");
  }
  const cplx coef = op.coefficient();
  if (op.empty()) {
    out += coef * in;
    return;
  }
  if (!op.monomial()) {
    Amplitudes cur = in, next;
    for (const auto& [site, f] : op.factors()) {
      detail::apply_site_matrix(n, m, site, f.matrix(), cur, next);
      cur.swap(next);
    }
    out += coef * cur;
    return;
  }
  const auto st = detail::strides(n, m);
  if (m == 2) {
    std::size_t flip = 0, sign = 0;
    cplx base = coef;
    bool pauli_like = true;
    for (const auto& [site, f] : op.factors()) {
      const auto& t = f.targets();
      const auto& p = f.phases();
      const bool swaps = t[0] == 1 && t[1] == 0;
      const bool keeps = t[0] == 0 && t[1] == 1;
      if (!(swaps || keeps) || p[0] == cplx(0.0)) {
        pauli_like = false;
        break;
      }
      const cplx ratio = p[1] / p[0];
      if (std::abs(ratio - cplx(1.0)) < 1e-15) {
      } else if (std::abs(ratio + cplx(1.0)) < 1e-15) {
        sign |= st[site];
      } else {
        pauli_like = false;
        break;
      }
      if (swaps) flip |= st[site];
      base *= p[0];
    }
    if (pauli_like) {
      for (std::size_t i = 0; i < dim; ++i) {
        const cplx v = (std::popcount(i & sign) & 1) ? -base : base;
        out[i ^ flip] += v * in[i];
      }
      return;
    }
  }
  struct Fac {
    std::size_t stride;
    const std::vector<int>* t;
    const std::vector<cplx>* p;
  };
  std::vector<Fac> fs;
  for (const auto& [site, f] : op.factors()) fs.push_back({st[site], &f.targets(), &f.phases()});
  const std::size_t mm = static_cast<std::size_t>(m);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t j = i;
    cplx ph = coef;
    for (const auto& f : fs) {
      const std::size_t d = (i / f.stride) % mm;
      j = j - d * f.stride + static_cast<std::size_t>((*f.t)[d]) * f.stride;
      ph *= (*f.p)[d];
    }
    out[j] += ph * in[i];
  }
}

// Image of basis state |index> under a monomial string: op|index> = phase |target>.
inline std::pair<std::size_t, cplx> monomial_image(const OperatorString& op, int n, int m,
                                                   std::size_t index) {
  if (!op.monomial()) throw ParameterError("operator string is not monomial");
  const auto st = detail::strides(n, m);
  std::size_t j = index;
  cplx ph = op.coefficient();
  for (const auto& [site, f] : op.factors()) {
    detail::require(site < n && f.dim() == m, "operator does not fit the register");
    const std::size_t d = (index / st[site]) % m;
    j = j - d * st[site] + static_cast<std::size_t>(f.targets()[d]) * st[site];
    ph *= f.phases()[d];
  }
  return {j, ph};
}

class PureState {
 public:
  // Amplitudes must be normalized to 1e-10; they are rescaled to unit norm exactly.
  PureState(int num_sites, int local_dim, Amplitudes amplitudes)
      : n_(num_sites), m_(local_dim), amps_(std::move(amplitudes)) {
    const std::size_t dim = register_dimension(n_, m_);
    detail::require(static_cast<std::size_t>(amps_.size()) == dim,
                    "amplitude count does not equal local_dim^num_sites");
    const double nrm2 = amps_.squaredNorm();
    if (std::abs(nrm2 - 1.0) > 1e-10) throw ParameterError("state is not normalized");
    amps_ /= std::sqrt(nrm2);
  }

  static PureState normalized(int num_sites, int local_dim, Amplitudes amplitudes) {
    const double nrm = amplitudes.norm();
    if (!(nrm > 1e-300)) throw ParameterError("cannot normalize the zero vector");
    amplitudes /= nrm;
    return PureState(num_sites, local_dim, std::move(amplitudes));
  }

  static PureState basis_state(int num_sites, int local_dim, std::span<const int> digits) {
    const std::size_t dim = register_dimension(num_sites, local_dim);
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
    PureState probe(num_sites, local_dim);
    a[static_cast<Eigen::Index>(probe.index(digits))] = 1.0;
    return PureState(num_sites, local_dim, std::move(a));
  }

  int num_sites() const { return n_; }
  int local_dim() const { return m_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
  const Amplitudes& amplitudes() const { return amps_; }
  cplx amplitude(std::size_t index) const { return amps_[static_cast<Eigen::Index>(index)]; }

  // Site 0 is the most significant base-m digit.
  std::vector<int> digits(std::size_t index) const {
    std::vector<int> d(n_);
    for (int k = n_ - 1; k >= 0; --k) {
      d[k] = static_cast<int>(index % m_);
      index /= m_;
    }
    return d;
  }
  std::size_t index(std::span<const int> digits) const {
    detail::require(static_cast<int>(digits.size()) == n_, "basis label has wrong length");
    std::size_t idx = 0;
    for (int d : digits) {
      detail::require(d >= 0 && d < m_, "basis digit out of range");
      idx = idx * m_ + static_cast<std::size_t>(d);
    }
    return idx;
  }

 private:
  PureState(int num_sites, int local_dim) : n_(num_sites), m_(local_dim) {}

  int n_ = 0;
  int m_ = 0;
  Amplitudes amps_;
};

enum class NamedState { GhzPlus, GhzMinus, GhzQudit, XPolarized, Cluster, ComputationalBasis };

inline PureState make_named_state(NamedState kind, int num_sites, int local_dim,
                                  std::span<const int> basis_label = {}) {
  const std::size_t dim = register_dimension(num_sites, local_dim);
  const auto sz = static_cast<Eigen::Index>(dim);
  Amplitudes a = Amplitudes::Zero(sz);
  switch (kind) {
    case NamedState::GhzPlus:
    case NamedState::GhzMinus: {
      detail::require(local_dim == 2, "GHZ+/- states are qubit states");
      const double r = 1.0 / std::sqrt(2.0);
      a[0] = r;
      a[sz - 1] = kind == NamedState::GhzPlus ? r : -r;
      break;
    }
    case NamedState::GhzQudit: {
      const double r = 1.0 / std::sqrt(static_cast<double>(local_dim));
      std::size_t rep = 0;
      for (int s = 0; s < num_sites; ++s) rep = rep * local_dim + 1;
      for (int k = 0; k < local_dim; ++k) a[static_cast<Eigen::Index>(k * rep)] = r;
      break;
    }
    case NamedState::XPolarized:
      a.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
      break;
    case NamedState::Cluster: {
      detail::require(local_dim == 2, "cluster state is a qubit state");
      detail::require(num_sites >= 6 && num_sites % 2 == 0,
                      "cluster state needs an even site count >= 6");
      const double r = 1.0 / std::sqrt(static_cast<double>(dim));
      for (std::size_t i = 0; i < dim; ++i) {
        // sigma_k sigma_{k+1} summed around the ring
        const std::size_t rot = ((i << 1) | (i >> (num_sites - 1))) & (dim - 1);
        const int bonds = std::popcount(i & rot);
        a[static_cast<Eigen::Index>(i)] = (bonds & 1) ? -r : r;
      }
      break;
    }
    case NamedState::ComputationalBasis:
      return PureState::basis_state(num_sites, local_dim, basis_label);
  }
  return PureState(num_sites, local_dim, std::move(a));
}

inline PureState random_state(int num_sites, int local_dim, std::mt19937_64& rng) {
  const std::size_t dim = register_dimension(num_sites, local_dim);
  std::normal_distribution<double> gauss;
  Amplitudes a(static_cast<Eigen::Index>(dim));
  for (auto& x : a) x = cplx(gauss(rng), gauss(rng));
  return PureState::normalized(num_sites, local_dim, std::move(a));
}

inline Amplitudes apply_operator(const PureState& state, const OperatorString& op) {
  Amplitudes out;
  apply_string(op, state.num_sites(), state.local_dim(), state.amplitudes(), out);
  return out;
}

inline PureState apply_unitary(const PureState& state, int site, const SiteOperator& op) {
  detail::require(site >= 0 && site < state.num_sites(), "site index out of range");
  detail::require(op.dim() == state.local_dim(), "operator dimension does not match register");
  if (!op.is_unitary()) throw ContractViolation("apply_unitary: operator is not unitary");
  Amplitudes out;
  detail::apply_site_matrix(state.num_sites(), state.local_dim(), site, op.matrix(),
                            state.amplitudes(), out);
  return PureState(state.num_sites(), state.local_dim(), std::move(out));
}

// Dense unitary on several sites; sites[0] is the most significant digit of the gate index.
inline PureState apply_unitary(const PureState& state, std::span<const int> sites,
                               const Eigen::MatrixXcd& gate) {
  const int n = state.num_sites();
  const int m = state.local_dim();
  std::size_t sub = 1;
  for (int s : sites) {
    detail::require(s >= 0 && s < n, "site index out of range");
    sub *= m;
  }
  detail::require(gate.rows() == static_cast<Eigen::Index>(sub) && gate.cols() == gate.rows(),
                  "gate dimension does not match the site list");
  for (std::size_t a = 0; a < sites.size(); ++a)
    for (std::size_t b = a + 1; b < sites.size(); ++b)
      detail::require(sites[a] != sites[b], "repeated site in gate");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(gate.rows(), gate.cols());
  if ((gate.adjoint() * gate - id).cwiseAbs().maxCoeff() > 1e-12)
    throw ContractViolation("apply_unitary: gate is not unitary");

  const auto st = detail::strides(n, m);
  std::vector<std::size_t> offset(sub, 0);
  for (std::size_t j = 0; j < sub; ++j) {
    std::size_t rem = j;
    for (int k = static_cast<int>(sites.size()) - 1; k >= 0; --k) {
      offset[j] += (rem % m) * st[sites[k]];
      rem /= m;
    }
  }
  const Amplitudes& in = state.amplitudes();
  Amplitudes out(in.size());
  Eigen::VectorXcd g(static_cast<Eigen::Index>(sub)), r;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    bool base = true;
    for (int s : sites) {
      if ((i / st[s]) % m != 0) {
        base = false;
        break;
      }
    }
    if (!base) continue;
    for (std::size_t j = 0; j < sub; ++j) g[j] = in[i + offset[j]];
    r.noalias() = gate * g;
    for (std::size_t j = 0; j < sub; ++j) out[i + offset[j]] = r[j];
  }
  return PureState(n, m, std::move(out));
}

inline cplx expectation(const PureState& state, const OperatorString& op) {
  return state.amplitudes().dot(apply_operator(state, op));
}

inline cplx inner_product(const PureState& a, const PureState& b) {
  if (a.num_sites() != b.num_sites() || a.local_dim() != b.local_dim())
    throw ParameterError("inner_product: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

struct Branch {
  std::vector<int> labels;
  double probability = 0.0;
  std::optional<PureState> post_state;
};

struct BranchEnumeration {
  std::vector<Branch> branches;
  std::size_t pruned_count = 0;
  double pruned_probability = 0.0;

  double total_probability() const {
    double t = pruned_probability;
    for (const auto& b : branches) t += b.probability;
    return t;
  }
};

struct BranchOptions {
  double prune_threshold = 1e-12;
  bool keep_post_states = true;
};

// Computational-basis measurement of the listed sites; labels follow the list order.
inline BranchEnumeration enumerate_measurement_branches(const PureState& state,
                                                        std::span<const int> sites,
                                                        const BranchOptions& opts = {}) {
  const int n = state.num_sites();
  const int m = state.local_dim();
  for (int s : sites) detail::require(s >= 0 && s < n, "measured site out of range");
  const auto st = detail::strides(n, m);
  std::size_t outcomes = 1;
  for (std::size_t k = 0; k < sites.size(); ++k) outcomes *= m;

  std::vector<double> prob(outcomes, 0.0);
  std::vector<std::size_t> key(state.dimension());
  const Amplitudes& a = state.amplitudes();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    std::size_t k = 0;
    for (int s : sites) k = k * m + (i / st[s]) % m;
    key[i] = k;
    prob[k] += std::norm(a[static_cast<Eigen::Index>(i)]);
  }

  BranchEnumeration res;
  for (std::size_t k = 0; k < outcomes; ++k) {
    if (prob[k] < opts.prune_threshold) {
      if (prob[k] > 0.0) {
        ++res.pruned_count;
        res.pruned_probability += prob[k];
      }
      continue;
    }
    Branch b;
    b.labels.resize(sites.size());
    std::size_t rem = k;
    for (int j = static_cast<int>(sites.size()) - 1; j >= 0; --j) {
      b.labels[j] = static_cast<int>(rem % m);
      rem /= m;
    }
    b.probability = prob[k];
    if (opts.keep_post_states) {
      Amplitudes post = Amplitudes::Zero(a.size());
      for (std::size_t i = 0; i < state.dimension(); ++i)
        if (key[i] == k) post[static_cast<Eigen::Index>(i)] = a[static_cast<Eigen::Index>(i)];
      b.post_state = PureState::normalized(n, m, std::move(post));
    }
    res.branches.push_back(std::move(b));
  }
  return res;
}

using OperatorTuple = std::vector<OperatorString>;

namespace detail {

inline void check_observables(const PureState& state, std::span<const OperatorTuple> tuples) {
  const int n = state.num_sites();
  const int m = state.local_dim();
  std::mt19937_64 rng(0x5eed);
  const PureState u = random_state(n, m, rng);
  const PureState v = random_state(n, m, rng);
  for (const auto& all : tuples) {
    std::vector<Amplitudes> ou(all.size()), ov(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      ou[i] = apply_operator(u, all[i]);
      ov[i] = apply_operator(v, all[i]);
      if (std::abs(u.amplitudes().dot(ov[i]) - ou[i].dot(v.amplitudes())) > 1e-9)
        throw ContractViolation("measured observable is not Hermitian");
      Amplitudes sq;
      apply_string(all[i], n, m, ou[i], sq);
      if ((sq - u.amplitudes()).norm() > 1e-9)
        throw ContractViolation("measured observable is not an involution");
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        Amplitudes ab, ba;
        apply_string(all[i], n, m, ou[j], ab);
        apply_string(all[j], n, m, ou[i], ba);
        if ((ab - ba).norm() > 1e-9) throw ContractViolation("measured observables do not commute");
      }
    }
  }
}

// Below this weight a projected branch is an exact zero up to rounding.
inline constexpr double kNullBranch = 1e-26;

inline void project_observables(int n, int m, const std::vector<const OperatorString*>& obs,
                                std::size_t depth, const Amplitudes& psi, std::vector<int>& labels,
                                const BranchOptions& opts, BranchEnumeration& res) {
  const double p = psi.squaredNorm();
  if (p < opts.prune_threshold) {
    if (p > kNullBranch) {
      ++res.pruned_count;
      res.pruned_probability += p;
    }
    return;
  }
  if (depth == obs.size()) {
    Branch b;
    b.labels = labels;
    b.probability = p;
    if (opts.keep_post_states) b.post_state = PureState::normalized(n, m, psi);
    res.branches.push_back(std::move(b));
    return;
  }
  Amplitudes image;
  apply_string(*obs[depth], n, m, psi, image);
  for (int minus = 0; minus < 2; ++minus) {
    const Amplitudes cur = minus ? Amplitudes(0.5 * (psi - image)) : Amplitudes(0.5 * (psi + image));
    labels.push_back(minus);
    project_observables(n, m, obs, depth + 1, cur, labels, opts, res);
    labels.pop_back();
  }
}

}  // namespace detail

// Sequential measurement of commuting-observable tuples; label 0 means eigenvalue +1.
inline BranchEnumeration enumerate_measurement_branches(const PureState& state,
                                                        std::span<const OperatorTuple> tuples,
                                                        const BranchOptions& opts = {}) {
  detail::check_observables(state, tuples);
  BranchEnumeration res;
  std::vector<const OperatorString*> obs;
  for (const auto& t : tuples)
    for (const auto& o : t) obs.push_back(&o);
  std::vector<int> labels;
  detail::project_observables(state.num_sites(), state.local_dim(), obs, 0, state.amplitudes(),
                              labels, opts, res);
  return res;
}

}  // namespace nlgames
