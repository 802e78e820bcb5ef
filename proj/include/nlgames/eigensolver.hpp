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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlgames/error.hpp"
#include "nlgames/statevec.hpp"

namespace nlgames {

// Matrix-free Hermitian operator: apply(in, out) writes out = H in.
struct HermitianOperator {
  std::size_t dim = 0;
  std::function<void(const Amplitudes&, Amplitudes&)> apply;
};

enum class EigenMethod { Dense, Iterative };

struct EigenOptions {
  std::size_t dense_threshold = 1024;
  double tolerance = 1e-10;
  int max_restarts = 400;
  int extra_block = 2;
  int max_basis = 0;
  std::uint64_t seed = 7;
  bool force_iterative = false;
};

struct EigenResult {
  std::vector<double> energies;
  Eigen::MatrixXcd vectors;
  std::vector<double> residuals;
  EigenMethod method = EigenMethod::Dense;
  int restarts = 0;
};

namespace detail {

inline Eigen::MatrixXcd materialize(const HermitianOperator& h) {
  const auto n = static_cast<Eigen::Index>(h.dim);
  Eigen::MatrixXcd mat(n, n);
  Amplitudes e = Amplitudes::Zero(n), col;
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    h.apply(e, col);
    mat.col(j) = col;
    e[j] = 0.0;
  }
  return mat;
}

inline void fill_residuals(const HermitianOperator& h, EigenResult& r) {
  r.residuals.clear();
  Amplitudes hv;
  for (Eigen::Index j = 0; j < r.vectors.cols(); ++j) {
    const Amplitudes v = r.vectors.col(j);
    h.apply(v, hv);
    r.residuals.push_back((hv - r.energies[j] * v).norm());
  }
}

inline EigenResult dense_lowest(const HermitianOperator& h, int k) {
  Eigen::MatrixXcd mat = materialize(h);
  mat = (0.5 * (mat + mat.adjoint())).eval();
  EigenResult res;
  res.method = EigenMethod::Dense;
  if (mat.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat.real());
    for (int j = 0; j < k; ++j) res.energies.push_back(es.eigenvalues()[j]);
    res.vectors = es.eigenvectors().leftCols(k).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
    for (int j = 0; j < k; ++j) res.energies.push_back(es.eigenvalues()[j]);
    res.vectors = es.eigenvectors().leftCols(k);
  }
  fill_residuals(h, res);
  return res;
}

// Orthonormalizes the columns of w against basis.leftCols(used) and each other.
// Returns the columns that survive (norm above the drop threshold).
inline Eigen::MatrixXcd orthonormalize_block(const Eigen::MatrixXcd& basis, Eigen::Index used,
                                             Eigen::MatrixXcd w) {
  for (int pass = 0; pass < 2; ++pass) {
    if (used > 0) w -= basis.leftCols(used) * (basis.leftCols(used).adjoint() * w);
  }
  std::vector<Amplitudes> kept;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Amplitudes v = w.col(j);
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      if (used > 0) v -= basis.leftCols(used) * (basis.leftCols(used).adjoint() * v);
      for (const auto& q : kept) v -= q * q.dot(v);
    }
    const double after = v.norm();
    if (after > 1e-10 * std::max(before, 1.0) && after > 1e-13) kept.push_back(v / after);
  }
  Eigen::MatrixXcd out(w.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

// Restarted block Lanczos with full reorthogonalization and Rayleigh-Ritz extraction.
inline EigenResult block_lanczos(const HermitianOperator& h, int k, const EigenOptions& opts) {
  const auto n = static_cast<Eigen::Index>(h.dim);
  const Eigen::Index b = std::min<Eigen::Index>(n, k + std::max(opts.extra_block, 0));
  Eigen::Index cap = opts.max_basis > 0 ? opts.max_basis : std::max<Eigen::Index>(8 * b, 60);
  cap = std::min(cap, n);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd start(n, b);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < b; ++j) start(i, j) = cplx(gauss(rng), gauss(rng));

  Eigen::MatrixXcd q(n, cap), hq(n, cap);
  EigenResult res;
  res.method = EigenMethod::Iterative;
  Amplitudes tmp;
  Eigen::Index used = 0;
  Eigen::MatrixXcd block = orthonormalize_block(q, 0, start);
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    while (block.cols() > 0 && used < cap) {
      const Eigen::Index take = std::min(block.cols(), cap - used);
      q.middleCols(used, take) = block.leftCols(take);
      for (Eigen::Index j = used; j < used + take; ++j) {
        h.apply(q.col(j), tmp);
        hq.col(j) = tmp;
      }
      const Eigen::Index prev = used;
      used += take;
      if (used >= cap) break;
      block = orthonormalize_block(q, used, hq.middleCols(prev, take));
    }
    Eigen::MatrixXcd t = q.leftCols(used).adjoint() * hq.leftCols(used);
    t = (0.5 * (t + t.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
    // thick restart: keep a window of low Ritz vectors together with their images
    const Eigen::Index keep = std::min(used, std::max<Eigen::Index>(b, std::min(used / 2, 4 * b)));
    const Eigen::MatrixXcd y = es.eigenvectors().leftCols(keep);
    const Eigen::MatrixXcd x = q.leftCols(used) * y;
    const Eigen::MatrixXcd hx = hq.leftCols(used) * y;

    res.energies.assign(k, 0.0);
    res.residuals.assign(k, 0.0);
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      res.energies[j] = es.eigenvalues()[j];
      res.residuals[j] = (hx.col(j) - es.eigenvalues()[j] * x.col(j)).norm();
      worst = std::max(worst, res.residuals[j]);
    }
    res.restarts = restart;
    if (worst < opts.tolerance || used == n) {
      res.vectors = orthonormalize_block(q, 0, x.leftCols(k));
      if (res.vectors.cols() == k) {
        fill_residuals(h, res);
        return res;
      }
    }
    q.leftCols(keep) = x;
    hq.leftCols(keep) = hx;
    used = keep;
    block = orthonormalize_block(q, used, hx.leftCols(b));
    if (block.cols() == 0) block = orthonormalize_block(q, used, Eigen::MatrixXcd::Random(n, b));
  }
  std::ostringstream msg;
  msg << "block Lanczos did not converge after " << opts.max_restarts << " restarts; residuals:";
  for (double r : res.residuals) msg << ' ' << r;
  throw ConvergenceError(msg.str());
}

}  // namespace detail

// Lowest k eigenpairs in ascending order.
inline EigenResult lowest_eigenpairs(const HermitianOperator& h, int k, const EigenOptions& opts = {}) {
  detail::require(k >= 1, "need at least one eigenpair");
  detail::require(static_cast<std::size_t>(k) <= h.dim, "more eigenpairs requested than dimension");
  if (!opts.force_iterative && h.dim <= opts.dense_threshold) return detail::dense_lowest(h, k);
  return detail::block_lanczos(h, k, opts);
}

// Basis of the eigenvalue-lambda subspace of a monomial unitary symmetry U,
// built from normalized orbit sums  sum_j lambda^{-j} U^j e_i.
class SymmetrySector {
 public:
  SymmetrySector(const OperatorString& symmetry, cplx eigenvalue, int num_sites, int local_dim)
      : n_(num_sites), m_(local_dim) {
    if (!symmetry.monomial()) throw ParameterError("symmetry sector needs a monomial operator");
    const std::size_t dim = register_dimension(num_sites, local_dim);
    full_dim_ = dim;
    std::vector<std::uint8_t> seen(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (seen[i]) continue;
      std::vector<std::size_t> orbit;
      std::vector<cplx> coeff;
      std::size_t cur = i;
      cplx phase = 1.0;
      cplx weight = 1.0;
      bool valid = true;
      for (;;) {
        seen[cur] = 1;
        orbit.push_back(cur);
        coeff.push_back(weight * phase);
        const auto [nxt, step] = monomial_image(symmetry, n_, m_, cur);
        if (std::abs(std::abs(step) - 1.0) > 1e-12) throw ParameterError("symmetry is not unitary");
        phase *= step;
        weight /= eigenvalue;
        cur = nxt;
        if (cur == i) {
          valid = std::abs(weight * phase - 1.0) < 1e-9;
          break;
        }
      }
      if (!valid) continue;
      const double r = 1.0 / std::sqrt(static_cast<double>(orbit.size()));
      for (auto& c : coeff) c *= r;
      offsets_.push_back(index_.size());
      index_.insert(index_.end(), orbit.begin(), orbit.end());
      coeff_.insert(coeff_.end(), coeff.begin(), coeff.end());
    }
    offsets_.push_back(index_.size());
  }

  std::size_t dimension() const { return offsets_.size() - 1; }
  std::size_t full_dimension() const { return full_dim_; }

  Amplitudes embed(const Amplitudes& x) const {
    Amplitudes out = Amplitudes::Zero(static_cast<Eigen::Index>(full_dim_));
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v)
      for (std::size_t p = offsets_[v]; p < offsets_[v + 1]; ++p)
        out[static_cast<Eigen::Index>(index_[p])] += coeff_[p] * x[static_cast<Eigen::Index>(v)];
    return out;
  }
  Amplitudes restrict_to(const Amplitudes& full) const {
    Amplitudes out(static_cast<Eigen::Index>(dimension()));
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) {
      cplx s = 0.0;
      for (std::size_t p = offsets_[v]; p < offsets_[v + 1]; ++p)
        s += std::conj(coeff_[p]) * full[static_cast<Eigen::Index>(index_[p])];
      out[static_cast<Eigen::Index>(v)] = s;
    }
    return out;
  }
  HermitianOperator project(const HermitianOperator& h) const {
    HermitianOperator p;
    p.dim = dimension();
    p.apply = [this, h](const Amplitudes& in, Amplitudes& out) {
      Amplitudes hv;
      h.apply(embed(in), hv);
      out = restrict_to(hv);
    };
    return p;
  }

 private:
  int n_;
  int m_;
  std::size_t full_dim_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> index_;
  std::vector<cplx> coeff_;
};

}  // namespace nlgames
