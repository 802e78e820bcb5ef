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

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "nlgames/error.hpp"

namespace nlgames::freefermion {

struct Solution {
  int n = 0;
  double g = 0.0;
  std::vector<double> momenta;
  std::vector<double> angles;
  std::vector<double> energies;
};

// Occupied positive momenta of the even-parity sector and their Bogoliubov angles (J = 1).
inline Solution solve(int n, double g) {
  if (n < 2) throw ParameterError("free-fermion solution needs N >= 2");
  if (!(g > 0.0)) throw ParameterError("free-fermion solution needs g > 0");
  Solution s{n, g, {}, {}, {}};
  const int count = n / 2;
  for (int j = 0; j < count; ++j) {
    const double k = (2 * j + 1) * std::numbers::pi / n;
    s.momenta.push_back(k);
    s.angles.push_back(std::atan2(std::sin(k), g - std::cos(k)));
    s.energies.push_back(std::sqrt(1.0 + g * g - 2.0 * g * std::cos(k)));
  }
  return s;
}

// log(1 + (1 - g cos k) / sqrt(1 + g^2 - 2 g cos k)), evaluated without cancellation.
inline double log_pair_factor(double g, double k) {
  const double theta = std::atan2(std::sin(k), g - std::cos(k));
  return std::numbers::ln2 + 2.0 * std::log(std::abs(std::sin(0.5 * (theta + k))));
}

inline double pair_factor(double g, double k) { return std::exp(log_pair_factor(g, k)); }

inline double ghz_fidelity(int n, double g) {
  const Solution s = solve(n, g);
  double logf = 0.0;
  for (std::size_t j = 0; j < s.momenta.size(); ++j) {
    const double k = s.momenta[j];
    const double d = 0.5 * (s.angles[j] - (std::numbers::pi - k));
    logf += 2.0 * std::log(std::abs(std::cos(d)));
  }
  return std::exp(logf);
}

// prod_{k>0} (1 + (1 - g cos k) / eps_k)
inline double pair_product(int n, double g) {
  const Solution s = solve(n, g);
  double logp = 0.0;
  for (double k : s.momenta) logp += log_pair_factor(g, k);
  return std::exp(logp);
}

struct Probability {
  double value = 0.0;
  double error_bound = 0.0;
};

inline Probability pqu_parity_exact(int n, double g) {
  const double f = ghz_fidelity(n, g);
  return {0.5 * (1.0 + f), 64.0 * n * std::numeric_limits<double>::epsilon()};
}

// The displayed product formula read literally: 1/2 + 2^{-floor(N/2)} prod(...).
inline double pqu_parity_literal(int n, double g) {
  return 0.5 + std::ldexp(pair_product(n, g), -(n / 2));
}

// Same product with the prefactor that reproduces 1/2 (1 + fidelity).
inline double pqu_parity_product(int n, double g) {
  return 0.5 + std::ldexp(pair_product(n, g), -(n / 2) - 1);
}

inline double pcl_parity(int n) { return 0.5 + std::ldexp(1.0, -((n + 1) / 2)); }

struct Root {
  double value = 0.0;
  double bracket_width = 0.0;
  int iterations = 0;
};

inline Root bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (!(flo * fhi <= 0.0)) throw BracketError("no sign change in the bracket");
  Root r;
  while (hi - lo > tol && r.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    ++r.iterations;
  }
  r.value = 0.5 * (lo + hi);
  r.bracket_width = hi - lo;
  return r;
}

// Root of pqu_parity_exact(N, g) = p_cl*(N) in [1, 2.5].
inline Root threshold_finite(int n, double lo = 1.0, double hi = 2.5) {
  if (n < 3) throw ParameterError("finite threshold needs N >= 3");
  const double target = pcl_parity(n);
  return bisect([&](double g) { return pqu_parity_exact(n, g).value - target; }, lo, hi, 1e-10);
}

// Root of pair_product(n, g) = rhs, rhs 1 for even n and 1/2 for odd n.
inline std::optional<Root> threshold_finite_literal(int n) {
  if (n < 3) throw ParameterError("finite threshold needs N >= 3");
  const double rhs = n % 2 == 0 ? 1.0 : 0.5;
  auto f = [&](double g) { return pair_product(n, g) - rhs; };
  double lo = 1.0;
  for (double hi = 2.0; hi <= 1024.0; hi *= 2.0) {
    if (f(lo) * f(hi) <= 0.0) return bisect(f, lo, hi, 1e-10);
    lo = hi;
  }
  return std::nullopt;
}

struct Integral {
  double value = 0.0;
  double error_estimate = 0.0;
  bool adaptive = false;
};

// int_0^pi log(1 + (1 - g cos k)/eps_k) dk. For g > 1 the integrand behaves as 2 log k
// at k -> 0; that part is integrated exactly.
inline Integral threshold_integral(double g) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const double pi = std::numbers::pi;
  const bool singular = g > 1.0;
  auto smooth = [&](double k) {
    double v = log_pair_factor(g, k);
    if (singular) v -= 2.0 * std::log(k);
    return v;
  };
  const double exact = singular ? 2.0 * (pi * std::log(pi) - pi) : 0.0;
  const double q128 = gauss<double, 128>::integrate(smooth, 0.0, pi);
  const double q256 = gauss<double, 256>::integrate(smooth, 0.0, pi);
  Integral out{exact + q256, std::abs(q256 - q128), false};
  if (out.error_estimate > 1e-9) {
    double err = 0.0;
    const double qa = gauss_kronrod<double, 61>::integrate(smooth, 0.0, pi, 20, 1e-13, &err);
    out = {exact + qa, err, true};
  }
  return out;
}

inline Root threshold_asymptotic() {
  return bisect([](double g) { return threshold_integral(g).value; }, 1.0, 2.5, 1e-10);
}

struct ClosedForms {
  double pqu_meanfield_broken = 0.0;
  std::optional<double> pqu_meanfield_cat;
  std::optional<double> pqu_meanfield_cat_g_form;
  double g_star_meanfield = 0.0;
  double m_star_meanfield = 0.0;
  double pqu_perturbative = 0.0;
  double g_star_perturbative = 0.0;
  double m_asymptotic = 0.0;
  double zz_asymptotic = 0.0;
};

inline double m_asymptotic(double g) { return g < 1.0 ? std::pow(1.0 - g * g, 0.125) : 0.0; }
inline double zz_asymptotic(double g) { return g < 1.0 ? std::pow(1.0 - g * g, 0.25) : 0.0; }

// Mean-field self-consistent magnetization for field g and longitudinal field h (J = 1).
inline double meanfield_m(double g, double h) {
  const double ah = std::abs(h);
  if (ah == 0.0) return g < 1.0 ? std::sqrt(1.0 - g * g) : 0.0;
  auto f = [&](double m) { return (m + ah) / std::hypot(m + ah, g) - m; };
  if (f(1.0) >= 0.0) return 1.0;
  return bisect(f, 0.0, 1.0, 1e-15).value;
}

inline ClosedForms closed_forms(int n, double g, double h = 0.0) {
  if (n < 1) throw ParameterError("closed forms need N >= 1");
  if (g < 0.0) throw ParameterError("closed forms need g >= 0");
  ClosedForms c;
  const double m = meanfield_m(g, h);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - m * m));
  c.pqu_meanfield_broken = 0.5 + std::pow(0.5 * sin_theta, n);
  if (h == 0.0) {
    const double theta = std::acos(m);
    const double ch = std::cos(theta / 2), sh = std::sin(theta / 2);
    const double amp = std::pow(ch, n) + std::pow(sh, n);
    c.pqu_meanfield_cat = 0.5 + amp * amp / (2.0 * (1.0 + std::pow(sin_theta, n)));
    if (g <= 1.0) {
      const double r = std::sqrt(1.0 - g * g);
      const double bracket = std::pow(0.5 * g, n) + (std::pow(1.0 + r, n) + std::pow(1.0 - r, n)) /
                                                         std::ldexp(1.0, n + 1);
      c.pqu_meanfield_cat_g_form = 0.5 + bracket / (1.0 + std::pow(g, n));
    }
  }
  c.g_star_meanfield = std::sqrt(2.0) * std::sqrt(std::sqrt(2.0) - 1.0);
  c.m_star_meanfield = std::sqrt(2.0) - 1.0;
  c.pqu_perturbative = g > 0.0 ? 0.5 + std::ldexp(1.0 + n / (2.0 * g), -n)
                               : std::numeric_limits<double>::infinity();
  c.g_star_perturbative = 1.0 / std::numbers::ln2;
  c.m_asymptotic = m_asymptotic(g);
  c.zz_asymptotic = zz_asymptotic(g);
  return c;
}

}  // namespace nlgames::freefermion
