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
#include <string>
#include <utility>
#include <vector>

#include "nlgames/error.hpp"

namespace nlgames {

// Set of vertex-disjoint edges of the P-cycle. Edge e joins vertices e and e+1 mod P (0-based).
struct Matching {
  int p = 0;
  std::vector<int> edges;

  std::size_t size() const { return edges.size(); }
  bool operator==(const Matching&) const = default;
};

inline bool is_valid_matching(const Matching& m) {
  if (m.p < 3) return false;
  std::vector<int> used(m.p, 0);
  for (int e : m.edges) {
    if (e < 0 || e >= m.p) return false;
    if (used[e]++ || used[(e + 1) % m.p]++) return false;
  }
  return true;
}

namespace detail {

inline void grow_matchings(int p, int r, int next, std::vector<int>& cur, std::vector<int>& used,
                           std::vector<Matching>& out) {
  if (static_cast<int>(cur.size()) == r) {
    out.push_back({p, cur});
    return;
  }
  for (int e = next; e < p; ++e) {
    const int a = e, b = (e + 1) % p;
    if (used[a] || used[b]) continue;
    used[a] = used[b] = 1;
    cur.push_back(e);
    grow_matchings(p, r, e + 1, cur, used, out);
    cur.pop_back();
    used[a] = used[b] = 0;
  }
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = 0;
  if (__builtin_add_overflow(a, b, &s)) throw CapacityError("integer overflow in combinatorics");
  return s;
}

}  // namespace detail

// All r-matchings of the P-cycle in lexicographic order of edge lists.
inline std::vector<Matching> cycle_matchings(int p, int r) {
  detail::require(p >= 3, "cycle needs P >= 3");
  detail::require(r >= 0 && r <= p / 2, "matching size out of range");
  std::vector<Matching> out;
  std::vector<int> cur, used(p, 0);
  detail::grow_matchings(p, r, 0, cur, used, out);
  return out;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > UINT64_MAX) throw CapacityError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

// |M_r| = P / (P - r) * C(P - r, r) for r >= 1, and 1 for r = 0.
inline std::uint64_t matching_count(int p, int r) {
  detail::require(p >= 3, "cycle needs P >= 3");
  if (r == 0) return 1;
  if (r < 0 || r > p / 2) return 0;
  const unsigned __int128 num = static_cast<unsigned __int128>(p) * binomial(p - r, r);
  return static_cast<std::uint64_t>(num / static_cast<unsigned>(p - r));
}

inline std::uint64_t fibonacci(int n) {
  detail::require(n >= 0, "Fibonacci index must be non-negative");
  if (n > 90) throw CapacityError("Fibonacci numbers supported up to index 90");
  std::uint64_t a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t c = detail::checked_add(a, b);
    a = b;
    b = c;
  }
  return a;
}

// L_0 = 2, L_1 = 1, L_n = L_{n-1} + L_{n-2}.
inline std::uint64_t lucas_number(int n) {
  detail::require(n >= 0, "Lucas index must be non-negative");
  if (n > 90) throw CapacityError("Lucas numbers supported up to index 90");
  std::uint64_t a = 2, b = 1;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t c = detail::checked_add(a, b);
    a = b;
    b = c;
  }
  return a;
}

// L_0(x) = 2, L_1(x) = x, L_n(x) = x L_{n-1}(x) + L_{n-2}(x).
inline double lucas_polynomial(int n, double x) {
  detail::require(n >= 0, "Lucas index must be non-negative");
  double a = 2.0, b = x;
  if (n == 0) return a;
  for (int i = 1; i < n; ++i) {
    const double c = x * b + a;
    a = b;
    b = c;
  }
  return b;
}

inline double lucas_polynomial_closed(int n, double x) {
  const double s = std::sqrt(x * x + 4.0);
  return std::ldexp(std::pow(x + s, n) + std::pow(x - s, n), -n);
}

// sum_r C(P - 2 - r, r): the number of inputs lost by the reference polygon strategy.
inline std::uint64_t polygon_loss_count(int p) {
  detail::require(p >= 3, "polygon needs P >= 3");
  std::uint64_t total = 0;
  for (int r = 0; 2 * r <= p - 2; ++r) total = detail::checked_add(total, binomial(p - 2 - r, r));
  return total;
}

}  // namespace nlgames
