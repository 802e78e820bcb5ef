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
#include <array>
#include <cmath>
#include <set>
#include <span>
#include <vector>

#include "nlgames/error.hpp"
#include "nlgames/statevec.hpp"

namespace nlgames {

enum class Orientation { Horizontal = 0, Vertical = 1 };

// Periodic Lx x Ly square lattice with one qubit per bond.
// Bond (x, y, o) has index 2 (y Lx + x) + o; the horizontal bond (x, y, H) joins
// vertices (x, y) and (x+1, y), the vertical bond (x, y, V) joins (x, y) and (x, y+1).
class ToricLattice {
 public:
  ToricLattice(int lx, int ly) : lx_(lx), ly_(ly) {
    if (lx < 2 || ly < 2) throw GeometryError("toric lattice needs Lx, Ly >= 2");
  }

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  int num_bonds() const { return 2 * lx_ * ly_; }
  int num_cells() const { return lx_ * ly_; }

  int bond(int x, int y, Orientation o) const {
    return 2 * (wrap(y, ly_) * lx_ + wrap(x, lx_)) + static_cast<int>(o);
  }
  int horizontal(int x, int y) const { return bond(x, y, Orientation::Horizontal); }
  int vertical(int x, int y) const { return bond(x, y, Orientation::Vertical); }

  // Plaquette with lower-left corner (x, y).
  std::array<int, 4> plaquette(int x, int y) const {
    return {horizontal(x, y), horizontal(x, y + 1), vertical(x, y), vertical(x + 1, y)};
  }
  // Bonds touching vertex (x, y).
  std::array<int, 4> star(int x, int y) const {
    return {horizontal(x, y), horizontal(x - 1, y), vertical(x, y), vertical(x, y - 1)};
  }

  // Z on the vertical bonds of column x: a vertical non-contractible loop.
  std::vector<int> column_loop(int x) const {
    std::vector<int> b;
    for (int y = 0; y < ly_; ++y) b.push_back(vertical(x, y));
    return b;
  }
  // Z on the horizontal bonds of row y: a horizontal non-contractible loop.
  std::vector<int> row_loop(int y) const {
    std::vector<int> b;
    for (int x = 0; x < lx_; ++x) b.push_back(horizontal(x, y));
    return b;
  }
  // Dual loop crossing every column once: the vertical bonds of row y.
  std::vector<int> row_dual_loop(int y) const {
    std::vector<int> b;
    for (int x = 0; x < lx_; ++x) b.push_back(vertical(x, y));
    return b;
  }
  // Dual loop crossing every row once: the horizontal bonds of column x.
  std::vector<int> column_dual_loop(int x) const {
    std::vector<int> b;
    for (int y = 0; y < ly_; ++y) b.push_back(horizontal(x, y));
    return b;
  }

  // Every vertex has even degree in the bond set.
  bool is_closed_loop(std::span<const int> bonds) const {
    std::vector<int> degree(num_cells(), 0);
    for (int b : bonds) {
      check_bond(b);
      const int cell = b / 2;
      const int x = cell % lx_, y = cell / lx_;
      ++degree[cell];
      if (b % 2 == 0)
        ++degree[wrap(y, ly_) * lx_ + wrap(x + 1, lx_)];
      else
        ++degree[wrap(y + 1, ly_) * lx_ + x];
    }
    return std::all_of(degree.begin(), degree.end(), [](int d) { return d % 2 == 0; });
  }
  // Every plaquette contains an even number of the bonds.
  bool is_closed_dual_loop(std::span<const int> bonds) const {
    std::vector<int> count(num_cells(), 0);
    for (int b : bonds) {
      check_bond(b);
      const int cell = b / 2;
      const int x = cell % lx_, y = cell / lx_;
      ++count[cell];
      if (b % 2 == 0)
        ++count[wrap(y - 1, ly_) * lx_ + x];
      else
        ++count[y * lx_ + wrap(x - 1, lx_)];
    }
    return std::all_of(count.begin(), count.end(), [](int c) { return c % 2 == 0; });
  }

  OperatorString plaquette_operator(int x, int y) const {
    const auto b = plaquette(x, y);
    return OperatorString::pauli_on('Z', b);
  }
  OperatorString star_operator(int x, int y) const {
    const auto b = star(x, y);
    return OperatorString::pauli_on('X', b);
  }
  OperatorString wilson(std::span<const int> bonds) const {
    if (!is_closed_loop(bonds)) throw GeometryError("Wilson loop is not closed");
    return OperatorString::pauli_on('Z', bonds);
  }
  OperatorString dual_wilson(std::span<const int> bonds) const {
    if (!is_closed_dual_loop(bonds)) throw GeometryError("dual loop is not closed");
    return OperatorString::pauli_on('X', bonds);
  }

  // |00>: normalized prod_s (1 + B_s) acting on the all-up configuration.
  PureState ground_state_00() const {
    const int n = num_bonds();
    const std::size_t dim = register_dimension(n, 2);
    // The star group orbit of |0...0> is the set of closed dual-loop configurations,
    // i.e. every X-pattern generated by the star masks.
    std::vector<std::size_t> masks;
    const auto st = detail::strides(n, 2);
    for (int y = 0; y < ly_; ++y) {
      for (int x = 0; x < lx_; ++x) {
        std::size_t m = 0;
        for (int b : star(x, y)) m ^= st[b];
        masks.push_back(m);
      }
    }
    std::set<std::size_t> orbit{0};
    for (std::size_t m : masks) {
      std::set<std::size_t> next = orbit;
      for (std::size_t v : orbit) next.insert(v ^ m);
      orbit.swap(next);
    }
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t v : orbit) a[static_cast<Eigen::Index>(v)] = 1.0;
    return PureState::normalized(n, 2, std::move(a));
  }
  // (|00> + V|00>)/sqrt2 with V the row dual loop at y = 0; a V eigenstate.
  PureState game_state() const {
    const PureState s00 = ground_state_00();
    const auto loop = row_dual_loop(0);
    Amplitudes flipped = apply_operator(s00, dual_wilson(loop));
    return PureState::normalized(num_bonds(), 2, s00.amplitudes() + flipped);
  }

 private:
  static int wrap(int v, int l) { return ((v % l) + l) % l; }
  void check_bond(int b) const {
    if (b < 0 || b >= num_bonds()) throw GeometryError("bond index out of range");
  }

  int lx_;
  int ly_;
};

}  // namespace nlgames
