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

#include <boost/rational.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "nlgames/combinatorics.hpp"
#include "nlgames/error.hpp"
#include "nlgames/toric_lattice.hpp"

namespace nlgames {

using Rational = boost::rational<std::int64_t>;

inline constexpr std::size_t kMaxPromiseSet = std::size_t{1} << 24;

struct ParityGame {
  int n = 3;
};

struct PBitParityGame {
  int n = 3;
  std::vector<int> marked;  // 0-based, increasing
  Rational alpha{1, 2};
};

struct BoyerGame {
  int n = 2;
  int d = 2;
  int m = 2;
};

// Standalone game: n == P and every player is marked.
struct PolygonGame {
  int n = 3;
  std::vector<int> marked;

  static PolygonGame standalone(int p) {
    PolygonGame g{p, {}};
    for (int i = 0; i < p; ++i) g.marked.push_back(i);
    return g;
  }
  static PolygonGame inscribed(int n, std::vector<int> marked) { return PolygonGame{n, std::move(marked)}; }
  int p() const { return static_cast<int>(marked.size()); }
};

struct ToricGame {
  ToricLattice lattice{3, 2};
  std::vector<int> teams;  // columns carrying the team loops
  int dual_row = 0;        // row of the dual loop crossing every column
};

using GameSpec = std::variant<ParityGame, PBitParityGame, BoyerGame, PolygonGame, ToricGame>;

// Polygon outputs are coded as t0 * 4 + t1 * 2 + t2 with (t0, t1, t2) = (a, b, c) on input 0
// and (d, b, e) on input 1.
inline constexpr int polygon_code(int t0, int t1, int t2) { return t0 * 4 + t1 * 2 + t2; }
inline constexpr int triple_bit(int code, int k) { return (code >> (2 - k)) & 1; }

namespace detail {

inline void require_marked(int n, const std::vector<int>& marked) {
  for (std::size_t k = 0; k < marked.size(); ++k) {
    require(marked[k] >= 0 && marked[k] < n, "marked site out of range");
    if (k > 0) require(marked[k] > marked[k - 1], "marked sites must be strictly increasing");
  }
}

}  // namespace detail

inline void validate(const GameSpec& spec) {
  std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ParityGame>) {
          detail::require(g.n >= 3, "parity game needs N >= 3");
        } else if constexpr (std::is_same_v<T, PBitParityGame>) {
          detail::require(g.marked.size() >= 3, "P-bit game needs P >= 3");
          detail::require(static_cast<int>(g.marked.size()) <= g.n, "P-bit game needs P <= N");
          detail::require_marked(g.n, g.marked);
          detail::require(g.alpha > 0 && g.alpha < 1, "alpha must lie strictly inside (0, 1)");
        } else if constexpr (std::is_same_v<T, BoyerGame>) {
          detail::require(g.n >= 2 && g.d >= 2 && g.m >= 2, "Boyer game needs N, D, M >= 2");
        } else if constexpr (std::is_same_v<T, PolygonGame>) {
          detail::require(g.marked.size() >= 3, "polygon game needs P >= 3");
          detail::require(static_cast<int>(g.marked.size()) <= g.n, "polygon game needs N >= P");
          detail::require_marked(g.n, g.marked);
        } else {
          detail::require(g.teams.size() >= 3, "toric game needs T >= 3 teams");
          std::vector<int> t = g.teams;
          std::sort(t.begin(), t.end());
          detail::require(std::adjacent_find(t.begin(), t.end()) == t.end(), "team columns must be distinct");
          for (int c : t) detail::require(c >= 0 && c < g.lattice.lx(), "team column out of range");
          detail::require(g.dual_row >= 0 && g.dual_row < g.lattice.ly(), "dual loop row out of range");
        }
      },
      spec);
}

inline std::string game_name(const GameSpec& spec) {
  switch (spec.index()) {
    case 0: return "parity";
    case 1: return "pbit";
    case 2: return "boyer";
    case 3: return "polygon";
    default: return "toric";
  }
}

// Entries of an input are the team inputs for the toric game and per-player inputs otherwise.
struct WeightedInput {
  std::vector<int> bits;
  std::int64_t weight = 1;
};

struct InputSet {
  std::vector<WeightedInput> inputs;
  std::int64_t total_weight = 0;

  Rational probability(std::size_t i) const { return Rational(inputs[i].weight, total_weight); }
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("input weight overflows 64 bits");
  return r;
}

inline void check_promise_size(double size) {
  if (size > static_cast<double>(kMaxPromiseSet))
    throw CapacityError("promise set of size " + std::to_string(size) + " exceeds 2^24");
}

// All bit strings of length len with even weight, in increasing binary order.
inline std::vector<std::vector<int>> even_strings(int len) {
  check_promise_size(std::ldexp(1.0, len - 1));
  std::vector<std::vector<int>> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
    if (std::popcount(v) % 2) continue;
    std::vector<int> b(len);
    for (int k = 0; k < len; ++k) b[k] = (v >> (len - 1 - k)) & 1;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace detail

inline InputSet enumerate_inputs(const GameSpec& spec) {
  validate(spec);
  InputSet set;
  if (const auto* g = std::get_if<ParityGame>(&spec)) {
    for (auto& b : detail::even_strings(g->n)) set.inputs.push_back({std::move(b), 1});
  } else if (const auto* g = std::get_if<PBitParityGame>(&spec)) {
    const int p = static_cast<int>(g->marked.size());
    const std::int64_t num = g->alpha.numerator();
    const std::int64_t rest = g->alpha.denominator() - num;
    for (const auto& local : detail::even_strings(p)) {
      std::vector<int> b(g->n, 0);
      std::int64_t w = 1;
      for (int k = 0; k < p; ++k) {
        b[g->marked[k]] = local[k];
        w = detail::checked_mul(w, local[k] ? num : rest);
      }
      set.inputs.push_back({std::move(b), w});
    }
  } else if (const auto* g = std::get_if<BoyerGame>(&spec)) {
    detail::check_promise_size(std::pow(static_cast<double>(g->d), g->n - 1));
    std::vector<int> a(g->n, 0);
    for (;;) {
      int sum = 0;
      for (int v : a) sum += v;
      if (sum % g->d == 0) set.inputs.push_back({a, 1});
      int k = g->n - 1;
      while (k >= 0 && ++a[k] == g->d) a[k--] = 0;
      if (k < 0) break;
    }
  } else if (const auto* g = std::get_if<PolygonGame>(&spec)) {
    const int p = g->p();
    detail::check_promise_size(std::ldexp(1.0, p));
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << p); ++v) {
      std::vector<int> b(g->n, 0);
      for (int k = 0; k < p; ++k) b[g->marked[k]] = (v >> (p - 1 - k)) & 1;
      set.inputs.push_back({std::move(b), 1});
    }
  } else {
    const auto& t = std::get<ToricGame>(spec);
    for (auto& b : detail::even_strings(static_cast<int>(t.teams.size()))) set.inputs.push_back({std::move(b), 1});
  }
  set.total_weight = 0;
  for (const auto& in : set.inputs) set.total_weight += in.weight;
  return set;
}

// Index into enumerate_inputs(spec).inputs drawn from the game distribution.
inline std::size_t sample_input(const InputSet& set, std::mt19937_64& rng) {
  std::vector<double> w;
  w.reserve(set.inputs.size());
  for (const auto& in : set.inputs) w.push_back(static_cast<double>(in.weight));
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  return dist(rng);
}

// Input pattern of a matching of the P-gon: ones exactly on matched vertices.
inline std::vector<int> polygon_input_for_matching(int p, const Matching& m) {
  detail::require(m.p == p, "matching belongs to a different polygon");
  if (m.edges.empty()) throw ParameterError("empty matching carries no global condition (r >= 1 required)");
  if (!is_valid_matching(m)) throw ParameterError("invalid matching: edges overlap or are out of range");
  std::vector<int> x(p, 0);
  for (int e : m.edges) x[e] = x[(e + 1) % p] = 1;
  return x;
}

// Matchings of the P-gon whose input pattern equals the marked-site input bits.
inline std::vector<Matching> matchings_for_input(int p, const std::vector<int>& local) {
  std::vector<Matching> out;
  const int ones = static_cast<int>(std::count(local.begin(), local.end(), 1));
  if (ones == 0 || ones % 2) return out;
  for (const auto& m : cycle_matchings(p, ones / 2))
    if (polygon_input_for_matching(p, m) == local) out.push_back(m);
  return out;
}

struct PlayerLayout {
  std::vector<int> input_alphabet;
  std::vector<int> output_alphabet;
};

inline PlayerLayout player_layout(const GameSpec& spec) {
  validate(spec);
  PlayerLayout l;
  if (const auto* g = std::get_if<ParityGame>(&spec)) {
    l.input_alphabet.assign(g->n, 2);
    l.output_alphabet.assign(g->n, 2);
  } else if (const auto* g = std::get_if<PBitParityGame>(&spec)) {
    l.input_alphabet.assign(g->n, 1);
    for (int s : g->marked) l.input_alphabet[s] = 2;
    l.output_alphabet.assign(g->n, 2);
  } else if (const auto* g = std::get_if<BoyerGame>(&spec)) {
    l.input_alphabet.assign(g->n, g->d);
    l.output_alphabet.assign(g->n, g->m);
  } else if (const auto* g = std::get_if<PolygonGame>(&spec)) {
    l.input_alphabet.assign(g->n, 1);
    for (int s : g->marked) l.input_alphabet[s] = 2;
    l.output_alphabet.assign(g->n, 8);
  } else {
    const auto& t = std::get<ToricGame>(spec);
    l.input_alphabet.assign(t.lattice.lx(), 1);
    for (int c : t.teams) l.input_alphabet[c] = 2;
    l.output_alphabet.assign(t.lattice.lx(), 2);
  }
  return l;
}

// Local input seen by each output-producing player. Toric players sit on the dual loop bond
// of column x and see the input of the team on that column.
inline std::vector<int> local_inputs(const GameSpec& spec, const std::vector<int>& input) {
  if (const auto* t = std::get_if<ToricGame>(&spec)) {
    std::vector<int> loc(t->lattice.lx(), 0);
    for (std::size_t i = 0; i < t->teams.size(); ++i) loc[t->teams[i]] = input[i];
    return loc;
  }
  return input;
}

namespace detail {

inline void check_output(const GameSpec& spec, const std::vector<int>& output) {
  const auto layout = player_layout(spec);
  if (output.size() != layout.output_alphabet.size())
    throw ParameterError("output has " + std::to_string(output.size()) + " entries, expected " +
                         std::to_string(layout.output_alphabet.size()));
  for (std::size_t i = 0; i < output.size(); ++i)
    if (output[i] < 0 || output[i] >= layout.output_alphabet[i])
      throw ParameterError("output symbol out of range for player " + std::to_string(i));
}

inline int sum_of(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Global condition attached to a matching of the inscribed polygon.
inline bool polygon_matching_holds(const PolygonGame& g, const Matching& m, const std::vector<int>& out) {
  const int p = g.p();
  std::vector<int> role(g.n, 0);  // 0 free (a), 1 first endpoint (d), 2 second endpoint (e), 3 inside (c)
  for (int e : m.edges) {
    const int from = g.marked[e];
    const int to = g.marked[(e + 1) % p];
    role[from] = 1;
    role[to] = 2;
    for (int l = (from + 1) % g.n; l != to; l = (l + 1) % g.n) role[l] = 3;
  }
  int total = 0;
  for (int i = 0; i < g.n; ++i) total += role[i] <= 1 ? triple_bit(out[i], 0) : triple_bit(out[i], 2);
  return total % 2 == static_cast<int>(m.edges.size()) % 2;
}

}  // namespace detail

inline bool judge(const GameSpec& spec, const std::vector<int>& input, const std::vector<int>& output) {
  detail::check_output(spec, output);
  if (const auto* g = std::get_if<ParityGame>(&spec)) {
    detail::require(static_cast<int>(input.size()) == g->n, "input length mismatch");
    return detail::sum_of(output) % 2 == (detail::sum_of(input) / 2) % 2;
  }
  if (const auto* g = std::get_if<PBitParityGame>(&spec)) {
    detail::require(static_cast<int>(input.size()) == g->n, "input length mismatch");
    return detail::sum_of(output) % 2 == (detail::sum_of(input) / 2) % 2;
  }
  if (const auto* g = std::get_if<BoyerGame>(&spec)) {
    detail::require(static_cast<int>(input.size()) == g->n, "input length mismatch");
    return detail::sum_of(output) % g->m == (detail::sum_of(input) / g->d) % g->m;
  }
  if (const auto* g = std::get_if<PolygonGame>(&spec)) {
    detail::require(static_cast<int>(input.size()) == g->n, "input length mismatch");
    int bsum = 0, asum = 0;
    for (int i = 0; i < g->n; ++i) {
      const int o = output[i];
      if ((triple_bit(o, 0) + triple_bit(o, 1) + triple_bit(o, 2)) % 2) return false;
      bsum += triple_bit(o, 1);
      asum += triple_bit(o, 0);
    }
    if (bsum % 2) return false;
    std::vector<int> local(g->p());
    for (int k = 0; k < g->p(); ++k) local[k] = input[g->marked[k]];
    if (std::all_of(local.begin(), local.end(), [](int v) { return v == 0; })) return asum % 2 == 0;
    for (const auto& m : matchings_for_input(g->p(), local))
      if (!detail::polygon_matching_holds(*g, m, output)) return false;
    return true;
  }
  const auto& t = std::get<ToricGame>(spec);
  detail::require(input.size() == t.teams.size(), "input length mismatch");
  return detail::sum_of(output) % 2 == (detail::sum_of(input) / 2) % 2;
}

// Win condition written as linear congruences over local outputs:
// for every constraint, sum_players coeff[player][output] == target (mod modulus).
struct LinearConstraint {
  int modulus = 2;
  int target = 0;
  std::vector<std::vector<int>> coeff;
};

struct InputConstraints {
  std::vector<int> local_inputs;
  std::int64_t weight = 1;
  std::vector<LinearConstraint> constraints;
};

inline std::vector<InputConstraints> linear_form(const GameSpec& spec) {
  const auto set = enumerate_inputs(spec);
  const auto layout = player_layout(spec);
  const std::size_t players = layout.output_alphabet.size();
  auto sum_constraint = [&](int modulus, int target) {
    LinearConstraint c{modulus, target, {}};
    for (std::size_t p = 0; p < players; ++p) {
      std::vector<int> row(layout.output_alphabet[p]);
      for (int o = 0; o < layout.output_alphabet[p]; ++o) row[o] = o % modulus;
      c.coeff.push_back(std::move(row));
    }
    return c;
  };
  std::vector<InputConstraints> out;
  for (const auto& in : set.inputs) {
    InputConstraints ic{local_inputs(spec, in.bits), in.weight, {}};
    if (const auto* g = std::get_if<BoyerGame>(&spec)) {
      ic.constraints.push_back(sum_constraint(g->m, (detail::sum_of(in.bits) / g->d) % g->m));
    } else if (const auto* g = std::get_if<PolygonGame>(&spec)) {
      auto bit_constraint = [&](int target, auto&& pick) {
        LinearConstraint c{2, target, {}};
        for (std::size_t p = 0; p < players; ++p) {
          std::vector<int> row(8);
          for (int o = 0; o < 8; ++o) row[o] = pick(static_cast<int>(p), o);
          c.coeff.push_back(std::move(row));
        }
        return c;
      };
      for (std::size_t q = 0; q < players; ++q)
        ic.constraints.push_back(bit_constraint(0, [&](int p, int o) {
          return p == static_cast<int>(q) ? (triple_bit(o, 0) + triple_bit(o, 1) + triple_bit(o, 2)) % 2 : 0;
        }));
      ic.constraints.push_back(bit_constraint(0, [](int, int o) { return triple_bit(o, 1); }));
      std::vector<int> local(g->p());
      for (int k = 0; k < g->p(); ++k) local[k] = in.bits[g->marked[k]];
      if (std::all_of(local.begin(), local.end(), [](int v) { return v == 0; })) {
        ic.constraints.push_back(bit_constraint(0, [](int, int o) { return triple_bit(o, 0); }));
      }
      for (const auto& m : matchings_for_input(g->p(), local)) {
        std::vector<int> role(g->n, 0);
        for (int e : m.edges) {
          const int from = g->marked[e];
          const int to = g->marked[(e + 1) % g->p()];
          role[from] = 1;
          role[to] = 2;
          for (int l = (from + 1) % g->n; l != to; l = (l + 1) % g->n) role[l] = 3;
        }
        ic.constraints.push_back(bit_constraint(static_cast<int>(m.edges.size()) % 2, [&](int p, int o) {
          return role[p] <= 1 ? triple_bit(o, 0) : triple_bit(o, 2);
        }));
      }
    } else {
      const int target = (detail::sum_of(in.bits) / 2) % 2;
      ic.constraints.push_back(sum_constraint(2, target));
    }
    out.push_back(std::move(ic));
  }
  return out;
}

}  // namespace nlgames
