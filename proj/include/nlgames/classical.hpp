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
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nlgames/combinatorics.hpp"
#include "nlgames/error.hpp"
#include "nlgames/games.hpp"

namespace nlgames {

// table[player][local input] -> output symbol.
struct ClassicalStrategy {
  std::vector<std::vector<int>> table;

  bool operator==(const ClassicalStrategy&) const = default;
  auto operator<=>(const ClassicalStrategy&) const = default;
};

struct StrategyEvaluation {
  Rational probability{0};
  std::int64_t winning_weight = 0;
  std::int64_t total_weight = 0;
  std::vector<std::vector<int>> losing_inputs;
};

inline void check_strategy(const GameSpec& spec, const ClassicalStrategy& s) {
  const auto layout = player_layout(spec);
  if (s.table.size() != layout.output_alphabet.size())
    throw ParameterError("strategy has the wrong number of players");
  for (std::size_t p = 0; p < s.table.size(); ++p) {
    if (static_cast<int>(s.table[p].size()) != layout.input_alphabet[p])
      throw ParameterError("strategy is not total for player " + std::to_string(p));
    for (int o : s.table[p])
      if (o < 0 || o >= layout.output_alphabet[p])
        throw ParameterError("strategy output out of range for player " + std::to_string(p));
  }
}

inline std::vector<int> strategy_outputs(const GameSpec& spec, const ClassicalStrategy& s,
                                         const std::vector<int>& input) {
  const auto loc = local_inputs(spec, input);
  std::vector<int> out(s.table.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const int x = s.table[p].size() == 1 ? 0 : loc[p];
    out[p] = s.table[p][x];
  }
  return out;
}

inline StrategyEvaluation evaluate_strategy(const GameSpec& spec, const ClassicalStrategy& s) {
  check_strategy(spec, s);
  const InputSet set = enumerate_inputs(spec);
  StrategyEvaluation ev;
  ev.total_weight = set.total_weight;
  for (const auto& in : set.inputs) {
    if (judge(spec, in.bits, strategy_outputs(spec, s, in.bits)))
      ev.winning_weight += in.weight;
    else
      ev.losing_inputs.push_back(in.bits);
  }
  ev.probability = Rational(ev.winning_weight, ev.total_weight);
  return ev;
}

enum class Restriction { Full, Condition1Respecting };

struct SearchOptions {
  Restriction restriction = Restriction::Full;
  int workers = 1;
  bool allow_long_running = false;
};

struct SearchResult {
  Rational optimum{0};
  std::uint64_t optimal_count = 0;
  ClassicalStrategy witness;
  std::uint64_t examined = 0;
  double space_size = 0.0;
  Restriction restriction = Restriction::Full;
  bool long_running = false;
  double seconds = 0.0;
};

inline constexpr double kLongRunningSpace = 67108864.0;  // 2^26
inline constexpr double kMaxSearchSpace = 4294967296.0;  // 2^32

namespace detail {

// Output symbols a player may use on one local input.
inline std::vector<int> allowed_outputs(const GameSpec& spec, int alphabet, Restriction r) {
  std::vector<int> out;
  for (int o = 0; o < alphabet; ++o) {
    if (r == Restriction::Condition1Respecting &&
        (triple_bit(o, 0) + triple_bit(o, 1) + triple_bit(o, 2)) % 2)
      continue;
    out.push_back(o);
  }
  (void)spec;
  return out;
}

struct Constraint {
  int modulus;
  int target;
  int closing_player;
  std::vector<std::vector<int>> coeff;  // [player][output]
};

struct CompiledInput {
  std::int64_t weight;
  std::vector<int> local;  // local input per player
  std::vector<Constraint> constraints;
};

struct LocalChoice {
  std::vector<int> outputs;  // per local input
};

class Searcher {
 public:
  Searcher(const std::vector<CompiledInput>& inputs, const std::vector<std::vector<LocalChoice>>& choices,
           std::int64_t total)
      : inputs_(inputs), choices_(choices), total_(total) {
    players_ = static_cast<int>(choices.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      offsets_.push_back(static_cast<int>(sums_.size()));
      for (std::size_t c = 0; c < inputs[i].constraints.size(); ++c) sums_.push_back(0);
    }
    lost_.assign(inputs.size(), 0);
    pick_.assign(players_, 0);
  }

  void run_slice(int worker, int workers) {
    for (std::size_t c = worker; c < choices_[0].size(); c += workers) descend(0, c, 0);
  }

  std::int64_t best = -1;
  std::uint64_t count = 0;
  std::uint64_t examined = 0;
  std::vector<std::size_t> best_pick;

 private:
  void descend(int player, std::size_t choice, std::int64_t lost) {
    pick_[player] = choice;
    const auto& outs = choices_[player][choice].outputs;
    std::vector<std::size_t> newly_lost;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const auto& in = inputs_[i];
      const int o = outs[outs.size() == 1 ? 0 : in.local[player]];
      for (std::size_t c = 0; c < in.constraints.size(); ++c) {
        const auto& con = in.constraints[c];
        int& s = sums_[offsets_[i] + c];
        s = (s + con.coeff[player][o]) % con.modulus;
        if (con.closing_player == player && s != con.target && !lost_[i]) {
          lost_[i] = 1;
          newly_lost.push_back(i);
          lost += in.weight;
        }
      }
    }
    if (total_ - lost >= best) {
      if (player + 1 == players_) {
        ++examined;
        const std::int64_t win = total_ - lost;
        if (win > best) {
          best = win;
          count = 1;
          best_pick = pick_;
        } else if (win == best) {
          ++count;
        }
      } else {
        for (std::size_t c = 0; c < choices_[player + 1].size(); ++c) descend(player + 1, c, lost);
      }
    }
    for (std::size_t i : newly_lost) lost_[i] = 0;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const auto& in = inputs_[i];
      const int o = outs[outs.size() == 1 ? 0 : in.local[player]];
      for (std::size_t c = 0; c < in.constraints.size(); ++c) {
        const auto& con = in.constraints[c];
        int& s = sums_[offsets_[i] + c];
        s = ((s - con.coeff[player][o]) % con.modulus + con.modulus) % con.modulus;
      }
    }
  }

  const std::vector<CompiledInput>& inputs_;
  const std::vector<std::vector<LocalChoice>>& choices_;
  std::int64_t total_;
  int players_ = 0;
  std::vector<int> offsets_;
  std::vector<int> sums_;
  std::vector<char> lost_;
  std::vector<std::size_t> pick_;
};

// All maps from the local input alphabet to allowed outputs, in lexicographic order.
inline std::vector<LocalChoice> local_choices(int inputs, const std::vector<int>& allowed) {
  std::vector<LocalChoice> out;
  std::vector<std::size_t> idx(inputs, 0);
  for (;;) {
    LocalChoice c;
    for (int x = 0; x < inputs; ++x) c.outputs.push_back(allowed[idx[x]]);
    out.push_back(std::move(c));
    int k = inputs - 1;
    while (k >= 0 && ++idx[k] == allowed.size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace detail

// Exact optimum over deterministic strategies with exhaustive enumeration.
inline SearchResult exhaustive_search(const GameSpec& spec, const SearchOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (opts.restriction == Restriction::Condition1Respecting && !std::holds_alternative<PolygonGame>(spec))
    throw ParameterError("condition-1 restriction applies to polygon games only");
  const auto layout = player_layout(spec);
  const int players = static_cast<int>(layout.output_alphabet.size());

  std::vector<std::vector<detail::LocalChoice>> choices(players);
  double space = 1.0;
  for (int p = 0; p < players; ++p) {
    const auto allowed = detail::allowed_outputs(spec, layout.output_alphabet[p], opts.restriction);
    space *= std::pow(static_cast<double>(allowed.size()), layout.input_alphabet[p]);
    if (space > kMaxSearchSpace)
      throw CapacityError("search space exceeds 2^32 strategies (at least " + std::to_string(space) + ")");
  }
  const bool long_running = space > kLongRunningSpace;
  if (long_running && !opts.allow_long_running)
    throw CapacityError("search space of " + std::to_string(space) +
                        " strategies exceeds 2^26; pass the long-running flag");
  for (int p = 0; p < players; ++p)
    choices[p] = detail::local_choices(layout.input_alphabet[p],
                                       detail::allowed_outputs(spec, layout.output_alphabet[p], opts.restriction));

  std::vector<detail::CompiledInput> compiled;
  std::int64_t total = 0;
  for (const auto& ic : linear_form(spec)) {
    detail::CompiledInput ci{ic.weight, ic.local_inputs, {}};
    for (const auto& c : ic.constraints) {
      int closing = 0;
      for (int p = 0; p < players; ++p)
        if (std::any_of(c.coeff[p].begin(), c.coeff[p].end(), [&](int v) { return v % c.modulus != 0; }))
          closing = p;
      ci.constraints.push_back({c.modulus, c.target, closing, c.coeff});
    }
    total += ic.weight;
    compiled.push_back(std::move(ci));
  }

  const int workers = std::clamp(opts.workers, 1, static_cast<int>(choices[0].size()));
  std::vector<detail::Searcher> searchers;
  for (int w = 0; w < workers; ++w) searchers.emplace_back(compiled, choices, total);
  if (workers == 1) {
    searchers[0].run_slice(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          searchers[w].run_slice(w, workers);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  SearchResult res;
  res.space_size = space;
  res.restriction = opts.restriction;
  res.long_running = long_running;
  std::int64_t best = -1;
  std::optional<ClassicalStrategy> witness;
  for (const auto& s : searchers) {
    res.examined += s.examined;
    if (s.best < best || s.best < 0) continue;
    ClassicalStrategy cand;
    for (int p = 0; p < players; ++p) cand.table.push_back(choices[p][s.best_pick[p]].outputs);
    if (s.best > best) {
      best = s.best;
      res.optimal_count = s.count;
      witness = cand;
    } else {
      res.optimal_count += s.count;
      if (cand < *witness) witness = cand;
    }
  }
  res.optimum = Rational(best, total);
  res.witness = *witness;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

// ---- closed forms ----

struct ClassicalClosedForms {
  std::optional<Rational> optimum;
  std::optional<double> optimum_value;
  std::optional<Rational> lower_bound;
  std::optional<double> lower_bound_value;
  std::optional<Rational> upper_bound;
  std::optional<double> upper_bound_value;
};

inline Rational half_plus_power(int exponent) { return Rational(1, 2) + Rational(1, std::int64_t{1} << exponent); }

inline double boyer_s(int d, int m);
inline double boyer_upper_bound(int d, int m, int n);

inline ClassicalClosedForms pcl_closed_forms(const GameSpec& spec) {
  validate(spec);
  ClassicalClosedForms c;
  if (const auto* g = std::get_if<ParityGame>(&spec)) {
    detail::require(g->n <= 62, "closed form supports N <= 62");
    c.optimum = half_plus_power((g->n + 1) / 2);
  } else if (const auto* g = std::get_if<PBitParityGame>(&spec)) {
    const int p = static_cast<int>(g->marked.size());
    const double a = boost::rational_cast<double>(g->alpha);
    const double q = a * a + (1 - a) * (1 - a);
    const double den = 1.0 + std::pow(1 - 2 * a, p);
    const double v = 0.5 + (p % 2 == 0 ? std::pow(q, p / 2) : std::pow(q, (p - 1) / 2) * (1 - a)) / den;
    // odd P: exact at alpha = 1/2, otherwise only achievable
    if (p % 2 == 0 || g->alpha == Rational(1, 2))
      c.optimum_value = v;
    else
      c.lower_bound_value = v;
    if (g->alpha == Rational(1, 2) && p <= 62) c.optimum = half_plus_power((p + 1) / 2);
  } else if (const auto* g = std::get_if<BoyerGame>(&spec)) {
    if (g->d == 2 && g->m == 2) c.optimum = half_plus_power((g->n + 1) / 2);
    c.upper_bound_value = boyer_upper_bound(g->d, g->m, g->n);
  } else if (const auto* g = std::get_if<PolygonGame>(&spec)) {
    const int p = g->p();
    detail::require(p <= 62, "closed form supports P <= 62");
    if (p % 2 == 0) {
      c.optimum = Rational(1);
    } else {
      const std::int64_t pow2 = std::int64_t{1} << p;
      c.lower_bound = Rational(pow2 - static_cast<std::int64_t>(fibonacci(p - 1)), pow2);
      c.upper_bound = Rational(pow2 - 1, pow2);
      if (p == 3) c.optimum = Rational(7, 8);
    }
  } else {
    const auto& t = std::get<ToricGame>(spec);
    c.optimum = half_plus_power((static_cast<int>(t.teams.size()) + 1) / 2);
  }
  if (c.optimum && !c.optimum_value) c.optimum_value = boost::rational_cast<double>(*c.optimum);
  return c;
}

// (1,1,0) for every player except the last, which plays (0,0,0) on input 0 and (1,0,1) on input 1.
inline ClassicalStrategy reference_polygon_strategy(const PolygonGame& game) {
  validate(game);
  ClassicalStrategy s;
  const int last = game.marked.back();
  for (int i = 0; i < game.n; ++i) {
    const bool marked = std::find(game.marked.begin(), game.marked.end(), i) != game.marked.end();
    if (i == last)
      s.table.push_back({polygon_code(0, 0, 0), polygon_code(1, 0, 1)});
    else if (marked)
      s.table.push_back({polygon_code(1, 1, 0), polygon_code(1, 1, 0)});
    else
      s.table.push_back({polygon_code(1, 1, 0)});
  }
  return s;
}

// ---- Boyer bound ----

// max over n in [1, M-1], k in [0, D-1], b : Z_D -> Z_M of |sum_a w_D^{(k - n/M) a} w_M^{n b(a)}|.
inline double boyer_s(int d, int m) {
  detail::require(d >= 2 && m >= 2, "Boyer s needs D, M >= 2");
  if (std::pow(static_cast<double>(m), d) > 16777216.0) throw CapacityError("M^D exceeds 2^24");
  const double two_pi = 2.0 * std::numbers::pi;
  double best = 0.0;
  std::vector<int> b(d);
  for (int n = 1; n < m; ++n) {
    for (int k = 0; k < d; ++k) {
      std::vector<std::complex<double>> base(d);
      for (int a = 0; a < d; ++a) base[a] = std::polar(1.0, two_pi * (k - static_cast<double>(n) / m) * a / d);
      std::vector<std::complex<double>> rot(m);
      for (int v = 0; v < m; ++v) rot[v] = std::polar(1.0, two_pi * n * v / m);
      std::fill(b.begin(), b.end(), 0);
      for (;;) {
        std::complex<double> s = 0.0;
        for (int a = 0; a < d; ++a) s += base[a] * rot[b[a]];
        best = std::max(best, std::abs(s));
        int j = d - 1;
        while (j >= 0 && ++b[j] == m) b[j--] = 0;
        if (j < 0) break;
      }
    }
  }
  return best;
}

// 1/M + (M-1)/M s (s/D)^{N-1}.
inline double boyer_upper_bound(int d, int m, int n) {
  detail::require(n >= 1, "player count must be positive");
  const double s = boyer_s(d, m);
  return 1.0 / m + (m - 1.0) / m * s * std::pow(s / d, n - 1);
}

}  // namespace nlgames
