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


#include <gtest/gtest.h>

#include <random>

#include "nlgames/models.hpp"
#include "nlgames/protocols.hpp"
#include "oracle.hpp"

using namespace nlgames;

namespace {

// Dense simulation: every player applies diag(1, i^x) then H and measures Z.
double bbt_dense(int n, const oracle::Vec& psi, const std::vector<std::vector<int>>& inputs,
                 const std::vector<double>& weights) {
  double total = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    oracle::Mat u = oracle::Mat::Identity(1, 1);
    int s = 0;
    for (int p = 0; p < n; ++p) {
      oracle::Mat ph = oracle::I(2);
      if (inputs[k][p]) ph(1, 1) = oracle::cplx(0, 1);
      u = oracle::kron(u, oracle::H() * ph);
      s += inputs[k][p];
    }
    const oracle::Vec out = u * psi;
    for (Eigen::Index i = 0; i < out.size(); ++i)
      if (std::popcount(static_cast<std::uint64_t>(i)) % 2 == (s / 2) % 2) total += weights[k] * std::norm(out[i]);
  }
  return total;
}

// Dense qudit protocol: diag(exp(-2 pi i a k / (D M))) then the discrete Fourier transform.
double boyer_dense(int n, int d, int m, const oracle::Vec& psi) {
  double total = 0.0;
  int count = 0;
  std::vector<int> a(n, 0);
  for (;;) {
    int sum = 0;
    for (int v : a) sum += v;
    if (sum % d == 0) {
      ++count;
      oracle::Mat u = oracle::Mat::Identity(1, 1);
      for (int p = 0; p < n; ++p) {
        oracle::Mat c = oracle::Mat::Zero(m, m);
        for (int k = 0; k < m; ++k) c(k, k) = std::polar(1.0, -2 * M_PI * a[p] * k / double(d * m));
        u = oracle::kron(u, oracle::dft(m) * c);
      }
      const oracle::Vec out = u * psi;
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        int digits = 0;
        for (Eigen::Index r = i; r > 0; r /= m) digits += static_cast<int>(r % m);
        if (digits % m == (sum / d) % m) total += std::norm(out[i]);
      }
    }
    int k = n - 1;
    while (k >= 0 && ++a[k] == d) a[k--] = 0;
    if (k < 0) break;
  }
  return total / count;
}

}  // namespace

TEST(Parity, OracleMatchesDenseCircuit) {
  std::mt19937_64 rng(21);
  for (int n : {3, 4, 5}) {
    const auto psi = random_state(n, 2, rng);
    const auto rep = oracle_win_probability(psi, ParityGame{n}, Protocol::Bbt);
    EXPECT_NEAR(rep.value, oracle::parity_quantum(n, psi.amplitudes()), 1e-12);
    EXPECT_NEAR(rep.value, pqu_theorem1(psi), 1e-12);
  }
}

TEST(Parity, GhzWinsAndGhzMinusLoses) {
  for (int n = 3; n <= 8; ++n) {
    EXPECT_NEAR(oracle_win_probability(make_named_state(NamedState::GhzPlus, n, 2), ParityGame{n}, Protocol::Bbt).value,
                1.0, 1e-12);
    EXPECT_NEAR(pqu_theorem1(make_named_state(NamedState::GhzMinus, n, 2)), 0.0, 1e-12);
  }
}

TEST(Parity, ReportStructure) {
  const auto rep = oracle_win_probability(make_named_state(NamedState::XPolarized, 3, 2), ParityGame{3}, Protocol::Bbt);
  EXPECT_EQ(rep.per_input.size(), 4u);
  Rational total(0);
  for (const auto& in : rep.per_input) total += in.probability;
  EXPECT_EQ(total, Rational(1));
  EXPECT_EQ(rep.game, "parity");
}

TEST(Parity, IncompatibleProtocolRejected) {
  const auto psi = make_named_state(NamedState::GhzPlus, 3, 2);
  EXPECT_THROW(oracle_win_probability(psi, ParityGame{3}, Protocol::Cluster), ParameterError);
  EXPECT_THROW(oracle_win_probability(make_named_state(NamedState::GhzPlus, 4, 2), ParityGame{3}, Protocol::Bbt),
               ParameterError);
}

TEST(PBit, StabilizerMatchesDense) {
  std::mt19937_64 rng(4);
  const PBitParityGame g{5, {0, 2, 3}, Rational(1, 2)};
  const auto set = enumerate_inputs(g);
  std::vector<std::vector<int>> ins;
  std::vector<double> w;
  for (std::size_t i = 0; i < set.inputs.size(); ++i) {
    ins.push_back(set.inputs[i].bits);
    w.push_back(boost::rational_cast<double>(set.probability(i)));
  }
  for (int t = 0; t < 5; ++t) {
    const auto psi = random_state(5, 2, rng);
    const double ref = bbt_dense(5, psi.amplitudes(), ins, w);
    EXPECT_NEAR(oracle_win_probability(psi, g, Protocol::Bbt).value, ref, 1e-12);
    EXPECT_NEAR(pqu_pbit_stabilizer(psi, g), ref, 1e-12);
    EXPECT_NEAR(pqu_three_bit_correlators(psi, g.marked), ref, 1e-12);
  }
}

TEST(PBit, AlphaWeightedOracleMatchesDense) {
  std::mt19937_64 rng(8);
  const PBitParityGame g{4, {0, 1, 3}, Rational(1, 5)};
  const auto set = enumerate_inputs(g);
  std::vector<std::vector<int>> ins;
  std::vector<double> w;
  for (std::size_t i = 0; i < set.inputs.size(); ++i) {
    ins.push_back(set.inputs[i].bits);
    w.push_back(boost::rational_cast<double>(set.probability(i)));
  }
  const auto psi = random_state(4, 2, rng);
  EXPECT_NEAR(oracle_win_probability(psi, g, Protocol::Bbt).value, bbt_dense(4, psi.amplitudes(), ins, w), 1e-12);
  EXPECT_FALSE(analytic_win_probability(psi, g).has_value());
}

TEST(PBit, IsingGroundStateCrossCheck) {
  const auto st = model_ground_state(IsingSpec{10, 1.0, 0.5, 0.0}).states[0];
  const PBitParityGame g{10, {1, 4, 7}, Rational(1, 2)};
  const double oracle = oracle_win_probability(st, g, Protocol::Bbt).value;
  EXPECT_NEAR(oracle, pqu_pbit_stabilizer(st, g), 1e-10);
  EXPECT_NEAR(oracle, pqu_three_bit_symmetric(st, g.marked), 1e-10);
}

TEST(PBit, ClosedForms) {
  const auto at = [](double g) { return pqu_pbit_closed_form(std::pow(1 - g * g, 0.125), 8).advantage; };
  EXPECT_NEAR(at(0.75), 0.27, 0.01);
  EXPECT_NEAR(at(0.99), 0.03, 0.01);
  EXPECT_NEAR(pqu_pbit_closed_form(1.0, 6, 0.3).pqu, 1.0, 1e-14);
  EXPECT_NEAR(pqu_three_bit_asymptotic(three_bit_threshold()), 0.75, 1e-15);
  EXPECT_NEAR(three_bit_threshold(), 0.99380799, 1e-8);
  EXPECT_NEAR(pbit_m_star(0.5), std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(g_from_magnetization(pbit_m_star(0.5)), std::sqrt(408 * std::sqrt(2.0) - 576), 1e-12);
  // classical value at alpha = 1/2 is 1/2 + 2^{-ceil(P/2)}
  for (int p = 3; p <= 9; ++p) EXPECT_NEAR(pcl_pbit(p, 0.5), 0.5 + std::ldexp(1.0, -(p + 1) / 2), 1e-15);
}

TEST(PBit, ThresholdIsRootOfAdvantage) {
  // at m*, the P -> infinity advantage of the alpha family vanishes: (1 - a + a m)^2 = q
  for (double a : {0.1, 0.3, 0.5, 0.8}) {
    const double m = pbit_m_star(a);
    EXPECT_NEAR(std::pow(1 - a + a * m, 2), a * a + (1 - a) * (1 - a), 1e-14);
  }
}

TEST(Boyer, QuditFormulaMatchesDense) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 4; ++t) {
    const auto psi = random_state(3, 3, rng);
    const double ref = boyer_dense(3, 3, 3, psi.amplitudes());
    EXPECT_NEAR(oracle_win_probability(psi, BoyerGame{3, 3, 3}, Protocol::Boyer).value, ref, 1e-12);
    EXPECT_NEAR(pqu_theorem2(psi, 3), ref, 1e-12);
    EXPECT_NEAR(pqu_theorem2_cat(psi, 3), ref, 1e-12);
  }
}

TEST(Boyer, GhzWinsAndEmbeddedGhzRatio) {
  const auto ghz = make_named_state(NamedState::GhzQudit, 3, 3);
  EXPECT_NEAR(oracle_win_probability(ghz, BoyerGame{3, 3, 3}, Protocol::Boyer).value, 1.0, 1e-12);
  for (auto [ms, m] : {std::pair{2, 3}, {2, 4}, {3, 4}}) {
    const auto s = embedded_ghz(3, ms, m);
    EXPECT_NEAR(pqu_theorem2(s, m), double(ms) / m, 1e-12);
    EXPECT_NEAR(oracle_win_probability(s, BoyerGame{3, m, m}, Protocol::Boyer).value, double(ms) / m, 1e-12);
  }
}

TEST(Boyer, UnequalDAndM) {
  std::mt19937_64 rng(2);
  const auto psi = random_state(3, 2, rng);
  EXPECT_NEAR(oracle_win_probability(psi, BoyerGame{3, 3, 2}, Protocol::Boyer).value, boyer_dense(3, 3, 2, psi.amplitudes()),
              1e-12);
}

TEST(Polygon, ClusterStateWinsEverywhere) {
  for (int p : {3, 5}) {
    const auto g = PolygonGame::standalone(p);
    const auto c = make_named_state(NamedState::Cluster, 2 * p, 2);
    const auto rep = oracle_win_probability(c, g, Protocol::Cluster);
    for (const auto& in : rep.per_input) EXPECT_NEAR(in.win, 1.0, 1e-12);
    EXPECT_NEAR(pqu_polygon_stabilizer(c, g), 1.0, 1e-12);
  }
}

TEST(Polygon, StabilizerFormulaMatchesOracleOnRandomStates) {
  std::mt19937_64 rng(12);
  for (const auto& g : {PolygonGame::standalone(3), PolygonGame::inscribed(4, {0, 1, 3})}) {
    for (int t = 0; t < 3; ++t) {
      const auto psi = random_state(2 * g.n, 2, rng);
      const auto rep = oracle_win_probability(psi, g, Protocol::Cluster);
      const auto wins = polygon_input_wins(psi, g);
      for (std::size_t i = 0; i < wins.size(); ++i) EXPECT_NEAR(rep.per_input[i].win, wins[i], 1e-12);
    }
  }
}

TEST(Polygon, PerturbedChainFormulasAgree) {
  const auto g = PolygonGame::standalone(5);
  const auto st = model_ground_state(ClusterChainSpec{5, 0.2}).states[0];
  const double oracle = oracle_win_probability(st, g, Protocol::Cluster).value;
  EXPECT_NEAR(pqu_polygon_stabilizer(st, g), oracle, 1e-10);
  EXPECT_NEAR(pqu_polygon_symmetric(st, g), oracle, 1e-10);
  EXPECT_LT(oracle, 1.0);
}

TEST(Polygon, SymmetricFormulaNeedsOddP) {
  const auto g = PolygonGame::standalone(4);
  EXPECT_THROW(pqu_polygon_symmetric(make_named_state(NamedState::Cluster, 8, 2), g), ParameterError);
}

TEST(Polygon, Estimate) {
  for (int p : {3, 5, 7}) {
    EXPECT_NEAR(pqu_polygon_estimate(1.0, p).value, 1.0, 1e-12);
    EXPECT_NEAR(pqu_polygon_estimate(0.0, p).value, 1.0 - (lucas_number(p) - 1.0) / std::ldexp(1.0, p + 1), 1e-15);
  }
  EXPECT_TRUE(pqu_polygon_estimate(0.9, 5).advantage_lost_large_p);
  EXPECT_FALSE(pqu_polygon_estimate(1.0, 5).advantage_lost_large_p);
  EXPECT_NEAR(pqu_polygon_estimate(1.0, 5).criterion, std::numbers::phi, 1e-15);
}

TEST(Toric, IdealStateWins) {
  for (int lx : {3, 4}) {
    const ToricGame g{ToricLattice(lx, 2), {0, 1, 2}, 0};
    const auto s = g.lattice.game_state();
    EXPECT_NEAR(oracle_win_probability(s, g, Protocol::Toric).value, 1.0, 1e-12);
    EXPECT_NEAR(pqu_toric_exact(s, g), 1.0, 1e-12);
  }
}

TEST(Toric, ExactFormulaMatchesOracleOffIdeal) {
  const ToricLattice lat(3, 2);
  const ToricGame g{lat, {0, 1, 2}, 0};
  const auto gs = model_ground_state(ToricSpec{lat, 1.0, 1.0, 0.3, 0.2}, 4);
  const auto st = adiabatic_toric_state(gs, lat).state;
  EXPECT_NEAR(oracle_win_probability(st, g, Protocol::Toric).value, pqu_toric_exact(st, g), 1e-10);
}

TEST(Toric, PerturbativeForms) {
  const ToricSpec s{ToricLattice(3, 2), 1.0, 1.0, 0.05, 0.0};
  const auto p = pqu_toric_perturbative(s, 3);
  EXPECT_NEAR(p.wilson, std::exp(-4.0 * std::pow(0.05 / 4, 2)), 1e-15);
  EXPECT_NEAR(p.dual, 1.0, 1e-15);
  EXPECT_NEAR(p.pcl, 0.75, 1e-15);
  EXPECT_NEAR(pqu_toric_wilson_form(1.0, 5), 1.0, 1e-15);
  EXPECT_THROW(pqu_toric_perturbative(s, 2), ParameterError);
}
