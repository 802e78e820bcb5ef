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


// Every property runs kTrials seeded trials.

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "nlgames/classical.hpp"
#include "nlgames/freefermion.hpp"
#include "nlgames/models.hpp"
#include "nlgames/protocols.hpp"
#include "nlgames/report.hpp"
#include "oracle.hpp"

using namespace nlgames;

namespace {

constexpr int kTrials = 200;

template <class F>
void trials(std::uint64_t salt, F&& body) {
  for (int t = 0; t < kTrials; ++t) {
    SCOPED_TRACE("trial " + std::to_string(t));
    std::mt19937_64 rng(salt * 1000003 + t);
    body(rng);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

SiteOperator random_unitary(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return SiteOperator(qr.householderQ() * Eigen::MatrixXcd::Identity(m, m));
}

std::vector<int> random_marked(std::mt19937_64& rng, int n, int p) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(p);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

// ---- statevec ----

TEST(StatevecProperties, Unitarity) {
  trials(1, [](std::mt19937_64& rng) {
    const int m = uniform_int(rng, 2, 4);
    const int n = m == 2 ? uniform_int(rng, 1, 8) : uniform_int(rng, 1, 4);
    PureState psi = random_state(n, m, rng);
    for (int k = 0; k < 5; ++k) {
      const auto next = apply_unitary(psi, uniform_int(rng, 0, n - 1), random_unitary(m, rng));
      EXPECT_NEAR(next.amplitudes().norm(), 1.0, 1e-12);
      psi = next;
    }
  });
}

TEST(StatevecProperties, UnitarityBeforeRescaling) {
  trials(2, [](std::mt19937_64& rng) {
    const int m = uniform_int(rng, 2, 3);
    const int n = uniform_int(rng, 1, 5);
    const auto psi = random_state(n, m, rng);
    for (int k = 0; k < 5; ++k) {
      const int s = uniform_int(rng, 0, n - 1);
      const auto u = random_unitary(m, rng);
      const oracle::Vec out = oracle::site(n, m, s, u.matrix()) * psi.amplitudes();
      EXPECT_NEAR(out.norm(), 1.0, 1e-12);
      EXPECT_LT((apply_unitary(psi, s, u).amplitudes() - out).norm(), 1e-12);
    }
  });
}

TEST(StatevecProperties, BranchCompleteness) {
  trials(3, [](std::mt19937_64& rng) {
    const int m = uniform_int(rng, 2, 3);
    const int n = uniform_int(rng, 2, 5);
    const auto psi = random_state(n, m, rng);
    std::vector<int> sites = random_marked(rng, n, uniform_int(rng, 1, n));
    EXPECT_NEAR(enumerate_measurement_branches(psi, sites).total_probability(), 1.0, 1e-10);
    if (m == 2) {
      const std::string letters = "XYZ";
      std::vector<OperatorTuple> tuples{{}};
      // disjoint single-site Paulis commute
      for (int s : random_marked(rng, n, uniform_int(rng, 1, n)))
        tuples[0].push_back(OperatorString::pauli(std::string(1, letters[uniform_int(rng, 0, 2)]), s));
      EXPECT_NEAR(enumerate_measurement_branches(psi, std::span<const OperatorTuple>(tuples)).total_probability(), 1.0,
                  1e-10);
    }
  });
}

TEST(StatevecProperties, StabilizerFixedPoints) {
  trials(4, [](std::mt19937_64& rng) {
    const int n = 2 * uniform_int(rng, 3, 6);
    const auto c = make_named_state(NamedState::Cluster, n, 2);
    const int i = uniform_int(rng, 0, n - 1);
    EXPECT_NEAR(expectation(c, cluster_stabilizer(n, i)).real(), 1.0, 1e-12);
    const int g = uniform_int(rng, 2, 12);
    const auto ghz = make_named_state(NamedState::GhzPlus, g, 2);
    EXPECT_NEAR(expectation(ghz, global_flip(g)).real(), 1.0, 1e-12);
    const int j = uniform_int(rng, 0, g - 2);
    EXPECT_NEAR(expectation(ghz, OperatorString::pauli("ZZ", j)).real(), 1.0, 1e-12);
  });
}

TEST(StatevecProperties, QubitDegeneration) {
  trials(5, [](std::mt19937_64& rng) {
    const double x = uniform(rng, -3, 3);
    // C^x at M = 2 is Z^x
    const auto c = SiteOperator::clock_power(2, x).matrix();
    EXPECT_LT(std::abs(c(1, 1) - std::polar(1.0, M_PI * x)), 1e-14);
    EXPECT_LT((SiteOperator::clock(2).matrix() - oracle::Z()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((SiteOperator::shift(2).matrix() - oracle::X()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((SiteOperator::fourier(2).matrix() - oracle::H()).cwiseAbs().maxCoeff(), 1e-15);
  });
}

// ---- models ----

TEST(ModelProperties, Hermiticity) {
  trials(6, [](std::mt19937_64& rng) {
    const int kind = uniform_int(rng, 0, 2);
    Eigen::MatrixXcd h;
    if (kind == 0)
      h = build_hamiltonian(IsingSpec{uniform_int(rng, 2, 7), uniform(rng, -2, 2), uniform(rng, 0, 2), uniform(rng, -1, 1)})
              .dense();
    else if (kind == 1)
      h = build_hamiltonian(ClockSpec{uniform_int(rng, 2, 4), uniform_int(rng, 3, 4), uniform(rng, 0, 2), uniform(rng, 0, 2),
                                      uniform(rng, -1, 1)})
              .dense();
    else
      h = build_hamiltonian(ClusterChainSpec{uniform_int(rng, 3, 5), uniform(rng, -1, 1)}).dense();
    EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  });
}

TEST(ModelProperties, GlobalFlipSymmetry) {
  trials(7, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 2, 8);
    const auto ham = build_hamiltonian(IsingSpec{n, uniform(rng, 0.1, 2), uniform(rng, 0, 2), 0.0});
    const auto psi = random_state(n, 2, rng);
    const auto flip = global_flip(n);
    Amplitudes hp, fhp, fp, hfp;
    ham.apply(psi.amplitudes(), hp);
    apply_string(flip, n, 2, hp, fhp);
    apply_string(flip, n, 2, psi.amplitudes(), fp);
    ham.apply(fp, hfp);
    const Amplitudes comm = fhp - hfp;
    EXPECT_LT(std::abs(psi.amplitudes().dot(comm)), 1e-10);
    EXPECT_LT(comm.norm(), 1e-10);
  });
}

TEST(ModelProperties, ParitySplittingShrinksWithField) {
  trials(8, [](std::mt19937_64& rng) {
    const int n = 2 * uniform_int(rng, 2, 4);
    std::vector<double> g{uniform(rng, 0.05, 0.4), uniform(rng, 0.05, 0.4), uniform(rng, 0.05, 0.4)};
    std::sort(g.begin(), g.end());
    if (g[1] - g[0] < 0.01 || g[2] - g[1] < 0.01) return;
    double prev = -1.0;
    for (double x : g) {
      const auto ham = build_hamiltonian(IsingSpec{n, 1.0, x, 0.0});
      GroundStateOptions even, odd;
      even.sector = Symmetry{global_flip(n), 1.0};
      odd.sector = Symmetry{global_flip(n), -1.0};
      const double gap = ground_state(ham, odd).energies[0] - ground_state(ham, even).energies[0];
      EXPECT_GT(gap, 0.0);
      if (prev >= 0.0) {
        EXPECT_GT(gap, prev);
      }
      prev = gap;
    }
  });
}

TEST(ModelProperties, ToricConstraint) {
  trials(9, [](std::mt19937_64& rng) {
    const ToricLattice lat(uniform_int(rng, 2, 3), 2);
    const auto psi = random_state(lat.num_bonds(), 2, rng);
    OperatorString plaq, star;
    for (int y = 0; y < lat.ly(); ++y)
      for (int x = 0; x < lat.lx(); ++x) {
        plaq = plaq * lat.plaquette_operator(x, y);
        star = star * lat.star_operator(x, y);
      }
    EXPECT_NEAR(std::abs(expectation(psi, plaq) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(expectation(psi, star) - 1.0), 0.0, 1e-12);
  });
}

// ---- freefermion ----

TEST(FreeFermionProperties, OracleEquivalence) {
  trials(10, [](std::mt19937_64& rng) {
    const int n = 2 * uniform_int(rng, 2, 5);
    const double g = uniform(rng, 0.1, 2.0);
    const auto st = model_ground_state(IsingSpec{n, 1.0, g, 0.0}).states[0];
    const double ed = std::norm(inner_product(make_named_state(NamedState::GhzPlus, n, 2), st));
    EXPECT_NEAR(freefermion::ghz_fidelity(n, g), ed, 1e-8);
  });
}

TEST(FreeFermionProperties, ThresholdConsistency) {
  trials(11, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 3, 60);
    const double g = freefermion::threshold_finite(n).value;
    EXPECT_NEAR(freefermion::pqu_parity_exact(n, g).value - freefermion::pcl_parity(n), 0.0, 1e-8);
  });
}

TEST(FreeFermionProperties, FerromagneticAdvantage) {
  trials(12, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 3, 12);
    const double g = uniform(rng, 1e-3, 1.0);
    EXPECT_GT(freefermion::pqu_parity_exact(n, g).value, freefermion::pcl_parity(n));
  });
}

TEST(FreeFermionProperties, AsymptoticExponentIdentity) {
  trials(13, [](std::mt19937_64& rng) {
    const double g = uniform(rng, 0.0, 1.2);
    EXPECT_NEAR(std::pow(freefermion::zz_asymptotic(g), 2), std::pow(freefermion::m_asymptotic(g), 4), 1e-14);
  });
}

// ---- games ----

TEST(GameProperties, PromiseClosure) {
  trials(14, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 3, 10);
    for (const auto& in : enumerate_inputs(ParityGame{n}).inputs)
      EXPECT_EQ(std::accumulate(in.bits.begin(), in.bits.end(), 0) % 2, 0);
    const BoyerGame b{uniform_int(rng, 2, 5), uniform_int(rng, 2, 4), uniform_int(rng, 2, 4)};
    for (const auto& in : enumerate_inputs(b).inputs) {
      EXPECT_EQ(std::accumulate(in.bits.begin(), in.bits.end(), 0) % b.d, 0);
      for (int a : in.bits) EXPECT_TRUE(a >= 0 && a < b.d);
    }
  });
}

TEST(GameProperties, AlphaDistribution) {
  std::map<std::vector<int>, long long> global;
  long long global_samples = 0;
  const PBitParityGame fixed{5, {0, 2, 4}, Rational(1, 3)};
  const auto fixed_set = enumerate_inputs(fixed);
  std::mt19937_64 fixed_rng(42);
  trials(15, [&](std::mt19937_64& rng) {
    const int p = uniform_int(rng, 3, 5);
    const Rational alpha(uniform_int(rng, 1, 7), 8);
    const PBitParityGame g{p + 1, random_marked(rng, p + 1, p), alpha};
    const auto set = enumerate_inputs(g);
    const int samples = 5000;
    // many cells per trial, so the per-trial bound is loose; the 10^6 pooled check below is 4 sigma
    std::vector<long long> counts(set.inputs.size(), 0);
    for (int k = 0; k < samples; ++k) ++counts[sample_input(set, rng)];
    for (std::size_t i = 0; i < set.inputs.size(); ++i) {
      const double pr = boost::rational_cast<double>(set.probability(i));
      EXPECT_LE(std::abs(counts[i] - samples * pr), 6.0 * std::sqrt(samples * pr * (1 - pr)) + 1e-9);
    }
    for (int k = 0; k < samples; ++k) ++global[fixed_set.inputs[sample_input(fixed_set, fixed_rng)].bits];
    global_samples += samples;
  });
  EXPECT_EQ(global_samples, 1000000);
  for (std::size_t i = 0; i < fixed_set.inputs.size(); ++i) {
    const double pr = boost::rational_cast<double>(fixed_set.probability(i));
    EXPECT_LE(std::abs(global[fixed_set.inputs[i].bits] - global_samples * pr),
              4.0 * std::sqrt(global_samples * pr * (1 - pr)));
  }
}

TEST(GameProperties, PolygonInputMatchingBijection) {
  trials(16, [](std::mt19937_64& rng) {
    const int p = uniform_int(rng, 3, 14);
    std::uint64_t total = 0;
    std::set<std::vector<int>> seen;
    for (int r = 1; r <= p / 2; ++r)
      for (const auto& m : cycle_matchings(p, r)) {
        seen.insert(polygon_input_for_matching(p, m));
        ++total;
      }
    EXPECT_EQ(total, lucas_number(p) - 1);
    // distinct matchings give distinct inputs except the two perfect matchings of an even cycle
    EXPECT_EQ(seen.size(), total - (p % 2 == 0 ? 1 : 0));
  });
}

TEST(GameProperties, ToricJudgeIsParityJudge) {
  trials(17, [](std::mt19937_64& rng) {
    const int lx = uniform_int(rng, 3, 6);
    const int t = uniform_int(rng, 3, lx);
    const ToricGame g{ToricLattice(lx, 2), random_marked(rng, lx, t), 0};
    const auto set = enumerate_inputs(g);
    const auto& in = set.inputs[uniform_int(rng, 0, static_cast<int>(set.inputs.size()) - 1)];
    std::vector<int> out(lx);
    for (int& o : out) o = uniform_int(rng, 0, 1);
    std::vector<int> team_out(t, 0);
    for (int c = 0; c < lx; ++c) team_out[0] ^= out[c];
    EXPECT_EQ(judge(g, in.bits, out), judge(ParityGame{t}, in.bits, team_out));
  });
}

// ---- protocols ----

TEST(ProtocolProperties, UniversalOracleAgreement) {
  trials(18, [](std::mt19937_64& rng) {
    const int family = uniform_int(rng, 0, 4);
    GameSpec spec;
    PureState psi = make_named_state(NamedState::XPolarized, 1, 2);
    if (family == 0) {
      const int n = uniform_int(rng, 3, 6);
      spec = ParityGame{n};
      psi = random_state(n, 2, rng);
    } else if (family == 1) {
      const int n = uniform_int(rng, 3, 6);
      spec = PBitParityGame{n, random_marked(rng, n, uniform_int(rng, 3, n)), Rational(1, 2)};
      psi = random_state(n, 2, rng);
    } else if (family == 2) {
      const int m = uniform_int(rng, 2, 3);
      const int n = uniform_int(rng, 2, 3);
      spec = BoyerGame{n, m, m};
      psi = random_state(n, m, rng);
    } else if (family == 3) {
      const int n = uniform_int(rng, 3, 4);
      spec = PolygonGame::inscribed(n, random_marked(rng, n, 3));
      psi = random_state(2 * n, 2, rng);
    } else {
      const ToricLattice lat(3, 2);
      spec = ToricGame{lat, {0, 1, 2}, uniform_int(rng, 0, 1)};
      psi = random_state(lat.num_bonds(), 2, rng);
    }
    const auto rep = oracle_win_probability(psi, spec, native_protocol(spec));
    const auto analytic = analytic_win_probability(psi, spec);
    ASSERT_TRUE(analytic.has_value());
    EXPECT_NEAR(rep.value, *analytic, 1e-9) << game_name(spec);
  });
}

TEST(ProtocolProperties, ParityFormulaContinuity) {
  trials(19, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 2, 8);
    const auto a = random_state(n, 2, rng);
    const auto noise = random_state(n, 2, rng);
    const double eps = uniform(rng, 1e-4, 1.0);
    const auto b = PureState::normalized(n, 2, a.amplitudes() + eps * noise.amplitudes());
    EXPECT_LE(std::abs(pqu_theorem1(a) - pqu_theorem1(b)), 2.0 * (a.amplitudes() - b.amplitudes()).norm() + 1e-15);
  });
}

TEST(ProtocolProperties, DichotomicObservableIdentity) {
  trials(20, [](std::mt19937_64& rng) {
    if (rng() % 2) {
      const int n = uniform_int(rng, 3, 6);
      const PBitParityGame g{n, random_marked(rng, n, uniform_int(rng, 3, n)), Rational(1, 2)};
      const auto psi = model_ground_state(IsingSpec{n, 1.0, uniform(rng, 0.1, 2.0), 0.0}).states[0];
      const auto rep = oracle_win_probability(psi, g, Protocol::Bbt);
      for (const auto& in : rep.per_input) {
        OperatorString o;
        int ones = 0;
        for (int s = 0; s < n; ++s) {
          o = o * OperatorString::pauli(in.input[s] ? "Y" : "X", s);
          ones += in.input[s];
        }
        const double sign = (ones / 2) % 2 ? -1.0 : 1.0;
        EXPECT_NEAR(in.win, 0.5 * (1.0 + sign * expectation(psi, o).real()), 1e-12);
      }
    } else {
      const int players = uniform_int(rng, 3, 5);
      const auto g = PolygonGame::standalone(players);
      const auto psi = model_ground_state(ClusterChainSpec{players, uniform(rng, 0.0, 0.6)}).states[0];
      const auto rep = oracle_win_probability(psi, g, Protocol::Cluster);
      const auto wins = polygon_input_wins(psi, g);
      for (std::size_t i = 0; i < wins.size(); ++i) EXPECT_NEAR(rep.per_input[i].win, wins[i], 1e-12);
    }
  });
}

TEST(ProtocolProperties, BoyerUniqueness) {
  const auto ghz = make_named_state(NamedState::GhzQudit, 3, 3);
  trials(21, [&](std::mt19937_64& rng) {
    const auto dir = random_state(3, 3, rng);
    const double eps = uniform(rng, 1e-3, 0.5);
    const auto psi = PureState::normalized(3, 3, ghz.amplitudes() + eps * dir.amplitudes());
    if (std::norm(inner_product(psi, ghz)) > 1 - 1e-12) return;
    EXPECT_LT(pqu_theorem2(psi, 3), 1.0);
  });
}

// ---- classical ----

TEST(ClassicalProperties, ExhaustiveDominatesClosedForms) {
  trials(22, [](std::mt19937_64& rng) {
    const int kind = uniform_int(rng, 0, 2);
    if (kind == 0) {
      const int n = uniform_int(rng, 3, 6);
      EXPECT_EQ(exhaustive_search(ParityGame{n}).optimum, *pcl_closed_forms(ParityGame{n}).optimum);
    } else if (kind == 1) {
      const int p = uniform_int(rng, 3, 5);
      const PBitParityGame g{p + 1, random_marked(rng, p + 1, p), Rational(uniform_int(rng, 1, 7), 8)};
      const double v = boost::rational_cast<double>(exhaustive_search(g).optimum);
      EXPECT_GE(v + 1e-12, pcl_pbit(p, boost::rational_cast<double>(g.alpha)));
      if (const auto closed = pcl_closed_forms(g).optimum_value) {
        EXPECT_NEAR(v, *closed, 1e-12);
      }
    } else {
      const auto g = PolygonGame::standalone(3);
      static const Rational tri = exhaustive_search(g, {Restriction::Condition1Respecting}).optimum;
      EXPECT_GE(tri, *pcl_closed_forms(g).optimum);
    }
  });
}

TEST(ClassicalProperties, FibonacciCensus) {
  trials(23, [](std::mt19937_64& rng) {
    const int p = 2 * uniform_int(rng, 2, 6) + 1;
    const auto g = PolygonGame::standalone(p);
    EXPECT_EQ(evaluate_strategy(g, reference_polygon_strategy(g)).losing_inputs.size(), fibonacci(p - 1));
  });
}

TEST(ClassicalProperties, BoyerBoundValidity) {
  std::map<std::pair<int, int>, double> cache;
  trials(24, [&](std::mt19937_64& rng) {
    const int dm = uniform_int(rng, 2, 3);
    const int n = uniform_int(rng, 2, 3);
    auto key = std::pair{dm, n};
    if (!cache.count(key)) cache[key] = boost::rational_cast<double>(exhaustive_search(BoyerGame{n, dm, dm}).optimum);
    EXPECT_LE(cache[key], boyer_upper_bound(dm, dm, n) + 1e-12);
    // any single strategy also respects the bound
    const BoyerGame g{n, dm, dm};
    ClassicalStrategy s;
    for (int p = 0; p < n; ++p) {
      s.table.emplace_back();
      for (int x = 0; x < dm; ++x) s.table.back().push_back(uniform_int(rng, 0, dm - 1));
    }
    EXPECT_LE(boost::rational_cast<double>(evaluate_strategy(g, s).probability), boyer_upper_bound(dm, dm, n) + 1e-12);
  });
}

TEST(ClassicalProperties, RestrictionSoundness) {
  const auto g = PolygonGame::standalone(3);
  const Rational full = exhaustive_search(g).optimum;
  const Rational restricted = exhaustive_search(g, {Restriction::Condition1Respecting}).optimum;
  EXPECT_EQ(full, Rational(7, 8));
  EXPECT_EQ(restricted, full);
  trials(25, [&](std::mt19937_64& rng) {
    ClassicalStrategy s;
    for (int p = 0; p < 3; ++p) s.table.push_back({uniform_int(rng, 0, 7), uniform_int(rng, 0, 7)});
    EXPECT_LE(evaluate_strategy(g, s).probability, full);
  });
}

// ---- combinatorics ----

TEST(CombinatoricsProperties, EnumerationCountAgreement) {
  trials(26, [](std::mt19937_64& rng) {
    const int p = uniform_int(rng, 3, 14);
    const int r = uniform_int(rng, 0, p / 2);
    EXPECT_EQ(cycle_matchings(p, r).size(), matching_count(p, r));
  });
}

TEST(CombinatoricsProperties, LucasRecurrence) {
  trials(27, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 2, 90);
    EXPECT_EQ(lucas_number(n), lucas_number(n - 1) + lucas_number(n - 2));
    const double x = uniform(rng, 0.1, 2.0);
    const int k = uniform_int(rng, 2, 30);
    EXPECT_NEAR(lucas_polynomial(k, x), x * lucas_polynomial(k - 1, x) + lucas_polynomial(k - 2, x),
                1e-12 * lucas_polynomial(k, x));
  });
}

TEST(CombinatoricsProperties, MatchingConditionBijection) {
  trials(28, [](std::mt19937_64& rng) {
    const int p = uniform_int(rng, 3, 14);
    const int r = uniform_int(rng, 1, p / 2);
    const auto ms = cycle_matchings(p, r);
    const auto& m = ms[uniform_int(rng, 0, static_cast<int>(ms.size()) - 1)];
    const auto back = matchings_for_input(p, polygon_input_for_matching(p, m));
    EXPECT_NE(std::find(back.begin(), back.end(), m), back.end());
    EXPECT_EQ(back.size(), (p % 2 == 0 && 2 * r == p) ? 2u : 1u);
  });
}

// ---- reports ----

TEST(ReportProperties, Reproducibility) {
  trials(29, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 3, 5);
    const std::uint64_t seed = rng();
    std::mt19937_64 a(seed), b(seed);
    const auto sa = random_state(n, 2, a), sb = random_state(n, 2, b);
    const auto ra = oracle_win_probability(sa, ParityGame{n}, Protocol::Bbt);
    const auto rb = oracle_win_probability(sb, ParityGame{n}, Protocol::Bbt, {2});
    EXPECT_EQ(to_csv(protocol_report_table(ra), {seed, 1, "x"}), to_csv(protocol_report_table(rb), {seed, 1, "x"}));
  });
}

TEST(ReportProperties, CrossMethodWithinErrorBound) {
  trials(30, [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 3, 6);
    const auto psi = random_state(n, 2, rng);
    const auto rep = oracle_win_probability(psi, ParityGame{n}, Protocol::Bbt);
    EXPECT_LE(std::abs(rep.value - pqu_theorem1(psi)), std::max(rep.error_bound, 1e-12));
    const double g = uniform(rng, 0.1, 2.0);
    const auto p = freefermion::pqu_parity_exact(n, g);
    EXPECT_LE(std::abs(p.value - freefermion::pqu_parity_product(n, g)), p.error_bound);
  });
}
