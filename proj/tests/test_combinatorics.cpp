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

#include <cmath>
#include <set>

#include "nlgames/combinatorics.hpp"
#include "oracle.hpp"

using namespace nlgames;

namespace {

// Brute force over edge subsets.
std::uint64_t brute_matchings(int p, int r) {
  std::uint64_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    if (std::popcount(mask) != r) continue;
    bool ok = true;
    for (int e = 0; e < p && ok; ++e)
      if ((mask >> e) & 1 && (mask >> ((e + 1) % p)) & 1) ok = false;
    count += ok;
  }
  return count;
}

}  // namespace

TEST(Matchings, CountsAgreeWithBruteForce) {
  for (int p = 3; p <= 14; ++p)
    for (int r = 0; r <= p / 2; ++r) {
      EXPECT_EQ(matching_count(p, r), brute_matchings(p, r)) << p << "," << r;
      EXPECT_EQ(cycle_matchings(p, r).size(), matching_count(p, r)) << p << "," << r;
    }
}

TEST(Matchings, EnumeratedMatchingsAreValidAndDistinct) {
  for (int r = 0; r <= 4; ++r) {
    const auto ms = cycle_matchings(9, r);
    std::set<std::vector<int>> seen;
    for (const auto& m : ms) {
      EXPECT_TRUE(is_valid_matching(m));
      EXPECT_EQ(static_cast<int>(m.size()), r);
      seen.insert(m.edges);
    }
    EXPECT_EQ(seen.size(), ms.size());
  }
  EXPECT_FALSE(is_valid_matching(Matching{5, {0, 1}}));
  EXPECT_FALSE(is_valid_matching(Matching{5, {4, 0}}));
  EXPECT_THROW(cycle_matchings(5, 3), ParameterError);
}

TEST(Sequences, FibonacciAndLucas) {
  for (int n = 0; n <= 30; ++n) EXPECT_EQ(fibonacci(n), oracle::fib(n));
  for (int n = 2; n <= 90; ++n) EXPECT_EQ(lucas_number(n), lucas_number(n - 1) + lucas_number(n - 2));
  for (int n = 1; n <= 40; ++n) EXPECT_EQ(lucas_number(n), fibonacci(n - 1) + fibonacci(n + 1));
  EXPECT_THROW(fibonacci(91), CapacityError);
}

TEST(Sequences, MatchingsSumToLucas) {
  for (int p = 3; p <= 20; ++p) {
    std::uint64_t s = 0;
    for (int r = 0; r <= p / 2; ++r) s += matching_count(p, r);
    EXPECT_EQ(s, lucas_number(p)) << p;
  }
}

TEST(LucasPolynomial, CoefficientsAreMatchingCounts) {
  for (int p = 3; p <= 12; ++p)
    for (double x : {0.3, 1.0, 1.7}) {
      double s = 0.0;
      for (int r = 0; r <= p / 2; ++r) s += matching_count(p, r) * std::pow(x, p - 2 * r);
      EXPECT_NEAR(lucas_polynomial(p, x), s, 1e-9 * s);
      EXPECT_NEAR(lucas_polynomial_closed(p, x), s, 1e-9 * s);
    }
  EXPECT_NEAR(lucas_polynomial(10, 1.0), 123.0, 1e-12);
}

TEST(LossCount, FibonacciCensus) {
  for (int p = 3; p <= 30; ++p) EXPECT_EQ(polygon_loss_count(p), fibonacci(p - 1)) << p;
}

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(10, 3), 120u);
  EXPECT_EQ(binomial(4, 5), 0u);
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
}
