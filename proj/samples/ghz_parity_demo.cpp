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


// Win probability of the Ising ground state in the N-player parity game as the field grows.

#include <cstdio>

#include "nlgames/nlgames.hpp"

int main() {
  using namespace nlgames;
  const int n = 6;
  std::printf("# N=%d  p_cl*=%.6f  threshold=%.6f\n", n, freefermion::pcl_parity(n),
              freefermion::threshold_finite(n).value);
  std::printf("%6s %12s %12s\n", "g", "ed", "freefermion");
  for (double g = 0.25; g <= 2.0; g += 0.25) {
    const auto st = model_ground_state(IsingSpec{n, 1.0, g, 0.0}).states[0];
    std::printf("%6.2f %12.8f %12.8f\n", g, pqu_theorem1(st), freefermion::pqu_parity_exact(n, g).value);
  }
  std::printf("# N -> infinity threshold: %.6f\n", freefermion::threshold_asymptotic().value);
}
