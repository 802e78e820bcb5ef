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


#include <cstdio>

#include "nlgames/nlgames.hpp"

int main() {
  using namespace nlgames;
  const ToricLattice lat(3, 2);
  const ToricGame game{lat, {0, 1, 2}, 0};
  for (double hx : {0.0, 0.1, 0.3}) {
    const ToricSpec spec{lat, 1.0, 1.0, hx, 0.0};
    const auto st = adiabatic_toric_state(model_ground_state(spec, 4), lat).state;
    const auto pert = pqu_toric_perturbative(spec, 3);
    std::printf("hx=%.2f  exact %.8f  wilson-form %.8f  p_cl %.4f\n", hx, pqu_toric_exact(st, game),
                pert.pqu_wilson_form, pert.pcl);
  }
}
