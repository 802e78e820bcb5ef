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
  for (int p : {3, 5, 7, 9}) {
    const auto g = PolygonGame::standalone(p);
    const auto ev = evaluate_strategy(g, reference_polygon_strategy(g));
    std::printf("P=%d  lost %zu of %lld inputs (F_{P-1}=%llu)  p=%s\n", p, ev.losing_inputs.size(),
                static_cast<long long>(ev.total_weight), static_cast<unsigned long long>(fibonacci(p - 1)),
                format_fraction(ev.probability).c_str());
  }
  const auto g5 = PolygonGame::standalone(5);
  const auto chain = model_ground_state(ClusterChainSpec{5, 0.2}).states[0];
  std::printf("cluster chain lambda=0.2: oracle %.8f  stabilizer %.8f\n",
              oracle_win_probability(chain, g5, Protocol::Cluster).value, pqu_polygon_stabilizer(chain, g5));
}
