// Copyright (c) 2026 The spherembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPHEREMBED_INTER_REG_HPP_
#define SPHEREMBED_INTER_REG_HPP_

#include "spherembed/geometry.hpp"
#include "spherembed/losses.hpp"

namespace spherembed {

struct RegConfig {
  double lambda_inter = 0.01;
};

// Separability scalar over the unit-normalized centers:
// (1/C) sum_j sum_{i != j} max(0, cos phi_ij)^2. Zero when no two centers
// have positive cosine.
double sep_energy(const ClassWeights& weights);

// Hyperspherical energy (1/C) |[Wn^T Wn]_+ - I|_F^2 with the analytic
// gradient w.r.t. the unnormalized weights. Numerically identical to
// sep_energy; the gradient flows only into the weights, so
// grad_embeddings stays empty. Center pairs with nonpositive cosine
// contribute nothing to the gradient.
LossResult inter_loss(const ClassWeights& weights);

// (1 - lambda_inter) La + lambda_inter Linter, value and gradients.
LossResult combined_loss(const LossResult& la, const LossResult& li,
                         const RegConfig& config);

}  // namespace spherembed

#endif  // SPHEREMBED_INTER_REG_HPP_
