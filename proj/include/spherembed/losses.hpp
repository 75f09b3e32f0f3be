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

#ifndef SPHEREMBED_LOSSES_HPP_
#define SPHEREMBED_LOSSES_HPP_

#include <cstdint>
#include <vector>

#include "spherembed/geometry.hpp"

namespace spherembed {

// Margin triple selecting the loss variant:
//   m1 > 1  -> angular softmax (multiplicative angle margin)
//   m2 > 0  -> additive angular margin softmax (radians)
//   m3 > 0  -> additive cosine margin softmax
//   (1,0,0) -> modified softmax
// Variants are mutually exclusive; at most one margin may be active.
struct MarginConfig {
  double m1 = 1.0;
  double m2 = 0.0;
  double m3 = 0.0;
};

struct Batch {
  std::vector<Vec> embeddings;
  std::vector<int> labels;
};

// Loss value plus exact analytic gradients. grad_embeddings matches the
// batch shape; grad_weights matches the (unnormalized) ClassWeights. Ops
// that do not touch embeddings leave grad_embeddings empty.
struct LossResult {
  double value = 0.0;
  std::vector<Vec> grad_embeddings;
  ClassWeights grad_weights;
};

struct AnnealConfig {
  double lambda_base = 1000.0;
  double lambda_min = 5.0;
  double gamma = 1e-4;
  // Steps until the blend weight reaches 1. Zero means "resolve at train
  // time to five epochs' worth of steps".
  long ramp_steps = 0;
};

struct AnnealState {
  double lambda_a = 0.0;     // logit-blend weight, decays toward lambda_min
  double lambda_blend = 0.0; // loss-blend weight, ramps 0 -> 1
  long step = 0;
};

// Mean cross entropy with logits w_j.x_i (bias fixed at zero, weights and
// embeddings unnormalized).
LossResult softmax_ce(const Batch& batch, const ClassWeights& weights);

// Mean cross entropy with logits |x_i| cos(theta_ji) over unit-normalized
// centers; embeddings keep their length.
LossResult modified_softmax(const Batch& batch, const ClassWeights& weights);

// Piecewise-monotonic surrogate for cos(m * theta) on [0, pi]:
// (-1)^k cos(m theta) - 2k on [k pi/m, (k+1) pi/m]. Equals cos(m theta)
// on [0, pi/m] and decreases monotonically over the whole range.
double psi(double theta, int m_factor);

// Margin loss. The target logit is
//   |x| (cos(m1 theta + m2) - m3)
// with psi substituted for cos(m1 theta) when m1 > 1; non-target logits
// stay |x| cos(theta). lambda_a > 0 blends the target logit with the
// plain |x| cos(theta) logit as (lambda f_plain + f_margin)/(1 + lambda);
// it is accepted only for the m1 variant.
LossResult angular_loss(const Batch& batch, const ClassWeights& weights,
                        const MarginConfig& margins, double lambda_a = 0.0);

// The blended target logit for one sample, as used inside the annealed
// m1-variant loss. w_target need not be unit norm; it is normalized here.
double asoftmax_annealed_logit(const Vec& x, const Vec& w_target,
                               int m_factor, double lambda_a);

// (1 - lambda') L_modified + lambda' L_angular, gradients combined with
// the same weights.
LossResult blended_loss(const Batch& batch, const ClassWeights& weights,
                        const MarginConfig& margins, double lambda_blend);

// lambda_a(step)     = max(lambda_min, lambda_base / (1 + gamma step))
// lambda_blend(step) = min(1, step / ramp_steps)
AnnealState anneal_schedule(long step, const AnnealConfig& config);

}  // namespace spherembed

#endif  // SPHEREMBED_LOSSES_HPP_
