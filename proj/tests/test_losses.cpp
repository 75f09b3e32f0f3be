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

#include "spherembed/losses.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"

using namespace spherembed;
using namespace spherembed::testing;

namespace {

// Finite-difference check of a loss over embeddings and weights jointly.
void check_loss_gradients(const Batch& batch, const ClassWeights& weights,
                          const std::function<LossResult(
                              const Batch&, const ClassWeights&)>& loss,
                          double tol = 1e-4) {
  FlatLossProblem problem{
      batch, weights,
      [&](const Batch& b, const ClassWeights& w) { return loss(b, w).value; }};
  const LossResult res = loss(batch, weights);
  const auto analytic =
      problem.pack_grads(res.grad_embeddings, res.grad_weights);
  const auto numeric = fd_gradient(
      [&](const std::vector<double>& x) { return problem.eval(x); },
      problem.pack());
  CHECK(rel_error(analytic, numeric) < tol);
}

}  // namespace

TEST_CASE("softmax_ce: identical columns give ln C") {
  Rng rng(200);
  const int C = 7;
  ClassWeights w = ClassWeights::zeros(5, C);
  const Vec shared = random_vec(rng, 5);
  for (int j = 0; j < C; ++j) {
    auto col = w.center(j);
    for (int t = 0; t < 5; ++t) col[t] = shared[t];
  }
  const Batch batch = random_batch(rng, 4, 5, C);
  const LossResult res = softmax_ce(batch, w);
  CHECK(res.value == doctest::Approx(std::log(double(C))).epsilon(1e-12));
}

TEST_CASE("softmax_ce: saturated logits drive the loss to zero") {
  Batch batch;
  batch.embeddings.push_back(Vec{30.0, 0.0});
  batch.labels.push_back(0);
  ClassWeights w = ClassWeights::zeros(2, 2);
  w.center(0)[0] = 1.0;   // logit 30 for the target
  w.center(1)[0] = -1.0;  // logit -30 elsewhere
  CHECK(softmax_ce(batch, w).value < 1e-9);
}

TEST_CASE("softmax_ce: dimension mismatch is rejected") {
  Batch batch;
  batch.embeddings.push_back(Vec{1.0, 2.0, 3.0});
  batch.labels.push_back(0);
  CHECK_THROWS_AS(softmax_ce(batch, ClassWeights::zeros(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("softmax_ce gradients match finite differences") {
  Rng rng(201);
  for (int trial = 0; trial < 10; ++trial) {
    const Batch batch = random_batch(rng, 3, 4, 5);
    const ClassWeights w = random_weights(rng, 4, 5);
    check_loss_gradients(batch, w, [](const Batch& b, const ClassWeights& ww) {
      return softmax_ce(b, ww);
    });
  }
}

TEST_CASE("modified_softmax: equidistant embedding gives ln C") {
  // orthonormal centers; the all-ones direction is equiangular to them
  const int C = 4;
  ClassWeights w = ClassWeights::zeros(C, C);
  for (int j = 0; j < C; ++j) w.center(j)[j] = 1.0;
  Batch batch;
  batch.embeddings.push_back(Vec(C, 0.7));
  batch.labels.push_back(2);
  CHECK(modified_softmax(batch, w).value ==
        doctest::Approx(std::log(double(C))).epsilon(1e-9));
}

TEST_CASE("modified_softmax is invariant to column rescaling") {
  Rng rng(202);
  const Batch batch = random_batch(rng, 5, 6, 4);
  const ClassWeights w = random_weights(rng, 6, 4);
  ClassWeights scaled = w;
  for (double& v : scaled.data) v *= 5.0;
  CHECK(std::abs(modified_softmax(batch, w).value -
                 modified_softmax(batch, scaled).value) < 1e-9);
}

TEST_CASE("modified_softmax rejects zero embeddings and zero columns") {
  Rng rng(203);
  Batch batch;
  batch.embeddings.push_back(Vec{0.0, 0.0});
  batch.labels.push_back(0);
  const ClassWeights w = random_weights(rng, 2, 2);
  CHECK_THROWS_AS(modified_softmax(batch, w), std::invalid_argument);

  Batch ok;
  ok.embeddings.push_back(Vec{1.0, 0.0});
  ok.labels.push_back(0);
  CHECK_THROWS_AS(modified_softmax(ok, ClassWeights::zeros(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("modified_softmax gradients match finite differences") {
  Rng rng(204);
  for (int trial = 0; trial < 10; ++trial) {
    const Batch batch = random_batch(rng, 3, 5, 4);
    const ClassWeights w = random_weights(rng, 5, 4);
    check_loss_gradients(batch, w, [](const Batch& b, const ClassWeights& ww) {
      return modified_softmax(b, ww);
    });
  }
}

TEST_CASE("psi endpoint algebra and monotonicity") {
  CHECK(psi(0.0, 1) == 1.0);
  CHECK(psi(0.0, 2) == 1.0);
  CHECK(psi(0.0, 4) == 1.0);
  CHECK(psi(std::numbers::pi, 2) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK_THROWS_AS(psi(0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(psi(-0.1, 2), std::invalid_argument);

  Rng rng(205);
  for (const int m : {1, 2, 3, 4}) {
    for (int trial = 0; trial < 1000; ++trial) {
      double t1 = rng.uniform(0.0, std::numbers::pi);
      double t2 = rng.uniform(0.0, std::numbers::pi);
      if (t1 > t2) std::swap(t1, t2);
      CHECK(psi(t1, m) >= psi(t2, m) - 1e-12);
    }
    // psi equals cos(m theta) on the first branch
    for (int trial = 0; trial < 100; ++trial) {
      const double t = rng.uniform(0.0, std::numbers::pi / m);
      CHECK(psi(t, m) == doctest::Approx(std::cos(m * t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("angular_loss with (1,0,0) reduces to modified_softmax") {
  Rng rng(206);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform_int(8));
    const int C = 2 + static_cast<int>(rng.uniform_int(6));
    const Batch batch = random_batch(rng, 4, dim, C);
    const ClassWeights w = random_weights(rng, dim, C);
    const LossResult a = angular_loss(batch, w, MarginConfig{1.0, 0.0, 0.0});
    const LossResult m = modified_softmax(batch, w);
    CHECK(std::abs(a.value - m.value) < 1e-9);
  }
}

TEST_CASE("angular_loss m3 shifts the target logit exactly") {
  // With one sample and two classes, the loss determines the target
  // logit: L = log(1 + exp(z_other - z_target)). Check the m3 logit
  // equals the m3 = 0 logit minus m3 |x| by solving for the shift.
  Rng rng(207);
  Batch batch;
  batch.embeddings.push_back(random_vec(rng, 6));
  batch.labels.push_back(0);
  const ClassWeights w = random_weights(rng, 6, 2);

  const double m3 = 0.2;
  const double r = norm(batch.embeddings[0]);
  const LossResult base = angular_loss(batch, w, MarginConfig{1.0, 0.0, 0.0});
  const LossResult shifted =
      angular_loss(batch, w, MarginConfig{1.0, 0.0, m3});
  // invert L = log(1 + exp(delta)) for the logit gap delta
  const double gap_base = std::log(std::expm1(base.value));
  const double gap_shifted = std::log(std::expm1(shifted.value));
  CHECK(gap_shifted ==
        doctest::Approx(gap_base + m3 * r).epsilon(1e-9));
}

TEST_CASE("angular_loss rejects invalid and combined margins") {
  Rng rng(208);
  const Batch batch = random_batch(rng, 2, 4, 3);
  const ClassWeights w = random_weights(rng, 4, 3);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{0.5, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{2.5, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{2.0, 0.3, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{1.0, 0.3, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{1.0, 2.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{1.0, 0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(angular_loss(batch, w, MarginConfig{1.0, 0.0, 0.3}, 10.0),
                  std::invalid_argument);
}

TEST_CASE("angular_loss gradients match finite differences per variant") {
  Rng rng(209);
  const MarginConfig variants[] = {
      {2.0, 0.0, 0.0}, {1.0, 0.3, 0.0}, {1.0, 0.0, 0.2}};
  for (const MarginConfig& m : variants) {
    for (int trial = 0; trial < 10; ++trial) {
      const Batch batch = random_batch(rng, 3, 5, 4);
      const ClassWeights w = random_weights(rng, 5, 4);
      check_loss_gradients(batch, w,
                           [&](const Batch& b, const ClassWeights& ww) {
                             return angular_loss(b, ww, m);
                           });
    }
  }
}

TEST_CASE("angular_loss annealed gradients match finite differences") {
  Rng rng(210);
  for (int trial = 0; trial < 10; ++trial) {
    const Batch batch = random_batch(rng, 3, 5, 4);
    const ClassWeights w = random_weights(rng, 5, 4);
    check_loss_gradients(batch, w,
                         [&](const Batch& b, const ClassWeights& ww) {
                           return angular_loss(b, ww, MarginConfig{3.0, 0, 0},
                                               7.5);
                         });
  }
}

TEST_CASE("margin monotonicity in m2 and m3") {
  Rng rng(211);
  for (int trial = 0; trial < 20; ++trial) {
    const Batch batch = random_batch(rng, 4, 8, 5);
    const ClassWeights w = random_weights(rng, 8, 5);
    double prev = angular_loss(batch, w, MarginConfig{1, 0, 0}).value;
    for (const double m2 : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      const double v = angular_loss(batch, w, MarginConfig{1, m2, 0}).value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    prev = angular_loss(batch, w, MarginConfig{1, 0, 0}).value;
    for (const double m3 : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      const double v = angular_loss(batch, w, MarginConfig{1, 0, m3}).value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("losses are invariant to positive column rescaling") {
  Rng rng(212);
  const MarginConfig variants[] = {
      {1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {1.0, 0.3, 0.0}, {1.0, 0.0, 0.2}};
  for (int trial = 0; trial < 10; ++trial) {
    const Batch batch = random_batch(rng, 4, 6, 4);
    const ClassWeights w = random_weights(rng, 6, 4);
    ClassWeights scaled = w;
    for (int j = 0; j < scaled.num_classes; ++j) {
      const double factor = rng.uniform(0.1, 10.0);
      for (double& v : scaled.center(j)) v *= factor;
    }
    for (const MarginConfig& m : variants)
      CHECK(std::abs(angular_loss(batch, w, m).value -
                     angular_loss(batch, scaled, m).value) < 1e-9);
  }
}

TEST_CASE("asoftmax_annealed_logit limits") {
  Rng rng(213);
  const Vec x = random_vec(rng, 8);
  const Vec w = random_vec(rng, 8);
  const double r = norm(x);
  const double c = cosine(x, w);
  const double theta = angle(x, w);

  CHECK(asoftmax_annealed_logit(x, w, 2, 0.0) ==
        doctest::Approx(r * psi(theta, 2)).epsilon(1e-12));
  CHECK(std::abs(asoftmax_annealed_logit(x, w, 2, 1e9) - r * c) < 1e-6);
  CHECK(asoftmax_annealed_logit(x, w, 2, 1.0) ==
        doctest::Approx(0.5 * (r * c + r * psi(theta, 2))).epsilon(1e-12));
}

TEST_CASE("blended_loss endpoints and midpoint") {
  Rng rng(214);
  const Batch batch = random_batch(rng, 4, 5, 4);
  const ClassWeights w = random_weights(rng, 5, 4);
  const MarginConfig m{1.0, 0.0, 0.25};

  const LossResult lmod = modified_softmax(batch, w);
  const LossResult lang = angular_loss(batch, w, m);

  CHECK(blended_loss(batch, w, m, 0.0).value == lmod.value);
  CHECK(blended_loss(batch, w, m, 1.0).value == lang.value);

  const LossResult mid = blended_loss(batch, w, m, 0.5);
  CHECK(std::abs(mid.value - 0.5 * (lmod.value + lang.value)) < 1e-12);
  for (size_t i = 0; i < mid.grad_embeddings.size(); ++i)
    for (size_t t = 0; t < mid.grad_embeddings[i].size(); ++t)
      CHECK(mid.grad_embeddings[i][t] ==
            0.5 * lmod.grad_embeddings[i][t] +
                0.5 * lang.grad_embeddings[i][t]);
  for (size_t t = 0; t < mid.grad_weights.data.size(); ++t)
    CHECK(mid.grad_weights.data[t] ==
          0.5 * lmod.grad_weights.data[t] + 0.5 * lang.grad_weights.data[t]);

  CHECK_THROWS_AS(blended_loss(batch, w, m, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(blended_loss(batch, w, m, 1.1), std::invalid_argument);
}

TEST_CASE("blended_loss gradients match finite differences") {
  Rng rng(215);
  for (int trial = 0; trial < 10; ++trial) {
    const Batch batch = random_batch(rng, 3, 5, 4);
    const ClassWeights w = random_weights(rng, 5, 4);
    check_loss_gradients(batch, w,
                         [](const Batch& b, const ClassWeights& ww) {
                           return blended_loss(b, ww,
                                               MarginConfig{1.0, 0.0, 0.2},
                                               0.35);
                         });
  }
}

TEST_CASE("anneal_schedule endpoints and monotonicity") {
  AnnealConfig cfg;
  cfg.lambda_base = 1000.0;
  cfg.lambda_min = 5.0;
  cfg.gamma = 1e-4;
  cfg.ramp_steps = 400;

  const AnnealState start = anneal_schedule(0, cfg);
  CHECK(start.lambda_a == 1000.0);
  CHECK(start.lambda_blend == 0.0);
  CHECK(anneal_schedule(400, cfg).lambda_blend == 1.0);
  CHECK(anneal_schedule(100000, cfg).lambda_blend == 1.0);

  double prev_a = start.lambda_a;
  double prev_b = start.lambda_blend;
  for (long step = 1; step <= 100000; step += 97) {
    const AnnealState st = anneal_schedule(step, cfg);
    CHECK(st.lambda_a <= prev_a);
    CHECK(st.lambda_blend >= prev_b);
    CHECK(st.lambda_a >= cfg.lambda_min);
    prev_a = st.lambda_a;
    prev_b = st.lambda_blend;
  }
  CHECK(anneal_schedule(100000000, cfg).lambda_a == cfg.lambda_min);
}
