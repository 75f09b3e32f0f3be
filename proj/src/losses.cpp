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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spherembed {

namespace {

void validate_batch(const Batch& batch, const ClassWeights& weights) {
  if (batch.embeddings.empty())
    throw std::invalid_argument("loss: empty batch");
  if (batch.labels.size() != batch.embeddings.size())
    throw std::invalid_argument("loss: labels/embeddings size mismatch");
  if (weights.num_classes < 2)
    throw std::invalid_argument("loss: need at least 2 classes");
  for (size_t i = 0; i < batch.embeddings.size(); ++i) {
    if (batch.embeddings[i].size() != static_cast<size_t>(weights.dim))
      throw std::invalid_argument(
          "loss: embedding " + std::to_string(i) + " has dimension " +
          std::to_string(batch.embeddings[i].size()) + ", weights expect " +
          std::to_string(weights.dim));
    if (batch.labels[i] < 0 || batch.labels[i] >= weights.num_classes)
      throw std::invalid_argument("loss: label " +
                                  std::to_string(batch.labels[i]) +
                                  " out of range for " +
                                  std::to_string(weights.num_classes) +
                                  " classes");
  }
}

void validate_margins(const MarginConfig& m) {
  if (m.m1 < 1.0)
    throw std::invalid_argument("margins: m1 must be >= 1");
  if (m.m1 > 1.0 && std::abs(m.m1 - std::round(m.m1)) > 1e-12)
    throw std::invalid_argument("margins: m1 > 1 must be an integer");
  if (m.m2 < 0.0 || m.m2 >= std::numbers::pi / 2.0)
    throw std::invalid_argument("margins: m2 must lie in [0, pi/2)");
  if (m.m3 < 0.0 || m.m3 >= 1.0)
    throw std::invalid_argument("margins: m3 must lie in [0, 1)");
  const int active = (m.m1 > 1.0) + (m.m2 > 0.0) + (m.m3 > 0.0);
  if (active > 1)
    throw std::invalid_argument(
        "margins: combined margins are unsupported; set exactly one of "
        "m1 > 1, m2 > 0, m3 > 0");
}

// Softmax cross entropy on one logit row; writes p and returns the loss.
double softmax_ce_row(const std::vector<double>& logits, int target,
                      std::vector<double>& probs) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  probs.resize(logits.size());
  for (size_t j = 0; j < logits.size(); ++j) {
    probs[j] = std::exp(logits[j] - mx);
    sum += probs[j];
  }
  for (double& p : probs) p /= sum;
  return std::log(sum) + mx - logits[static_cast<size_t>(target)];
}

// Target-logit value z and derivative coefficients:
//   dz/dx        = a * x + b * w_n(target)
//   dz/dw_n      = s * x
// r is |x|, dots is w_n(target).x.
struct TargetLogit {
  double value = 0.0;
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
};

TargetLogit target_logit(double r, double dots, const MarginConfig& m,
                         double lambda_a) {
  TargetLogit out;
  const bool angular_path = m.m1 > 1.0 || m.m2 > 0.0;
  if (!angular_path) {
    // Modified softmax / additive cosine margin: exact in the dot product,
    // no arccos involved.
    out.value = dots - m.m3 * r;
    out.a = -m.m3 / r;
    out.b = 1.0;
    out.s = 1.0;
  } else {
    const double c = std::clamp(dots / r, -1.0, 1.0);
    const bool clamped =
        c > 1.0 - kArccosClamp || c < -1.0 + kArccosClamp;
    const double ct = std::clamp(c, -1.0 + kArccosClamp, 1.0 - kArccosClamp);
    const double theta = std::acos(ct);
    const double dtheta_dc = clamped ? 0.0 : -1.0 / std::sqrt(1.0 - ct * ct);
    double t_val, t_deriv;
    if (m.m1 > 1.0) {
      const int m1 = static_cast<int>(std::round(m.m1));
      const int k = std::min(
          static_cast<int>(m1 * theta / std::numbers::pi), m1 - 1);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      t_val = sign * std::cos(m1 * theta) - 2.0 * k;
      t_deriv = -sign * m1 * std::sin(m1 * theta);
    } else {
      t_val = std::cos(theta + m.m2);
      t_deriv = -std::sin(theta + m.m2);
    }
    out.value = r * t_val;
    out.a = (t_val - t_deriv * dtheta_dc * c) / r;
    out.b = t_deriv * dtheta_dc;
    out.s = out.b;
  }
  if (lambda_a > 0.0) {
    const double denom = 1.0 + lambda_a;
    out.value = (lambda_a * dots + out.value) / denom;
    out.a = out.a / denom;
    out.b = (lambda_a + out.b) / denom;
    out.s = (lambda_a + out.s) / denom;
  }
  return out;
}

// Pulls a gradient w.r.t. the normalized center back to the raw one.
void apply_normalization_jacobian(const ClassWeights& raw,
                                  const ClassWeights& normalized,
                                  ClassWeights& grad) {
  for (int j = 0; j < raw.num_classes; ++j) {
    auto wn = normalized.center(j);
    auto g = grad.center(j);
    const double wn_dot_g = dot(wn, g);
    const double raw_norm = norm(raw.center(j));
    for (int t = 0; t < raw.dim; ++t)
      g[t] = (g[t] - wn_dot_g * wn[t]) / raw_norm;
  }
}

}  // namespace

LossResult softmax_ce(const Batch& batch, const ClassWeights& weights) {
  validate_batch(batch, weights);
  const int C = weights.num_classes;
  const size_t N = batch.embeddings.size();

  LossResult res;
  res.grad_embeddings.assign(N, Vec(weights.dim, 0.0));
  res.grad_weights = ClassWeights::zeros(weights.dim, C);

  std::vector<double> logits(C), probs;
  for (size_t i = 0; i < N; ++i) {
    const Vec& x = batch.embeddings[i];
    const int y = batch.labels[i];
    for (int j = 0; j < C; ++j) logits[j] = dot(weights.center(j), x);
    res.value += softmax_ce_row(logits, y, probs);
    for (int j = 0; j < C; ++j) {
      const double g = (probs[j] - (j == y ? 1.0 : 0.0)) / N;
      auto wj = weights.center(j);
      auto gw = res.grad_weights.center(j);
      for (int t = 0; t < weights.dim; ++t) {
        res.grad_embeddings[i][t] += g * wj[t];
        gw[t] += g * x[t];
      }
    }
  }
  res.value /= static_cast<double>(N);
  return res;
}

LossResult modified_softmax(const Batch& batch, const ClassWeights& weights) {
  validate_batch(batch, weights);
  const int C = weights.num_classes;
  const size_t N = batch.embeddings.size();
  const ClassWeights wn = normalize_columns(weights);

  LossResult res;
  res.grad_embeddings.assign(N, Vec(weights.dim, 0.0));
  res.grad_weights = ClassWeights::zeros(weights.dim, C);

  std::vector<double> logits(C), probs;
  for (size_t i = 0; i < N; ++i) {
    const Vec& x = batch.embeddings[i];
    const int y = batch.labels[i];
    if (norm(x) == 0.0)
      throw std::invalid_argument("modified_softmax: embedding " +
                                  std::to_string(i) + " has zero norm");
    for (int j = 0; j < C; ++j) logits[j] = dot(wn.center(j), x);
    res.value += softmax_ce_row(logits, y, probs);
    for (int j = 0; j < C; ++j) {
      const double g = (probs[j] - (j == y ? 1.0 : 0.0)) / N;
      auto wj = wn.center(j);
      auto gw = res.grad_weights.center(j);
      for (int t = 0; t < weights.dim; ++t) {
        res.grad_embeddings[i][t] += g * wj[t];
        gw[t] += g * x[t];
      }
    }
  }
  apply_normalization_jacobian(weights, wn, res.grad_weights);
  res.value /= static_cast<double>(N);
  return res;
}

double psi(double theta, int m_factor) {
  if (m_factor < 1)
    throw std::invalid_argument("psi: margin factor must be a positive integer");
  if (theta < 0.0 || theta > std::numbers::pi)
    throw std::invalid_argument("psi: theta outside [0, pi]");
  const int k = std::min(static_cast<int>(m_factor * theta / std::numbers::pi),
                         m_factor - 1);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * std::cos(m_factor * theta) - 2.0 * k;
}

LossResult angular_loss(const Batch& batch, const ClassWeights& weights,
                        const MarginConfig& margins, double lambda_a) {
  validate_batch(batch, weights);
  validate_margins(margins);
  if (lambda_a < 0.0)
    throw std::invalid_argument("angular_loss: lambda_a must be >= 0");
  if (lambda_a > 0.0 && (margins.m2 > 0.0 || margins.m3 > 0.0))
    throw std::invalid_argument(
        "angular_loss: logit annealing applies to the m1 variant only");

  const int C = weights.num_classes;
  const size_t N = batch.embeddings.size();
  const ClassWeights wn = normalize_columns(weights);

  LossResult res;
  res.grad_embeddings.assign(N, Vec(weights.dim, 0.0));
  res.grad_weights = ClassWeights::zeros(weights.dim, C);

  std::vector<double> logits(C), probs;
  for (size_t i = 0; i < N; ++i) {
    const Vec& x = batch.embeddings[i];
    const int y = batch.labels[i];
    const double r = norm(x);
    if (r == 0.0)
      throw std::invalid_argument("angular_loss: embedding " +
                                  std::to_string(i) + " has zero norm");
    for (int j = 0; j < C; ++j) logits[j] = dot(wn.center(j), x);
    const double target_dots = logits[y];
    const TargetLogit tl = target_logit(r, target_dots, margins, lambda_a);
    logits[y] = tl.value;
    res.value += softmax_ce_row(logits, y, probs);

    auto wy = wn.center(y);
    auto gwy = res.grad_weights.center(y);
    for (int j = 0; j < C; ++j) {
      const double g = (probs[j] - (j == y ? 1.0 : 0.0)) / N;
      if (j == y) {
        for (int t = 0; t < weights.dim; ++t) {
          res.grad_embeddings[i][t] += g * (tl.a * x[t] + tl.b * wy[t]);
          gwy[t] += g * tl.s * x[t];
        }
      } else {
        auto wj = wn.center(j);
        auto gw = res.grad_weights.center(j);
        for (int t = 0; t < weights.dim; ++t) {
          res.grad_embeddings[i][t] += g * wj[t];
          gw[t] += g * x[t];
        }
      }
    }
  }
  apply_normalization_jacobian(weights, wn, res.grad_weights);
  res.value /= static_cast<double>(N);
  return res;
}

double asoftmax_annealed_logit(const Vec& x, const Vec& w_target,
                               int m_factor, double lambda_a) {
  if (lambda_a < 0.0)
    throw std::invalid_argument("asoftmax_annealed_logit: lambda_a must be >= 0");
  const double r = norm(x);
  if (r == 0.0)
    throw std::invalid_argument("asoftmax_annealed_logit: zero-norm embedding");
  const Vec wn = l2_normalize(w_target);
  const double c = std::clamp(dot(wn, x) / r, -1.0, 1.0);
  const double theta =
      std::acos(std::clamp(c, -1.0 + kArccosClamp, 1.0 - kArccosClamp));
  return (lambda_a * r * c + r * psi(theta, m_factor)) / (1.0 + lambda_a);
}

LossResult blended_loss(const Batch& batch, const ClassWeights& weights,
                        const MarginConfig& margins, double lambda_blend) {
  if (lambda_blend < 0.0 || lambda_blend > 1.0)
    throw std::invalid_argument("blended_loss: lambda_blend outside [0, 1]");
  const LossResult lmod = modified_softmax(batch, weights);
  const LossResult lang = angular_loss(batch, weights, margins);

  LossResult res;
  const double w0 = 1.0 - lambda_blend;
  const double w1 = lambda_blend;
  res.value = w0 * lmod.value + w1 * lang.value;
  res.grad_embeddings.resize(lmod.grad_embeddings.size());
  for (size_t i = 0; i < lmod.grad_embeddings.size(); ++i) {
    res.grad_embeddings[i].resize(lmod.grad_embeddings[i].size());
    for (size_t t = 0; t < lmod.grad_embeddings[i].size(); ++t)
      res.grad_embeddings[i][t] = w0 * lmod.grad_embeddings[i][t] +
                                  w1 * lang.grad_embeddings[i][t];
  }
  res.grad_weights = ClassWeights::zeros(weights.dim, weights.num_classes);
  for (size_t t = 0; t < res.grad_weights.data.size(); ++t)
    res.grad_weights.data[t] =
        w0 * lmod.grad_weights.data[t] + w1 * lang.grad_weights.data[t];
  return res;
}

AnnealState anneal_schedule(long step, const AnnealConfig& config) {
  if (step < 0)
    throw std::invalid_argument("anneal_schedule: negative step");
  if (config.ramp_steps <= 0)
    throw std::invalid_argument(
        "anneal_schedule: ramp_steps must be resolved to a positive count");
  AnnealState st;
  st.step = step;
  st.lambda_a = std::max(config.lambda_min,
                         config.lambda_base / (1.0 + config.gamma * step));
  st.lambda_blend =
      std::min(1.0, static_cast<double>(step) /
                        static_cast<double>(config.ramp_steps));
  return st;
}

}  // namespace spherembed
