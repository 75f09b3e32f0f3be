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

#include "spherembed/inter_reg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherembed {

double sep_energy(const ClassWeights& weights) {
  const ClassWeights wn = normalize_columns(weights);
  const int C = wn.num_classes;
  double total = 0.0;
  for (int j = 0; j < C; ++j) {
    for (int i = 0; i < C; ++i) {
      if (i == j) continue;
      const double c = std::max(0.0, dot(wn.center(i), wn.center(j)));
      total += c * c;
    }
  }
  return total / static_cast<double>(C);
}

LossResult inter_loss(const ClassWeights& weights) {
  const ClassWeights wn = normalize_columns(weights);
  const int C = wn.num_classes;
  const int d = wn.dim;

  // Gram matrix of the normalized centers, clamped below zero. The
  // diagonal is exactly 1 and cancels against I; only clamped
  // off-diagonal cosines remain in the Frobenius norm.
  std::vector<double> clamped(static_cast<size_t>(C) * C, 0.0);
  double value = 0.0;
  for (int i = 0; i < C; ++i) {
    for (int j = i + 1; j < C; ++j) {
      const double c = std::max(0.0, dot(wn.center(i), wn.center(j)));
      clamped[static_cast<size_t>(i) * C + j] = c;
      clamped[static_cast<size_t>(j) * C + i] = c;
      value += 2.0 * c * c;
    }
  }

  LossResult res;
  res.value = value / static_cast<double>(C);
  res.grad_weights = ClassWeights::zeros(d, C);

  // d/d wn_i = (4/C) sum_{j != i} [cos]_+ wn_j, then through the
  // normalization Jacobian back to the raw center.
  for (int i = 0; i < C; ++i) {
    Vec grad_n(d, 0.0);
    for (int j = 0; j < C; ++j) {
      if (j == i) continue;
      const double c = clamped[static_cast<size_t>(i) * C + j];
      if (c <= 0.0) continue;
      auto wj = wn.center(j);
      for (int t = 0; t < d; ++t) grad_n[t] += 4.0 / C * c * wj[t];
    }
    auto wi = wn.center(i);
    const double wn_dot_g = dot(wi, grad_n);
    const double raw_norm = norm(weights.center(i));
    auto g = res.grad_weights.center(i);
    for (int t = 0; t < d; ++t)
      g[t] = (grad_n[t] - wn_dot_g * wi[t]) / raw_norm;
  }
  return res;
}

LossResult combined_loss(const LossResult& la, const LossResult& li,
                         const RegConfig& config) {
  if (config.lambda_inter < 0.0 || config.lambda_inter > 1.0)
    throw std::invalid_argument("combined_loss: lambda_inter outside [0, 1]");
  if (!li.grad_embeddings.empty())
    throw std::invalid_argument(
        "combined_loss: the regularizer must not carry embedding gradients");
  if (la.grad_weights.dim != li.grad_weights.dim ||
      la.grad_weights.num_classes != li.grad_weights.num_classes)
    throw std::invalid_argument("combined_loss: weight gradient shape mismatch");

  const double w0 = 1.0 - config.lambda_inter;
  const double w1 = config.lambda_inter;

  LossResult res;
  res.value = w0 * la.value + w1 * li.value;
  res.grad_embeddings.resize(la.grad_embeddings.size());
  for (size_t i = 0; i < la.grad_embeddings.size(); ++i) {
    res.grad_embeddings[i].resize(la.grad_embeddings[i].size());
    for (size_t t = 0; t < la.grad_embeddings[i].size(); ++t)
      res.grad_embeddings[i][t] = w0 * la.grad_embeddings[i][t];
  }
  res.grad_weights =
      ClassWeights::zeros(la.grad_weights.dim, la.grad_weights.num_classes);
  for (size_t t = 0; t < res.grad_weights.data.size(); ++t)
    res.grad_weights.data[t] =
        w0 * la.grad_weights.data[t] + w1 * li.grad_weights.data[t];
  return res;
}

}  // namespace spherembed
