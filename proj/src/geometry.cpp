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

#include "spherembed/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spherembed {

ClassWeights ClassWeights::zeros(int dim, int num_classes) {
  ClassWeights w;
  w.dim = dim;
  w.num_classes = num_classes;
  w.data.assign(static_cast<size_t>(dim) * num_classes, 0.0);
  return w;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vec l2_normalize(std::span<const double> v) {
  const double n = norm(v);
  if (n == 0.0)
    throw std::invalid_argument("l2_normalize: zero-norm vector has no direction");
  Vec out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return out;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0)
    throw std::invalid_argument("cosine: zero-norm input");
  const double c = dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

double angle(std::span<const double> u, std::span<const double> v) {
  const double c = cosine(u, v);
  return std::acos(std::clamp(c, -1.0 + kArccosClamp, 1.0 - kArccosClamp));
}

ClassWeights normalize_columns(const ClassWeights& weights) {
  ClassWeights out = weights;
  for (int j = 0; j < out.num_classes; ++j) {
    auto col = out.center(j);
    const double n = norm(col);
    if (n == 0.0)
      throw std::invalid_argument("normalize_columns: column " +
                                  std::to_string(j) + " has zero norm");
    for (double& x : col) x /= n;
  }
  return out;
}

}  // namespace spherembed
