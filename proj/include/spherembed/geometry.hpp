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

#ifndef SPHEREMBED_GEOMETRY_HPP_
#define SPHEREMBED_GEOMETRY_HPP_

#include <span>
#include <vector>

namespace spherembed {

using Vec = std::vector<double>;

// Cosines are clamped to [-1 + kArccosClamp, 1 - kArccosClamp] before
// arccos so that angle gradients stay finite near 0 and pi. Inside the
// clamp region the angle has zero gradient w.r.t. the cosine; the loss
// gradients use the same convention.
inline constexpr double kArccosClamp = 1e-7;

// C class centers of dimension dim, stored one center per row. Center j
// is column j of the conceptual dim-by-C output matrix; the bias term is
// identically zero and has no representation.
struct ClassWeights {
  int dim = 0;
  int num_classes = 0;
  std::vector<double> data;  // num_classes * dim, row-major

  static ClassWeights zeros(int dim, int num_classes);

  std::span<double> center(int j) {
    return {data.data() + static_cast<size_t>(j) * dim,
            static_cast<size_t>(dim)};
  }
  std::span<const double> center(int j) const {
    return {data.data() + static_cast<size_t>(j) * dim,
            static_cast<size_t>(dim)};
  }
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

// Unit-norm copy of v; throws std::invalid_argument on zero norm.
Vec l2_normalize(std::span<const double> v);

// u.v / (|u||v|), clipped into [-1, 1]. Throws on zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

// arccos of the clamped cosine, in [0, pi]. Throws on zero-norm input.
double angle(std::span<const double> u, std::span<const double> v);

// Every center scaled to unit norm. Throws std::invalid_argument naming
// the first zero column.
ClassWeights normalize_columns(const ClassWeights& weights);

}  // namespace spherembed

#endif  // SPHEREMBED_GEOMETRY_HPP_
