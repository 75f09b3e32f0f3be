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

#ifndef SPHEREMBED_ENCODER_HPP_
#define SPHEREMBED_ENCODER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "spherembed/geometry.hpp"
#include "spherembed/synth.hpp"

namespace spherembed {

// Frame-level tanh MLP, mean pool over frames, affine head to the
// embedding dimension.
struct EncoderConfig {
  int frames_dim = 2;
  std::vector<int> hidden = {64, 64};
  int embed_dim = 512;
};

struct EncoderParams {
  EncoderConfig config;
  std::vector<double> theta;  // all layer weights and biases, flat

  static size_t param_count(const EncoderConfig& config);
  // Hidden weights ~ N(0, 1/sqrt(fan_in)), biases zero, head weights
  // small-variance Gaussian (std 0.01/sqrt(fan_in)).
  static EncoderParams init(const EncoderConfig& config, uint64_t seed);
};

// Per-frame activations kept for the backward pass.
struct EncoderTape {
  std::vector<std::vector<Vec>> hidden;  // hidden[layer][frame]
  Vec pooled;
};

// Embedding of one utterance. Pooling accumulates each coordinate in
// value order, so permuting the frames gives a bitwise-identical result.
// Throws on an empty utterance or frame dimension mismatch.
Vec encode(const Utterance& utt, const EncoderParams& params,
           EncoderTape* tape = nullptr);

// Accumulates d(loss)/d(theta) into grad_theta given d(loss)/d(embedding),
// using the tape recorded by encode() for the same utterance and params.
void encode_backward(const Utterance& utt, const EncoderParams& params,
                     const EncoderTape& tape, const Vec& grad_embedding,
                     std::span<double> grad_theta);

}  // namespace spherembed

#endif  // SPHEREMBED_ENCODER_HPP_
