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

#include "spherembed/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spherembed/rng.hpp"

namespace spherembed {

namespace {

// Layer l maps widths[l] -> widths[l+1]; weights row-major, then biases.
std::vector<int> layer_widths(const EncoderConfig& config) {
  std::vector<int> widths;
  widths.push_back(config.frames_dim);
  for (const int h : config.hidden) widths.push_back(h);
  widths.push_back(config.embed_dim);
  return widths;
}

size_t layer_offset(const EncoderConfig& config, size_t layer) {
  const auto widths = layer_widths(config);
  size_t off = 0;
  for (size_t l = 0; l < layer; ++l)
    off += static_cast<size_t>(widths[l + 1]) * widths[l] + widths[l + 1];
  return off;
}

void validate(const EncoderConfig& config) {
  if (config.frames_dim < 1 || config.embed_dim < 1)
    throw std::invalid_argument("encoder: dimensions must be positive");
  for (const int h : config.hidden)
    if (h < 1) throw std::invalid_argument("encoder: hidden width must be positive");
  if (config.hidden.empty())
    throw std::invalid_argument("encoder: need at least one hidden layer");
}

// out = W in + b for layer widths (n_out, n_in) at params theta[off..].
void affine(std::span<const double> theta, size_t off, int n_out, int n_in,
            std::span<const double> in, Vec& out) {
  out.assign(n_out, 0.0);
  for (int r = 0; r < n_out; ++r) {
    const double* w = theta.data() + off + static_cast<size_t>(r) * n_in;
    double acc = theta[off + static_cast<size_t>(n_out) * n_in + r];  // bias
    for (int c = 0; c < n_in; ++c) acc += w[c] * in[c];
    out[r] = acc;
  }
}

}  // namespace

size_t EncoderParams::param_count(const EncoderConfig& config) {
  const auto widths = layer_widths(config);
  size_t count = 0;
  for (size_t l = 0; l + 1 < widths.size(); ++l)
    count += static_cast<size_t>(widths[l + 1]) * widths[l] + widths[l + 1];
  return count;
}

EncoderParams EncoderParams::init(const EncoderConfig& config, uint64_t seed) {
  validate(config);
  EncoderParams params;
  params.config = config;
  params.theta.assign(param_count(config), 0.0);

  Rng rng(derive_seed(seed, 0xe4c0de));
  const auto widths = layer_widths(config);
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    const bool is_head = (l + 2 == widths.size());
    const double std = (is_head ? 0.01 : 1.0) / std::sqrt(widths[l]);
    const size_t off = layer_offset(config, l);
    const size_t n_weights = static_cast<size_t>(widths[l + 1]) * widths[l];
    for (size_t i = 0; i < n_weights; ++i)
      params.theta[off + i] = std * rng.normal();
    // biases stay zero
  }
  return params;
}

Vec encode(const Utterance& utt, const EncoderParams& params,
           EncoderTape* tape) {
  validate(params.config);
  if (utt.frames.empty())
    throw std::invalid_argument("encode: utterance " + utt.utt_id +
                                " has no frames");
  if (params.theta.size() != EncoderParams::param_count(params.config))
    throw std::invalid_argument("encode: parameter vector size mismatch");
  const auto widths = layer_widths(params.config);
  const size_t n_hidden = params.config.hidden.size();
  const size_t n_frames = utt.frames.size();

  std::vector<std::vector<Vec>> hidden(n_hidden,
                                       std::vector<Vec>(n_frames));
  Vec buffer;
  for (size_t f = 0; f < n_frames; ++f) {
    if (utt.frames[f].size() != static_cast<size_t>(params.config.frames_dim))
      throw std::invalid_argument("encode: frame dimension mismatch in " +
                                  utt.utt_id);
    std::span<const double> in(utt.frames[f]);
    for (size_t l = 0; l < n_hidden; ++l) {
      affine(params.theta, layer_offset(params.config, l), widths[l + 1],
             widths[l], in, buffer);
      for (double& v : buffer) v = std::tanh(v);
      hidden[l][f] = buffer;
      in = std::span<const double>(hidden[l][f]);
    }
  }

  // Mean pool in value order per coordinate: permutation-proof summation.
  const int pool_dim = widths[n_hidden];
  Vec pooled(pool_dim, 0.0);
  std::vector<double> column(n_frames);
  for (int t = 0; t < pool_dim; ++t) {
    for (size_t f = 0; f < n_frames; ++f) column[f] = hidden[n_hidden - 1][f][t];
    std::sort(column.begin(), column.end());
    double acc = 0.0;
    for (const double v : column) acc += v;
    pooled[t] = acc / static_cast<double>(n_frames);
  }

  Vec embedding;
  affine(params.theta, layer_offset(params.config, n_hidden),
         params.config.embed_dim, pool_dim, pooled, embedding);

  if (tape) {
    tape->hidden = std::move(hidden);
    tape->pooled = pooled;
  }
  return embedding;
}

void encode_backward(const Utterance& utt, const EncoderParams& params,
                     const EncoderTape& tape, const Vec& grad_embedding,
                     std::span<double> grad_theta) {
  const auto widths = layer_widths(params.config);
  const size_t n_hidden = params.config.hidden.size();
  const size_t n_frames = utt.frames.size();
  if (grad_embedding.size() != static_cast<size_t>(params.config.embed_dim))
    throw std::invalid_argument("encode_backward: embedding gradient size mismatch");
  if (grad_theta.size() != params.theta.size())
    throw std::invalid_argument("encode_backward: gradient vector size mismatch");
  if (tape.hidden.size() != n_hidden || tape.hidden[0].size() != n_frames)
    throw std::invalid_argument("encode_backward: tape does not match utterance");

  // Head: e = Wh pooled + bh.
  const int pool_dim = widths[n_hidden];
  const size_t head_off = layer_offset(params.config, n_hidden);
  Vec grad_pooled(pool_dim, 0.0);
  for (int r = 0; r < params.config.embed_dim; ++r) {
    const double g = grad_embedding[r];
    const size_t row = head_off + static_cast<size_t>(r) * pool_dim;
    for (int c = 0; c < pool_dim; ++c) {
      grad_theta[row + c] += g * tape.pooled[c];
      grad_pooled[c] += g * params.theta[row + c];
    }
    grad_theta[head_off + static_cast<size_t>(params.config.embed_dim) * pool_dim + r] += g;
  }

  // Each frame receives 1/n of the pooled gradient.
  Vec grad_h(pool_dim);
  for (size_t f = 0; f < n_frames; ++f) {
    for (int t = 0; t < pool_dim; ++t)
      grad_h[t] = grad_pooled[t] / static_cast<double>(n_frames);

    for (size_t l = n_hidden; l-- > 0;) {
      const int n_out = widths[l + 1];
      const int n_in = widths[l];
      const size_t off = layer_offset(params.config, l);
      std::span<const double> in =
          (l == 0) ? std::span<const double>(utt.frames[f])
                   : std::span<const double>(tape.hidden[l - 1][f]);
      const Vec& act = tape.hidden[l][f];

      Vec grad_in(n_in, 0.0);
      for (int r = 0; r < n_out; ++r) {
        const double gpre = grad_h[r] * (1.0 - act[r] * act[r]);  // tanh'
        const size_t row = off + static_cast<size_t>(r) * n_in;
        for (int c = 0; c < n_in; ++c) {
          grad_theta[row + c] += gpre * in[c];
          grad_in[c] += gpre * params.theta[row + c];
        }
        grad_theta[off + static_cast<size_t>(n_out) * n_in + r] += gpre;
      }
      grad_h = std::move(grad_in);
    }
  }
}

}  // namespace spherembed
