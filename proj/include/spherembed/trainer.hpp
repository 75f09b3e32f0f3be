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

#ifndef SPHEREMBED_TRAINER_HPP_
#define SPHEREMBED_TRAINER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spherembed/encoder.hpp"
#include "spherembed/inter_reg.hpp"
#include "spherembed/io.hpp"
#include "spherembed/losses.hpp"
#include "spherembed/synth.hpp"

namespace spherembed {

enum class LossVariant { kSoftmax, kModified, kAngular };

// The m1 variant anneals the target logit (decaying lambda), the m2/m3
// variants ramp a loss blend from modified softmax to the margin loss.
// annealing = false pins the blend at 1 and the logit lambda at 0 from
// the first step.
struct TrainingConfig {
  double lr_init = 0.1;
  double lr_final = 0.001;
  std::vector<int> milestones;  // empty: decay at 50% and 75% of epochs
  double momentum = 0.9;
  int epochs = 10;
  int batch_p = 2;  // distinct speakers per batch
  int batch_k = 2;  // utterances per speaker
  LossVariant variant = LossVariant::kSoftmax;
  MarginConfig margins;
  RegConfig reg{0.0};  // lambda_inter = 0 disables the regularizer
  AnnealConfig anneal;
  bool annealing = true;
  EncoderConfig encoder;
  uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double lr = 0.0;
  double lambda_a = 0.0;
  double lambda_blend = 0.0;
  double sep = 0.0;
};

struct TrainResult {
  EncoderParams params;
  ClassWeights weights;
  std::vector<std::string> class_ids;  // speaker id per weight column
  std::vector<EpochRecord> log;
  bool diverged = false;
};

// One epoch of P x K batches of utterance indices: each batch holds
// exactly P distinct speakers with K utterances each. Deterministic in
// seed; speakers with fewer than K utterances are skipped, leftover
// speakers that do not fill a batch are dropped.
std::vector<std::vector<size_t>> balanced_batches(const Dataset& dataset,
                                                  int batch_p, int batch_k,
                                                  uint64_t seed);

// velocity <- momentum velocity + grads; params <- params - lr velocity.
// Throws on shape mismatch or non-finite gradients.
void sgd_step(std::span<double> params, std::span<const double> grads,
              double lr, double momentum, std::span<double> velocity);

// lr_init scaled by 0.1 per passed milestone, floored at lr_final.
double lr_schedule(int epoch, const TrainingConfig& config);

// Full loop: encode, annealed loss, inter-class combination, SGD.
// Divergence (non-finite loss or gradient) stops training and returns
// the log up to the last completed epoch with diverged = true.
TrainResult train(const Dataset& dataset, const TrainingConfig& config);

// One embedding per utterance, dataset order.
EmbeddingSet extract_embeddings(const Dataset& dataset,
                                const EncoderParams& params);

// "epoch loss lr lambda lambda_blend sep_energy" per line.
void write_train_log(const std::vector<EpochRecord>& log,
                     const std::string& path);

// Encoder parameter file and class-weight file (speaker id per row).
void write_encoder(const EncoderParams& params, const std::string& path);
EncoderParams read_encoder(const std::string& path);
void write_weights(const ClassWeights& weights,
                   const std::vector<std::string>& class_ids,
                   const std::string& path);
std::pair<ClassWeights, std::vector<std::string>> read_weights(
    const std::string& path);

}  // namespace spherembed

#endif  // SPHEREMBED_TRAINER_HPP_
