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

#include "spherembed/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spherembed/rng.hpp"

namespace spherembed {

namespace {

bool all_finite(std::span<const double> v) {
  for (const double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void validate_config(const TrainingConfig& config) {
  if (config.lr_init <= config.lr_final || config.lr_final <= 0.0)
    throw std::invalid_argument("train: need lr_init > lr_final > 0");
  if (config.momentum < 0.0 || config.momentum >= 1.0)
    throw std::invalid_argument("train: momentum outside [0, 1)");
  if (config.epochs < 0)
    throw std::invalid_argument("train: negative epoch count");
  if (config.batch_p * config.batch_k < 2)
    throw std::invalid_argument("train: batch must hold at least 2 samples");
  for (size_t i = 1; i < config.milestones.size(); ++i)
    if (config.milestones[i] <= config.milestones[i - 1])
      throw std::invalid_argument("train: milestones must strictly increase");
}

std::vector<int> resolved_milestones(const TrainingConfig& config) {
  if (!config.milestones.empty()) return config.milestones;
  return {config.epochs / 2, config.epochs * 3 / 4};
}

}  // namespace

std::vector<std::vector<size_t>> balanced_batches(const Dataset& dataset,
                                                  int batch_p, int batch_k,
                                                  uint64_t seed) {
  if (batch_p < 1 || batch_k < 1)
    throw std::invalid_argument("balanced_batches: P and K must be positive");

  const std::vector<std::string> speakers = dataset.speaker_ids();
  std::vector<std::vector<size_t>> by_speaker(speakers.size());
  for (size_t i = 0; i < dataset.utterances.size(); ++i)
    for (size_t s = 0; s < speakers.size(); ++s)
      if (speakers[s] == dataset.utterances[i].speaker_id)
        by_speaker[s].push_back(i);

  std::vector<size_t> eligible;
  for (size_t s = 0; s < by_speaker.size(); ++s)
    if (by_speaker[s].size() >= static_cast<size_t>(batch_k))
      eligible.push_back(s);
  if (eligible.size() < static_cast<size_t>(batch_p))
    throw std::invalid_argument(
        "balanced_batches: only " + std::to_string(eligible.size()) +
        " speakers have " + std::to_string(batch_k) +
        " utterances, need at least " + std::to_string(batch_p));

  Rng rng(derive_seed(seed, 0xba7c4));
  rng.shuffle(eligible);

  std::vector<std::vector<size_t>> batches;
  const size_t n_batches = eligible.size() / static_cast<size_t>(batch_p);
  for (size_t b = 0; b < n_batches; ++b) {
    std::vector<size_t> batch;
    batch.reserve(static_cast<size_t>(batch_p) * batch_k);
    for (int p = 0; p < batch_p; ++p) {
      const size_t s = eligible[b * batch_p + p];
      std::vector<size_t> utts = by_speaker[s];
      rng.shuffle(utts);
      for (int k = 0; k < batch_k; ++k) batch.push_back(utts[k]);
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

void sgd_step(std::span<double> params, std::span<const double> grads,
              double lr, double momentum, std::span<double> velocity) {
  if (params.size() != grads.size() || params.size() != velocity.size())
    throw std::invalid_argument("sgd_step: shape mismatch");
  if (!all_finite(grads))
    throw std::runtime_error("sgd_step: non-finite gradient, aborting");
  for (size_t i = 0; i < params.size(); ++i) {
    velocity[i] = momentum * velocity[i] + grads[i];
    params[i] -= lr * velocity[i];
  }
}

double lr_schedule(int epoch, const TrainingConfig& config) {
  if (epoch < 0) throw std::invalid_argument("lr_schedule: negative epoch");
  double lr = config.lr_init;
  for (const int m : resolved_milestones(config))
    if (epoch >= m) lr *= 0.1;
  return std::max(lr, config.lr_final);
}

TrainResult train(const Dataset& dataset, const TrainingConfig& config) {
  validate_config(config);
  if (dataset.spec.frames_dim != config.encoder.frames_dim)
    throw std::invalid_argument(
        "train: encoder frames_dim " +
        std::to_string(config.encoder.frames_dim) +
        " does not match dataset frames_dim " +
        std::to_string(dataset.spec.frames_dim));

  TrainResult result;
  result.class_ids = dataset.speaker_ids();
  const int num_classes = static_cast<int>(result.class_ids.size());
  if (num_classes < 2)
    throw std::invalid_argument("train: need at least 2 speakers");

  // Speaker-id -> class label, first-seen order.
  const auto utt_idx = dataset.utt_index();
  std::vector<int> utt_label(dataset.utterances.size());
  for (size_t i = 0; i < dataset.utterances.size(); ++i) {
    const auto& sid = dataset.utterances[i].speaker_id;
    utt_label[i] = static_cast<int>(
        std::find(result.class_ids.begin(), result.class_ids.end(), sid) -
        result.class_ids.begin());
  }

  result.params = EncoderParams::init(config.encoder,
                                      derive_seed(config.seed, 1));
  result.weights = ClassWeights::zeros(config.encoder.embed_dim, num_classes);
  {
    Rng rng(derive_seed(config.seed, 2));
    for (int j = 0; j < num_classes; ++j) {
      auto col = result.weights.center(j);
      for (double& v : col) v = rng.normal();
      const double n = norm(col);
      for (double& v : col) v /= n;
    }
  }

  AnnealConfig anneal = config.anneal;
  if (anneal.ramp_steps <= 0) {
    // Five epochs' worth of steps.
    const auto probe =
        balanced_batches(dataset, config.batch_p, config.batch_k,
                         derive_seed(config.seed, 3));
    anneal.ramp_steps = std::max<long>(1, 5 * static_cast<long>(probe.size()));
  }

  std::vector<double> vel_theta(result.params.theta.size(), 0.0);
  std::vector<double> vel_weights(result.weights.data.size(), 0.0);
  std::vector<double> grad_theta(result.params.theta.size());

  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, config);
    const auto batches =
        balanced_batches(dataset, config.batch_p, config.batch_k,
                         derive_seed(config.seed, 3 + epoch));
    double epoch_loss = 0.0;
    AnnealState state;
    state.lambda_blend = config.annealing ? 0.0 : 1.0;

    for (const auto& batch_indices : batches) {
      if (config.annealing)
        state = anneal_schedule(step, anneal);
      else
        state = AnnealState{0.0, 1.0, step};

      Batch batch;
      std::vector<EncoderTape> tapes(batch_indices.size());
      batch.embeddings.reserve(batch_indices.size());
      batch.labels.reserve(batch_indices.size());
      for (size_t i = 0; i < batch_indices.size(); ++i) {
        batch.embeddings.push_back(encode(
            dataset.utterances[batch_indices[i]], result.params, &tapes[i]));
        batch.labels.push_back(utt_label[batch_indices[i]]);
      }

      LossResult loss;
      switch (config.variant) {
        case LossVariant::kSoftmax:
          loss = softmax_ce(batch, result.weights);
          break;
        case LossVariant::kModified:
          loss = modified_softmax(batch, result.weights);
          break;
        case LossVariant::kAngular:
          if (config.margins.m1 > 1.0)
            loss = angular_loss(batch, result.weights, config.margins,
                                config.annealing ? state.lambda_a : 0.0);
          else
            loss = blended_loss(batch, result.weights, config.margins,
                                state.lambda_blend);
          break;
      }
      if (config.reg.lambda_inter > 0.0)
        loss = combined_loss(loss, inter_loss(result.weights), config.reg);

      std::fill(grad_theta.begin(), grad_theta.end(), 0.0);
      for (size_t i = 0; i < batch_indices.size(); ++i)
        encode_backward(dataset.utterances[batch_indices[i]], result.params,
                        tapes[i], loss.grad_embeddings[i], grad_theta);

      if (!std::isfinite(loss.value) || !all_finite(grad_theta) ||
          !all_finite(loss.grad_weights.data)) {
        result.diverged = true;
        return result;
      }

      sgd_step(result.params.theta, grad_theta, lr, config.momentum,
               vel_theta);
      sgd_step(result.weights.data, loss.grad_weights.data, lr,
               config.momentum, vel_weights);
      epoch_loss += loss.value;
      ++step;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = batches.empty() ? 0.0 : epoch_loss / batches.size();
    rec.lr = lr;
    rec.lambda_a = state.lambda_a;
    rec.lambda_blend = state.lambda_blend;
    rec.sep = sep_energy(result.weights);
    result.log.push_back(rec);
  }
  return result;
}

EmbeddingSet extract_embeddings(const Dataset& dataset,
                                const EncoderParams& params) {
  EmbeddingSet set;
  set.dim = params.config.embed_dim;
  set.ids.reserve(dataset.utterances.size());
  set.vectors.reserve(dataset.utterances.size());
  for (const Utterance& u : dataset.utterances) {
    set.ids.push_back(u.utt_id);
    set.vectors.push_back(encode(u, params));
  }
  return set;
}

void write_train_log(const std::vector<EpochRecord>& log,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "# epoch loss lr lambda lambda_blend sep_energy\n";
  for (const EpochRecord& r : log)
    out << r.epoch << " " << format_double(r.loss) << " "
        << format_double(r.lr) << " " << format_double(r.lambda_a) << " "
        << format_double(r.lambda_blend) << " " << format_double(r.sep)
        << "\n";
}

void write_encoder(const EncoderParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "spherembed-encoder v1\n";
  out << "frames_dim " << params.config.frames_dim << "\n";
  out << "embed_dim " << params.config.embed_dim << "\n";
  out << "hidden";
  for (const int h : params.config.hidden) out << " " << h;
  out << "\n";
  out << "params " << params.theta.size() << "\n";
  for (const double v : params.theta) out << format_double(v) << "\n";
}

EncoderParams read_encoder(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::string line;
  auto require_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw std::runtime_error(path + ": truncated file, expected " +
                               std::string(what));
    return line;
  };
  if (require_line("header") != "spherembed-encoder v1")
    throw std::runtime_error(path + ": not a spherembed encoder file");

  EncoderParams params;
  std::istringstream fd(require_line("frames_dim"));
  std::string key;
  if (!(fd >> key >> params.config.frames_dim) || key != "frames_dim")
    throw std::runtime_error(path + ": malformed frames_dim line");
  std::istringstream ed(require_line("embed_dim"));
  if (!(ed >> key >> params.config.embed_dim) || key != "embed_dim")
    throw std::runtime_error(path + ": malformed embed_dim line");
  std::istringstream hd(require_line("hidden"));
  if (!(hd >> key) || key != "hidden")
    throw std::runtime_error(path + ": malformed hidden line");
  params.config.hidden.clear();
  int h;
  while (hd >> h) params.config.hidden.push_back(h);
  std::istringstream pd(require_line("params"));
  size_t count;
  if (!(pd >> key >> count) || key != "params")
    throw std::runtime_error(path + ": malformed params line");
  if (count != EncoderParams::param_count(params.config))
    throw std::runtime_error(path + ": parameter count does not match topology");
  params.theta.resize(count);
  for (size_t i = 0; i < count; ++i) {
    require_line("parameter value");
    char* end = nullptr;
    params.theta[i] = std::strtod(line.c_str(), &end);
    if (end == line.c_str())
      throw std::runtime_error(path + ": bad parameter value '" + line + "'");
  }
  return params;
}

void write_weights(const ClassWeights& weights,
                   const std::vector<std::string>& class_ids,
                   const std::string& path) {
  if (class_ids.size() != static_cast<size_t>(weights.num_classes))
    throw std::invalid_argument("write_weights: id/column count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << weights.num_classes << " " << weights.dim << "\n";
  for (int j = 0; j < weights.num_classes; ++j) {
    out << class_ids[j];
    for (const double v : weights.center(j)) out << " " << format_double(v);
    out << "\n";
  }
}

std::pair<ClassWeights, std::vector<std::string>> read_weights(
    const std::string& path) {
  // Same row layout as the embedding file: "<id> <v1> ... <vd>".
  EmbeddingSet set = read_embeddings(path);
  ClassWeights weights =
      ClassWeights::zeros(set.dim, static_cast<int>(set.ids.size()));
  for (int j = 0; j < weights.num_classes; ++j) {
    auto col = weights.center(j);
    for (int t = 0; t < weights.dim; ++t) col[t] = set.vectors[j][t];
  }
  return {std::move(weights), std::move(set.ids)};
}

}  // namespace spherembed
