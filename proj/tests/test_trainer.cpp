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

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "test_support.hpp"

using namespace spherembed;
using namespace spherembed::testing;

namespace {

SpeakerSpec bench_spec(uint64_t seed) {
  SpeakerSpec spec;
  spec.n_speakers = 8;
  spec.frames_dim = 6;
  spec.frames_min = 3;
  spec.frames_max = 6;
  spec.utts_per_speaker = 6;
  spec.within_spread = 0.15;
  spec.between_spread = 1.5;
  spec.seed = seed;
  return spec;
}

TrainingConfig small_train_config(const Dataset& ds) {
  TrainingConfig cfg;
  cfg.encoder.frames_dim = ds.spec.frames_dim;
  cfg.encoder.hidden = {16, 16};
  cfg.encoder.embed_dim = 8;
  cfg.epochs = 6;
  cfg.batch_p = 4;
  cfg.batch_k = 2;
  cfg.lr_init = 0.1;
  cfg.lr_final = 0.001;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("balanced_batches composition and determinism") {
  const Dataset ds = generate(bench_spec(1));
  const auto batches = balanced_batches(ds, 4, 2, 99);
  REQUIRE(batches.size() == 2);  // 8 speakers / P=4
  for (const auto& batch : batches) {
    REQUIRE(batch.size() == 8);
    std::map<std::string, int> counts;
    std::set<size_t> unique(batch.begin(), batch.end());
    CHECK(unique.size() == batch.size());
    for (const size_t idx : batch)
      counts[ds.utterances[idx].speaker_id] += 1;
    CHECK(counts.size() == 4);
    for (const auto& [speaker, count] : counts) CHECK(count == 2);
  }

  const auto again = balanced_batches(ds, 4, 2, 99);
  CHECK(batches == again);
  const auto other = balanced_batches(ds, 4, 2, 100);
  CHECK_FALSE(batches == other);

  // P = n_speakers, K = 1 covers every speaker once per batch
  const auto full = balanced_batches(ds, 8, 1, 5);
  REQUIRE(full.size() == 1);
  std::set<std::string> speakers;
  for (const size_t idx : full[0])
    speakers.insert(ds.utterances[idx].speaker_id);
  CHECK(speakers.size() == 8);

  CHECK_THROWS_AS(balanced_batches(ds, 9, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(balanced_batches(ds, 2, 7, 0), std::invalid_argument);
}

TEST_CASE("class counts stay balanced over a full epoch") {
  const Dataset ds = generate(bench_spec(2));
  for (const auto& batch : balanced_batches(ds, 2, 3, 11)) {
    std::map<std::string, int> counts;
    for (const size_t idx : batch)
      counts[ds.utterances[idx].speaker_id] += 1;
    for (const auto& [speaker, count] : counts) CHECK(count == 3);
  }
}

TEST_CASE("sgd_step plain and momentum recurrences") {
  std::vector<double> params = {1.0, -2.0};
  std::vector<double> grads = {0.5, 0.25};
  std::vector<double> velocity = {0.0, 0.0};

  sgd_step(params, grads, 0.1, 0.0, velocity);
  CHECK(params[0] == doctest::Approx(1.0 - 0.05).epsilon(1e-15));
  CHECK(params[1] == doctest::Approx(-2.0 - 0.025).epsilon(1e-15));

  // zero grads, zero velocity: no movement
  std::vector<double> frozen = {3.0};
  std::vector<double> zero = {0.0};
  std::vector<double> vel0 = {0.0};
  sgd_step(frozen, zero, 0.1, 0.9, vel0);
  CHECK(frozen[0] == 3.0);

  // two steps with momentum 0.9 against a hand-unrolled recurrence
  double p = 1.0, v = 0.0;
  const double g1 = 0.2, g2 = -0.4, lr = 0.05, mu = 0.9;
  std::vector<double> pp = {p}, vv = {v};
  sgd_step(pp, {&g1, 1}, lr, mu, vv);
  sgd_step(pp, {&g2, 1}, lr, mu, vv);
  double v1 = mu * 0.0 + g1;
  double p1 = 1.0 - lr * v1;
  double v2 = mu * v1 + g2;
  double p2 = p1 - lr * v2;
  CHECK(std::abs(pp[0] - p2) < 1e-12);
  CHECK(std::abs(vv[0] - v2) < 1e-12);

  std::vector<double> bad = {std::nan("")};
  CHECK_THROWS_AS(sgd_step(pp, bad, lr, mu, vv), std::runtime_error);
  std::vector<double> short_v = {0.0, 0.0};
  CHECK_THROWS_AS(sgd_step(pp, {&g1, 1}, lr, mu, short_v),
                  std::invalid_argument);
}

TEST_CASE("lr_schedule steps at the milestones and floors at lr_final") {
  TrainingConfig cfg;
  cfg.lr_init = 0.1;
  cfg.lr_final = 0.001;
  cfg.epochs = 20;
  cfg.milestones = {10, 15};
  CHECK(lr_schedule(0, cfg) == 0.1);
  CHECK(lr_schedule(9, cfg) == 0.1);
  CHECK(lr_schedule(10, cfg) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(lr_schedule(14, cfg) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(lr_schedule(15, cfg) == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(lr_schedule(19, cfg) == doctest::Approx(0.001).epsilon(1e-12));

  // floor
  cfg.milestones = {1, 2, 3};
  CHECK(lr_schedule(5, cfg) == 0.001);
}

TEST_CASE("train for zero epochs returns the initialization unchanged") {
  const Dataset ds = generate(bench_spec(3));
  TrainingConfig cfg = small_train_config(ds);
  cfg.epochs = 0;
  const TrainResult res = train(ds, cfg);
  CHECK(res.log.empty());
  CHECK_FALSE(res.diverged);
  const EncoderParams fresh =
      EncoderParams::init(cfg.encoder, derive_seed(cfg.seed, 1));
  CHECK(res.params.theta == fresh.theta);
}

TEST_CASE("softmax training fits separable synthetic data") {
  SpeakerSpec spec = bench_spec(4);
  spec.frames_dim = 16;
  spec.within_spread = 0.05;
  const Dataset ds = generate(spec);
  TrainingConfig cfg = small_train_config(ds);
  cfg.encoder.frames_dim = 16;
  cfg.encoder.embed_dim = 16;
  cfg.epochs = 12;
  cfg.variant = LossVariant::kSoftmax;
  const TrainResult res = train(ds, cfg);
  REQUIRE_FALSE(res.diverged);
  REQUIRE(res.log.size() == 12);
  CHECK(res.log.back().loss < 0.1 * res.log.front().loss);
}

TEST_CASE("training is reproducible for a fixed config and seed") {
  const Dataset ds = generate(bench_spec(5));
  TrainingConfig cfg = small_train_config(ds);
  cfg.variant = LossVariant::kAngular;
  cfg.margins = MarginConfig{1.0, 0.0, 0.2};
  cfg.reg.lambda_inter = 0.01;
  cfg.epochs = 3;
  const TrainResult a = train(ds, cfg);
  const TrainResult b = train(ds, cfg);
  REQUIRE_FALSE(a.diverged);
  CHECK(a.params.theta == b.params.theta);
  CHECK(a.weights.data == b.weights.data);
  REQUIRE(a.log.size() == b.log.size());
  for (size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].loss == b.log[i].loss);
    CHECK(a.log[i].sep == b.log[i].sep);
  }
}

TEST_CASE("end-to-end gradient matches finite differences") {
  // Total blended + regularized loss as a function of encoder parameters.
  const Dataset ds = generate(bench_spec(6));
  TrainingConfig cfg = small_train_config(ds);
  const int C = static_cast<int>(ds.speaker_ids().size());

  EncoderParams params = EncoderParams::init(cfg.encoder, 31);
  Rng wrng(32);
  ClassWeights weights = random_weights(wrng, cfg.encoder.embed_dim, C);
  const MarginConfig margins{1.0, 0.0, 0.2};
  const RegConfig reg{0.01};
  const double lambda_blend = 0.6;

  // fixed batch: first 6 utterances
  std::vector<size_t> indices = {0, 1, 6, 7, 12, 18};
  const auto speakers = ds.speaker_ids();
  auto label_of = [&](size_t idx) {
    const auto& sid = ds.utterances[idx].speaker_id;
    return static_cast<int>(std::find(speakers.begin(), speakers.end(), sid) -
                            speakers.begin());
  };

  auto total_loss = [&](const EncoderParams& p) {
    Batch batch;
    for (const size_t idx : indices) {
      batch.embeddings.push_back(encode(ds.utterances[idx], p));
      batch.labels.push_back(label_of(idx));
    }
    const LossResult main = blended_loss(batch, weights, margins, lambda_blend);
    return combined_loss(main, inter_loss(weights), reg).value;
  };

  // analytic gradient through the encoder
  Batch batch;
  std::vector<EncoderTape> tapes(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    batch.embeddings.push_back(
        encode(ds.utterances[indices[i]], params, &tapes[i]));
    batch.labels.push_back(label_of(indices[i]));
  }
  const LossResult main = blended_loss(batch, weights, margins, lambda_blend);
  const LossResult comb = combined_loss(main, inter_loss(weights), reg);
  std::vector<double> grad_theta(params.theta.size(), 0.0);
  for (size_t i = 0; i < indices.size(); ++i)
    encode_backward(ds.utterances[indices[i]], params, tapes[i],
                    comb.grad_embeddings[i], grad_theta);

  // FD on a random subset of 20 parameters
  Rng rng(33);
  std::vector<double> analytic, numeric;
  const double h = 1e-5;
  for (int probe = 0; probe < 20; ++probe) {
    const size_t idx = rng.uniform_int(params.theta.size());
    const double saved = params.theta[idx];
    params.theta[idx] = saved + h;
    const double hi = total_loss(params);
    params.theta[idx] = saved - h;
    const double lo = total_loss(params);
    params.theta[idx] = saved;
    numeric.push_back((hi - lo) / (2.0 * h));
    analytic.push_back(grad_theta[idx]);
  }
  CHECK(rel_error(analytic, numeric) < 1e-3);
}

TEST_CASE("inter regularization keeps sep_energy from growing") {
  // margins zero, lambda_inter on: the epoch trend of sep_energy(W)
  // must not rise beyond optimizer noise, averaged over seeds.
  double total_drift = 0.0;
  for (uint64_t seed : {1001, 1002, 1003, 1004, 1005}) {
    SpeakerSpec spec = bench_spec(seed);
    const Dataset ds = generate(spec);
    TrainingConfig cfg = small_train_config(ds);
    cfg.seed = seed;
    cfg.variant = LossVariant::kModified;
    cfg.reg.lambda_inter = 0.05;
    cfg.epochs = 6;
    const TrainResult res = train(ds, cfg);
    REQUIRE_FALSE(res.diverged);
    total_drift += res.log.back().sep - res.log.front().sep;
  }
  CHECK(total_drift / 5.0 <= 1e-3);
}

TEST_CASE("extract_embeddings matches encode and survives re-extraction") {
  const Dataset ds = generate(bench_spec(8));
  TrainingConfig cfg = small_train_config(ds);
  cfg.epochs = 2;
  const TrainResult res = train(ds, cfg);
  const EmbeddingSet set = extract_embeddings(ds, res.params);
  REQUIRE(set.ids.size() == ds.utterances.size());
  for (size_t i = 0; i < ds.utterances.size(); ++i) {
    CHECK(set.ids[i] == ds.utterances[i].utt_id);
    CHECK(set.vectors[i] == encode(ds.utterances[i], res.params));
  }
  const EmbeddingSet again = extract_embeddings(ds, res.params);
  for (size_t i = 0; i < set.vectors.size(); ++i)
    CHECK(set.vectors[i] == again.vectors[i]);
}

TEST_CASE("encoder and weights files round-trip") {
  const Dataset ds = generate(bench_spec(9));
  TrainingConfig cfg = small_train_config(ds);
  cfg.epochs = 1;
  const TrainResult res = train(ds, cfg);

  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() /
      ("spherembed_trainer_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  write_encoder(res.params, (dir / "enc.txt").string());
  const EncoderParams back = read_encoder((dir / "enc.txt").string());
  CHECK(back.config.hidden == res.params.config.hidden);
  CHECK(back.theta == res.params.theta);

  write_weights(res.weights, res.class_ids, (dir / "w.txt").string());
  const auto [w, ids] = read_weights((dir / "w.txt").string());
  CHECK(ids == res.class_ids);
  CHECK(w.data == res.weights.data);

  write_train_log(res.log, (dir / "log.txt").string());
  CHECK(fs::exists(dir / "log.txt"));
  fs::remove_all(dir);
}
