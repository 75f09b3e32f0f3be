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

#include "spherembed/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spherembed/rng.hpp"

namespace spherembed::pipeline {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_echo(const RunConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream out(join(out_dir, "config.echo"));
  if (!out)
    throw std::runtime_error(join(out_dir, "config.echo") +
                             ": cannot open for writing");
  out << echo_run_config(config);
}

}  // namespace

void gen(const RunConfig& config, const std::string& out_dir) {
  write_echo(config, out_dir);
  SpeakerSpec spec = config.data;
  spec.seed = config.seed;
  const Dataset dataset = generate(spec);
  write_dataset(dataset, join(out_dir, "dataset.txt"));
  const TrialList trials = make_trials(dataset, config.n_target,
                                       config.n_nontarget,
                                       derive_seed(config.seed, 0x7a1a15));
  write_trials(trials, join(out_dir, "trials.txt"));
}

void train_cmd(const RunConfig& config, const std::string& dataset_path,
               const std::string& out_dir) {
  write_echo(config, out_dir);
  const Dataset dataset = read_dataset(dataset_path);
  TrainingConfig tc = config.train;
  tc.seed = config.seed;
  tc.encoder.frames_dim = dataset.spec.frames_dim;
  const TrainResult result = train(dataset, tc);
  write_train_log(result.log, join(out_dir, "train.log"));
  if (result.diverged)
    throw std::runtime_error("train: loss diverged after " +
                             std::to_string(result.log.size()) +
                             " completed epochs; log retained at " +
                             join(out_dir, "train.log"));
  write_encoder(result.params, join(out_dir, "encoder.txt"));
  write_weights(result.weights, result.class_ids,
                join(out_dir, "weights.txt"));
}

void extract(const std::string& encoder_path, const std::string& dataset_path,
             const std::string& out_path) {
  const EncoderParams params = read_encoder(encoder_path);
  const Dataset dataset = read_dataset(dataset_path);
  write_embeddings(extract_embeddings(dataset, params), out_path);
}

void score(const std::string& embeddings_path, const std::string& trials_path,
           const std::string& out_path) {
  const EmbeddingSet embeddings = read_embeddings(embeddings_path);
  const TrialList trials = read_trials(trials_path);
  write_scores(score_entries(embeddings, trials), out_path);
}

std::vector<int> labels_for_embeddings(const EmbeddingSet& embeddings,
                                       const Dataset& dataset) {
  const auto utt_idx = dataset.utt_index();
  const std::vector<std::string> speakers = dataset.speaker_ids();
  std::vector<int> labels;
  labels.reserve(embeddings.ids.size());
  for (const std::string& id : embeddings.ids) {
    const auto it = utt_idx.find(id);
    if (it == utt_idx.end())
      throw std::invalid_argument("labels: utterance '" + id +
                                  "' not present in dataset");
    const std::string& sid = dataset.utterances[it->second].speaker_id;
    int label = -1;
    for (size_t s = 0; s < speakers.size(); ++s)
      if (speakers[s] == sid) {
        label = static_cast<int>(s);
        break;
      }
    labels.push_back(label);
  }
  return labels;
}

std::string eval(const std::string& scores_path,
                 const std::string& trials_path, const DcfConfig& dcf,
                 const std::string& embeddings_path,
                 const std::string& dataset_path, const std::string& det_out) {
  const TrialList trials = read_trials(trials_path);
  const ScoreSet scores = to_score_set(read_scores(scores_path), trials);

  double sb_value = std::numeric_limits<double>::quiet_NaN();
  if (!embeddings_path.empty() && !dataset_path.empty()) {
    const EmbeddingSet embeddings = read_embeddings(embeddings_path);
    const Dataset dataset = read_dataset(dataset_path);
    sb_value = between_class_variance(
        embeddings.vectors, labels_for_embeddings(embeddings, dataset));
  }
  if (!det_out.empty()) write_det(det_points(scores), det_out);

  const auto [nt_mean, nt_std] = nontarget_stats(scores);
  return format_metric_report(eer(scores), min_dcf(scores, dcf), sb_value,
                              nt_mean, nt_std);
}

double sep(const std::string& weights_path) {
  return sep_energy(read_weights(weights_path).first);
}

double sb(const std::string& embeddings_path,
          const std::string& dataset_path) {
  const EmbeddingSet embeddings = read_embeddings(embeddings_path);
  const Dataset dataset = read_dataset(dataset_path);
  return between_class_variance(embeddings.vectors,
                                labels_for_embeddings(embeddings, dataset));
}

std::string sweep(const RunConfig& config, const std::string& margin_key,
                  const std::vector<double>& values,
                  const std::string& out_dir) {
  if (margin_key != "train.m1" && margin_key != "train.m2" &&
      margin_key != "train.m3")
    throw std::invalid_argument(
        "sweep: margin key must be train.m1, train.m2 or train.m3");
  if (values.empty()) throw std::invalid_argument("sweep: no margin values");

  write_echo(config, out_dir);

  // One shared train/eval data pair; evaluation speakers are disjoint by
  // construction (independent generator seed).
  RunConfig train_cfg = config;
  train_cfg.seed = derive_seed(config.seed, 0x57ee9 + 1);
  gen(train_cfg, join(out_dir, "data_train"));
  RunConfig eval_cfg = config;
  eval_cfg.seed = derive_seed(config.seed, 0x57ee9 + 2);
  gen(eval_cfg, join(out_dir, "data_eval"));

  const std::string train_ds = join(join(out_dir, "data_train"), "dataset.txt");
  const std::string eval_ds = join(join(out_dir, "data_eval"), "dataset.txt");
  const std::string eval_trials = join(join(out_dir, "data_eval"), "trials.txt");

  std::ostringstream table;
  table << "# " << margin_key << " eer mindcf sep_energy\n";
  for (const double value : values) {
    RunConfig rc = config;
    rc.seed = config.seed;
    set_run_config_key(rc, margin_key, format_double(value));
    rc.train.variant = LossVariant::kAngular;
    std::ostringstream name;
    name << "run_" << margin_key.substr(6) << "_" << value;
    const std::string run_dir = join(out_dir, name.str());

    train_cmd(rc, train_ds, run_dir);
    extract(join(run_dir, "encoder.txt"), eval_ds,
            join(run_dir, "embeddings.txt"));
    score(join(run_dir, "embeddings.txt"), eval_trials,
          join(run_dir, "scores.txt"));

    const TrialList trials = read_trials(eval_trials);
    const ScoreSet scores =
        to_score_set(read_scores(join(run_dir, "scores.txt")), trials);
    const double sep_value = sep(join(run_dir, "weights.txt"));
    table << format_double(value) << " " << format_double(eer(scores)) << " "
          << format_double(min_dcf(scores, rc.dcf)) << " "
          << format_double(sep_value) << "\n";
  }

  std::ofstream out(join(out_dir, "sweep.txt"));
  if (!out)
    throw std::runtime_error(join(out_dir, "sweep.txt") +
                             ": cannot open for writing");
  out << table.str();
  return table.str();
}

}  // namespace spherembed::pipeline
