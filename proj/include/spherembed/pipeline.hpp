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

#ifndef SPHEREMBED_PIPELINE_HPP_
#define SPHEREMBED_PIPELINE_HPP_

#include <string>
#include <vector>

#include "spherembed/runconfig.hpp"

namespace spherembed::pipeline {

// File orchestration behind the CLI subcommands. Every function is a
// pure function of its input files and configuration; generating
// commands echo the resolved config into out_dir before computing.

// Writes dataset.txt and trials.txt.
void gen(const RunConfig& config, const std::string& out_dir);

// Writes encoder.txt, weights.txt, train.log. Throws on divergence after
// writing the log collected so far.
void train_cmd(const RunConfig& config, const std::string& dataset_path,
               const std::string& out_dir);

void extract(const std::string& encoder_path, const std::string& dataset_path,
             const std::string& out_path);

void score(const std::string& embeddings_path, const std::string& trials_path,
           const std::string& out_path);

// Metric report line; labels come from the trial list, sb needs the
// embedding and dataset files and is reported as nan when they are
// absent. det_out, when nonempty, receives the DET sweep.
std::string eval(const std::string& scores_path,
                 const std::string& trials_path, const DcfConfig& dcf,
                 const std::string& embeddings_path = "",
                 const std::string& dataset_path = "",
                 const std::string& det_out = "");

double sep(const std::string& weights_path);

double sb(const std::string& embeddings_path,
          const std::string& dataset_path);

// Labels for the embedded utterances, class index by first appearance in
// the dataset file.
std::vector<int> labels_for_embeddings(const EmbeddingSet& embeddings,
                                       const Dataset& dataset);

// Full pipeline per margin value over one shared train/eval data pair;
// returns the comparative table (also written to sweep.txt).
std::string sweep(const RunConfig& config, const std::string& margin_key,
                  const std::vector<double>& values,
                  const std::string& out_dir);

}  // namespace spherembed::pipeline

#endif  // SPHEREMBED_PIPELINE_HPP_
