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

#ifndef SPHEREMBED_IO_HPP_
#define SPHEREMBED_IO_HPP_

#include <string>
#include <vector>

#include "spherembed/geometry.hpp"
#include "spherembed/synth.hpp"

namespace spherembed {

// All formats are line oriented text. Floats are serialized with 17
// significant digits so write/read round-trips are exact. Parse errors
// carry "<path>:<line>: <message>".

struct EmbeddingSet {
  int dim = 0;
  std::vector<std::string> ids;
  std::vector<Vec> vectors;

  // Index of id; throws naming the id when missing.
  size_t find(const std::string& id) const;
};

struct ScoreEntry {
  double score = 0.0;
  std::string utt_a;
  std::string utt_b;
};

std::string format_double(double v);

// Dataset file: spec-echo header, then per-utterance blocks
// "<utt_id> <speaker_id> <n_frames>" followed by one frame row each.
void write_dataset(const Dataset& dataset, const std::string& path);
Dataset read_dataset(const std::string& path);

// Trial list: "<0|1> <utt_id_a> <utt_id_b>" per line, 1 = target.
// Lines starting with '#' are comments; the writer emits one as header.
void write_trials(const TrialList& trials, const std::string& path);
TrialList read_trials(const std::string& path);

// Embedding file: header "<count> <dim>", then "<utt_id> <v1> ... <vd>".
void write_embeddings(const EmbeddingSet& embeddings, const std::string& path);
EmbeddingSet read_embeddings(const std::string& path);

// Score file: "<score> <utt_id_a> <utt_id_b>" per line, trial-list order.
void write_scores(const std::vector<ScoreEntry>& scores,
                  const std::string& path);
std::vector<ScoreEntry> read_scores(const std::string& path);

}  // namespace spherembed

#endif  // SPHEREMBED_IO_HPP_
