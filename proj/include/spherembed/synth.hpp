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

#ifndef SPHEREMBED_SYNTH_HPP_
#define SPHEREMBED_SYNTH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spherembed/geometry.hpp"

namespace spherembed {

// Clustered-sphere speaker data. Speaker centers sit on the unit sphere
// around a fixed anchor direction; between_spread sets how far the
// centers scatter (0 collapses them onto the anchor, large values
// approach uniform), within_spread is the per-frame isotropic noise std.
struct SpeakerSpec {
  int n_speakers = 2;
  int frames_dim = 2;
  int frames_min = 1;
  int frames_max = 1;
  int utts_per_speaker = 2;
  double within_spread = 0.1;
  double between_spread = 1.0;
  uint64_t seed = 0;
};

struct Utterance {
  std::string utt_id;
  std::string speaker_id;
  std::vector<Vec> frames;
};

struct Dataset {
  SpeakerSpec spec;
  std::vector<Utterance> utterances;

  // Distinct speaker ids in first-seen order.
  std::vector<std::string> speaker_ids() const;
  // utt_id -> index into utterances; throws on duplicates.
  std::map<std::string, size_t> utt_index() const;
};

enum class TrialLabel { kNontarget = 0, kTarget = 1 };

struct Trial {
  TrialLabel label = TrialLabel::kNontarget;
  std::string utt_a;
  std::string utt_b;
};

struct TrialList {
  std::vector<Trial> entries;
};

// Deterministic in spec.seed: same spec gives a bitwise-identical dataset.
Dataset generate(const SpeakerSpec& spec);

// Exactly n_target same-speaker and n_nontarget cross-speaker pairs, never
// pairing an utterance with itself. Deterministic in seed. Throws when the
// dataset cannot supply the requested pairs.
TrialList make_trials(const Dataset& dataset, int n_target, int n_nontarget,
                      uint64_t seed);

}  // namespace spherembed

#endif  // SPHEREMBED_SYNTH_HPP_
