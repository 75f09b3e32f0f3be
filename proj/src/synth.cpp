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

#include "spherembed/synth.hpp"

#include <stdexcept>

#include "spherembed/rng.hpp"

namespace spherembed {

namespace {

std::string pad_number(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

void validate_spec(const SpeakerSpec& spec) {
  if (spec.n_speakers < 2)
    throw std::invalid_argument("generate: need at least 2 speakers");
  if (spec.frames_dim < 2)
    throw std::invalid_argument("generate: frames_dim must be >= 2");
  if (spec.frames_min < 1 || spec.frames_max < spec.frames_min)
    throw std::invalid_argument("generate: empty frames_per_utt range");
  if (spec.utts_per_speaker < 2)
    throw std::invalid_argument("generate: utts_per_speaker must be >= 2");
  if (spec.within_spread < 0.0 || spec.between_spread < 0.0)
    throw std::invalid_argument("generate: spreads must be nonnegative");
}

}  // namespace

std::vector<std::string> Dataset::speaker_ids() const {
  std::vector<std::string> ids;
  for (const Utterance& u : utterances) {
    bool seen = false;
    for (const std::string& id : ids)
      if (id == u.speaker_id) {
        seen = true;
        break;
      }
    if (!seen) ids.push_back(u.speaker_id);
  }
  return ids;
}

std::map<std::string, size_t> Dataset::utt_index() const {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < utterances.size(); ++i) {
    if (!index.emplace(utterances[i].utt_id, i).second)
      throw std::invalid_argument("dataset: duplicate utterance id " +
                                  utterances[i].utt_id);
  }
  return index;
}

Dataset generate(const SpeakerSpec& spec) {
  validate_spec(spec);
  Rng rng(derive_seed(spec.seed, 0x5e4d));

  Dataset ds;
  ds.spec = spec;

  const int d = spec.frames_dim;
  for (int s = 0; s < spec.n_speakers; ++s) {
    // Anchor e1 plus scaled Gaussian, renormalized onto the sphere.
    Vec raw(d, 0.0);
    raw[0] = 1.0;
    for (int t = 0; t < d; ++t) raw[t] += spec.between_spread * rng.normal();
    const Vec center = l2_normalize(raw);

    const std::string speaker = "spk" + pad_number(s, 4);
    for (int u = 0; u < spec.utts_per_speaker; ++u) {
      Utterance utt;
      utt.speaker_id = speaker;
      utt.utt_id = speaker + "_utt" + pad_number(u, 4);
      const int n_frames = rng.uniform_int(spec.frames_min, spec.frames_max);
      utt.frames.reserve(n_frames);
      for (int f = 0; f < n_frames; ++f) {
        Vec frame(d);
        for (int t = 0; t < d; ++t)
          frame[t] = center[t] + spec.within_spread * rng.normal();
        utt.frames.push_back(std::move(frame));
      }
      ds.utterances.push_back(std::move(utt));
    }
  }
  return ds;
}

TrialList make_trials(const Dataset& dataset, int n_target, int n_nontarget,
                      uint64_t seed) {
  if (n_target < 0 || n_nontarget < 0)
    throw std::invalid_argument("make_trials: negative trial count");

  // Utterance indices grouped by speaker, in dataset order.
  std::vector<std::string> speakers = dataset.speaker_ids();
  std::vector<std::vector<size_t>> by_speaker(speakers.size());
  for (size_t i = 0; i < dataset.utterances.size(); ++i) {
    for (size_t s = 0; s < speakers.size(); ++s)
      if (speakers[s] == dataset.utterances[i].speaker_id)
        by_speaker[s].push_back(i);
  }

  std::vector<size_t> pair_capable;  // speakers with >= 2 utterances
  for (size_t s = 0; s < by_speaker.size(); ++s)
    if (by_speaker[s].size() >= 2) pair_capable.push_back(s);

  if (n_target > 0 && pair_capable.empty())
    throw std::invalid_argument(
        "make_trials: no speaker has two utterances for target trials");
  if (n_nontarget > 0 && speakers.size() < 2)
    throw std::invalid_argument(
        "make_trials: need two speakers for nontarget trials");

  Rng rng(derive_seed(seed, 0x7217));
  TrialList trials;
  trials.entries.reserve(static_cast<size_t>(n_target) + n_nontarget);

  for (int t = 0; t < n_target; ++t) {
    const size_t s = pair_capable[rng.uniform_int(pair_capable.size())];
    const auto& utts = by_speaker[s];
    const size_t a = rng.uniform_int(utts.size());
    size_t b = rng.uniform_int(utts.size() - 1);
    if (b >= a) ++b;
    trials.entries.push_back({TrialLabel::kTarget,
                              dataset.utterances[utts[a]].utt_id,
                              dataset.utterances[utts[b]].utt_id});
  }
  for (int t = 0; t < n_nontarget; ++t) {
    const size_t sa = rng.uniform_int(speakers.size());
    size_t sb = rng.uniform_int(speakers.size() - 1);
    if (sb >= sa) ++sb;
    const auto& ua = by_speaker[sa];
    const auto& ub = by_speaker[sb];
    trials.entries.push_back(
        {TrialLabel::kNontarget,
         dataset.utterances[ua[rng.uniform_int(ua.size())]].utt_id,
         dataset.utterances[ub[rng.uniform_int(ub.size())]].utt_id});
  }
  return trials;
}

}  // namespace spherembed
