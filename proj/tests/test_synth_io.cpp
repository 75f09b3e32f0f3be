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

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "spherembed/io.hpp"
#include "spherembed/synth.hpp"
#include "test_support.hpp"

using namespace spherembed;
using spherembed::testing::random_vec;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("spherembed_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

SpeakerSpec small_spec(uint64_t seed) {
  SpeakerSpec spec;
  spec.n_speakers = 4;
  spec.frames_dim = 3;
  spec.frames_min = 2;
  spec.frames_max = 5;
  spec.utts_per_speaker = 3;
  spec.within_spread = 0.2;
  spec.between_spread = 1.0;
  spec.seed = seed;
  return spec;
}

bool datasets_equal(const Dataset& a, const Dataset& b) {
  if (a.utterances.size() != b.utterances.size()) return false;
  for (size_t i = 0; i < a.utterances.size(); ++i) {
    const Utterance& ua = a.utterances[i];
    const Utterance& ub = b.utterances[i];
    if (ua.utt_id != ub.utt_id || ua.speaker_id != ub.speaker_id ||
        ua.frames != ub.frames)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("generate is deterministic in the seed") {
  const Dataset a = generate(small_spec(42));
  const Dataset b = generate(small_spec(42));
  CHECK(datasets_equal(a, b));

  const Dataset c = generate(small_spec(43));
  CHECK_FALSE(a.utterances[0].frames[0] == c.utterances[0].frames[0]);
}

TEST_CASE("generate with zero within_spread collapses frames onto centers") {
  SpeakerSpec spec = small_spec(7);
  spec.within_spread = 0.0;
  const Dataset ds = generate(spec);
  for (const Utterance& u : ds.utterances)
    for (const Vec& f : u.frames) CHECK(f == u.frames[0]);
  // distinct speakers still get distinct centers
  CHECK_FALSE(ds.utterances.front().frames[0] ==
              ds.utterances.back().frames[0]);
}

TEST_CASE("generate validates the spec") {
  SpeakerSpec spec = small_spec(1);
  spec.n_speakers = 1;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  spec = small_spec(1);
  spec.frames_min = 4;
  spec.frames_max = 2;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}

TEST_CASE("make_trials labels are consistent and counts exact") {
  const Dataset ds = generate(small_spec(11));
  const TrialList trials = make_trials(ds, 20, 30, 5);
  REQUIRE(trials.entries.size() == 50);

  const auto index = ds.utt_index();
  int targets = 0;
  for (const Trial& t : trials.entries) {
    CHECK_FALSE(t.utt_a == t.utt_b);
    const auto& ua = ds.utterances[index.at(t.utt_a)];
    const auto& ub = ds.utterances[index.at(t.utt_b)];
    const bool same = ua.speaker_id == ub.speaker_id;
    CHECK(same == (t.label == TrialLabel::kTarget));
    targets += t.label == TrialLabel::kTarget ? 1 : 0;
  }
  CHECK(targets == 20);

  const TrialList again = make_trials(ds, 20, 30, 5);
  for (size_t i = 0; i < trials.entries.size(); ++i) {
    CHECK(trials.entries[i].utt_a == again.entries[i].utt_a);
    CHECK(trials.entries[i].utt_b == again.entries[i].utt_b);
  }

  const TrialList nt_only = make_trials(ds, 0, 10, 1);
  for (const Trial& t : nt_only.entries)
    CHECK(t.label == TrialLabel::kNontarget);
}

TEST_CASE("dataset file round-trip") {
  TempDir dir;
  const Dataset ds = generate(small_spec(21));
  write_dataset(ds, dir.file("data.txt"));
  const Dataset back = read_dataset(dir.file("data.txt"));
  CHECK(datasets_equal(ds, back));
  CHECK(back.spec.within_spread == ds.spec.within_spread);
  CHECK(back.spec.seed == ds.spec.seed);
}

TEST_CASE("trial file round-trip including the empty list") {
  TempDir dir;
  const Dataset ds = generate(small_spec(22));
  const TrialList trials = make_trials(ds, 5, 5, 9);
  write_trials(trials, dir.file("trials.txt"));
  const TrialList back = read_trials(dir.file("trials.txt"));
  REQUIRE(back.entries.size() == trials.entries.size());
  for (size_t i = 0; i < back.entries.size(); ++i) {
    CHECK(back.entries[i].label == trials.entries[i].label);
    CHECK(back.entries[i].utt_a == trials.entries[i].utt_a);
    CHECK(back.entries[i].utt_b == trials.entries[i].utt_b);
  }

  write_trials(TrialList{}, dir.file("empty.txt"));
  CHECK(read_trials(dir.file("empty.txt")).entries.empty());
  std::ifstream in(dir.file("empty.txt"));
  std::string first;
  CHECK(std::getline(in, first));
  CHECK(first[0] == '#');
}

TEST_CASE("embedding file round-trip preserves exact doubles") {
  TempDir dir;
  Rng rng(500);
  EmbeddingSet set;
  set.dim = 6;
  for (int i = 0; i < 9; ++i) {
    set.ids.push_back("utt" + std::to_string(i));
    set.vectors.push_back(random_vec(rng, 6, 3.7));
  }
  write_embeddings(set, dir.file("emb.txt"));
  const EmbeddingSet back = read_embeddings(dir.file("emb.txt"));
  CHECK(back.dim == set.dim);
  REQUIRE(back.ids == set.ids);
  for (size_t i = 0; i < set.vectors.size(); ++i)
    CHECK(back.vectors[i] == set.vectors[i]);

  CHECK_THROWS_WITH_AS(back.find("missing"), doctest::Contains("missing"),
                       std::invalid_argument);
}

TEST_CASE("score file round-trip keeps order and precision") {
  TempDir dir;
  Rng rng(501);
  std::vector<ScoreEntry> scores;
  for (int i = 0; i < 12; ++i)
    scores.push_back({rng.uniform(-1.0, 1.0), "a" + std::to_string(i),
                      "b" + std::to_string(i)});
  write_scores(scores, dir.file("scores.txt"));
  const auto back = read_scores(dir.file("scores.txt"));
  REQUIRE(back.size() == scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    CHECK(back[i].score == scores[i].score);
    CHECK(back[i].utt_a == scores[i].utt_a);
    CHECK(back[i].utt_b == scores[i].utt_b);
  }
}

TEST_CASE("malformed files report the line number") {
  TempDir dir;
  {
    std::ofstream out(dir.file("bad_trials.txt"));
    out << "1 a b\n2 c d\n";
  }
  CHECK_THROWS_WITH_AS(read_trials(dir.file("bad_trials.txt")),
                       doctest::Contains(":2:"), std::runtime_error);
  {
    std::ofstream out(dir.file("bad_emb.txt"));
    out << "1 3\nutt0 0.5 oops 1.0\n";
  }
  CHECK_THROWS_WITH_AS(read_embeddings(dir.file("bad_emb.txt")),
                       doctest::Contains("oops"), std::runtime_error);
  CHECK_THROWS_AS(read_dataset(dir.file("does_not_exist.txt")),
                  std::runtime_error);
}
