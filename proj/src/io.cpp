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

#include "spherembed/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spherembed {

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw std::runtime_error(path + ": cannot open for reading");
  }

  // Next non-comment, non-blank line; false at end of file.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.empty() || line[0] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error(path_ + ":" + std::to_string(line_no_) + ": " +
                             message);
  }

  std::string require(const std::string& what) {
    std::string line;
    if (!next(line)) fail("unexpected end of file, expected " + what);
    return line;
  }

 private:
  std::string path_;
  std::ifstream in_;
  long line_no_ = 0;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(f);
  return fields;
}

double parse_double(const LineReader& reader, const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0')
    reader.fail("not a number: '" + token + "'");
  return v;
}

long parse_long(const LineReader& reader, const std::string& token) {
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0')
    reader.fail("not an integer: '" + token + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

// Header key-value line "key value" with a fixed expected key.
long read_header_long(LineReader& reader, const std::string& key) {
  const auto fields = split_fields(reader.require(key));
  if (fields.size() != 2 || fields[0] != key)
    reader.fail("expected '" + key + " <value>'");
  return parse_long(reader, fields[1]);
}

double read_header_double(LineReader& reader, const std::string& key) {
  const auto fields = split_fields(reader.require(key));
  if (fields.size() != 2 || fields[0] != key)
    reader.fail("expected '" + key + " <value>'");
  return parse_double(reader, fields[1]);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

size_t EmbeddingSet::find(const std::string& id) const {
  for (size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return i;
  throw std::invalid_argument("embedding set: unknown id '" + id + "'");
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  auto out = open_out(path);
  const SpeakerSpec& s = dataset.spec;
  out << "spherembed-dataset v1\n";
  out << "n_speakers " << s.n_speakers << "\n";
  out << "frames_dim " << s.frames_dim << "\n";
  out << "frames_min " << s.frames_min << "\n";
  out << "frames_max " << s.frames_max << "\n";
  out << "utts_per_speaker " << s.utts_per_speaker << "\n";
  out << "within_spread " << format_double(s.within_spread) << "\n";
  out << "between_spread " << format_double(s.between_spread) << "\n";
  out << "seed " << s.seed << "\n";
  out << "utterances " << dataset.utterances.size() << "\n";
  for (const Utterance& u : dataset.utterances) {
    out << u.utt_id << " " << u.speaker_id << " " << u.frames.size() << "\n";
    for (const Vec& frame : u.frames) {
      for (size_t t = 0; t < frame.size(); ++t)
        out << (t ? " " : "") << format_double(frame[t]);
      out << "\n";
    }
  }
}

Dataset read_dataset(const std::string& path) {
  LineReader reader(path);
  const std::string magic = reader.require("dataset header");
  if (magic != "spherembed-dataset v1")
    reader.fail("not a spherembed dataset file");

  Dataset ds;
  ds.spec.n_speakers = static_cast<int>(read_header_long(reader, "n_speakers"));
  ds.spec.frames_dim = static_cast<int>(read_header_long(reader, "frames_dim"));
  ds.spec.frames_min = static_cast<int>(read_header_long(reader, "frames_min"));
  ds.spec.frames_max = static_cast<int>(read_header_long(reader, "frames_max"));
  ds.spec.utts_per_speaker =
      static_cast<int>(read_header_long(reader, "utts_per_speaker"));
  ds.spec.within_spread = read_header_double(reader, "within_spread");
  ds.spec.between_spread = read_header_double(reader, "between_spread");
  ds.spec.seed =
      static_cast<uint64_t>(read_header_long(reader, "seed"));
  const long count = read_header_long(reader, "utterances");
  if (count < 0) reader.fail("negative utterance count");

  ds.utterances.reserve(count);
  for (long i = 0; i < count; ++i) {
    const auto fields = split_fields(reader.require("utterance block"));
    if (fields.size() != 3)
      reader.fail("expected '<utt_id> <speaker_id> <n_frames>'");
    Utterance u;
    u.utt_id = fields[0];
    u.speaker_id = fields[1];
    const long n_frames = parse_long(reader, fields[2]);
    if (n_frames < 1) reader.fail("utterance needs at least one frame");
    u.frames.reserve(n_frames);
    for (long f = 0; f < n_frames; ++f) {
      const auto row = split_fields(reader.require("frame row"));
      if (row.size() != static_cast<size_t>(ds.spec.frames_dim))
        reader.fail("frame has " + std::to_string(row.size()) +
                    " values, expected " + std::to_string(ds.spec.frames_dim));
      Vec frame(row.size());
      for (size_t t = 0; t < row.size(); ++t)
        frame[t] = parse_double(reader, row[t]);
      u.frames.push_back(std::move(frame));
    }
    ds.utterances.push_back(std::move(u));
  }
  return ds;
}

void write_trials(const TrialList& trials, const std::string& path) {
  auto out = open_out(path);
  out << "# spherembed trials: <0|1> <utt_id_a> <utt_id_b>\n";
  for (const Trial& t : trials.entries)
    out << (t.label == TrialLabel::kTarget ? 1 : 0) << " " << t.utt_a << " "
        << t.utt_b << "\n";
}

TrialList read_trials(const std::string& path) {
  LineReader reader(path);
  TrialList trials;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 3)
      reader.fail("expected '<0|1> <utt_id_a> <utt_id_b>'");
    if (fields[0] != "0" && fields[0] != "1")
      reader.fail("label must be 0 or 1, got '" + fields[0] + "'");
    trials.entries.push_back({fields[0] == "1" ? TrialLabel::kTarget
                                               : TrialLabel::kNontarget,
                              fields[1], fields[2]});
  }
  return trials;
}

void write_embeddings(const EmbeddingSet& embeddings,
                      const std::string& path) {
  auto out = open_out(path);
  out << embeddings.ids.size() << " " << embeddings.dim << "\n";
  for (size_t i = 0; i < embeddings.ids.size(); ++i) {
    out << embeddings.ids[i];
    for (double v : embeddings.vectors[i]) out << " " << format_double(v);
    out << "\n";
  }
}

EmbeddingSet read_embeddings(const std::string& path) {
  LineReader reader(path);
  const auto header = split_fields(reader.require("embedding header"));
  if (header.size() != 2) reader.fail("expected '<count> <dim>'");
  const long count = parse_long(reader, header[0]);
  const long dim = parse_long(reader, header[1]);
  if (count < 0 || dim < 1) reader.fail("invalid embedding header");

  EmbeddingSet set;
  set.dim = static_cast<int>(dim);
  for (long i = 0; i < count; ++i) {
    const auto fields = split_fields(reader.require("embedding row"));
    if (fields.size() != static_cast<size_t>(dim) + 1)
      reader.fail("embedding row has " + std::to_string(fields.size() - 1) +
                  " values, expected " + std::to_string(dim));
    set.ids.push_back(fields[0]);
    Vec v(dim);
    for (long t = 0; t < dim; ++t)
      v[t] = parse_double(reader, fields[t + 1]);
    set.vectors.push_back(std::move(v));
  }
  return set;
}

void write_scores(const std::vector<ScoreEntry>& scores,
                  const std::string& path) {
  auto out = open_out(path);
  out << "# spherembed scores: <score> <utt_id_a> <utt_id_b>\n";
  for (const ScoreEntry& s : scores)
    out << format_double(s.score) << " " << s.utt_a << " " << s.utt_b << "\n";
}

std::vector<ScoreEntry> read_scores(const std::string& path) {
  LineReader reader(path);
  std::vector<ScoreEntry> scores;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 3)
      reader.fail("expected '<score> <utt_id_a> <utt_id_b>'");
    scores.push_back({parse_double(reader, fields[0]), fields[1], fields[2]});
  }
  return scores;
}

}  // namespace spherembed
