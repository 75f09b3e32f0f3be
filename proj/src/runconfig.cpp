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

#include "spherembed/runconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spherembed {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

long to_long(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config: " + key + ": not an integer: '" +
                                value + "'");
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config: " + key + ": not a number: '" +
                                value + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw std::invalid_argument("config: " + key + ": expected on/off, got '" +
                              value + "'");
}

std::vector<int> to_int_list(const std::string& key,
                             const std::string& value) {
  std::vector<int> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<int>(to_long(key, trim(item))));
  return out;
}

std::string from_int_list(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

LossVariant to_variant(const std::string& value) {
  if (value == "softmax") return LossVariant::kSoftmax;
  if (value == "modified") return LossVariant::kModified;
  if (value == "asoftmax" || value == "amsoftmax" || value == "aamsoftmax")
    return LossVariant::kAngular;
  throw std::invalid_argument(
      "config: train.variant must be one of softmax, modified, asoftmax, "
      "amsoftmax, aamsoftmax; got '" + value + "'");
}

std::string variant_name(const TrainingConfig& t) {
  switch (t.variant) {
    case LossVariant::kSoftmax:
      return "softmax";
    case LossVariant::kModified:
      return "modified";
    case LossVariant::kAngular:
      if (t.margins.m1 > 1.0) return "asoftmax";
      if (t.margins.m2 > 0.0) return "aamsoftmax";
      return "amsoftmax";
  }
  return "softmax";
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "data.n_speakers",     "data.frames_dim",
      "data.frames_min",     "data.frames_max",
      "data.utts_per_speaker", "data.within_spread",
      "data.between_spread", "trials.n_target",
      "trials.n_nontarget",  "train.variant",
      "train.m1",            "train.m2",
      "train.m3",            "train.epochs",
      "train.batch_p",       "train.batch_k",
      "train.lr_init",       "train.lr_final",
      "train.milestones",    "train.momentum",
      "train.hidden",        "train.embed_dim",
      "train.lambda_inter",  "train.annealing",
      "train.lambda_base",   "train.lambda_min",
      "train.gamma",         "train.ramp_steps",
      "dcf.p_target",        "dcf.c_miss",
      "dcf.c_fa",            "seed",
  };
  return keys;
}

void set_run_config_key(RunConfig& c, const std::string& key,
                        const std::string& value) {
  if (key == "data.n_speakers")
    c.data.n_speakers = static_cast<int>(to_long(key, value));
  else if (key == "data.frames_dim")
    c.data.frames_dim = static_cast<int>(to_long(key, value));
  else if (key == "data.frames_min")
    c.data.frames_min = static_cast<int>(to_long(key, value));
  else if (key == "data.frames_max")
    c.data.frames_max = static_cast<int>(to_long(key, value));
  else if (key == "data.utts_per_speaker")
    c.data.utts_per_speaker = static_cast<int>(to_long(key, value));
  else if (key == "data.within_spread")
    c.data.within_spread = to_double(key, value);
  else if (key == "data.between_spread")
    c.data.between_spread = to_double(key, value);
  else if (key == "trials.n_target")
    c.n_target = static_cast<int>(to_long(key, value));
  else if (key == "trials.n_nontarget")
    c.n_nontarget = static_cast<int>(to_long(key, value));
  else if (key == "train.variant")
    c.train.variant = to_variant(value);
  else if (key == "train.m1")
    c.train.margins.m1 = to_double(key, value);
  else if (key == "train.m2")
    c.train.margins.m2 = to_double(key, value);
  else if (key == "train.m3")
    c.train.margins.m3 = to_double(key, value);
  else if (key == "train.epochs")
    c.train.epochs = static_cast<int>(to_long(key, value));
  else if (key == "train.batch_p")
    c.train.batch_p = static_cast<int>(to_long(key, value));
  else if (key == "train.batch_k")
    c.train.batch_k = static_cast<int>(to_long(key, value));
  else if (key == "train.lr_init")
    c.train.lr_init = to_double(key, value);
  else if (key == "train.lr_final")
    c.train.lr_final = to_double(key, value);
  else if (key == "train.milestones")
    c.train.milestones = to_int_list(key, value);
  else if (key == "train.momentum")
    c.train.momentum = to_double(key, value);
  else if (key == "train.hidden")
    c.train.encoder.hidden = to_int_list(key, value);
  else if (key == "train.embed_dim")
    c.train.encoder.embed_dim = static_cast<int>(to_long(key, value));
  else if (key == "train.lambda_inter")
    c.train.reg.lambda_inter = to_double(key, value);
  else if (key == "train.annealing")
    c.train.annealing = to_bool(key, value);
  else if (key == "train.lambda_base")
    c.train.anneal.lambda_base = to_double(key, value);
  else if (key == "train.lambda_min")
    c.train.anneal.lambda_min = to_double(key, value);
  else if (key == "train.gamma")
    c.train.anneal.gamma = to_double(key, value);
  else if (key == "train.ramp_steps")
    c.train.anneal.ramp_steps = to_long(key, value);
  else if (key == "dcf.p_target")
    c.dcf.p_target = to_double(key, value);
  else if (key == "dcf.c_miss")
    c.dcf.c_miss = to_double(key, value);
  else if (key == "dcf.c_fa")
    c.dcf.c_fa = to_double(key, value);
  else if (key == "seed")
    c.seed = static_cast<uint64_t>(to_long(key, value));
  else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

void load_run_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
    try {
      set_run_config_key(config, trim(stripped.substr(0, eq)),
                         trim(stripped.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
}

std::string echo_run_config(const RunConfig& c) {
  std::ostringstream out;
  out << "data.n_speakers = " << c.data.n_speakers << "\n";
  out << "data.frames_dim = " << c.data.frames_dim << "\n";
  out << "data.frames_min = " << c.data.frames_min << "\n";
  out << "data.frames_max = " << c.data.frames_max << "\n";
  out << "data.utts_per_speaker = " << c.data.utts_per_speaker << "\n";
  out << "data.within_spread = " << format_double(c.data.within_spread) << "\n";
  out << "data.between_spread = " << format_double(c.data.between_spread)
      << "\n";
  out << "trials.n_target = " << c.n_target << "\n";
  out << "trials.n_nontarget = " << c.n_nontarget << "\n";
  out << "train.variant = " << variant_name(c.train) << "\n";
  out << "train.m1 = " << format_double(c.train.margins.m1) << "\n";
  out << "train.m2 = " << format_double(c.train.margins.m2) << "\n";
  out << "train.m3 = " << format_double(c.train.margins.m3) << "\n";
  out << "train.epochs = " << c.train.epochs << "\n";
  out << "train.batch_p = " << c.train.batch_p << "\n";
  out << "train.batch_k = " << c.train.batch_k << "\n";
  out << "train.lr_init = " << format_double(c.train.lr_init) << "\n";
  out << "train.lr_final = " << format_double(c.train.lr_final) << "\n";
  out << "train.milestones = " << from_int_list(c.train.milestones) << "\n";
  out << "train.momentum = " << format_double(c.train.momentum) << "\n";
  out << "train.hidden = " << from_int_list(c.train.encoder.hidden) << "\n";
  out << "train.embed_dim = " << c.train.encoder.embed_dim << "\n";
  out << "train.lambda_inter = " << format_double(c.train.reg.lambda_inter)
      << "\n";
  out << "train.annealing = " << (c.train.annealing ? "on" : "off") << "\n";
  out << "train.lambda_base = " << format_double(c.train.anneal.lambda_base)
      << "\n";
  out << "train.lambda_min = " << format_double(c.train.anneal.lambda_min)
      << "\n";
  out << "train.gamma = " << format_double(c.train.anneal.gamma) << "\n";
  out << "train.ramp_steps = " << c.train.anneal.ramp_steps << "\n";
  out << "dcf.p_target = " << format_double(c.dcf.p_target) << "\n";
  out << "dcf.c_miss = " << format_double(c.dcf.c_miss) << "\n";
  out << "dcf.c_fa = " << format_double(c.dcf.c_fa) << "\n";
  out << "seed = " << c.seed << "\n";
  return out.str();
}

}  // namespace spherembed
