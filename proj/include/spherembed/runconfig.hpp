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

#ifndef SPHEREMBED_RUNCONFIG_HPP_
#define SPHEREMBED_RUNCONFIG_HPP_

#include <string>
#include <vector>

#include "spherembed/metrics.hpp"
#include "spherembed/synth.hpp"
#include "spherembed/trainer.hpp"

namespace spherembed {

// Declarative experiment configuration: "key = value" lines, '#'
// comments. Unknown keys are rejected. The resolved config is echoed
// into the output directory before a run computes anything.
struct RunConfig {
  SpeakerSpec data;
  int n_target = 200;
  int n_nontarget = 1000;
  TrainingConfig train;
  DcfConfig dcf;
  uint64_t seed = 0;
};

// All accepted keys, echo order.
const std::vector<std::string>& run_config_keys();

// Applies one key; throws std::invalid_argument for unknown keys or
// unparseable values.
void set_run_config_key(RunConfig& config, const std::string& key,
                        const std::string& value);

// Merges "key = value" lines from path into config.
void load_run_config_file(RunConfig& config, const std::string& path);

// Canonical echo with every key resolved.
std::string echo_run_config(const RunConfig& config);

}  // namespace spherembed

#endif  // SPHEREMBED_RUNCONFIG_HPP_
