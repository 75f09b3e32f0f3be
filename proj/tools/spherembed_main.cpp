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

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spherembed/io.hpp"
#include "spherembed/pipeline.hpp"
#include "spherembed/runconfig.hpp"

namespace {

using spherembed::RunConfig;

struct ConfigArgs {
  std::string config_file;
  std::vector<std::string> overrides;  // key=value
  bool seed_given = false;
  long long seed = 0;
};

// --config file first, then --set overrides, then --seed.
RunConfig resolve_config(const ConfigArgs& args, bool seed_required) {
  RunConfig config;
  if (!args.config_file.empty())
    spherembed::load_run_config_file(config, args.config_file);
  for (const std::string& kv : args.overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    spherembed::set_run_config_key(config, kv.substr(0, eq),
                                   kv.substr(eq + 1));
  }
  if (args.seed_given)
    config.seed = static_cast<uint64_t>(args.seed);
  else if (seed_required)
    throw std::invalid_argument("--seed is required for this command");
  return config;
}

void add_config_options(CLI::App* cmd, ConfigArgs& args, bool with_seed) {
  cmd->add_option("--config", args.config_file,
                  "Run configuration file (key = value lines)");
  cmd->add_option("--set", args.overrides,
                  "Override one configuration key (key=value, repeatable)");
  if (with_seed) {
    auto* opt = cmd->add_option("--seed", args.seed, "Run seed");
    cmd->callback([&args, opt]() { args.seed_given = opt->count() > 0; });
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angular-margin embedding learning on synthetic speaker data"};
  app.require_subcommand(1);

  // gen
  ConfigArgs gen_args;
  std::string gen_out;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a dataset and trials");
  add_config_options(cmd_gen, gen_args, true);
  cmd_gen->add_option("--out-dir", gen_out, "Output directory")->required();

  // train
  ConfigArgs train_args;
  std::string train_dataset, train_out;
  auto* cmd_train = app.add_subcommand("train", "Train the encoder");
  add_config_options(cmd_train, train_args, true);
  cmd_train->add_option("--dataset", train_dataset, "Dataset file")->required();
  cmd_train->add_option("--out-dir", train_out, "Output directory")->required();

  // extract
  std::string ex_params, ex_dataset, ex_out;
  auto* cmd_extract = app.add_subcommand("extract", "Extract embeddings");
  cmd_extract->add_option("--params", ex_params, "Encoder file")->required();
  cmd_extract->add_option("--dataset", ex_dataset, "Dataset file")->required();
  cmd_extract->add_option("--out", ex_out, "Embedding file")->required();

  // score
  std::string sc_emb, sc_trials, sc_out;
  auto* cmd_score = app.add_subcommand("score", "Cosine-score a trial list");
  cmd_score->add_option("--embeddings", sc_emb, "Embedding file")->required();
  cmd_score->add_option("--trials", sc_trials, "Trial list")->required();
  cmd_score->add_option("--out", sc_out, "Score file")->required();

  // eval
  ConfigArgs eval_args;
  std::string ev_scores, ev_trials, ev_emb, ev_dataset, ev_det;
  auto* cmd_eval = app.add_subcommand("eval", "Metric report from scores");
  add_config_options(cmd_eval, eval_args, false);
  cmd_eval->add_option("--scores", ev_scores, "Score file")->required();
  cmd_eval->add_option("--trials", ev_trials, "Trial list (labels)")->required();
  cmd_eval->add_option("--embeddings", ev_emb,
                       "Embedding file (enables the sb field)");
  cmd_eval->add_option("--dataset", ev_dataset,
                       "Dataset file (labels for sb)");
  cmd_eval->add_option("--det-out", ev_det, "DET sweep output file");

  // sep
  std::string sep_weights;
  auto* cmd_sep = app.add_subcommand("sep", "Separability energy of weights");
  cmd_sep->add_option("--weights", sep_weights, "Weight file")->required();

  // sb
  std::string sb_emb, sb_dataset;
  auto* cmd_sb =
      app.add_subcommand("sb", "Between-class angular variance of embeddings");
  cmd_sb->add_option("--embeddings", sb_emb, "Embedding file")->required();
  cmd_sb->add_option("--dataset", sb_dataset, "Dataset file (labels)")
      ->required();

  // sweep
  ConfigArgs sweep_args;
  std::string sweep_out, sweep_key = "train.m3";
  std::vector<double> sweep_values;
  auto* cmd_sweep =
      app.add_subcommand("sweep", "Run the pipeline over a margin list");
  add_config_options(cmd_sweep, sweep_args, true);
  cmd_sweep->add_option("--out-dir", sweep_out, "Output directory")->required();
  cmd_sweep->add_option("--param", sweep_key,
                        "Margin key (train.m1, train.m2, train.m3)");
  cmd_sweep->add_option("--values", sweep_values, "Margin values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) {
      spherembed::pipeline::gen(resolve_config(gen_args, true), gen_out);
    } else if (cmd_train->parsed()) {
      spherembed::pipeline::train_cmd(resolve_config(train_args, true),
                                      train_dataset, train_out);
    } else if (cmd_extract->parsed()) {
      spherembed::pipeline::extract(ex_params, ex_dataset, ex_out);
    } else if (cmd_score->parsed()) {
      spherembed::pipeline::score(sc_emb, sc_trials, sc_out);
    } else if (cmd_eval->parsed()) {
      const RunConfig config = resolve_config(eval_args, false);
      std::cout << spherembed::pipeline::eval(ev_scores, ev_trials, config.dcf,
                                              ev_emb, ev_dataset, ev_det)
                << "\n";
    } else if (cmd_sep->parsed()) {
      std::cout << "sep_energy=" << spherembed::format_double(
                       spherembed::pipeline::sep(sep_weights))
                << "\n";
    } else if (cmd_sb->parsed()) {
      std::cout << "sb=" << spherembed::format_double(
                       spherembed::pipeline::sb(sb_emb, sb_dataset))
                << "\n";
    } else if (cmd_sweep->parsed()) {
      std::cout << spherembed::pipeline::sweep(resolve_config(sweep_args, true),
                                               sweep_key, sweep_values,
                                               sweep_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "spherembed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
