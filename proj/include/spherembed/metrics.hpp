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

#ifndef SPHEREMBED_METRICS_HPP_
#define SPHEREMBED_METRICS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "spherembed/io.hpp"
#include "spherembed/synth.hpp"

namespace spherembed {

struct LabeledScore {
  double score = 0.0;
  bool target = false;
};

using ScoreSet = std::vector<LabeledScore>;

struct DcfConfig {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

// One operating point of the accept-iff-score>=threshold rule.
struct DetPoint {
  double threshold = 0.0;
  double p_fa = 0.0;
  double p_miss = 0.0;
};

// Cosine score per trial, trial order preserved. Throws naming any
// unknown utterance id.
ScoreSet score_trials(const EmbeddingSet& embeddings, const TrialList& trials);

// Score entries (for the score file) in trial order.
std::vector<ScoreEntry> score_entries(const EmbeddingSet& embeddings,
                                      const TrialList& trials);

ScoreSet to_score_set(const std::vector<ScoreEntry>& scores,
                      const TrialList& trials);

// Operating points at every distinct score threshold, ascending, plus the
// reject-everything sentinel. P_fa is nonincreasing and P_miss
// nondecreasing along the sweep. Requires both labels present.
std::vector<DetPoint> det_points(const ScoreSet& scores);

// Rate at the P_miss = P_fa crossing, linearly interpolated between the
// two bracketing operating points.
double eer(const ScoreSet& scores);

// min over thresholds of c_miss P_miss p_target + c_fa P_fa (1-p_target).
double min_dcf(const ScoreSet& scores, const DcfConfig& config);

// Between-class angular variance of per-class mean embeddings:
// (1/N)(1/(C-1)) sum_i n_i sum_{j != i} (1 - cos<m_i, m_j>).
double between_class_variance(const std::vector<Vec>& embeddings,
                              const std::vector<int>& class_labels);

// Sample mean and unbiased std of the nontarget scores. Needs at least
// two nontargets; identical scores give std 0.
std::pair<double, double> nontarget_stats(const ScoreSet& scores);

// "<threshold> <p_fa> <p_miss>" lines for external plotting.
void write_det(const std::vector<DetPoint>& points, const std::string& path);

// "eer=<v> mindcf=<v> sb=<v> nontarget_mean=<v> nontarget_std=<v>".
std::string format_metric_report(double eer_value, double min_dcf_value,
                                 double sb_value, double nontarget_mean,
                                 double nontarget_std);

}  // namespace spherembed

#endif  // SPHEREMBED_METRICS_HPP_
