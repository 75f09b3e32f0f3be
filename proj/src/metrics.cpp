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

#include "spherembed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace spherembed {

ScoreSet score_trials(const EmbeddingSet& embeddings,
                      const TrialList& trials) {
  ScoreSet out;
  out.reserve(trials.entries.size());
  for (const Trial& t : trials.entries) {
    const Vec& a = embeddings.vectors[embeddings.find(t.utt_a)];
    const Vec& b = embeddings.vectors[embeddings.find(t.utt_b)];
    out.push_back({cosine(a, b), t.label == TrialLabel::kTarget});
  }
  return out;
}

std::vector<ScoreEntry> score_entries(const EmbeddingSet& embeddings,
                                      const TrialList& trials) {
  const ScoreSet scores = score_trials(embeddings, trials);
  std::vector<ScoreEntry> out;
  out.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i)
    out.push_back({scores[i].score, trials.entries[i].utt_a,
                   trials.entries[i].utt_b});
  return out;
}

ScoreSet to_score_set(const std::vector<ScoreEntry>& scores,
                      const TrialList& trials) {
  if (scores.size() != trials.entries.size())
    throw std::invalid_argument(
        "to_score_set: score and trial counts differ (" +
        std::to_string(scores.size()) + " vs " +
        std::to_string(trials.entries.size()) + ")");
  ScoreSet out;
  out.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].utt_a != trials.entries[i].utt_a ||
        scores[i].utt_b != trials.entries[i].utt_b)
      throw std::invalid_argument("to_score_set: trial order mismatch at row " +
                                  std::to_string(i));
    out.push_back(
        {scores[i].score, trials.entries[i].label == TrialLabel::kTarget});
  }
  return out;
}

namespace {

void require_both_labels(const ScoreSet& scores, const char* op) {
  size_t targets = 0;
  for (const LabeledScore& s : scores) targets += s.target ? 1 : 0;
  if (targets == 0 || targets == scores.size())
    throw std::invalid_argument(std::string(op) +
                                ": need both target and nontarget scores");
}

}  // namespace

std::vector<DetPoint> det_points(const ScoreSet& scores) {
  require_both_labels(scores, "det_points");

  std::vector<double> targets, nontargets;
  for (const LabeledScore& s : scores)
    (s.target ? targets : nontargets).push_back(s.score);
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  std::vector<double> thresholds;
  for (const LabeledScore& s : scores) thresholds.push_back(s.score);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  // Accept iff score >= threshold; ties move together.
  std::vector<DetPoint> points;
  points.reserve(thresholds.size());
  for (const double tau : thresholds) {
    const auto miss = std::lower_bound(targets.begin(), targets.end(), tau) -
                      targets.begin();
    const auto fa = nontargets.end() -
                    std::lower_bound(nontargets.begin(), nontargets.end(), tau);
    points.push_back({tau,
                      static_cast<double>(fa) / nontargets.size(),
                      static_cast<double>(miss) / targets.size()});
  }
  return points;
}

double eer(const ScoreSet& scores) {
  const std::vector<DetPoint> points = det_points(scores);
  // diff = P_miss - P_fa is nondecreasing along the sweep; it starts at
  // -1 (accept everything) and ends at +1 (reject everything).
  for (size_t i = 0; i < points.size(); ++i) {
    const double diff = points[i].p_miss - points[i].p_fa;
    if (diff >= 0.0) {
      if (diff == 0.0 || i == 0) return points[i].p_miss;
      const double prev_diff = points[i - 1].p_miss - points[i - 1].p_fa;
      const double t = -prev_diff / (diff - prev_diff);
      return points[i - 1].p_miss +
             t * (points[i].p_miss - points[i - 1].p_miss);
    }
  }
  return 1.0;  // unreachable: the sentinel point has diff = 1
}

double min_dcf(const ScoreSet& scores, const DcfConfig& config) {
  if (config.p_target <= 0.0 || config.p_target >= 1.0)
    throw std::invalid_argument("min_dcf: p_target outside (0, 1)");
  if (config.c_miss <= 0.0 || config.c_fa <= 0.0)
    throw std::invalid_argument("min_dcf: costs must be positive");
  const std::vector<DetPoint> points = det_points(scores);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& p : points) {
    const double cost = config.c_miss * p.p_miss * config.p_target +
                        config.c_fa * p.p_fa * (1.0 - config.p_target);
    best = std::min(best, cost);
  }
  return best;
}

double between_class_variance(const std::vector<Vec>& embeddings,
                              const std::vector<int>& class_labels) {
  if (embeddings.size() != class_labels.size())
    throw std::invalid_argument(
        "between_class_variance: embeddings/labels size mismatch");
  if (embeddings.empty())
    throw std::invalid_argument("between_class_variance: empty input");

  int num_classes = 0;
  for (const int y : class_labels) {
    if (y < 0)
      throw std::invalid_argument("between_class_variance: negative label");
    num_classes = std::max(num_classes, y + 1);
  }
  if (num_classes < 2)
    throw std::invalid_argument("between_class_variance: need >= 2 classes");

  const size_t dim = embeddings[0].size();
  std::vector<Vec> means(num_classes, Vec(dim, 0.0));
  std::vector<double> counts(num_classes, 0.0);
  for (size_t i = 0; i < embeddings.size(); ++i) {
    if (embeddings[i].size() != dim)
      throw std::invalid_argument(
          "between_class_variance: inconsistent embedding dimension");
    counts[class_labels[i]] += 1.0;
    for (size_t t = 0; t < dim; ++t)
      means[class_labels[i]][t] += embeddings[i][t];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] == 0.0)
      throw std::invalid_argument("between_class_variance: class " +
                                  std::to_string(c) + " is empty");
    for (double& v : means[c]) v /= counts[c];
    if (norm(means[c]) == 0.0)
      throw std::invalid_argument("between_class_variance: class " +
                                  std::to_string(c) + " has zero-norm mean");
  }

  double total = 0.0;
  for (int i = 0; i < num_classes; ++i)
    for (int j = 0; j < num_classes; ++j) {
      if (j == i) continue;
      total += counts[i] * (1.0 - cosine(means[i], means[j]));
    }
  const double n = static_cast<double>(embeddings.size());
  return total / n / static_cast<double>(num_classes - 1);
}

std::pair<double, double> nontarget_stats(const ScoreSet& scores) {
  std::vector<double> nt;
  for (const LabeledScore& s : scores)
    if (!s.target) nt.push_back(s.score);
  if (nt.size() < 2)
    throw std::invalid_argument("nontarget_stats: need >= 2 nontarget scores");
  double mean = 0.0;
  for (const double v : nt) mean += v;
  mean /= static_cast<double>(nt.size());
  double ss = 0.0;
  for (const double v : nt) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(nt.size() - 1);
  return {mean, std::sqrt(var)};
}

void write_det(const std::vector<DetPoint>& points, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (const DetPoint& p : points)
    out << format_double(p.threshold) << " " << format_double(p.p_fa) << " "
        << format_double(p.p_miss) << "\n";
}

std::string format_metric_report(double eer_value, double min_dcf_value,
                                 double sb_value, double nontarget_mean,
                                 double nontarget_std) {
  return "eer=" + format_double(eer_value) +
         " mindcf=" + format_double(min_dcf_value) +
         " sb=" + format_double(sb_value) +
         " nontarget_mean=" + format_double(nontarget_mean) +
         " nontarget_std=" + format_double(nontarget_std);
}

}  // namespace spherembed
