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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spherembed/encoder.hpp"
#include "spherembed/geometry.hpp"
#include "spherembed/inter_reg.hpp"
#include "spherembed/losses.hpp"
#include "spherembed/metrics.hpp"
#include "spherembed/synth.hpp"
#include "spherembed/trainer.hpp"

namespace py = pybind11;

namespace {

using namespace spherembed;

ClassWeights weights_from_rows(const std::vector<Vec>& rows) {
  if (rows.empty())
    throw std::invalid_argument("weights: need at least one center");
  ClassWeights w = ClassWeights::zeros(static_cast<int>(rows[0].size()),
                                       static_cast<int>(rows.size()));
  for (int j = 0; j < w.num_classes; ++j) {
    if (rows[j].size() != static_cast<size_t>(w.dim))
      throw std::invalid_argument("weights: ragged center list");
    auto col = w.center(j);
    for (int t = 0; t < w.dim; ++t) col[t] = rows[j][t];
  }
  return w;
}

std::vector<Vec> weights_to_rows(const ClassWeights& w) {
  std::vector<Vec> rows(w.num_classes);
  for (int j = 0; j < w.num_classes; ++j) {
    auto col = w.center(j);
    rows[j].assign(col.begin(), col.end());
  }
  return rows;
}

py::dict loss_to_dict(const LossResult& res) {
  py::dict d;
  d["value"] = res.value;
  d["grad_embeddings"] = res.grad_embeddings;
  d["grad_weights"] = weights_to_rows(res.grad_weights);
  return d;
}

Batch make_batch(const std::vector<Vec>& embeddings,
                 const std::vector<int>& labels) {
  return Batch{embeddings, labels};
}

ScoreSet make_score_set(const std::vector<double>& scores,
                        const std::vector<bool>& targets) {
  if (scores.size() != targets.size())
    throw std::invalid_argument("score set: scores/labels size mismatch");
  ScoreSet set;
  set.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i)
    set.push_back({scores[i], static_cast<bool>(targets[i])});
  return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Angular-margin embedding losses, regularizers and "
            "verification metrics";

  // geometry
  m.def("l2_normalize",
        [](const Vec& v) { return l2_normalize(v); },
        py::arg("v"));
  m.def("cosine",
        [](const Vec& u, const Vec& v) { return cosine(u, v); },
        py::arg("u"), py::arg("v"));
  m.def("angle",
        [](const Vec& u, const Vec& v) { return angle(u, v); },
        py::arg("u"), py::arg("v"));
  m.def("normalize_columns",
        [](const std::vector<Vec>& rows) {
          return weights_to_rows(normalize_columns(weights_from_rows(rows)));
        },
        py::arg("weights"),
        "Weights are given as a list of class centers.");

  // losses
  m.def("softmax_ce",
        [](const std::vector<Vec>& x, const std::vector<int>& y,
           const std::vector<Vec>& w) {
          return loss_to_dict(softmax_ce(make_batch(x, y),
                                         weights_from_rows(w)));
        },
        py::arg("embeddings"), py::arg("labels"), py::arg("weights"));
  m.def("modified_softmax",
        [](const std::vector<Vec>& x, const std::vector<int>& y,
           const std::vector<Vec>& w) {
          return loss_to_dict(modified_softmax(make_batch(x, y),
                                               weights_from_rows(w)));
        },
        py::arg("embeddings"), py::arg("labels"), py::arg("weights"));
  m.def("psi", &psi, py::arg("theta"), py::arg("m"));
  m.def("angular_loss",
        [](const std::vector<Vec>& x, const std::vector<int>& y,
           const std::vector<Vec>& w, double m1, double m2, double m3,
           double lambda_a) {
          return loss_to_dict(angular_loss(make_batch(x, y),
                                           weights_from_rows(w),
                                           MarginConfig{m1, m2, m3},
                                           lambda_a));
        },
        py::arg("embeddings"), py::arg("labels"), py::arg("weights"),
        py::arg("m1") = 1.0, py::arg("m2") = 0.0, py::arg("m3") = 0.0,
        py::arg("lambda_a") = 0.0);
  m.def("asoftmax_annealed_logit", &asoftmax_annealed_logit, py::arg("x"),
        py::arg("w_target"), py::arg("m"), py::arg("lambda_a"));
  m.def("blended_loss",
        [](const std::vector<Vec>& x, const std::vector<int>& y,
           const std::vector<Vec>& w, double m1, double m2, double m3,
           double lambda_blend) {
          return loss_to_dict(blended_loss(make_batch(x, y),
                                           weights_from_rows(w),
                                           MarginConfig{m1, m2, m3},
                                           lambda_blend));
        },
        py::arg("embeddings"), py::arg("labels"), py::arg("weights"),
        py::arg("m1") = 1.0, py::arg("m2") = 0.0, py::arg("m3") = 0.0,
        py::arg("lambda_blend") = 1.0);

  // inter-class regularization
  m.def("sep_energy",
        [](const std::vector<Vec>& w) {
          return sep_energy(weights_from_rows(w));
        },
        py::arg("weights"));
  m.def("inter_loss",
        [](const std::vector<Vec>& w) {
          return loss_to_dict(inter_loss(weights_from_rows(w)));
        },
        py::arg("weights"));

  // metrics
  m.def("eer",
        [](const std::vector<double>& scores, const std::vector<bool>& t) {
          return eer(make_score_set(scores, t));
        },
        py::arg("scores"), py::arg("targets"));
  m.def("min_dcf",
        [](const std::vector<double>& scores, const std::vector<bool>& t,
           double p_target, double c_miss, double c_fa) {
          return min_dcf(make_score_set(scores, t),
                         DcfConfig{p_target, c_miss, c_fa});
        },
        py::arg("scores"), py::arg("targets"), py::arg("p_target") = 0.01,
        py::arg("c_miss") = 1.0, py::arg("c_fa") = 1.0);
  m.def("det_points",
        [](const std::vector<double>& scores, const std::vector<bool>& t) {
          std::vector<std::tuple<double, double, double>> out;
          for (const DetPoint& p : det_points(make_score_set(scores, t)))
            out.emplace_back(p.threshold, p.p_fa, p.p_miss);
          return out;
        },
        py::arg("scores"), py::arg("targets"));
  m.def("between_class_variance", &between_class_variance,
        py::arg("embeddings"), py::arg("labels"));
  m.def("nontarget_stats",
        [](const std::vector<double>& scores, const std::vector<bool>& t) {
          return nontarget_stats(make_score_set(scores, t));
        },
        py::arg("scores"), py::arg("targets"));

  // schedules
  m.def("anneal_schedule",
        [](long step, double lambda_base, double lambda_min, double gamma,
           long ramp_steps) {
          const AnnealState st = anneal_schedule(
              step, AnnealConfig{lambda_base, lambda_min, gamma, ramp_steps});
          return std::make_pair(st.lambda_a, st.lambda_blend);
        },
        py::arg("step"), py::arg("lambda_base") = 1000.0,
        py::arg("lambda_min") = 5.0, py::arg("gamma") = 1e-4,
        py::arg("ramp_steps") = 1);
}
