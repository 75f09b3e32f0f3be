# Copyright (c) 2026 The spherembed Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Angular-margin embedding losses, inter-class regularization and
speaker-verification metrics backed by the C++ core."""

from spherembed._core import (
    angle,
    angular_loss,
    anneal_schedule,
    asoftmax_annealed_logit,
    between_class_variance,
    blended_loss,
    cosine,
    det_points,
    eer,
    inter_loss,
    l2_normalize,
    min_dcf,
    modified_softmax,
    nontarget_stats,
    normalize_columns,
    psi,
    sep_energy,
    softmax_ce,
)

__all__ = [
    "angle",
    "angular_loss",
    "anneal_schedule",
    "asoftmax_annealed_logit",
    "between_class_variance",
    "blended_loss",
    "cosine",
    "det_points",
    "eer",
    "inter_loss",
    "l2_normalize",
    "min_dcf",
    "modified_softmax",
    "nontarget_stats",
    "normalize_columns",
    "psi",
    "sep_energy",
    "softmax_ce",
]

__version__ = "0.1.0"
