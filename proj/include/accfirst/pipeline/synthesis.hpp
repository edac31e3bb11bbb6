// Copyright 2026 The accfirst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACCFIRST_PIPELINE_SYNTHESIS_HPP_
#define ACCFIRST_PIPELINE_SYNTHESIS_HPP_

#include "accfirst/pipeline/marginals.hpp"
#include "accfirst/rng.hpp"

namespace accfirst::pipeline {

// Samples a synthetic dataset from (possibly noisy) marginals: the label
// from its 1-way marginal, then each feature from its (feature, label)
// pairwise conditional. Negative counts are clamped to zero at this point
// only; the caller's tables are left untouched. A table that is all zero
// after clamping falls back to uniform (logged to stderr).
//
// `schema_source` supplies the columns and label designation; the marginal
// set must contain the label 1-way query and a (feature, label) pairwise
// query for every other column.
CategoricalDataset synthesize(const MarginalSet& marginals,
                              const CategoricalDataset& schema_source,
                              std::size_t n_rows, Rng& rng);

// Accuracy on eval_split of a naive Bayes classifier with add-one smoothing
// fitted to the synthetic rows. Deterministic given its inputs.
double train_and_score(const CategoricalDataset& synthetic,
                       const CategoricalDataset& eval_split);

}  // namespace accfirst::pipeline

#endif  // ACCFIRST_PIPELINE_SYNTHESIS_HPP_
