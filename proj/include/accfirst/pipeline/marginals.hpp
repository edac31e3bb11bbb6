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

#ifndef ACCFIRST_PIPELINE_MARGINALS_HPP_
#define ACCFIRST_PIPELINE_MARGINALS_HPP_

#include <span>
#include <vector>

#include "accfirst/accounting.hpp"
#include "accfirst/pipeline/dataset.hpp"

namespace accfirst::pipeline {

// Count query over the value combinations of a small column subset.
struct MarginalQuery {
  std::vector<int> columns;  // 1 to 3 columns
};

// Counts of a marginal query; mixed-radix layout with the first query
// column as the most significant digit. Counts are real-valued so the same
// container carries both clean and noisy tables.
struct MarginalTable {
  MarginalQuery query;
  std::vector<int> dims;
  std::vector<double> counts;

  std::size_t cell_count() const { return counts.size(); }
  std::size_t index_of(std::span<const std::uint16_t> values) const;
};

// A set of marginal tables plus the joint l2 sensitivity of releasing all
// of them at once. Under add-remove neighbourhood one row contributes a
// unit vector to each table, so the joint sensitivity is sqrt(#queries).
struct MarginalSet {
  std::vector<MarginalTable> tables;
  double joint_sensitivity;
  std::size_t total_cells;

  Sensitivity sensitivity() const { return Sensitivity(joint_sensitivity); }
};

// Exact counts of every query.
MarginalSet evaluate_marginals(const CategoricalDataset& dataset,
                               const std::vector<MarginalQuery>& queries);

// The fixed query set of the synthetic-data experiment: the label's 1-way
// marginal plus the (feature, label) pairwise marginal for every other
// column.
std::vector<MarginalQuery> label_pairwise_queries(
    const CategoricalDataset& dataset);

// Flatten all counts into a single vector (the sensitive value handed to
// noise reduction), and scatter a released vector back.
std::vector<double> concat_counts(const MarginalSet& set);
MarginalSet with_counts(const MarginalSet& like, std::span<const double> flat);

}  // namespace accfirst::pipeline

#endif  // ACCFIRST_PIPELINE_MARGINALS_HPP_
