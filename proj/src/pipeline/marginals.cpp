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

#include "accfirst/pipeline/marginals.hpp"

#include <cmath>
#include <stdexcept>

namespace accfirst::pipeline {

std::size_t MarginalTable::index_of(
    std::span<const std::uint16_t> values) const {
  if (values.size() != dims.size()) {
    throw std::invalid_argument("MarginalTable::index_of: arity mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    idx = idx * static_cast<std::size_t>(dims[k]) + values[k];
  }
  return idx;
}

MarginalSet evaluate_marginals(const CategoricalDataset& dataset,
                               const std::vector<MarginalQuery>& queries) {
  MarginalSet set;
  set.total_cells = 0;
  for (const MarginalQuery& q : queries) {
    if (q.columns.empty() || q.columns.size() > 3) {
      throw std::invalid_argument("evaluate_marginals: 1 to 3 columns per query");
    }
    MarginalTable table;
    table.query = q;
    std::size_t cells = 1;
    for (int c : q.columns) {
      if (c < 0 || static_cast<std::size_t>(c) >= dataset.column_count()) {
        throw std::invalid_argument("evaluate_marginals: column out of range");
      }
      int dim = static_cast<int>(dataset.column(c).categories.size());
      table.dims.push_back(dim);
      cells *= static_cast<std::size_t>(dim);
    }
    table.counts.assign(cells, 0.0);
    std::vector<std::uint16_t> values(q.columns.size());
    for (std::size_t r = 0; r < dataset.row_count(); ++r) {
      for (std::size_t k = 0; k < q.columns.size(); ++k) {
        values[k] = dataset.cell(r, q.columns[k]);
      }
      table.counts[table.index_of(values)] += 1.0;
    }
    set.total_cells += cells;
    set.tables.push_back(std::move(table));
  }
  set.joint_sensitivity = std::sqrt(static_cast<double>(queries.size()));
  return set;
}

std::vector<MarginalQuery> label_pairwise_queries(
    const CategoricalDataset& dataset) {
  std::vector<MarginalQuery> queries;
  const int label = dataset.label_column();
  queries.push_back(MarginalQuery{{label}});
  for (std::size_t c = 0; c < dataset.column_count(); ++c) {
    if (static_cast<int>(c) == label) continue;
    queries.push_back(MarginalQuery{{static_cast<int>(c), label}});
  }
  return queries;
}

std::vector<double> concat_counts(const MarginalSet& set) {
  std::vector<double> flat;
  flat.reserve(set.total_cells);
  for (const MarginalTable& t : set.tables) {
    flat.insert(flat.end(), t.counts.begin(), t.counts.end());
  }
  return flat;
}

MarginalSet with_counts(const MarginalSet& like, std::span<const double> flat) {
  if (flat.size() != like.total_cells) {
    throw std::invalid_argument("with_counts: size mismatch");
  }
  MarginalSet out = like;
  std::size_t offset = 0;
  for (MarginalTable& t : out.tables) {
    for (double& c : t.counts) c = flat[offset++];
  }
  return out;
}

}  // namespace accfirst::pipeline
