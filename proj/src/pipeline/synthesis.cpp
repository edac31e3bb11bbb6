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

#include "accfirst/pipeline/synthesis.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace accfirst::pipeline {

namespace {

// Draw from unnormalised non-negative weights; all-zero falls back to
// uniform and reports it through `fallbacks`.
std::size_t draw_categorical(std::span<const double> weights, Rng& rng,
                             std::size_t& fallbacks) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform();
  if (total <= 0.0) {
    ++fallbacks;
    std::size_t pick = static_cast<std::size_t>(u * static_cast<double>(weights.size()));
    return std::min(pick, weights.size() - 1);
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u * total < acc) return k;
  }
  return weights.size() - 1;
}

}  // namespace

CategoricalDataset synthesize(const MarginalSet& marginals,
                              const CategoricalDataset& schema_source,
                              std::size_t n_rows, Rng& rng) {
  const int label = schema_source.label_column();
  const std::size_t n_cols = schema_source.column_count();
  const std::size_t n_labels = schema_source.label_cardinality();

  const MarginalTable* label_table = nullptr;
  std::vector<const MarginalTable*> pairwise(n_cols, nullptr);
  std::vector<bool> label_first(n_cols, false);  // column order within the pair
  for (const MarginalTable& t : marginals.tables) {
    if (t.query.columns.size() == 1 && t.query.columns[0] == label) {
      label_table = &t;
    } else if (t.query.columns.size() == 2) {
      int c0 = t.query.columns[0];
      int c1 = t.query.columns[1];
      if (c1 == label && c0 != label) {
        pairwise[c0] = &t;
        label_first[c0] = false;
      } else if (c0 == label && c1 != label) {
        pairwise[c1] = &t;
        label_first[c1] = true;
      }
    }
  }
  if (label_table == nullptr) {
    throw std::invalid_argument("synthesize: label 1-way marginal missing");
  }
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (static_cast<int>(c) != label && pairwise[c] == nullptr) {
      throw std::invalid_argument(
          "synthesize: missing (feature, label) marginal for column " +
          schema_source.column(c).name);
    }
  }

  // Clamp negatives once up front; raw inputs stay untouched.
  std::vector<double> label_weights(label_table->counts);
  for (double& w : label_weights) w = std::max(w, 0.0);

  std::size_t fallbacks = 0;
  CategoricalDataset out(schema_source.columns(), label);
  std::vector<std::uint16_t> row(n_cols);
  std::vector<double> cond;
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::uint16_t y = static_cast<std::uint16_t>(
        draw_categorical(label_weights, rng, fallbacks));
    row[static_cast<std::size_t>(label)] = y;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (static_cast<int>(c) == label) continue;
      const MarginalTable& t = *pairwise[c];
      const std::size_t n_cat =
          schema_source.column(c).categories.size();
      cond.resize(n_cat);
      for (std::size_t k = 0; k < n_cat; ++k) {
        std::size_t idx = label_first[c]
                              ? static_cast<std::size_t>(y) * n_cat + k
                              : k * n_labels + y;
        cond[k] = std::max(t.counts[idx], 0.0);
      }
      row[c] = static_cast<std::uint16_t>(draw_categorical(cond, rng, fallbacks));
    }
    out.append_row(row);
  }
  if (fallbacks > 0) {
    std::cerr << "synthesize: uniform fallback for " << fallbacks
              << " all-zero conditional draw(s)\n";
  }
  return out;
}

double train_and_score(const CategoricalDataset& synthetic,
                       const CategoricalDataset& eval_split) {
  if (synthetic.row_count() == 0) {
    throw std::invalid_argument("train_and_score: empty synthetic data");
  }
  const int label = synthetic.label_column();
  const std::size_t n_labels = synthetic.label_cardinality();
  const std::size_t n_cols = synthetic.column_count();
  if (eval_split.column_count() != n_cols ||
      eval_split.label_column() != label) {
    throw std::invalid_argument("train_and_score: schema mismatch");
  }

  // Class priors and per-feature conditional counts with add-one smoothing.
  std::vector<double> log_prior(n_labels);
  std::vector<std::size_t> class_count(n_labels, 0);
  for (std::size_t r = 0; r < synthetic.row_count(); ++r) {
    ++class_count[synthetic.label(r)];
  }
  for (std::size_t y = 0; y < n_labels; ++y) {
    log_prior[y] = std::log(static_cast<double>(class_count[y]) + 1.0) -
                   std::log(static_cast<double>(synthetic.row_count() + n_labels));
  }
  // log_cond[c][v * n_labels + y]
  std::vector<std::vector<double>> log_cond(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (static_cast<int>(c) == label) continue;
    const std::size_t n_cat = synthetic.column(c).categories.size();
    std::vector<double> counts(n_cat * n_labels, 1.0);  // add-one
    for (std::size_t r = 0; r < synthetic.row_count(); ++r) {
      counts[synthetic.cell(r, c) * n_labels + synthetic.label(r)] += 1.0;
    }
    std::vector<double> class_total(n_labels, 0.0);
    for (std::size_t v = 0; v < n_cat; ++v) {
      for (std::size_t y = 0; y < n_labels; ++y) {
        class_total[y] += counts[v * n_labels + y];
      }
    }
    log_cond[c].resize(n_cat * n_labels);
    for (std::size_t v = 0; v < n_cat; ++v) {
      for (std::size_t y = 0; y < n_labels; ++y) {
        log_cond[c][v * n_labels + y] =
            std::log(counts[v * n_labels + y]) - std::log(class_total[y]);
      }
    }
  }

  std::size_t correct = 0;
  std::vector<double> score(n_labels);
  for (std::size_t r = 0; r < eval_split.row_count(); ++r) {
    score = log_prior;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (static_cast<int>(c) == label) continue;
      std::uint16_t v = eval_split.cell(r, c);
      for (std::size_t y = 0; y < n_labels; ++y) {
        score[y] += log_cond[c][v * n_labels + y];
      }
    }
    std::size_t best = 0;
    for (std::size_t y = 1; y < n_labels; ++y) {
      if (score[y] > score[best]) best = y;  // ties keep the lower index
    }
    if (best == eval_split.label(r)) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(eval_split.row_count());
}

}  // namespace accfirst::pipeline
