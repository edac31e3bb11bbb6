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

#ifndef ACCFIRST_PIPELINE_DATASET_HPP_
#define ACCFIRST_PIPELINE_DATASET_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace accfirst::pipeline {

struct Column {
  std::string name;
  std::vector<std::string> categories;
};

// Fully discretised tabular dataset: every cell is a category index into
// its column. One column is designated as the classification label.
class CategoricalDataset {
 public:
  CategoricalDataset(std::vector<Column> columns, int label_column);

  void append_row(std::span<const std::uint16_t> row);

  std::size_t row_count() const { return rows_; }
  std::size_t column_count() const { return columns_.size(); }
  std::uint16_t cell(std::size_t row, std::size_t col) const {
    return cells_[row * columns_.size() + col];
  }
  const Column& column(std::size_t i) const { return columns_[i]; }
  const std::vector<Column>& columns() const { return columns_; }
  int label_column() const { return label_column_; }
  std::uint16_t label(std::size_t row) const {
    return cell(row, static_cast<std::size_t>(label_column_));
  }
  std::size_t label_cardinality() const {
    return columns_[static_cast<std::size_t>(label_column_)].categories.size();
  }

  // Same schema, rows given by index.
  CategoricalDataset subset(std::span<const std::uint32_t> row_indices) const;

 private:
  std::vector<Column> columns_;
  int label_column_;
  std::size_t rows_ = 0;
  std::vector<std::uint16_t> cells_;
};

// Binning rule for a numeric raw column: edges e_0 < ... < e_k produce bins
// [e_0, e_1), ..., [e_{k-1}, e_k); values outside clamp to the boundary
// bins. With overflow_bin an extra ">= e_k" category is appended instead of
// clamping from above.
struct NumericBinning {
  std::string column;
  std::vector<double> edges;
  bool overflow_bin = false;
};

// Raw-CSV-to-categorical transforms: columns to drop, numeric binnings,
// columns binarised to {not positive, positive}, the token marking missing
// values (rows containing it are dropped), and the label column.
struct DiscretizationSchema {
  std::vector<std::string> drop_columns;
  std::vector<NumericBinning> binnings;
  std::vector<std::string> binarize_positive;
  std::string missing_token = "?";
  std::string label_column;

  // The transforms for the UCI Adult census data: drop fnlwgt and
  // educational-num, drop rows with missing values, age in 8 bins with
  // edges 10..90, hours-per-week in 10 bins with edges 0..90 plus >= 90,
  // capital-gain and capital-loss binarised. Yields 45222 rows and 13
  // columns on the standard CSV.
  static DiscretizationSchema adult();
};

// Reads a header-row CSV and applies the schema.
CategoricalDataset load_and_discretize(const std::string& csv_path,
                                       const DiscretizationSchema& schema);

struct DataSplit {
  CategoricalDataset train;
  CategoricalDataset validation;
  CategoricalDataset test;
};

// Deterministic 40%-40%-20% train-validation-test split (sizes rounded to
// nearest). The validation-test part is stratified so both have equal label
// proportions within one row.
DataSplit split(const CategoricalDataset& dataset, std::uint64_t seed);

// Built-in 13-column categorical dataset with planted feature-label
// correlations, so the experiment runs without any input file. Column
// shapes mirror the discretised Adult data; the label is binary.
CategoricalDataset generate_builtin_dataset(std::size_t rows,
                                            std::uint64_t seed);

}  // namespace accfirst::pipeline

#endif  // ACCFIRST_PIPELINE_DATASET_HPP_
