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

#include "accfirst/pipeline/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "accfirst/rng.hpp"

namespace accfirst::pipeline {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& tok, const std::string& column) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || tok.empty()) {
    throw std::invalid_argument("load_and_discretize: unparseable cell '" +
                                tok + "' in column " + column);
  }
  return v;
}

std::string bin_label(double lo, double hi) {
  std::ostringstream os;
  os << "[" << lo << "," << hi << ")";
  return os.str();
}

// Largest-remainder allocation of `total` over weights.
std::vector<std::size_t> largest_remainder(const std::vector<std::size_t>& weights,
                                           std::size_t total) {
  std::size_t weight_sum = 0;
  for (auto w : weights) weight_sum += w;
  std::vector<std::size_t> alloc(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double exact = weight_sum == 0
                       ? 0.0
                       : static_cast<double>(weights[i]) * total / weight_sum;
    alloc[i] = static_cast<std::size_t>(exact);
    alloc[i] = std::min(alloc[i], weights[i]);
    assigned += alloc[i];
    remainders.push_back({exact - std::floor(exact), i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [rem, i] : remainders) {
    if (assigned >= total) break;
    if (alloc[i] < weights[i]) {
      ++alloc[i];
      ++assigned;
    }
  }
  // Top up in index order if rounding left a shortfall.
  for (std::size_t i = 0; i < weights.size() && assigned < total; ++i) {
    while (alloc[i] < weights[i] && assigned < total) {
      ++alloc[i];
      ++assigned;
    }
  }
  return alloc;
}

}  // namespace

CategoricalDataset::CategoricalDataset(std::vector<Column> columns,
                                       int label_column)
    : columns_(std::move(columns)), label_column_(label_column) {
  if (columns_.empty() || label_column_ < 0 ||
      static_cast<std::size_t>(label_column_) >= columns_.size()) {
    throw std::invalid_argument("CategoricalDataset: bad label column");
  }
  for (const Column& c : columns_) {
    if (c.categories.empty()) {
      throw std::invalid_argument("CategoricalDataset: column '" + c.name +
                                  "' has no categories");
    }
  }
}

void CategoricalDataset::append_row(std::span<const std::uint16_t> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("append_row: wrong arity");
  }
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (row[c] >= columns_[c].categories.size()) {
      throw std::invalid_argument("append_row: category index out of range");
    }
  }
  cells_.insert(cells_.end(), row.begin(), row.end());
  ++rows_;
}

CategoricalDataset CategoricalDataset::subset(
    std::span<const std::uint32_t> row_indices) const {
  CategoricalDataset out(columns_, label_column_);
  std::vector<std::uint16_t> row(columns_.size());
  for (std::uint32_t r : row_indices) {
    for (std::size_t c = 0; c < columns_.size(); ++c) row[c] = cell(r, c);
    out.append_row(row);
  }
  return out;
}

DiscretizationSchema DiscretizationSchema::adult() {
  DiscretizationSchema s;
  s.drop_columns = {"fnlwgt", "educational-num"};
  s.binnings = {
      NumericBinning{"age", {10, 20, 30, 40, 50, 60, 70, 80, 90}, false},
      NumericBinning{
          "hours-per-week", {0, 10, 20, 30, 40, 50, 60, 70, 80, 90}, true},
  };
  s.binarize_positive = {"capital-gain", "capital-loss"};
  s.missing_token = "?";
  s.label_column = "income";
  return s;
}

CategoricalDataset load_and_discretize(const std::string& csv_path,
                                       const DiscretizationSchema& schema) {
  std::ifstream in(csv_path);
  if (!in) {
    throw std::runtime_error("load_and_discretize: cannot open " + csv_path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("load_and_discretize: empty file");
  }
  std::vector<std::string> header = split_csv_line(line);

  auto find_raw = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  for (const std::string& d : schema.drop_columns) {
    if (find_raw(d) < 0) {
      throw std::invalid_argument("load_and_discretize: unknown column '" + d +
                                  "' in drop list");
    }
  }
  enum class Kind { kCategorical, kBinned, kBinarized };
  struct Plan {
    std::string name;
    int raw_index;
    Kind kind;
    const NumericBinning* binning = nullptr;
  };
  std::vector<Plan> plans;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& name = header[i];
    if (std::find(schema.drop_columns.begin(), schema.drop_columns.end(),
                  name) != schema.drop_columns.end()) {
      continue;
    }
    Plan p{name, static_cast<int>(i), Kind::kCategorical, nullptr};
    for (const NumericBinning& b : schema.binnings) {
      if (b.column == name) {
        p.kind = Kind::kBinned;
        p.binning = &b;
      }
    }
    if (std::find(schema.binarize_positive.begin(),
                  schema.binarize_positive.end(),
                  name) != schema.binarize_positive.end()) {
      p.kind = Kind::kBinarized;
    }
    plans.push_back(p);
  }
  for (const NumericBinning& b : schema.binnings) {
    if (find_raw(b.column) < 0) {
      throw std::invalid_argument("load_and_discretize: unknown column '" +
                                  b.column + "' in binning list");
    }
  }
  for (const std::string& b : schema.binarize_positive) {
    if (find_raw(b) < 0) {
      throw std::invalid_argument("load_and_discretize: unknown column '" + b +
                                  "' in binarize list");
    }
  }

  // First pass: keep complete rows, collect categorical vocabularies in
  // order of first appearance.
  std::vector<std::vector<std::string>> raw_rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument(
          "load_and_discretize: row arity does not match header");
    }
    bool missing = false;
    for (const Plan& p : plans) {
      if (fields[p.raw_index] == schema.missing_token) missing = true;
    }
    if (missing) continue;
    raw_rows.push_back(std::move(fields));
  }

  std::vector<Column> columns;
  std::vector<std::map<std::string, std::uint16_t>> vocab(plans.size());
  for (std::size_t c = 0; c < plans.size(); ++c) {
    const Plan& p = plans[c];
    Column col;
    col.name = p.name;
    if (p.kind == Kind::kBinned) {
      const auto& e = p.binning->edges;
      for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        col.categories.push_back(bin_label(e[k], e[k + 1]));
      }
      if (p.binning->overflow_bin) {
        std::ostringstream os;
        os << ">=" << e.back();
        col.categories.push_back(os.str());
      }
    } else if (p.kind == Kind::kBinarized) {
      col.categories = {"not positive", "positive"};
    } else {
      for (const auto& row : raw_rows) {
        const std::string& v = row[p.raw_index];
        if (vocab[c].emplace(v, static_cast<std::uint16_t>(col.categories.size()))
                .second) {
          col.categories.push_back(v);
        }
      }
      if (col.categories.empty()) col.categories.push_back("(empty)");
    }
    columns.push_back(std::move(col));
  }

  int label = -1;
  for (std::size_t c = 0; c < plans.size(); ++c) {
    if (plans[c].name == schema.label_column) label = static_cast<int>(c);
  }
  if (label < 0) {
    throw std::invalid_argument("load_and_discretize: label column '" +
                                schema.label_column + "' missing");
  }

  CategoricalDataset dataset(columns, label);
  std::vector<std::uint16_t> row(plans.size());
  for (const auto& raw : raw_rows) {
    for (std::size_t c = 0; c < plans.size(); ++c) {
      const Plan& p = plans[c];
      const std::string& tok = raw[p.raw_index];
      if (p.kind == Kind::kBinned) {
        double v = parse_number(tok, p.name);
        const auto& e = p.binning->edges;
        std::size_t bin;
        if (v < e.front()) {
          bin = 0;
        } else if (v >= e.back()) {
          bin = p.binning->overflow_bin ? e.size() - 1 : e.size() - 2;
        } else {
          bin = static_cast<std::size_t>(
                    std::upper_bound(e.begin(), e.end(), v) - e.begin()) -
                1;
        }
        row[c] = static_cast<std::uint16_t>(bin);
      } else if (p.kind == Kind::kBinarized) {
        double v = parse_number(tok, p.name);
        row[c] = v > 0.0 ? 1 : 0;
      } else {
        row[c] = vocab[c].at(tok);
      }
    }
    dataset.append_row(row);
  }
  return dataset;
}

DataSplit split(const CategoricalDataset& dataset, std::uint64_t seed) {
  const std::size_t n = dataset.row_count();
  if (n < 3) {
    throw std::invalid_argument("split: need at least 3 rows");
  }
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  Rng rng(derive_seed(seed, "dataset-split"));
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }

  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(0.4 * static_cast<double>(n)));
  const std::size_t n_val =
      static_cast<std::size_t>(std::llround(0.4 * static_cast<double>(n)));
  const std::size_t n_test = n - n_train - n_val;

  std::vector<std::uint32_t> train(order.begin(), order.begin() + n_train);

  // Stratify the remaining rows by label so validation and test carry the
  // same label proportions.
  const std::size_t n_labels = dataset.label_cardinality();
  std::vector<std::vector<std::uint32_t>> by_label(n_labels);
  for (std::size_t i = n_train; i < n; ++i) {
    by_label[dataset.label(order[i])].push_back(order[i]);
  }
  std::vector<std::size_t> group_sizes;
  group_sizes.reserve(n_labels);
  for (const auto& g : by_label) group_sizes.push_back(g.size());
  std::vector<std::size_t> to_val = largest_remainder(group_sizes, n_val);

  std::vector<std::uint32_t> val, test;
  val.reserve(n_val);
  test.reserve(n_test);
  for (std::size_t l = 0; l < n_labels; ++l) {
    for (std::size_t k = 0; k < by_label[l].size(); ++k) {
      (k < to_val[l] ? val : test).push_back(by_label[l][k]);
    }
  }
  return DataSplit{dataset.subset(train), dataset.subset(val),
                   dataset.subset(test)};
}

CategoricalDataset generate_builtin_dataset(std::size_t rows,
                                            std::uint64_t seed) {
  if (rows == 0) {
    throw std::invalid_argument("generate_builtin_dataset: rows must be > 0");
  }
  struct Spec {
    const char* name;
    int cardinality;
    double strength;  // label tilt: 0 = pure noise feature
  };
  // Shapes mirror the discretised Adult columns; a few features carry a
  // strong planted label signal, the rest taper off to noise.
  const Spec specs[] = {
      {"age", 8, 0.90},        {"workclass", 7, 0.85},
      {"education", 16, 0.80}, {"marital-status", 7, 0.75},
      {"occupation", 14, 0.40},{"relationship", 6, 0.35},
      {"race", 5, 0.30},       {"gender", 2, 0.25},
      {"capital-gain", 2, 0.10},{"capital-loss", 2, 0.05},
      {"hours-per-week", 10, 0.0},{"native-country", 41, 0.0},
  };
  std::vector<Column> columns;
  for (const Spec& s : specs) {
    Column c;
    c.name = s.name;
    for (int k = 0; k < s.cardinality; ++k) {
      c.categories.push_back("v" + std::to_string(k));
    }
    columns.push_back(std::move(c));
  }
  columns.push_back(Column{"income", {"<=50K", ">50K"}});
  const int label_col = static_cast<int>(columns.size()) - 1;

  Rng param_rng(derive_seed(seed, "builtin-params"));
  // Per-feature class conditionals: a smooth base distribution for label 0,
  // mixed towards a peaked tilt for label 1.
  std::vector<std::vector<double>> cond0, cond1;
  for (const Spec& s : specs) {
    std::vector<double> base(s.cardinality), tilt(s.cardinality);
    double base_sum = 0.0, tilt_sum = 0.0;
    for (int k = 0; k < s.cardinality; ++k) {
      double u = param_rng.uniform_open();
      base[k] = 0.25 - std::log(u);  // gamma-ish, bounded away from 0
      base_sum += base[k];
      double v = param_rng.uniform_open();
      double e = -std::log(v);
      tilt[k] = e * e;  // heavier tail concentrates mass
      tilt_sum += tilt[k];
    }
    std::vector<double> p0(s.cardinality), p1(s.cardinality);
    for (int k = 0; k < s.cardinality; ++k) {
      base[k] /= base_sum;
      tilt[k] /= tilt_sum;
      p0[k] = base[k];
      p1[k] = (1.0 - s.strength) * base[k] + s.strength * tilt[k];
    }
    cond0.push_back(std::move(p0));
    cond1.push_back(std::move(p1));
  }

  CategoricalDataset dataset(columns, label_col);
  Rng row_rng(derive_seed(seed, "builtin-rows"));
  std::vector<std::uint16_t> row(columns.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const bool positive = row_rng.uniform() < 0.5;
    for (std::size_t f = 0; f < cond0.size(); ++f) {
      const std::vector<double>& p = positive ? cond1[f] : cond0[f];
      double u = row_rng.uniform();
      double acc = 0.0;
      std::uint16_t pick = static_cast<std::uint16_t>(p.size() - 1);
      for (std::size_t k = 0; k < p.size(); ++k) {
        acc += p[k];
        if (u < acc) {
          pick = static_cast<std::uint16_t>(k);
          break;
        }
      }
      row[f] = pick;
    }
    row[static_cast<std::size_t>(label_col)] = positive ? 1 : 0;
    dataset.append_row(row);
  }
  return dataset;
}

}  // namespace accfirst::pipeline
