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

#ifndef ACCFIRST_PIPELINE_EXPERIMENT_HPP_
#define ACCFIRST_PIPELINE_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "accfirst/pipeline/dataset.hpp"

namespace accfirst::pipeline {

enum class CheckerKind { kGaussian, kSvt, kAlwaysHalt, kNeverHalt };

std::string checker_name(CheckerKind kind);
std::optional<CheckerKind> checker_from_name(const std::string& name);

// Parameters of the accuracy-first synthetic-data experiment. Defaults are
// the reference configuration: alpha = 20, eps_query = eps_check = 0.01, a
// 7-point logarithmic budget grid on [0.01, 1].
//
// A NaN threshold asks for the auto-derivation: the midpoint between the
// accuracy of synthetic data built from clean marginals and the accuracy at
// the lowest grid budget, both measured on this pipeline.
struct ExperimentConfig {
  double alpha = 20.0;
  double eps_query = 0.01;
  double eps_check = 0.01;
  double schedule_lo = 0.01;
  double schedule_hi = 1.0;
  int schedule_points = 7;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  int repeats = 10;
  int synth_repeats = 10;  // synthetic datasets averaged per accuracy value
  CheckerKind checker = CheckerKind::kGaussian;
  std::uint64_t seed = 0;
};

// One schedule step of one repeat. The mechanism is always driven through
// the whole grid so accuracies are recorded at every budget; the checker
// runs per the stopping protocol (after each of the first m - 1 releases,
// until it halts) and determines the accepted step. accepted_eps, test_acc
// and eps_total are repeat-level and repeated on each row.
struct StepRecord {
  int repeat;
  CheckerKind checker;
  int step;         // 1-based position in the schedule
  double eps_step;  // budget increment of this step
  double eps_cum;   // cumulative budget after this step
  double noisy_val_acc;  // NaN when the checker was not invoked
  double clean_val_acc;
  bool halted;  // the checker fired at this step
  std::optional<double> accepted_eps;  // nullopt = schedule exhausted
  double test_acc;   // test accuracy of the accepted output
  double eps_total;  // eps_query + max(accepted budget, eps_check)
};

struct ExperimentResult {
  std::vector<StepRecord> records;
  double threshold;       // threshold actually used
  double nondp_val_acc;   // accuracy of noiseless synthetic data
  double low_eps_val_acc; // accuracy at the lowest grid budget
  std::size_t n_validation;
};

// Runs `repeats` independent accuracy-first runs on a fixed split of the
// dataset: Brownian-mechanism releases of the label-pairwise marginal
// vector across the budget grid, synthetic-data generation and naive Bayes
// scoring per step, and the configured accuracy checker on the validation
// split. Fully deterministic given the config.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const CategoricalDataset& dataset);

// One row per StepRecord:
// repeat,checker,step,eps_step,eps_cum,noisy_val_acc,clean_val_acc,halted,
// accepted_eps,test_acc,eps_total
void write_records_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace accfirst::pipeline

#endif  // ACCFIRST_PIPELINE_EXPERIMENT_HPP_
