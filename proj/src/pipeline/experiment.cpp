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

#include "accfirst/pipeline/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "accfirst/composition.hpp"
#include "accfirst/noise_reduction.hpp"
#include "accfirst/pipeline/marginals.hpp"
#include "accfirst/pipeline/synthesis.hpp"

namespace accfirst::pipeline {

namespace {

constexpr int kThresholdProbeRepeats = 3;

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Mean validation accuracy over synth_repeats synthetic datasets drawn from
// the given marginals. Streams are derived from (seed, tag, base_index + k)
// so identical tags reproduce identical accuracies.
double mean_accuracy(const MarginalSet& marginals, const CategoricalDataset& train,
                     const CategoricalDataset& eval_split, int synth_repeats,
                     std::uint64_t seed, const char* tag,
                     std::uint64_t base_index) {
  double sum = 0.0;
  for (int k = 0; k < synth_repeats; ++k) {
    Rng rng(derive_seed(seed, tag, base_index + static_cast<std::uint64_t>(k)));
    CategoricalDataset synthetic =
        synthesize(marginals, train, train.row_count(), rng);
    sum += train_and_score(synthetic, eval_split);
  }
  return sum / synth_repeats;
}

}  // namespace

std::string checker_name(CheckerKind kind) {
  switch (kind) {
    case CheckerKind::kGaussian:
      return "gaussian";
    case CheckerKind::kSvt:
      return "svt";
    case CheckerKind::kAlwaysHalt:
      return "always_halt";
    case CheckerKind::kNeverHalt:
      return "never_halt";
  }
  return "unknown";
}

std::optional<CheckerKind> checker_from_name(const std::string& name) {
  if (name == "gaussian") return CheckerKind::kGaussian;
  if (name == "svt") return CheckerKind::kSvt;
  if (name == "always_halt") return CheckerKind::kAlwaysHalt;
  if (name == "never_halt") return CheckerKind::kNeverHalt;
  return std::nullopt;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const CategoricalDataset& dataset) {
  if (config.repeats < 1 || config.synth_repeats < 1) {
    throw std::invalid_argument("run_experiment: repeats must be >= 1");
  }
  const RenyiOrder alpha(config.alpha);
  const EpsilonSchedule schedule = log_spaced_schedule(
      config.schedule_lo, config.schedule_hi, config.schedule_points);
  const int m = static_cast<int>(schedule.values.size());

  // The split is fixed across repeats; only mechanism noise varies.
  DataSplit parts = split(dataset, derive_seed(config.seed, "split"));
  const CategoricalDataset& train = parts.train;
  const CategoricalDataset& validation = parts.validation;
  const CategoricalDataset& test = parts.test;
  const Sensitivity delta_acc(1.0 /
                              static_cast<double>(validation.row_count()));

  const std::vector<MarginalQuery> queries = label_pairwise_queries(train);
  const MarginalSet clean = evaluate_marginals(train, queries);
  const Sensitivity delta = clean.sensitivity();

  ExperimentResult result;
  result.n_validation = validation.row_count();

  // Threshold: configured value, or the midpoint between the noiseless
  // accuracy and the accuracy at the lowest budget.
  result.nondp_val_acc = mean_accuracy(clean, train, validation,
                                       config.synth_repeats, config.seed,
                                       "nondp-synth", 0);
  {
    double sum = 0.0;
    for (int p = 0; p < kThresholdProbeRepeats; ++p) {
      NoiseReductionSession probe(concat_counts(clean), delta, alpha);
      Rng rng(derive_seed(config.seed, "probe-mech", p));
      ExPostOutput out = probe.brownian_release(schedule.values.front(), rng);
      MarginalSet noisy = with_counts(clean, out.payload);
      sum += mean_accuracy(noisy, train, validation, config.synth_repeats,
                           config.seed, "probe-synth",
                           static_cast<std::uint64_t>(p) * 1000);
    }
    result.low_eps_val_acc = sum / kThresholdProbeRepeats;
  }
  result.threshold = std::isnan(config.threshold)
                         ? 0.5 * (result.nondp_val_acc + result.low_eps_val_acc)
                         : config.threshold;

  GaussianCheckConfig gauss_config{alpha, delta_acc, m,
                                   RdpBudget(config.eps_check),
                                   result.threshold};
  std::optional<SvtCheckConfig> svt_config;
  if (config.checker == CheckerKind::kSvt) {
    svt_config = svt_calibrate(alpha, delta_acc, RdpBudget(config.eps_check));
    svt_config->threshold = result.threshold;
  }

  for (int repeat = 0; repeat < config.repeats; ++repeat) {
    // Mechanism and synthesis streams do not depend on the checker, so two
    // checkers on the same seed see identical releases and accuracies.
    Rng mech_rng(derive_seed(config.seed, "mech", repeat));
    Rng check_rng(derive_seed(config.seed, "check-" + checker_name(config.checker),
                              repeat));

    NoiseReductionSession session(concat_counts(clean), delta, alpha);
    std::optional<GaussianCheck> gauss;
    std::optional<SvtCheck> svt;
    if (config.checker == CheckerKind::kGaussian) {
      gauss.emplace(gauss_config);
    } else if (config.checker == CheckerKind::kSvt) {
      svt.emplace(*svt_config, check_rng);
    }

    struct StepOutcome {
      double noisy_acc;
      double clean_acc;
      double test_acc;
      bool halted;
    };
    std::vector<StepOutcome> outcomes;
    int accepted_step = m - 1;  // forced acceptance when never halted
    bool exhausted = true;

    for (int i = 0; i < m; ++i) {
      ExPostOutput out = session.brownian_release(schedule.values[i], mech_rng);
      MarginalSet noisy = with_counts(clean, out.payload);
      std::uint64_t synth_base =
          (static_cast<std::uint64_t>(repeat) * 100 + static_cast<std::uint64_t>(i)) *
          100;
      double clean_acc =
          mean_accuracy(noisy, train, validation, config.synth_repeats,
                        config.seed, "step-synth", synth_base);
      double test_acc = mean_accuracy(noisy, train, test, config.synth_repeats,
                                      config.seed, "step-synth-test", synth_base);

      double noisy_acc = std::numeric_limits<double>::quiet_NaN();
      bool halted_here = false;
      // The checker runs after each of the first m - 1 releases until it
      // halts; the last release is accepted unconditionally.
      if (exhausted && i < m - 1) {
        StopDecision decision = StopDecision::kContinue;
        switch (config.checker) {
          case CheckerKind::kGaussian:
            decision = gauss->check(clean_acc, check_rng);
            noisy_acc = gauss->last_noisy_value();
            break;
          case CheckerKind::kSvt:
            decision = svt->check(clean_acc, check_rng);
            noisy_acc = svt->last_noisy_value();
            break;
          case CheckerKind::kAlwaysHalt:
            decision = StopDecision::kHalt;
            noisy_acc = clean_acc;
            break;
          case CheckerKind::kNeverHalt:
            decision = StopDecision::kContinue;
            noisy_acc = clean_acc;
            break;
        }
        if (decision == StopDecision::kHalt) {
          accepted_step = i;
          exhausted = false;
          halted_here = true;
        }
      }
      outcomes.push_back(StepOutcome{noisy_acc, clean_acc, test_acc, halted_here});
    }

    const double accepted_budget = schedule.values[accepted_step].epsilon;
    const double eps_total =
        config.eps_query + std::max(accepted_budget, config.eps_check);
    for (int i = 0; i < m; ++i) {
      StepRecord rec;
      rec.repeat = repeat;
      rec.checker = config.checker;
      rec.step = i + 1;
      rec.eps_cum = schedule.values[i].epsilon;
      rec.eps_step = i == 0 ? schedule.values[0].epsilon
                            : schedule.values[i].epsilon -
                                  schedule.values[i - 1].epsilon;
      rec.noisy_val_acc = outcomes[i].noisy_acc;
      rec.clean_val_acc = outcomes[i].clean_acc;
      rec.halted = outcomes[i].halted;
      rec.accepted_eps = exhausted
                             ? std::nullopt
                             : std::optional<double>(accepted_budget);
      rec.test_acc = outcomes[accepted_step].test_acc;
      rec.eps_total = eps_total;
      result.records.push_back(rec);
    }
  }
  return result;
}

void write_records_csv(std::ostream& out, const ExperimentResult& result) {
  out << "repeat,checker,step,eps_step,eps_cum,noisy_val_acc,clean_val_acc,"
         "halted,accepted_eps,test_acc,eps_total\n";
  for (const StepRecord& r : result.records) {
    out << r.repeat << ',' << checker_name(r.checker) << ',' << r.step << ','
        << format_double("%.9g", r.eps_step) << ','
        << format_double("%.9g", r.eps_cum) << ','
        << format_double("%.6f", r.noisy_val_acc) << ','
        << format_double("%.6f", r.clean_val_acc) << ',' << (r.halted ? 1 : 0)
        << ',';
    if (r.accepted_eps.has_value()) {
      out << format_double("%.9g", *r.accepted_eps);
    } else {
      out << "exhausted";
    }
    out << ',' << format_double("%.6f", r.test_acc) << ','
        << format_double("%.9g", r.eps_total) << '\n';
  }
}

}  // namespace accfirst::pipeline
