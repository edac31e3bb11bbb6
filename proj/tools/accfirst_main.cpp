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

// Command-line front end: budget conversion, checker calibration, exact
// verification of discrete mechanism files, and the synthetic-data
// experiment.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "accfirst/accounting.hpp"
#include "accfirst/composition.hpp"
#include "accfirst/mechanisms.hpp"
#include "accfirst/pipeline/dataset.hpp"
#include "accfirst/pipeline/experiment.hpp"
#include "accfirst/verification.hpp"

namespace {

using namespace accfirst;

constexpr std::size_t kBuiltinRows = 4000;

struct ScheduleSpec {
  double lo = 0.01;
  double hi = 1.0;
  int points = 7;
};

ScheduleSpec parse_schedule(const std::string& spec) {
  ScheduleSpec s;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> s.lo >> c1 >> s.hi >> c2 >> s.points) || c1 != ':' || c2 != ':') {
    throw CLI::ValidationError("schedule", "expected lo:hi:m, e.g. 0.01:1:7");
  }
  return s;
}

int run_convert(double alpha, double delta, const std::vector<double>& eps_list,
                const std::string& schedule_spec) {
  std::vector<double> values = eps_list;
  if (values.empty()) {
    ScheduleSpec s = parse_schedule(schedule_spec);
    for (const RdpBudget& b :
         log_spaced_schedule(s.lo, s.hi, s.points).values) {
      values.push_back(b.epsilon);
    }
  }
  RenyiOrder order(alpha);
  std::printf("rdp_epsilon,adp_epsilon\n");
  for (double e : values) {
    AdpBudget adp = rdp_to_adp(order, RdpBudget(e), delta);
    std::printf("%.6f,%.6f\n", e, adp.epsilon);
  }
  return 0;
}

int run_calibrate(double alpha, int n_validation, double eps_check, int m) {
  RenyiOrder order(alpha);
  Sensitivity delta_acc(1.0 / n_validation);
  GaussianCheckConfig gauss{order, delta_acc, m, RdpBudget(eps_check), 0.0};
  GaussianCheck check(gauss);
  std::printf("gaussian check: noise variance %.9e (std %.9e), max %d checks\n",
              check.noise_variance(), std::sqrt(check.noise_variance()), m - 1);
  SvtCheckConfig svt = svt_calibrate(order, delta_acc, RdpBudget(eps_check));
  double eps1 = alpha * delta_acc.value * delta_acc.value /
                (2.0 * svt.sigma1 * svt.sigma1);
  double eps2 = 2.0 * std::sqrt(2.0) * delta_acc.value / svt.sigma2;
  std::printf("svt check: sigma1 %.9e sigma2 %.9e t %.6f eps1 %.9e eps2 %.9e\n",
              svt.sigma1, svt.sigma2, svt.t_split, eps1, eps2);
  return 0;
}

int run_verify(const std::string& mech_path, const std::vector<double>& alphas,
               double delta) {
  std::ifstream in(mech_path);
  if (!in) {
    std::cerr << "cannot open " << mech_path << "\n";
    return 1;
  }
  DiscretePairMechanism mech = DiscretePairMechanism::parse(in);
  std::printf("mechanism: %zu outcomes\n", mech.size());
  for (double a : alphas) {
    RenyiOrder order(a);
    ExPostRdpValue forward = expost_rdp_lhs_exact(mech, order);
    ExPostRdpValue backward = expost_rdp_lhs_exact(mech.swapped(), order);
    bool ok = forward.satisfied() && backward.satisfied();
    std::printf("alpha %-8g lhs %.12g (swapped %.12g)  ex-post RDP: %s\n", a,
                forward.lhs, backward.lhs, ok ? "PASS" : "FAIL");
  }
  double mass_fwd = probabilistic_expost_violation_mass(mech);
  double mass_bwd = probabilistic_expost_violation_mass(mech.swapped());
  std::printf("violation mass %.12g (swapped %.12g)\n", mass_fwd, mass_bwd);
  std::printf("pure ex-post private: %s\n",
              (mass_fwd == 0.0 && mass_bwd == 0.0) ? "PASS" : "FAIL");
  if (!std::isnan(delta)) {
    bool ok = mass_fwd <= delta && mass_bwd <= delta;
    std::printf("%g-probabilistic ex-post private: %s\n", delta,
                ok ? "PASS" : "FAIL");
  }
  return 0;
}

int run_experiment_cmd(const pipeline::ExperimentConfig& config,
                       const std::string& data_path,
                       const std::string& out_path) {
  pipeline::CategoricalDataset dataset =
      data_path.empty()
          ? pipeline::generate_builtin_dataset(kBuiltinRows, config.seed)
          : pipeline::load_and_discretize(
                data_path, pipeline::DiscretizationSchema::adult());
  std::printf("dataset: %zu rows, %zu columns (%s)\n", dataset.row_count(),
              dataset.column_count(),
              data_path.empty() ? "built-in generator" : data_path.c_str());
  pipeline::ExperimentResult result =
      pipeline::run_experiment(config, dataset);
  std::printf("threshold %.6f (non-DP acc %.6f, lowest-budget acc %.6f), "
              "n_validation %zu\n",
              result.threshold, result.nondp_val_acc, result.low_eps_val_acc,
              result.n_validation);
  int halted = 0, exhausted = 0;
  for (const auto& r : result.records) {
    if (r.step == 1) {
      if (r.accepted_eps.has_value()) {
        ++halted;
      } else {
        ++exhausted;
      }
    }
  }
  std::printf("repeats: %d accepted by checker, %d exhausted the schedule\n",
              halted, exhausted);
  if (out_path.empty()) {
    write_records_csv(std::cout, result);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    write_records_csv(out, result);
    std::printf("records written to %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "accfirst: accuracy-first differential privacy with ex-post Renyi-DP "
      "accounting"};
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand(
      "convert", "Convert ex-post RDP budgets to approximate-DP budgets");
  double alpha = 20.0;
  double delta = 1e-5;
  std::vector<double> eps_list;
  std::string schedule_spec = "0.01:1:7";
  convert->add_option("--alpha", alpha, "Renyi order (> 1)");
  convert->add_option("--delta", delta, "target ADP delta in (0, 1)");
  convert->add_option("--eps", eps_list, "RDP epsilon values to convert");
  convert->add_option("--schedule", schedule_spec,
                      "lo:hi:m grid used when --eps is not given");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "Print accuracy-checker noise calibrations");
  double cal_alpha = 20.0;
  int n_validation = 18089;
  double eps_check = 0.01;
  int m = 7;
  calibrate->add_option("--alpha", cal_alpha, "Renyi order (> 1)");
  calibrate->add_option("--n-validation", n_validation,
                        "validation rows; accuracy sensitivity is 1/n");
  calibrate->add_option("--eps-check", eps_check, "checker RDP budget");
  calibrate->add_option("--m", m, "schedule size; at most m-1 checks");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Exact privacy checks on a discrete mechanism file");
  std::string mech_path;
  std::vector<double> verify_alphas{2.0, 20.0};
  double verify_delta = std::numeric_limits<double>::quiet_NaN();
  verify->add_option("--mech", mech_path,
                     "mechanism file (lines: label p_x p_xp eps)")
      ->required();
  verify->add_option("--alpha", verify_alphas, "Renyi orders to evaluate");
  verify->add_option("--delta", verify_delta,
                     "also report the delta-probabilistic ex-post check");

  // run
  auto* run = app.add_subcommand(
      "run",
      "Accuracy-first synthetic-data experiment. Without --threshold the "
      "threshold is derived as the midpoint between the accuracy of "
      "noiseless synthetic data and the accuracy at the lowest grid budget, "
      "both measured on this pipeline.");
  pipeline::ExperimentConfig config;
  std::string data_path;
  std::string out_path;
  std::string run_schedule = "0.01:1:7";
  std::string checker = "gaussian";
  run->add_option("--data", data_path,
                  "Adult-format CSV; omit to use the built-in generator");
  run->add_option("--alpha", config.alpha, "Renyi order (> 1)");
  run->add_option("--eps-query", config.eps_query,
                  "constant budget charged for query selection");
  run->add_option("--eps-check", config.eps_check, "checker RDP budget");
  run->add_option("--schedule", run_schedule, "budget grid lo:hi:m");
  run->add_option("--threshold", config.threshold,
                  "accuracy threshold; omit to derive");
  run->add_option("--checker", checker, "gaussian | svt");
  run->add_option("--repeats", config.repeats, "independent runs");
  run->add_option("--seed", config.seed, "root seed");
  run->add_option("--out", out_path, "records CSV path (default: stdout)");

  for (CLI::App* sub : {convert, calibrate, verify, run}) {
    sub->set_config("--config", "",
                    "plain-text key=value config, overridden by flags");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) {
      return run_convert(alpha, delta, eps_list, schedule_spec);
    }
    if (calibrate->parsed()) {
      return run_calibrate(cal_alpha, n_validation, eps_check, m);
    }
    if (verify->parsed()) {
      return run_verify(mech_path, verify_alphas, verify_delta);
    }
    if (run->parsed()) {
      ScheduleSpec s = parse_schedule(run_schedule);
      config.schedule_lo = s.lo;
      config.schedule_hi = s.hi;
      config.schedule_points = s.points;
      auto kind = pipeline::checker_from_name(checker);
      if (!kind.has_value() || (*kind != pipeline::CheckerKind::kGaussian &&
                                *kind != pipeline::CheckerKind::kSvt)) {
        std::cerr << "unknown checker '" << checker << "'\n";
        return 1;
      }
      config.checker = *kind;
      return run_experiment_cmd(config, data_path, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
