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

#include "accfirst/mechanisms.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace accfirst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTolerance = 1e-12;

void check_distribution(const std::vector<double>& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": probabilities must be >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw std::invalid_argument(std::string(what) +
                                ": probabilities must sum to 1");
  }
}

double parse_eps_token(const std::string& tok) {
  if (tok == "inf" || tok == "INF" || tok == "Inf" || tok == "infinity") {
    return kInf;
  }
  std::size_t pos = 0;
  double v = std::stod(tok, &pos);
  if (pos != tok.size()) {
    throw std::invalid_argument("DiscretePairMechanism: bad epsilon token '" +
                                tok + "'");
  }
  return v;
}

}  // namespace

std::vector<double> sample_gaussian(const std::vector<double>& mean,
                                    double variance, Rng& rng) {
  if (std::isnan(variance) || variance < 0.0) {
    throw std::invalid_argument("sample_gaussian: variance must be >= 0");
  }
  if (variance == 0.0 || std::isinf(variance)) {
    // Degenerate Gaussian, or the infinite-variance marker whose value is
    // never used numerically (it always receives weight zero downstream).
    return mean;
  }
  std::vector<double> out(mean.size());
  const double sd = std::sqrt(variance);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    out[i] = mean[i] + sd * rng.standard_normal();
  }
  return out;
}

double sample_gaussian(double mean, double variance, Rng& rng) {
  if (std::isnan(variance) || variance < 0.0) {
    throw std::invalid_argument("sample_gaussian: variance must be >= 0");
  }
  if (variance == 0.0 || std::isinf(variance)) return mean;
  return mean + std::sqrt(variance) * rng.standard_normal();
}

double sample_laplace(double mean, double scale, Rng& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("sample_laplace: scale must be > 0");
  }
  double u = rng.uniform_open() - 0.5;  // (-0.5, 0.5)
  double mag = std::log(1.0 - 2.0 * std::abs(u));
  return mean + (u < 0.0 ? scale * mag : -scale * mag);
}

DiscretePairMechanism::DiscretePairMechanism(std::vector<std::string> labels,
                                             std::vector<double> p_x,
                                             std::vector<double> p_xp,
                                             std::vector<double> reported_eps)
    : labels_(std::move(labels)),
      p_x_(std::move(p_x)),
      p_xp_(std::move(p_xp)),
      reported_eps_(std::move(reported_eps)) {
  if (labels_.empty() || p_x_.size() != labels_.size() ||
      p_xp_.size() != labels_.size() || reported_eps_.size() != labels_.size()) {
    throw std::invalid_argument(
        "DiscretePairMechanism: fields must be nonempty and equally sized");
  }
  check_distribution(p_x_, "DiscretePairMechanism p_x");
  check_distribution(p_xp_, "DiscretePairMechanism p_xp");
  for (double e : reported_eps_) {
    if (std::isnan(e) || e < 0.0) {
      throw std::invalid_argument(
          "DiscretePairMechanism: reported eps must be >= 0");
    }
  }
}

DiscretePairMechanism DiscretePairMechanism::swapped() const {
  return DiscretePairMechanism(labels_, p_xp_, p_x_, reported_eps_);
}

DiscretePairMechanism DiscretePairMechanism::parse(std::istream& in) {
  std::vector<std::string> labels;
  std::vector<double> px, pxp, eps;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string label, t1, t2, t3;
    if (!(ls >> label)) continue;  // blank line
    if (!(ls >> t1 >> t2 >> t3)) {
      throw std::invalid_argument(
          "DiscretePairMechanism: expected 'label p_x p_xp eps' per line");
    }
    std::string extra;
    if (ls >> extra) {
      throw std::invalid_argument(
          "DiscretePairMechanism: trailing tokens on line");
    }
    labels.push_back(label);
    px.push_back(std::stod(t1));
    pxp.push_back(std::stod(t2));
    eps.push_back(parse_eps_token(t3));
  }
  return DiscretePairMechanism(std::move(labels), std::move(px),
                               std::move(pxp), std::move(eps));
}

void DiscretePairMechanism::write(std::ostream& out) const {
  out.precision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    out << labels_[i] << ' ' << p_x_[i] << ' ' << p_xp_[i] << ' ';
    if (std::isinf(reported_eps_[i])) {
      out << "inf";
    } else {
      out << reported_eps_[i];
    }
    out << '\n';
  }
}

StochasticMap::StochasticMap(std::size_t source_size, std::size_t target_size,
                             std::vector<double> kernel)
    : source_size_(source_size),
      target_size_(target_size),
      kernel_(std::move(kernel)) {
  if (source_size_ == 0 || target_size_ == 0 ||
      kernel_.size() != source_size_ * target_size_) {
    throw std::invalid_argument("StochasticMap: bad kernel shape");
  }
  for (std::size_t s = 0; s < source_size_; ++s) {
    double row = 0.0;
    for (std::size_t t = 0; t < target_size_; ++t) {
      double v = kernel_[s * target_size_ + t];
      if (std::isnan(v) || v < 0.0) {
        throw std::invalid_argument("StochasticMap: entries must be >= 0");
      }
      row += v;
    }
    if (std::abs(row - 1.0) > kMassTolerance) {
      throw std::invalid_argument("StochasticMap: rows must sum to 1");
    }
  }
}

StochasticMap StochasticMap::identity(std::size_t n) {
  std::vector<double> kernel(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) kernel[i * n + i] = 1.0;
  return StochasticMap(n, n, std::move(kernel));
}

StochasticMap StochasticMap::merge_outcomes(std::size_t n, std::size_t a,
                                            std::size_t b) {
  if (a >= n || b >= n || a == b) {
    throw std::invalid_argument("merge_outcomes: bad indices");
  }
  if (a > b) std::swap(a, b);
  // Targets: merged pair first, then remaining sources in order.
  std::size_t m = n - 1;
  std::vector<double> kernel(n * m, 0.0);
  std::size_t next = 1;
  for (std::size_t s = 0; s < n; ++s) {
    if (s == a || s == b) {
      kernel[s * m + 0] = 1.0;
    } else {
      kernel[s * m + next] = 1.0;
      ++next;
    }
  }
  return StochasticMap(n, m, std::move(kernel));
}

DiscretePairMechanism post_process(const DiscretePairMechanism& mech,
                                   const StochasticMap& map) {
  if (map.source_size() != mech.size()) {
    throw std::invalid_argument("post_process: map/mechanism size mismatch");
  }
  // Output outcomes are (target, retained source eps) pairs. Strata within a
  // target are ordered by the first source that contributes them, which
  // keeps the construction deterministic.
  struct Stratum {
    double eps;
    double px = 0.0;
    double pxp = 0.0;
  };
  std::vector<std::vector<Stratum>> strata(map.target_size());
  for (std::size_t s = 0; s < mech.size(); ++s) {
    for (std::size_t t = 0; t < map.target_size(); ++t) {
      double k = map.at(s, t);
      if (k == 0.0) continue;
      auto& bucket = strata[t];
      Stratum* found = nullptr;
      for (auto& st : bucket) {
        if (st.eps == mech.reported_eps()[s]) {
          found = &st;
          break;
        }
      }
      if (found == nullptr) {
        bucket.push_back(Stratum{mech.reported_eps()[s]});
        found = &bucket.back();
      }
      found->px += mech.p_x()[s] * k;
      found->pxp += mech.p_xp()[s] * k;
    }
  }
  std::vector<std::string> labels;
  std::vector<double> px, pxp, eps;
  for (std::size_t t = 0; t < strata.size(); ++t) {
    for (std::size_t j = 0; j < strata[t].size(); ++j) {
      std::string label = "y" + std::to_string(t);
      if (strata[t].size() > 1) label += "#" + std::to_string(j);
      labels.push_back(std::move(label));
      px.push_back(strata[t][j].px);
      pxp.push_back(strata[t][j].pxp);
      eps.push_back(strata[t][j].eps);
    }
  }
  return DiscretePairMechanism(std::move(labels), std::move(px),
                               std::move(pxp), std::move(eps));
}

DiscretePairMechanism pathological_mechanism() {
  return DiscretePairMechanism({"reveal-x", "reveal-xp", "nothing"},
                               {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5},
                               {kInf, kInf, 0.0});
}

DiscretePairMechanism randomized_response(double p) {
  if (!(p > 0.5) || !(p < 1.0)) {
    throw std::invalid_argument("randomized_response: need p in (0.5, 1)");
  }
  double eps = std::log(p / (1.0 - p));
  return DiscretePairMechanism({"same", "flip"}, {p, 1.0 - p}, {1.0 - p, p},
                               {eps, eps});
}

}  // namespace accfirst
