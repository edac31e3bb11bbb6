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

#ifndef ACCFIRST_RNG_HPP_
#define ACCFIRST_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace accfirst {

// Vigna's splitmix64 mixing step, used for seed derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable, splittable random generator. Every stochastic operation in the
// library takes an explicit Rng so that runs are reproducible end to end.
//
// A generator is single-owner mutable state and must not be shared across
// concurrent callers; parallel work uses independent streams obtained from
// split() or derive_seed().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  // Child stream decorrelated from the parent's subsequent output.
  Rng split() { return Rng(next_u64() ^ 0x5851f42d4c957f2dULL); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); never returns an endpoint.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal deviate (Box-Muller; consumes exactly two words, so the
  // stream layout does not depend on sampled values).
  double standard_normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift bounded draw; bias is negligible for the n used here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64_next(s);
  }

  std::mt19937_64 engine_;
};

// Stable seed for a named sub-stream of a root seed, e.g. one stream per
// experiment repeat. The label keeps unrelated streams from colliding.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label bytes
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = root;
  std::uint64_t a = splitmix64_next(s);
  s = h;
  std::uint64_t b = splitmix64_next(s);
  s = index ^ a ^ (b << 1);
  return splitmix64_next(s);
}

}  // namespace accfirst

#endif  // ACCFIRST_RNG_HPP_
