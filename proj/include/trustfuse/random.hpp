/*
 * Copyright 2025 The TrustFuse Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef TRUSTFUSE_RANDOM_HPP
#define TRUSTFUSE_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace trustfuse {

/// FNV-1a 64-bit hash. Stable across platforms; used for stream derivation
/// and output-file provenance digests.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic random stream. All sampling routines are implemented here
/// rather than with std:: distributions so that draws are identical across
/// standard libraries, and so that each call consumes a well-defined amount
/// of generator state.
///
/// Streams are derived from a root seed plus a label and index; distinct
/// labels give statistically independent sequences. Subsystems (detection
/// noise, attacks, scenario layout) each own a stream so that toggling one
/// subsystem never perturbs the draws of another.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  static RngStream derive(std::uint64_t root_seed, std::string_view label,
                          std::uint64_t index = 0) {
    std::uint64_t h = fnv1a64(label, 0xcbf29ce484222325ull ^ root_seed);
    return RngStream(splitmix64(h ^ (0x632be59bd9b4e019ull * (index + 1))));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    // Modulo bias is negligible for the small n used here.
    return gen_() % n;
  }

  /// Standard normal via Box-Muller. Draws two uniforms per call and keeps
  /// no cached spare, so the stream state after k calls is independent of
  /// interleaving with other sample kinds.
  double normal() {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Poisson by inversion of the product of uniforms (Knuth). Fine for the
  /// small rates used in detection clutter and attack injection.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double prod = uniform();
    int k = 0;
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace trustfuse

#endif  // TRUSTFUSE_RANDOM_HPP
