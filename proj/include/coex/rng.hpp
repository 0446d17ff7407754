// SPDX-License-Identifier: Apache-2.0
//
// coexsim - system-level simulator for eMBB macro / URLLC factory coexistence
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace coex {

/// Stable 64-bit mixer (splitmix64 finalizer). Used for seed derivation and
/// counter-based draws, so results do not depend on evaluation order.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (mix64(v) + 0x632be59bd9b4e019ULL + (seed << 6) + (seed >> 2)));
}

inline std::uint64_t hash_of(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = hash_combine(h, p);
  return h;
}

/// Named stream tags. Adding a tag never perturbs the draws of existing ones.
enum class Stream : std::uint64_t {
  Drop = 0x10,
  UrllcPositions = 0x11,
  EmbbPositions = 0x12,
  ProbePositions = 0x13,
  Shadowing = 0x20,
  LosState = 0x21,
};

/// Seed for (master, drop, stream).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t drop_index, Stream tag) {
  return hash_of({master, drop_index, static_cast<std::uint64_t>(tag)});
}

/// Uniform in the open interval (0, 1) from a hash value.
inline double hash_uniform(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal from a hash value (Box-Muller on two derived uniforms).
inline double hash_normal(std::uint64_t h) {
  const double u1 = hash_uniform(mix64(h ^ 0x5851f42d4c957f2dULL));
  const double u2 = hash_uniform(mix64(h ^ 0x14057b7ef767814fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

using Rng = std::mt19937_64;

}  // namespace coex
