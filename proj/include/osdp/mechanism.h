// Copyright 2026 The OSDP Leakage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// One-sided randomized response: sensitive records are never released;
// non-sensitive records are released with probability 1 - exp(-epsilon).
//
// Randomness comes from a ReleaseRng, which is std::mt19937_64 seeded with the
// 64-bit seed directly. A uniform draw in [0, 1) is the top 53 bits of one
// engine output scaled by 2^-53; std::uniform_real_distribution is avoided
// because its output is not pinned across standard libraries. A record is
// released iff its draw is below 1 - exp(-epsilon). Sensitive records consume
// no draws.

#ifndef OSDP_MECHANISM_H_
#define OSDP_MECHANISM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "osdp/core_model.h"

namespace osdp {

using RngSeed = uint64_t;

class ReleaseRng {
 public:
  explicit ReleaseRng(RngSeed seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Seed for the `chunk`-th independent slice of a stream.
inline RngSeed ChunkSeed(RngSeed seed, uint64_t chunk) { return seed ^ chunk; }

// A validated mechanism instance. Release() cannot fail once constructed.
class OsdpRandomizedResponse {
 public:
  static absl::StatusOr<OsdpRandomizedResponse> Create(double epsilon);

  ReleaseOutcome Release(SensitivityIndicator x, ReleaseRng& rng) const {
    if (x == SensitivityIndicator::kSensitive) return ReleaseOutcome::kSuppressed;
    return rng.Uniform() < release_probability_ ? ReleaseOutcome::kReleased
                                                : ReleaseOutcome::kSuppressed;
  }

  double epsilon() const { return epsilon_; }
  // 1 - exp(-epsilon).
  double release_probability() const { return release_probability_; }

 private:
  explicit OsdpRandomizedResponse(double epsilon);

  double epsilon_;
  double release_probability_;
};

absl::StatusOr<ReleaseOutcome> OsdpRelease(SensitivityIndicator x,
                                           double epsilon, ReleaseRng& rng);

// Applies the mechanism element-wise with one ReleaseRng seeded by `seed`.
absl::StatusOr<std::vector<ReleaseOutcome>> ReleaseStream(
    std::span<const SensitivityIndicator> xs, double epsilon, RngSeed seed);

}  // namespace osdp

#endif  // OSDP_MECHANISM_H_
