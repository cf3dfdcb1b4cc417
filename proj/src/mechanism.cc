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

#include "osdp/mechanism.h"

#include <cmath>

namespace osdp {

OsdpRandomizedResponse::OsdpRandomizedResponse(double epsilon)
    : epsilon_(epsilon), release_probability_(-std::expm1(-epsilon)) {}

absl::StatusOr<OsdpRandomizedResponse> OsdpRandomizedResponse::Create(
    double epsilon) {
  if (auto s = ValidateEpsilon(epsilon); !s.ok()) return s;
  return OsdpRandomizedResponse(epsilon);
}

absl::StatusOr<ReleaseOutcome> OsdpRelease(SensitivityIndicator x,
                                           double epsilon, ReleaseRng& rng) {
  auto mechanism = OsdpRandomizedResponse::Create(epsilon);
  if (!mechanism.ok()) return mechanism.status();
  return mechanism->Release(x, rng);
}

absl::StatusOr<std::vector<ReleaseOutcome>> ReleaseStream(
    std::span<const SensitivityIndicator> xs, double epsilon, RngSeed seed) {
  auto mechanism = OsdpRandomizedResponse::Create(epsilon);
  if (!mechanism.ok()) return mechanism.status();
  ReleaseRng rng(seed);
  std::vector<ReleaseOutcome> out;
  out.reserve(xs.size());
  for (SensitivityIndicator x : xs) out.push_back(mechanism->Release(x, rng));
  return out;
}

}  // namespace osdp
