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

// Binary occupancy traces and the per-day attributes derived from them.
//
// Input CSV layout:
//
//   timestamp,space_id,occupied
//   2024-03-04T08:00:00-05:00,room-101,0
//
// Timestamps are ISO-8601 with a mandatory UTC offset ("Z", "+hh:mm", "+hhmm"
// or "+hh"). Each sample keeps its own offset and days are split on the
// sample's local wall clock. Rows of different spaces may interleave, but
// within one space timestamps must strictly increase.

#ifndef OSDP_OCCUPANCY_H_
#define OSDP_OCCUPANCY_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "absl/time/time.h"

namespace osdp::pipeline {

struct Timestamp {
  absl::Time instant;
  int offset_seconds = 0;

  absl::CivilSecond Local() const;
  // Seconds since local midnight.
  int SecondOfDay() const;
};

absl::StatusOr<Timestamp> ParseTimestamp(absl::string_view text);
std::string FormatTimestamp(const Timestamp& ts);

// "HH:MM" or "HH:MM:SS" to seconds since midnight.
absl::StatusOr<int> ParseTimeOfDay(absl::string_view text);
std::string FormatTimeOfDay(int seconds);

struct OccupancySample {
  Timestamp timestamp;
  bool occupied = false;
};

struct OccupancyTrace {
  std::string space_id;
  std::vector<OccupancySample> samples;
};

// Traces are returned ordered by space id. Errors name the offending line.
absl::StatusOr<std::vector<OccupancyTrace>> ParseOccupancyCsv(
    std::istream& in);
absl::StatusOr<std::vector<OccupancyTrace>> IngestCsv(const std::string& path);

// Half-open interval [start, end) of local time of day, in seconds.
struct WorkHours {
  int start_seconds = 8 * 3600;
  int end_seconds = 17 * 3600;
};

absl::Status ValidateWorkHours(const WorkHours& hours);

struct ExtractionOptions {
  WorkHours work_hours;
  // Local time at which one day ends and the next begins.
  int day_start_seconds = 0;
};

// Attributes of one space on one day. A transition is a change between two
// consecutive samples of the same day, timed at the later sample; between
// samples the last value holds.
struct ExtractedAttributes {
  std::string space_id;
  absl::CivilDay day;
  // First 0 -> 1 transition, seconds since the day's local midnight. Values
  // reach past 24 h when day_start_seconds moves the boundary after midnight.
  std::optional<int> start_time;
  // Last 1 -> 0 transition. When start_time exists only exits after it count,
  // so start_time <= end_time whenever both are present.
  std::optional<int> end_time;
  // Number of 1 -> 0 transitions.
  int exit_count = 0;
  // Mean gap between an exit and the next arrival on the same day.
  std::optional<double> mean_away_minutes;
  // Fraction of samples inside work hours that are occupied; absent when no
  // sample falls inside work hours.
  std::optional<double> occupancy_fraction;
};

std::vector<ExtractedAttributes> ExtractAttributes(
    const OccupancyTrace& trace, const ExtractionOptions& options = {});

}  // namespace osdp::pipeline

#endif  // OSDP_OCCUPANCY_H_
