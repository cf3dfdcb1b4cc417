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

#include "osdp/occupancy.h"

#include <charconv>
#include <fstream>
#include <map>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace osdp::pipeline {
namespace {

constexpr absl::string_view kCsvHeader = "timestamp,space_id,occupied";

bool ParseFixed(absl::string_view text, size_t pos, size_t width, int& out) {
  if (pos + width > text.size()) return false;
  for (size_t i = pos; i < pos + width; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return ec == std::errc() && ptr == text.data() + pos + width;
}

absl::Status BadTimestamp(absl::string_view text, absl::string_view why) {
  return absl::InvalidArgumentError(
      absl::StrCat("invalid timestamp '", text, "': ", why));
}

absl::Status LineError(size_t line, const absl::Status& status) {
  return absl::Status(status.code(),
                      absl::StrCat("line ", line, ": ", status.message()));
}

}  // namespace

absl::CivilSecond Timestamp::Local() const {
  return absl::ToCivilSecond(instant, absl::FixedTimeZone(offset_seconds));
}

int Timestamp::SecondOfDay() const {
  const absl::CivilSecond cs = Local();
  return cs.hour() * 3600 + cs.minute() * 60 + cs.second();
}

absl::StatusOr<Timestamp> ParseTimestamp(absl::string_view text) {
  int year, month, day, hour, minute, second = 0;
  if (!ParseFixed(text, 0, 4, year) || text.size() < 16 || text[4] != '-' ||
      !ParseFixed(text, 5, 2, month) || text[7] != '-' ||
      !ParseFixed(text, 8, 2, day) || (text[10] != 'T' && text[10] != ' ') ||
      !ParseFixed(text, 11, 2, hour) || text[13] != ':' ||
      !ParseFixed(text, 14, 2, minute)) {
    return BadTimestamp(text, "expected YYYY-MM-DDTHH:MM[:SS[.fff]]<offset>");
  }
  size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!ParseFixed(text, pos + 1, 2, second)) {
      return BadTimestamp(text, "bad seconds field");
    }
    pos += 3;
  }
  int64_t nanos = 0;
  if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 9) {
        nanos = nanos * 10 + (text[pos] - '0');
        ++digits;
      }
      ++pos;
    }
    if (digits == 0) return BadTimestamp(text, "empty fractional seconds");
    for (; digits < 9; ++digits) nanos *= 10;
  }
  if (month < 1 || month > 12 || hour > 23 || minute > 59 || second > 59) {
    return BadTimestamp(text, "field out of range");
  }
  const absl::CivilSecond civil(year, month, day, hour, minute, second);
  if (civil.day() != day || civil.month() != month) {
    return BadTimestamp(text, "no such calendar date");
  }

  if (pos >= text.size()) {
    return BadTimestamp(text, "missing UTC offset");
  }
  int offset = 0;
  const char sign = text[pos];
  if (sign == 'Z' || sign == 'z') {
    ++pos;
  } else if (sign == '+' || sign == '-') {
    int oh = 0, om = 0;
    if (!ParseFixed(text, pos + 1, 2, oh)) {
      return BadTimestamp(text, "bad UTC offset");
    }
    pos += 3;
    if (pos < text.size()) {
      if (text[pos] == ':') ++pos;
      if (!ParseFixed(text, pos, 2, om)) {
        return BadTimestamp(text, "bad UTC offset minutes");
      }
      pos += 2;
    }
    if (oh > 23 || om > 59) return BadTimestamp(text, "UTC offset out of range");
    offset = (oh * 3600 + om * 60) * (sign == '-' ? -1 : 1);
  } else {
    return BadTimestamp(text, "missing UTC offset");
  }
  if (pos != text.size()) return BadTimestamp(text, "trailing characters");

  Timestamp ts;
  ts.offset_seconds = offset;
  ts.instant = absl::FromCivil(civil, absl::FixedTimeZone(offset)) +
               absl::Nanoseconds(nanos);
  return ts;
}

std::string FormatTimestamp(const Timestamp& ts) {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%E*S%Ez", ts.instant,
                          absl::FixedTimeZone(ts.offset_seconds));
}

absl::StatusOr<int> ParseTimeOfDay(absl::string_view text) {
  int hour, minute, second = 0;
  const bool ok = (text.size() == 5 || text.size() == 8) &&
                  ParseFixed(text, 0, 2, hour) && text[2] == ':' &&
                  ParseFixed(text, 3, 2, minute) &&
                  (text.size() == 5 ||
                   (text[5] == ':' && ParseFixed(text, 6, 2, second)));
  if (!ok || hour > 24 || minute > 59 || second > 59 ||
      (hour == 24 && (minute != 0 || second != 0))) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid time of day '", text, "', expected HH:MM[:SS]"));
  }
  return hour * 3600 + minute * 60 + second;
}

std::string FormatTimeOfDay(int seconds) {
  return absl::StrFormat("%02d:%02d:%02d", seconds / 3600, (seconds / 60) % 60,
                         seconds % 60);
}

absl::StatusOr<std::vector<OccupancyTrace>> ParseOccupancyCsv(
    std::istream& in) {
  std::string raw;
  size_t line = 0;
  bool saw_header = false;
  std::map<std::string, OccupancyTrace> by_space;
  while (std::getline(in, raw)) {
    ++line;
    absl::string_view row = absl::StripAsciiWhitespace(raw);
    if (row.empty()) continue;
    if (!saw_header) {
      if (row != kCsvHeader) {
        return LineError(line, absl::InvalidArgumentError(absl::StrCat(
                                   "expected header '", kCsvHeader, "'")));
      }
      saw_header = true;
      continue;
    }
    std::vector<absl::string_view> fields = absl::StrSplit(row, ',');
    if (fields.size() != 3) {
      return LineError(line, absl::InvalidArgumentError(absl::StrCat(
                                 "expected 3 fields, got ", fields.size())));
    }
    for (auto& f : fields) f = absl::StripAsciiWhitespace(f);

    auto ts = ParseTimestamp(fields[0]);
    if (!ts.ok()) return LineError(line, ts.status());
    if (fields[1].empty()) {
      return LineError(line, absl::InvalidArgumentError("empty space_id"));
    }
    if (fields[2] != "0" && fields[2] != "1") {
      return LineError(line, absl::InvalidArgumentError(absl::StrCat(
                                 "occupied must be 0 or 1, got '", fields[2],
                                 "'")));
    }

    OccupancyTrace& trace = by_space[std::string(fields[1])];
    trace.space_id = std::string(fields[1]);
    if (!trace.samples.empty()) {
      const absl::Time last = trace.samples.back().timestamp.instant;
      if (ts->instant == last) {
        return LineError(line, absl::InvalidArgumentError(absl::StrCat(
                                   "duplicate timestamp for space '",
                                   trace.space_id, "'")));
      }
      if (ts->instant < last) {
        return LineError(line, absl::InvalidArgumentError(absl::StrCat(
                                   "non-monotone timestamp for space '",
                                   trace.space_id, "'")));
      }
    }
    trace.samples.push_back(OccupancySample{*ts, fields[2] == "1"});
  }
  if (!saw_header) {
    return absl::InvalidArgumentError(
        absl::StrCat("empty input, expected header '", kCsvHeader, "'"));
  }
  std::vector<OccupancyTrace> traces;
  for (auto& [id, trace] : by_space) traces.push_back(std::move(trace));
  return traces;
}

absl::StatusOr<std::vector<OccupancyTrace>> IngestCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto traces = ParseOccupancyCsv(in);
  if (!traces.ok()) {
    return absl::Status(traces.status().code(),
                        absl::StrCat(path, ": ", traces.status().message()));
  }
  return traces;
}

absl::Status ValidateWorkHours(const WorkHours& hours) {
  if (hours.start_seconds < 0 || hours.end_seconds > 24 * 3600 ||
      hours.start_seconds >= hours.end_seconds) {
    return absl::InvalidArgumentError(absl::StrCat(
        "work hours must satisfy 00:00 <= start < end <= 24:00, got ",
        FormatTimeOfDay(hours.start_seconds), "-",
        FormatTimeOfDay(hours.end_seconds)));
  }
  return absl::OkStatus();
}

std::vector<ExtractedAttributes> ExtractAttributes(
    const OccupancyTrace& trace, const ExtractionOptions& options) {
  std::map<absl::CivilDay, std::vector<const OccupancySample*>> days;
  for (const OccupancySample& s : trace.samples) {
    const absl::CivilDay day(s.timestamp.Local() - options.day_start_seconds);
    days[day].push_back(&s);
  }

  std::vector<ExtractedAttributes> out;
  for (const auto& [day, samples] : days) {
    ExtractedAttributes attrs;
    attrs.space_id = trace.space_id;
    attrs.day = day;

    // Seconds since the record day's local midnight; past 24 h when the day
    // boundary is moved after midnight.
    const absl::CivilSecond midnight(day);
    auto day_time = [&midnight](const Timestamp& ts) {
      return static_cast<int>(ts.Local() - midnight);
    };
    int in_hours = 0;
    int occupied_in_hours = 0;
    for (const OccupancySample* s : samples) {
      const int tod = day_time(s->timestamp);
      if (tod >= options.work_hours.start_seconds &&
          tod < options.work_hours.end_seconds) {
        ++in_hours;
        occupied_in_hours += s->occupied;
      }
    }
    if (in_hours > 0) {
      attrs.occupancy_fraction =
          static_cast<double>(occupied_in_hours) / in_hours;
    }

    std::optional<absl::Time> pending_exit;
    std::optional<int> last_exit;
    double away_minutes = 0.0;
    int away_count = 0;
    for (size_t k = 1; k < samples.size(); ++k) {
      const bool before = samples[k - 1]->occupied;
      const bool now = samples[k]->occupied;
      const Timestamp& ts = samples[k]->timestamp;
      if (!before && now) {
        if (!attrs.start_time.has_value()) {
          attrs.start_time = day_time(ts);
          last_exit.reset();
        }
        if (pending_exit.has_value()) {
          away_minutes += absl::ToDoubleMinutes(ts.instant - *pending_exit);
          ++away_count;
          pending_exit.reset();
        }
      } else if (before && !now) {
        ++attrs.exit_count;
        last_exit = day_time(ts);
        pending_exit = ts.instant;
      }
    }
    attrs.end_time = last_exit;
    if (away_count > 0) attrs.mean_away_minutes = away_minutes / away_count;
    out.push_back(std::move(attrs));
  }
  return out;
}

}  // namespace osdp::pipeline
