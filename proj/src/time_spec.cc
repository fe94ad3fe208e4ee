// Copyright 2026 The Narrative Miner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "narrative/time_spec.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <regex>

#include "narrative/text.h"

namespace narrative {
namespace {

bool IsLeap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

Date Truncate(Date date, Granularity granularity) {
  if (granularity != Granularity::kDay) date.day = 1;
  if (granularity == Granularity::kYear) date.month = 1;
  return date;
}

Date LastDay(Date date, Granularity granularity) {
  switch (granularity) {
    case Granularity::kDay:
      return date;
    case Granularity::kMonth:
      return {date.year, date.month, DaysInMonth(date.year, date.month)};
    case Granularity::kYear:
      return {date.year, 12, 31};
  }
  return date;
}

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

int MonthFromName(std::string_view name) {
  const std::string lower = ToLower(name);
  for (size_t i = 0; i < kMonthNames.size(); ++i) {
    if (lower.size() >= 3 && kMonthNames[i].substr(0, 3) == lower.substr(0, 3)) {
      return static_cast<int>(i) + 1;
    }
  }
  return 0;
}

// A single date mention: the day range it denotes.
struct Mention {
  Date first;
  Date last;
};

std::vector<Mention> FindMentions(std::string_view text) {
  static const std::string kMonth =
      "(jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|"
      "aug(?:ust)?|sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|"
      "dec(?:ember)?)\\.?";
  static const std::regex kPattern(
      "\\b(\\d{4})-(\\d{2})-(\\d{2})\\b"                        // 1-3 iso day
      "|\\b(\\d{4})-(\\d{2})(?![\\d])"                          // 4-5 iso month
      "|\\b" + kMonth + "\\s+(\\d{1,2})(?:st|nd|rd|th)?,?\\s+(\\d{4})\\b"  // 6-8
      "|\\b(\\d{1,2})(?:st|nd|rd|th)?\\s+" + kMonth + ",?\\s+(\\d{4})\\b"  // 9-11
      "|\\b" + kMonth + ",?\\s+(\\d{4})\\b"                    // 12-13
      "|\\b(1[5-9]\\d\\d|20\\d\\d)(?![\\d])",                  // 14 year
      std::regex::ECMAScript | std::regex::icase);

  std::vector<Mention> mentions;
  const std::string input(text);
  for (auto it = std::sregex_iterator(input.begin(), input.end(), kPattern);
       it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    auto num = [&](int group) { return std::stoi(m[group].str()); };
    Date date;
    Granularity granularity = Granularity::kDay;
    if (m[1].matched) {
      date = {num(1), num(2), num(3)};
    } else if (m[4].matched) {
      date = {num(4), num(5), 1};
      granularity = Granularity::kMonth;
    } else if (m[6].matched) {
      date = {num(8), MonthFromName(m[6].str()), num(7)};
    } else if (m[9].matched) {
      date = {num(11), MonthFromName(m[10].str()), num(9)};
    } else if (m[12].matched) {
      date = {num(13), MonthFromName(m[12].str()), 1};
      granularity = Granularity::kMonth;
    } else {
      date = {num(14), 1, 1};
      granularity = Granularity::kYear;
    }
    if (!IsValidDate(date)) continue;
    mentions.push_back({date, LastDay(date, granularity)});
  }
  return mentions;
}

}  // namespace

bool IsValidDate(const Date& date) {
  return date.month >= 1 && date.month <= 12 && date.day >= 1 &&
         date.day <= DaysInMonth(date.year, date.month);
}

int DaysInMonth(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  if (month == 2 && IsLeap(year)) return 29;
  return kDays[month - 1];
}

long DaysFromCivil(const Date& date) {
  const long y = date.year - (date.month <= 2 ? 1 : 0);
  const long era = (y >= 0 ? y : y - 399) / 400;
  const long yoe = y - era * 400;
  const long mp = (date.month + 9) % 12;
  const long doy = (153 * mp + 2) / 5 + date.day - 1;
  const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

std::string_view TimeKindName(TimeKind kind) {
  switch (kind) {
    case TimeKind::kInstant: return "instant";
    case TimeKind::kInterval: return "interval";
    case TimeKind::kYear: return "year";
    case TimeKind::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view GranularityName(Granularity granularity) {
  switch (granularity) {
    case Granularity::kDay: return "day";
    case Granularity::kMonth: return "month";
    case Granularity::kYear: return "year";
  }
  return "day";
}

std::optional<TimeKind> ParseTimeKind(std::string_view name) {
  for (TimeKind k : {TimeKind::kInstant, TimeKind::kInterval, TimeKind::kYear,
                     TimeKind::kUnknown}) {
    if (TimeKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<Granularity> ParseGranularity(std::string_view name) {
  for (Granularity g :
       {Granularity::kDay, Granularity::kMonth, Granularity::kYear}) {
    if (GranularityName(g) == name) return g;
  }
  return std::nullopt;
}

TimeSpec TimeSpec::Year(int year) {
  return {TimeKind::kYear, Date{year, 1, 1}, std::nullopt, Granularity::kYear};
}

TimeSpec TimeSpec::Month(int year, int month) {
  return {TimeKind::kInstant, Date{year, month, 1}, std::nullopt,
          Granularity::kMonth};
}

TimeSpec TimeSpec::Day(int year, int month, int day) {
  return {TimeKind::kInstant, Date{year, month, day}, std::nullopt,
          Granularity::kDay};
}

TimeSpec TimeSpec::Interval(Date start, Date end, Granularity granularity) {
  return {TimeKind::kInterval, Truncate(start, granularity),
          Truncate(end, granularity), granularity};
}

TimeSpec TimeSpec::YearSpan(int first, int last) {
  return Interval({first, 1, 1}, {last, 1, 1}, Granularity::kYear);
}

TimeSpec TimeSpec::FromRange(Date first, Date last) {
  if (first.month == 1 && first.day == 1 && last.month == 12 &&
      last.day == 31) {
    if (first.year == last.year) return Year(first.year);
    return Interval(first, last, Granularity::kYear);
  }
  if (first.day == 1 && last.day == DaysInMonth(last.year, last.month)) {
    if (first.year == last.year && first.month == last.month) {
      return Month(first.year, first.month);
    }
    return Interval(first, last, Granularity::kMonth);
  }
  if (first == last) return Day(first.year, first.month, first.day);
  return Interval(first, last, Granularity::kDay);
}

std::optional<std::pair<Date, Date>> TimeSpec::Range() const {
  if (!Validate().empty() || kind == TimeKind::kUnknown) return std::nullopt;
  const Date first = Truncate(*start, granularity);
  const Date anchor = kind == TimeKind::kInterval ? *end : *start;
  return std::make_pair(first, LastDay(Truncate(anchor, granularity),
                                       granularity));
}

std::vector<std::string> TimeSpec::Validate() const {
  std::vector<std::string> problems;
  auto check_date = [&](const std::optional<Date>& d, const char* which) {
    if (d && !IsValidDate(*d)) {
      problems.push_back(std::string(which) + " date is not a calendar date");
    }
  };
  check_date(start, "start");
  check_date(end, "end");
  switch (kind) {
    case TimeKind::kInterval:
      if (!start || !end) {
        problems.emplace_back("interval requires start and end");
      } else if (*end < *start) {
        problems.emplace_back("interval start is after end");
      }
      break;
    case TimeKind::kInstant:
    case TimeKind::kYear:
      if (!start) problems.emplace_back("instant requires a start date");
      if (end && start && *end != *start) {
        problems.emplace_back("instant end must be absent or equal to start");
      }
      if (kind == TimeKind::kYear && granularity != Granularity::kYear) {
        problems.emplace_back("year kind requires year granularity");
      }
      break;
    case TimeKind::kUnknown:
      if (start || end) problems.emplace_back("unknown time carries dates");
      break;
  }
  return problems;
}

std::string FormatIsoDate(const Date& date, Granularity granularity) {
  char buffer[32];
  switch (granularity) {
    case Granularity::kYear:
      std::snprintf(buffer, sizeof(buffer), "%04d", date.year);
      break;
    case Granularity::kMonth:
      std::snprintf(buffer, sizeof(buffer), "%04d-%02d", date.year,
                    date.month);
      break;
    case Granularity::kDay:
      std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02d", date.year,
                    date.month, date.day);
      break;
  }
  return buffer;
}

std::optional<std::pair<Date, Granularity>> ParseIsoDate(
    std::string_view text) {
  static const std::regex kIso("^(-?\\d{4})(?:-(\\d{2})(?:-(\\d{2}))?)?$");
  const std::string input(text);
  std::smatch m;
  if (!std::regex_match(input, m, kIso)) return std::nullopt;
  Date date{std::stoi(m[1].str()), 1, 1};
  Granularity granularity = Granularity::kYear;
  if (m[2].matched) {
    date.month = std::stoi(m[2].str());
    granularity = Granularity::kMonth;
  }
  if (m[3].matched) {
    date.day = std::stoi(m[3].str());
    granularity = Granularity::kDay;
  }
  if (!IsValidDate(date)) return std::nullopt;
  return std::make_pair(date, granularity);
}

std::string FormatTimeSpec(const TimeSpec& time) {
  switch (time.kind) {
    case TimeKind::kUnknown:
      return "unknown";
    case TimeKind::kInterval:
      if (time.start && time.end) {
        return FormatIsoDate(*time.start, time.granularity) + "/" +
               FormatIsoDate(*time.end, time.granularity);
      }
      return "invalid";
    case TimeKind::kInstant:
    case TimeKind::kYear:
      if (time.start) return FormatIsoDate(*time.start, time.granularity);
      return "invalid";
  }
  return "unknown";
}

TimeSpec ParseTimeExpression(std::string_view text) {
  const std::vector<Mention> mentions = FindMentions(text);
  if (mentions.empty()) return TimeSpec::Unknown();
  Date first = mentions.front().first;
  Date last = mentions.front().last;
  if (mentions.size() >= 2) {
    first = std::min(first, mentions[1].first);
    last = std::max(last, mentions[1].last);
  }
  return TimeSpec::FromRange(first, last);
}

bool Overlaps(const TimeSpec& a, const TimeSpec& b) {
  const auto ra = a.Range();
  const auto rb = b.Range();
  if (!ra || !rb) return false;
  return !(ra->second < rb->first || rb->second < ra->first);
}

bool Contains(const TimeSpec& outer, const TimeSpec& inner) {
  const auto ro = outer.Range();
  const auto ri = inner.Range();
  if (!ro || !ri) return false;
  return ro->first <= ri->first && ri->second <= ro->second;
}

TimeSpec Hull(const std::vector<TimeSpec>& times) {
  std::optional<Date> first;
  std::optional<Date> last;
  for (const TimeSpec& t : times) {
    const auto r = t.Range();
    if (!r) continue;
    if (!first || r->first < *first) first = r->first;
    if (!last || *last < r->second) last = r->second;
  }
  if (!first) return TimeSpec::Unknown();
  return TimeSpec::FromRange(*first, *last);
}

bool EarlierThan(const TimeSpec& a, const TimeSpec& b) {
  const auto ra = a.Range();
  const auto rb = b.Range();
  if (!ra || !rb) return ra.has_value() && !rb.has_value();
  return *ra < *rb;
}

namespace {

std::optional<std::pair<Date, Date>> IsoDayRange(std::string_view text) {
  const auto parsed = ParseIsoDate(text);
  if (!parsed) return std::nullopt;
  return std::make_pair(parsed->first, LastDay(parsed->first, parsed->second));
}

}  // namespace

std::optional<TimeSpec> ParseIsoRange(std::string_view text) {
  const size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    const auto first = IsoDayRange(text.substr(0, slash));
    const auto last = IsoDayRange(text.substr(slash + 1));
    if (!first || !last || last->second < first->first) return std::nullopt;
    return TimeSpec::FromRange(first->first, last->second);
  }
  const auto parsed = ParseIsoDate(text);
  if (!parsed) return std::nullopt;
  const auto [date, granularity] = *parsed;
  switch (granularity) {
    case Granularity::kYear:
      return TimeSpec::Year(date.year);
    case Granularity::kMonth:
      return TimeSpec::Month(date.year, date.month);
    case Granularity::kDay:
      break;
  }
  return TimeSpec::Day(date.year, date.month, date.day);
}

}  // namespace narrative
