#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cts/disruption.hpp"
#include "cts/generator.hpp"
#include "cts/model.hpp"

namespace cts {

// Fact files hold ground facts `name(arg,...,arg).` with integer or
// double-quoted string arguments; `%` starts a line comment.
//
// Instance facts:   reg/8 (core), reg/10 (extended), day/1, ts/1, ats/1,
//                   bed/1, chair/1, nurse/1, nurseLimits/1, drug/3
// Schedule facts:   x/6 (or y/6 for reschedules), bed/3, chair/3, nurses/3
// Disruption facts: un/2, regN/8

// Builds an instance from a fact file. Grid and horizon facts are
// optional; when present they must form contiguous ranges from 1 and be
// mutually consistent. The variant is inferred: reg/10 facts mean
// extended, several days or positive orders mean weekly.
Instance parse_instance(std::string_view text);

std::string emit_instance(const Instance& inst);

// Parses `x(...)` / `y(...)` facts plus their seat and nurse facts into a
// schedule for the given instance. Rejects references to unknown
// registrations, seats, or nurses, and duration/preference columns that
// contradict the instance.
Schedule parse_schedule(std::string_view text, const Instance& inst);

// One fact per assignment, sorted by (day, ts, registration), followed by
// the seat facts and, on extended instances, the nurse facts. `predicate`
// is "x" for fresh schedules and "y" for reschedules.
std::string emit_schedule(const Instance& inst, const Schedule& sch,
                          std::string_view predicate = "x");

DisruptionSet parse_disruptions(std::string_view text, const Instance& inst);
std::string emit_disruptions(const DisruptionSet& dis);

struct ReportExtras {
    std::optional<int> unnecessary_moves;
};

// CSV report: one `day,ats,phase2_count` row per slot with a nonzero
// count, then a `metric,day,value` summary block with the cost levels,
// missed preferences, and per-day distribution statistics.
std::string emit_report(const Instance& inst, const Schedule& sch,
                        const ReportExtras& extras = {});

// Flat `key = value` generator parameter file; '#' starts a comment.
GenParams parse_params(std::string_view text);
std::string emit_params(const GenParams& params);

}  // namespace cts
