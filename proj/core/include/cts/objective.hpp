#pragma once

#include <vector>

#include "cts/cost.hpp"
#include "cts/disruption.hpp"
#include "cts/model.hpp"

namespace cts {

// Number of seat-occupying registrations placed on the other seat type
// than they asked for. Zero-duration therapies never count.
long long missed_preferences(const Instance& inst, const Schedule& sch);

// Per ats slot, how many registrations start phase 2 there on the given
// day. Indexed by slot, entry 0 unused; slots outside the day are ignored.
std::vector<int> phase2_histogram(const Instance& inst, const Schedule& sch, int day);

struct DayStats {
    int max_bin = 0;
    int min_nonzero_bin = 0;  // 0 when no bin is positive
    int phase2_count = 0;

    bool operator==(const DayStats&) const = default;
};

DayStats day_stats(const Instance& inst, const Schedule& sch, int day);

// The lexicographic objective:
//   level 7  missed seat preferences
//   level 6  sum over days of the tallest phase-2 bin
//   level 5  sum over days of (tallest bin - smallest nonzero bin)
//   level 4  max over days of the phase-2 patient count
// Extended instances add the priority start-slot sums:
//   level 3/2/1  sum of ts over order-0 registrations of priority 1/2/3
CostVector cost_vector(const Instance& inst, const Schedule& sch);

// Rescheduling objective:
//   level 8  sum over consecutive-order pairs of |regimen gap - actual gap|
//            (the replacement row's gap where one exists)
//   level 7  sum over patients of |new first day - old first day|,
//            plus the missed preferences of the new schedule
CostVector resched_cost(const Instance& inst, const Schedule& old_schedule,
                        const Schedule& new_schedule, const DisruptionSet& dis);

}  // namespace cts
