#pragma once

#include <vector>

#include "cts/disruption.hpp"
#include "cts/model.hpp"
#include "cts/solver.hpp"

namespace cts {

// Assignments a reschedule must reproduce verbatim: everything strictly
// before the earliest disruption day, plus, for each unavailable patient,
// their own assignments before their first unavailable day (replaced
// registrations excepted). With no disruptions the whole old schedule is
// frozen.
std::vector<Assignment> frozen_prefix(const Schedule& old_schedule,
                                      const DisruptionSet& dis);

struct RescheduleResult {
    SolveResult::Status status = SolveResult::Status::no_solution;
    Schedule schedule;
    CostVector cost;  // matches resched_cost
    // Patients with neither an unavailability nor a regimen change whose
    // first appointment moved; an optimal reschedule has none.
    int unnecessary_moves = 0;
    std::vector<RegKey> unplaceable;  // when infeasible
    std::string reason;
    std::vector<Incumbent> incumbents;
};

// Rebuilds the weekly schedule after disruptions: the frozen prefix and
// every undisrupted patient stay untouched, affected chains are postponed
// onto feasible days (following the replacement regimen where one
// exists), and the rescheduling cost is minimized by the same anytime
// contract as solve.
RescheduleResult reschedule(const Instance& inst, const Schedule& old_schedule,
                            const DisruptionSet& dis, const SolverConfig& cfg);

}  // namespace cts
