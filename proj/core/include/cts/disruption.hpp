#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cts/model.hpp"

namespace cts {

// Events that invalidate an already published weekly schedule: days on
// which a patient cannot come, and doctor-issued replacement regimen
// rows keyed by (patient, order).
struct DisruptionSet {
    std::set<std::pair<int, int>> unavailable;  // (patient_id, day)
    std::vector<Registration> replacements;

    bool empty() const { return unavailable.empty() && replacements.empty(); }
    bool operator==(const DisruptionSet&) const = default;
};

// Throws InputError when a disruption references an unknown patient or
// the replacement rows of a patient do not form a contiguous tail range.
void check_disruptions(const Instance& inst, const DisruptionSet& dis);

// The post-disruption instance: replacement rows override same-keyed
// originals and define the authoritative tail of each touched chain
// (original orders beyond the replacement's last order are dropped,
// extra replacement orders extend the chain).
Instance apply_disruptions(const Instance& inst, const DisruptionSet& dis);

bool patient_unavailable(const DisruptionSet& dis, int patient_id, int day);
std::optional<int> first_unavailable_day(const DisruptionSet& dis, int patient_id);
bool patient_has_replacement(const DisruptionSet& dis, int patient_id);
bool replaced_key(const DisruptionSet& dis, RegKey key);
bool patient_disrupted(const DisruptionSet& dis, int patient_id);

// First order rewritten by the patient's replacement tail; orders at or
// beyond it follow the new regimen (or are dropped by it). nullopt when
// the patient has no replacement.
std::optional<int> replacement_cut(const DisruptionSet& dis, int patient_id);

// Minimum over all unavailability days and the old-schedule days of
// every replaced registration; nullopt when the set is empty.
std::optional<int> earliest_disruption_day(const Schedule& old_schedule,
                                           const DisruptionSet& dis);

}  // namespace cts
