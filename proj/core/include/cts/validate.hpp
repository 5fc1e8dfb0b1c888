#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cts/disruption.hpp"
#include "cts/model.hpp"

namespace cts {

enum class ViolationCode {
    C1,  // registration not assigned exactly once (or placed off the grid)
    C2,  // seat present/absent in conflict with the therapy duration
    C3,  // two registrations share a seat during overlapping slots
    C4,  // long therapy starts before the late-start boundary
    C5,  // earlier phases would begin before the day opens
    C6,  // consecutive orders violate the waiting gap or the horizon
    E_NURSE_ASSIGN,  // registration lacks exactly one nurse
    E_NURSE_CAP,     // a nurse covers more than K patients in one slot
    E_DRUG,          // daily drug limit exceeded
    E_LAST_SLOT,     // therapy starts at the final start slot
    R_FROZEN,        // a frozen assignment changed
    R_ANTICIPATED,   // an appointment moved earlier than planned
    R_UNAVAILABLE,   // patient scheduled on an unavailable day
};

std::string_view to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    std::vector<RegKey> regs;  // at least one, sorted
    std::string message;

    bool operator==(const Violation&) const = default;
};

// Checks conditions c1-c6 for any variant. The returned list is complete,
// deterministic, and sorted by (code, first registration). Throws
// InputError when the schedule references an unknown registration or an
// unknown seat.
std::vector<Violation> validate_core(const Instance& inst, const Schedule& sch);

// Extended-variant checks: nurse presence, nurse per-slot capacity, drug
// limits, last-slot prohibition. Throws UsageError on non-extended
// instances.
std::vector<Violation> validate_extended(const Instance& inst, const Schedule& sch);

// Rescheduling requirements: frozen prefix preserved, undisrupted
// patients untouched, postpone-only, unavailable days avoided.
std::vector<Violation> validate_reschedule(const Instance& inst,
                                           const Schedule& old_schedule,
                                           const Schedule& new_schedule,
                                           const DisruptionSet& dis);

// validate_core plus validate_extended when the variant calls for it.
std::vector<Violation> validate_all(const Instance& inst, const Schedule& sch);

}  // namespace cts
