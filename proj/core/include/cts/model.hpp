#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cts/errors.hpp"
#include "cts/time_grid.hpp"

namespace cts {

enum class SeatType : unsigned char { bed, chair };

inline const char* to_string(SeatType t) {
    return t == SeatType::bed ? "bed" : "chair";
}

// Durations of the four phases (reception, blood collection, medical
// check, therapy), all in ats units. Phases 2 and 3 are optional but
// linked: a blood collection implies a medical check.
struct PhaseDurations {
    int d1 = 1;
    int d2 = 0;
    int d3 = 0;
    int d4 = 0;

    bool operator==(const PhaseDurations&) const = default;
};

// One appointment request. A patient may carry several registrations
// (a regimen); `order` is the 0-based position in the chain and
// `waiting_days` the prescribed gap after the previous appointment.
struct Registration {
    int patient_id = 0;
    int order = 0;
    int waiting_days = 0;
    PhaseDurations phases;
    SeatType seat_pref = SeatType::chair;
    std::optional<int> priority;        // 1..3, extended instances only
    std::optional<std::string> drug;    // extended instances only

    bool operator==(const Registration&) const = default;
};

// Stable identity of a registration across schedules and files.
struct RegKey {
    int patient_id = 0;
    int order = 0;

    auto operator<=>(const RegKey&) const = default;
};

inline RegKey key_of(const Registration& r) { return {r.patient_id, r.order}; }

struct SeatRef {
    SeatType type = SeatType::chair;
    int id = 0;

    auto operator<=>(const SeatRef&) const = default;
};

struct ResourcePool {
    std::vector<int> beds;
    std::vector<int> chairs;
    std::vector<int> nurses;                 // extended only
    std::optional<int> nurse_capacity;       // K, extended only
    // (drug id, day) -> number of registrations that may use the drug that day
    std::map<std::pair<std::string, int>, long long> drug_limits;

    bool operator==(const ResourcePool&) const = default;
};

enum class Variant : unsigned char { daily, weekly, extended };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::daily: return "daily";
        case Variant::weekly: return "weekly";
        default: return "extended";
    }
}

struct Instance {
    TimeGrid grid;
    int days = 1;
    std::vector<Registration> registrations;
    ResourcePool resources;
    Variant variant = Variant::daily;
    int long_threshold = 50;   // d4 above this forces a late start
    int long_min_ts = 24;      // earliest ts for long therapies

    bool operator==(const Instance&) const = default;

    const Registration* find(RegKey key) const;
    // Throws InputError when the assignment references an unknown registration.
    const Registration& reg_of(const struct Assignment& a) const;
    // Patient ids in first-appearance order, each with its orders sorted.
    std::vector<std::vector<const Registration*>> chains() const;
};

// Verifies every structural invariant of an instance (phase linkage,
// contiguous orders, waiting days, variant-specific fields).
// Throws InputError on the first breach.
void check_instance(const Instance& inst);

// Placement of one registration: day, therapy start slot, and the seat
// (absent exactly when the therapy duration is zero).
struct Assignment {
    RegKey reg;
    int day = 1;
    int ts = 1;
    std::optional<SeatRef> seat;
    std::optional<int> nurse;

    bool operator==(const Assignment&) const = default;
};

struct Schedule {
    std::vector<Assignment> assignments;

    bool operator==(const Schedule&) const = default;
};

// Sorts assignments by (day, ts, patient, order) so equal schedules
// have equal byte representations.
void canonicalize(Schedule& s);

// Contiguous range of ats slots, empty when last < first.
struct SlotRange {
    int first = 1;
    int last = 0;

    bool empty() const { return last < first; }
    int length() const { return empty() ? 0 : last - first + 1; }
    bool contains(int slot) const { return slot >= first && slot <= last; }
    bool intersects(const SlotRange& o) const {
        return !empty() && !o.empty() && first <= o.last && o.first <= last;
    }
    bool operator==(const SlotRange&) const = default;
};

// ats slots occupied by the therapy phase: [2*ts .. 2*ts + d4 - 1],
// clipped at the end of the day; empty when d4 = 0.
SlotRange occupied_slots(const TimeGrid& grid, const Registration& reg,
                         const Assignment& a);
SlotRange occupied_slots(const Instance& inst, const Assignment& a);

// Start of phase 2 on the ats scale. `valid` is false when the slot
// falls before the start of the day, which the validator reports as a
// phase-ordering violation.
struct Phase2Start {
    int ats = 0;
    bool valid = false;

    bool operator==(const Phase2Start&) const = default;
};

// nullopt when the registration has no phase 2.
std::optional<Phase2Start> phase2_start(const TimeGrid& grid,
                                        const Registration& reg,
                                        const Assignment& a);
std::optional<Phase2Start> phase2_start(const Instance& inst, const Assignment& a);

}  // namespace cts
