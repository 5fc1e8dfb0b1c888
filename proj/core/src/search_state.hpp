#pragma once

// Solver-internal machinery: a compiled view of an instance and an
// incrementally evaluated partial schedule. Not part of the public API.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cts/cost.hpp"
#include "cts/model.hpp"

namespace cts::detail {

// Occupancy bitmask over at most 128 ats slots.
struct Bits128 {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    static Bits128 range(int first, int last);  // 1-based, inclusive
    bool intersects(const Bits128& o) const {
        return (lo & o.lo) != 0 || (hi & o.hi) != 0;
    }
    void add(const Bits128& o) {
        lo |= o.lo;
        hi |= o.hi;
    }
    void remove(const Bits128& o) {
        lo &= ~o.lo;
        hi &= ~o.hi;
    }
};

// Cross-referenced, index-based view of an instance.
struct Problem {
    explicit Problem(const Instance& instance);

    const Instance& inst;
    bool extended;

    std::vector<const Registration*> regs;  // sorted by (patient, order)
    std::map<RegKey, int> index_of;
    std::vector<std::vector<int>> chains;   // per patient, ascending order
    std::vector<int> chain_of;              // reg -> chain
    std::vector<int> chain_span;            // sum of waiting days per chain
    std::vector<int> day_offset;            // reg day = chain day0 + offset

    std::vector<SeatRef> seats;             // beds first, then chairs, by id
    int bed_count = 0;

    std::vector<int> nurse_ids;
    int nurse_capacity = 0;                 // 0 when not extended

    std::vector<std::string> drug_names;
    std::vector<int> drug_of;               // reg -> drug index or -1
    std::vector<std::vector<long long>> drug_limit;  // [drug][day], -1 = unlimited

    std::vector<int> ts_lo, ts_hi;          // feasible ts bounds per reg
    std::vector<Bits128> occ_cache;         // occupancy per (reg, ts); see occ()

    const Bits128& occ(int reg, int ts) const {
        return occ_cache[static_cast<size_t>(reg) * (inst.grid.ts_count + 1) + ts];
    }
    SlotRange occ_range(int reg, int ts) const;
    int seat_index(const SeatRef& seat) const;  // -1 when unknown
};

struct Placement {
    bool placed = false;
    int day = 0;
    int ts = 0;
    int seat = -1;  // index into Problem::seats, -1 = no seat
};

// A partial schedule with O(day) incremental objective bookkeeping.
// State::cost() agrees with objective::cost_vector on complete schedules.
class State {
public:
    explicit State(const Problem& prob);

    const Problem& problem() const { return *prob_; }
    bool placed(int reg) const { return placements_[reg].placed; }
    const Placement& placement(int reg) const { return placements_[reg]; }
    int placed_count() const { return placed_count_; }

    bool seat_free(int seat, int day, const Bits128& occ) const;
    // Lowest-id free seat of a type; -1 when none.
    int first_free_seat(SeatType type, int day, const Bits128& occ) const;
    // Seat-time units currently booked on a day (cost ties in greedy day
    // choices break toward the lightest days).
    long long day_seat_time(int day) const { return day_seat_time_[day]; }
    // Aggregate nurse capacity (nurses * K patients per slot). Session
    // windows are intervals, so per-slot totals within the aggregate cap
    // always admit a concrete one-nurse-per-patient assignment; it is
    // derived by a start-ordered sweep in to_schedule().
    bool nurse_capacity_fits(int reg, int day, int ts) const;
    bool drug_fits(int reg, int day) const;

    // Full feasibility of one placement against the current state
    // (seat conflicts, ts bounds, nurse capacity, drug limits).
    bool can_place(int reg, int day, int ts, int seat) const;
    void place(int reg, int day, int ts, int seat);
    void unplace(int reg);

    CostVector cost() const;
    long long missed_prefs() const { return missed_prefs_; }
    Schedule to_schedule() const;
    void load(const Schedule& sch);  // throws InputError on conflicts

private:
    struct DayStatsCache {
        int max_bin = 0;
        int min_nonzero = 0;
        int phase2_count = 0;
        bool dirty = false;
    };

    void refresh_day(int day) const;

    const Problem* prob_;
    std::vector<Placement> placements_;
    int placed_count_ = 0;

    std::vector<std::vector<Bits128>> seat_busy_;  // [day][seat]
    std::vector<std::vector<int>> nurse_load_;     // [day][ats], aggregate
    std::vector<std::vector<int>> drug_used_;      // [day][drug]
    std::vector<long long> day_seat_time_;
    mutable std::vector<std::vector<int>> hist_;   // [day][ats]
    mutable std::vector<DayStatsCache> day_stats_;
    long long missed_prefs_ = 0;
    long long prio_ts_[4] = {0, 0, 0, 0};
};

// A deterministic, sound (never false-positive) infeasibility screen.
struct InfeasibilityReport {
    std::vector<RegKey> witness;
    std::string reason;
};
std::optional<InfeasibilityReport> static_infeasibility(const Problem& prob);

struct Choice {
    int ts = -1;
    int seat = -1;
};

// Best feasible placement of one registration on a fixed day under the
// current state, by the full core cost vector; ties fall to the smallest
// ts, then the lowest seat id.
std::optional<std::pair<Choice, CostVector>> best_placement_on_day(State& st,
                                                                   int reg,
                                                                   int day);

}  // namespace cts::detail
