#include "cts/objective.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace cts {

long long missed_preferences(const Instance& inst, const Schedule& sch) {
    long long missed = 0;
    for (const Assignment& a : sch.assignments) {
        const Registration& reg = inst.reg_of(a);
        if (reg.phases.d4 > 0 && a.seat && a.seat->type != reg.seat_pref) ++missed;
    }
    return missed;
}

std::vector<int> phase2_histogram(const Instance& inst, const Schedule& sch, int day) {
    std::vector<int> bins(inst.grid.ats_count + 1, 0);
    for (const Assignment& a : sch.assignments) {
        if (a.day != day) continue;
        auto p2 = phase2_start(inst, a);
        if (p2 && p2->ats >= 1 && p2->ats <= inst.grid.ats_count) ++bins[p2->ats];
    }
    return bins;
}

DayStats day_stats(const Instance& inst, const Schedule& sch, int day) {
    std::vector<int> bins = phase2_histogram(inst, sch, day);
    DayStats st;
    for (size_t i = 1; i < bins.size(); ++i) {
        int n = bins[i];
        st.max_bin = std::max(st.max_bin, n);
        if (n > 0 && (st.min_nonzero_bin == 0 || n < st.min_nonzero_bin))
            st.min_nonzero_bin = n;
        st.phase2_count += n;
    }
    return st;
}

CostVector cost_vector(const Instance& inst, const Schedule& sch) {
    long long sum_max = 0, sum_spread = 0, max_day_count = 0;
    for (int day = 1; day <= inst.days; ++day) {
        DayStats st = day_stats(inst, sch, day);
        sum_max += st.max_bin;
        sum_spread += st.max_bin - st.min_nonzero_bin;
        max_day_count = std::max<long long>(max_day_count, st.phase2_count);
    }

    std::vector<CostVector::Entry> entries{
        {7, missed_preferences(inst, sch)},
        {6, sum_max},
        {5, sum_spread},
        {4, max_day_count},
    };

    if (inst.variant == Variant::extended) {
        long long prio_ts[4] = {0, 0, 0, 0};
        for (const Assignment& a : sch.assignments) {
            const Registration& reg = inst.reg_of(a);
            if (reg.order == 0 && reg.priority) prio_ts[*reg.priority] += a.ts;
        }
        entries.push_back({3, prio_ts[1]});
        entries.push_back({2, prio_ts[2]});
        entries.push_back({1, prio_ts[3]});
    }
    return CostVector(std::move(entries));
}

CostVector resched_cost(const Instance& inst, const Schedule& old_schedule,
                        const Schedule& new_schedule, const DisruptionSet& dis) {
    Instance current = apply_disruptions(inst, dis);

    std::map<RegKey, int> new_day;
    for (const Assignment& a : new_schedule.assignments) new_day[a.reg] = a.day;
    std::map<RegKey, int> old_day;
    for (const Assignment& a : old_schedule.assignments) old_day[a.reg] = a.day;

    // Gap deviations between consecutive orders, against the regimen in
    // force after the disruptions.
    long long gap_dev = 0;
    for (const Registration& r : current.registrations) {
        if (r.order == 0) continue;
        auto cur = new_day.find(key_of(r));
        auto prev = new_day.find({r.patient_id, r.order - 1});
        if (cur == new_day.end() || prev == new_day.end()) continue;
        long long actual = cur->second - prev->second;
        gap_dev += std::llabs(static_cast<long long>(r.waiting_days) - actual);
    }

    // First-appointment displacement per patient.
    long long first_moves = 0;
    for (const auto& [key, day] : new_day) {
        if (key.order != 0) continue;
        auto it = old_day.find(key);
        if (it != old_day.end()) first_moves += std::llabs((long long)day - it->second);
    }

    long long missed = missed_preferences(current, new_schedule);
    return CostVector({{8, gap_dev}, {7, first_moves + missed}});
}

}  // namespace cts
