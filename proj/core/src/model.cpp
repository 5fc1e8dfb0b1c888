#include "cts/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cts {

const Registration* Instance::find(RegKey key) const {
    for (const Registration& r : registrations)
        if (r.patient_id == key.patient_id && r.order == key.order) return &r;
    return nullptr;
}

const Registration& Instance::reg_of(const Assignment& a) const {
    const Registration* r = find(a.reg);
    if (!r)
        throw InputError("assignment references unknown registration (" +
                         std::to_string(a.reg.patient_id) + "," +
                         std::to_string(a.reg.order) + ")");
    return *r;
}

std::vector<std::vector<const Registration*>> Instance::chains() const {
    std::vector<int> patient_order;
    std::map<int, std::vector<const Registration*>> by_patient;
    for (const Registration& r : registrations) {
        auto [it, inserted] = by_patient.try_emplace(r.patient_id);
        if (inserted) patient_order.push_back(r.patient_id);
        it->second.push_back(&r);
    }
    std::vector<std::vector<const Registration*>> out;
    out.reserve(patient_order.size());
    for (int pid : patient_order) {
        auto& chain = by_patient[pid];
        std::sort(chain.begin(), chain.end(),
                  [](const Registration* a, const Registration* b) {
                      return a->order < b->order;
                  });
        out.push_back(std::move(chain));
    }
    return out;
}

namespace {

void check_phases(const Registration& r) {
    const PhaseDurations& p = r.phases;
    auto fail = [&](const std::string& what) {
        throw InputError("registration (" + std::to_string(r.patient_id) + "," +
                         std::to_string(r.order) + "): " + what);
    };
    if (p.d1 < 0 || p.d2 < 0 || p.d3 < 0 || p.d4 < 0) fail("negative phase duration");
    if (p.d1 < 1) fail("phase 1 is mandatory (d1 >= 1)");
    if (p.d2 > 0 && p.d3 == 0) fail("phase 2 requires phase 3 (d2 > 0, d3 = 0)");
}

}  // namespace

void check_instance(const Instance& inst) {
    if (inst.grid.ats_count != 2 * inst.grid.ts_count)
        throw InputError("grid: ats_count must equal 2 * ts_count");
    if (inst.grid.ts_count < 1 || inst.grid.ats_count > 128)
        throw InputError("grid: ts_count must be in [1..64]");
    if (inst.days < 1) throw InputError("horizon must span at least one day");
    bool needs_seat = false;
    for (const Registration& r : inst.registrations)
        if (r.phases.d4 > 0) needs_seat = true;
    if (needs_seat && inst.resources.beds.empty() && inst.resources.chairs.empty())
        throw InputError("resource pool holds no bed or chair");

    auto check_ids = [](const std::vector<int>& ids, const char* what) {
        std::set<int> seen;
        for (int id : ids)
            if (!seen.insert(id).second)
                throw InputError(std::string("duplicate ") + what + " id " +
                                 std::to_string(id));
    };
    check_ids(inst.resources.beds, "bed");
    check_ids(inst.resources.chairs, "chair");
    check_ids(inst.resources.nurses, "nurse");

    bool extended = inst.variant == Variant::extended;
    bool has_nurse_fields =
        !inst.resources.nurses.empty() || inst.resources.nurse_capacity.has_value();
    if (extended) {
        if (inst.resources.nurses.empty() || !inst.resources.nurse_capacity)
            throw InputError("extended instance requires nurses and nurseLimits");
        if (*inst.resources.nurse_capacity < 1)
            throw InputError("nurse capacity must be positive");
        if (inst.days != 1) throw InputError("extended instance must have days = 1");
    } else if (has_nurse_fields) {
        throw InputError("nurse fields are only allowed on extended instances");
    }

    std::map<int, std::set<int>> orders_seen;
    for (const Registration& r : inst.registrations) {
        if (r.patient_id < 1)
            throw InputError("registration patient id must be positive");
        if (r.order < 0) throw InputError("registration order must be >= 0");
        check_phases(r);
        if (r.order == 0 && r.waiting_days != 0)
            throw InputError("order-0 registration must have waiting_days = 0");
        if (r.order > 0 && r.waiting_days < 1)
            throw InputError("later orders must wait at least one day");
        if (inst.variant == Variant::daily && r.order != 0)
            throw InputError("daily instance admits order-0 registrations only");
        if (extended && (!r.priority || !r.drug))
            throw InputError("extended registration must carry priority and drug");
        if (r.priority && (*r.priority < 1 || *r.priority > 3))
            throw InputError("priority must be 1, 2, or 3");
        if (!orders_seen[r.patient_id].insert(r.order).second)
            throw InputError("duplicate registration (" +
                             std::to_string(r.patient_id) + "," +
                             std::to_string(r.order) + ")");
    }
    for (const auto& [pid, orders] : orders_seen) {
        int expect = 0;
        for (int o : orders) {
            if (o != expect)
                throw InputError("patient " + std::to_string(pid) +
                                 ": orders must form a contiguous prefix 0..k");
            ++expect;
        }
    }
}

void canonicalize(Schedule& s) {
    std::sort(s.assignments.begin(), s.assignments.end(),
              [](const Assignment& a, const Assignment& b) {
                  return std::tie(a.day, a.ts, a.reg.patient_id, a.reg.order) <
                         std::tie(b.day, b.ts, b.reg.patient_id, b.reg.order);
              });
}

SlotRange occupied_slots(const TimeGrid& grid, const Registration& reg,
                         const Assignment& a) {
    if (reg.phases.d4 == 0) return SlotRange{1, 0};
    int start = grid.ats_of(a.ts);
    int last = std::min(start + reg.phases.d4 - 1, grid.ats_count);
    return SlotRange{start, last};
}

SlotRange occupied_slots(const Instance& inst, const Assignment& a) {
    return occupied_slots(inst.grid, inst.reg_of(a), a);
}

std::optional<Phase2Start> phase2_start(const TimeGrid& grid,
                                        const Registration& reg,
                                        const Assignment& a) {
    if (reg.phases.d2 == 0) return std::nullopt;
    int ats = grid.ats_of(a.ts) - reg.phases.d3 - reg.phases.d2;
    return Phase2Start{ats, ats >= 1};
}

std::optional<Phase2Start> phase2_start(const Instance& inst, const Assignment& a) {
    return phase2_start(inst.grid, inst.reg_of(a), a);
}

}  // namespace cts
