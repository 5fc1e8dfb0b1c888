#include "cts/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cts {

std::string_view to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::C1: return "C1";
        case ViolationCode::C2: return "C2";
        case ViolationCode::C3: return "C3";
        case ViolationCode::C4: return "C4";
        case ViolationCode::C5: return "C5";
        case ViolationCode::C6: return "C6";
        case ViolationCode::E_NURSE_ASSIGN: return "E_NURSE_ASSIGN";
        case ViolationCode::E_NURSE_CAP: return "E_NURSE_CAP";
        case ViolationCode::E_DRUG: return "E_DRUG";
        case ViolationCode::E_LAST_SLOT: return "E_LAST_SLOT";
        case ViolationCode::R_FROZEN: return "R_FROZEN";
        case ViolationCode::R_ANTICIPATED: return "R_ANTICIPATED";
        case ViolationCode::R_UNAVAILABLE: return "R_UNAVAILABLE";
    }
    return "?";
}

namespace {

std::string reg_str(RegKey k) {
    return "(" + std::to_string(k.patient_id) + "," + std::to_string(k.order) + ")";
}

class Collector {
public:
    void add(ViolationCode code, std::vector<RegKey> regs, std::string message) {
        std::sort(regs.begin(), regs.end());
        out_.push_back({code, std::move(regs), std::move(message)});
    }

    std::vector<Violation> take() {
        std::sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
            return std::tie(a.code, a.regs, a.message) <
                   std::tie(b.code, b.regs, b.message);
        });
        return std::move(out_);
    }

private:
    std::vector<Violation> out_;
};

void check_references(const Instance& inst, const Schedule& sch) {
    std::set<SeatRef> seats;
    for (int id : inst.resources.beds) seats.insert({SeatType::bed, id});
    for (int id : inst.resources.chairs) seats.insert({SeatType::chair, id});
    for (const Assignment& a : sch.assignments) {
        inst.reg_of(a);  // throws on unknown registration
        if (a.seat && !seats.count(*a.seat))
            throw InputError("assignment " + reg_str(a.reg) +
                             " references unknown seat " +
                             std::string(to_string(a.seat->type)) + " " +
                             std::to_string(a.seat->id));
    }
}

bool on_grid(const Instance& inst, const Assignment& a) {
    return a.ts >= 1 && a.ts <= inst.grid.ts_count && a.day >= 1 &&
           (a.day <= inst.days || a.reg.order > 0);
}

}  // namespace

std::vector<Violation> validate_core(const Instance& inst, const Schedule& sch) {
    check_references(inst, sch);
    Collector out;

    // c1: exactly one assignment per registration, on the grid.
    std::map<RegKey, std::vector<const Assignment*>> by_reg;
    for (const Assignment& a : sch.assignments) by_reg[a.reg].push_back(&a);
    for (const Registration& r : inst.registrations) {
        auto it = by_reg.find(key_of(r));
        size_t n = it == by_reg.end() ? 0 : it->second.size();
        if (n == 0)
            out.add(ViolationCode::C1, {key_of(r)},
                    "registration " + reg_str(key_of(r)) + " is not assigned");
        else if (n > 1)
            out.add(ViolationCode::C1, {key_of(r)},
                    "registration " + reg_str(key_of(r)) + " is assigned " +
                        std::to_string(n) + " times");
    }
    for (const Assignment& a : sch.assignments) {
        if (!on_grid(inst, a))
            out.add(ViolationCode::C1, {a.reg},
                    "assignment " + reg_str(a.reg) + " lies off the grid (day " +
                        std::to_string(a.day) + ", ts " + std::to_string(a.ts) + ")");
    }

    for (const Assignment& a : sch.assignments) {
        const Registration& reg = inst.reg_of(a);

        // c2: a seat exactly when the therapy has positive duration.
        if (reg.phases.d4 > 0 && !a.seat)
            out.add(ViolationCode::C2, {a.reg},
                    "registration " + reg_str(a.reg) + " needs a seat (d4 = " +
                        std::to_string(reg.phases.d4) + ") but has none");
        if (reg.phases.d4 == 0 && a.seat)
            out.add(ViolationCode::C2, {a.reg},
                    "registration " + reg_str(a.reg) +
                        " has no therapy but occupies a seat");

        if (a.ts < 1 || a.ts > inst.grid.ts_count) continue;  // already a C1

        // c4: long therapies must start late.
        if (reg.phases.d4 > inst.long_threshold && a.ts < inst.long_min_ts)
            out.add(ViolationCode::C4, {a.reg},
                    "long therapy (d4 = " + std::to_string(reg.phases.d4) +
                        ") starts at ts " + std::to_string(a.ts) + " before ts " +
                        std::to_string(inst.long_min_ts));

        // c5: phases 1-3 must fit before the therapy start.
        int lead = reg.phases.d1 + reg.phases.d2 + reg.phases.d3;
        if (inst.grid.ats_of(a.ts) - lead < 1)
            out.add(ViolationCode::C5, {a.reg},
                    "phases of " + reg_str(a.reg) + " would start before the day " +
                        "opens (ats " + std::to_string(inst.grid.ats_of(a.ts) - lead) +
                        ")");
    }

    // c3: no two registrations share a seat during overlapping slots.
    std::map<std::pair<int, SeatRef>, std::vector<const Assignment*>> by_seat;
    for (const Assignment& a : sch.assignments)
        if (a.seat && a.ts >= 1 && a.ts <= inst.grid.ts_count)
            by_seat[{a.day, *a.seat}].push_back(&a);
    for (auto& [day_seat, users] : by_seat) {
        std::sort(users.begin(), users.end(),
                  [](const Assignment* a, const Assignment* b) {
                      return std::tie(a->ts, a->reg) < std::tie(b->ts, b->reg);
                  });
        for (size_t i = 0; i < users.size(); ++i) {
            for (size_t j = i + 1; j < users.size(); ++j) {
                if (users[i]->reg == users[j]->reg) continue;  // duplicate -> C1
                SlotRange ri = occupied_slots(inst, *users[i]);
                SlotRange rj = occupied_slots(inst, *users[j]);
                if (ri.intersects(rj))
                    out.add(ViolationCode::C3, {users[i]->reg, users[j]->reg},
                            std::string(to_string(day_seat.second.type)) + " " +
                                std::to_string(day_seat.second.id) + " on day " +
                                std::to_string(day_seat.first) + " is shared by " +
                                reg_str(users[i]->reg) + " and " +
                                reg_str(users[j]->reg));
            }
        }
    }

    // c6: consecutive orders must respect the waiting gap and the horizon.
    for (const Registration& r : inst.registrations) {
        if (r.order == 0) continue;
        auto cur = by_reg.find(key_of(r));
        auto prev = by_reg.find({r.patient_id, r.order - 1});
        if (cur == by_reg.end() || cur->second.size() != 1) continue;
        if (prev == by_reg.end() || prev->second.size() != 1) continue;
        int expected = prev->second[0]->day + r.waiting_days;
        int actual = cur->second[0]->day;
        if (actual != expected)
            out.add(ViolationCode::C6, {key_of(r), {r.patient_id, r.order - 1}},
                    "order " + std::to_string(r.order) + " of patient " +
                        std::to_string(r.patient_id) + " is on day " +
                        std::to_string(actual) + ", regimen requires day " +
                        std::to_string(expected));
        else if (actual > inst.days)
            out.add(ViolationCode::C6, {key_of(r)},
                    "order " + std::to_string(r.order) + " of patient " +
                        std::to_string(r.patient_id) + " falls past the horizon (day " +
                        std::to_string(actual) + " > " + std::to_string(inst.days) +
                        ")");
    }

    return out.take();
}

std::vector<Violation> validate_extended(const Instance& inst, const Schedule& sch) {
    if (inst.variant != Variant::extended)
        throw UsageError("validate_extended called on a non-extended instance");
    check_references(inst, sch);
    Collector out;

    std::set<int> nurse_ids(inst.resources.nurses.begin(),
                            inst.resources.nurses.end());
    int capacity = *inst.resources.nurse_capacity;

    // One nurse per registration.
    for (const Assignment& a : sch.assignments) {
        if (!a.nurse || !nurse_ids.count(*a.nurse))
            out.add(ViolationCode::E_NURSE_ASSIGN, {a.reg},
                    "registration " + reg_str(a.reg) +
                        " is not assisted by exactly one nurse");
    }

    // Per-slot nurse load, counting occupied therapy slots.
    std::map<std::pair<int, int>, std::vector<const Assignment*>> by_nurse_day;
    for (const Assignment& a : sch.assignments)
        if (a.nurse && nurse_ids.count(*a.nurse))
            by_nurse_day[{a.day, *a.nurse}].push_back(&a);
    for (auto& [nurse_day, cared] : by_nurse_day) {
        std::vector<int> load(inst.grid.ats_count + 1, 0);
        for (const Assignment* a : cared) {
            SlotRange r = occupied_slots(inst, *a);
            for (int s = std::max(1, r.first);
                 s <= std::min(inst.grid.ats_count, r.last); ++s)
                ++load[s];
        }
        for (int s = 1; s <= inst.grid.ats_count; ++s) {
            if (load[s] <= capacity) continue;
            std::vector<RegKey> regs;
            for (const Assignment* a : cared)
                if (occupied_slots(inst, *a).contains(s)) regs.push_back(a->reg);
            out.add(ViolationCode::E_NURSE_CAP, std::move(regs),
                    "nurse " + std::to_string(nurse_day.second) + " assists " +
                        std::to_string(load[s]) + " > " + std::to_string(capacity) +
                        " patients in ats slot " + std::to_string(s) + " on day " +
                        std::to_string(nurse_day.first));
            break;  // one report per nurse and day
        }
    }

    // Daily drug limits.
    std::map<std::pair<std::string, int>, std::vector<RegKey>> drug_use;
    for (const Assignment& a : sch.assignments) {
        const Registration& reg = inst.reg_of(a);
        if (reg.drug) drug_use[{*reg.drug, a.day}].push_back(a.reg);
    }
    for (auto& [drug_day, regs] : drug_use) {
        auto limit = inst.resources.drug_limits.find(drug_day);
        if (limit == inst.resources.drug_limits.end()) continue;
        if (static_cast<long long>(regs.size()) > limit->second)
            out.add(ViolationCode::E_DRUG, regs,
                    "drug \"" + drug_day.first + "\" used by " +
                        std::to_string(regs.size()) + " registrations on day " +
                        std::to_string(drug_day.second) + ", limit " +
                        std::to_string(limit->second));
    }

    // No therapy may start at the final start slot.
    for (const Assignment& a : sch.assignments)
        if (a.ts == inst.grid.ts_count)
            out.add(ViolationCode::E_LAST_SLOT, {a.reg},
                    "registration " + reg_str(a.reg) +
                        " starts at the last start slot ts " + std::to_string(a.ts));

    return out.take();
}

std::vector<Violation> validate_reschedule(const Instance& inst,
                                           const Schedule& old_schedule,
                                           const Schedule& new_schedule,
                                           const DisruptionSet& dis) {
    check_disruptions(inst, dis);
    Instance current = apply_disruptions(inst, dis);

    // A new-schedule row must come from the original instance or from the
    // replacement set; anything else is an input error, not a violation.
    std::set<RegKey> known;
    for (const Registration& r : inst.registrations) known.insert(key_of(r));
    for (const Registration& r : dis.replacements) known.insert(key_of(r));
    for (const Assignment& a : new_schedule.assignments)
        if (!known.count(a.reg))
            throw InputError("reschedule references unknown registration " +
                             reg_str(a.reg));

    Collector out;
    std::map<RegKey, const Assignment*> old_by_reg, new_by_reg;
    for (const Assignment& a : old_schedule.assignments) old_by_reg[a.reg] = &a;
    for (const Assignment& a : new_schedule.assignments) new_by_reg[a.reg] = &a;

    // Patients may not come on their unavailable days.
    for (const Assignment& a : new_schedule.assignments)
        if (patient_unavailable(dis, a.reg.patient_id, a.day))
            out.add(ViolationCode::R_UNAVAILABLE, {a.reg},
                    "patient " + std::to_string(a.reg.patient_id) +
                        " is scheduled on unavailable day " + std::to_string(a.day));

    std::optional<int> global_min = earliest_disruption_day(old_schedule, dis);

    // Nothing before the earliest disruption day may change.
    if (global_min) {
        for (const Assignment& a : old_schedule.assignments) {
            if (a.day >= *global_min) continue;
            auto it = new_by_reg.find(a.reg);
            if (it == new_by_reg.end() || !(*it->second == a))
                out.add(ViolationCode::R_FROZEN, {a.reg},
                        "assignment " + reg_str(a.reg) + " on day " +
                            std::to_string(a.day) +
                            " precedes the earliest disruption day " +
                            std::to_string(*global_min) + " and changed");
        }
        for (const Assignment& a : new_schedule.assignments) {
            if (a.day >= *global_min) continue;
            auto it = old_by_reg.find(a.reg);
            if (it == old_by_reg.end() || !(*it->second == a))
                out.add(ViolationCode::R_FROZEN, {a.reg},
                        "assignment " + reg_str(a.reg) + " entered frozen day " +
                            std::to_string(a.day) + " before disruption day " +
                            std::to_string(*global_min));
        }
    }

    // An unavailable patient keeps everything before their first
    // unavailable day (rows at or past a replacement cut excepted).
    for (const Assignment& a : old_schedule.assignments) {
        auto first_un = first_unavailable_day(dis, a.reg.patient_id);
        if (!first_un || a.day >= *first_un) continue;
        auto cut = replacement_cut(dis, a.reg.patient_id);
        if (cut && a.reg.order >= *cut) continue;
        auto it = new_by_reg.find(a.reg);
        if (it == new_by_reg.end() || !(*it->second == a))
            out.add(ViolationCode::R_FROZEN, {a.reg},
                    "assignment " + reg_str(a.reg) + " of patient " +
                        std::to_string(a.reg.patient_id) +
                        " precedes the patient's first unavailable day " +
                        std::to_string(*first_un) + " and changed");
    }

    // Undisrupted patients with an unchanged history keep their plan.
    std::set<int> patients;
    for (const auto& [key, a] : new_by_reg) patients.insert(key.patient_id);
    for (int pid : patients) {
        if (patient_disrupted(dis, pid)) continue;
        for (int order = 0;; ++order) {
            auto nw = new_by_reg.find({pid, order});
            auto od = old_by_reg.find({pid, order});
            if (nw == new_by_reg.end() && od == old_by_reg.end()) break;
            bool changed = nw == new_by_reg.end() || od == old_by_reg.end() ||
                           !(*nw->second == *od->second);
            if (changed) {
                out.add(ViolationCode::R_FROZEN, {{pid, order}},
                        "undisrupted patient " + std::to_string(pid) +
                            " has a changed assignment at order " +
                            std::to_string(order));
                break;  // later orders have a changed history
            }
        }
    }

    // Postpone-only for patients without a replacement regimen.
    for (const auto& [key, nw] : new_by_reg) {
        if (patient_has_replacement(dis, key.patient_id)) continue;
        auto od = old_by_reg.find(key);
        if (od != old_by_reg.end() && nw->day < od->second->day)
            out.add(ViolationCode::R_ANTICIPATED, {key},
                    "registration " + reg_str(key) + " moved earlier (day " +
                        std::to_string(od->second->day) + " -> " +
                        std::to_string(nw->day) + ")");
    }

    return out.take();
}

std::vector<Violation> validate_all(const Instance& inst, const Schedule& sch) {
    std::vector<Violation> out = validate_core(inst, sch);
    if (inst.variant == Variant::extended) {
        std::vector<Violation> ext = validate_extended(inst, sch);
        out.insert(out.end(), ext.begin(), ext.end());
    }
    return out;
}

}  // namespace cts
