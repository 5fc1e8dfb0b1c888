#include "cts/disruption.hpp"

#include <algorithm>
#include <map>

namespace cts {

namespace {

std::map<int, std::vector<const Registration*>> replacement_chains(
    const DisruptionSet& dis) {
    std::map<int, std::vector<const Registration*>> out;
    for (const Registration& r : dis.replacements) out[r.patient_id].push_back(&r);
    for (auto& [pid, rows] : out)
        std::sort(rows.begin(), rows.end(),
                  [](const Registration* a, const Registration* b) {
                      return a->order < b->order;
                  });
    return out;
}

}  // namespace

void check_disruptions(const Instance& inst, const DisruptionSet& dis) {
    std::set<int> known;
    for (const Registration& r : inst.registrations) known.insert(r.patient_id);

    for (const auto& [pid, day] : dis.unavailable) {
        if (!known.count(pid))
            throw InputError("unavailability references unknown patient " +
                             std::to_string(pid));
        if (day < 1)
            throw InputError("unavailability day must be >= 1");
    }

    for (const auto& [pid, rows] : replacement_chains(dis)) {
        if (!known.count(pid))
            throw InputError("replacement references unknown patient " +
                             std::to_string(pid));
        int max_old_order = -1;
        for (const Registration& r : inst.registrations)
            if (r.patient_id == pid) max_old_order = std::max(max_old_order, r.order);
        // Rows must be contiguous and start inside or right after the
        // original chain, so the spliced chain stays a prefix 0..k.
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i]->order != rows[i - 1]->order + 1)
                throw InputError("replacement orders for patient " +
                                 std::to_string(pid) + " are not contiguous");
        if (rows.front()->order > max_old_order + 1 || rows.front()->order < 0)
            throw InputError("replacement tail for patient " + std::to_string(pid) +
                             " does not attach to the original chain");
        for (const Registration* r : rows) {
            if (r->order == 0 && r->waiting_days != 0)
                throw InputError("order-0 replacement must have waiting_days = 0");
            if (r->order > 0 && r->waiting_days < 1)
                throw InputError("replacement orders must wait at least one day");
        }
    }
}

Instance apply_disruptions(const Instance& inst, const DisruptionSet& dis) {
    check_disruptions(inst, dis);
    auto tails = replacement_chains(dis);

    Instance out = inst;
    out.registrations.clear();
    for (const Registration& r : inst.registrations) {
        auto it = tails.find(r.patient_id);
        if (it != tails.end() && r.order >= it->second.front()->order)
            continue;  // replaced or dropped by the authoritative tail
        out.registrations.push_back(r);
    }
    for (const auto& [pid, rows] : tails)
        for (const Registration* r : rows) out.registrations.push_back(*r);

    std::sort(out.registrations.begin(), out.registrations.end(),
              [](const Registration& a, const Registration& b) {
                  return std::tie(a.patient_id, a.order) <
                         std::tie(b.patient_id, b.order);
              });
    check_instance(out);
    return out;
}

bool patient_unavailable(const DisruptionSet& dis, int patient_id, int day) {
    return dis.unavailable.count({patient_id, day}) > 0;
}

std::optional<int> first_unavailable_day(const DisruptionSet& dis, int patient_id) {
    std::optional<int> first;
    for (const auto& [pid, day] : dis.unavailable)
        if (pid == patient_id && (!first || day < *first)) first = day;
    return first;
}

bool patient_has_replacement(const DisruptionSet& dis, int patient_id) {
    for (const Registration& r : dis.replacements)
        if (r.patient_id == patient_id) return true;
    return false;
}

bool replaced_key(const DisruptionSet& dis, RegKey key) {
    for (const Registration& r : dis.replacements)
        if (r.patient_id == key.patient_id && r.order == key.order) return true;
    return false;
}

bool patient_disrupted(const DisruptionSet& dis, int patient_id) {
    return first_unavailable_day(dis, patient_id).has_value() ||
           patient_has_replacement(dis, patient_id);
}

std::optional<int> replacement_cut(const DisruptionSet& dis, int patient_id) {
    std::optional<int> cut;
    for (const Registration& r : dis.replacements)
        if (r.patient_id == patient_id && (!cut || r.order < *cut)) cut = r.order;
    return cut;
}

std::optional<int> earliest_disruption_day(const Schedule& old_schedule,
                                           const DisruptionSet& dis) {
    std::optional<int> min_day;
    auto consider = [&](int day) {
        if (!min_day || day < *min_day) min_day = day;
    };
    for (const auto& [pid, day] : dis.unavailable) consider(day);
    for (const Registration& r : dis.replacements)
        for (const Assignment& a : old_schedule.assignments)
            if (a.reg == key_of(r)) consider(a.day);
    return min_day;
}

}  // namespace cts
