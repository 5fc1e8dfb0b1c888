#include "cts/resched.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include "cts/objective.hpp"
#include "search_state.hpp"

namespace cts {

using detail::Problem;
using detail::State;

std::vector<Assignment> frozen_prefix(const Schedule& old_schedule,
                                      const DisruptionSet& dis) {
    Schedule sorted = old_schedule;
    canonicalize(sorted);
    if (dis.empty()) return sorted.assignments;

    std::optional<int> gmin = earliest_disruption_day(old_schedule, dis);
    std::vector<Assignment> out;
    for (const Assignment& a : sorted.assignments) {
        auto cut = replacement_cut(dis, a.reg.patient_id);
        if (cut && a.reg.order >= *cut) continue;  // row follows the new regimen
        if (gmin && a.day < *gmin) {
            out.push_back(a);
            continue;
        }
        auto first_un = first_unavailable_day(dis, a.reg.patient_id);
        if (first_un && a.day < *first_un) out.push_back(a);
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Segment {
    int patient = 0;
    std::vector<int> regs;        // Problem indexes, ascending order
    int anchor_day = 0;           // day of the pinned previous order, 0 if none
    std::vector<std::vector<int>> day_vectors;  // sorted by cost contribution
    std::vector<std::pair<long long, long long>> vector_scores;  // (dev, move0)
};

struct Context {
    const Problem* prob = nullptr;
    const DisruptionSet* dis = nullptr;
    std::map<RegKey, Assignment> old_by_key;
    std::map<int, int> old_first_day;
    int gmin = 1;
};

CostVector resched_state_cost(const State& st, const Context& ctx) {
    const Problem& prob = *ctx.prob;
    long long dev = 0, moves = 0;
    for (const auto& chain : prob.chains) {
        for (size_t i = 0; i < chain.size(); ++i) {
            int reg = chain[i];
            if (!st.placed(reg)) continue;
            const Registration& r = *prob.regs[reg];
            if (i == 0) {
                auto it = ctx.old_first_day.find(r.patient_id);
                if (it != ctx.old_first_day.end())
                    moves += std::llabs(
                        (long long)st.placement(reg).day - it->second);
            } else if (st.placed(chain[i - 1])) {
                long long gap = st.placement(reg).day -
                                st.placement(chain[i - 1]).day;
                dev += std::llabs((long long)r.waiting_days - gap);
            }
        }
    }
    return CostVector({{8, dev}, {7, moves + st.missed_prefs()}});
}

// All day vectors a segment may legally take: strictly increasing days
// inside the horizon, never on the patient's unavailable days, never
// inside the frozen region, and postpone-only unless the regimen was
// replaced. Sorted by (gap deviation, first-move distance, days).
void enumerate_vectors(const Context& ctx, Segment& seg) {
    const Problem& prob = *ctx.prob;
    bool postpone_only = !patient_has_replacement(*ctx.dis, seg.patient);

    struct Scored {
        std::vector<int> days;
        long long dev;
        long long move0;
    };
    std::vector<Scored> found;
    std::vector<int> days(seg.regs.size());

    auto recurse = [&](auto&& self, size_t idx, int prev_day, long long dev,
                       long long move0) -> void {
        if (idx == seg.regs.size()) {
            found.push_back({days, dev, move0});
            return;
        }
        int reg = seg.regs[idx];
        const Registration& r = *prob.regs[reg];
        int lo = 1;
        if (idx > 0 || seg.anchor_day > 0)
            lo = (idx > 0 ? days[idx - 1] : seg.anchor_day) + 1;
        lo = std::max(lo, ctx.gmin);
        auto old_it = ctx.old_by_key.find(key_of(r));
        if (postpone_only && old_it != ctx.old_by_key.end())
            lo = std::max(lo, old_it->second.day);
        for (int day = lo; day <= prob.inst.days; ++day) {
            if (patient_unavailable(*ctx.dis, seg.patient, day)) continue;
            long long d = dev, m = move0;
            if (r.order > 0) {
                int prev = idx > 0 ? days[idx - 1] : seg.anchor_day;
                d += std::llabs((long long)r.waiting_days - (day - prev));
            } else {
                auto it = ctx.old_first_day.find(seg.patient);
                if (it != ctx.old_first_day.end())
                    m += std::llabs((long long)day - it->second);
            }
            days[idx] = day;
            self(self, idx + 1, day, d, m);
        }
    };
    recurse(recurse, 0, 0, 0, 0);

    std::stable_sort(found.begin(), found.end(), [](const Scored& a, const Scored& b) {
        return std::tie(a.dev, a.move0, a.days) < std::tie(b.dev, b.move0, b.days);
    });
    for (Scored& s : found) {
        seg.day_vectors.push_back(std::move(s.days));
        seg.vector_scores.push_back({s.dev, s.move0});
    }
}

// Places one segment on the given days; prefers the old placement when a
// link lands on its old day. Reverts and returns false when a link does
// not fit.
bool place_segment(State& st, const Context& ctx, const Segment& seg,
                   const std::vector<int>& days) {
    const Problem& prob = *ctx.prob;
    for (size_t i = 0; i < seg.regs.size(); ++i) {
        int reg = seg.regs[i];
        bool placed = false;
        auto old_it = ctx.old_by_key.find(key_of(*prob.regs[reg]));
        if (old_it != ctx.old_by_key.end() && old_it->second.day == days[i]) {
            const Assignment& a = old_it->second;
            int seat = a.seat ? prob.seat_index(*a.seat) : -1;
            if ((!a.seat || seat >= 0) && st.can_place(reg, a.day, a.ts, seat)) {
                st.place(reg, a.day, a.ts, seat);
                placed = true;
            }
        }
        if (!placed) {
            auto choice = detail::best_placement_on_day(st, reg, days[i]);
            if (!choice) {
                for (size_t j = 0; j < i; ++j) st.unplace(seg.regs[j]);
                return false;
            }
            st.place(reg, days[i], choice->first.ts, choice->first.seat);
        }
    }
    return true;
}

void unplace_segment(State& st, const Segment& seg) {
    for (int reg : seg.regs)
        if (st.placed(reg)) st.unplace(reg);
}

std::vector<int> segment_days(const State& st, const Segment& seg) {
    std::vector<int> days;
    for (int reg : seg.regs) days.push_back(st.placement(reg).day);
    return days;
}

// Strict-improvement polish: alternative day vectors per segment, then
// same-day re-placements and seat swaps among the released registrations.
void resched_descent(State& st, const Context& ctx, std::vector<Segment>& segments,
                     std::mt19937_64& rng, Clock::time_point t0, double limit) {
    const Problem& prob = *ctx.prob;
    bool improved = true;
    while (improved && seconds_since(t0) <= limit) {
        improved = false;
        CostVector current = resched_state_cost(st, ctx);

        std::vector<size_t> order(segments.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);

        for (size_t si : order) {
            Segment& seg = segments[si];
            std::vector<int> cur_days = segment_days(st, seg);
            std::pair<long long, long long> cur_score{0, 0};
            for (size_t v = 0; v < seg.day_vectors.size(); ++v)
                if (seg.day_vectors[v] == cur_days) {
                    cur_score = seg.vector_scores[v];
                    break;
                }
            std::vector<detail::Placement> saved;
            for (int reg : seg.regs) saved.push_back(st.placement(reg));
            // Any vector scoring no worse than the current one may still
            // improve the full cost through better seat choices.
            for (size_t v = 0; v < seg.day_vectors.size(); ++v) {
                if (seg.vector_scores[v] > cur_score) break;
                const std::vector<int>& vec = seg.day_vectors[v];
                if (vec == cur_days) continue;
                unplace_segment(st, seg);
                if (place_segment(st, ctx, seg, vec)) {
                    CostVector cost = resched_state_cost(st, ctx);
                    if (dominates(cost, current)) {
                        current = std::move(cost);
                        improved = true;
                        break;
                    }
                    unplace_segment(st, seg);
                }
                for (size_t i = 0; i < saved.size(); ++i)
                    st.place(seg.regs[i], saved[i].day, saved[i].ts,
                             saved[i].seat);
            }
        }

        // Same-day re-placement of released registrations (seat repair).
        std::vector<int> released;
        for (const Segment& seg : segments)
            for (int reg : seg.regs) released.push_back(reg);
        std::shuffle(released.begin(), released.end(), rng);
        for (int reg : released) {
            if (!st.placed(reg)) continue;
            detail::Placement old = st.placement(reg);
            st.unplace(reg);
            auto choice = detail::best_placement_on_day(st, reg, old.day);
            bool accepted = false;
            if (choice) {
                st.place(reg, old.day, choice->first.ts, choice->first.seat);
                CostVector cost = resched_state_cost(st, ctx);
                if (dominates(cost, current)) {
                    current = std::move(cost);
                    improved = true;
                    accepted = true;
                } else {
                    st.unplace(reg);
                }
            }
            if (!accepted) st.place(reg, old.day, old.ts, old.seat);
        }
    }
}

}  // namespace

RescheduleResult reschedule(const Instance& inst, const Schedule& old_schedule,
                            const DisruptionSet& dis, const SolverConfig& cfg) {
    check_instance(inst);
    check_disruptions(inst, dis);

    RescheduleResult result;
    if (dis.empty()) {
        result.status = SolveResult::Status::solved;
        result.schedule = old_schedule;
        canonicalize(result.schedule);
        result.cost = resched_cost(inst, old_schedule, result.schedule, dis);
        return result;
    }

    Instance current = apply_disruptions(inst, dis);
    Problem prob(current);
    Clock::time_point t0 = Clock::now();

    Context ctx;
    ctx.prob = &prob;
    ctx.dis = &dis;
    for (const Assignment& a : old_schedule.assignments) {
        ctx.old_by_key[a.reg] = a;
        if (a.reg.order == 0) ctx.old_first_day[a.reg.patient_id] = a.day;
    }
    ctx.gmin = earliest_disruption_day(old_schedule, dis).value_or(1);

    // Pinned rows: whole schedules of undisrupted patients plus the
    // frozen prefixes of disrupted ones.
    std::map<RegKey, Assignment> pinned;
    for (const Assignment& a : old_schedule.assignments)
        if (!patient_disrupted(dis, a.reg.patient_id)) pinned[a.reg] = a;
    for (const Assignment& a : frozen_prefix(old_schedule, dis)) pinned[a.reg] = a;

    // Released suffix per disrupted patient.
    std::vector<Segment> segments;
    for (size_t c = 0; c < prob.chains.size(); ++c) {
        const std::vector<int>& chain = prob.chains[c];
        int patient = prob.regs[chain[0]]->patient_id;
        if (!patient_disrupted(dis, patient)) continue;
        Segment seg;
        seg.patient = patient;
        for (size_t i = 0; i < chain.size(); ++i) {
            if (pinned.count(key_of(*prob.regs[chain[i]]))) continue;
            if (seg.regs.empty() && i > 0) {
                auto anchor = pinned.find(key_of(*prob.regs[chain[i - 1]]));
                seg.anchor_day = anchor->second.day;
            }
            seg.regs.push_back(chain[i]);
        }
        if (seg.regs.empty()) continue;
        enumerate_vectors(ctx, seg);
        if (seg.day_vectors.empty()) {
            result.status = SolveResult::Status::infeasible;
            for (int reg : seg.regs) result.unplaceable.push_back(key_of(*prob.regs[reg]));
            result.reason = "no feasible postponement for patient " +
                            std::to_string(patient) + " within the horizon";
            return result;
        }
        segments.push_back(std::move(seg));
    }
    std::sort(segments.begin(), segments.end(), [&](const Segment& a, const Segment& b) {
        return std::tie(ctx.old_first_day[a.patient], a.patient) <
               std::tie(ctx.old_first_day[b.patient], b.patient);
    });

    Schedule pinned_schedule;
    for (const auto& [key, a] : pinned) pinned_schedule.assignments.push_back(a);

    std::mt19937_64 rng(cfg.seed);
    std::optional<CostVector> best_cost;
    Schedule best_schedule;
    std::vector<RegKey> last_blocked;
    int stale = 0;

    for (int restart = 0; seconds_since(t0) <= cfg.time_limit; ++restart) {
        State st(prob);
        st.load(pinned_schedule);

        std::vector<size_t> order(segments.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (restart > 0) std::shuffle(order.begin(), order.end(), rng);

        bool complete = true;
        for (size_t si : order) {
            Segment& seg = segments[si];
            bool placed = false;
            for (const std::vector<int>& vec : seg.day_vectors)
                if (place_segment(st, ctx, seg, vec)) {
                    placed = true;
                    break;
                }
            if (!placed) {
                complete = false;
                last_blocked.clear();
                for (int reg : seg.regs)
                    last_blocked.push_back(key_of(*prob.regs[reg]));
                break;
            }
        }

        if (complete) {
            resched_descent(st, ctx, segments, rng, t0, cfg.time_limit);
            CostVector cost = resched_state_cost(st, ctx);
            if (!best_cost || dominates(cost, *best_cost)) {
                best_cost = cost;
                best_schedule = st.to_schedule();
                double elapsed = seconds_since(t0);
                result.incumbents.push_back({elapsed, cost});
                if (cfg.progress) cfg.progress(elapsed, cost, best_schedule);
                stale = 0;
                if (cost.all_zero()) break;
            } else {
                ++stale;
            }
        } else {
            ++stale;
        }
        if (stale >= cfg.max_stale_restarts) break;
    }

    if (!best_cost) {
        result.status = SolveResult::Status::no_solution;
        result.unplaceable = last_blocked;
        result.reason = "no complete reschedule found within the budget";
        return result;
    }

    result.status = SolveResult::Status::solved;
    result.schedule = best_schedule;
    result.cost = resched_cost(inst, old_schedule, best_schedule, dis);

    std::map<int, int> new_first_day;
    for (const Assignment& a : best_schedule.assignments)
        if (a.reg.order == 0) new_first_day[a.reg.patient_id] = a.day;
    for (const auto& [pid, old_day] : ctx.old_first_day) {
        if (patient_disrupted(dis, pid)) continue;
        auto it = new_first_day.find(pid);
        if (it != new_first_day.end() && it->second != old_day)
            ++result.unnecessary_moves;
    }
    return result;
}

}  // namespace cts
