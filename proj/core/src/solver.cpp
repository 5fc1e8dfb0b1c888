#include "cts/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "cts/objective.hpp"
#include "cts/validate.hpp"
#include "search_state.hpp"

namespace cts {

using detail::Problem;
using detail::State;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

using detail::Choice;
using detail::best_placement_on_day;

// Latest feasible placement of a registration on a day: the smallest
// clipped footprint, used to construct starts on capacity-bound
// instances where the cost-greedy over-commits the early slots.
std::optional<Choice> frugal_placement_on_day(State& st, int reg, int day) {
    const Problem& prob = st.problem();
    if (day < 1 || day > prob.inst.days) return std::nullopt;
    if (!st.drug_fits(reg, day)) return std::nullopt;
    const Registration& r = *prob.regs[reg];
    for (int ts = prob.ts_hi[reg]; ts >= prob.ts_lo[reg]; --ts) {
        if (!st.nurse_capacity_fits(reg, day, ts)) continue;
        int seat = -1;
        if (r.phases.d4 > 0) {
            const detail::Bits128& occ = prob.occ(reg, ts);
            seat = st.first_free_seat(r.seat_pref, day, occ);
            if (seat < 0)
                seat = st.first_free_seat(r.seat_pref == SeatType::bed
                                              ? SeatType::chair
                                              : SeatType::bed,
                                          day, occ);
            if (seat < 0) continue;
        }
        return Choice{ts, seat};
    }
    return std::nullopt;
}

// Places all links of a chain with days fixed by day0; on failure
// reverts its own placements and returns false.
bool place_chain_on(State& st, int chain, int day0, bool frugal = false) {
    const Problem& prob = st.problem();
    const std::vector<int>& links = prob.chains[chain];
    for (size_t i = 0; i < links.size(); ++i) {
        int reg = links[i];
        int day = day0 + prob.day_offset[reg];
        std::optional<Choice> choice;
        if (frugal) {
            choice = frugal_placement_on_day(st, reg, day);
        } else if (auto best = best_placement_on_day(st, reg, day)) {
            choice = best->first;
        }
        if (!choice) {
            for (size_t j = 0; j < i; ++j) st.unplace(links[j]);
            return false;
        }
        st.place(reg, day, choice->ts, choice->seat);
    }
    return true;
}

void unplace_chain(State& st, int chain) {
    for (int reg : st.problem().chains[chain]) st.unplace(reg);
}

// Greedy placement of one whole chain: the day0 whose completed
// placement has the best cost wins; cost ties go to the least-loaded
// days, then to the earliest day0.
bool place_chain_best(State& st, int chain, bool frugal = false) {
    const Problem& prob = st.problem();
    int last_day0 = prob.inst.days - prob.chain_span[chain];
    if (last_day0 < 1) return false;
    if (last_day0 == 1) return place_chain_on(st, chain, 1, frugal);
    if (frugal) {
        for (int day0 = 1; day0 <= last_day0; ++day0)
            if (place_chain_on(st, chain, day0, true)) return true;
        return false;
    }

    std::optional<CostVector> best_cost;
    long long best_load = 0;
    int best_day0 = 0;
    for (int day0 = 1; day0 <= last_day0; ++day0) {
        if (!place_chain_on(st, chain, day0)) continue;
        CostVector cost = st.cost();
        unplace_chain(st, chain);
        long long load = 0;
        for (int reg : prob.chains[chain])
            load += st.day_seat_time(day0 + prob.day_offset[reg]);
        if (!best_cost || dominates(cost, *best_cost) ||
            (cost == *best_cost && load < best_load)) {
            best_cost = std::move(cost);
            best_load = load;
            best_day0 = day0;
        }
    }
    if (!best_cost) return false;
    return place_chain_on(st, chain, best_day0);
}

enum class OrderKind { canonical, packing, constrained, shuffled };

// canonical: (priority of the first link, longest therapy first, patient
// id). packing: the most day-constrained chains first. constrained: the
// narrowest start windows and largest minimum footprints first, used with
// the frugal placement on capacity-bound instances. shuffled: seeded
// restart noise.
std::vector<int> chain_order(const Problem& prob, OrderKind kind,
                             std::mt19937_64* shuffle_rng) {
    std::vector<int> order(prob.chains.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    if (kind == OrderKind::shuffled) {
        std::shuffle(order.begin(), order.end(), *shuffle_rng);
        return order;
    }
    if (kind == OrderKind::constrained) {
        auto width = [&](int chain) {
            int w = 1 << 20;
            for (int reg : prob.chains[chain])
                w = std::min(w, prob.ts_hi[reg] - prob.ts_lo[reg]);
            return w;
        };
        auto footprint = [&](int chain) {
            int f = 0;
            for (int reg : prob.chains[chain])
                f += prob.occ_range(reg, prob.ts_hi[reg]).length();
            return f;
        };
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            int wa = width(a), wb = width(b);
            int fa = footprint(a), fb = footprint(b);
            int ia = prob.regs[prob.chains[a][0]]->patient_id;
            int ib = prob.regs[prob.chains[b][0]]->patient_id;
            return std::tie(wa, fb, ia) < std::tie(wb, fa, ib);
        });
        return order;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Registration& ra = *prob.regs[prob.chains[a][0]];
        const Registration& rb = *prob.regs[prob.chains[b][0]];
        int pa = ra.priority.value_or(4), pb = rb.priority.value_or(4);
        if (kind == OrderKind::packing) {
            int sa = prob.chain_span[a], sb = prob.chain_span[b];
            return std::tie(sb, pa, rb.phases.d4, ra.patient_id) <
                   std::tie(sa, pb, ra.phases.d4, rb.patient_id);
        }
        return std::tie(pa, rb.phases.d4, ra.patient_id) <
               std::tie(pb, ra.phases.d4, rb.patient_id);
    });
    return order;
}

// Returns the first chain it could not place, or -1 on success.
int greedy_attempt(State& st, const std::vector<int>& order, bool frugal = false) {
    for (int chain : order)
        if (!place_chain_best(st, chain, frugal)) return chain;
    return -1;
}

// Compound move: claim a seat window that is blocked by exactly one
// other registration, re-placing the blocker elsewhere on its day. This
// is what frees a preferred-type window or unclumps a phase-2 bin once
// plain re-placements are stuck on a saturated day.
bool eject_and_claim(State& st, int a, CostVector& current) {
    const Problem& prob = st.problem();
    detail::Placement pa = st.placement(a);
    if (!pa.placed || pa.seat < 0) return false;
    int day = pa.day;

    for (int seat = 0; seat < (int)prob.seats.size(); ++seat) {
        if (seat == pa.seat) continue;
        // Occupants of this seat on the day, with their masks.
        std::vector<int> occupants;
        for (size_t i = 0; i < prob.regs.size(); ++i) {
            const detail::Placement& pl = st.placement((int)i);
            if (pl.placed && pl.day == day && pl.seat == seat)
                occupants.push_back((int)i);
        }
        for (int ts = prob.ts_lo[a]; ts <= prob.ts_hi[a]; ++ts) {
            const detail::Bits128& occ = prob.occ(a, ts);
            int blocker = -1;
            int conflicts = 0;
            for (int other : occupants) {
                const detail::Placement& pl = st.placement(other);
                if (prob.occ(other, pl.ts).intersects(occ)) {
                    ++conflicts;
                    blocker = other;
                }
            }
            if (conflicts != 1 || blocker == a) continue;

            detail::Placement pb = st.placement(blocker);
            st.unplace(a);
            st.unplace(blocker);
            bool accepted = false;
            if (st.can_place(a, day, ts, seat)) {
                st.place(a, day, ts, seat);
                auto choice = best_placement_on_day(st, blocker, day);
                if (choice && dominates(choice->second, current)) {
                    st.place(blocker, day, choice->first.ts, choice->first.seat);
                    current = choice->second;
                    accepted = true;
                } else {
                    st.unplace(a);
                }
            }
            if (accepted) return true;
            st.place(a, pa.day, pa.ts, pa.seat);
            st.place(blocker, pb.day, pb.ts, pb.seat);
        }
    }
    return false;
}

// Registrations worth an eject attempt: missed preferences and members
// of the tallest phase-2 bins.
std::vector<int> eject_targets(const State& st) {
    const Problem& prob = st.problem();
    std::vector<int> targets;
    std::vector<int> max_bin(prob.inst.days + 1, 0);
    std::vector<std::vector<int>> bin_count(
        prob.inst.days + 1, std::vector<int>(prob.inst.grid.ats_count + 1, 0));
    for (size_t i = 0; i < prob.regs.size(); ++i) {
        const detail::Placement& pl = st.placement((int)i);
        const Registration& r = *prob.regs[i];
        if (!pl.placed || r.phases.d2 == 0) continue;
        int p2 = 2 * pl.ts - r.phases.d3 - r.phases.d2;
        if (p2 >= 1 && p2 <= prob.inst.grid.ats_count) {
            int n = ++bin_count[pl.day][p2];
            max_bin[pl.day] = std::max(max_bin[pl.day], n);
        }
    }
    for (size_t i = 0; i < prob.regs.size(); ++i) {
        const detail::Placement& pl = st.placement((int)i);
        if (!pl.placed) continue;
        const Registration& r = *prob.regs[i];
        bool mispref = pl.seat >= 0 && prob.seats[pl.seat].type != r.seat_pref;
        bool clumped = false;
        if (r.phases.d2 > 0 && max_bin[pl.day] > 1) {
            int p2 = 2 * pl.ts - r.phases.d3 - r.phases.d2;
            clumped = p2 >= 1 && p2 <= prob.inst.grid.ats_count &&
                      bin_count[pl.day][p2] == max_bin[pl.day];
        }
        if (mispref || clumped) targets.push_back((int)i);
    }
    return targets;
}

// One strict-dominance descent pass; returns whether any move was taken.
bool descent_pass(State& st, std::mt19937_64& rng, Clock::time_point t0,
                  double time_limit) {
    const Problem& prob = st.problem();
    bool improved = false;
    CostVector current = st.cost();

    // Re-place one registration on its day (covers ts shifts, seat
    // relocations and nurse reassignment in one move).
    std::vector<int> regs(prob.regs.size());
    for (size_t i = 0; i < regs.size(); ++i) regs[i] = (int)i;
    std::shuffle(regs.begin(), regs.end(), rng);
    for (int reg : regs) {
        if (!st.placed(reg)) continue;
        if (seconds_since(t0) > time_limit) return improved;
        detail::Placement old = st.placement(reg);
        st.unplace(reg);
        auto choice = best_placement_on_day(st, reg, old.day);
        if (choice && dominates(choice->second, current)) {
            st.place(reg, old.day, choice->first.ts, choice->first.seat);
            current = choice->second;
            improved = true;
        } else {
            st.place(reg, old.day, old.ts, old.seat);
        }
    }

    // Swap the seats of a mispreferred registration and a same-day
    // partner sitting on the wanted type.
    std::vector<int> missed;
    for (size_t i = 0; i < prob.regs.size(); ++i) {
        const detail::Placement& pl = st.placement((int)i);
        if (pl.placed && pl.seat >= 0 &&
            prob.seats[pl.seat].type != prob.regs[i]->seat_pref)
            missed.push_back((int)i);
    }
    std::shuffle(missed.begin(), missed.end(), rng);
    for (int a : missed) {
        if (seconds_since(t0) > time_limit) return improved;
        detail::Placement pa = st.placement(a);
        if (!pa.placed || pa.seat < 0) continue;
        SeatType want = prob.regs[a]->seat_pref;
        for (size_t b = 0; b < prob.regs.size(); ++b) {
            if ((int)b == a) continue;
            detail::Placement pb = st.placement((int)b);
            if (!pb.placed || pb.seat < 0 || pb.day != pa.day) continue;
            if (prob.seats[pb.seat].type != want) continue;
            st.unplace(a);
            st.unplace((int)b);
            bool ok = st.can_place(a, pa.day, pa.ts, pb.seat);
            if (ok) {
                st.place(a, pa.day, pa.ts, pb.seat);
                ok = st.can_place((int)b, pb.day, pb.ts, pa.seat);
                if (ok) {
                    st.place((int)b, pb.day, pb.ts, pa.seat);
                    CostVector cost = st.cost();
                    if (dominates(cost, current)) {
                        current = std::move(cost);
                        improved = true;
                        pa = st.placement(a);
                        break;
                    }
                    st.unplace((int)b);
                }
                st.unplace(a);
            }
            st.place(a, pa.day, pa.ts, pa.seat);
            st.place((int)b, pb.day, pb.ts, pb.seat);
        }
    }

    // Deeper neighborhood only at a local optimum of the cheap moves.
    if (!improved) {
        std::vector<int> targets = eject_targets(st);
        std::shuffle(targets.begin(), targets.end(), rng);
        for (int a : targets) {
            if (seconds_since(t0) > time_limit) return improved;
            if (eject_and_claim(st, a, current)) improved = true;
        }
    }

    // Move a whole patient chain to another set of days.
    if (prob.inst.days > 1) {
        std::vector<int> chains(prob.chains.size());
        for (size_t i = 0; i < chains.size(); ++i) chains[i] = (int)i;
        std::shuffle(chains.begin(), chains.end(), rng);
        for (int chain : chains) {
            if (seconds_since(t0) > time_limit) return improved;
            if (!st.placed(prob.chains[chain][0])) continue;
            int old_day0 =
                st.placement(prob.chains[chain][0]).day;  // offsets are fixed
            std::vector<detail::Placement> saved;
            for (int reg : prob.chains[chain]) saved.push_back(st.placement(reg));
            int last_day0 = prob.inst.days - prob.chain_span[chain];
            bool moved = false;
            for (int day0 = 1; day0 <= last_day0 && !moved; ++day0) {
                if (day0 == old_day0) continue;
                unplace_chain(st, chain);
                if (place_chain_on(st, chain, day0)) {
                    CostVector cost = st.cost();
                    if (dominates(cost, current)) {
                        current = std::move(cost);
                        improved = true;
                        moved = true;
                        break;
                    }
                    unplace_chain(st, chain);
                }
                for (size_t i = 0; i < saved.size(); ++i)
                    st.place(prob.chains[chain][i], saved[i].day, saved[i].ts,
                             saved[i].seat);
            }
        }
    }

    return improved;
}

void descend(State& st, std::mt19937_64& rng, Clock::time_point t0,
             double time_limit) {
    while (seconds_since(t0) <= time_limit) {
        if (!descent_pass(st, rng, t0, time_limit)) break;
    }
}

// Incumbent cell shared by search workers; updates must strictly dominate.
struct IncumbentCell {
    std::mutex mu;
    std::optional<Schedule> schedule;
    std::optional<CostVector> cost;
    std::vector<Incumbent> log;
    bool proven_optimal = false;
    std::atomic<bool> stop{false};
    Clock::time_point t0;
    const SolverConfig* cfg = nullptr;

    bool has_incumbent() {
        std::lock_guard<std::mutex> lock(mu);
        return cost.has_value();
    }

    bool offer(const Schedule& sch, const CostVector& c) {
        std::lock_guard<std::mutex> lock(mu);
        if (cost && !dominates(c, *cost)) return false;
        schedule = sch;
        cost = c;
        double elapsed = seconds_since(t0);
        log.push_back({elapsed, c});
        if (cfg->progress) cfg->progress(elapsed, c, sch);
        if (c.all_zero()) {
            proven_optimal = true;  // nothing can dominate an all-zero vector
            stop = true;
        }
        return true;
    }
};

void search_worker(const Problem& prob, IncumbentCell& cell, std::uint64_t seed,
                   bool canonical_first, const SolverConfig& cfg) {
    std::mt19937_64 rng(seed);
    int stale = 0;
    int construction_failures = 0;

    int attempt = 0;
    while (!cell.stop && seconds_since(cell.t0) <= cfg.time_limit) {
        OrderKind kind = attempt == 0 && canonical_first ? OrderKind::canonical
                         : attempt == 1 ? OrderKind::packing
                         : attempt == 2 ? OrderKind::constrained
                                        : OrderKind::shuffled;
        bool frugal = attempt >= 2 && attempt % 2 == 0;
        std::vector<int> order = chain_order(prob, kind, &rng);
        ++attempt;
        State st(prob);
        if (greedy_attempt(st, order, frugal) != -1) {
            ++construction_failures;
            ++stale;
            if (!cell.has_incumbent() &&
                construction_failures >= cfg.construction_attempts)
                break;
            if (cell.has_incumbent() && stale >= cfg.max_stale_restarts) break;
            continue;
        }
        descend(st, rng, cell.t0, cfg.time_limit);
        if (cell.offer(st.to_schedule(), st.cost()))
            stale = 0;
        else
            ++stale;
        if (stale >= cfg.max_stale_restarts) break;
    }
}

}  // namespace

bool within_exact_bound(const Instance& inst) {
    return inst.registrations.size() <= 8 && inst.grid.ts_count <= 12 &&
           inst.resources.beds.size() + inst.resources.chairs.size() <= 3 &&
           inst.days <= 2;
}

SolveResult brute_force(const Instance& inst) {
    check_instance(inst);
    if (!within_exact_bound(inst))
        throw UsageError(
            "exact enumeration admits at most 8 registrations, 12 start slots, "
            "3 seats and 2 days");

    Problem prob(inst);
    SolveResult result;

    if (auto rep = detail::static_infeasibility(prob)) {
        result.status = SolveResult::Status::infeasible;
        result.witness = rep->witness;
        result.reason = rep->reason;
        return result;
    }
    if (prob.regs.size() == 0) {
        result.status = SolveResult::Status::solved;
        result.proven_optimal = true;
        result.cost = cost_vector(inst, result.schedule);
        return result;
    }

    State st(prob);
    std::optional<CostVector> best_cost;
    Schedule best_schedule;
    size_t deepest = 0;
    int deepest_blocked = -1;

    // DFS in (patient, order) sequence; chain days are fixed by the
    // order-0 day via the waiting gaps, so only order 0 branches on days.
    // Candidate enumeration order (day, ts, seat, nurse ascending) makes
    // the first optimum found the lexicographically smallest encoding.
    auto dfs = [&](auto&& self, size_t reg_idx) -> void {
        if (reg_idx == prob.regs.size()) {
            CostVector cost = st.cost();
            if (!best_cost || dominates(cost, *best_cost)) {
                best_cost = std::move(cost);
                best_schedule = st.to_schedule();
            }
            return;
        }
        int reg = (int)reg_idx;
        const Registration& r = *prob.regs[reg];
        int chain = prob.chain_of[reg];
        int day_first = 1, day_last = prob.inst.days;
        if (r.order == 0) {
            day_last = prob.inst.days - prob.chain_span[chain];
        } else {
            int prev = prob.index_of.at({r.patient_id, r.order - 1});
            day_first = day_last = st.placement(prev).day + r.waiting_days;
        }
        bool any = false;
        for (int day = day_first; day <= day_last; ++day) {
            for (int ts = prob.ts_lo[reg]; ts <= prob.ts_hi[reg]; ++ts) {
                int seat_from = r.phases.d4 > 0 ? 0 : -1;
                int seat_to = r.phases.d4 > 0 ? (int)prob.seats.size() - 1 : -1;
                for (int seat = seat_from; seat <= seat_to; ++seat) {
                    if (!st.can_place(reg, day, ts, seat)) continue;
                    st.place(reg, day, ts, seat);
                    any = true;
                    self(self, reg_idx + 1);
                    st.unplace(reg);
                }
            }
        }
        if (!any && reg_idx >= deepest) {
            deepest = reg_idx;
            deepest_blocked = reg;
        }
    };
    dfs(dfs, 0);

    if (!best_cost) {
        result.status = SolveResult::Status::infeasible;
        for (size_t i = 0; i < deepest; ++i)
            result.witness.push_back(key_of(*prob.regs[i]));
        if (deepest_blocked >= 0)
            result.witness.push_back(key_of(*prob.regs[deepest_blocked]));
        std::sort(result.witness.begin(), result.witness.end());
        result.witness.erase(
            std::unique(result.witness.begin(), result.witness.end()),
            result.witness.end());
        result.reason = "exhaustive enumeration found no feasible schedule";
        return result;
    }

    result.status = SolveResult::Status::solved;
    result.schedule = best_schedule;
    result.cost = cost_vector(inst, best_schedule);
    result.proven_optimal = true;
    return result;
}

Schedule greedy_construct(const Instance& inst, std::uint64_t seed) {
    check_instance(inst);
    Problem prob(inst);
    if (prob.regs.empty()) return Schedule{};

    std::mt19937_64 rng(seed);
    int attempts = SolverConfig{}.construction_attempts;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        State st(prob);
        OrderKind kind = attempt == 0   ? OrderKind::canonical
                         : attempt == 1 ? OrderKind::packing
                         : attempt == 2 ? OrderKind::constrained
                                        : OrderKind::shuffled;
        bool frugal = attempt >= 2 && attempt % 2 == 0;
        std::vector<int> order = chain_order(prob, kind, &rng);
        if (greedy_attempt(st, order, frugal) == -1) return st.to_schedule();
    }
    throw ConstructionError("greedy construction failed after " +
                            std::to_string(attempts) + " attempts");
}

Schedule local_search(const Instance& inst, const Schedule& start,
                      const SolverConfig& cfg) {
    check_instance(inst);
    Problem prob(inst);
    State st(prob);
    st.load(start);
    std::mt19937_64 rng(cfg.seed);
    descend(st, rng, Clock::now(), cfg.time_limit);
    return st.to_schedule();
}

SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
    check_instance(inst);
    if (cfg.mode == SolverConfig::Mode::exact) return brute_force(inst);

    Problem prob(inst);
    SolveResult result;

    if (auto rep = detail::static_infeasibility(prob)) {
        result.status = SolveResult::Status::infeasible;
        result.witness = rep->witness;
        result.reason = rep->reason;
        return result;
    }
    if (prob.regs.empty()) {
        result.status = SolveResult::Status::solved;
        result.cost = cost_vector(inst, result.schedule);
        result.proven_optimal = true;
        return result;
    }

    IncumbentCell cell;
    cell.t0 = Clock::now();
    cell.cfg = &cfg;

    int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        search_worker(prob, cell, cfg.seed, true, cfg);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                search_worker(prob, cell, cfg.seed + 0x9e3779b97f4a7c15ull * w,
                              w == 0, cfg);
            });
        for (std::thread& t : pool) t.join();
    }

    if (!cell.cost) {
        result.status = SolveResult::Status::no_solution;
        result.reason = "no feasible incumbent within the time limit";
        return result;
    }
    result.status = SolveResult::Status::solved;
    result.schedule = *cell.schedule;
    result.cost = cost_vector(inst, result.schedule);
    result.proven_optimal = cell.proven_optimal;
    result.incumbents = cell.log;
    return result;
}

}  // namespace cts
