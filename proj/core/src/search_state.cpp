#include "search_state.hpp"

#include <algorithm>

namespace cts::detail {

Bits128 Bits128::range(int first, int last) {
    Bits128 b;
    for (int s = first; s <= last; ++s) {
        int bit = s - 1;
        if (bit < 64)
            b.lo |= std::uint64_t{1} << bit;
        else
            b.hi |= std::uint64_t{1} << (bit - 64);
    }
    return b;
}

Problem::Problem(const Instance& instance)
    : inst(instance), extended(instance.variant == Variant::extended) {
    for (const Registration& r : inst.registrations) regs.push_back(&r);
    std::sort(regs.begin(), regs.end(),
              [](const Registration* a, const Registration* b) {
                  return std::tie(a->patient_id, a->order) <
                         std::tie(b->patient_id, b->order);
              });
    for (size_t i = 0; i < regs.size(); ++i) index_of[key_of(*regs[i])] = (int)i;

    chain_of.resize(regs.size(), -1);
    day_offset.resize(regs.size(), 0);
    for (size_t i = 0; i < regs.size(); ++i) {
        if (regs[i]->order == 0) {
            chains.push_back({(int)i});
            chain_span.push_back(0);
        } else {
            chains.back().push_back((int)i);
            chain_span.back() += regs[i]->waiting_days;
        }
        chain_of[i] = (int)chains.size() - 1;
        day_offset[i] = chain_span.back();
    }

    std::vector<int> bed_ids = inst.resources.beds;
    std::vector<int> chair_ids = inst.resources.chairs;
    std::sort(bed_ids.begin(), bed_ids.end());
    std::sort(chair_ids.begin(), chair_ids.end());
    for (int id : bed_ids) seats.push_back({SeatType::bed, id});
    bed_count = (int)seats.size();
    for (int id : chair_ids) seats.push_back({SeatType::chair, id});

    nurse_ids = inst.resources.nurses;
    std::sort(nurse_ids.begin(), nurse_ids.end());
    nurse_capacity = inst.resources.nurse_capacity.value_or(0);

    drug_of.resize(regs.size(), -1);
    for (size_t i = 0; i < regs.size(); ++i) {
        if (!regs[i]->drug) continue;
        auto it = std::find(drug_names.begin(), drug_names.end(), *regs[i]->drug);
        if (it == drug_names.end()) {
            drug_names.push_back(*regs[i]->drug);
            drug_of[i] = (int)drug_names.size() - 1;
        } else {
            drug_of[i] = (int)(it - drug_names.begin());
        }
    }
    drug_limit.assign(drug_names.size(), std::vector<long long>(inst.days + 1, -1));
    for (const auto& [key, limit] : inst.resources.drug_limits) {
        auto it = std::find(drug_names.begin(), drug_names.end(), key.first);
        if (it == drug_names.end()) continue;  // limit on an unused drug
        int day = key.second;
        if (day >= 1 && day <= inst.days)
            drug_limit[it - drug_names.begin()][day] = limit;
    }

    ts_lo.resize(regs.size());
    ts_hi.resize(regs.size());
    occ_cache.resize(regs.size() * (inst.grid.ts_count + 1));
    for (size_t i = 0; i < regs.size(); ++i) {
        const PhaseDurations& p = regs[i]->phases;
        int lead = p.d1 + p.d2 + p.d3;
        int lo = (lead + 2) / 2;  // smallest ts with 2*ts - lead >= 1
        if (p.d4 > inst.long_threshold) lo = std::max(lo, inst.long_min_ts);
        int hi = inst.grid.ts_count - (extended ? 1 : 0);
        ts_lo[i] = std::max(1, lo);
        ts_hi[i] = hi;
        for (int ts = 1; ts <= inst.grid.ts_count; ++ts) {
            SlotRange r = occ_range((int)i, ts);
            occ_cache[i * (inst.grid.ts_count + 1) + ts] =
                r.empty() ? Bits128{} : Bits128::range(r.first, r.last);
        }
    }
}

SlotRange Problem::occ_range(int reg, int ts) const {
    const PhaseDurations& p = regs[reg]->phases;
    if (p.d4 == 0) return SlotRange{1, 0};
    int start = 2 * ts;
    return SlotRange{start, std::min(start + p.d4 - 1, inst.grid.ats_count)};
}

int Problem::seat_index(const SeatRef& seat) const {
    for (size_t i = 0; i < seats.size(); ++i)
        if (seats[i] == seat) return (int)i;
    return -1;
}

State::State(const Problem& prob) : prob_(&prob) {
    placements_.resize(prob.regs.size());
    int days = prob.inst.days;
    seat_busy_.assign(days + 1, std::vector<Bits128>(prob.seats.size()));
    if (prob.extended)
        nurse_load_.assign(days + 1,
                           std::vector<int>(prob.inst.grid.ats_count + 1, 0));
    drug_used_.assign(days + 1, std::vector<int>(prob.drug_names.size(), 0));
    day_seat_time_.assign(days + 1, 0);
    hist_.assign(days + 1, std::vector<int>(prob.inst.grid.ats_count + 1, 0));
    day_stats_.assign(days + 1, DayStatsCache{});
}

bool State::seat_free(int seat, int day, const Bits128& occ) const {
    return !seat_busy_[day][seat].intersects(occ);
}

int State::first_free_seat(SeatType type, int day, const Bits128& occ) const {
    int begin = type == SeatType::bed ? 0 : prob_->bed_count;
    int end = type == SeatType::bed ? prob_->bed_count : (int)prob_->seats.size();
    for (int s = begin; s < end; ++s)
        if (seat_free(s, day, occ)) return s;
    return -1;
}

bool State::nurse_capacity_fits(int reg, int day, int ts) const {
    if (!prob_->extended) return true;
    SlotRange range = prob_->occ_range(reg, ts);
    if (range.empty()) return true;
    int cap = (int)prob_->nurse_ids.size() * prob_->nurse_capacity;
    const std::vector<int>& load = nurse_load_[day];
    for (int s = range.first; s <= range.last; ++s)
        if (load[s] >= cap) return false;
    return true;
}

bool State::drug_fits(int reg, int day) const {
    int drug = prob_->drug_of[reg];
    if (drug < 0) return true;
    long long limit = prob_->drug_limit[drug][day];
    if (limit < 0) return true;
    return drug_used_[day][drug] + 1 <= limit;
}

bool State::can_place(int reg, int day, int ts, int seat) const {
    if (day < 1 || day > prob_->inst.days) return false;
    if (ts < prob_->ts_lo[reg] || ts > prob_->ts_hi[reg]) return false;
    const Registration& r = *prob_->regs[reg];
    const Bits128& occ = prob_->occ(reg, ts);
    if (r.phases.d4 > 0) {
        if (seat < 0 || seat >= (int)prob_->seats.size()) return false;
        if (!seat_free(seat, day, occ)) return false;
    } else if (seat != -1) {
        return false;
    }
    if (!nurse_capacity_fits(reg, day, ts)) return false;
    return drug_fits(reg, day);
}

void State::place(int reg, int day, int ts, int seat) {
    Placement& pl = placements_[reg];
    pl = {true, day, ts, seat};
    ++placed_count_;
    const Registration& r = *prob_->regs[reg];

    SlotRange range = prob_->occ_range(reg, ts);
    if (seat >= 0) {
        seat_busy_[day][seat].add(prob_->occ(reg, ts));
        day_seat_time_[day] += range.length();
        if (prob_->seats[seat].type != r.seat_pref) ++missed_prefs_;
    }
    if (prob_->extended)
        for (int s = range.first; s <= range.last; ++s) ++nurse_load_[day][s];
    if (prob_->drug_of[reg] >= 0) ++drug_used_[day][prob_->drug_of[reg]];
    if (r.phases.d2 > 0) {
        int p2 = 2 * ts - r.phases.d3 - r.phases.d2;
        if (p2 >= 1 && p2 <= prob_->inst.grid.ats_count) {
            ++hist_[day][p2];
            day_stats_[day].dirty = true;
        }
    }
    if (r.order == 0 && r.priority) prio_ts_[*r.priority] += ts;
}

void State::unplace(int reg) {
    Placement& pl = placements_[reg];
    const Registration& r = *prob_->regs[reg];
    int day = pl.day;

    SlotRange range = prob_->occ_range(reg, pl.ts);
    if (pl.seat >= 0) {
        seat_busy_[day][pl.seat].remove(prob_->occ(reg, pl.ts));
        day_seat_time_[day] -= range.length();
        if (prob_->seats[pl.seat].type != r.seat_pref) --missed_prefs_;
    }
    if (prob_->extended)
        for (int s = range.first; s <= range.last; ++s) --nurse_load_[day][s];
    if (prob_->drug_of[reg] >= 0) --drug_used_[day][prob_->drug_of[reg]];
    if (r.phases.d2 > 0) {
        int p2 = 2 * pl.ts - r.phases.d3 - r.phases.d2;
        if (p2 >= 1 && p2 <= prob_->inst.grid.ats_count) {
            --hist_[day][p2];
            day_stats_[day].dirty = true;
        }
    }
    if (r.order == 0 && r.priority) prio_ts_[*r.priority] -= pl.ts;
    pl = Placement{};
    --placed_count_;
}

void State::refresh_day(int day) const {
    DayStatsCache& st = day_stats_[day];
    st.max_bin = 0;
    st.min_nonzero = 0;
    st.phase2_count = 0;
    const std::vector<int>& bins = hist_[day];
    for (int s = 1; s <= prob_->inst.grid.ats_count; ++s) {
        int n = bins[s];
        if (n > st.max_bin) st.max_bin = n;
        if (n > 0 && (st.min_nonzero == 0 || n < st.min_nonzero)) st.min_nonzero = n;
        st.phase2_count += n;
    }
    st.dirty = false;
}

CostVector State::cost() const {
    long long sum_max = 0, sum_spread = 0, max_day_count = 0;
    for (int day = 1; day <= prob_->inst.days; ++day) {
        if (day_stats_[day].dirty) refresh_day(day);
        const DayStatsCache& st = day_stats_[day];
        sum_max += st.max_bin;
        sum_spread += st.max_bin - st.min_nonzero;
        max_day_count = std::max<long long>(max_day_count, st.phase2_count);
    }
    std::vector<CostVector::Entry> entries{
        {7, missed_prefs_}, {6, sum_max}, {5, sum_spread}, {4, max_day_count}};
    if (prob_->extended) {
        entries.push_back({3, prio_ts_[1]});
        entries.push_back({2, prio_ts_[2]});
        entries.push_back({1, prio_ts_[3]});
    }
    return CostVector(std::move(entries));
}

Schedule State::to_schedule() const {
    Schedule sch;
    for (size_t i = 0; i < placements_.size(); ++i) {
        const Placement& pl = placements_[i];
        if (!pl.placed) continue;
        Assignment a;
        a.reg = key_of(*prob_->regs[i]);
        a.day = pl.day;
        a.ts = pl.ts;
        if (pl.seat >= 0) a.seat = prob_->seats[pl.seat];
        sch.assignments.push_back(a);
    }

    // Concrete nurse assignment by a start-ordered sweep: the aggregate
    // cap kept per-slot concurrency within nurses * K, and session
    // windows are intervals, so a fitting nurse always exists.
    if (prob_->extended && !prob_->nurse_ids.empty()) {
        int n_nurses = (int)prob_->nurse_ids.size();
        for (int day = 1; day <= prob_->inst.days; ++day) {
            std::vector<Assignment*> todays;
            for (Assignment& a : sch.assignments)
                if (a.day == day) todays.push_back(&a);
            std::sort(todays.begin(), todays.end(),
                      [&](const Assignment* x, const Assignment* y) {
                          return std::tie(x->ts, x->reg) < std::tie(y->ts, y->reg);
                      });
            std::vector<std::vector<int>> load(
                n_nurses, std::vector<int>(prob_->inst.grid.ats_count + 1, 0));
            for (Assignment* a : todays) {
                int reg = prob_->index_of.at(a->reg);
                SlotRange range = prob_->occ_range(reg, a->ts);
                if (range.empty()) {
                    a->nurse = prob_->nurse_ids[0];
                    continue;
                }
                for (int n = 0; n < n_nurses; ++n) {
                    bool fits = true;
                    for (int s = range.first; s <= range.last && fits; ++s)
                        fits = load[n][s] < prob_->nurse_capacity;
                    if (fits) {
                        for (int s = range.first; s <= range.last; ++s) ++load[n][s];
                        a->nurse = prob_->nurse_ids[n];
                        break;
                    }
                }
                if (!a->nurse)
                    throw UsageError("internal: nurse sweep failed despite the "
                                     "aggregate capacity bound");
            }
        }
    }

    canonicalize(sch);
    return sch;
}

void State::load(const Schedule& sch) {
    for (const Assignment& a : sch.assignments) {
        auto it = prob_->index_of.find(a.reg);
        if (it == prob_->index_of.end())
            throw InputError("schedule references unknown registration");
        int reg = it->second;
        int seat = a.seat ? prob_->seat_index(*a.seat) : -1;
        if (a.seat && seat < 0) throw InputError("schedule references unknown seat");
        if (placed(reg)) throw InputError("schedule assigns a registration twice");
        if (!can_place(reg, a.day, a.ts, seat))
            throw InputError("schedule placement is infeasible");
        place(reg, a.day, a.ts, seat);
    }
}

std::optional<InfeasibilityReport> static_infeasibility(const Problem& prob) {
    const Instance& inst = prob.inst;

    // A chain whose regimen cannot fit the horizon.
    for (size_t c = 0; c < prob.chains.size(); ++c) {
        if (1 + prob.chain_span[c] > inst.days) {
            InfeasibilityReport rep;
            for (int reg : prob.chains[c]) rep.witness.push_back(key_of(*prob.regs[reg]));
            rep.reason = "regimen of patient " +
                         std::to_string(prob.regs[prob.chains[c][0]]->patient_id) +
                         " spans " + std::to_string(1 + prob.chain_span[c]) +
                         " days, horizon is " + std::to_string(inst.days);
            return rep;
        }
    }

    // A registration with an empty start-slot window.
    for (size_t i = 0; i < prob.regs.size(); ++i) {
        if (prob.ts_lo[i] > prob.ts_hi[i]) {
            return InfeasibilityReport{
                {key_of(*prob.regs[i])},
                "registration (" + std::to_string(prob.regs[i]->patient_id) + "," +
                    std::to_string(prob.regs[i]->order) +
                    ") admits no feasible start slot"};
        }
        if (prob.regs[i]->phases.d4 > 0 && prob.seats.empty())
            return InfeasibilityReport{{key_of(*prob.regs[i])},
                                       "no seat available for a therapy"};
    }

    // Slots that more registrations must occupy than there are seats.
    // Only day-forced registrations contribute (chains pinned by the
    // horizon, or single-day instances).
    std::vector<std::vector<std::vector<int>>> forced(
        inst.days + 1, std::vector<std::vector<int>>(inst.grid.ats_count + 2));
    for (size_t i = 0; i < prob.regs.size(); ++i) {
        if (prob.regs[i]->phases.d4 == 0) continue;
        int chain = prob.chain_of[i];
        if (inst.days - prob.chain_span[chain] != 1) continue;  // day0 not forced
        int day = 1 + prob.day_offset[i];
        // Intersection of all feasible occupancies.
        SlotRange lo_range = prob.occ_range((int)i, prob.ts_lo[i]);
        SlotRange hi_range = prob.occ_range((int)i, prob.ts_hi[i]);
        int first = hi_range.first;
        int last = lo_range.last;
        if (first > last) continue;
        forced[day][first].push_back((int)i);
        forced[day][last + 1].push_back(-(int)i - 1);
    }
    int seat_count = (int)prob.seats.size();
    for (int day = 1; day <= inst.days; ++day) {
        std::vector<int> active;
        for (int s = 1; s <= inst.grid.ats_count; ++s) {
            for (int ev : forced[day][s]) {
                if (ev >= 0)
                    active.push_back(ev);
                else
                    active.erase(std::find(active.begin(), active.end(), -ev - 1));
            }
            if ((int)active.size() > seat_count) {
                InfeasibilityReport rep;
                for (int reg : active) rep.witness.push_back(key_of(*prob.regs[reg]));
                std::sort(rep.witness.begin(), rep.witness.end());
                rep.reason = std::to_string(active.size()) +
                             " therapies must all cover ats slot " +
                             std::to_string(s) + " on day " + std::to_string(day) +
                             " with only " + std::to_string(seat_count) + " seats";
                return rep;
            }
        }
    }

    // Drug demand on forced days beyond the daily limit.
    if (!prob.drug_names.empty()) {
        std::vector<std::vector<std::vector<RegKey>>> use(
            inst.days + 1, std::vector<std::vector<RegKey>>(prob.drug_names.size()));
        for (size_t i = 0; i < prob.regs.size(); ++i) {
            int drug = prob.drug_of[i];
            if (drug < 0) continue;
            int chain = prob.chain_of[i];
            if (inst.days - prob.chain_span[chain] != 1) continue;
            use[1 + prob.day_offset[i]][drug].push_back(key_of(*prob.regs[i]));
        }
        for (int day = 1; day <= inst.days; ++day) {
            for (size_t d = 0; d < prob.drug_names.size(); ++d) {
                long long limit = prob.drug_limit[d][day];
                if (limit < 0) continue;
                if ((long long)use[day][d].size() > limit)
                    return InfeasibilityReport{
                        use[day][d], "drug \"" + prob.drug_names[d] + "\" is needed by " +
                                         std::to_string(use[day][d].size()) +
                                         " registrations on day " + std::to_string(day) +
                                         ", limit " + std::to_string(limit)};
            }
        }
    }

    // Area bound with clipping awareness, per forced day: a therapy only
    // shrinks below its full duration by running into the end of the
    // day, and the per-slot concurrency cap Q bounds how many therapies
    // can touch the last slot, hence how much total shrinkage is
    // available.
    {
        long long slot_cap = (long long)prob.seats.size();
        if (prob.extended)
            slot_cap = std::min(slot_cap, (long long)prob.nurse_ids.size() *
                                              prob.nurse_capacity);
        std::vector<long long> demand(inst.days + 1, 0);
        std::vector<std::vector<long long>> savings(inst.days + 1);
        std::vector<std::vector<RegKey>> contributors(inst.days + 1);
        for (size_t i = 0; i < prob.regs.size(); ++i) {
            if (prob.regs[i]->phases.d4 == 0) continue;
            int chain = prob.chain_of[i];
            if (inst.days - prob.chain_span[chain] != 1) continue;
            int day = 1 + prob.day_offset[i];
            int d4 = prob.regs[i]->phases.d4;
            int min_len = prob.occ_range((int)i, prob.ts_hi[i]).length();
            demand[day] += d4;
            savings[day].push_back(d4 - min_len);
            contributors[day].push_back(key_of(*prob.regs[i]));
        }
        long long day_capacity = slot_cap * inst.grid.ats_count;
        for (int day = 1; day <= inst.days; ++day) {
            std::sort(savings[day].rbegin(), savings[day].rend());
            long long lb = demand[day];
            for (size_t i = 0; i < savings[day].size() && (long long)i < slot_cap;
                 ++i)
                lb -= savings[day][i];
            if (lb > day_capacity) {
                std::sort(contributors[day].begin(), contributors[day].end());
                return InfeasibilityReport{
                    contributors[day],
                    "day " + std::to_string(day) + " needs at least " +
                        std::to_string(lb) + " seat-slots of therapy, capacity is " +
                        std::to_string(day_capacity) +
                        (prob.extended ? " (nurse-bound)" : "")};
            }
        }
    }

    return std::nullopt;
}

std::optional<std::pair<Choice, CostVector>> best_placement_on_day(State& st,
                                                                   int reg,
                                                                   int day) {
    const Problem& prob = st.problem();
    if (day < 1 || day > prob.inst.days) return std::nullopt;
    if (!st.drug_fits(reg, day)) return std::nullopt;
    const Registration& r = *prob.regs[reg];

    std::optional<CostVector> best_cost;
    Choice best;
    int seat_candidates[2];
    for (int ts = prob.ts_lo[reg]; ts <= prob.ts_hi[reg]; ++ts) {
        const Bits128& occ = prob.occ(reg, ts);
        int n_seats = 0;
        if (r.phases.d4 == 0) {
            seat_candidates[n_seats++] = -1;
        } else {
            SeatType other =
                r.seat_pref == SeatType::bed ? SeatType::chair : SeatType::bed;
            int pref = st.first_free_seat(r.seat_pref, day, occ);
            int alt = st.first_free_seat(other, day, occ);
            if (pref >= 0) seat_candidates[n_seats++] = pref;
            if (alt >= 0) seat_candidates[n_seats++] = alt;
        }
        if (!st.nurse_capacity_fits(reg, day, ts)) continue;
        for (int i = 0; i < n_seats; ++i) {
            st.place(reg, day, ts, seat_candidates[i]);
            CostVector cost = st.cost();
            st.unplace(reg);
            if (!best_cost || dominates(cost, *best_cost)) {
                best_cost = std::move(cost);
                best = {ts, seat_candidates[i]};
            }
        }
    }
    if (!best_cost) return std::nullopt;
    return std::make_pair(best, *best_cost);
}

}  // namespace cts::detail
