#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "cts/validate.hpp"
#include "test_util.hpp"

using namespace cts;
using namespace cts::test;

namespace {

bool has_code(const std::vector<Violation>& vs, ViolationCode code) {
    for (const Violation& v : vs)
        if (v.code == code) return true;
    return false;
}

std::vector<ViolationCode> codes(const std::vector<Violation>& vs) {
    std::vector<ViolationCode> out;
    for (const Violation& v : vs) out.push_back(v.code);
    return out;
}

// Independent acceptance re-check, written straight from the feasibility
// conditions with plain containers. Deliberately shares nothing with the
// validator implementation.
bool oracle_accepts(const Instance& inst, const Schedule& sch) {
    std::map<RegKey, int> seen;
    for (const Assignment& a : sch.assignments) ++seen[a.reg];
    for (const Registration& r : inst.registrations)
        if (seen[key_of(r)] != 1) return false;  // c1

    std::map<RegKey, Assignment> by_key;
    for (const Assignment& a : sch.assignments) by_key[a.reg] = a;

    for (const Assignment& a : sch.assignments) {
        const Registration* r = inst.find(a.reg);
        if (!r) return false;
        if (a.ts < 1 || a.ts > inst.grid.ts_count) return false;
        if (a.day < 1) return false;
        if (r->order == 0 && a.day > inst.days) return false;
        if ((r->phases.d4 > 0) != a.seat.has_value()) return false;  // c2
        if (r->phases.d4 > inst.long_threshold && a.ts < inst.long_min_ts)
            return false;  // c4
        int lead = r->phases.d1 + r->phases.d2 + r->phases.d3;
        if (2 * a.ts - lead < 1) return false;  // c5
        if (r->order > 0) {                     // c6
            auto prev = by_key.find({r->patient_id, r->order - 1});
            if (prev == by_key.end()) continue;
            if (a.day != prev->second.day + r->waiting_days) return false;
            if (a.day > inst.days) return false;
        }
    }

    // c3 via per-seat slot sets.
    std::map<std::tuple<int, int, int>, std::set<int>> used;  // (day,type,id)
    for (const Assignment& a : sch.assignments) {
        if (!a.seat) continue;
        const Registration& r = *inst.find(a.reg);
        auto& slots = used[{a.day, (int)a.seat->type, a.seat->id}];
        for (int s = 2 * a.ts; s <= std::min(2 * a.ts + r.phases.d4 - 1,
                                             inst.grid.ats_count); ++s)
            if (!slots.insert(s).second) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("c1: every registration exactly once") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair),
                                    make_reg(2, 4, SeatType::chair)},
                                   0, 2);
    SUBCASE("missing assignment") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1))}};
        auto vs = validate_core(inst, sch);
        REQUIRE(vs.size() == 1);
        CHECK(vs[0].code == ViolationCode::C1);
        CHECK(vs[0].regs == std::vector<RegKey>{{2, 0}});
    }
    SUBCASE("duplicate assignment") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1)), assign(1, 0, 1, 10, chair(2)),
                      assign(2, 0, 1, 20, chair(1))}};
        CHECK(has_code(validate_core(inst, sch), ViolationCode::C1));
    }
    SUBCASE("off-grid placement") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1)), assign(2, 0, 2, 3, chair(2))}};
        CHECK(has_code(validate_core(inst, sch), ViolationCode::C1));
    }
}

TEST_CASE("c2: seat presence must match the therapy duration") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair),
                                    make_reg(2, 0, SeatType::chair)},
                                   0, 2);
    SUBCASE("missing seat") {
        Schedule sch{{assign(1, 0, 1, 3), assign(2, 0, 1, 5)}};
        auto vs = validate_core(inst, sch);
        CHECK(codes(vs) == std::vector<ViolationCode>{ViolationCode::C2});
    }
    SUBCASE("seat on a zero-duration therapy") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1)), assign(2, 0, 1, 5, chair(2))}};
        auto vs = validate_core(inst, sch);
        CHECK(codes(vs) == std::vector<ViolationCode>{ViolationCode::C2});
    }
}

TEST_CASE("c3: a seat hosts one patient at a time") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair),
                                    make_reg(2, 4, SeatType::chair)},
                                   0, 2);
    // Occupancies {6..9} and {8..11} on the same chair.
    Schedule sch{{assign(1, 0, 1, 3, chair(1)), assign(2, 0, 1, 4, chair(1))}};
    auto vs = validate_core(inst, sch);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].code == ViolationCode::C3);
    CHECK(vs[0].regs == std::vector<RegKey>{{1, 0}, {2, 0}});

    SUBCASE("distinct seats do not clash") {
        Schedule ok{{assign(1, 0, 1, 3, chair(1)), assign(2, 0, 1, 4, chair(2))}};
        CHECK(validate_core(inst, ok).empty());
    }
    SUBCASE("same chair, disjoint slots") {
        Schedule ok{{assign(1, 0, 1, 3, chair(1)), assign(2, 0, 1, 5, chair(1))}};
        CHECK(validate_core(inst, ok).empty());
    }
}

TEST_CASE("c4: long therapies start at ts 24 or later") {
    Instance inst = daily_instance({make_reg(1, 51, SeatType::bed)}, 1, 0);
    SUBCASE("ts 23 is one slot too early") {
        Schedule sch{{assign(1, 0, 1, 23, bed(1))}};
        CHECK(codes(validate_core(inst, sch)) ==
              std::vector<ViolationCode>{ViolationCode::C4});
    }
    SUBCASE("ts 24 is legal") {
        Schedule sch{{assign(1, 0, 1, 24, bed(1))}};
        CHECK(validate_core(inst, sch).empty());
    }
    SUBCASE("d4 = 50 is not long") {
        Instance li = daily_instance({make_reg(1, 50, SeatType::bed)}, 1, 0);
        Schedule sch{{assign(1, 0, 1, 1, bed(1))}};
        CHECK(validate_core(li, sch).empty());
    }
}

TEST_CASE("c5: earlier phases fit before the therapy") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair, 2, 1)}, 0, 1);
    SUBCASE("ts 1 leaves no room for 4 lead slots") {
        Schedule sch{{assign(1, 0, 1, 1, chair(1))}};
        CHECK(codes(validate_core(inst, sch)) ==
              std::vector<ViolationCode>{ViolationCode::C5});
    }
    SUBCASE("ts 3 leaves exactly enough") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1))}};
        CHECK(validate_core(inst, sch).empty());
    }
}

TEST_CASE("c6: the waiting gap is exact") {
    Instance inst = weekly_instance(
        {make_reg(1, 4, SeatType::chair),
         make_reg(1, 4, SeatType::chair, 0, 0, 1, 1, 2)},
        5, 0, 1);
    SUBCASE("exact gap accepted") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1)), assign(1, 1, 3, 5, chair(1))}};
        CHECK(validate_core(inst, sch).empty());
    }
    SUBCASE("short gap rejected") {
        Schedule sch{{assign(1, 0, 1, 3, chair(1)), assign(1, 1, 2, 5, chair(1))}};
        CHECK(codes(validate_core(inst, sch)) ==
              std::vector<ViolationCode>{ViolationCode::C6});
    }
    SUBCASE("chain past the horizon rejected") {
        Schedule sch{{assign(1, 0, 4, 3, chair(1)), assign(1, 1, 6, 5, chair(1))}};
        CHECK(has_code(validate_core(inst, sch), ViolationCode::C6));
    }
}

TEST_CASE("schedules referencing unknown entities are input errors") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair)}, 0, 1);
    Schedule unknown_reg{{assign(9, 0, 1, 3, chair(1))}};
    CHECK_THROWS_AS(validate_core(inst, unknown_reg), InputError);
    Schedule unknown_seat{{assign(1, 0, 1, 3, chair(7))}};
    CHECK_THROWS_AS(validate_core(inst, unknown_seat), InputError);
}

namespace {

Instance extended_instance(int n, int capacity, int nurses = 1) {
    std::vector<Registration> regs;
    for (int pid = 1; pid <= n; ++pid) {
        Registration r = make_reg(pid, 6, SeatType::chair);
        r.priority = 2;
        r.drug = "A";
        regs.push_back(r);
    }
    Instance inst = daily_instance(regs, 0, n);
    inst.variant = Variant::extended;
    for (int i = 1; i <= nurses; ++i) inst.resources.nurses.push_back(i);
    inst.resources.nurse_capacity = capacity;
    return inst;
}

}  // namespace

TEST_CASE("extended checks") {
    SUBCASE("usage error on non-extended instances") {
        Instance inst = daily_instance({make_reg(1, 4, SeatType::chair)}, 0, 1);
        CHECK_THROWS_AS(validate_extended(inst, Schedule{}), UsageError);
    }
    SUBCASE("a nurse with capacity 1 cannot cover two overlapping patients") {
        Instance inst = extended_instance(2, 1);
        Schedule sch{{assign(1, 0, 1, 3, chair(1), 1),
                      assign(2, 0, 1, 4, chair(2), 1)}};
        CHECK(codes(validate_extended(inst, sch)) ==
              std::vector<ViolationCode>{ViolationCode::E_NURSE_CAP});
    }
    SUBCASE("disjoint coverage fits capacity 1") {
        Instance inst = extended_instance(2, 1);
        Schedule sch{{assign(1, 0, 1, 3, chair(1), 1),
                      assign(2, 0, 1, 10, chair(2), 1)}};
        CHECK(validate_extended(inst, sch).empty());
    }
    SUBCASE("a registration without a nurse") {
        Instance inst = extended_instance(1, 4);
        Schedule sch{{assign(1, 0, 1, 3, chair(1))}};
        CHECK(codes(validate_extended(inst, sch)) ==
              std::vector<ViolationCode>{ViolationCode::E_NURSE_ASSIGN});
    }
    SUBCASE("three users of a drug limited to two") {
        Instance inst = extended_instance(3, 9);
        inst.resources.drug_limits[{"A", 1}] = 2;
        Schedule sch{{assign(1, 0, 1, 3, chair(1), 1),
                      assign(2, 0, 1, 10, chair(2), 1),
                      assign(3, 0, 1, 20, chair(3), 1)}};
        auto vs = validate_extended(inst, sch);
        REQUIRE(has_code(vs, ViolationCode::E_DRUG));
        for (const Violation& v : vs)
            if (v.code == ViolationCode::E_DRUG) CHECK(v.regs.size() == 3);
    }
    SUBCASE("the last start slot is off limits") {
        Instance inst = extended_instance(1, 4);
        Schedule sch{{assign(1, 0, 1, 36, chair(1), 1)}};
        CHECK(has_code(validate_extended(inst, sch), ViolationCode::E_LAST_SLOT));
    }
}

namespace {

struct ReschedFixture {
    Instance inst = weekly_instance(
        {make_reg(1, 4, SeatType::chair),
         make_reg(1, 4, SeatType::chair, 0, 0, 1, 1, 2),
         make_reg(2, 6, SeatType::bed), make_reg(3, 4, SeatType::chair)},
        5, 1, 2);
    Schedule old_sch{{assign(1, 0, 1, 3, chair(1)), assign(1, 1, 3, 3, chair(1)),
                      assign(2, 0, 2, 5, bed(1)), assign(3, 0, 4, 8, chair(2))}};
};

}  // namespace

TEST_CASE("reschedule checks") {
    ReschedFixture fx;
    DisruptionSet dis;
    dis.unavailable.insert({3, 4});  // earliest (and only) disruption day: 4

    SUBCASE("unavailable day") {
        Schedule now = fx.old_sch;
        CHECK(has_code(validate_reschedule(fx.inst, fx.old_sch, now, dis),
                       ViolationCode::R_UNAVAILABLE));
    }
    SUBCASE("clean postponement passes") {
        Schedule now = fx.old_sch;
        now.assignments[3] = assign(3, 0, 5, 8, chair(2));
        CHECK(validate_reschedule(fx.inst, fx.old_sch, now, dis).empty());
    }
    SUBCASE("frozen prefix must not change") {
        Schedule now = fx.old_sch;
        now.assignments[3] = assign(3, 0, 5, 8, chair(2));
        now.assignments[1] = assign(1, 1, 3, 4, chair(1));  // day 3 < 4: frozen
        CHECK(has_code(validate_reschedule(fx.inst, fx.old_sch, now, dis),
                       ViolationCode::R_FROZEN));
    }
    SUBCASE("undisrupted patients keep their plan") {
        Schedule now = fx.old_sch;
        now.assignments[3] = assign(3, 0, 5, 8, chair(2));
        now.assignments[2] = assign(2, 0, 4, 5, bed(1));  // patient 2 undisrupted
        auto vs = validate_reschedule(fx.inst, fx.old_sch, now, dis);
        CHECK(has_code(vs, ViolationCode::R_FROZEN));
    }
    SUBCASE("appointments can only be postponed") {
        DisruptionSet un1;
        un1.unavailable.insert({1, 1});
        Schedule now = fx.old_sch;
        now.assignments[0] = assign(1, 0, 2, 3, chair(1));
        now.assignments[1] = assign(1, 1, 4, 3, chair(1));
        CHECK(validate_reschedule(fx.inst, fx.old_sch, now, un1).empty());
        // Patient 3 moved from day 4 to day 3 without any disruption of
        // their own: both anticipated and a frozen-plan change.
        now.assignments[3] = assign(3, 0, 3, 8, chair(2));
        auto vs = validate_reschedule(fx.inst, fx.old_sch, now, un1);
        CHECK(has_code(vs, ViolationCode::R_ANTICIPATED));
        CHECK(has_code(vs, ViolationCode::R_FROZEN));
    }
    SUBCASE("a replaced regimen may come earlier") {
        DisruptionSet regn;
        Registration repl = make_reg(1, 4, SeatType::chair, 0, 0, 1, 1, 1);
        regn.replacements.push_back(repl);
        Schedule now = fx.old_sch;
        now.assignments[1] = assign(1, 1, 2, 3, chair(1));  // gap now 1
        CHECK(!has_code(validate_reschedule(fx.inst, fx.old_sch, now, regn),
                        ViolationCode::R_ANTICIPATED));
    }
    SUBCASE("unknown registrations in the new schedule are input errors") {
        Schedule now = fx.old_sch;
        now.assignments.push_back(assign(9, 0, 5, 8, chair(2)));
        CHECK_THROWS_AS(validate_reschedule(fx.inst, fx.old_sch, now, dis),
                        InputError);
    }
}

TEST_CASE("violations come out sorted and deterministic") {
    Instance inst = daily_instance({make_reg(1, 51, SeatType::chair),
                                    make_reg(2, 4, SeatType::chair, 2, 1),
                                    make_reg(3, 4, SeatType::chair)},
                                   0, 3);
    Schedule sch{{assign(3, 0, 1, 23, chair(3)), assign(1, 0, 1, 23, chair(1)),
                  assign(2, 0, 1, 1, chair(2))}};
    auto a = validate_core(inst, sch);
    auto b = validate_core(inst, sch);
    CHECK(a == b);
    REQUIRE(a.size() == 2);
    CHECK(a[0].code == ViolationCode::C4);
    CHECK(a[1].code == ViolationCode::C5);
}

TEST_CASE("validator agrees with an independent re-check on tiny instances") {
    std::mt19937_64 rng(2024);
    int rejected = 0, accepted = 0;
    for (int round = 0; round < 400; ++round) {
        int n_patients = 1 + (int)(rng() % 4);
        bool weekly = rng() % 2 == 0;
        std::vector<Registration> regs;
        for (int pid = 1; pid <= n_patients; ++pid) {
            int orders = weekly && rng() % 3 == 0 ? 2 : 1;
            for (int o = 0; o < orders; ++o) {
                bool p2 = rng() % 2 == 0;
                Registration r =
                    make_reg(pid, (int)(rng() % 60), SeatType::chair,
                             p2 ? 1 + (int)(rng() % 4) : 0,
                             p2 ? 1 + (int)(rng() % 3) : 0, 1 + (int)(rng() % 2),
                             o, o == 0 ? 0 : 1 + (int)(rng() % 2));
                r.seat_pref = rng() % 2 ? SeatType::chair : SeatType::bed;
                regs.push_back(r);
            }
        }
        Instance inst = weekly ? weekly_instance(regs, 4, 1, 2)
                               : daily_instance(regs, 1, 2);

        Schedule sch;
        for (const Registration& r : inst.registrations) {
            if (rng() % 12 == 0) continue;  // missing: c1
            int copies = rng() % 16 == 0 ? 2 : 1;
            for (int c = 0; c < copies; ++c) {
                int day = 1 + (int)(rng() % (inst.days + (rng() % 8 == 0 ? 1 : 0)));
                int ts = 1 + (int)(rng() % inst.grid.ts_count);
                std::optional<SeatRef> seat;
                bool give_seat = r.phases.d4 > 0 ? rng() % 10 != 0 : rng() % 10 == 0;
                if (give_seat)
                    seat = rng() % 3 == 0 ? bed(1) : chair(1 + (int)(rng() % 2));
                sch.assignments.push_back(assign(r.patient_id, r.order, day, ts, seat));
            }
        }

        bool expect = oracle_accepts(inst, sch);
        bool actual = validate_core(inst, sch).empty();
        CHECK(expect == actual);
        (expect ? accepted : rejected)++;
    }
    // The sample must exercise both outcomes to mean anything.
    CHECK(accepted > 20);
    CHECK(rejected > 20);
}
