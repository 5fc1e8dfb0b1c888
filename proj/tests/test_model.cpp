#include <doctest.h>

#include <random>
#include <set>

#include "cts/model.hpp"
#include "test_util.hpp"

using namespace cts;
using namespace cts::test;

TEST_CASE("ats_of maps start slots onto even 5-minute slots") {
    TimeGrid grid;
    CHECK(grid.ats_of(1) == 2);
    CHECK(grid.ats_of(36) == 72);
    CHECK(grid.ats_of(24) == 48);
    CHECK_THROWS_AS(grid.ats_of(0), std::out_of_range);
    CHECK_THROWS_AS(grid.ats_of(37), std::out_of_range);
}

TEST_CASE("clock arithmetic anchors the grid to office hours") {
    TimeGrid grid;
    CHECK(grid.clock_of_ats(1) == "07:30");
    // ts 1 is the second 5-minute slot: 07:35-07:40.
    CHECK(grid.clock_of_ats(grid.ats_of(1)) == "07:35");
    // The earliest start for long therapies (ts 24) is the 48th slot,
    // which begins at 07:30 + 47 * 5 minutes = 11:25.
    int minutes = 7 * 60 + 30 + (grid.ats_of(24) - 1) * 5;
    CHECK(minutes == 11 * 60 + 25);
    CHECK(grid.clock_of_ats(grid.ats_of(24)) == "11:25");
}

TEST_CASE("ats_of is a bijection onto the even slots") {
    TimeGrid grid;
    std::set<int> images;
    for (int ts = 1; ts <= grid.ts_count; ++ts) {
        int ats = grid.ats_of(ts);
        CHECK(ats % 2 == 0);
        CHECK(ats >= 1);
        CHECK(ats <= grid.ats_count);
        images.insert(ats);
    }
    CHECK((int)images.size() == grid.ts_count);
}

TEST_CASE("phase2_start follows the therapy start backwards") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair, 2, 1)});

    SUBCASE("ts=3, d3=1, d2=2 starts phase 2 at ats 3") {
        auto p2 = phase2_start(inst, assign(1, 0, 1, 3, chair(1)));
        REQUIRE(p2.has_value());
        CHECK(p2->ats == 3);
        CHECK(p2->valid);
    }
    SUBCASE("no phase 2 means no start") {
        Instance plain = daily_instance({make_reg(1, 4, SeatType::chair)});
        CHECK(!phase2_start(plain, assign(1, 0, 1, 5, chair(1))).has_value());
    }
    SUBCASE("a start before the day opens is flagged, not hidden") {
        auto p2 = phase2_start(inst, assign(1, 0, 1, 1, chair(1)));
        REQUIRE(p2.has_value());
        CHECK(p2->ats == -1);
        CHECK(!p2->valid);
    }
}

TEST_CASE("occupied_slots is the clipped therapy range") {
    SUBCASE("plain range") {
        Instance inst = daily_instance({make_reg(1, 4, SeatType::chair)});
        SlotRange r = occupied_slots(inst, assign(1, 0, 1, 3, chair(1)));
        CHECK(r == SlotRange{6, 9});
        CHECK(r.length() == 4);
    }
    SUBCASE("clipped at the end of the day") {
        Instance inst = daily_instance({make_reg(1, 20, SeatType::chair)});
        SlotRange r = occupied_slots(inst, assign(1, 0, 1, 30, chair(1)));
        CHECK(r == SlotRange{60, 72});
    }
    SUBCASE("zero-duration therapy occupies nothing") {
        Instance inst = daily_instance({make_reg(1, 0, SeatType::chair)});
        SlotRange r = occupied_slots(inst, assign(1, 0, 1, 5));
        CHECK(r.empty());
        CHECK(r.length() == 0);
    }
}

TEST_CASE("occupied_slots stays contiguous inside the day") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        int d4 = (int)(rng() % 90);
        int ts = 1 + (int)(rng() % 36);
        Instance inst = daily_instance({make_reg(1, d4, SeatType::chair)});
        Assignment a =
            assign(1, 0, 1, ts, d4 > 0 ? std::optional(chair(1)) : std::nullopt);
        SlotRange r = occupied_slots(inst, a);
        if (d4 == 0) {
            CHECK(r.empty());
        } else {
            CHECK(r.first == 2 * ts);
            CHECK(r.last <= inst.grid.ats_count);
            CHECK(r.length() == std::min(d4, inst.grid.ats_count - 2 * ts + 1));
        }
        auto p2 = phase2_start(inst, a);
        CHECK(!p2.has_value());  // d2 = 0 throughout
    }
}

TEST_CASE("instance invariants are enforced") {
    SUBCASE("phase 2 requires phase 3") {
        Instance inst = daily_instance({make_reg(1, 4, SeatType::bed, 3, 0)});
        CHECK_THROWS_AS(check_instance(inst), InputError);
    }
    SUBCASE("phase 1 is mandatory") {
        Instance inst = daily_instance({make_reg(1, 4, SeatType::bed, 0, 0, 0)});
        CHECK_THROWS_AS(check_instance(inst), InputError);
    }
    SUBCASE("orders form a contiguous prefix") {
        Instance inst = weekly_instance(
            {make_reg(1, 4, SeatType::bed),
             make_reg(1, 4, SeatType::bed, 0, 0, 1, 2, 1)});
        CHECK_THROWS_AS(check_instance(inst), InputError);
    }
    SUBCASE("later orders wait at least a day") {
        Instance inst = weekly_instance(
            {make_reg(1, 4, SeatType::bed),
             make_reg(1, 4, SeatType::bed, 0, 0, 1, 1, 0)});
        CHECK_THROWS_AS(check_instance(inst), InputError);
    }
    SUBCASE("daily instances admit order 0 only") {
        Instance inst = daily_instance(
            {make_reg(1, 4, SeatType::bed),
             make_reg(1, 4, SeatType::bed, 0, 0, 1, 1, 2)});
        CHECK_THROWS_AS(check_instance(inst), InputError);
    }
    SUBCASE("extended registrations carry priority and drug") {
        Instance inst = daily_instance({make_reg(1, 4, SeatType::bed)});
        inst.variant = Variant::extended;
        inst.resources.nurses = {1};
        inst.resources.nurse_capacity = 4;
        CHECK_THROWS_AS(check_instance(inst), InputError);
        inst.registrations[0].priority = 1;
        inst.registrations[0].drug = "D1";
        CHECK_NOTHROW(check_instance(inst));
    }
    SUBCASE("nurse fields require the extended variant") {
        Instance inst = daily_instance({make_reg(1, 4, SeatType::bed)});
        inst.resources.nurses = {1};
        CHECK_THROWS_AS(check_instance(inst), InputError);
    }
    SUBCASE("a well-formed weekly chain passes") {
        Instance inst = weekly_instance(
            {make_reg(1, 4, SeatType::bed),
             make_reg(1, 6, SeatType::chair, 0, 0, 1, 1, 2)});
        CHECK_NOTHROW(check_instance(inst));
    }
}

TEST_CASE("canonicalize orders assignments deterministically") {
    Schedule a;
    a.assignments = {assign(2, 0, 1, 5, chair(1)), assign(1, 0, 1, 5, bed(1)),
                     assign(3, 0, 1, 2, chair(2))};
    Schedule b;
    b.assignments = {a.assignments[1], a.assignments[2], a.assignments[0]};
    canonicalize(a);
    canonicalize(b);
    CHECK(a == b);
    CHECK(a.assignments[0].reg.patient_id == 3);
}

TEST_CASE("reg_of rejects unknown registrations") {
    Instance inst = daily_instance({make_reg(1, 4, SeatType::chair)});
    CHECK_THROWS_AS(inst.reg_of(assign(9, 0, 1, 1)), InputError);
}
