#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cts/generator.hpp"
#include "cts/io.hpp"
#include "cts/solver.hpp"
#include "cts/validate.hpp"
#include "test_util.hpp"

using namespace cts;
using namespace cts::test;

TEST_CASE("generation is deterministic per seed and distinct across seeds") {
    GenParams params;
    Instance a = generate(params, 7);
    Instance b = generate(params, 7);
    CHECK(a == b);
    CHECK(emit_instance(a) == emit_instance(b));

    std::set<std::string> distinct;
    for (std::uint64_t seed = 0; seed < 8; ++seed)
        distinct.insert(emit_instance(generate(params, seed)));
    CHECK(distinct.size() == 8);
}

TEST_CASE("generated instances are structurally valid") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CHECK_NOTHROW(check_instance(generate(GenParams::daily_defaults(), seed)));
        CHECK_NOTHROW(check_instance(generate(GenParams::weekly_defaults(), seed)));
        CHECK_NOTHROW(check_instance(generate(GenParams::extended_defaults(), seed)));
    }
}

TEST_CASE("phase2_rate zero removes every phase 2") {
    GenParams params;
    params.phase2_rate = 0.0;
    Instance inst = generate(params, 3);
    for (const Registration& r : inst.registrations) {
        CHECK(r.phases.d2 == 0);
        CHECK(r.phases.d3 == 0);
    }
}

TEST_CASE("daily statistics track the published figures") {
    GenParams params;
    double sum = 0, sumsq = 0;
    long long phase2 = 0, chairs = 0, total = 0;
    const int samples = 300;
    for (int s = 0; s < samples; ++s) {
        Instance inst = generate(params, 1000 + s);
        double n = (double)inst.registrations.size();
        sum += n;
        sumsq += n * n;
        for (const Registration& r : inst.registrations) {
            ++total;
            if (r.phases.d2 > 0) ++phase2;
            if (r.seat_pref == SeatType::chair) ++chairs;
        }
    }
    double mean = sum / samples;
    double stddev = std::sqrt(sumsq / samples - mean * mean);
    CHECK(mean > 123.0);
    CHECK(mean < 129.0);
    CHECK(stddev > 9.0);
    CHECK(stddev < 15.0);
    double p2_rate = (double)phase2 / total;
    double chair_rate = (double)chairs / total;
    CHECK(p2_rate > 0.41);
    CHECK(p2_rate < 0.47);
    CHECK(chair_rate > 0.68);
    CHECK(chair_rate < 0.74);
}

TEST_CASE("weekly chains respect the horizon and the waiting range") {
    GenParams params = GenParams::weekly_defaults();
    int multi = 0, patients = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Instance inst = generate(params, seed);
        std::map<int, std::vector<const Registration*>> chains;
        for (const Registration& r : inst.registrations)
            chains[r.patient_id].push_back(&r);
        for (auto& [pid, regs] : chains) {
            ++patients;
            if (regs.size() > 1) ++multi;
            int span = 0;
            for (const Registration* r : regs) {
                if (r->order > 0) {
                    CHECK(r->waiting_days >= params.waiting_range.first);
                    CHECK(r->waiting_days <= params.waiting_range.second);
                    span += r->waiting_days;
                }
            }
            CHECK(1 + span <= params.days);
            CHECK((int)regs.size() <= params.max_orders);
        }
    }
    double rate = (double)multi / patients;
    CHECK(rate > 0.07);
    CHECK(rate < 0.13);
}

TEST_CASE("extended instances carry priorities, drugs, and nurses") {
    Instance inst = generate(GenParams::extended_defaults(7), 5);
    CHECK(inst.variant == Variant::extended);
    CHECK(inst.resources.nurses.size() == 5);
    CHECK(inst.resources.nurse_capacity == 7);
    int counts[4] = {0, 0, 0, 0};
    for (const Registration& r : inst.registrations) {
        REQUIRE(r.priority.has_value());
        REQUIRE(r.drug.has_value());
        ++counts[*r.priority];
    }
    // Weights 0.20/0.40/0.40: priority 1 must be the rarest.
    CHECK(counts[1] < counts[2]);
    CHECK(counts[1] < counts[3]);
    CHECK(!inst.resources.drug_limits.empty());
}

TEST_CASE("contradictory parameters are rejected") {
    GenParams params;
    params.patients_min = 50;
    params.patients_max = 10;
    CHECK_THROWS_AS(generate(params, 0), ConfigError);

    GenParams bad_rate;
    bad_rate.chair_rate = 1.5;
    CHECK_THROWS_AS(generate(bad_rate, 0), ConfigError);

    GenParams bad_weights;
    bad_weights.priority_weights = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(generate(bad_weights, 0), ConfigError);
}

namespace {

struct WeeklyScenario {
    Instance inst;
    Schedule sch;
};

WeeklyScenario small_weekly(std::uint64_t seed) {
    GenParams params = GenParams::weekly_defaults();
    params.patients_mean = 60;
    params.patients_std = 5;
    params.patients_min = 50;
    params.patients_max = 70;
    params.multi_treatment_rate = 0.3;
    WeeklyScenario s{generate(params, seed), {}};
    s.sch = greedy_construct(s.inst, seed);
    return s;
}

}  // namespace

TEST_CASE("generate_disruptions builds runnable scenarios") {
    WeeklyScenario s = small_weekly(21);
    DisruptionSet dis = generate_disruptions(s.inst, s.sch, 6, 2, 9);

    CHECK(dis.unavailable.size() == 6);

    std::map<RegKey, int> day_of;
    std::map<int, std::vector<int>> chain_days;
    for (const Assignment& a : s.sch.assignments) {
        day_of[a.reg] = a.day;
        chain_days[a.reg.patient_id].push_back(a.day);
    }

    std::set<int> un_pids;
    for (const auto& [pid, day] : dis.unavailable) {
        un_pids.insert(pid);
        // The unavailability lands on the first scheduled day, and the
        // chain can still be pushed one day later.
        auto& days = chain_days[pid];
        CHECK(*std::min_element(days.begin(), days.end()) == day);
        CHECK(*std::max_element(days.begin(), days.end()) + 1 <= s.inst.days);
    }
    CHECK(un_pids.size() == 6);

    std::set<int> changed;
    for (const Registration& r : dis.replacements) {
        changed.insert(r.patient_id);
        CHECK(!un_pids.count(r.patient_id));
    }
    CHECK(changed.size() == 2);

    SUBCASE("determinism per seed") {
        CHECK(generate_disruptions(s.inst, s.sch, 6, 2, 9) == dis);
    }
    SUBCASE("the disrupted instance is still valid") {
        CHECK_NOTHROW(check_instance(apply_disruptions(s.inst, dis)));
    }
}

TEST_CASE("scenario errors") {
    WeeklyScenario s = small_weekly(22);
    // More regimen changes than multi-order patients can support.
    CHECK_THROWS_AS(generate_disruptions(s.inst, s.sch, 0, 10000, 1), ConfigError);
    // More unavailable patients than scheduled patients.
    CHECK_THROWS_AS(generate_disruptions(s.inst, s.sch, 10000, 0, 1), ConfigError);

    Instance daily = generate(GenParams::daily_defaults(), 3);
    Schedule dsch = greedy_construct(daily, 3);
    CHECK_THROWS_AS(generate_disruptions(daily, dsch, 1, 1, 1), ConfigError);
}
