#include <benchmark/benchmark.h>

#include "cts/generator.hpp"
#include "cts/io.hpp"
#include "cts/objective.hpp"
#include "cts/resched.hpp"
#include "cts/solver.hpp"
#include "cts/validate.hpp"

using namespace cts;

namespace {

const Instance& daily_instance() {
    static Instance inst = generate(GenParams::daily_defaults(), 1);
    return inst;
}

const Instance& weekly_instance() {
    static Instance inst = generate(GenParams::weekly_defaults(), 1);
    return inst;
}

const Schedule& daily_schedule() {
    static Schedule sch = greedy_construct(daily_instance(), 1);
    return sch;
}

}  // namespace

static void BM_GreedyConstructDaily(benchmark::State& state) {
    const Instance& inst = daily_instance();
    for (auto _ : state)
        benchmark::DoNotOptimize(greedy_construct(inst, 1));
}
BENCHMARK(BM_GreedyConstructDaily);

static void BM_GreedyConstructWeekly(benchmark::State& state) {
    const Instance& inst = weekly_instance();
    for (auto _ : state)
        benchmark::DoNotOptimize(greedy_construct(inst, 1));
}
BENCHMARK(BM_GreedyConstructWeekly);

static void BM_SolveDaily(benchmark::State& state) {
    const Instance& inst = daily_instance();
    SolverConfig cfg;
    cfg.time_limit = 60.0;
    cfg.seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(inst, cfg));
}
BENCHMARK(BM_SolveDaily)->Unit(benchmark::kMillisecond);

static void BM_ValidateDaily(benchmark::State& state) {
    const Instance& inst = daily_instance();
    const Schedule& sch = daily_schedule();
    for (auto _ : state)
        benchmark::DoNotOptimize(validate_core(inst, sch));
}
BENCHMARK(BM_ValidateDaily);

static void BM_CostVectorDaily(benchmark::State& state) {
    const Instance& inst = daily_instance();
    const Schedule& sch = daily_schedule();
    for (auto _ : state)
        benchmark::DoNotOptimize(cost_vector(inst, sch));
}
BENCHMARK(BM_CostVectorDaily);

static void BM_EmitParseInstance(benchmark::State& state) {
    const Instance& inst = daily_instance();
    std::string text = emit_instance(inst);
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_instance(text));
}
BENCHMARK(BM_EmitParseInstance);

static void BM_BruteForceTiny(benchmark::State& state) {
    Instance inst;
    inst.grid.ts_count = 8;
    inst.grid.ats_count = 16;
    inst.resources.beds = {1};
    inst.resources.chairs = {1};
    for (int pid = 1; pid <= 4; ++pid) {
        Registration r;
        r.patient_id = pid;
        r.phases = {1, pid % 2 ? 2 : 0, pid % 2 ? 1 : 0, 3 + pid};
        r.seat_pref = pid % 2 ? SeatType::chair : SeatType::bed;
        inst.registrations.push_back(r);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(brute_force(inst));
}
BENCHMARK(BM_BruteForceTiny)->Unit(benchmark::kMillisecond);

static void BM_RescheduleScenario(benchmark::State& state) {
    const Instance& inst = weekly_instance();
    static Schedule old_sch = [&] {
        SolverConfig cfg;
        cfg.time_limit = 120.0;
        cfg.seed = 1;
        return solve(inst, cfg).schedule;
    }();
    static DisruptionSet dis = generate_disruptions(inst, old_sch, 15, 2, 5);
    SolverConfig cfg;
    cfg.time_limit = 300.0;
    cfg.seed = 5;
    for (auto _ : state)
        benchmark::DoNotOptimize(reschedule(inst, old_sch, dis, cfg));
}
BENCHMARK(BM_RescheduleScenario)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
