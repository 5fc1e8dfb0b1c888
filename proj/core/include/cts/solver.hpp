#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cts/cost.hpp"
#include "cts/model.hpp"

namespace cts {

struct SolverConfig {
    enum class Mode { exact, anytime };

    double time_limit = 60.0;  // seconds
    std::uint64_t seed = 0;
    int workers = 1;
    Mode mode = Mode::anytime;
    bool emit_improvements = false;

    // Anytime search is "exhausted" after this many restarts in a row
    // without a better incumbent.
    int max_stale_restarts = 40;
    // Construction retries before a greedy dead-end becomes an error.
    int construction_attempts = 32;

    // Invoked on every strictly dominating incumbent:
    // (elapsed seconds, cost, schedule).
    std::function<void(double, const CostVector&, const Schedule&)> progress;
};

struct Incumbent {
    double elapsed_s = 0.0;
    CostVector cost;
};

struct SolveResult {
    enum class Status { solved, infeasible, no_solution };

    Status status = Status::no_solution;
    Schedule schedule;            // meaningful when solved
    CostVector cost;              // matches cost_vector(inst, schedule)
    bool proven_optimal = false;
    std::vector<RegKey> witness;  // blocking subset when infeasible
    std::string reason;
    std::vector<Incumbent> incumbents;  // strictly improving
};

// Exact mode admits at most 8 registrations, 12 start slots, 3 seats and
// 2 days; brute_force refuses anything larger.
bool within_exact_bound(const Instance& inst);

// Exhaustive enumeration of every feasible schedule; returns a dominance
// minimum with a deterministic lexicographic tie-break. Throws UsageError
// over the size bound.
SolveResult brute_force(const Instance& inst);

// Deterministic insertion heuristic: registrations sorted by (priority,
// descending therapy duration, id), patient chains placed atomically,
// each link at the feasible slot minimizing the incremental cost. Falls
// back to seeded shuffles on dead-ends; throws ConstructionError when the
// retry budget is exhausted.
Schedule greedy_construct(const Instance& inst, std::uint64_t seed);

// Strict-dominance descent over the move neighborhood (shift start slot,
// swap or relocate seats, move whole patient chains across days, reassign
// nurses). Returns start when no improving move exists.
Schedule local_search(const Instance& inst, const Schedule& start,
                      const SolverConfig& cfg);

// Exact enumeration below the size bound in exact mode; otherwise greedy
// construction plus restarted local search with a strictly improving
// incumbent stream.
SolveResult solve(const Instance& inst, const SolverConfig& cfg);

}  // namespace cts
