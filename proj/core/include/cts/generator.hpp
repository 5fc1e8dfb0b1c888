#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "cts/disruption.hpp"
#include "cts/model.hpp"

namespace cts {

// Knobs of the synthetic instance generator. The defaults reproduce the
// published clinic statistics: 126 patients per day (std 12), 44% with a
// blood-collection phase, 71% asking for a chair, therapy durations
// mostly between 4 and 30 slots with a long-running tail, and for the
// extended variant priorities weighted 0.20/0.40/0.40 with 5 nurses.
struct GenParams {
    Variant variant = Variant::daily;
    int days = 1;

    double patients_mean = 126.0;
    double patients_std = 12.0;
    int patients_min = 105;
    int patients_max = 148;

    double phase2_rate = 0.44;
    double chair_rate = 0.71;

    std::pair<int, int> d4_main_range{4, 30};
    double d4_outlier_rate = 0.05;
    std::pair<int, int> d4_outlier_range{31, 80};
    std::pair<int, int> d1_range{1, 3};
    std::pair<int, int> d2_range{2, 6};
    std::pair<int, int> d3_range{1, 4};

    double multi_treatment_rate = 0.10;
    int max_orders = 5;
    std::pair<int, int> waiting_range{1, 4};

    std::array<double, 3> priority_weights{0.20, 0.40, 0.40};
    int nurses = 5;
    int nurse_capacity = 7;

    int beds = 10;
    int chairs = 25;

    int drug_catalog_size = 6;
    long long drug_limit = 1000000;  // effectively unlimited

    static GenParams daily_defaults();
    static GenParams weekly_defaults();
    static GenParams extended_defaults(int capacity = 7);
};

// Throws ConfigError on contradictory parameters (empty ranges, rates
// outside [0,1], weights not summing to 1).
void check_params(const GenParams& params);

// Deterministic for a fixed (params, seed) pair.
Instance generate(const GenParams& params, std::uint64_t seed);

// Picks n_unavail scheduled patients and marks each unavailable on one of
// their scheduled days (preferring days that leave a nonempty frozen
// prefix and a feasible postponement), and replaces the regimen tail of
// n_regimen_changes multi-order patients. Throws ConfigError when the
// schedule cannot support the request.
DisruptionSet generate_disruptions(const Instance& inst, const Schedule& sch,
                                   int n_unavail, int n_regimen_changes,
                                   std::uint64_t seed);

}  // namespace cts
