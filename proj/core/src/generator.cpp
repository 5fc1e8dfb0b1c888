#include "cts/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace cts {

GenParams GenParams::daily_defaults() { return GenParams{}; }

GenParams GenParams::weekly_defaults() {
    GenParams p;
    p.variant = Variant::weekly;
    p.days = 5;
    // Sized so a week carries about 634 registrations over about 542
    // patients, a tenth of whom need several treatments.
    p.patients_mean = 542.0;
    p.patients_std = 22.0;
    p.patients_min = 480;
    p.patients_max = 610;
    return p;
}

GenParams GenParams::extended_defaults(int capacity) {
    GenParams p;
    p.variant = Variant::extended;
    p.nurse_capacity = capacity;
    return p;
}

void check_params(const GenParams& p) {
    auto rate = [](double r, const char* what) {
        if (r < 0.0 || r > 1.0)
            throw ConfigError(std::string(what) + " must lie in [0,1]");
    };
    auto range = [](std::pair<int, int> r, int lo, const char* what) {
        if (r.first > r.second || r.first < lo)
            throw ConfigError(std::string(what) + " is empty or below " +
                              std::to_string(lo));
    };
    rate(p.phase2_rate, "phase2_rate");
    rate(p.chair_rate, "chair_rate");
    rate(p.d4_outlier_rate, "d4_outlier_rate");
    rate(p.multi_treatment_rate, "multi_treatment_rate");
    range(p.d4_main_range, 1, "d4_main_range");
    range(p.d4_outlier_range, 1, "d4_outlier_range");
    range(p.d1_range, 1, "d1_range");
    range(p.d2_range, 1, "d2_range");
    range(p.d3_range, 1, "d3_range");
    range(p.waiting_range, 1, "waiting_range");
    if (p.patients_min > p.patients_max || p.patients_min < 0)
        throw ConfigError("patient bounds are contradictory");
    if (p.patients_std < 0) throw ConfigError("patients_std must be non-negative");
    if (p.days < 1) throw ConfigError("days must be >= 1");
    if (p.beds < 0 || p.chairs < 0 || p.beds + p.chairs < 1)
        throw ConfigError("need at least one bed or chair");
    double wsum = p.priority_weights[0] + p.priority_weights[1] + p.priority_weights[2];
    for (double w : p.priority_weights)
        if (w < 0) throw ConfigError("priority weights must be non-negative");
    if (std::abs(wsum - 1.0) > 1e-9)
        throw ConfigError("priority weights must sum to 1");
    if (p.max_orders < 1) throw ConfigError("max_orders must be >= 1");
    if (p.variant == Variant::extended) {
        if (p.nurses < 1 || p.nurse_capacity < 1)
            throw ConfigError("extended generation needs nurses and a capacity");
        if (p.drug_catalog_size < 1)
            throw ConfigError("extended generation needs a drug catalog");
        if (p.days != 1) throw ConfigError("extended instances are single-day");
    }
    if (p.variant == Variant::daily && p.days != 1)
        throw ConfigError("daily instances are single-day");
}

namespace {

int uniform_in(std::mt19937_64& rng, std::pair<int, int> range) {
    return std::uniform_int_distribution<int>(range.first, range.second)(rng);
}

bool coin(std::mt19937_64& rng, double rate) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < rate;
}

int clamped_normal(std::mt19937_64& rng, double mean, double std_dev, int lo, int hi) {
    double v = std::normal_distribution<double>(mean, std_dev)(rng);
    int n = static_cast<int>(std::lround(v));
    return std::clamp(n, lo, hi);
}

// Number of orders for a multi-treatment patient: halving weights over
// 2..max give an expected chain length near the published 634/542 ratio.
int chain_length(std::mt19937_64& rng, int max_orders) {
    std::vector<double> weights;
    double w = 1.0;
    for (int k = 2; k <= max_orders; ++k, w /= 2.0) weights.push_back(w);
    std::discrete_distribution<int> dist(weights.begin(), weights.end());
    return 2 + dist(rng);
}

// Gaps between consecutive orders: each at least one day, the chain as a
// whole kept inside the horizon.
std::vector<int> chain_gaps(std::mt19937_64& rng, int orders, int budget,
                            std::pair<int, int> waiting) {
    std::vector<int> gaps;
    int remaining = budget;
    for (int i = 1; i < orders; ++i) {
        int reserve = orders - 1 - i;
        int hi = std::min(waiting.second, remaining - reserve);
        int gap = uniform_in(rng, {waiting.first, std::max(waiting.first, hi)});
        gaps.push_back(gap);
        remaining -= gap;
    }
    return gaps;
}

}  // namespace

Instance generate(const GenParams& p, std::uint64_t seed) {
    check_params(p);
    std::mt19937_64 rng(seed);

    Instance inst;
    inst.variant = p.variant;
    inst.days = p.days;
    for (int i = 1; i <= p.beds; ++i) inst.resources.beds.push_back(i);
    for (int i = 1; i <= p.chairs; ++i) inst.resources.chairs.push_back(i);
    if (p.variant == Variant::extended) {
        for (int i = 1; i <= p.nurses; ++i) inst.resources.nurses.push_back(i);
        inst.resources.nurse_capacity = p.nurse_capacity;
        for (int d = 1; d <= p.drug_catalog_size; ++d)
            for (int day = 1; day <= p.days; ++day)
                inst.resources.drug_limits[{"D" + std::to_string(d), day}] =
                    p.drug_limit;
    }

    int patients = clamped_normal(rng, p.patients_mean, p.patients_std,
                                  p.patients_min, p.patients_max);

    std::discrete_distribution<int> priority_dist(p.priority_weights.begin(),
                                                  p.priority_weights.end());

    for (int pid = 1; pid <= patients; ++pid) {
        int orders = 1;
        if (p.variant == Variant::weekly && p.days >= 2 && p.max_orders >= 2 &&
            coin(rng, p.multi_treatment_rate))
            orders = std::min(chain_length(rng, p.max_orders), p.days);
        std::vector<int> gaps = chain_gaps(rng, orders, p.days - 1, p.waiting_range);

        for (int order = 0; order < orders; ++order) {
            Registration r;
            r.patient_id = pid;
            r.order = order;
            r.waiting_days = order == 0 ? 0 : gaps[order - 1];
            r.phases.d1 = uniform_in(rng, p.d1_range);
            if (coin(rng, p.phase2_rate)) {
                r.phases.d2 = uniform_in(rng, p.d2_range);
                r.phases.d3 = uniform_in(rng, p.d3_range);
            }
            r.phases.d4 = coin(rng, p.d4_outlier_rate)
                              ? uniform_in(rng, p.d4_outlier_range)
                              : uniform_in(rng, p.d4_main_range);
            r.seat_pref = coin(rng, p.chair_rate) ? SeatType::chair : SeatType::bed;
            if (p.variant == Variant::extended) {
                r.priority = 1 + priority_dist(rng);
                r.drug = "D" + std::to_string(1 + std::uniform_int_distribution<int>(
                                                      0, p.drug_catalog_size - 1)(rng));
            }
            inst.registrations.push_back(std::move(r));
        }
    }

    check_instance(inst);
    return inst;
}

DisruptionSet generate_disruptions(const Instance& inst, const Schedule& sch,
                                   int n_unavail, int n_regimen_changes,
                                   std::uint64_t seed) {
    if (n_unavail < 0 || n_regimen_changes < 0)
        throw ConfigError("disruption counts must be non-negative");
    std::mt19937_64 rng(seed);

    std::map<int, std::map<int, int>> day_of;  // patient -> order -> day
    for (const Assignment& a : sch.assignments)
        day_of[a.reg.patient_id][a.reg.order] = a.day;

    if (static_cast<size_t>(n_unavail) > day_of.size())
        throw ConfigError("fewer scheduled patients than requested unavailabilities");

    // A patient is a postponement candidate when pushing the affected
    // chain one day later still fits the horizon. The unavailability
    // lands on the first appointment so a whole chain moves together.
    struct Candidate {
        int pid;
        int day;
        bool keeps_prefix;  // day >= 2 leaves a nonempty frozen prefix
    };
    std::vector<Candidate> candidates;
    for (const auto& [pid, orders] : day_of) {
        int first_day = orders.begin()->second;
        int last_day = orders.rbegin()->second;
        if (last_day + 1 > inst.days) continue;
        candidates.push_back({pid, first_day, first_day >= 2});
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         return a.keeps_prefix > b.keeps_prefix;
                     });
    if (static_cast<int>(candidates.size()) < n_unavail)
        throw ConfigError("not enough postponable patients for the scenario");

    DisruptionSet dis;
    std::set<int> unavailable_pids;
    for (int i = 0; i < n_unavail; ++i) {
        dis.unavailable.insert({candidates[i].pid, candidates[i].day});
        unavailable_pids.insert(candidates[i].pid);
    }

    // Regimen changes pick multi-order patients that were left available;
    // the tail from a random later order is rewritten with fresh gaps and
    // durations that still fit the horizon.
    std::vector<int> multi;
    for (const auto& [pid, orders] : day_of)
        if (orders.size() >= 2 && !unavailable_pids.count(pid)) multi.push_back(pid);
    std::shuffle(multi.begin(), multi.end(), rng);
    if (static_cast<int>(multi.size()) < n_regimen_changes)
        throw ConfigError("not enough multi-order patients for the requested "
                          "regimen changes");

    GenParams defaults;
    int changed = 0;
    for (int pid : multi) {
        if (changed == n_regimen_changes) break;
        const auto& orders = day_of[pid];
        int last_order = orders.rbegin()->first;
        // Start of the rewritten tail: keep at least order 0, and leave
        // room for one day per rewritten gap.
        std::vector<int> starts;
        for (int k = 1; k <= last_order; ++k) {
            int anchor_day = orders.at(k - 1);
            if (inst.days - anchor_day >= last_order - k + 1) starts.push_back(k);
        }
        if (starts.empty()) continue;
        int k = starts[std::uniform_int_distribution<size_t>(0, starts.size() - 1)(rng)];
        int budget = inst.days - orders.at(k - 1);
        std::vector<int> gaps =
            chain_gaps(rng, last_order - k + 2, budget, defaults.waiting_range);
        for (int order = k; order <= last_order; ++order) {
            const Registration* original = inst.find({pid, order});
            Registration r = *original;
            r.waiting_days = gaps[order - k];
            r.phases.d4 = uniform_in(rng, defaults.d4_main_range);
            dis.replacements.push_back(std::move(r));
        }
        ++changed;
    }
    if (changed < n_regimen_changes)
        throw ConfigError("not enough rewritable regimens for the scenario");

    std::sort(dis.replacements.begin(), dis.replacements.end(),
              [](const Registration& a, const Registration& b) {
                  return std::tie(a.patient_id, a.order) <
                         std::tie(b.patient_id, b.order);
              });
    check_disruptions(inst, dis);
    return dis;
}

}  // namespace cts
