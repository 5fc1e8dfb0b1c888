// Command-line front end: generate, solve, reschedule, validate, report.
//
// Exit codes: 0 success / schedule valid, 1 violations found, 2 infeasible
// or no solution, 3 usage error, 4 I/O or parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cts/generator.hpp"
#include "cts/io.hpp"
#include "cts/objective.hpp"
#include "cts/resched.hpp"
#include "cts/solver.hpp"
#include "cts/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 3;
constexpr int kExitIo = 4;

struct ExitWith {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExitWith{kExitIo, "cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExitWith{kExitIo, "cannot write " + path};
    out << content;
    if (!out) throw ExitWith{kExitIo, "write failed for " + path};
}

cts::Variant variant_of(const std::string& mode) {
    if (mode == "daily") return cts::Variant::daily;
    if (mode == "weekly") return cts::Variant::weekly;
    if (mode == "extended") return cts::Variant::extended;
    throw ExitWith{kExitUsage, "unknown mode '" + mode + "'"};
}

cts::Instance load_instance(const std::string& path, const std::string& mode) {
    cts::Instance inst = cts::parse_instance(read_file(path));
    if (!mode.empty() && inst.variant != variant_of(mode))
        throw ExitWith{kExitUsage, path + " is a " +
                                       std::string(to_string(inst.variant)) +
                                       " instance, not " + mode};
    return inst;
}

cts::SolverConfig make_config(double time_limit, bool time_limit_set,
                              const cts::Instance& inst, std::uint64_t seed,
                              int workers, bool exact, bool emit_improvements) {
    cts::SolverConfig cfg;
    cfg.time_limit = time_limit_set
                         ? time_limit
                         : (inst.variant == cts::Variant::weekly ? 1200.0 : 60.0);
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.mode = exact ? cts::SolverConfig::Mode::exact
                     : cts::SolverConfig::Mode::anytime;
    cfg.emit_improvements = emit_improvements;
    if (emit_improvements)
        cfg.progress = [](double elapsed, const cts::CostVector& cost,
                          const cts::Schedule&) {
            std::fprintf(stderr, "t=%.3f cost=%s\n", elapsed,
                         cost.to_string().c_str());
        };
    return cfg;
}

void print_violations(const std::vector<cts::Violation>& violations) {
    for (const cts::Violation& v : violations)
        std::cout << to_string(v.code) << " " << v.message << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Chemotherapy treatment scheduling toolkit"};
    app.require_subcommand(1);

    std::string instance_path, schedule_path, old_path, disruptions_path;
    std::string params_path, out_path, report_path, disruptions_out, mode;
    double time_limit = 60.0;
    std::uint64_t seed = 0;
    int workers = 1;
    int n_unavail = 0, n_regimen = 0;
    bool exact = false, emit_improvements = false;

    auto* gen = app.add_subcommand("generate", "Generate an instance or a "
                                               "disruption scenario");
    gen->add_option("--params", params_path, "Generator parameter file");
    gen->add_option("--mode", mode, "daily, weekly, or extended");
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", out_path, "Instance file to write");
    gen->add_option("--instance", instance_path, "Instance (disruption mode)");
    gen->add_option("--schedule", schedule_path, "Schedule (disruption mode)");
    gen->add_option("--disruptions-out", disruptions_out,
                    "Disruption file to write");
    gen->add_option("--unavail", n_unavail, "Unavailable patients");
    gen->add_option("--regimen-changes", n_regimen, "Changed regimens");

    auto* solve_cmd = app.add_subcommand("solve", "Compute a schedule");
    solve_cmd->add_option("--instance", instance_path, "Instance file")->required();
    solve_cmd->add_option("--out", out_path, "Schedule file to write");
    solve_cmd->add_option("--report", report_path, "Report CSV to write");
    solve_cmd->add_option("--mode", mode, "Assert the instance variant");
    auto* tl = solve_cmd->add_option("--time-limit", time_limit, "Seconds");
    solve_cmd->add_option("--seed", seed, "Random seed");
    solve_cmd->add_option("--workers", workers, "Search threads");
    solve_cmd->add_flag("--exact", exact, "Exhaustive enumeration (tiny instances)");
    solve_cmd->add_flag("--emit-improvements", emit_improvements,
                        "Stream incumbents to stderr");

    auto* resched_cmd = app.add_subcommand("reschedule", "Repair a schedule "
                                                          "after disruptions");
    resched_cmd->add_option("--instance", instance_path, "Instance file")->required();
    resched_cmd->add_option("--old", old_path, "Previous schedule")->required();
    resched_cmd->add_option("--disruptions", disruptions_path, "Disruption file")
        ->required();
    resched_cmd->add_option("--out", out_path, "New schedule file to write");
    resched_cmd->add_option("--report", report_path, "Report CSV to write");
    auto* rtl = resched_cmd->add_option("--time-limit", time_limit, "Seconds");
    resched_cmd->add_option("--seed", seed, "Random seed");
    resched_cmd->add_option("--workers", workers, "Search threads");
    resched_cmd->add_flag("--emit-improvements", emit_improvements,
                          "Stream incumbents to stderr");

    auto* validate_cmd = app.add_subcommand("validate", "Check a schedule");
    validate_cmd->add_option("--instance", instance_path, "Instance file")
        ->required();
    validate_cmd->add_option("--schedule", schedule_path, "Schedule file")
        ->required();
    validate_cmd->add_option("--old", old_path, "Previous schedule (reschedule "
                                                "checks)");
    validate_cmd->add_option("--disruptions", disruptions_path,
                             "Disruption file (reschedule checks)");
    validate_cmd->add_option("--mode", mode, "Assert the instance variant");

    auto* report_cmd = app.add_subcommand("report", "Emit the report CSV");
    report_cmd->add_option("--instance", instance_path, "Instance file")->required();
    report_cmd->add_option("--schedule", schedule_path, "Schedule file")->required();
    report_cmd->add_option("--out", out_path, "CSV file to write (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (gen->parsed()) {
        if (disruptions_out.empty()) {
            if (out_path.empty())
                throw ExitWith{kExitUsage, "generate needs --out (or "
                                           "--disruptions-out)"};
            cts::GenParams params;
            if (!params_path.empty()) params = cts::parse_params(read_file(params_path));
            if (!mode.empty()) {
                cts::Variant v = variant_of(mode);
                if (params_path.empty()) {
                    if (v == cts::Variant::weekly)
                        params = cts::GenParams::weekly_defaults();
                    else if (v == cts::Variant::extended)
                        params = cts::GenParams::extended_defaults();
                } else if (params.variant != v) {
                    throw ExitWith{kExitUsage,
                                   "--mode contradicts the parameter file"};
                }
            }
            cts::Instance inst = cts::generate(params, seed);
            write_file(out_path, cts::emit_instance(inst));
            std::cout << "instance: " << inst.registrations.size()
                      << " registrations over " << inst.days << " day(s)\n";
        } else {
            if (instance_path.empty() || schedule_path.empty())
                throw ExitWith{kExitUsage, "disruption generation needs "
                                           "--instance and --schedule"};
            cts::Instance inst = load_instance(instance_path, mode);
            cts::Schedule sch = cts::parse_schedule(read_file(schedule_path), inst);
            cts::DisruptionSet dis =
                cts::generate_disruptions(inst, sch, n_unavail, n_regimen, seed);
            write_file(disruptions_out, cts::emit_disruptions(dis));
            std::cout << "disruptions: " << dis.unavailable.size()
                      << " unavailabilities, " << dis.replacements.size()
                      << " replacement rows\n";
        }
        return kExitOk;
    }

    if (solve_cmd->parsed()) {
        cts::Instance inst = load_instance(instance_path, mode);
        cts::SolverConfig cfg = make_config(time_limit, tl->count() > 0, inst, seed,
                                            workers, exact, emit_improvements);
        cts::SolveResult res = cts::solve(inst, cfg);
        if (res.status == cts::SolveResult::Status::infeasible) {
            std::cerr << "infeasible: " << res.reason << "\n";
            for (const cts::RegKey& k : res.witness)
                std::cerr << "  witness (" << k.patient_id << "," << k.order << ")\n";
            return kExitInfeasible;
        }
        if (res.status == cts::SolveResult::Status::no_solution) {
            std::cerr << "no solution: " << res.reason << "\n";
            return kExitInfeasible;
        }
        if (!out_path.empty()) write_file(out_path, cts::emit_schedule(inst, res.schedule));
        std::string report = cts::emit_report(inst, res.schedule);
        if (!report_path.empty())
            write_file(report_path, report);
        else if (!out_path.empty())
            write_file(out_path + ".csv", report);
        std::cout << "cost=" << res.cost.to_string() << "\n";
        if (res.proven_optimal) std::cout << "proven_optimal=true\n";
        return kExitOk;
    }

    if (resched_cmd->parsed()) {
        cts::Instance inst = load_instance(instance_path, mode);
        cts::Schedule old_sch = cts::parse_schedule(read_file(old_path), inst);
        cts::DisruptionSet dis =
            cts::parse_disruptions(read_file(disruptions_path), inst);
        cts::SolverConfig cfg = make_config(time_limit, rtl->count() > 0, inst,
                                            seed, workers, false, emit_improvements);
        cts::RescheduleResult res = cts::reschedule(inst, old_sch, dis, cfg);
        if (res.status == cts::SolveResult::Status::infeasible ||
            res.status == cts::SolveResult::Status::no_solution) {
            std::cerr << "reschedule failed: " << res.reason << "\n";
            for (const cts::RegKey& k : res.unplaceable)
                std::cerr << "  unplaceable (" << k.patient_id << "," << k.order
                          << ")\n";
            return kExitInfeasible;
        }
        cts::Instance current = cts::apply_disruptions(inst, dis);
        if (!out_path.empty())
            write_file(out_path, cts::emit_schedule(current, res.schedule, "y"));
        if (!report_path.empty()) {
            cts::ReportExtras extras;
            extras.unnecessary_moves = res.unnecessary_moves;
            write_file(report_path, cts::emit_report(current, res.schedule, extras));
        }
        std::cout << "cost=" << res.cost.to_string() << "\n";
        std::cout << "unnecessary moves: " << res.unnecessary_moves << "\n";
        std::cout << "missed preferences: "
                  << cts::missed_preferences(current, res.schedule) << "\n";
        return kExitOk;
    }

    if (validate_cmd->parsed()) {
        cts::Instance inst = load_instance(instance_path, mode);
        std::vector<cts::Violation> violations;
        if (!old_path.empty() || !disruptions_path.empty()) {
            if (old_path.empty() || disruptions_path.empty())
                throw ExitWith{kExitUsage,
                               "reschedule validation needs --old and "
                               "--disruptions"};
            cts::Schedule old_sch = cts::parse_schedule(read_file(old_path), inst);
            cts::DisruptionSet dis =
                cts::parse_disruptions(read_file(disruptions_path), inst);
            cts::Instance current = cts::apply_disruptions(inst, dis);
            cts::Schedule sch =
                cts::parse_schedule(read_file(schedule_path), current);
            violations = cts::validate_all(current, sch);
            std::vector<cts::Violation> r =
                cts::validate_reschedule(inst, old_sch, sch, dis);
            violations.insert(violations.end(), r.begin(), r.end());
        } else {
            cts::Schedule sch = cts::parse_schedule(read_file(schedule_path), inst);
            violations = cts::validate_all(inst, sch);
        }
        print_violations(violations);
        return violations.empty() ? kExitOk : kExitViolations;
    }

    if (report_cmd->parsed()) {
        cts::Instance inst = load_instance(instance_path, mode);
        cts::Schedule sch = cts::parse_schedule(read_file(schedule_path), inst);
        std::string csv = cts::emit_report(inst, sch);
        if (out_path.empty())
            std::cout << csv;
        else
            write_file(out_path, csv);
        return kExitOk;
    }

    throw ExitWith{kExitUsage, "no subcommand given"};
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ExitWith& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const cts::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const cts::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitIo;
    } catch (const cts::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cts::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cts::ConstructionError& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
