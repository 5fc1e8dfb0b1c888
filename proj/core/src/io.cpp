#include "cts/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "cts/objective.hpp"

namespace cts {

namespace {

// ---------------------------------------------------------------------
// Fact tokenizer and reader
// ---------------------------------------------------------------------

struct Arg {
    bool is_string = false;
    long long number = 0;
    std::string text;
    int line = 1, column = 1;
};

struct Fact {
    std::string name;
    std::vector<Arg> args;
    int line = 1, column = 1;

    int arity() const { return static_cast<int>(args.size()); }
};

class FactReader {
public:
    explicit FactReader(std::string_view text) : text_(text) {}

    std::vector<Fact> read_all() {
        std::vector<Fact> facts;
        skip_space_and_comments();
        while (!at_end()) {
            facts.push_back(read_fact());
            skip_space_and_comments();
        }
        return facts;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, column_);
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (at_end() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    Fact read_fact() {
        Fact fact;
        fact.line = line_;
        fact.column = column_;
        if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected a predicate name");
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            fact.name += advance();
        skip_space_and_comments();
        expect('(');
        skip_space_and_comments();
        if (at_end()) fail("unterminated fact");
        if (peek() == ')') fail("facts need at least one argument");
        while (true) {
            fact.args.push_back(read_arg());
            skip_space_and_comments();
            if (at_end()) fail("unterminated fact");
            if (peek() == ',') {
                advance();
                skip_space_and_comments();
                continue;
            }
            break;
        }
        expect(')');
        skip_space_and_comments();
        expect('.');
        return fact;
    }

    Arg read_arg() {
        Arg arg;
        arg.line = line_;
        arg.column = column_;
        if (at_end()) fail("expected an argument");
        char c = peek();
        if (c == '"') {
            advance();
            arg.is_string = true;
            while (!at_end() && peek() != '"' && peek() != '\n') arg.text += advance();
            if (at_end() || peek() != '"') fail("unterminated string");
            advance();
            return arg;
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            if (c == '-') digits += advance();
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                digits += advance();
            if (digits.empty() || digits == "-") fail("malformed integer");
            try {
                arg.number = std::stoll(digits);
            } catch (const std::exception&) {
                fail("integer out of range");
            }
            return arg;
        }
        fail("expected an integer or a quoted string");
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

[[noreturn]] void fail_at(const Fact& f, const std::string& msg) {
    throw ParseError(msg, f.line, f.column);
}

[[noreturn]] void fail_at(const Arg& a, const std::string& msg) {
    throw ParseError(msg, a.line, a.column);
}

long long int_arg(const Fact& f, int i) {
    const Arg& a = f.args[i];
    if (a.is_string) fail_at(a, f.name + ": argument " + std::to_string(i + 1) + " must be an integer");
    return a.number;
}

std::string str_arg(const Fact& f, int i) {
    const Arg& a = f.args[i];
    if (!a.is_string) fail_at(a, f.name + ": argument " + std::to_string(i + 1) + " must be a quoted string");
    return a.text;
}

SeatType seat_pref_arg(const Fact& f, int i) {
    std::string s = str_arg(f, i);
    if (s == "bed") return SeatType::bed;
    if (s == "chair") return SeatType::chair;
    fail_at(f.args[i], f.name + ": seat must be \"bed\" or \"chair\", got \"" + s + "\"");
}

void expect_arity(const Fact& f, int arity) {
    if (f.arity() != arity)
        fail_at(f, f.name + "/" + std::to_string(f.arity()) + ": expected " +
                       std::to_string(arity) + " arguments");
}

// Contiguous 1..n check for day/ts/ats declarations.
int contiguous_range(const std::vector<long long>& values, const Fact& where,
                     const char* what) {
    std::set<long long> seen(values.begin(), values.end());
    if (seen.size() != values.size())
        fail_at(where, std::string("duplicate ") + what + " fact");
    long long expect = 1;
    for (long long v : seen) {
        if (v != expect)
            fail_at(where, std::string(what) + " facts must cover 1..n contiguously");
        ++expect;
    }
    return static_cast<int>(values.size());
}

Registration reg_from_fact(const Fact& f) {
    Registration r;
    r.patient_id = static_cast<int>(int_arg(f, 0));
    r.order = static_cast<int>(int_arg(f, 1));
    r.waiting_days = static_cast<int>(int_arg(f, 2));
    r.phases.d4 = static_cast<int>(int_arg(f, 3));
    r.phases.d3 = static_cast<int>(int_arg(f, 4));
    r.phases.d2 = static_cast<int>(int_arg(f, 5));
    r.phases.d1 = static_cast<int>(int_arg(f, 6));
    r.seat_pref = seat_pref_arg(f, 7);
    if (f.arity() == 10) {
        r.priority = static_cast<int>(int_arg(f, 8));
        r.drug = str_arg(f, 9);
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------

Instance parse_instance(std::string_view text) {
    std::vector<Fact> facts = FactReader(text).read_all();

    Instance inst;
    std::vector<long long> days, ts, ats;
    const Fact* day_fact = nullptr;
    const Fact* ts_fact = nullptr;
    const Fact* ats_fact = nullptr;
    std::vector<std::pair<Registration, const Fact*>> regs;
    bool saw_core_reg = false, saw_ext_reg = false;
    bool saw_nurse_fields = false;

    for (const Fact& f : facts) {
        if (f.name == "reg") {
            if (f.arity() != 8 && f.arity() != 10)
                fail_at(f, "reg expects 8 or 10 arguments");
            (f.arity() == 8 ? saw_core_reg : saw_ext_reg) = true;
            regs.emplace_back(reg_from_fact(f), &f);
        } else if (f.name == "day") {
            expect_arity(f, 1);
            days.push_back(int_arg(f, 0));
            day_fact = &f;
        } else if (f.name == "ts") {
            expect_arity(f, 1);
            ts.push_back(int_arg(f, 0));
            ts_fact = &f;
        } else if (f.name == "ats") {
            expect_arity(f, 1);
            ats.push_back(int_arg(f, 0));
            ats_fact = &f;
        } else if (f.name == "bed") {
            expect_arity(f, 1);
            inst.resources.beds.push_back(static_cast<int>(int_arg(f, 0)));
        } else if (f.name == "chair") {
            expect_arity(f, 1);
            inst.resources.chairs.push_back(static_cast<int>(int_arg(f, 0)));
        } else if (f.name == "nurse") {
            expect_arity(f, 1);
            inst.resources.nurses.push_back(static_cast<int>(int_arg(f, 0)));
            saw_nurse_fields = true;
        } else if (f.name == "nurseLimits") {
            expect_arity(f, 1);
            if (inst.resources.nurse_capacity) fail_at(f, "duplicate nurseLimits fact");
            inst.resources.nurse_capacity = static_cast<int>(int_arg(f, 0));
            saw_nurse_fields = true;
        } else if (f.name == "drug") {
            expect_arity(f, 3);
            std::string id = str_arg(f, 0);
            long long limit = int_arg(f, 1);
            int day = static_cast<int>(int_arg(f, 2));
            if (limit < 0) fail_at(f, "drug limit must be non-negative");
            auto key = std::make_pair(id, day);
            if (inst.resources.drug_limits.count(key))
                fail_at(f, "duplicate drug fact for \"" + id + "\" on day " +
                               std::to_string(day));
            inst.resources.drug_limits[key] = limit;
        } else {
            fail_at(f, "unknown predicate '" + f.name + "' in an instance file");
        }
    }

    if (saw_core_reg && saw_ext_reg)
        throw ParseError("cannot mix reg/8 and reg/10 facts", 1, 1);

    if (!ts.empty()) inst.grid.ts_count = contiguous_range(ts, *ts_fact, "ts");
    if (!ats.empty()) {
        int n = contiguous_range(ats, *ats_fact, "ats");
        if (!ts.empty() && n != 2 * inst.grid.ts_count)
            fail_at(*ats_fact, "ats facts disagree with ts facts");
        inst.grid.ats_count = n;
        if (ts.empty()) inst.grid.ts_count = n / 2;
    }
    if (!ts.empty() && ats.empty()) inst.grid.ats_count = 2 * inst.grid.ts_count;
    if (inst.grid.ats_count != 2 * inst.grid.ts_count)
        throw ParseError("grid facts must satisfy ats = 2 * ts", 1, 1);

    bool multi_order = false;
    for (const auto& [r, f] : regs)
        if (r.order > 0) multi_order = true;

    if (saw_ext_reg || saw_nurse_fields)
        inst.variant = Variant::extended;
    else if (multi_order || (!days.empty() && days.size() > 1))
        inst.variant = Variant::weekly;
    else
        inst.variant = Variant::daily;

    if (!days.empty())
        inst.days = contiguous_range(days, *day_fact, "day");
    else
        inst.days = inst.variant == Variant::weekly ? 5 : 1;

    for (auto& [r, f] : regs) inst.registrations.push_back(std::move(r));
    std::sort(inst.registrations.begin(), inst.registrations.end(),
              [](const Registration& a, const Registration& b) {
                  return std::tie(a.patient_id, a.order) <
                         std::tie(b.patient_id, b.order);
              });

    try {
        check_instance(inst);
    } catch (const InputError& e) {
        throw ParseError(e.what(), 1, 1);
    }
    return inst;
}

std::string emit_instance(const Instance& inst) {
    std::ostringstream out;
    out << "% cts instance: " << to_string(inst.variant) << ", "
        << inst.registrations.size() << " registrations\n";
    for (int d = 1; d <= inst.days; ++d) out << "day(" << d << ").\n";
    TimeGrid def;
    if (inst.grid.ts_count != def.ts_count) {
        for (int t = 1; t <= inst.grid.ts_count; ++t) out << "ts(" << t << ").\n";
        for (int t = 1; t <= inst.grid.ats_count; ++t) out << "ats(" << t << ").\n";
    }
    for (int id : inst.resources.beds) out << "bed(" << id << ").\n";
    for (int id : inst.resources.chairs) out << "chair(" << id << ").\n";
    for (int id : inst.resources.nurses) out << "nurse(" << id << ").\n";
    if (inst.resources.nurse_capacity)
        out << "nurseLimits(" << *inst.resources.nurse_capacity << ").\n";
    for (const auto& [key, limit] : inst.resources.drug_limits)
        out << "drug(\"" << key.first << "\"," << limit << "," << key.second << ").\n";

    std::vector<const Registration*> regs;
    for (const Registration& r : inst.registrations) regs.push_back(&r);
    std::sort(regs.begin(), regs.end(),
              [](const Registration* a, const Registration* b) {
                  return std::tie(a->patient_id, a->order) <
                         std::tie(b->patient_id, b->order);
              });
    for (const Registration* r : regs) {
        out << "reg(" << r->patient_id << ',' << r->order << ',' << r->waiting_days
            << ',' << r->phases.d4 << ',' << r->phases.d3 << ',' << r->phases.d2
            << ',' << r->phases.d1 << ",\"" << to_string(r->seat_pref) << '"';
        if (inst.variant == Variant::extended)
            out << ',' << r->priority.value_or(0) << ",\"" << r->drug.value_or("")
                << '"';
        out << ").\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------

Schedule parse_schedule(std::string_view text, const Instance& inst) {
    std::vector<Fact> facts = FactReader(text).read_all();

    std::set<int> beds(inst.resources.beds.begin(), inst.resources.beds.end());
    std::set<int> chairs(inst.resources.chairs.begin(), inst.resources.chairs.end());
    std::set<int> nurses(inst.resources.nurses.begin(), inst.resources.nurses.end());

    Schedule sch;
    std::string seen_predicate;
    struct SeatFact {
        SeatRef seat;
        int rid, day;
        const Fact* fact;
    };
    std::vector<SeatFact> seat_facts;
    struct NurseFact {
        int nurse, rid, day;
        const Fact* fact;
    };
    std::vector<NurseFact> nurse_facts;

    for (const Fact& f : facts) {
        if (f.name == "x" || f.name == "y") {
            if (seen_predicate.empty()) seen_predicate = f.name;
            if (f.name != seen_predicate)
                fail_at(f, "schedule mixes x and y facts");
            expect_arity(f, 6);
            Assignment a;
            a.reg.patient_id = static_cast<int>(int_arg(f, 0));
            a.day = static_cast<int>(int_arg(f, 1));
            a.ts = static_cast<int>(int_arg(f, 2));
            long long ph4 = int_arg(f, 3);
            a.reg.order = static_cast<int>(int_arg(f, 4));
            SeatType pref = seat_pref_arg(f, 5);
            const Registration* reg = inst.find(a.reg);
            if (!reg)
                fail_at(f, "assignment references unknown registration (" +
                               std::to_string(a.reg.patient_id) + "," +
                               std::to_string(a.reg.order) + ")");
            if (ph4 != reg->phases.d4)
                fail_at(f, "duration column " + std::to_string(ph4) +
                               " contradicts the registration (d4 = " +
                               std::to_string(reg->phases.d4) + ")");
            if (pref != reg->seat_pref)
                fail_at(f, "preference column contradicts the registration");
            sch.assignments.push_back(a);
        } else if (f.name == "bed" || f.name == "chair") {
            expect_arity(f, 3);
            SeatFact sf;
            sf.seat.type = f.name == "bed" ? SeatType::bed : SeatType::chair;
            sf.seat.id = static_cast<int>(int_arg(f, 0));
            sf.rid = static_cast<int>(int_arg(f, 1));
            sf.day = static_cast<int>(int_arg(f, 2));
            sf.fact = &f;
            const std::set<int>& pool = sf.seat.type == SeatType::bed ? beds : chairs;
            if (!pool.count(sf.seat.id))
                fail_at(f, std::string(to_string(sf.seat.type)) + " " +
                               std::to_string(sf.seat.id) + " is not in the pool");
            seat_facts.push_back(sf);
        } else if (f.name == "nurses") {
            expect_arity(f, 3);
            NurseFact nf;
            nf.nurse = static_cast<int>(int_arg(f, 0));
            nf.rid = static_cast<int>(int_arg(f, 1));
            nf.day = static_cast<int>(int_arg(f, 2));
            nf.fact = &f;
            if (!nurses.count(nf.nurse))
                fail_at(f, "nurse " + std::to_string(nf.nurse) + " is not in the pool");
            nurse_facts.push_back(nf);
        } else {
            fail_at(f, "unknown predicate '" + f.name + "' in a schedule file");
        }
    }

    for (const SeatFact& sf : seat_facts) {
        bool attached = false;
        for (Assignment& a : sch.assignments) {
            if (a.reg.patient_id != sf.rid || a.day != sf.day) continue;
            if (a.seat && !(*a.seat == sf.seat))
                fail_at(*sf.fact, "conflicting seat facts for registration " +
                                      std::to_string(sf.rid) + " on day " +
                                      std::to_string(sf.day));
            a.seat = sf.seat;
            attached = true;
        }
        if (!attached)
            fail_at(*sf.fact, "seat fact has no matching assignment (patient " +
                                  std::to_string(sf.rid) + ", day " +
                                  std::to_string(sf.day) + ")");
    }
    for (const NurseFact& nf : nurse_facts) {
        bool attached = false;
        for (Assignment& a : sch.assignments) {
            if (a.reg.patient_id != nf.rid || a.day != nf.day) continue;
            if (a.nurse && *a.nurse != nf.nurse)
                fail_at(*nf.fact, "conflicting nurse facts for registration " +
                                      std::to_string(nf.rid) + " on day " +
                                      std::to_string(nf.day));
            a.nurse = nf.nurse;
            attached = true;
        }
        if (!attached)
            fail_at(*nf.fact, "nurse fact has no matching assignment (patient " +
                                  std::to_string(nf.rid) + ", day " +
                                  std::to_string(nf.day) + ")");
    }

    canonicalize(sch);
    return sch;
}

std::string emit_schedule(const Instance& inst, const Schedule& sch,
                          std::string_view predicate) {
    if (predicate != "x" && predicate != "y")
        throw UsageError("schedule predicate must be \"x\" or \"y\"");
    Schedule sorted = sch;
    canonicalize(sorted);

    std::ostringstream out;
    for (const Assignment& a : sorted.assignments) {
        const Registration& reg = inst.reg_of(a);
        out << predicate << '(' << a.reg.patient_id << ',' << a.day << ',' << a.ts
            << ',' << reg.phases.d4 << ',' << a.reg.order << ",\""
            << to_string(reg.seat_pref) << "\").\n";
    }
    for (const Assignment& a : sorted.assignments)
        if (a.seat)
            out << to_string(a.seat->type) << '(' << a.seat->id << ','
                << a.reg.patient_id << ',' << a.day << ").\n";
    for (const Assignment& a : sorted.assignments)
        if (a.nurse)
            out << "nurses(" << *a.nurse << ',' << a.reg.patient_id << ',' << a.day
                << ").\n";
    return out.str();
}

// ---------------------------------------------------------------------
// Disruptions
// ---------------------------------------------------------------------

DisruptionSet parse_disruptions(std::string_view text, const Instance& inst) {
    std::vector<Fact> facts = FactReader(text).read_all();
    DisruptionSet dis;
    for (const Fact& f : facts) {
        if (f.name == "un") {
            expect_arity(f, 2);
            dis.unavailable.insert({static_cast<int>(int_arg(f, 0)),
                                    static_cast<int>(int_arg(f, 1))});
        } else if (f.name == "regN") {
            expect_arity(f, 8);
            dis.replacements.push_back(reg_from_fact(f));
        } else {
            fail_at(f, "unknown predicate '" + f.name + "' in a disruption file");
        }
    }
    std::sort(dis.replacements.begin(), dis.replacements.end(),
              [](const Registration& a, const Registration& b) {
                  return std::tie(a.patient_id, a.order) <
                         std::tie(b.patient_id, b.order);
              });
    try {
        check_disruptions(inst, dis);
    } catch (const InputError& e) {
        throw ParseError(e.what(), 1, 1);
    }
    return dis;
}

std::string emit_disruptions(const DisruptionSet& dis) {
    std::ostringstream out;
    for (const auto& [pid, day] : dis.unavailable)
        out << "un(" << pid << ',' << day << ").\n";
    std::vector<const Registration*> rows;
    for (const Registration& r : dis.replacements) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(),
              [](const Registration* a, const Registration* b) {
                  return std::tie(a->patient_id, a->order) <
                         std::tie(b->patient_id, b->order);
              });
    for (const Registration* r : rows)
        out << "regN(" << r->patient_id << ',' << r->order << ',' << r->waiting_days
            << ',' << r->phases.d4 << ',' << r->phases.d3 << ',' << r->phases.d2
            << ',' << r->phases.d1 << ",\"" << to_string(r->seat_pref) << "\").\n";
    return out.str();
}

// ---------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------

std::string emit_report(const Instance& inst, const Schedule& sch,
                        const ReportExtras& extras) {
    std::ostringstream out;
    out << "day,ats,phase2_count\n";
    for (int day = 1; day <= inst.days; ++day) {
        std::vector<int> bins = phase2_histogram(inst, sch, day);
        for (int slot = 1; slot <= inst.grid.ats_count; ++slot)
            if (bins[slot] > 0) out << day << ',' << slot << ',' << bins[slot] << '\n';
    }

    out << "\nmetric,day,value\n";
    CostVector cost = cost_vector(inst, sch);
    for (const auto& [level, value] : cost.entries())
        out << "cost_level_" << level << ",," << value << '\n';
    out << "m_star,," << missed_preferences(inst, sch) << '\n';
    for (int day = 1; day <= inst.days; ++day) {
        DayStats st = day_stats(inst, sch, day);
        out << "day_max," << day << ',' << st.max_bin << '\n';
        out << "day_min_nonzero," << day << ',' << st.min_nonzero_bin << '\n';
        out << "day_spread," << day << ',' << (st.max_bin - st.min_nonzero_bin) << '\n';
        out << "day_load," << day << ',' << st.phase2_count << '\n';
    }
    if (extras.unnecessary_moves)
        out << "unnecessary_moves,," << *extras.unnecessary_moves << '\n';
    return out.str();
}

// ---------------------------------------------------------------------
// Generator parameter files
// ---------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, int line) {
    size_t used = 0;
    double d;
    try {
        d = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + value + "'", line, 1);
    }
    if (used != value.size())
        throw ParseError("malformed number '" + value + "'", line, 1);
    return d;
}

long long parse_int(const std::string& value, int line) {
    size_t used = 0;
    long long v;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        throw ParseError("malformed integer '" + value + "'", line, 1);
    }
    if (used != value.size())
        throw ParseError("malformed integer '" + value + "'", line, 1);
    return v;
}

std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

std::pair<int, int> parse_range(const std::string& value, int line) {
    auto parts = split_commas(value);
    if (parts.size() != 2)
        throw ParseError("range must be 'lo,hi', got '" + value + "'", line, 1);
    return {static_cast<int>(parse_int(parts[0], line)),
            static_cast<int>(parse_int(parts[1], line))};
}

}  // namespace

GenParams parse_params(std::string_view text) {
    GenParams p;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("expected 'key = value'", line_no, 1);

        if (key == "variant") {
            if (value == "daily") p.variant = Variant::daily;
            else if (value == "weekly") p.variant = Variant::weekly;
            else if (value == "extended") p.variant = Variant::extended;
            else throw ParseError("unknown variant '" + value + "'", line_no, 1);
        } else if (key == "days") p.days = static_cast<int>(parse_int(value, line_no));
        else if (key == "patients_mean") p.patients_mean = parse_double(value, line_no);
        else if (key == "patients_std") p.patients_std = parse_double(value, line_no);
        else if (key == "patients_min") p.patients_min = static_cast<int>(parse_int(value, line_no));
        else if (key == "patients_max") p.patients_max = static_cast<int>(parse_int(value, line_no));
        else if (key == "phase2_rate") p.phase2_rate = parse_double(value, line_no);
        else if (key == "chair_rate") p.chair_rate = parse_double(value, line_no);
        else if (key == "d4_main_range") p.d4_main_range = parse_range(value, line_no);
        else if (key == "d4_outlier_rate") p.d4_outlier_rate = parse_double(value, line_no);
        else if (key == "d4_outlier_range") p.d4_outlier_range = parse_range(value, line_no);
        else if (key == "d1_range") p.d1_range = parse_range(value, line_no);
        else if (key == "d2_range") p.d2_range = parse_range(value, line_no);
        else if (key == "d3_range") p.d3_range = parse_range(value, line_no);
        else if (key == "multi_treatment_rate") p.multi_treatment_rate = parse_double(value, line_no);
        else if (key == "max_orders") p.max_orders = static_cast<int>(parse_int(value, line_no));
        else if (key == "waiting_range") p.waiting_range = parse_range(value, line_no);
        else if (key == "priority_weights") {
            auto parts = split_commas(value);
            if (parts.size() != 3)
                throw ParseError("priority_weights needs three values", line_no, 1);
            for (int i = 0; i < 3; ++i)
                p.priority_weights[i] = parse_double(parts[i], line_no);
        } else if (key == "nurses") p.nurses = static_cast<int>(parse_int(value, line_no));
        else if (key == "nurse_capacity") p.nurse_capacity = static_cast<int>(parse_int(value, line_no));
        else if (key == "beds") p.beds = static_cast<int>(parse_int(value, line_no));
        else if (key == "chairs") p.chairs = static_cast<int>(parse_int(value, line_no));
        else if (key == "drug_catalog_size") p.drug_catalog_size = static_cast<int>(parse_int(value, line_no));
        else if (key == "drug_limit") p.drug_limit = parse_int(value, line_no);
        else throw ParseError("unknown parameter '" + key + "'", line_no, 1);
    }
    check_params(p);
    return p;
}

std::string emit_params(const GenParams& p) {
    std::ostringstream out;
    out << "variant = " << to_string(p.variant) << '\n';
    out << "days = " << p.days << '\n';
    out << "patients_mean = " << p.patients_mean << '\n';
    out << "patients_std = " << p.patients_std << '\n';
    out << "patients_min = " << p.patients_min << '\n';
    out << "patients_max = " << p.patients_max << '\n';
    out << "phase2_rate = " << p.phase2_rate << '\n';
    out << "chair_rate = " << p.chair_rate << '\n';
    out << "d4_main_range = " << p.d4_main_range.first << ',' << p.d4_main_range.second << '\n';
    out << "d4_outlier_rate = " << p.d4_outlier_rate << '\n';
    out << "d4_outlier_range = " << p.d4_outlier_range.first << ',' << p.d4_outlier_range.second << '\n';
    out << "d1_range = " << p.d1_range.first << ',' << p.d1_range.second << '\n';
    out << "d2_range = " << p.d2_range.first << ',' << p.d2_range.second << '\n';
    out << "d3_range = " << p.d3_range.first << ',' << p.d3_range.second << '\n';
    out << "multi_treatment_rate = " << p.multi_treatment_rate << '\n';
    out << "max_orders = " << p.max_orders << '\n';
    out << "waiting_range = " << p.waiting_range.first << ',' << p.waiting_range.second << '\n';
    out << "priority_weights = " << p.priority_weights[0] << ',' << p.priority_weights[1]
        << ',' << p.priority_weights[2] << '\n';
    out << "nurses = " << p.nurses << '\n';
    out << "nurse_capacity = " << p.nurse_capacity << '\n';
    out << "beds = " << p.beds << '\n';
    out << "chairs = " << p.chairs << '\n';
    out << "drug_catalog_size = " << p.drug_catalog_size << '\n';
    out << "drug_limit = " << p.drug_limit << '\n';
    return out.str();
}

}  // namespace cts
