#include "feedsep/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "feedsep/audit.hpp"
#include "feedsep/dynamics.hpp"
#include "feedsep/errors.hpp"
#include "feedsep/fixtures.hpp"
#include "feedsep/model_io.hpp"

namespace feedsep {

namespace {

using Facts = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFinding = 1;
constexpr int kExitError = 2;

// ------------------------------------------------------------- rendering

bool is_token(const Facts& v) {
    if (v.is_structured()) return false;
    if (!v.is_string()) return true;
    const auto& s = v.get_ref<const std::string&>();
    return !s.empty() && s.find(' ') == std::string::npos;
}

std::string inline_text(const Facts& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "none";
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + inline_text(e);
        return s;
    }
    if (v.is_object()) {
        std::string s;
        for (const auto& [k, e] : v.items()) s += (s.empty() ? "" : " ") + k + "=" + inline_text(e);
        return s;
    }
    return v.dump();
}

// One "key: value" line per fact. Arrays of single-word scalars stay on one
// line; any other array gets one line per element.
void render_text(const Facts& facts, std::ostream& out) {
    for (const auto& [key, value] : facts.items()) {
        if (value.is_array() && !std::all_of(value.begin(), value.end(), is_token)) {
            for (const auto& e : value) out << key << ": " << inline_text(e) << '\n';
        } else if (value.is_array()) {
            out << key << ":";
            for (const auto& e : value) out << ' ' << inline_text(e);
            out << '\n';
        } else {
            out << key << ": " << inline_text(value) << '\n';
        }
    }
}

void emit(const Facts& facts, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << facts.dump(2) << '\n';
    } else {
        render_text(facts, out);
    }
}

// ------------------------------------------------------------- name utils

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        auto b = cur.find_first_not_of(" \t");
        auto e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

VarId lookup_var(const Scm& scm, const std::string& name) {
    auto id = scm.find(name);
    if (!id) throw InputError("unknown variable '" + name + "'");
    return *id;
}

VarSet var_set(const Scm& scm, const std::vector<std::string>& items) {
    VarSet out;
    for (const auto& item : items) {
        for (const auto& name : split(item, ',')) out.insert(lookup_var(scm, name));
    }
    return out;
}

Value parse_value(const Scm& scm, const std::string& text) {
    int v = -1;
    try {
        std::size_t used = 0;
        v = std::stoi(text, &used);
        if (used != text.size()) v = -1;
    } catch (const std::exception&) {
        v = -1;
    }
    if (v < 0 || v >= scm.modulus()) {
        throw InputError("value '" + text + "' outside 0.." + std::to_string(scm.modulus() - 1));
    }
    return v;
}

// "X4=0,X5=1" -> pairs in the given order.
std::vector<std::pair<std::string, std::string>> parse_pairs(const std::vector<std::string>& items) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& item : items) {
        for (const auto& part : split(item, ',')) {
            auto eq = part.find('=');
            if (eq == std::string::npos) throw InputError("expected NAME=VALUE, got '" + part + "'");
            out.emplace_back(part.substr(0, eq), part.substr(eq + 1));
        }
    }
    return out;
}

PartialAssignment partial(const Scm& scm, const std::vector<std::string>& items) {
    PartialAssignment out;
    for (const auto& [name, value] : parse_pairs(items)) {
        VarId id = lookup_var(scm, name);
        if (out.count(id)) throw InputError("variable '" + name + "' assigned twice");
        out[id] = parse_value(scm, value);
    }
    return out;
}

std::string names(const Scm& scm, const VarSet& s) {
    std::string out;
    for (VarId v : s) out += (out.empty() ? "" : ",") + scm.variable(v).name;
    return out;
}

std::string query_text(const Scm& scm, const SepQuery& q) {
    std::string s = names(scm, q.a) + " _||_ " + names(scm, q.b);
    if (!q.c.empty()) s += " | " + names(scm, q.c);
    return s;
}

Facts x_facts(const Scm& scm, const XState& x) {
    Facts f = Facts::object();
    for (std::size_t i = 0; i < scm.size(); ++i) f[scm.variable(VarId{i}).name] = x[VarId{i}];
    return f;
}

Facts u_facts(const Scm& scm, const UDraw& u) {
    Facts f = Facts::object();
    for (std::size_t i = 0; i < scm.size(); ++i) f[scm.variable(VarId{i}).disturbance.name] = u[VarId{i}];
    return f;
}

std::string schedule_text(const Scm& scm, const Schedule& s) {
    if (s.kind() == Schedule::Kind::Simultaneous) return "simultaneous";
    std::string out;
    for (VarId v : s.order()) out += (out.empty() ? "" : ",") + scm.variable(v).name;
    return out;
}

Facts model_header(const ModelSource& src) {
    Facts f = Facts::object();
    f["model"] = src.scm.name().empty() ? src.provenance : src.scm.name();
    return f;
}

void add_uniqueness_failure(Facts& f, const Scm& scm, const UniquenessReport& report) {
    f["uniqueness"] = "non-unique";
    if (report.witness) {
        f["witness u"] = u_facts(scm, report.witness->u);
        f["solution count"] = report.witness->solution_count;
        Facts sols = Facts::array();
        for (const auto& x : report.witness->solutions) sols.push_back(x_facts(scm, x));
        f["solution"] = sols;
    }
}

// -------------------------------------------------------------- commands

struct Options {
    std::string format = "text";
    std::string model;
    std::vector<std::string> a, b, c, u, event, given;
    std::size_t max_cond = 1;
    bool fail_on_violation = false;
    bool fail_on_nonunique = false;
    bool set_valued = false;
    std::string schedule;
    bool search = false;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    MinerConfig miner;
    std::string out_dir;
    std::string fixture_name;
};

SepQuery build_query(const Scm& scm, const Options& o) {
    SepQuery q{var_set(scm, o.a), var_set(scm, o.b), var_set(scm, o.c)};
    q.validate(scm.size());
    return q;
}

int cmd_check(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    Facts f = model_header(src);
    f["variables"] = scm.size();
    f["modulus"] = scm.modulus();
    Facts eff = Facts::array();
    for (VarId v : scm.effective_disturbances()) eff.push_back(scm.variable(v).disturbance.name);
    f["effective disturbances"] = eff;
    f["acyclic"] = scm.graph().is_acyclic();
    const auto report = check_uniqueness(scm);
    if (report.unique()) {
        f["uniqueness"] = "unique";
    } else {
        add_uniqueness_failure(f, scm, report);
    }
    emit(f, o.format, out);
    return !report.unique() && o.fail_on_nonunique ? kExitFinding : kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    UDraw u = UDraw::zeros(scm.size());
    std::vector<bool> given(scm.size(), false);
    for (const auto& [name, value] : parse_pairs(o.u)) {
        auto id = scm.find_disturbance(name);
        if (!id) throw InputError("unknown disturbance '" + name + "'");
        u[*id] = parse_value(scm, value);
        given[id->index] = true;
    }
    Facts f = model_header(src);
    std::string defaulted;
    for (std::size_t i = 0; i < scm.size(); ++i) {
        if (!given[i]) defaulted += " " + scm.variable(VarId{i}).disturbance.name;
    }
    if (!defaulted.empty()) f["notice"] = "unspecified disturbances set to 0:" + defaulted;
    f["u"] = u_facts(scm, u);
    const auto sols = consistent_solutions(scm, u);
    f["solution count"] = sols.size();
    Facts list = Facts::array();
    for (const auto& x : sols) list.push_back(x_facts(scm, x));
    f["solution"] = list;
    emit(f, o.format, out);
    return kExitOk;
}

int cmd_dsep(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    const SepQuery q = build_query(scm, o);
    VarSet seeds = q.a;
    seeds.insert(q.b.begin(), q.b.end());
    seeds.insert(q.c.begin(), q.c.end());
    const DiGraph restricted = ancestral_restriction(scm.graph(), seeds);
    const UGraph moral = moralize(restricted);

    Facts f = model_header(src);
    f["query"] = query_text(scm, q);
    Facts kept = Facts::array();
    for (VarId v : restricted.nodes()) kept.push_back(scm.variable(v).name);
    f["ancestral set"] = kept;
    Facts edges = Facts::array();
    for (auto [x, y] : moral.edges()) edges.push_back(scm.variable(x).name + "-" + scm.variable(y).name);
    f["moral edges"] = edges;
    f["d-separated"] = d_separated(scm.graph(), q);
    emit(f, o.format, out);
    return kExitOk;
}

int cmd_ci(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    const SepQuery q = build_query(scm, o);
    Facts f = model_header(src);
    f["query"] = query_text(scm, q);
    f["independent"] = ci_holds(induced_joint(scm), q);
    emit(f, o.format, out);
    return kExitOk;
}

int cmd_prob(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    const auto event = partial(scm, o.event);
    const auto given = partial(scm, o.given);
    auto text = [&](const PartialAssignment& pa) {
        std::string s;
        for (const auto& [v, value] : pa) s += (s.empty() ? "" : ", ") + scm.variable(v).name + "=" + std::to_string(value);
        return s;
    };
    std::string query = "P(" + text(event);
    if (!given.empty()) query += " | " + text(given);
    query += ")";
    const Rational p = prob(induced_joint(scm), event, given);
    Facts f = model_header(src);
    f["query"] = query;
    f["probability"] = to_string(p);
    emit(f, o.format, out);
    return kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    const auto records = audit_soundness(scm, o.max_cond, o.set_valued);
    std::size_t dsep = 0;
    std::size_t ci = 0;
    Facts bad = Facts::array();
    for (const auto& r : records) {
        dsep += r.dsep;
        ci += r.ci;
        if (r.violation) bad.push_back(query_text(scm, r.query));
    }
    Facts f = model_header(src);
    f["max conditioning set"] = o.max_cond;
    f["set-valued"] = o.set_valued;
    f["queries"] = records.size();
    f["d-separated"] = dsep;
    f["independent"] = ci;
    f["violation count"] = bad.size();
    f["violation"] = bad;
    emit(f, o.format, out);
    return !bad.empty() && o.fail_on_violation ? kExitFinding : kExitOk;
}

int cmd_dynamics(const Options& o, std::ostream& out) {
    const ModelSource src = load_model(o.model);
    const Scm& scm = src.scm;
    Facts f = model_header(src);
    if (!o.schedule.empty() && !o.search) {
        Schedule s = Schedule::simultaneous();
        if (o.schedule != "simultaneous") {
            std::vector<VarId> order;
            for (const auto& name : split(o.schedule, ',')) order.push_back(lookup_var(scm, name));
            s = Schedule::sequential(std::move(order), scm.size());
        }
        const auto report = schedule_converges(scm, s);
        f["schedule"] = schedule_text(scm, s);
        f["converges"] = report.converges();
        if (report.witness) {
            f["witness u"] = u_facts(scm, report.witness->u);
            f["witness initial"] = x_facts(scm, report.witness->initial);
            f["cycle length"] = report.witness->cycle.size();
            Facts cycle = Facts::array();
            for (const auto& x : report.witness->cycle) cycle.push_back(x_facts(scm, x));
            f["cycle"] = cycle;
        }
    } else {
        ScheduleSearchOptions opts;
        opts.allow_sampling = o.samples > 0;
        opts.samples = o.samples;
        opts.seed = o.seed;
        const auto result = find_valid_schedule(scm, opts);
        f["search"] = result.exhaustive ? "exhaustive" : "sampled";
        f["schedules examined"] = result.schedules_examined;
        if (result.found()) {
            f["valid schedule"] = schedule_text(scm, *result.schedule);
            f["result"] = "valid schedule found";
        } else {
            f["valid schedule"] = nullptr;
            f["result"] = result.exhaustive ? "no valid schedule found" : "no valid schedule found (inconclusive, sampled)";
        }
    }
    emit(f, o.format, out);
    return kExitOk;
}

int cmd_mine(const Options& o, std::ostream& out) {
    const MinerConfig& cfg = o.miner;
    const auto found = mine(cfg);
    Facts f = Facts::object();
    f["seed"] = cfg.seed;
    f["vars"] = cfg.vars;
    f["mod"] = cfg.modulus;
    f["density"] = cfg.density;
    f["count"] = cfg.count;
    f["max conditioning set"] = cfg.max_cond;
    f["models with violations"] = found.size();
    Facts models = Facts::array();
    for (const auto& m : found) {
        Facts entry = Facts::object();
        entry["index"] = m.index;
        entry["name"] = m.model.name();
        entry["violations"] = m.violations.size();
        entry["first"] = query_text(m.model, m.violations.front().query);
        models.push_back(entry);
    }
    f["model"] = models;
    if (!o.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(o.out_dir);
        for (const auto& m : found) {
            std::ofstream file(fs::path(o.out_dir) / (m.model.name() + ".scm"));
            file << "# mined with seed " << cfg.seed << ", model index " << m.index << '\n';
            for (const auto& r : m.violations) file << "# violation: " << query_text(m.model, r.query) << '\n';
            file << serialize_model(m.model);
        }
        std::ofstream text(fs::path(o.out_dir) / "report.txt");
        render_text(f, text);
        std::ofstream json(fs::path(o.out_dir) / "report.json");
        json << f.dump(2) << '\n';
        f["output directory"] = o.out_dir;
    }
    emit(f, o.format, out);
    return kExitOk;
}

int cmd_fixture(const Options& o, std::ostream& out) {
    const Scm scm = fixture(o.fixture_name);
    const std::string text = serialize_model(scm);
    if (o.format == "json") {
        Facts f = Facts::object();
        f["fixture"] = o.fixture_name;
        f["text"] = text;
        out << f.dump(2) << '\n';
    } else {
        out << text;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete causal models with feedback: d-separation, exact independence, update dynamics", "feedsep"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));

    auto model_arg = [&](CLI::App* sub) {
        sub->add_option("model", o.model, "Fixture name or model file")->required();
    };
    auto query_args = [&](CLI::App* sub) {
        sub->add_option("--a", o.a, "Variables in A (comma separated)")->required();
        sub->add_option("--b", o.b, "Variables in B (comma separated)")->required();
        sub->add_option("--c", o.c, "Conditioning variables (comma separated)");
    };

    auto* check = app.add_subcommand("check", "Check the uniqueness condition");
    model_arg(check);
    check->add_flag("--fail-on-nonunique", o.fail_on_nonunique, "Exit 1 when solutions are not unique");

    auto* solve = app.add_subcommand("solve", "List all solutions for one disturbance draw");
    model_arg(solve);
    solve->add_option("--u", o.u, "Disturbance values, e.g. U1=0,U4=1");

    auto* dsep = app.add_subcommand("dsep", "Decide d-separation");
    model_arg(dsep);
    query_args(dsep);

    auto* ci = app.add_subcommand("ci", "Decide exact conditional independence");
    model_arg(ci);
    query_args(ci);

    auto* pr = app.add_subcommand("prob", "Exact (conditional) probability");
    model_arg(pr);
    pr->add_option("--event", o.event, "Event, e.g. X4=0,X5=0");
    pr->add_option("--given", o.given, "Condition, e.g. X2=0");

    auto* audit = app.add_subcommand("audit", "Check every d-separation statement against independence");
    model_arg(audit);
    audit->add_option("--max-cond", o.max_cond, "Largest conditioning set")->capture_default_str();
    audit->add_flag("--fail-on-violation", o.fail_on_violation, "Exit 1 when a violation is found");
    audit->add_flag("--set-valued", o.set_valued, "Allow sets, not just single variables, for A and B");

    auto* dyn = app.add_subcommand("dynamics", "Check update schedules");
    model_arg(dyn);
    dyn->add_option("--schedule", o.schedule, "'simultaneous' or a comma separated order");
    dyn->add_flag("--search", o.search, "Search for a converging schedule");
    dyn->add_option("--sample", o.samples, "Random orders to try when the model is too large to enumerate");
    dyn->add_option("--seed", o.seed, "Seed for --sample");

    auto* mn = app.add_subcommand("mine", "Search random models for violations");
    mn->add_option("--vars", o.miner.vars, "Variables per model")->required()->check(CLI::Range(2, 16));
    mn->add_option("--mod", o.miner.modulus, "Domain size")->required()->check(CLI::Range(2, 16));
    mn->add_option("--density", o.miner.density, "Edge probability")->required()->check(CLI::Range(0.0, 1.0));
    mn->add_option("--count", o.miner.count, "Models to generate")->required();
    mn->add_option("--seed", o.miner.seed, "Generator seed")->required();
    mn->add_option("--max-cond", o.miner.max_cond, "Largest conditioning set")->capture_default_str();
    mn->add_option("--out", o.out_dir, "Directory for violating models and the report");

    auto* fx = app.add_subcommand("fixture", "Print a built-in model");
    fx->add_option("name", o.fixture_name, "Fixture name")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*check) return cmd_check(o, out);
        if (*solve) return cmd_solve(o, out);
        if (*dsep) return cmd_dsep(o, out);
        if (*ci) return cmd_ci(o, out);
        if (*pr) return cmd_prob(o, out);
        if (*audit) return cmd_audit(o, out);
        if (*dyn) return cmd_dynamics(o, out);
        if (*mn) return cmd_mine(o, out);
        if (*fx) return cmd_fixture(o, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const ValidationError& e) {
        err << "invalid model: " << e.what() << '\n';
    } catch (const NonUniqueModel& e) {
        err << "error: " << e.what() << '\n';
        if (e.report().witness) {
            err << "witness u:";
            for (Value v : e.report().witness->u.values()) err << ' ' << v;
            err << " (" << e.report().witness->solution_count << " solutions)\n";
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace feedsep
