#include "ipl/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ipl/bases.hpp"
#include "ipl/engine.hpp"
#include "ipl/lj.hpp"
#include "ipl/nj.hpp"
#include "ipl/sexpr.hpp"
#include "ipl/tactics.hpp"

namespace ipl::cli {

namespace {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream f(path);
    if (!f) throw InputError("cannot read " + path);
    buf << f.rdbuf();
    return buf.str();
}

std::string render_path(const std::vector<std::size_t>& path) {
    if (path.empty()) return "root";
    std::string out;
    for (auto i : path) out += (out.empty() ? "" : ".") + std::to_string(i);
    return out;
}

/// Writes the versioned header, then one record per result: a json object per line, or
/// text whose non-artifact lines are `;` comments.
class Emitter {
public:
    Emitter(std::ostream& out, bool json_lines, std::string command)
        : out_(out), json_(json_lines), command_(std::move(command)) {
        if (json_)
            out_ << json{{"format", "ipl"}, {"version", kFormatVersion}, {"command", command_}}.dump() << '\n';
        else
            out_ << "; ipl " << command_ << " v" << kFormatVersion << '\n';
    }

    void record(const json& j, const std::string& text) {
        if (json_)
            out_ << j.dump() << '\n';
        else
            out_ << text << '\n';
    }

private:
    std::ostream& out_;
    bool json_;
    std::string command_;
};

struct Options {
    std::string format = "sexp";
    // prove / script
    std::string sequent;
    std::size_t depth = 12;
    std::string emit = "lj";
    std::string script;
    // check
    std::string lj_file, nj_file, base_file;
    // normalize
    std::string file;
    std::string strategy = "innermost";
    std::size_t fuel = 10000;
    // validate
    bases::Budget budget;
    // base-derive
    std::string hyps, target;
};

int emit_outcome(const engine::SearchOutcome& out, const Options& o, Emitter& em) {
    json j{{"goal", render(out.goal)}, {"status", engine::status_name(out.status)}};
    if (out.status != engine::Status::Remaining) j["depth"] = out.depth;
    switch (out.status) {
        case engine::Status::Proved: {
            std::string artifact = o.emit == "nj"      ? nj::to_sexpr(*out.argument)
                                   : o.emit == "trace" ? tactics::to_sexpr(*out.trace)
                                                       : lj::to_sexpr(*out.proof);
            j["emit"] = o.emit;
            j["artifact"] = artifact;
            std::string bound = o.script.empty() ? " within depth " + std::to_string(out.depth) : " by script";
            em.record(j, "; proved " + sexpr::quote(render(out.goal)) + bound + "\n" + artifact);
            return kOk;
        }
        case engine::Status::Unprovable:
            em.record(j, "unprovable within bounds (depth " + std::to_string(out.depth) + ", contraction cap 2): " +
                             render(out.goal));
            return kNegative;
        case engine::Status::Exhausted:
            em.record(j, "no proof found within depth " + std::to_string(out.depth) + ": " + render(out.goal));
            return kNegative;
        case engine::Status::Remaining: {
            json goals = json::array();
            std::string text = "; " + std::to_string(out.remaining.size()) + " goals remain";
            for (const auto& g : out.remaining) goals.push_back(render(g));
            j["remaining"] = goals;
            j["trace"] = tactics::to_sexpr(*out.trace);
            em.record(j, text + "\n" + tactics::to_sexpr(*out.trace));
            return kNegative;
        }
    }
    return kNegative;
}

int cmd_prove(const Options& o, std::istream& in, Emitter& em) {
    Sequent goal = parse_sequent(o.sequent);
    if (!o.script.empty()) {
        auto tactic = tactics::parse_script(read_input(o.script, in));
        return emit_outcome(engine::run_script(tactic, goal), o, em);
    }
    engine::SearchOptions so;
    so.depth = o.depth;
    return emit_outcome(engine::search(goal, so), o, em);
}

Base load_base(const std::string& path, std::istream& in) {
    if (path.empty()) return {};
    return bases::parse_base(read_input(path, in));
}

int cmd_check(const Options& o, std::istream& in, Emitter& em) {
    if (!o.lj_file.empty()) {
        auto tree = lj::parse_proof(read_input(o.lj_file, in));
        auto v = lj::check_proof(tree);
        json j{{"kind", "lj"}, {"accepted", v.accepted}};
        if (v.accepted) {
            j["conclusion"] = render(v.proof->conclusion());
            j["uses_cut"] = v.uses_cut;
            em.record(j, "accepted " + sexpr::quote(render(v.proof->conclusion())) +
                             (v.uses_cut ? " (uses cut)" : " (cut-free)"));
            return kOk;
        }
        j["path"] = v.failing_path;
        j["reason"] = v.reason;
        em.record(j, "rejected at " + render_path(v.failing_path) + ": " + v.reason);
        return kNegative;
    }
    auto a = nj::parse_argument(read_input(o.nj_file, in));
    auto base = load_base(o.base_file, in);
    auto v = nj::check_derivation(a, base);
    json j{{"kind", "nj"}, {"accepted", v.accepted}};
    if (v.accepted) {
        Sequent e = nj::ergo(a);
        j["ergo"] = render(e);
        em.record(j, "accepted, concluding " + sexpr::quote(render(e)));
        return kOk;
    }
    j["path"] = v.failing_path;
    j["reason"] = v.reason;
    em.record(j, "rejected at " + render_path(v.failing_path) + ": " + v.reason);
    return kNegative;
}

int cmd_normalize(const Options& o, std::istream& in, Emitter& em) {
    auto a = nj::parse_argument(read_input(o.file, in));
    nj::NormalizeOptions no;
    no.strategy = o.strategy == "outermost" ? nj::Strategy::Outermost : nj::Strategy::Innermost;
    no.fuel = o.fuel;
    std::size_t steps = 0;
    try {
        auto n = nj::normalize(a, no, &steps);
        auto text = nj::to_sexpr(n);
        em.record(json{{"steps", steps}, {"canonical", nj::is_canonical(n)}, {"artifact", text}},
                  "; " + std::to_string(steps) + " reduction steps\n" + text);
        return kOk;
    } catch (const nj::FuelExhausted& e) {
        em.record(json{{"error", "fuel"}, {"fuel", o.fuel}}, std::string("fuel exhausted: ") + e.what());
        return kNegative;
    }
}

json verdict_json(const bases::ValidityVerdict& v) {
    json j{{"status", bases::status_name(v.status)},
           {"clause", bases::clause_name(v.clause)},
           {"tier", bases::tier_name(v.tier)},
           {"detail", v.detail},
           {"extensions_checked", v.extensions_checked}};
    if (v.counterexample) {
        j["extension"] = bases::to_text(v.counterexample->extension);
        json sub = json::array();
        for (const auto& [f, arg] : v.counterexample->substitution)
            sub.push_back(json{{"formula", render(f)}, {"argument", nj::to_sexpr(arg)}});
        j["substitution"] = sub;
    }
    return j;
}

int cmd_validate(const Options& o, std::istream& in, Emitter& em) {
    auto a = nj::parse_argument(read_input(o.file, in));
    auto base = load_base(o.base_file, in);
    auto v = bases::validity(a, base, o.budget);
    bool replayed = v.status != bases::Status::Unknown && bases::replay(v, a, base);
    json j = verdict_json(v);
    j["replayed"] = replayed;
    j["budget"] = json{{"ext_atoms", o.budget.ext_atoms},
                       {"ext_rules", o.budget.ext_rules},
                       {"closure_depth", o.budget.closure_depth},
                       {"samples", o.budget.samples},
                       {"seed", o.budget.seed}};
    std::ostringstream text;
    text << bases::status_name(v.status) << " (clause " << bases::clause_name(v.clause) << ", tier "
         << bases::tier_name(v.tier) << ", " << v.extensions_checked << " extensions, replay "
         << (replayed ? "ok" : "n/a") << ")";
    if (!v.detail.empty()) text << "\n; " << v.detail;
    if (v.counterexample) {
        text << "\n; counterexample extension:";
        std::istringstream rules(bases::to_text(v.counterexample->extension));
        for (std::string line; std::getline(rules, line);) text << "\n;   " << line;
        for (const auto& [f, arg] : v.counterexample->substitution)
            text << "\n; closing " << render(f) << " with " << nj::to_sexpr(arg);
    }
    em.record(j, text.str());
    return v.status == bases::Status::Valid ? kOk : kNegative;
}

int cmd_audit(const Options& o, std::istream& in, Emitter& em) {
    auto trace = tactics::parse_trace(read_input(o.file, in));
    auto report = engine::audit_coherence(trace);
    json vs = json::array();
    std::string text = std::to_string(report.violations.size()) + " violations (" + std::to_string(report.records) +
                       " records)";
    for (const auto& v : report.violations) {
        vs.push_back(json{{"path", v.path}, {"goal", render(v.goal)}, {"proc", v.proc}, {"problem", v.problem}});
        text += "\n; at " + render_path(v.path) + " " + v.proc + " on " + sexpr::quote(render(v.goal)) + ": " +
                v.problem;
    }
    em.record(json{{"records", report.records}, {"violations", vs}}, text);
    return report.clean() ? kOk : kNegative;
}

std::vector<std::string> split_atoms(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            if (!is_identifier(cur) || cur == "bot") throw InputError("not an atom: " + cur);
            out.push_back(cur);
        }
        cur.clear();
    };
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) flush();
        else cur += c;
    }
    flush();
    return out;
}

int cmd_base_derive(const Options& o, std::istream& in, Emitter& em) {
    auto base = load_base(o.base_file, in);
    auto hyps = split_atoms(o.hyps);
    auto target = split_atoms(o.target);
    if (target.size() != 1) throw InputError("target must be one atom");
    auto d = bases::derives(base, hyps, target[0]);
    json j{{"target", target[0]}, {"hypotheses", hyps}, {"derivable", d.has_value()}};
    if (d) {
        j["artifact"] = nj::to_sexpr(*d);
        em.record(j, "; derivable\n" + nj::to_sexpr(*d));
        return kOk;
    }
    em.record(j, "not derivable: " + target[0]);
    return kNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof kernel and tactical prover for intuitionistic propositional logic", "ipl"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--format", o.format, "Report serialization")
        ->check(CLI::IsMember({"sexp", "json-lines"}))
        ->capture_default_str();

    auto* prove = app.add_subcommand("prove", "Search for a proof of a sequent");
    prove->add_option("sequent", o.sequent, "Sequent, e.g. \"p, q |- p /\\ q\"")->required();
    prove->add_option("--depth", o.depth, "Search depth bound")->check(CLI::PositiveNumber)->capture_default_str();
    prove->add_option("--emit", o.emit, "Artifact to print")
        ->check(CLI::IsMember({"lj", "nj", "trace"}))
        ->capture_default_str();
    prove->add_option("--script", o.script, "Tactic script file to run instead of search");

    auto* script = app.add_subcommand("script", "Run a tactic script on a sequent and print its trace");
    script->add_option("file", o.script, "Tactic script file")->required();
    script->add_option("sequent", o.sequent, "Sequent")->required();

    auto* check = app.add_subcommand("check", "Check a sequent calculus proof or a natural deduction derivation");
    auto* lj_opt = check->add_option("--lj", o.lj_file, "Proof file");
    auto* nj_opt = check->add_option("--nj", o.nj_file, "Argument file");
    lj_opt->excludes(nj_opt);
    check->add_option("--base", o.base_file, "Atomic base file for --nj");

    auto* normalize = app.add_subcommand("normalize", "Normalize a natural deduction derivation");
    normalize->add_option("file", o.file, "Argument file")->required();
    normalize->add_option("--strategy", o.strategy)->check(CLI::IsMember({"innermost", "outermost"}))->capture_default_str();
    normalize->add_option("--fuel", o.fuel, "Reduction step budget")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Decide base-extension validity of an argument");
    validate->add_option("file", o.file, "Argument file")->required();
    validate->add_option("--base", o.base_file, "Atomic base file")->required();
    validate->add_option("--ext-atoms", o.budget.ext_atoms)->capture_default_str();
    validate->add_option("--ext-rules", o.budget.ext_rules)->capture_default_str();
    validate->add_option("--closure-depth", o.budget.closure_depth)->capture_default_str();
    validate->add_option("--samples", o.budget.samples)->capture_default_str();
    validate->add_option("--seed", o.budget.seed)->capture_default_str();
    validate->add_flag("--force-sweep", o.budget.force_sweep, "Sweep extensions for derivations too");

    auto* audit = app.add_subcommand("audit", "Check every trace record against the sequent calculus");
    audit->add_option("file", o.file, "Trace file")->required();

    auto* derive = app.add_subcommand("base-derive", "Derive an atom from hypotheses in an atomic base");
    derive->add_option("base", o.base_file, "Base file")->required();
    derive->add_option("hyps", o.hyps, "Hypotheses, comma separated (may be empty)")->required();
    derive->add_option("target", o.target, "Target atom")->required();

    std::vector<std::string> argv_store{"ipl"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    if (check->parsed() && o.lj_file.empty() && o.nj_file.empty()) {
        err << "usage error: check needs --lj FILE or --nj FILE\n";
        return kUsage;
    }

    auto* sub = app.get_subcommands().front();
    bool json_lines = o.format == "json-lines";
    try {
        Emitter em(out, json_lines, sub->get_name());
        if (sub == prove) return cmd_prove(o, in, em);
        if (sub == script) {
            o.emit = "trace";
            return cmd_prove(o, in, em);
        }
        if (sub == check) return cmd_check(o, in, em);
        if (sub == normalize) return cmd_normalize(o, in, em);
        if (sub == validate) return cmd_validate(o, in, em);
        if (sub == audit) return cmd_audit(o, in, em);
        if (sub == derive) return cmd_base_derive(o, in, em);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const sexpr::SyntaxError& e) {
        err << "syntax error: " << e.what() << '\n';
    } catch (const tactics::ScriptError& e) {
        err << "script error: " << e.what() << '\n';
    } catch (const bases::BaseSyntaxError& e) {
        err << "base error: " << e.what() << '\n';
    } catch (const nj::UnboundDischarge& e) {
        err << "argument error: " << e.what() << '\n';
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
    }
    return kUsage;
}

}  // namespace ipl::cli
