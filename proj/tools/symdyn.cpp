// Batch front end: one subcommand per run, JSON report out, exit code from the error kind.

#include <iostream>

#include "CLI11.hpp"
#include "symdyn/report.hpp"

using namespace symdyn;
using io::json;

namespace {

struct Flags {
    std::vector<std::string> inputs, codes;
    std::string target, epsilon, require, out, n, orbit, multipliers, words, set, p, q;
    std::map<std::string, long> budgets;
    long seed = 0;
    bool timing = false, x_irreducible = false, diagnostics = false;
};

const std::vector<std::string> budget_names = {"horizon", "step",  "word-length", "max-N",    "max-n", "max-m",
                                               "windows", "states", "block-symbols", "set-size", "sets"};

// Which optional flags each subcommand takes beyond --input/--out/--seed/--timing.
const std::map<std::string, std::vector<std::string>> extra_flags = {
    {"entropy", {}},
    {"census", {"horizon"}},
    {"structure", {"step"}},
    {"higher-block", {"n"}},
    {"forbid", {"words"}},
    {"image", {"code"}},
    {"compose", {"code"}},
    {"verify-code", {"code"}},
    {"decompose-factor",
     {"code", "target", "epsilon", "require", "word-length", "max-N", "max-n", "max-m", "windows", "states",
      "block-symbols", "diagnostics"}},
    {"decompose-sft", {"code", "epsilon", "max-n", "max-m", "windows", "states", "block-symbols"}},
    {"sample-s0",
     {"code", "target", "epsilon", "word-length", "max-N", "max-n", "max-m", "windows", "states", "block-symbols"}},
    {"blowup", {"orbit", "multipliers"}},
    {"build-bn", {"n"}},
    {"embed-preconditions", {"horizon"}},
    {"embed-oracle", {"target", "set", "p", "q", "x-irreducible"}},
    {"between-search", {"target", "epsilon", "require", "word-length", "set-size", "sets"}},
};

json load_target(const std::string& t) {
    if (!t.empty() && (t.front() == '{' || t.front() == '[')) return io::parse_text(t, "--target");
    return io::read_file(t);
}

RunConfig to_config(const std::string& cmd, const Flags& f, long budget_sentinel) {
    RunConfig c;
    c.command = cmd;
    c.input_paths = f.inputs;
    for (const auto& p : f.inputs) c.inputs.push_back(io::read_file(p));
    c.code_paths = f.codes;
    for (const auto& p : f.codes) c.codes.push_back(io::read_file(p));
    if (!f.target.empty()) c.target = load_target(f.target);
    if (!f.epsilon.empty()) c.epsilon = f.epsilon;
    if (!f.require.empty()) c.require = f.require;
    for (const auto& [k, v] : f.budgets)
        if (v != budget_sentinel) c.budgets[k] = v;
    c.seed = f.seed;
    c.timing = f.timing;
    auto put = [&](const char* k, const std::string& v) {
        if (!v.empty()) c.options[k] = v;
    };
    put("n", f.n);
    put("orbit", f.orbit);
    put("multipliers", f.multipliers);
    put("words", f.words);
    put("set", f.set);
    put("p", f.p);
    put("q", f.q);
    if (f.x_irreducible) c.options["x_irreducible"] = "1";
    if (f.diagnostics) c.options["diagnostics"] = "1";
    return c;
}

void print_summary(const json& rep, std::ostream& os) {
    os << rep.value("command", "") << ": " << rep.value("status", "") << " (exit " << rep.value("exit_code", 0) << ")\n";
    if (rep.contains("error") && rep["error"].is_object())
        os << "  " << rep["error"].value("code", "") << ": " << rep["error"].value("message", "") << "\n";
    if (rep.contains("certificates"))
        for (const auto& c : rep["certificates"]) os << "  [ok] " << c.get<std::string>() << "\n";
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) std::cout << text;
    else io::write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact tools for shifts of finite type, sofic shifts and sliding block codes"};
    app.require_subcommand(1);
    Flags f;
    const long unset = -1;
    for (const auto& b : budget_names) f.budgets[b] = unset;

    for (const auto& [cmd, extras] : extra_flags) {
        CLI::App* s = app.add_subcommand(cmd);
        s->add_option("--input", f.inputs, "shift description file (repeatable)")->required();
        s->add_option("--out", f.out, "write the JSON report here (atomically)");
        s->add_option("--seed", f.seed, "recorded in the report");
        s->add_flag("--timing", f.timing, "add wall-clock timing to the report");
        for (const auto& e : extras) {
            if (std::find(budget_names.begin(), budget_names.end(), e) != budget_names.end()) {
                s->add_option("--budget-" + e, f.budgets[e]);
            } else if (e == "code") {
                s->add_option("--code", f.codes, "code file (repeatable)")->required();
            } else if (e == "target") {
                s->add_option("--target", f.target, "target file or inline JSON");
            } else if (e == "epsilon") {
                s->add_option("--epsilon", f.epsilon, "rational p/q or decimal");
            } else if (e == "require") {
                s->add_option("--require", f.require, "none, sofic or sft");
            } else if (e == "n") {
                s->add_option("--n", f.n)->required();
            } else if (e == "orbit") {
                s->add_option("--orbit", f.orbit, "comma-separated period block")->required();
            } else if (e == "multipliers") {
                s->add_option("--multipliers", f.multipliers, "comma-separated M_1..M_k")->required();
            } else if (e == "words") {
                s->add_option("--words", f.words, "JSON array of words")->required();
            } else if (e == "set") {
                s->add_option("--set", f.set, "T_prime, T, T0, T0_prime, T1_prime or T1")->required();
            } else if (e == "p") {
                s->add_option("--p", f.p);
            } else if (e == "q") {
                s->add_option("--q", f.q);
            } else if (e == "x-irreducible") {
                s->add_flag("--x-irreducible", f.x_irreducible);
            } else if (e == "diagnostics") {
                s->add_flag("--diagnostics", f.diagnostics, "also trace h(hat Z_n)");
            }
        }
    }
    std::string report_path;
    CLI::App* verify = app.add_subcommand("verify", "re-check a saved report");
    verify->add_option("report", report_path, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (verify->parsed()) {
            VerifyOutcome v = verify_report(io::read_file(report_path));
            if (v.exit_code == 0) {
                std::cout << "verified: " << v.passed.size() << " certificate(s)\n";
            } else {
                std::cerr << "verify failed: " << v.failure << "\n";
                if (!v.witness.empty()) std::cerr << "  witness: " << v.witness << "\n";
            }
            return v.exit_code;
        }
        std::string cmd = app.get_subcommands().front()->get_name();
        json rep = run_command(to_config(cmd, f, unset));
        emit(io::dump(rep), f.out);
        if (!f.out.empty()) print_summary(rep, std::cout);
        else if (rep["exit_code"] != 0) print_summary(rep, std::cerr);
        return rep["exit_code"].get<int>();
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return exit_code(e.kind());
    }
}
