#ifndef SYMDYN_REPORT_HPP
#define SYMDYN_REPORT_HPP

#include <chrono>

#include "symdyn/io.hpp"

namespace symdyn {

/// One command invocation. Input documents are carried with their paths so a report can be
/// re-checked without the original files.
struct RunConfig {
    std::string command;
    std::vector<std::string> input_paths;
    std::vector<io::json> inputs;
    std::vector<std::string> code_paths;
    std::vector<io::json> codes;
    std::optional<io::json> target;
    std::optional<std::string> epsilon;
    std::optional<std::string> require;
    std::map<std::string, long> budgets;
    long seed = 0;                                // echoed; no command randomizes its search order
    std::map<std::string, std::string> options;   // n, orbit, multipliers, words, set, p, q, x_irreducible
    bool timing = false;
};

inline int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::parse: return 1;
        case ErrorKind::precondition: return 2;
        case ErrorKind::budget: return 3;
        case ErrorKind::inexact: return 4;
        case ErrorKind::certificate: return 5;
    }
    return 5;
}

inline std::string to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::parse: return "parse";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::budget: return "budget";
        case ErrorKind::inexact: return "inexact";
        case ErrorKind::certificate: return "certificate";
    }
    return "certificate";
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "entropy",     "census",          "structure",     "higher-block", "forbid",
        "image",       "compose",         "verify-code",   "decompose-factor", "decompose-sft",
        "sample-s0",   "blowup",          "build-bn",      "embed-preconditions", "embed-oracle",
        "between-search"};
    return names;
}

namespace io {

inline json config_json(const RunConfig& c) {
    json in = json::array(), cd = json::array();
    for (std::size_t i = 0; i < c.inputs.size(); ++i)
        in.push_back({{"path", i < c.input_paths.size() ? c.input_paths[i] : ""}, {"shift", c.inputs[i]}});
    for (std::size_t i = 0; i < c.codes.size(); ++i)
        cd.push_back({{"path", i < c.code_paths.size() ? c.code_paths[i] : ""}, {"code", c.codes[i]}});
    json j = {{"command", c.command}, {"inputs", in},      {"codes", cd},       {"budgets", c.budgets},
              {"seed", c.seed},       {"options", c.options}, {"timing", c.timing}};
    j["target"] = c.target ? *c.target : json(nullptr);
    j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
    j["require"] = c.require ? json(*c.require) : json(nullptr);
    return j;
}

inline RunConfig config_of(const json& j, const std::string& at = "config") {
    RunConfig c;
    c.command = str_of(field(j, "command", at), at + ".command");
    const json& in = array_at(field(j, "inputs", at), at + ".inputs");
    for (const auto& e : in) {
        c.input_paths.push_back(str_of(field(e, "path", at + ".inputs"), at + ".inputs.path"));
        c.inputs.push_back(field(e, "shift", at + ".inputs"));
    }
    const json& cd = array_at(field(j, "codes", at), at + ".codes");
    for (const auto& e : cd) {
        c.code_paths.push_back(str_of(field(e, "path", at + ".codes"), at + ".codes.path"));
        c.codes.push_back(field(e, "code", at + ".codes"));
    }
    const json& b = field(j, "budgets", at);
    for (auto it = b.begin(); it != b.end(); ++it) c.budgets[it.key()] = static_cast<long>(int_of(it.value(), at + ".budgets"));
    c.seed = static_cast<long>(int_of(field(j, "seed", at), at + ".seed"));
    const json& o = field(j, "options", at);
    for (auto it = o.begin(); it != o.end(); ++it) c.options[it.key()] = str_of(it.value(), at + ".options");
    c.timing = bool_of(field(j, "timing", at), at + ".timing");
    if (!field(j, "target", at).is_null()) c.target = j["target"];
    if (!field(j, "epsilon", at).is_null()) c.epsilon = str_of(j["epsilon"], at + ".epsilon");
    if (!field(j, "require", at).is_null()) c.require = str_of(j["require"], at + ".require");
    return c;
}

}  // namespace io

namespace detail {

using io::json;

struct Run {
    const RunConfig& cfg;
    json result = json::object();
    std::vector<std::string> certs;

    ShiftSpace input(std::size_t i) const {
        if (i >= cfg.inputs.size())
            throw PreconditionError(cfg.command + " needs at least " + std::to_string(i + 1) + " --input file(s)");
        return io::shift_of(cfg.inputs[i], "input[" + std::to_string(i) + "]");
    }
    BlockMap code(std::size_t i, const ShiftSpace& domain) const {
        if (i >= cfg.codes.size())
            throw PreconditionError(cfg.command + " needs at least " + std::to_string(i + 1) + " --code file(s)");
        return io::code_of(cfg.codes[i], domain, "code[" + std::to_string(i) + "]");
    }
    long budget(const std::string& k, long dflt) const {
        auto it = cfg.budgets.find(k);
        long v = it == cfg.budgets.end() ? dflt : it->second;
        if (v <= 0) throw PreconditionError("budget " + k + " must be positive");
        return v;
    }
    std::optional<std::string> option(const std::string& k) const {
        auto it = cfg.options.find(k);
        if (it == cfg.options.end()) return std::nullopt;
        return it->second;
    }
    long int_option(const std::string& k, std::optional<long> dflt = std::nullopt) const {
        auto o = option(k);
        if (!o) {
            if (dflt) return *dflt;
            throw PreconditionError(cfg.command + " needs --" + k);
        }
        try {
            std::size_t used = 0;
            long v = std::stol(*o, &used);
            if (used != o->size()) throw std::invalid_argument(k);
            return v;
        } catch (const std::logic_error&) {
            throw ParseError("--" + k + ": expected an integer, got '" + *o + "'");
        }
    }
    Rational epsilon() const {
        if (!cfg.epsilon) throw PreconditionError(cfg.command + " needs --epsilon");
        Rational e = io::rational_of(json(*cfg.epsilon), "--epsilon");
        if (e <= 0) throw PreconditionError("epsilon must be positive");
        return e;
    }
    io::ResolvedTarget target(bool allow_nats) const {
        if (!cfg.target) throw PreconditionError(cfg.command + " needs --target");
        return io::target_of(*cfg.target, allow_nats);
    }
    FactorOptions factor_options() const {
        FactorOptions o;
        o.max_word_length = static_cast<int>(budget("word-length", o.max_word_length));
        o.max_N = static_cast<int>(budget("max-N", o.max_N));
        o.max_block_n = static_cast<int>(budget("max-n", o.max_block_n));
        o.max_m = static_cast<int>(budget("max-m", o.max_m));
        o.max_windows = static_cast<std::size_t>(budget("windows", static_cast<long>(o.max_windows)));
        o.max_states = static_cast<std::size_t>(budget("states", static_cast<long>(o.max_states)));
        o.max_block_symbols = static_cast<std::size_t>(budget("block-symbols", static_cast<long>(o.max_block_symbols)));
        o.diagnostics = option("diagnostics").value_or("0") == "1";
        return o;
    }
    void check(bool ok, const std::string& what) {
        if (!ok) throw CertificateFailure(what + " failed");
        certs.push_back(what);
    }
};

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

inline std::string label(std::size_t i) { return "input " + std::to_string(i); }

inline void cmd_entropy(Run& r) {
    json rows = json::array();
    for (std::size_t i = 0; i < std::max<std::size_t>(r.cfg.inputs.size(), 1); ++i) {
        ShiftSpace x = r.input(i);
        EntropyValue h = entropy(x);
        rows.push_back({{"entropy", io::to_json(h)}, {"structure", io::to_json(structure(x))}});
        const auto& iv = h.base.interval();
        bool isolated = iv.lo == iv.hi ? h.base.poly().sign_at(iv.lo) == 0
                                       : count_roots(h.base.poly(), iv.lo, iv.hi) == 1;
        r.check(isolated, label(i) + ": entropy base isolated by its interval");
    }
    r.result["shifts"] = rows;
}

inline void cmd_census(Run& r) {
    const int K = static_cast<int>(r.budget("horizon", 12));
    json rows = json::array();
    for (std::size_t i = 0; i < std::max<std::size_t>(r.cfg.inputs.size(), 1); ++i) {
        ShiftSpace x = r.input(i);
        auto p = fixed_point_counts(x, K);
        PeriodicCensus c = census_from_fixed_counts(p);
        json fp = json::array();
        for (const auto& v : p) fp.push_back(io::to_json(v));
        rows.push_back({{"census", io::to_json(c)}, {"fixed_points", fp}});
        bool ok = true;
        for (int k = 1; k <= K; ++k) {
            BigInt s = 0;
            for (int d = 1; d <= k; ++d)
                if (k % d == 0) s += c.at(d);
            ok = ok && s == p[k - 1];
        }
        r.check(ok, label(i) + ": sum of q_d over d | k equals the fixed-point count for k <= " + std::to_string(K));
    }
    r.result["shifts"] = rows;
}

inline void cmd_structure(Run& r) {
    json rows = json::array();
    const int max_step = static_cast<int>(r.budget("step", 16));
    for (std::size_t i = 0; i < std::max<std::size_t>(r.cfg.inputs.size(), 1); ++i) {
        ShiftSpace x = r.input(i);
        std::optional<int> k;
        if (x.is_finite_type()) k = std::max(x.step(), 0);
        else k = SyncOracle(x).min_step(max_step);
        rows.push_back({{"structure", io::to_json(structure(x))},
                        {"finite_type_step", k ? json(*k) : json(nullptr)},
                        {"entropy", io::to_json(entropy(x))}});
        if (k) r.check(is_k_step(x, *k), label(i) + ": is " + std::to_string(*k) + "-step");
    }
    r.result["shifts"] = rows;
}

inline void cmd_higher_block(Run& r) {
    ShiftSpace x = r.input(0);
    const int n = static_cast<int>(r.int_option("n"));
    if (n < 1) throw PreconditionError("n must be >= 1");
    ShiftSpace y = higher_block(x, n);
    r.result["shift"] = io::to_json(y);
    r.check(compare(entropy(x), entropy(y)) == 0, "entropy preserved by the higher block recoding");
}

inline void cmd_forbid(Run& r) {
    ShiftSpace x = r.input(0);
    auto w = r.option("words");
    if (!w) throw PreconditionError("forbid needs --words");
    json j = io::parse_text(*w, "--words");
    io::array_at(j, "--words");
    std::vector<Word> words;
    for (std::size_t i = 0; i < j.size(); ++i) words.push_back(io::word_of(j[i], "--words[" + std::to_string(i) + "]"));
    ShiftSpace y = forbid(x, words);
    r.result["shift"] = io::to_json(y);
    r.check(language_contained(y, x), "result contained in the input");
    r.check(compare(entropy(y), entropy(x)) <= 0, "entropy does not increase");
}

inline void cmd_image(Run& r) {
    ShiftSpace x = r.input(0);
    BlockMap c = r.code(0, x);
    ShiftSpace y = image(c);
    r.result["shift"] = io::to_json(y);
    r.check(is_factor_onto(c, y), "code maps onto the image");
    r.check(compare(entropy(y), entropy(x)) <= 0, "image entropy at most domain entropy");
}

inline void cmd_compose(Run& r) {
    ShiftSpace x = r.input(0);
    BlockMap f = r.code(0, x);
    BlockMap g = r.code(1, image(f));
    BlockMap h = compose(g, f);
    r.result["code"] = io::to_json(h);
    bool ok = true;
    for (const auto& w : words(x, h.window())) ok = ok && symdyn::apply(h, w) == symdyn::apply(g, symdyn::apply(f, w));
    r.check(ok, "composite agrees with sequential application on all " + std::to_string(h.window()) + "-windows");
}

inline void cmd_verify_code(Run& r) {
    ShiftSpace x = r.input(0);
    BlockMap c = r.code(0, x);
    ShiftSpace img = image(c);
    r.result["image"] = io::to_json(img);
    r.result["injective"] = is_embedding(c);
    r.result["window"] = c.window();
    if (r.cfg.inputs.size() > 1) {
        bool onto = language_equal(img, r.input(1));
        r.result["onto"] = onto;
        r.certs.push_back(onto ? "image equals input 1" : "image differs from input 1");
    } else {
        r.result["onto"] = nullptr;
    }
    r.certs.push_back(std::string("injectivity decided on the pair graph: ") + (r.result["injective"] ? "yes" : "no"));
}

inline void emit_decomposition(Run& r, const DecompositionReport& d) {
    r.result["decomposition"] = io::to_json(d);
    r.certs = d.certificates;
}

inline void cmd_decompose_factor(Run& r) {
    ShiftSpace x = r.input(0), y = r.input(1);
    BlockMap phi = r.code(0, x);
    auto t = r.target(false);
    Rational eps = r.epsilon();
    const std::string req = r.cfg.require.value_or("sft");
    DecompositionReport d;
    if (req == "sofic") {
        d = split_sofic(phi, y, *t.target.exact, eps, r.factor_options());
        certify(d, phi);
    } else if (req == "sft") {
        d = decompose_dense(phi, y, *t.target.exact, eps, r.factor_options());
    } else {
        throw PreconditionError("--require must be sofic or sft here");
    }
    emit_decomposition(r, d);
}

inline void cmd_decompose_sft(Run& r) {
    ShiftSpace x = r.input(0), y = r.input(1);
    BlockMap phi = r.code(0, x);
    DecompositionReport d = split_sft(phi, y, r.epsilon(), r.factor_options());
    certify(d, phi);
    emit_decomposition(r, d);
}

inline void cmd_sample_s0(Run& r) {
    ShiftSpace x = r.input(0), y = r.input(1);
    BlockMap phi = r.code(0, x);
    Rational eps = r.epsilon();
    if (!r.cfg.target || !r.cfg.target->is_array()) throw PreconditionError("sample-s0 needs --target with an array of targets");
    EntropyValue hX = entropy(x), hY = entropy(y);
    json rows = json::array();
    for (std::size_t i = 0; i < r.cfg.target->size(); ++i) {
        EntropyValue t = *io::target_of((*r.cfg.target)[i], false, "target[" + std::to_string(i) + "]").target.exact;
        json row = {{"target", io::to_json(t)}};
        if (compare(t, hY) < 0 || compare(t, hX) > 0) {
            row["status"] = "out-of-range";
        } else {
            try {
                DecompositionReport d = decompose_dense(phi, y, t, eps, r.factor_options());
                row["status"] = "ok";
                row["decomposition"] = io::to_json(d);
                row["perron"] = is_perron(d.intermediate_entropy.base);
                r.certs.push_back("row " + std::to_string(i) + ": " + std::to_string(d.certificates.size()) +
                                  " certificates passed");
            } catch (const Error& e) {
                row["status"] = "failed";
                row["error"] = {{"code", e.code()}, {"message", e.what()}};
            }
        }
        rows.push_back(row);
    }
    r.result["rows"] = rows;
}

inline void cmd_blowup(Run& r) {
    ShiftSpace x = r.input(0);
    auto orbit = r.option("orbit");
    auto mult = r.option("multipliers");
    if (!orbit || !mult) throw PreconditionError("blowup needs --orbit and --multipliers");
    BlowupSpec spec;
    spec.orbit = split_list(*orbit);
    for (const auto& s : split_list(*mult)) {
        try {
            spec.multipliers.push_back(std::stoi(s));
        } catch (const std::logic_error&) {
            throw ParseError("--multipliers: bad entry '" + s + "'");
        }
    }
    BlowupResult b = blow_up_certified(x, spec);
    r.result["blowup"] = io::to_json(b);
    r.certs = b.checks;
}

inline void cmd_build_bn(Run& r) {
    ShiftSpace x = r.input(0);
    if (x.kind() != ShiftSpace::Kind::edge_shift) throw PreconditionError("build-bn needs an edge_shift input");
    const int n = static_cast<int>(r.int_option("n"));
    if (n < 1) throw PreconditionError("n must be >= 1");
    ShiftSpace b = build_Bn(x.matrix(), n);
    StructureFacts f = structure(b);
    EntropyValue h = entropy(b);
    r.result["shift"] = io::to_json(b);
    r.result["structure"] = io::to_json(f);
    r.result["entropy"] = io::to_json(h);
    r.check(f.irreducible, "B_n irreducible");
    r.check(f.period == n, "period equals " + std::to_string(n));
    r.check(compare(h, entropy(x)) == 0, "entropy equals that of the input");
}

inline void cmd_embed_preconditions(Run& r) {
    ShiftSpace x = r.input(0), y = r.input(1);
    EmbedPreconditionReport e = embedding_preconditions(x, y, static_cast<int>(r.budget("horizon", 12)));
    r.result["preconditions"] = io::to_json(e);
    r.certs.push_back(std::string("entropy compared exactly: h(X) ") + (e.entropy_ok ? "<" : ">=") + " h(Y)");
    r.certs.push_back("census compared for k <= " + std::to_string(e.census_horizon) +
                      (e.horizon_certified ? " (crossover bound)" : " (fallback horizon)"));
}

inline void cmd_embed_oracle(Run& r) {
    ShiftSpace x = r.input(0), y = r.input(1);
    auto t = r.target(false);
    EntropySetQuery q;
    auto set = r.option("set");
    if (!set) throw PreconditionError("embed-oracle needs --set");
    q.set = parse_entropy_set(*set);
    q.h = *t.target.exact;
    q.hX = entropy(x);
    q.hY = entropy(y);
    q.p = r.int_option("p", structure(x).period);
    q.q = r.int_option("q", structure(y).period);
    q.x_irreducible = r.option("x_irreducible").value_or("0") == "1";
    MembershipResult m = membership(q);
    r.result["membership"] = io::to_json(m);
    r.result["query"] = {{"set", to_string(q.set)}, {"h", io::to_json(q.h)}, {"hX", io::to_json(q.hX)},
                         {"hY", io::to_json(q.hY)}, {"p", q.p}, {"q", q.q}, {"x_irreducible", q.x_irreducible},
                         {"target_form", t.form}};
    r.result["realization"] = t.realization ? io::matrix_json(*t.realization) : json(nullptr);
    r.certs.push_back("membership decided by exact comparisons under: " + m.hypothesis);
}

inline void cmd_between_search(Run& r) {
    ShiftSpace x = r.input(0), y = r.input(1);
    auto t = r.target(true);
    BetweenOptions o;
    o.max_word_length = static_cast<int>(r.budget("word-length", o.max_word_length));
    o.max_set_size = static_cast<int>(r.budget("set-size", o.max_set_size));
    o.max_sets = r.budget("sets", o.max_sets);
    RequireClass req = parse_require(r.cfg.require.value_or("none"));
    BetweenResult b = subshift_between_search(x, y, t.target, r.epsilon(), req, o);
    r.result["between"] = io::to_json(b);
    r.check(language_contained(x, b.Z) && language_contained(b.Z, y), "X contained in Z contained in Y");
    r.check(t.target.within(b.h, r.epsilon()), "|h(Z) - target| < tol");
}

inline void dispatch(Run& r) {
    static const std::map<std::string, void (*)(Run&)> table = {
        {"entropy", cmd_entropy},
        {"census", cmd_census},
        {"structure", cmd_structure},
        {"higher-block", cmd_higher_block},
        {"forbid", cmd_forbid},
        {"image", cmd_image},
        {"compose", cmd_compose},
        {"verify-code", cmd_verify_code},
        {"decompose-factor", cmd_decompose_factor},
        {"decompose-sft", cmd_decompose_sft},
        {"sample-s0", cmd_sample_s0},
        {"blowup", cmd_blowup},
        {"build-bn", cmd_build_bn},
        {"embed-preconditions", cmd_embed_preconditions},
        {"embed-oracle", cmd_embed_oracle},
        {"between-search", cmd_between_search},
    };
    auto it = table.find(r.cfg.command);
    if (it == table.end()) throw PreconditionError("unknown command '" + r.cfg.command + "'");
    it->second(r);
}

}  // namespace detail

/// Runs a command and returns its report. Library errors are recorded in the report; the
/// "exit_code" field carries the CLI exit status.
inline io::json run_command(const RunConfig& cfg) {
    using io::json;
    auto t0 = std::chrono::steady_clock::now();
    detail::Run r{cfg};
    json rep = {{"format_version", io::format_version}, {"command", cfg.command}, {"config", io::config_json(cfg)}};
    try {
        detail::dispatch(r);
        rep["status"] = "ok";
        rep["exit_code"] = 0;
        rep["result"] = r.result;
        rep["certificates"] = r.certs;
    } catch (const Error& e) {
        rep["status"] = "error";
        rep["exit_code"] = exit_code(e.kind());
        json err = {{"kind", to_string(e.kind())}, {"code", e.code()}, {"message", e.what()}};
        if (auto m = dynamic_cast<const Mismatch*>(&e)) err["witness"] = m->witness();
        rep["error"] = err;
        rep["result"] = nullptr;
        rep["certificates"] = r.certs;
    }
    if (cfg.timing)
        rep["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    return rep;
}

struct VerifyOutcome {
    int exit_code = 0;
    std::vector<std::string> passed;
    std::string failure;   // first violated certificate
    std::string witness;
};

namespace detail {

inline void compare_lists(const std::vector<std::string>& want, const std::vector<std::string>& got,
                          const std::string& where, VerifyOutcome& out) {
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (i >= got.size() || got[i] != want[i]) throw CertificateFailure(where + ": certificate missing or altered: " + want[i]);
        out.passed.push_back(want[i]);
    }
    if (got.size() > want.size()) throw CertificateFailure(where + ": unexpected certificate: " + got[want.size()]);
}

inline void verify_decomposition_json(const io::json& dj, const BlockMap& phi, const std::optional<EntropyValue>& target,
                                      const std::optional<Rational>& eps, const std::vector<std::string>* top,
                                      const std::string& where, VerifyOutcome& out) {
    DecompositionReport d = io::decomposition_of(dj, where);
    if (target && compare(*target, d.target) != 0) throw CertificateFailure(where + ": target differs from the config");
    if (eps && *eps != d.epsilon) throw CertificateFailure(where + ": epsilon differs from the config");
    DecompositionReport c = d;
    certify(c, phi);
    compare_lists(c.certificates, d.certificates, where, out);
    if (top) compare_lists(c.certificates, *top, "certificates", out);
}

inline std::string first_difference(const io::json& a, const io::json& b) {
    io::json patch = io::json::diff(a, b);
    if (patch.empty()) return "";
    return patch[0].value("path", std::string("/"));
}

}  // namespace detail

/// Re-checks a report from its serialized content. Decompositions are re-certified from their
/// tables; other commands are re-run from the embedded inputs and compared field by field.
inline VerifyOutcome verify_report(const io::json& rep) {
    using io::json;
    VerifyOutcome out;
    try {
        if (!rep.is_object() || !rep.contains("format_version")) throw ParseError("report: missing format_version");
        if (!rep["format_version"].is_number_integer() || rep["format_version"].get<long>() != io::format_version)
            throw ParseError("report: unsupported format_version " + rep["format_version"].dump() + ", expected " +
                             std::to_string(io::format_version));
        try {
            RunConfig cfg = io::config_of(io::field(rep, "config", "report"), "config");
            const std::string cmd = io::str_of(io::field(rep, "command", "report"), "command");
            if (cmd != cfg.command) throw CertificateFailure("command differs from the config echo");
            const std::string status = io::str_of(io::field(rep, "status", "report"), "status");
            auto listed = io::strings_of(io::field(rep, "certificates", "report"), "certificates");
            const bool decomposition = cmd == "decompose-factor" || cmd == "decompose-sft" || cmd == "sample-s0";
            if (status == "ok" && decomposition) {
                detail::Run r{cfg};
                ShiftSpace x = r.input(0);
                BlockMap phi = r.code(0, x);
                const json& res = io::field(rep, "result", "report");
                std::optional<Rational> eps = r.epsilon();
                if (cmd == "sample-s0") {
                    std::vector<std::string> want;
                    const json& rows = io::array_at(io::field(res, "rows", "result"), "result.rows");
                    for (std::size_t i = 0; i < rows.size(); ++i) {
                        if (rows[i].value("status", "") != "ok") continue;
                        const std::string w = "result.rows[" + std::to_string(i) + "]";
                        EntropyValue t = io::entropy_of(io::field(rows[i], "target", w), w + ".target");
                        const json& dj = io::field(rows[i], "decomposition", w);
                        detail::verify_decomposition_json(dj, phi, t, eps, nullptr, w + ".decomposition", out);
                        want.push_back("row " + std::to_string(i) + ": " +
                                       std::to_string(dj["certificates"].size()) + " certificates passed");
                    }
                    detail::compare_lists(want, listed, "certificates", out);
                } else {
                    std::optional<EntropyValue> t;
                    if (cmd == "decompose-factor") t = *r.target(false).target.exact;
                    detail::verify_decomposition_json(io::field(res, "decomposition", "result"), phi, t, eps, &listed,
                                                      "result.decomposition", out);
                }
            } else {
                RunConfig again = cfg;
                again.timing = false;
                json fresh = run_command(again);
                for (const char* key : {"status", "exit_code", "result", "error"}) {
                    json a = rep.contains(key) ? rep[key] : json(nullptr);
                    json b = fresh.contains(key) ? fresh[key] : json(nullptr);
                    if (std::string(key) == "error" && a.is_object() && b.is_object()) {
                        a = a.value("code", "");
                        b = b.value("code", "");
                    }
                    if (a != b) {
                        out.witness = std::string("/") + key + detail::first_difference(b, a);
                        throw CertificateFailure(std::string("re-run disagrees on ") + key);
                    }
                }
                detail::compare_lists(io::strings_of(fresh["certificates"], "certificates"), listed, "certificates", out);
            }
        } catch (const ParseError& e) {
            throw CertificateFailure(std::string("report content does not decode: ") + e.what());
        } catch (const PreconditionError& e) {
            throw CertificateFailure(std::string("report content rejected: ") + e.what());
        }
    } catch (const Mismatch& e) {
        out.exit_code = exit_code(e.kind());
        out.failure = e.what();
        out.witness = e.witness();
    } catch (const Error& e) {
        out.exit_code = exit_code(e.kind());
        out.failure = e.what();
    }
    return out;
}

}  // namespace symdyn

#endif
