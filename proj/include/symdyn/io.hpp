#ifndef SYMDYN_IO_HPP
#define SYMDYN_IO_HPP

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symdyn/embed_decomp.hpp"
#include "symdyn/factor_decomp.hpp"

namespace symdyn::io {

using json = nlohmann::json;

inline constexpr int format_version = 1;

/// Parses JSON text; syntax errors become ParseError "source:line:col: ...".
inline json parse_text(const std::string& text, const std::string& source = "<input>") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t off = e.byte == 0 ? 0 : e.byte - 1;
        int line = 1, col = 1;
        for (std::size_t i = 0; i < off && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        auto p = msg.find("parse error");
        if (p != std::string::npos) msg = msg.substr(p);
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

inline json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Writes through a temporary file and a rename.
inline void write_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw PreconditionError(path + ": cannot write");
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw PreconditionError(path + ": rename failed");
}

// ---- field access with paths in messages ----

inline const json& field(const json& j, const std::string& key, const std::string& at) {
    if (!j.is_object()) throw ParseError(at + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(at + ": missing field '" + key + "'");
    return *it;
}

inline const json& array_at(const json& j, const std::string& at) {
    if (!j.is_array()) throw ParseError(at + ": expected an array");
    return j;
}

inline std::string str_of(const json& j, const std::string& at) {
    if (!j.is_string()) throw ParseError(at + ": expected a string");
    return j.get<std::string>();
}

inline long long int_of(const json& j, const std::string& at) {
    if (!j.is_number_integer()) throw ParseError(at + ": expected an integer");
    return j.get<long long>();
}

inline bool bool_of(const json& j, const std::string& at) {
    if (!j.is_boolean()) throw ParseError(at + ": expected a boolean");
    return j.get<bool>();
}

// Integers that fit in 64 bits are numbers, larger ones decimal strings.
inline json to_json(const BigInt& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

inline BigInt bigint_of(const json& j, const std::string& at) {
    if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return BigInt(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw ParseError(at + ": expected an integer");
}

inline json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_of(const json& j, const std::string& at) {
    if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<long long>())));
    if (!j.is_string()) throw ParseError(at + ": expected a rational string \"p/q\"");
    try {
        Rational r = parse_rational(j.get<std::string>());
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError(at + ": bad rational '" + j.get<std::string>() + "'");
    }
}

inline json word_json(const Word& w) { return json(w); }

inline Word word_of(const json& j, const std::string& at) {
    array_at(j, at);
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) w.push_back(str_of(j[i], at + "[" + std::to_string(i) + "]"));
    return w;
}

inline std::vector<std::string> strings_of(const json& j, const std::string& at) { return word_of(j, at); }

// Library precondition failures while building a value from a file are input errors.
template <class F>
auto building(const std::string& at, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        throw ParseError(at + ": " + e.what());
    } catch (const WordNotInLanguage& e) {
        throw ParseError(at + ": " + e.what());
    }
}

// ---- shifts ----

inline bool default_edge_names(const ShiftSpace& x) {
    const auto& a = x.alphabet();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != std::to_string(i)) return false;
    return true;
}

inline json to_json(const ShiftSpace& x) {
    json j;
    switch (x.kind()) {
        case ShiftSpace::Kind::edge_shift: {
            j["kind"] = "edge_shift";
            json m = json::array();
            for (const auto& row : x.matrix()) m.push_back(row);
            j["matrix"] = m;
            if (!default_edge_names(x)) j["names"] = x.alphabet();
            break;
        }
        case ShiftSpace::Kind::sft: {
            j["kind"] = "sft";
            j["alphabet"] = x.alphabet();
            json f = json::array();
            for (const auto& w : x.forbidden()) f.push_back(x.decode(w));
            j["forbidden"] = f;
            break;
        }
        case ShiftSpace::Kind::sofic: {
            const Graph& g = x.graph();
            j["kind"] = "sofic";
            j["alphabet"] = g.alphabet;
            j["states"] = g.states;
            json e = json::array();
            for (const auto& ed : g.edges)
                e.push_back({{"from", g.states[ed.from]}, {"to", g.states[ed.to]}, {"label", g.alphabet[ed.label]}});
            j["edges"] = e;
            break;
        }
    }
    return j;
}

inline ShiftSpace shift_of(const json& j, const std::string& at = "shift") {
    const std::string kind = str_of(field(j, "kind", at), at + ".kind");
    if (kind == "edge_shift") {
        const json& m = array_at(field(j, "matrix", at), at + ".matrix");
        Matrix A;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string ri = at + ".matrix[" + std::to_string(i) + "]";
            array_at(m[i], ri);
            std::vector<long long> row;
            for (std::size_t c = 0; c < m[i].size(); ++c) row.push_back(int_of(m[i][c], ri + "[" + std::to_string(c) + "]"));
            A.push_back(row);
        }
        std::vector<std::string> names;
        if (j.contains("names")) names = strings_of(j["names"], at + ".names");
        return building(at, [&] { return ShiftSpace::edge_shift(A, names); });
    }
    if (kind == "sft") {
        auto alphabet = strings_of(field(j, "alphabet", at), at + ".alphabet");
        const json& f = array_at(field(j, "forbidden", at), at + ".forbidden");
        std::vector<Word> forb;
        for (std::size_t i = 0; i < f.size(); ++i) forb.push_back(word_of(f[i], at + ".forbidden[" + std::to_string(i) + "]"));
        return building(at, [&] { return ShiftSpace::sft(alphabet, forb); });
    }
    if (kind == "sofic") {
        Graph g;
        g.states = strings_of(field(j, "states", at), at + ".states");
        const json& e = array_at(field(j, "edges", at), at + ".edges");
        std::map<std::string, int> sid;
        for (std::size_t i = 0; i < g.states.size(); ++i)
            if (!sid.emplace(g.states[i], static_cast<int>(i)).second)
                throw ParseError(at + ".states: duplicate state '" + g.states[i] + "'");
        std::vector<std::tuple<std::string, std::string, std::string>> raw;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const std::string ei = at + ".edges[" + std::to_string(i) + "]";
            raw.emplace_back(str_of(field(e[i], "from", ei), ei + ".from"), str_of(field(e[i], "to", ei), ei + ".to"),
                             str_of(field(e[i], "label", ei), ei + ".label"));
        }
        if (j.contains("alphabet")) {
            g.alphabet = strings_of(j["alphabet"], at + ".alphabet");
        } else {
            for (const auto& r : raw)
                if (std::find(g.alphabet.begin(), g.alphabet.end(), std::get<2>(r)) == g.alphabet.end())
                    g.alphabet.push_back(std::get<2>(r));
        }
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const auto& [f, t, l] = raw[i];
            const std::string ei = at + ".edges[" + std::to_string(i) + "]";
            if (!sid.count(f)) throw ParseError(ei + ": unknown state '" + f + "'");
            if (!sid.count(t)) throw ParseError(ei + ": unknown state '" + t + "'");
            auto li = std::find(g.alphabet.begin(), g.alphabet.end(), l);
            if (li == g.alphabet.end()) throw ParseError(ei + ": label '" + l + "' not in alphabet");
            g.edges.push_back({sid[f], sid[t], static_cast<int>(li - g.alphabet.begin())});
        }
        return building(at, [&] { return ShiftSpace::sofic(g); });
    }
    throw ParseError(at + ".kind: unknown kind '" + kind + "'");
}

// ---- codes ----

/// Code file body; the domain travels separately.
inline json to_json(const BlockMap& c) {
    json t = json::array();
    for (const auto& [w, o] : c.table) t.push_back({{"window", w}, {"out", o}});
    return {{"memory", c.memory}, {"anticipation", c.anticipation}, {"target_alphabet", c.target_alphabet}, {"table", t}};
}

/// Partial tables are rejected by BlockMap::make with the list of missing windows.
inline BlockMap code_of(const json& j, const ShiftSpace& domain, const std::string& at = "code") {
    const int m = static_cast<int>(int_of(field(j, "memory", at), at + ".memory"));
    const int a = static_cast<int>(int_of(field(j, "anticipation", at), at + ".anticipation"));
    const json& t = array_at(field(j, "table", at), at + ".table");
    std::map<Word, std::string> table;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string ti = at + ".table[" + std::to_string(i) + "]";
        Word w = word_of(field(t[i], "window", ti), ti + ".window");
        if (static_cast<int>(w.size()) != m + a + 1) throw ParseError(ti + ": window length must be memory + anticipation + 1");
        if (!table.emplace(w, str_of(field(t[i], "out", ti), ti + ".out")).second)
            throw ParseError(ti + ": duplicate window [" + join_word(w) + "]");
    }
    std::vector<std::string> target;
    if (j.contains("target_alphabet")) target = strings_of(j["target_alphabet"], at + ".target_alphabet");
    return BlockMap::make(domain, m, a, std::move(table), target);
}

inline json stage_json(const BlockMap& c) { return {{"domain", to_json(c.domain)}, {"code", to_json(c)}}; }

inline BlockMap stage_of(const json& j, const std::string& at) {
    ShiftSpace d = shift_of(field(j, "domain", at), at + ".domain");
    return code_of(field(j, "code", at), d, at + ".code");
}

inline json chain_json(const CodeChain& ch) {
    json a = json::array();
    for (const auto& c : ch) a.push_back(stage_json(c));
    return a;
}

inline CodeChain chain_of(const json& j, const std::string& at) {
    array_at(j, at);
    CodeChain ch;
    for (std::size_t i = 0; i < j.size(); ++i) ch.push_back(stage_of(j[i], at + "[" + std::to_string(i) + "]"));
    return ch;
}

// ---- numbers ----

inline json to_json(const IntPolynomial& p) {
    json c = json::array();
    for (const auto& v : p.coeffs()) c.push_back(to_json(v));
    return c;
}

inline json to_json(const AlgebraicReal& x) {
    return {{"poly", to_json(x.poly())}, {"interval", json::array({rational_json(x.interval().lo), rational_json(x.interval().hi)})}};
}

inline json to_json(const EntropyValue& e) {
    json j = to_json(e.base);
    j["approx"] = e.approx;
    return j;
}

inline AlgebraicReal algebraic_of(const json& j, const std::string& at) {
    const json& p = array_at(field(j, "poly", at), at + ".poly");
    std::vector<BigInt> c;
    for (std::size_t i = 0; i < p.size(); ++i) c.push_back(bigint_of(p[i], at + ".poly[" + std::to_string(i) + "]"));
    const json& iv = array_at(field(j, "interval", at), at + ".interval");
    if (iv.size() != 2) throw ParseError(at + ".interval: expected [lo, hi]");
    Interval I{rational_of(iv[0], at + ".interval[0]"), rational_of(iv[1], at + ".interval[1]")};
    return building(at, [&] { return AlgebraicReal::root_of(IntPolynomial(c), I); });
}

/// The approx field is display only and is recomputed.
inline EntropyValue entropy_of(const json& j, const std::string& at = "entropy") {
    AlgebraicReal b = algebraic_of(j, at);
    if (b.compare_rational(1) < 0) throw ParseError(at + ": entropy base must be >= 1");
    return EntropyValue::of_base(b);
}

inline json to_json(const PeriodicCensus& c) {
    json q = json::object();
    for (int k = 1; k <= c.horizon; ++k) q[std::to_string(k)] = to_json(c.at(k));
    return {{"horizon", c.horizon}, {"q", q}};
}

inline PeriodicCensus census_of(const json& j, const std::string& at = "census") {
    PeriodicCensus c;
    c.horizon = static_cast<int>(int_of(field(j, "horizon", at), at + ".horizon"));
    if (c.horizon < 0) throw ParseError(at + ".horizon: must be nonnegative");
    const json& q = field(j, "q", at);
    if (!q.is_object() || static_cast<int>(q.size()) != c.horizon) throw ParseError(at + ".q: expected keys 1..horizon");
    for (int k = 1; k <= c.horizon; ++k) {
        const std::string key = std::to_string(k);
        c.q.push_back(bigint_of(field(q, key, at + ".q"), at + ".q." + key));
    }
    return c;
}

inline json to_json(const StructureFacts& f) {
    return {{"irreducible", f.irreducible}, {"mixing", f.mixing}, {"period", f.period}, {"note", f.nonwandering_note}};
}

inline json matrix_json(const Matrix& m) {
    json a = json::array();
    for (const auto& r : m) a.push_back(r);
    return a;
}

// ---- decompositions ----

inline json to_json(const DecompositionReport& r) {
    json trace = json::array();
    for (const auto& t : r.trace) trace.push_back({{"stage", t.stage}, {"index", t.index}, {"h", to_json(t.h)}});
    json j = {{"construction", r.construction},
              {"phi1", chain_json(r.phi1)},
              {"phi2", chain_json(r.phi2)},
              {"intermediate", to_json(r.intermediate)},
              {"intermediate_entropy", to_json(r.intermediate_entropy)},
              {"target", to_json(r.target)},
              {"epsilon", rational_json(r.epsilon)},
              {"params", r.params},
              {"trace", trace},
              {"certificates", r.certificates}};
    j["step_claim"] = r.step_claim ? json(*r.step_claim) : json(nullptr);
    return j;
}

inline DecompositionReport decomposition_of(const json& j, const std::string& at = "decomposition") {
    DecompositionReport r;
    r.construction = str_of(field(j, "construction", at), at + ".construction");
    r.phi1 = chain_of(field(j, "phi1", at), at + ".phi1");
    r.phi2 = chain_of(field(j, "phi2", at), at + ".phi2");
    r.intermediate = shift_of(field(j, "intermediate", at), at + ".intermediate");
    r.intermediate_entropy = entropy_of(field(j, "intermediate_entropy", at), at + ".intermediate_entropy");
    r.target = entropy_of(field(j, "target", at), at + ".target");
    r.epsilon = rational_of(field(j, "epsilon", at), at + ".epsilon");
    const json& sc = field(j, "step_claim", at);
    if (!sc.is_null()) r.step_claim = static_cast<int>(int_of(sc, at + ".step_claim"));
    const json& p = field(j, "params", at);
    if (!p.is_object()) throw ParseError(at + ".params: expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) r.params[it.key()] = int_of(it.value(), at + ".params." + it.key());
    const json& tr = array_at(field(j, "trace", at), at + ".trace");
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const std::string ti = at + ".trace[" + std::to_string(i) + "]";
        r.trace.push_back({str_of(field(tr[i], "stage", ti), ti + ".stage"),
                           static_cast<int>(int_of(field(tr[i], "index", ti), ti + ".index")),
                           entropy_of(field(tr[i], "h", ti), ti + ".h")});
    }
    r.certificates = strings_of(field(j, "certificates", at), at + ".certificates");
    return r;
}

// ---- embedding side ----

inline json to_json(const BlowupResult& r) {
    return {{"shift", to_json(r.shift)}, {"horizon", r.horizon},   {"before", to_json(r.before)},
            {"after", to_json(r.after)}, {"expected", to_json(r.expected)}, {"splits", r.splits},
            {"families", r.families}};
}

inline json to_json(const EmbedPreconditionReport& r) {
    return {{"entropy_ok", r.entropy_ok},       {"census_horizon", r.census_horizon},
            {"census_ok", r.census_ok},         {"horizon_certified", r.horizon_certified},
            {"witnesses", r.witnesses},         {"embeds", r.embeds()}};
}

inline json to_json(const MembershipResult& r) {
    return {{"member", r.member},
            {"witness", r.witness ? json(*r.witness) : json(nullptr)},
            {"hypothesis", r.hypothesis},
            {"reason", r.reason}};
}

inline json to_json(const BetweenResult& r) {
    json f = json::array();
    for (const auto& w : r.forbidden) f.push_back(w);
    return {{"shift", to_json(r.Z)},
            {"forbidden", f},
            {"entropy", to_json(r.h)},
            {"step", r.step ? json(*r.step) : json(nullptr)},
            {"sets_tried", r.sets_tried}};
}

// ---- entropy targets ----

struct ResolvedTarget {
    EntropyTarget target;
    std::string form;                 // exact, nats, log_power, approx
    std::optional<Matrix> realization;
};

/// Edge shift whose entropy is (a/b) log n: a b-cycle with one edge of multiplicity n^a.
inline Matrix power_cycle(long n, long a, long b) {
    Matrix m = zero_matrix(static_cast<std::size_t>(b));
    long long w = 1;
    for (long i = 0; i < a; ++i) w *= n;
    for (long i = 0; i < b; ++i) m[i][(i + 1) % b] = i == 0 ? w : 1;
    return m;
}

/// Small realizations tried for approximate targets, in a fixed order: power cycles with n <= 9 and
/// denominators <= 6, then companion matrices x^d - a1 x^{d-1} - ... - ad with d <= 3, ai <= 4.
inline std::vector<Matrix> realization_catalogue() {
    std::vector<Matrix> out;
    for (long b = 1; b <= 6; ++b)
        for (long n = 2; n <= 9; ++n)
            for (long a = 1; a <= 2 * b && a <= 6; ++a)
                if (std::gcd(a, b) == 1) out.push_back(power_cycle(n, a, b));
    for (int d = 2; d <= 3; ++d) {
        std::vector<int> coef(d, 0);
        for (;;) {
            if (coef[d - 1] >= 1) {
                Matrix m = zero_matrix(d);
                for (int i = 0; i < d; ++i) m[0][i] = coef[i];
                for (int i = 1; i < d; ++i) m[i][i - 1] = 1;
                out.push_back(m);
            }
            int i = 0;
            while (i < d && ++coef[i] > 4) coef[i++] = 0;
            if (i == d) break;
        }
    }
    return out;
}

/// Spectral radius of an irreducible matrix by power iteration on A + I (primitive).
inline double radius_estimate(const Matrix& m) {
    const std::size_t n = m.size();
    std::vector<double> v(n, 1.0), w(n);
    double r = 1;
    for (int it = 0; it < 2000; ++it) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = v[i];
            for (std::size_t j = 0; j < n; ++j) w[i] += static_cast<double>(m[i][j]) * v[j];
            s = std::max(s, w[i]);
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / s;
        if (std::abs(s - r) < 1e-15 * s) break;
        r = s;
    }
    return r - 1;
}

/// Closest catalogue realization to approx with exact |h - approx| < tol; ties keep catalogue order.
inline std::optional<std::pair<EntropyValue, Matrix>> realize(const Rational& approx, const Rational& tol) {
    std::optional<std::pair<EntropyValue, Matrix>> best;
    double best_gap = 0;
    const double a = approx.get_d(), t = tol.get_d();
    for (const auto& m : realization_catalogue()) {
        double h = std::log(radius_estimate(m));
        double gap = std::abs(h - a);
        if (gap > t + 1e-6 || (best && gap >= best_gap)) continue;
        EntropyValue e = EntropyValue::of_base(perron_root(m));
        if (!log_within(e.base, approx, tol)) continue;
        if (best && compare(best->first, e) == 0) continue;
        best = std::make_pair(e, m);
        best_gap = gap;
    }
    return best;
}

/// Target forms: {"poly","interval"} exact; {"nats":"p/q"}; {"log_power":{"r":"p/q","n":k}} for r log k;
/// {"approx":x,"tol":"p/q"} resolved through a small realization or rejected as InexactTarget.
inline ResolvedTarget target_of(const json& j, bool allow_nats, const std::string& at = "target") {
    ResolvedTarget r;
    if (!j.is_object()) throw ParseError(at + ": expected an object");
    if (j.contains("poly")) {
        r.form = "exact";
        r.target = EntropyTarget::of(entropy_of(j, at));
        return r;
    }
    if (j.contains("log_power")) {
        const json& lp = j["log_power"];
        Rational q = rational_of(field(lp, "r", at + ".log_power"), at + ".log_power.r");
        BigInt n = bigint_of(field(lp, "n", at + ".log_power"), at + ".log_power.n");
        if (q < 0 || n < 1) throw ParseError(at + ".log_power: need r >= 0 and n >= 1");
        r.form = "log_power";
        r.target = EntropyTarget::of(scaled_log(q, n));
        return r;
    }
    if (j.contains("nats")) {
        if (!allow_nats) throw InexactTarget(at + ": a rational number of nats is not an exact entropy here");
        r.form = "nats";
        r.target = EntropyTarget::in_nats(rational_of(j["nats"], at + ".nats"));
        return r;
    }
    if (j.contains("approx")) {
        const json& a = j["approx"];
        if (!a.is_number()) throw ParseError(at + ".approx: expected a number");
        Rational x(a.get<double>());
        Rational tol = rational_of(field(j, "tol", at), at + ".tol");
        if (tol <= 0) throw ParseError(at + ".tol: must be positive");
        auto hit = realize(x, tol);
        if (!hit) throw InexactTarget(at + ": no realization within tol of " + std::to_string(a.get<double>()));
        r.form = "approx";
        r.target = EntropyTarget::of(hit->first);
        r.realization = hit->second;
        return r;
    }
    throw ParseError(at + ": expected poly/interval, log_power, nats or approx/tol");
}

inline json to_json(const EntropyTarget& t) {
    if (t.exact) return to_json(*t.exact);
    return {{"nats", rational_json(t.nats)}};
}

}  // namespace symdyn::io

#endif
