#ifndef SYMDYN_CODE_HPP
#define SYMDYN_CODE_HPP

#include <sstream>

#include "symdyn/dynamics.hpp"

namespace symdyn {

inline std::string join_word(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
    return s;
}

/// Sliding block code. Output at position i reads x[i-m .. i+a].
struct BlockMap {
    int memory = 0;
    int anticipation = 0;
    ShiftSpace domain;
    std::vector<std::string> target_alphabet;
    std::map<Word, std::string> table;

    int window() const noexcept { return memory + anticipation + 1; }

    /// Validates that `table` covers B_{m+a+1}(domain) exactly. Target alphabet defaults to the sorted outputs.
    static BlockMap make(ShiftSpace domain, int m, int a, std::map<Word, std::string> table,
                         std::vector<std::string> target = {}) {
        if (m < 0 || a < 0) throw PreconditionError("memory and anticipation must be nonnegative");
        BlockMap c;
        c.memory = m;
        c.anticipation = a;
        c.domain = std::move(domain);
        auto need = words(c.domain, m + a + 1);
        std::vector<Word> missing;
        for (const auto& w : need)
            if (!table.count(w)) missing.push_back(w);
        if (!missing.empty()) {
            std::string msg = "table misses " + std::to_string(missing.size()) + " window(s):";
            for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " [" + join_word(missing[i]) + "]";
            throw PreconditionError(msg);
        }
        if (table.size() != need.size()) {
            std::set<Word> ok(need.begin(), need.end());
            for (const auto& [w, o] : table)
                if (!ok.count(w)) throw PreconditionError("table has window outside the language: [" + join_word(w) + "]");
        }
        if (target.empty()) {
            std::set<std::string> outs;
            for (const auto& [w, o] : table) outs.insert(o);
            target.assign(outs.begin(), outs.end());
        } else {
            std::set<std::string> allowed(target.begin(), target.end());
            for (const auto& [w, o] : table)
                if (!allowed.count(o)) throw PreconditionError("output symbol '" + o + "' not in target alphabet");
        }
        c.target_alphabet = std::move(target);
        c.table = std::move(table);
        return c;
    }

    static BlockMap identity(const ShiftSpace& x) {
        std::map<Word, std::string> t;
        for (const auto& w : words(x, 1)) t[w] = w[0];
        return make(x, 0, 0, std::move(t), trim(x).alphabet());
    }

    /// Code from a function on windows.
    template <class F>
    static BlockMap from_function(const ShiftSpace& x, int m, int a, F f) {
        std::map<Word, std::string> t;
        for (const auto& w : words(x, m + a + 1)) t[w] = f(w);
        return make(x, m, a, std::move(t));
    }
};

inline Word apply(const BlockMap& c, const Word& w) {
    const int n = static_cast<int>(w.size());
    if (n < c.window()) throw WordTooShort("word shorter than the code window");
    Word out;
    for (int i = 0; i + c.window() <= n; ++i) {
        Word win(w.begin() + i, w.begin() + i + c.window());
        auto it = c.table.find(win);
        if (it == c.table.end()) throw WordNotInDomain("window [" + join_word(win) + "] not in the domain");
        out.push_back(it->second);
    }
    if (!contains_word(c.domain, w)) throw WordNotInDomain("word not in the domain language");
    return out;
}

/// g after f: memory and anticipation add.
inline BlockMap compose(const BlockMap& g, const BlockMap& f) {
    const int m = f.memory + g.memory, a = f.anticipation + g.anticipation;
    std::map<Word, std::string> t;
    for (const auto& u : words(f.domain, m + a + 1)) {
        Word v;
        for (int i = 0; i < g.window(); ++i) {
            Word win(u.begin() + i, u.begin() + i + f.window());
            v.push_back(f.table.at(win));
        }
        auto it = g.table.find(v);
        if (it == g.table.end()) throw ImageNotInDomain("image window [" + join_word(v) + "] not in the outer domain");
        t[u] = it->second;
    }
    return BlockMap::make(f.domain, m, a, std::move(t), g.target_alphabet);
}

/// Same code read through a wider window (memory M >= m, anticipation A >= a).
inline BlockMap widen(const BlockMap& c, int M, int A) {
    if (M < c.memory || A < c.anticipation) throw PreconditionError("widen cannot shrink the window");
    std::map<Word, std::string> t;
    const int off = M - c.memory;
    for (const auto& u : words(c.domain, M + A + 1))
        t[u] = c.table.at(Word(u.begin() + off, u.begin() + off + c.window()));
    BlockMap r = c;
    r.memory = M;
    r.anticipation = A;
    r.table = std::move(t);
    return r;
}

/// Graph whose bi-infinite paths are the points of the domain read through the code window:
/// edges are paths of length `w` in the domain presentation; `windows[e]` is the label word of edge e.
struct WindowGraph {
    Graph graph;
    std::vector<Word> windows;
};

inline WindowGraph window_graph(const ShiftSpace& x, int w) {
    Graph g = x.is_finite_type() ? essential_presentation(x) : determinize(essential_presentation(x));
    WindowGraph r;
    if (w == 1) {
        r.graph = g;
        for (auto& e : r.graph.edges) {
            r.windows.push_back({g.alphabet[e.label]});
            e.label = static_cast<int>(r.windows.size()) - 1;
        }
        return r;
    }
    auto states = paths_of_length(g, w - 1);
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < states.size(); ++i) {
        index[states[i]] = static_cast<int>(i);
        r.graph.states.push_back(std::to_string(i));
    }
    std::vector<std::vector<int>> out_ids(g.states.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) out_ids[g.edges[i].from].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < states.size(); ++i)
        for (int e : out_ids[g.edges[states[i].back()].to]) {
            std::vector<int> full = states[i];
            full.push_back(e);
            Word lab;
            for (int id : full) lab.push_back(g.alphabet[g.edges[id].label]);
            std::vector<int> to(full.begin() + 1, full.end());
            r.graph.edges.push_back({static_cast<int>(i), index.at(to), static_cast<int>(r.windows.size())});
            r.windows.push_back(std::move(lab));
        }
    return r;
}

/// Image shift: the window graph relabeled by the table, as a minimal right-resolving presentation.
inline ShiftSpace image(const BlockMap& c) {
    WindowGraph wg = window_graph(c.domain, c.window());
    Graph r;
    r.alphabet = c.target_alphabet;
    r.states = wg.graph.states;
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < r.alphabet.size(); ++i) pos[r.alphabet[i]] = static_cast<int>(i);
    for (const auto& e : wg.graph.edges) r.edges.push_back({e.from, e.to, pos.at(c.table.at(wg.windows[e.label]))});
    std::sort(r.edges.begin(), r.edges.end());
    return determinize(ShiftSpace::sofic(r));
}

inline bool is_factor_onto(const BlockMap& c, const ShiftSpace& y) { return language_equal(image(c), y); }

/// Injectivity on points: the pair graph of equal-output window edges, trimmed, must keep the two
/// windows equal on every edge.
inline bool is_embedding(const BlockMap& c) {
    WindowGraph wg = window_graph(c.domain, c.window());
    const auto& G = wg.graph;
    const int n = G.num_states();
    auto out = G.out_edges();
    Graph pg;
    pg.alphabet = {"same", "diff"};
    for (int i = 0; i < n * n; ++i) pg.states.push_back(std::to_string(i));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            for (const auto& e : out[s])
                for (const auto& f : out[t]) {
                    const Word& we = wg.windows[e.label];
                    const Word& wf = wg.windows[f.label];
                    if (c.table.at(we) != c.table.at(wf)) continue;
                    pg.edges.push_back({s * n + t, e.to * n + f.to, we == wf ? 0 : 1});
                }
    Graph tr = trim_graph(pg);
    for (const auto& e : tr.edges)
        if (e.label == 1) return false;
    return true;
}

/// Higher-block recoding: returns (1-block code on X^[w], beta : X -> X^[w]) with code = recoded o beta.
inline std::pair<BlockMap, BlockMap> recode_one_block(const BlockMap& c) {
    if (c.window() == 1) return {c, BlockMap::identity(c.domain)};
    ShiftSpace hb = higher_block(c.domain, c.window());
    std::map<Word, std::string> one, beta;
    for (const auto& [w, o] : c.table) {
        std::string sym = block_name(w);
        one[{sym}] = o;
        beta[w] = sym;
    }
    BlockMap recoded = BlockMap::make(hb, 0, 0, std::move(one), c.target_alphabet);
    BlockMap b = BlockMap::make(c.domain, c.memory, c.anticipation, std::move(beta), hb.alphabet());
    return {recoded, b};
}

struct DecompositionCertificate {
    int memory = 0;
    int anticipation = 0;
    int window = 0;
    std::size_t windows_checked = 0;
    std::vector<std::string> checks;
};

/// Certifies phi = phi2 o phi1 with both stages onto: table equality at the common window, then
/// language equalities image(phi1) = dom(phi2) and image(phi2) = image(phi).
inline DecompositionCertificate verify_decomposition(const BlockMap& phi, const BlockMap& phi1, const BlockMap& phi2,
                                                     int min_window = 0) {
    DecompositionCertificate cert;
    if (!language_equal(phi.domain, phi1.domain)) throw Mismatch("", "phi1 and phi have different domains");
    BlockMap comp;
    try {
        comp = compose(phi2, phi1);
    } catch (const ImageNotInDomain& e) {
        throw Mismatch("", std::string("composition undefined: ") + e.what());
    }
    int M = std::max(comp.memory, phi.memory);
    int A = std::max(comp.anticipation, phi.anticipation);
    if (M + A + 1 < min_window) A = min_window - M - 1;
    BlockMap l = widen(comp, M, A), r = widen(phi, M, A);
    for (const auto& [w, o] : r.table) {
        auto it = l.table.find(w);
        if (it == l.table.end() || it->second != o)
            throw Mismatch(join_word(w), "phi2 o phi1 differs from phi on window [" + join_word(w) + "]");
    }
    cert.memory = M;
    cert.anticipation = A;
    cert.window = M + A + 1;
    cert.windows_checked = r.table.size();
    cert.checks.push_back("table equality on all " + std::to_string(r.table.size()) + " windows of length " +
                          std::to_string(cert.window));
    Word wit;
    ShiftSpace im1 = image(phi1);
    if (!language_contained(im1, phi2.domain, &wit))
        throw Mismatch(join_word(wit), "image(phi1) not contained in dom(phi2)");
    if (!language_contained(phi2.domain, im1, &wit))
        throw Mismatch(join_word(wit), "phi1 is not onto dom(phi2)");
    cert.checks.push_back("image(phi1) = dom(phi2)");
    ShiftSpace im = image(phi), im2 = image(phi2);
    if (!language_contained(im, im2, &wit) || !language_contained(im2, im, &wit))
        throw Mismatch(join_word(wit), "image(phi2) differs from image(phi)");
    cert.checks.push_back("image(phi2) = image(phi)");
    return cert;
}

}  // namespace symdyn

#endif
