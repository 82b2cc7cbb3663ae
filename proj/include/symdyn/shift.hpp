#ifndef SYMDYN_SHIFT_HPP
#define SYMDYN_SHIFT_HPP

#include <optional>
#include <set>
#include <unordered_set>

#include "symdyn/graph.hpp"

namespace symdyn {

using Word = std::vector<std::string>;

/// Joins block symbols: plain concatenation when every symbol is one character, else dotted.
inline std::string block_name(const std::vector<std::string>& parts) {
    bool single = std::all_of(parts.begin(), parts.end(), [](const std::string& s) { return s.size() == 1; });
    std::string r;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i && !single) r += ".";
        r += parts[i];
    }
    return r;
}

inline void check_alphabet(const std::vector<std::string>& alphabet) {
    if (alphabet.empty()) throw PreconditionError("alphabet must be nonempty");
    std::set<std::string> seen(alphabet.begin(), alphabet.end());
    if (seen.size() != alphabet.size()) throw PreconditionError("alphabet has duplicate symbols");
}

/// A shift space given by one of three finite descriptions.
class ShiftSpace {
public:
    enum class Kind { edge_shift, sft, sofic };

    /// Edge shift of a nonnegative matrix. Edge names default to "0","1",... in (row, column, copy) order.
    static ShiftSpace edge_shift(Matrix m, std::vector<std::string> names = {}) {
        const std::size_t n = m.size();
        long long total = 0;
        for (const auto& row : m) {
            if (row.size() != n) throw PreconditionError("matrix must be square");
            for (long long v : row) {
                if (v < 0) throw PreconditionError("matrix entries must be nonnegative");
                total += v;
            }
        }
        if (n == 0) throw PreconditionError("matrix must be nonempty");
        if (names.empty())
            for (long long i = 0; i < total; ++i) names.push_back(std::to_string(i));
        if (static_cast<long long>(names.size()) != total)
            throw PreconditionError("edge alphabet size must equal the number of edges");
        if (total > 0) check_alphabet(names);
        ShiftSpace s;
        s.kind_ = Kind::edge_shift;
        s.matrix_ = std::move(m);
        s.alphabet_ = std::move(names);
        return s;
    }

    static ShiftSpace sft(std::vector<std::string> alphabet, const std::vector<Word>& forbidden) {
        check_alphabet(alphabet);
        ShiftSpace s;
        s.kind_ = Kind::sft;
        s.alphabet_ = std::move(alphabet);
        std::set<std::vector<int>> uniq;
        for (const auto& w : forbidden) {
            if (w.empty()) throw PreconditionError("forbidden words must be nonempty");
            uniq.insert(s.encode(w));
        }
        s.forbidden_.assign(uniq.begin(), uniq.end());
        return s;
    }

    static ShiftSpace sft_indexed(std::vector<std::string> alphabet, std::vector<std::vector<int>> forbidden) {
        ShiftSpace s;
        s.kind_ = Kind::sft;
        s.alphabet_ = std::move(alphabet);
        std::sort(forbidden.begin(), forbidden.end());
        forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
        s.forbidden_ = std::move(forbidden);
        return s;
    }

    static ShiftSpace sofic(Graph g) {
        check_alphabet(g.alphabet);
        for (const auto& e : g.edges)
            if (e.from < 0 || e.to < 0 || e.from >= g.num_states() || e.to >= g.num_states() || e.label < 0 ||
                e.label >= static_cast<int>(g.alphabet.size()))
                throw PreconditionError("edge refers to an unknown state or label");
        std::sort(g.edges.begin(), g.edges.end());
        ShiftSpace s;
        s.kind_ = Kind::sofic;
        s.alphabet_ = g.alphabet;
        s.graph_ = std::move(g);
        return s;
    }

    Kind kind() const noexcept { return kind_; }
    bool is_finite_type() const noexcept { return kind_ != Kind::sofic; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    const std::vector<std::vector<int>>& forbidden() const noexcept { return forbidden_; }
    const Graph& graph() const noexcept { return graph_; }

    /// Step of an SFT description: max forbidden length - 1 (0 when nothing is forbidden).
    int step() const {
        if (kind_ == Kind::edge_shift) return 1;
        if (kind_ == Kind::sofic) return -1;
        int k = 0;
        for (const auto& w : forbidden_) k = std::max(k, static_cast<int>(w.size()) - 1);
        return k;
    }

    int symbol_index(const std::string& s) const {
        auto it = std::find(alphabet_.begin(), alphabet_.end(), s);
        if (it == alphabet_.end()) throw WordNotInLanguage("symbol '" + s + "' not in alphabet");
        return static_cast<int>(it - alphabet_.begin());
    }

    std::vector<int> encode(const Word& w) const {
        std::vector<int> r;
        for (const auto& s : w) r.push_back(symbol_index(s));
        return r;
    }

    Word decode(const std::vector<int>& w) const {
        Word r;
        for (int i : w) r.push_back(alphabet_[i]);
        return r;
    }

    /// Labeled graph presenting the shift. For edge shifts and SFTs it is one-to-one on points.
    Graph presentation() const {
        if (kind_ == Kind::sofic) return graph_;
        if (kind_ == Kind::edge_shift) {
            Graph g;
            g.alphabet = alphabet_;
            const std::size_t n = matrix_.size();
            for (std::size_t i = 0; i < n; ++i) g.states.push_back(std::to_string(i));
            int id = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (long long t = 0; t < matrix_[i][j]; ++t)
                        g.edges.push_back({static_cast<int>(i), static_cast<int>(j), id++});
            std::sort(g.edges.begin(), g.edges.end());
            return g;
        }
        return sft_presentation();
    }

private:
    /// States are the allowed words of length `step` (one state if step is 0); edge u -> v labeled v's last symbol.
    Graph sft_presentation() const {
        const int k = step();
        std::set<std::vector<int>> forb(forbidden_.begin(), forbidden_.end());
        const int A = static_cast<int>(alphabet_.size());
        auto clean_suffixes = [&](const std::vector<int>& w) {
            for (std::size_t len = 1; len <= w.size(); ++len) {
                std::vector<int> suf(w.end() - static_cast<long>(len), w.end());
                if (forb.count(suf)) return false;
            }
            return true;
        };
        Graph g;
        g.alphabet = alphabet_;
        if (k == 0) {
            g.states.push_back("*");
            for (int a = 0; a < A; ++a)
                if (!forb.count({a})) g.edges.push_back({0, 0, a});
            return g;
        }
        std::vector<std::vector<int>> words{{}};
        for (int len = 0; len < k; ++len) {
            std::vector<std::vector<int>> next;
            for (const auto& w : words)
                for (int a = 0; a < A; ++a) {
                    auto x = w;
                    x.push_back(a);
                    if (clean_suffixes(x)) next.push_back(std::move(x));
                }
            words.swap(next);
        }
        std::map<std::vector<int>, int> index;
        for (std::size_t i = 0; i < words.size(); ++i) {
            index[words[i]] = static_cast<int>(i);
            std::vector<std::string> parts;
            for (int a : words[i]) parts.push_back(alphabet_[a]);
            g.states.push_back(block_name(parts));
        }
        for (std::size_t i = 0; i < words.size(); ++i)
            for (int a = 0; a < A; ++a) {
                auto x = words[i];
                x.push_back(a);
                if (!clean_suffixes(x)) continue;
                std::vector<int> to(x.begin() + 1, x.end());
                g.edges.push_back({static_cast<int>(i), index.at(to), a});
            }
        std::sort(g.edges.begin(), g.edges.end());
        return g;
    }

    Kind kind_ = Kind::sofic;
    std::vector<std::string> alphabet_;
    Matrix matrix_;
    std::vector<std::vector<int>> forbidden_;
    Graph graph_;
};

/// Essential presentation of `x`, or EmptyShift.
inline Graph essential_presentation(const ShiftSpace& x) {
    Graph g = trim_graph(x.presentation());
    if (g.edges.empty()) throw EmptyShift("no bi-infinite path survives");
    return g;
}

/// Equivalent description with every state on a bi-infinite path and the alphabet cut to used symbols.
inline ShiftSpace trim(const ShiftSpace& x) {
    Graph g = essential_presentation(x);
    switch (x.kind()) {
        case ShiftSpace::Kind::edge_shift: {
            std::vector<int> keep;
            for (const auto& s : g.states) keep.push_back(std::stoi(s));
            Matrix m = zero_matrix(keep.size());
            std::vector<std::string> names;
            // edge names in (row, column, copy) order of the original matrix
            std::vector<std::vector<std::vector<std::string>>> names_of(
                x.matrix().size(), std::vector<std::vector<std::string>>(x.matrix().size()));
            int id = 0;
            for (std::size_t i = 0; i < x.matrix().size(); ++i)
                for (std::size_t j = 0; j < x.matrix().size(); ++j)
                    for (long long t = 0; t < x.matrix()[i][j]; ++t) names_of[i][j].push_back(x.alphabet()[id++]);
            for (std::size_t a = 0; a < keep.size(); ++a)
                for (std::size_t b = 0; b < keep.size(); ++b) {
                    m[a][b] = x.matrix()[keep[a]][keep[b]];
                    for (const auto& nm : names_of[keep[a]][keep[b]]) names.push_back(nm);
                }
            return ShiftSpace::edge_shift(std::move(m), std::move(names));
        }
        case ShiftSpace::Kind::sft: {
            std::vector<char> used(x.alphabet().size(), 0);
            for (const auto& e : g.edges) used[e.label] = 1;
            std::vector<std::string> alpha;
            for (std::size_t i = 0; i < used.size(); ++i)
                if (used[i]) alpha.push_back(x.alphabet()[i]);
            std::vector<Word> forb;
            for (const auto& w : x.forbidden()) {
                bool keep = std::all_of(w.begin(), w.end(), [&](int a) { return used[a]; });
                if (keep) forb.push_back(x.decode(w));
            }
            return ShiftSpace::sft(std::move(alpha), forb);
        }
        case ShiftSpace::Kind::sofic:
        default:
            return ShiftSpace::sofic(compact_alphabet(g));
    }
}

inline std::vector<Word> words(const ShiftSpace& x, int n) {
    if (n < 0) throw PreconditionError("n must be nonnegative");
    Graph g = essential_presentation(x);
    std::vector<Word> out;
    for (const auto& w : words_of_length(g, n)) {
        Word r;
        for (int a : w) r.push_back(g.alphabet[a]);
        out.push_back(std::move(r));
    }
    return out;
}

inline bool contains_word(const ShiftSpace& x, const Word& w) {
    Graph g = essential_presentation(x);
    std::vector<int> idx;
    for (const auto& s : w) {
        auto it = std::find(g.alphabet.begin(), g.alphabet.end(), s);
        if (it == g.alphabet.end()) return false;
        idx.push_back(static_cast<int>(it - g.alphabet.begin()));
    }
    return !read_word(g, idx).empty();
}

/// Right-resolving, follower-separated presentation (as a sofic description) of any shift.
inline ShiftSpace determinize(const ShiftSpace& x) {
    return ShiftSpace::sofic(compact_alphabet(minimize(essential_presentation(x))));
}

inline bool language_equal(const ShiftSpace& x, const ShiftSpace& y) {
    return language_equal(essential_presentation(x), essential_presentation(y));
}

inline bool language_contained(const ShiftSpace& x, const ShiftSpace& y, Word* witness = nullptr) {
    return language_contained(essential_presentation(x), essential_presentation(y), witness);
}

/// Paths of length `len` in g as edge-index sequences, plus per-path label words.
inline std::vector<std::vector<int>> paths_of_length(const Graph& g, int len) {
    std::vector<std::vector<int>> by_state(g.states.size());
    std::vector<std::vector<int>> paths;
    auto out_ids = std::vector<std::vector<int>>(g.states.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) out_ids[g.edges[i].from].push_back(static_cast<int>(i));
    if (len == 0) {
        for (int q = 0; q < g.num_states(); ++q) paths.push_back({});
        return paths;
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) paths.push_back({static_cast<int>(i)});
    for (int l = 1; l < len; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& p : paths)
            for (int e : out_ids[g.edges[p.back()].to]) {
                auto q = p;
                q.push_back(e);
                next.push_back(std::move(q));
            }
        paths.swap(next);
    }
    return paths;
}

/// Higher block presentation built on paths: states are (n-1)-paths, edges n-paths labeled by their n-block.
inline Graph higher_block_graph(const Graph& g, int n) {
    Graph r;
    std::map<std::vector<int>, int> block_index;
    std::vector<std::vector<int>> blocks;
    if (n == 1) {
        r = g;
        return r;
    }
    auto states = paths_of_length(g, n - 1);
    std::map<std::vector<int>, int> state_index;
    for (std::size_t i = 0; i < states.size(); ++i) {
        state_index[states[i]] = static_cast<int>(i);
        r.states.push_back(std::to_string(i));
    }
    std::vector<std::vector<int>> out_ids(g.states.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) out_ids[g.edges[i].from].push_back(static_cast<int>(i));
    std::vector<std::tuple<int, int, std::vector<int>>> raw;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& p = states[i];
        int end = g.edges[p.back()].to;
        for (int e : out_ids[end]) {
            std::vector<int> full = p;
            full.push_back(e);
            std::vector<int> label;
            for (int id : full) label.push_back(g.edges[id].label);
            std::vector<int> to(full.begin() + 1, full.end());
            raw.emplace_back(static_cast<int>(i), state_index.at(to), label);
            block_index.emplace(label, 0);
        }
    }
    // label blocks sorted lexicographically in the original alphabet order
    int id = 0;
    for (auto& [blk, v] : block_index) {
        v = id++;
        std::vector<std::string> parts;
        for (int a : blk) parts.push_back(g.alphabet[a]);
        r.alphabet.push_back(block_name(parts));
    }
    for (auto& [from, to, lab] : raw) r.edges.push_back({from, to, block_index.at(lab)});
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

/// The n-th higher block shift. SFT inputs give a 1-step SFT on the n-blocks; sofic inputs stay sofic.
inline ShiftSpace higher_block(const ShiftSpace& x, int n) {
    if (n < 1) throw PreconditionError("higher_block needs n >= 1");
    Graph g = essential_presentation(x);
    if (!x.is_finite_type()) {
        Graph h = higher_block_graph(determinize(g), n);
        return ShiftSpace::sofic(determinize(h));
    }
    // Blocks of length n and allowed overlaps, read off paths of the one-to-one presentation.
    auto blocks = words_of_length(g, n);
    auto pairs = words_of_length(g, n + 1);
    std::vector<std::string> alpha;
    std::map<std::vector<int>, int> idx;
    for (const auto& b : blocks) {
        idx[b] = static_cast<int>(alpha.size());
        std::vector<std::string> parts;
        for (int a : b) parts.push_back(g.alphabet[a]);
        alpha.push_back(block_name(parts));
    }
    const int B = static_cast<int>(blocks.size());
    std::vector<std::vector<char>> allowed(B, std::vector<char>(B, 0));
    for (const auto& w : pairs) {
        std::vector<int> u(w.begin(), w.end() - 1), v(w.begin() + 1, w.end());
        allowed[idx.at(u)][idx.at(v)] = 1;
    }
    std::vector<std::vector<int>> forb;
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j)
            if (!allowed[i][j]) forb.push_back({i, j});
    return ShiftSpace::sft_indexed(std::move(alpha), std::move(forb));
}

namespace detail {

/// Aho-Corasick automaton over `alphabet_size` letters for the patterns; returns goto table and
/// a flag per node that is set when some pattern ends there (including via suffix links).
struct PatternAutomaton {
    std::vector<std::vector<int>> go;
    std::vector<char> bad;
};

inline PatternAutomaton build_pattern_automaton(const std::vector<std::vector<int>>& pats, int alphabet_size) {
    PatternAutomaton pa;
    pa.go.push_back(std::vector<int>(alphabet_size, -1));
    pa.bad.push_back(0);
    for (const auto& p : pats) {
        int node = 0;
        for (int a : p) {
            if (pa.go[node][a] < 0) {
                pa.go[node][a] = static_cast<int>(pa.go.size());
                pa.go.push_back(std::vector<int>(alphabet_size, -1));
                pa.bad.push_back(0);
            }
            node = pa.go[node][a];
        }
        pa.bad[node] = 1;
    }
    std::vector<int> link(pa.go.size(), 0);
    std::deque<int> queue;
    for (int a = 0; a < alphabet_size; ++a) {
        int t = pa.go[0][a];
        if (t < 0) pa.go[0][a] = 0;
        else {
            link[t] = 0;
            queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        pa.bad[v] = pa.bad[v] || pa.bad[link[v]];
        for (int a = 0; a < alphabet_size; ++a) {
            int t = pa.go[v][a];
            if (t < 0) pa.go[v][a] = pa.go[link[v]][a];
            else {
                link[t] = pa.go[link[v]][a];
                queue.push_back(t);
            }
        }
    }
    return pa;
}

}  // namespace detail

/// Product of a presentation with the pattern-avoiding automaton: paths whose labels avoid every pattern.
inline Graph avoid_patterns(const Graph& g, const std::vector<std::vector<int>>& pats) {
    auto pa = detail::build_pattern_automaton(pats, static_cast<int>(g.alphabet.size()));
    auto out = g.out_edges();
    std::map<std::pair<int, int>, int> index;
    std::vector<std::pair<int, int>> states;
    Graph r;
    r.alphabet = g.alphabet;
    for (int q = 0; q < g.num_states(); ++q) {
        index[{q, 0}] = static_cast<int>(states.size());
        states.push_back({q, 0});
    }
    for (std::size_t h = 0; h < states.size(); ++h) {
        auto [q, node] = states[h];
        for (const auto& e : out[q]) {
            int nn = pa.go[node][e.label];
            if (pa.bad[nn]) continue;
            auto key = std::make_pair(e.to, nn);
            auto it = index.find(key);
            if (it == index.end()) {
                it = index.emplace(key, static_cast<int>(states.size())).first;
                states.push_back(key);
            }
            r.edges.push_back({static_cast<int>(h), it->second, e.label});
        }
    }
    for (auto& [q, node] : states) r.states.push_back(g.states[q] + "/" + std::to_string(node));
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

/// Largest subshift of x avoiding the extra words.
inline ShiftSpace forbid(const ShiftSpace& x, const std::vector<Word>& extra) {
    Graph g = essential_presentation(x);
    std::vector<std::vector<int>> pats;
    for (const auto& w : extra) {
        std::vector<int> idx;
        bool known = true;
        for (const auto& s : w) {
            auto it = std::find(x.alphabet().begin(), x.alphabet().end(), s);
            if (it == x.alphabet().end()) throw PreconditionError("forbidden word uses a symbol outside the alphabet");
            auto jt = std::find(g.alphabet.begin(), g.alphabet.end(), s);
            if (jt == g.alphabet.end()) known = false;
            else idx.push_back(static_cast<int>(jt - g.alphabet.begin()));
        }
        if (w.empty()) throw EmptyShift("forbidding the empty word");
        if (known) pats.push_back(idx);
    }
    if (x.kind() == ShiftSpace::Kind::sofic) {
        Graph r = trim_graph(avoid_patterns(g, pats));
        if (r.edges.empty()) throw EmptyShift("no bi-infinite path survives");
        return ShiftSpace::sofic(compact_alphabet(determinize(r)));
    }
    std::vector<std::vector<int>> forb;
    std::vector<std::string> alpha = g.alphabet;
    if (x.kind() == ShiftSpace::Kind::sft) {
        for (const auto& w : x.forbidden()) {
            std::vector<int> idx;
            bool ok = true;
            for (int a : w) {
                auto jt = std::find(alpha.begin(), alpha.end(), x.alphabet()[a]);
                if (jt == alpha.end()) ok = false;
                else idx.push_back(static_cast<int>(jt - alpha.begin()));
            }
            if (ok) forb.push_back(idx);
        }
    } else {
        // edge shift: consecutive edges must meet at a vertex
        std::vector<int> src(alpha.size()), dst(alpha.size());
        for (const auto& e : g.edges) {
            src[e.label] = e.from;
            dst[e.label] = e.to;
        }
        for (std::size_t a = 0; a < alpha.size(); ++a)
            for (std::size_t b = 0; b < alpha.size(); ++b)
                if (dst[a] != src[b]) forb.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
    for (auto& p : pats) forb.push_back(p);
    return trim(ShiftSpace::sft_indexed(alpha, forb));
}

/// Precomputed follower-class data for synchronization questions on a shift.
class SyncOracle {
public:
    explicit SyncOracle(const ShiftSpace& x) {
        rr_ = determinize(essential_presentation(x));
        sa_ = subset_automaton(rr_);
        cls_ = moore_classes(sa_.delta);
    }

    const Graph& presentation() const noexcept { return rr_; }
    std::size_t subset_count() const noexcept { return sa_.sets.size(); }

    /// Whether w (as label names) is synchronizing: every left extension uw in B(X) has the follower set of w.
    bool is_synchronizing(const Word& w) const {
        std::vector<int> idx;
        for (const auto& s : w) {
            auto it = std::find(rr_.alphabet.begin(), rr_.alphabet.end(), s);
            if (it == rr_.alphabet.end()) throw WordNotInLanguage("word not in language");
            idx.push_back(static_cast<int>(it - rr_.alphabet.begin()));
        }
        int ref = run(0, idx);
        if (ref < 0) throw WordNotInLanguage("word not in language");
        for (std::size_t s = 0; s < sa_.sets.size(); ++s) {
            int t = run(static_cast<int>(s), idx);
            if (t >= 0 && cls_[t] != cls_[ref]) return false;
        }
        return true;
    }

    /// Every word of length k is synchronizing. Layered search over pairs (context subset, reference subset).
    bool is_k_step(int k, std::size_t pair_budget = 20000000) const {
        std::set<std::pair<int, int>> layer;
        for (std::size_t s = 0; s < sa_.sets.size(); ++s) layer.insert({static_cast<int>(s), 0});
        for (int step = 0; step < k; ++step) {
            std::set<std::pair<int, int>> next;
            for (auto [s, r] : layer)
                for (std::size_t a = 0; a < rr_.alphabet.size(); ++a) {
                    int tr = sa_.delta[r][a];
                    int ts = sa_.delta[s][a];
                    if (tr < 0 || ts < 0) continue;
                    next.insert({ts, tr});
                }
            if (next.size() > pair_budget) throw IterationCap("k-step check exceeded pair budget");
            layer.swap(next);
        }
        for (auto [s, r] : layer)
            if (cls_[s] != cls_[r]) return false;
        return true;
    }

    /// Smallest k <= max_k with is_k_step(k), if any.
    std::optional<int> min_step(int max_k) const {
        for (int k = 0; k <= max_k; ++k)
            if (is_k_step(k)) return k;
        return std::nullopt;
    }

private:
    int run(int s, const std::vector<int>& w) const {
        for (int a : w) {
            s = sa_.delta[s][a];
            if (s < 0) return -1;
        }
        return s;
    }

    Graph rr_;
    SubsetAutomaton sa_;
    std::vector<int> cls_;
};

inline bool is_synchronizing(const ShiftSpace& x, const Word& w) { return SyncOracle(x).is_synchronizing(w); }

inline bool is_k_step(const ShiftSpace& x, int k) {
    if (k < 0) throw PreconditionError("k must be nonnegative");
    return SyncOracle(x).is_k_step(k);
}

/// Some constant sequence a^infinity lies in the shift.
inline bool has_fixed_point(const ShiftSpace& x) {
    Graph g = essential_presentation(x);
    for (std::size_t a = 0; a < g.alphabet.size(); ++a) {
        std::vector<std::vector<int>> adj(g.states.size());
        for (const auto& e : g.edges)
            if (e.label == static_cast<int>(a)) adj[e.from].push_back(e.to);
        for (const auto& comp : strongly_connected_components(adj))
            if (component_has_cycle(adj, comp)) return true;
    }
    return false;
}

}  // namespace symdyn

#endif
