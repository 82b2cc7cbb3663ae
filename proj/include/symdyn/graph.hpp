#ifndef SYMDYN_GRAPH_HPP
#define SYMDYN_GRAPH_HPP

// Labeled directed graphs and the automaton plumbing used by shift presentations.

#include <algorithm>
#include <deque>
#include <functional>
#include <tuple>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "symdyn/errors.hpp"
#include "symdyn/matrix.hpp"

namespace symdyn {

struct Edge {
    int from = 0, to = 0, label = 0;
    friend bool operator<(const Edge& a, const Edge& b) {
        return std::tie(a.from, a.label, a.to) < std::tie(b.from, b.label, b.to);
    }
    friend bool operator==(const Edge& a, const Edge& b) {
        return a.from == b.from && a.to == b.to && a.label == b.label;
    }
};

/// Labeled graph; labels index into `alphabet`.
struct Graph {
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    std::vector<Edge> edges;

    int num_states() const { return static_cast<int>(states.size()); }

    std::vector<std::vector<Edge>> out_edges() const {
        std::vector<std::vector<Edge>> out(states.size());
        for (const auto& e : edges) out[e.from].push_back(e);
        for (auto& v : out) std::sort(v.begin(), v.end());
        return out;
    }

    Matrix adjacency() const {
        Matrix A = zero_matrix(states.size());
        for (const auto& e : edges) ++A[e.from][e.to];
        return A;
    }

    std::vector<std::vector<int>> successor_lists() const {
        std::vector<std::vector<int>> adj(states.size());
        for (const auto& e : edges) adj[e.from].push_back(e.to);
        for (auto& v : adj) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        return adj;
    }

    bool right_resolving() const {
        auto out = out_edges();
        for (const auto& v : out)
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i].label == v[i - 1].label) return false;
        return true;
    }
};

/// Keeps only the listed states (in the given order) and edges among them.
inline Graph induced(const Graph& g, const std::vector<int>& keep) {
    std::vector<int> idx(g.states.size(), -1);
    Graph r;
    r.alphabet = g.alphabet;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        idx[keep[i]] = static_cast<int>(i);
        r.states.push_back(g.states[keep[i]]);
    }
    for (const auto& e : g.edges)
        if (idx[e.from] >= 0 && idx[e.to] >= 0) r.edges.push_back({idx[e.from], idx[e.to], e.label});
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

/// Essential part: states lying on bi-infinite paths. May be empty.
inline Graph trim_graph(const Graph& g) {
    const int n = g.num_states();
    std::vector<int> indeg(n, 0), outdeg(n, 0);
    std::vector<char> alive(n, 1);
    std::vector<std::vector<int>> in(n), out(n);
    for (const auto& e : g.edges) {
        ++outdeg[e.from];
        ++indeg[e.to];
        out[e.from].push_back(e.to);
        in[e.to].push_back(e.from);
    }
    std::vector<int> queue;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0 || outdeg[i] == 0) {
            alive[i] = 0;
            queue.push_back(i);
        }
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int v = queue[h];
        for (int w : out[v])
            if (alive[w] && --indeg[w] == 0) {
                alive[w] = 0;
                queue.push_back(w);
            }
        for (int w : in[v])
            if (alive[w] && --outdeg[w] == 0) {
                alive[w] = 0;
                queue.push_back(w);
            }
    }
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (alive[i]) keep.push_back(i);
    return induced(g, keep);
}

/// Drops unused labels, keeping alphabet order.
inline Graph compact_alphabet(const Graph& g) {
    std::vector<char> used(g.alphabet.size(), 0);
    for (const auto& e : g.edges) used[e.label] = 1;
    std::vector<int> idx(g.alphabet.size(), -1);
    Graph r;
    r.states = g.states;
    for (std::size_t i = 0; i < g.alphabet.size(); ++i)
        if (used[i]) {
            idx[i] = static_cast<int>(r.alphabet.size());
            r.alphabet.push_back(g.alphabet[i]);
        }
    for (const auto& e : g.edges) r.edges.push_back({e.from, e.to, idx[e.label]});
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

/// Deterministic transition table of a right-resolving graph: delta[q][label] = target or -1.
inline std::vector<std::vector<int>> transition_table(const Graph& g) {
    std::vector<std::vector<int>> d(g.states.size(), std::vector<int>(g.alphabet.size(), -1));
    for (const auto& e : g.edges) d[e.from][e.label] = e.to;
    return d;
}

namespace detail {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = v.size();
        for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

inline std::string set_name(const Graph& g, const std::vector<int>& s) {
    std::string name = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) name += ",";
        name += g.states[s[i]];
    }
    return name + "}";
}

}  // namespace detail

/// Subset automaton reachable from the full state set (BFS in alphabet order).
/// State 0 is the full set; the empty set is never materialized. Transitions are -1 when empty.
struct SubsetAutomaton {
    std::vector<std::vector<int>> sets;
    std::vector<std::vector<int>> delta;
};

inline SubsetAutomaton subset_automaton(const Graph& g, std::size_t state_budget = 2000000) {
    SubsetAutomaton sa;
    auto out = g.out_edges();
    std::unordered_map<std::vector<int>, int, detail::VecHash> index;
    std::vector<int> full(g.states.size());
    std::iota(full.begin(), full.end(), 0);
    index[full] = 0;
    sa.sets.push_back(full);
    const std::size_t A = g.alphabet.size();
    std::vector<std::vector<int>> buckets(A);
    for (std::size_t h = 0; h < sa.sets.size(); ++h) {
        for (auto& b : buckets) b.clear();
        for (int q : sa.sets[h])
            for (const auto& e : out[q]) buckets[e.label].push_back(e.to);
        std::vector<int> row(A, -1);
        for (std::size_t a = 0; a < A; ++a) {
            auto& b = buckets[a];
            if (b.empty()) continue;
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
            auto it = index.find(b);
            if (it == index.end()) {
                if (sa.sets.size() >= state_budget) throw IterationCap("subset construction exceeded state budget");
                it = index.emplace(b, static_cast<int>(sa.sets.size())).first;
                sa.sets.push_back(b);
            }
            row[a] = it->second;
        }
        sa.delta.push_back(std::move(row));
    }
    return sa;
}

/// Right-resolving presentation of the same shift: subset construction from the full set, then trim.
/// Already right-resolving essential inputs come back unchanged.
inline Graph determinize(const Graph& g0) {
    Graph g = trim_graph(g0);
    if (g.right_resolving()) return g;
    SubsetAutomaton sa = subset_automaton(g);
    Graph r;
    r.alphabet = g.alphabet;
    for (const auto& s : sa.sets) r.states.push_back(detail::set_name(g, s));
    for (std::size_t i = 0; i < sa.delta.size(); ++i)
        for (std::size_t a = 0; a < g.alphabet.size(); ++a)
            if (sa.delta[i][a] >= 0) r.edges.push_back({static_cast<int>(i), sa.delta[i][a], static_cast<int>(a)});
    std::sort(r.edges.begin(), r.edges.end());
    return trim_graph(r);
}

/// Moore partition refinement of a DFA (missing transitions go to an implicit reject sink).
/// Returns class ids, numbered by first occurrence.
inline std::vector<int> moore_classes(const std::vector<std::vector<int>>& delta) {
    const std::size_t n = delta.size();
    std::vector<int> cls(n, 0);
    std::size_t count = n ? 1 : 0;
    while (true) {
        std::map<std::vector<int>, int> sig_index;
        std::vector<int> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            std::vector<int> sig;
            sig.reserve(delta[q].size() + 1);
            sig.push_back(cls[q]);
            for (int t : delta[q]) sig.push_back(t < 0 ? -1 : cls[t]);
            auto it = sig_index.find(sig);
            if (it == sig_index.end()) it = sig_index.emplace(sig, static_cast<int>(sig_index.size())).first;
            next[q] = it->second;
        }
        std::size_t nc = sig_index.size();
        cls = std::move(next);
        if (nc == count) break;
        count = nc;
    }
    return cls;
}

/// Merges follower-equivalent states of a right-resolving essential graph.
inline Graph minimize(const Graph& g0) {
    Graph g = determinize(g0);
    auto cls = moore_classes(transition_table(g));
    int nc = 0;
    for (int c : cls) nc = std::max(nc, c + 1);
    if (nc == g.num_states()) return g;
    Graph r;
    r.alphabet = g.alphabet;
    r.states.assign(nc, "");
    std::vector<char> named(nc, 0);
    for (int q = 0; q < g.num_states(); ++q)
        if (!named[cls[q]]) {
            r.states[cls[q]] = g.states[q];
            named[cls[q]] = 1;
        }
    for (const auto& e : g.edges) r.edges.push_back({cls[e.from], cls[e.to], e.label});
    std::sort(r.edges.begin(), r.edges.end());
    r.edges.erase(std::unique(r.edges.begin(), r.edges.end()), r.edges.end());
    return r;
}

/// Maps labels of `g` into `alphabet` by name; labels absent from it map to -1.
inline std::vector<int> label_map(const Graph& g, const std::vector<std::string>& alphabet) {
    std::unordered_map<std::string, int> pos;
    for (std::size_t i = 0; i < alphabet.size(); ++i) pos[alphabet[i]] = static_cast<int>(i);
    std::vector<int> m(g.alphabet.size(), -1);
    for (std::size_t i = 0; i < g.alphabet.size(); ++i) {
        auto it = pos.find(g.alphabet[i]);
        if (it != pos.end()) m[i] = it->second;
    }
    return m;
}

/// Language containment B(X) subset of B(Y) for essential presentations (labels matched by name).
/// On failure returns a shortest witness word (as label names of X).
inline bool language_contained(const Graph& x, const Graph& y, std::vector<std::string>* witness = nullptr) {
    SubsetAutomaton dx = subset_automaton(x), dy = subset_automaton(y);
    auto lm = label_map(x, y.alphabet);
    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int>> parent;
    std::deque<std::pair<int, int>> queue{{0, 0}};
    parent[{0, 0}] = {{-1, -1}, -1};
    while (!queue.empty()) {
        auto [sx, sy] = queue.front();
        queue.pop_front();
        for (std::size_t a = 0; a < x.alphabet.size(); ++a) {
            int tx = dx.delta[sx][a];
            if (tx < 0) continue;
            int ty = (lm[a] < 0 || sy < 0) ? -1 : dy.delta[sy][lm[a]];
            if (ty < 0) {
                if (witness) {
                    witness->clear();
                    witness->push_back(x.alphabet[a]);
                    std::pair<int, int> cur{sx, sy};
                    while (parent[cur].second >= 0) {
                        witness->push_back(x.alphabet[parent[cur].second]);
                        cur = parent[cur].first;
                    }
                    std::reverse(witness->begin(), witness->end());
                }
                return false;
            }
            std::pair<int, int> nxt{tx, ty};
            if (!parent.count(nxt)) {
                parent[nxt] = {{sx, sy}, static_cast<int>(a)};
                queue.push_back(nxt);
            }
        }
    }
    return true;
}

inline bool language_equal(const Graph& x, const Graph& y) {
    return language_contained(x, y) && language_contained(y, x);
}

/// All label words of length n (indices), lexicographic in label order.
inline std::vector<std::vector<int>> words_of_length(const Graph& g, int n) {
    std::vector<std::vector<int>> out;
    if (g.states.empty()) return out;
    SubsetAutomaton sa = subset_automaton(g);
    std::vector<int> word;
    std::function<void(int)> rec = [&](int s) {
        if (static_cast<int>(word.size()) == n) {
            out.push_back(word);
            return;
        }
        for (std::size_t a = 0; a < g.alphabet.size(); ++a) {
            int t = sa.delta[s][a];
            if (t < 0) continue;
            word.push_back(static_cast<int>(a));
            rec(t);
            word.pop_back();
        }
    };
    rec(0);
    return out;
}

/// Number of words of length n, exact.
inline BigInt count_words(const Graph& g, int n) {
    if (g.states.empty()) return 0;
    SubsetAutomaton sa = subset_automaton(g);
    std::vector<BigInt> cur(sa.sets.size(), 0), next;
    cur[0] = 1;
    for (int k = 0; k < n; ++k) {
        next.assign(sa.sets.size(), 0);
        for (std::size_t s = 0; s < cur.size(); ++s) {
            if (cur[s] == 0) continue;
            for (int t : sa.delta[s])
                if (t >= 0) next[t] += cur[s];
        }
        cur.swap(next);
    }
    BigInt total = 0;
    for (const auto& v : cur) total += v;
    return total;
}

/// Subset reached from the full set by reading `w`; empty if w is not a word.
inline std::vector<int> read_word(const Graph& g, const std::vector<int>& w) {
    std::vector<int> cur(g.states.size());
    std::iota(cur.begin(), cur.end(), 0);
    auto out = g.out_edges();
    for (int a : w) {
        std::vector<int> nxt;
        for (int q : cur)
            for (const auto& e : out[q])
                if (e.label == a) nxt.push_back(e.to);
        std::sort(nxt.begin(), nxt.end());
        nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
        cur.swap(nxt);
        if (cur.empty()) break;
    }
    return cur;
}

}  // namespace symdyn

#endif
