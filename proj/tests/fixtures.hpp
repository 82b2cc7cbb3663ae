#ifndef SYMDYN_TEST_FIXTURES_HPP
#define SYMDYN_TEST_FIXTURES_HPP

#include <random>

#include "symdyn/dynamics.hpp"

namespace fx {

using namespace symdyn;

inline ShiftSpace full_shift(int n) {
    std::vector<std::string> a;
    for (int i = 0; i < n; ++i) a.push_back(std::to_string(i));
    return ShiftSpace::sft(a, {});
}

inline ShiftSpace golden_mean() { return ShiftSpace::sft({"0", "1"}, {{"1", "1"}}); }

inline ShiftSpace even_shift() {
    Graph g;
    g.alphabet = {"0", "1"};
    g.states = {"a", "b"};
    g.edges = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
    return ShiftSpace::sofic(g);
}

/// Random labeled graph with up to `max_states` states over `letters` symbols.
inline Graph random_graph(std::mt19937& rng, int max_states, int letters, int max_edges) {
    Graph g;
    int n = 1 + static_cast<int>(rng() % max_states);
    for (int i = 0; i < letters; ++i) g.alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
    for (int i = 0; i < n; ++i) g.states.push_back("s" + std::to_string(i));
    int m = 1 + static_cast<int>(rng() % max_edges);
    for (int i = 0; i < m; ++i)
        g.edges.push_back({static_cast<int>(rng() % n), static_cast<int>(rng() % n), static_cast<int>(rng() % letters)});
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

/// Brute-force language oracle: label words of length n read along paths of g (no automaton).
inline std::set<std::vector<std::string>> brute_words(const Graph& g, int n) {
    std::set<std::vector<std::string>> out;
    Graph t = trim_graph(g);
    auto outs = t.out_edges();
    std::vector<std::string> w;
    std::function<void(int)> rec = [&](int s) {
        if (static_cast<int>(w.size()) == n) {
            out.insert(w);
            return;
        }
        for (const auto& e : outs[s]) {
            w.push_back(t.alphabet[e.label]);
            rec(e.to);
            w.pop_back();
        }
    };
    for (int s = 0; s < t.num_states(); ++s) rec(s);
    return out;
}

inline std::set<std::vector<std::string>> as_set(const std::vector<Word>& v) { return {v.begin(), v.end()}; }

}  // namespace fx

#endif
