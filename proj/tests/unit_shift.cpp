#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace symdyn;
using namespace fx;

namespace {

// w^inf is a point of the shift presented by g: some state returns to itself reading w^j, j <= |states|.
bool periodic_in(const Graph& g, const std::vector<int>& w) {
    auto out = g.out_edges();
    for (int s = 0; s < g.num_states(); ++s) {
        std::set<int> cur{s};
        for (int j = 1; j <= g.num_states() && !cur.empty(); ++j) {
            for (int a : w) {
                std::set<int> nxt;
                for (int q : cur)
                    for (const auto& e : out[q])
                        if (e.label == a) nxt.insert(e.to);
                cur.swap(nxt);
            }
            if (cur.count(s)) return true;
        }
    }
    return false;
}

BigInt brute_fixed_count(const Graph& g, int k) {
    BigInt total = 0;
    std::vector<int> w(k, 0);
    const int A = static_cast<int>(g.alphabet.size());
    while (true) {
        if (periodic_in(g, w)) total += 1;
        int i = k - 1;
        while (i >= 0 && ++w[i] == A) w[i--] = 0;
        if (i < 0) break;
    }
    return total;
}

}  // namespace

TEST(Trim, Examples) {
    auto t = trim(ShiftSpace::edge_shift({{1, 1}, {0, 0}}));
    EXPECT_EQ(t.matrix(), (Matrix{{1}}));
    EXPECT_EQ(trim(ShiftSpace::edge_shift({{2}})).matrix(), (Matrix{{2}}));
    EXPECT_THROW(trim(ShiftSpace::sft({"0", "1"}, {{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}})), EmptyShift);
}

TEST(Words, Examples) {
    EXPECT_EQ(words(full_shift(2), 2).size(), 4u);
    auto g = as_set(words(golden_mean(), 2));
    EXPECT_EQ(g, (std::set<Word>{{"0", "0"}, {"0", "1"}, {"1", "0"}}));
    auto e = words(golden_mean(), 0);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_TRUE(e[0].empty());
}

TEST(Words, PrefixSuffixClosureAndGrowth) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = random_graph(rng, 5, 3, 10);
        if (trim_graph(g).edges.empty()) continue;
        auto x = ShiftSpace::sofic(g);
        for (int n = 1; n <= 4; ++n) {
            auto bn = as_set(words(x, n));
            auto bn1 = words(x, n + 1);
            EXPECT_LE(bn1.size(), bn.size() * x.alphabet().size());
            for (const auto& w : bn1) {
                EXPECT_TRUE(bn.count(Word(w.begin(), w.end() - 1)));
                EXPECT_TRUE(bn.count(Word(w.begin() + 1, w.end())));
            }
            EXPECT_EQ(as_set(bn1), brute_words(g, n + 1));
        }
    }
}

TEST(Structure, Examples) {
    auto s = structure(ShiftSpace::edge_shift({{0, 2}, {2, 0}}));
    EXPECT_TRUE(s.irreducible);
    EXPECT_EQ(s.period, 2);
    EXPECT_FALSE(s.mixing);
    s = structure(ShiftSpace::edge_shift({{1, 1}, {1, 0}}));
    EXPECT_EQ(s.period, 1);
    EXPECT_TRUE(s.mixing);
    s = structure(ShiftSpace::edge_shift({{1}}));
    EXPECT_TRUE(s.mixing);
    EXPECT_TRUE(structure(even_shift()).mixing);
    EXPECT_FALSE(structure(ShiftSpace::edge_shift({{1, 1}, {0, 1}})).irreducible);
}

TEST(Structure, SoficPeriodUsesMinimalCover) {
    // two-cycle presentation of the single point 0^inf is still mixing
    Graph g;
    g.alphabet = {"0"};
    g.states = {"a", "b"};
    g.edges = {{0, 1, 0}, {1, 0, 0}};
    auto s = structure(ShiftSpace::sofic(g));
    EXPECT_TRUE(s.mixing);
    EXPECT_EQ(s.period, 1);
}

TEST(Structure, MixingIffIrreducibleAperiodic) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = random_graph(rng, 8, 2, 14);
        if (trim_graph(g).edges.empty()) continue;
        auto s = structure(ShiftSpace::sofic(g));
        EXPECT_EQ(s.mixing, s.irreducible && s.period == 1);
    }
}

TEST(HigherBlock, Examples) {
    auto x1 = higher_block(golden_mean(), 1);
    EXPECT_TRUE(language_equal(x1, golden_mean()));
    auto f2 = higher_block(full_shift(2), 2);
    EXPECT_EQ(f2.alphabet(), (std::vector<std::string>{"00", "01", "10", "11"}));
    EXPECT_EQ(f2.step(), 1);
    EXPECT_EQ(words(f2, 2).size(), 8u);
    auto g2 = higher_block(golden_mean(), 2);
    EXPECT_EQ(g2.alphabet(), (std::vector<std::string>{"00", "01", "10"}));
    EXPECT_TRUE(is_k_step(g2, 1));
    for (const auto& a : g2.alphabet()) EXPECT_TRUE(is_synchronizing(g2, {a}));
}

TEST(HigherBlock, PreservesWordCountsAndEntropy) {
    std::vector<ShiftSpace> xs{golden_mean(), full_shift(2), even_shift(), ShiftSpace::edge_shift({{1, 2}, {1, 0}})};
    for (const auto& x : xs)
        for (int n = 1; n <= 4; ++n) {
            auto h = higher_block(x, n);
            for (int k = 1; k <= 4; ++k) EXPECT_EQ(words(h, k).size(), words(x, k + n - 1).size());
            EXPECT_EQ(compare(entropy(h), entropy(x)), 0);
        }
}

TEST(Forbid, Examples) {
    EXPECT_TRUE(language_equal(forbid(full_shift(2), {{"1", "1"}}), golden_mean()));
    EXPECT_TRUE(language_equal(forbid(golden_mean(), {}), golden_mean()));
    EXPECT_THROW(forbid(golden_mean(), {{"0"}}), EmptyShift);
}

TEST(Forbid, MatchesFilteredLanguage) {
    std::mt19937 rng(9);
    std::vector<ShiftSpace> xs{full_shift(2), even_shift(), ShiftSpace::edge_shift({{1, 1}, {1, 1}})};
    for (const auto& x : xs)
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<Word> F;
            for (int i = 0; i < 2; ++i) {
                Word w;
                int len = 2 + rng() % 3;
                for (int j = 0; j < len; ++j) w.push_back(x.alphabet()[rng() % x.alphabet().size()]);
                F.push_back(w);
            }
            ShiftSpace y = x;
            try {
                y = forbid(x, F);
            } catch (const EmptyShift&) {
                continue;
            }
            EXPECT_LE(compare(entropy(y), entropy(x)), 0);
            // Words of y of length n = words of length n of x avoiding F whose extensions survive; check
            // containment one way and that every y word avoids F.
            for (int n = 1; n <= 5; ++n) {
                auto yw = as_set(words(y, n));
                auto xw = as_set(words(x, n));
                for (const auto& w : yw) {
                    EXPECT_TRUE(xw.count(w));
                    for (const auto& u : F)
                        EXPECT_EQ(std::search(w.begin(), w.end(), u.begin(), u.end()), w.end());
                }
            }
        }
}

TEST(Determinize, Examples) {
    auto e = determinize(even_shift());
    EXPECT_EQ(e.graph().num_states(), 2);
    // 3-state nondeterministic golden mean: p and r are twins
    Graph g;
    g.alphabet = {"0", "1"};
    g.states = {"p", "q", "r"};
    g.edges = {{0, 0, 0}, {0, 2, 0}, {0, 1, 1}, {1, 0, 0}, {2, 2, 0}, {2, 1, 1}};
    auto d = determinize(ShiftSpace::sofic(g));
    EXPECT_TRUE(d.graph().right_resolving());
    EXPECT_TRUE(language_equal(d, golden_mean()));
    EXPECT_EQ(d.graph().num_states(), 2);
}

TEST(Determinize, LanguagePreserving) {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_graph(rng, 6, 2, 12);
        if (trim_graph(g).edges.empty()) continue;
        auto d = determinize(ShiftSpace::sofic(g));
        EXPECT_TRUE(d.graph().right_resolving());
        for (int n = 1; n <= 5; ++n) EXPECT_EQ(as_set(words(d, n)), brute_words(g, n));
    }
}

TEST(Synchronizing, Examples) {
    EXPECT_TRUE(is_k_step(golden_mean(), 1));
    EXPECT_FALSE(is_k_step(golden_mean(), 0));
    for (int k = 0; k <= 6; ++k) EXPECT_FALSE(is_k_step(even_shift(), k));
    EXPECT_TRUE(is_k_step(full_shift(2), 0));
    EXPECT_TRUE(is_synchronizing(golden_mean(), {"1"}));
    EXPECT_TRUE(is_synchronizing(even_shift(), {"1"}));
    EXPECT_FALSE(is_synchronizing(even_shift(), {"0"}));
    EXPECT_TRUE(is_synchronizing(full_shift(3), {"0", "2"}));
    EXPECT_THROW(is_synchronizing(golden_mean(), {"1", "1"}), WordNotInLanguage);
}

TEST(FixedPoint, Examples) {
    EXPECT_TRUE(has_fixed_point(golden_mean()));
    EXPECT_FALSE(has_fixed_point(ShiftSpace::edge_shift({{0, 2}, {2, 0}})));
    EXPECT_TRUE(has_fixed_point(full_shift(2)));
}

TEST(Entropy, Examples) {
    EXPECT_EQ(entropy(full_shift(2)).base, AlgebraicReal::rational(2));
    auto g = entropy(golden_mean());
    EXPECT_EQ(g.base.poly(), (IntPolynomial{-1, -1, 1}));
    EXPECT_EQ(compare(entropy(even_shift()), g), 0);
    EXPECT_EQ(compare(g, entropy(full_shift(2))), -1);
}

TEST(Census, Examples) {
    auto c = q_census(full_shift(2), 3);
    EXPECT_EQ(c.at(1), 2);
    EXPECT_EQ(c.at(2), 2);
    EXPECT_EQ(c.at(3), 6);
    c = q_census(golden_mean(), 3);
    EXPECT_EQ(c.at(1), 1);
    EXPECT_EQ(c.at(2), 2);
    EXPECT_EQ(c.at(3), 3);
    c = q_census(ShiftSpace::edge_shift({{1}}), 5);
    EXPECT_EQ(c.at(1), 1);
    for (int k = 2; k <= 5; ++k) EXPECT_EQ(c.at(k), 0);
}

TEST(Census, MobiusIdentityOnEdgeShifts) {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 6;
        Matrix A = zero_matrix(n);
        for (auto& row : A)
            for (auto& v : row) v = rng() % 3 == 0 ? 1 : 0;
        A[0][0] = 1;
        auto x = ShiftSpace::edge_shift(A);
        auto c = q_census(x, 12);
        auto tr = power_traces(A, 12);
        for (int k = 1; k <= 12; ++k) {
            BigInt s = 0;
            for (int d = 1; d <= k; ++d)
                if (k % d == 0) s += c.at(d);
            EXPECT_EQ(s, tr[k - 1]);
        }
    }
}

TEST(Census, SoficCountsPointsNotCycles) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        Graph g = random_graph(rng, 4, 2, 9);
        if (trim_graph(g).edges.empty()) continue;
        auto p = fixed_point_counts(ShiftSpace::sofic(g), 7);
        for (int k = 1; k <= 7; ++k) EXPECT_EQ(p[k - 1], brute_fixed_count(g, k)) << "k=" << k;
    }
    auto e = q_census(even_shift(), 4);
    EXPECT_EQ(e.at(1), 2);  // 0^inf and 1^inf
    EXPECT_EQ(e.at(2), 0);  // (01)^inf has an odd run of zeros
}

TEST(Crossover, Examples) {
    long k = crossover_bound(golden_mean(), full_shift(2));
    EXPECT_LE(k, 30);
    auto a = q_census(golden_mean(), k + 40), b = q_census(full_shift(2), k + 40);
    for (int j = k + 1; j <= k + 40; ++j) EXPECT_LE(a.at(j), b.at(j));
    EXPECT_THROW(crossover_bound(full_shift(2), full_shift(2)), EntropyNotSeparated);
    long z = crossover_bound(ShiftSpace::edge_shift({{1}}), full_shift(2));
    EXPECT_GE(z, 0);
    EXPECT_THROW(crossover_bound(golden_mean(), ShiftSpace::edge_shift({{0, 2}, {2, 0}})), NotMixingTarget);
    long s = crossover_bound(even_shift(), full_shift(2));
    auto ce = q_census(even_shift(), s + 20), cf = q_census(full_shift(2), s + 20);
    for (int j = s + 1; j <= s + 20; ++j) EXPECT_LE(ce.at(j), cf.at(j));
}
