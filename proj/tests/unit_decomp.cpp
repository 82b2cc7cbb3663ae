#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "symdyn/factor_decomp.hpp"

using namespace symdyn;
using namespace fx;

namespace {

ShiftSpace point() { return ShiftSpace::sft({"0"}, {}); }

BlockMap constant(const ShiftSpace& x) {
    return BlockMap::from_function(x, 0, 0, [](const Word&) { return std::string("0"); });
}

EntropyValue log_golden() { return entropy(golden_mean()); }

// Conditions of a normalized triple, checked from the definitions.
void expect_normalized(const NormalizedTriple& t) {
    EXPECT_EQ(t.phi.window(), 1);
    EXPECT_LE(t.X.step(), 1);
    EXPECT_LE(t.Z.step(), 1);
    std::set<std::string> y(t.y_alphabet.begin(), t.y_alphabet.end());
    for (const auto& [z, o] : t.origin) EXPECT_FALSE(y.count(z)) << z;
    std::set<Word> zz;
    for (const auto& w : words(t.Z, 2)) zz.insert(w);
    for (const auto& w : words(t.X, 2))
        if (t.fresh.count(w[0]) && t.fresh.count(w[1])) EXPECT_TRUE(zz.count({t.fresh.at(w[0]), t.fresh.at(w[1])}));
    // Z sits inside X once the fresh names are undone
    std::map<std::string, std::string> back(t.origin.begin(), t.origin.end());
    EXPECT_TRUE(language_contained(rename_symbols(t.Z, back), t.X));
}

}  // namespace

TEST(FindSubSft, Examples) {
    auto z = find_sub_sft(full_shift(2), log_golden(), entropy(point()), Rational(1, 100));
    EXPECT_EQ(compare(entropy(z), log_golden()), 0);
    EXPECT_TRUE(language_contained(z, full_shift(2)));
    EXPECT_THROW(find_sub_sft(full_shift(2), log_golden(), log_golden(), Rational(1, 100)), PreconditionError);
    EXPECT_THROW(find_sub_sft(full_shift(2), scaled_log(1, 3), entropy(point()), Rational(1, 100)), PreconditionError);
    // just below h(X): one long word goes
    auto near = find_sub_sft(full_shift(2), scaled_log(Rational(99, 100), 2), entropy(point()), Rational(1, 200));
    EXPECT_LT(compare(entropy(near), entropy(full_shift(2))), 0);
}

TEST(FindSubSft, WithinToleranceAndInside) {
    std::mt19937 rng(3);
    for (const auto& x : {full_shift(2), full_shift(3), golden_mean()}) {
        double hx = log_bounds(entropy(x).base).first;
        for (int t = 0; t < 3; ++t) {
            Rational frac(1 + static_cast<long>(rng() % 9), 10);
            EntropyValue target = EntropyValue::of_base(AlgebraicReal::rational(1 + frac * Rational(std::exp(hx) - 1)));
            Rational tol(1, 40);
            auto z = find_sub_sft(x, target, entropy(point()), tol);
            EXPECT_TRUE(language_contained(z, x));
            EXPECT_TRUE(log_distance_below(entropy(z).base, target.base, tol));
            EXPECT_TRUE(z.is_finite_type());
        }
    }
}

TEST(Normalize, Examples) {
    auto t = normalize(full_shift(2), golden_mean(), constant(full_shift(2)));
    expect_normalized(t);
    EXPECT_EQ(t.block_length, 2);
    EXPECT_EQ(t.origin.size(), 3u);  // 00, 01, 10; no clash with the Y-symbol 0
    auto tc = normalize(full_shift(2), golden_mean(), BlockMap::make(full_shift(2), 0, 0, {{{"0"}, "01"}, {{"1"}, "01"}}));
    EXPECT_TRUE(tc.origin.count("z01"));

    // disjoint already, 1-step, unique factorization holds: nothing to rename
    ShiftSpace ab = ShiftSpace::sft({"a", "b"}, {});
    auto to_y = BlockMap::make(ab, 0, 0, {{{"a"}, "y"}, {{"b"}, "y"}});
    auto t1 = normalize(ab, ab, to_y);
    EXPECT_EQ(t1.block_length, 1);
    for (const auto& [z, o] : t1.origin) EXPECT_EQ(z, o);

    auto xor2 = BlockMap::from_function(full_shift(2), 0, 1, [](const Word& w) { return w[0] == w[1] ? "0" : "1"; });
    auto t2 = normalize(full_shift(2), golden_mean(), xor2);
    expect_normalized(t2);
    EXPECT_GE(t2.block_length, 2);
    EXPECT_EQ(compose(t2.phi, t2.beta).table, widen(xor2, 0, t2.block_length - 1).table);
}

TEST(Normalize, RandomSubshifts) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 8; ++trial) {
        ShiftSpace x = trial % 2 ? full_shift(2) : full_shift(3);
        std::vector<Word> f;
        for (int i = 0; i < 2; ++i) {
            Word w;
            for (int k = 0; k < 2 + static_cast<int>(rng() % 2); ++k) w.push_back(x.alphabet()[rng() % x.alphabet().size()]);
            f.push_back(w);
        }
        ShiftSpace z;
        try {
            z = forbid(x, f);
        } catch (const EmptyShift&) {
            continue;
        }
        auto phi = BlockMap::from_function(x, 0, static_cast<int>(rng() % 2), [&](const Word& w) { return w[0]; });
        expect_normalized(normalize(x, z, phi));
    }
}

TEST(Theta, Examples) {
    auto t = normalize(full_shift(2), golden_mean(), constant(full_shift(2)));
    auto theta = build_theta(t);
    EXPECT_EQ(theta.table.at({"01"}), "01");
    EXPECT_EQ(theta.table.at({"11"}), "0");
    auto im = image(theta);
    std::set<std::string> used;
    for (const auto& w : words(im, 1)) used.insert(w[0]);
    EXPECT_TRUE(used.count("0"));
    EXPECT_TRUE(used.count("00"));
}

TEST(Alpha, Examples) {
    auto t = normalize(full_shift(2), golden_mean(), constant(full_shift(2)));
    ShiftSpace full = ShiftSpace::sft(t.alphabet(), {});
    auto alpha = build_alpha(t, full);
    EXPECT_EQ(alpha.table.at({"0", "00", "01"}), "0");
    EXPECT_EQ(alpha.table.at({"00", "01", "10"}), "01");
    EXPECT_EQ(alpha.table.at({"0", "0", "0"}), "0");
    EXPECT_EQ(alpha.table.at({"10", "01", "0"}), "0");
    // the back-map does not see alpha
    auto back = build_back_map(t, full);
    EXPECT_EQ(shrink(compose(back, alpha)).window(), 1);
}

TEST(HatZ, SandwichAndMonotone) {
    auto phi = constant(full_shift(2));
    auto r = split_sofic(phi, point(), log_golden(), Rational(1, 20));
    EntropyValue hZ = r.trace.front().h;
    std::optional<EntropyValue> prev_hat;
    for (std::size_t i = 1; i + 1 < r.trace.size(); i += 2) {
        ASSERT_EQ(r.trace[i].stage, "tilde_Z");
        ASSERT_EQ(r.trace[i + 1].stage, "hat_Z");
        EXPECT_LE(compare(hZ, r.trace[i].h), 0);
        EXPECT_LE(compare(r.trace[i].h, r.trace[i + 1].h), 0);
        if (prev_hat) EXPECT_LE(compare(r.trace[i + 1].h, *prev_hat), 0);
        prev_hat = r.trace[i + 1].h;
    }
    auto t = normalize(full_shift(2), golden_mean(), phi);
    // n = 0 forbids nothing beyond F_Y and F_Z
    EXPECT_TRUE(contains_word(hatZ(t, point(), 0), {"01", "0", "10"}));
    EXPECT_FALSE(contains_word(hatZ(t, point(), 1), {"01", "0", "0", "10"}));
    EXPECT_TRUE(contains_word(hatZ(t, point(), 1), {"01", "0", "0", "0", "10"}));
}

TEST(SplitSofic, Examples) {
    auto phi = constant(full_shift(2));
    auto r = split_sofic(phi, point(), log_golden(), Rational(1, 20));
    EXPECT_TRUE(log_distance_below(r.intermediate_entropy.base, log_golden().base, Rational(1, 20)));
    EXPECT_NO_THROW(certify(r, phi));
    auto d = split_sofic(phi, point(), entropy(point()), Rational(1, 20));
    EXPECT_EQ(d.phi1.size(), 1u);
    EXPECT_TRUE(language_equal(d.intermediate, point()));
    EXPECT_THROW(split_sofic(phi, point(), scaled_log(1, 3), Rational(1, 20)), PreconditionError);
}

TEST(VerifyChain, RejectsCorruptedLink) {
    auto phi = constant(full_shift(2));
    auto r = split_sofic(phi, point(), log_golden(), Rational(1, 20));
    auto bad = r;
    auto& tab = bad.phi2.back().table;
    auto it = std::find_if(tab.begin(), tab.end(), [](const auto& kv) { return kv.first[0] != "0"; });
    ASSERT_NE(it, tab.end());
    it->second = "1";
    bad.phi2.back().target_alphabet = {"0", "1"};
    EXPECT_THROW(verify_chain(phi, bad.phi1, bad.phi2), Mismatch);
    EXPECT_THROW(certify(bad, phi), Mismatch);
}

TEST(OverlapPartition, Examples) {
    EXPECT_EQ(least_period({"a", "a", "a", "a"}), 1);
    EXPECT_EQ(least_period({"a", "b", "c", "a"}), 3);
    EXPECT_EQ(least_period({"a", "b"}), 2);
    std::map<std::string, Word> syms{{"aaaa", {"a", "a", "a", "a"}}, {"abca", {"a", "b", "c", "a"}}};
    auto p = overlap_partition(syms, 4);
    EXPECT_EQ(p.N(), 2);
    EXPECT_EQ(p.class_of.at("abca"), 1);
    EXPECT_EQ(p.class_of.at("aaaa"), 2);
    auto p1 = overlap_partition({{"0", {"0"}}, {"1", {"1"}}}, 1);
    EXPECT_TRUE(p1.classes.back().empty());
    EXPECT_EQ(p1.N(), 3);
}

TEST(OverlapPartition, BordersAndPeriodicCore) {
    for (int n : {4, 8}) {
        std::map<std::string, Word> syms;
        ShiftSpace x = full_shift(2);
        for (const auto& w : words(x, n)) syms[block_name(w)] = w;
        auto p = overlap_partition(syms, n);
        std::size_t total = 0;
        for (const auto& c : p.classes) total += c.size();
        EXPECT_EQ(total, syms.size());
        for (int j = 0; j + 1 < p.N(); ++j) {
            ASSERT_EQ(p.classes[j].size(), 1u);
            EXPECT_GT(4 * least_period(syms.at(p.classes[j][0])), n);
        }
        for (const auto& s : p.classes.back()) EXPECT_GE(4 * (n - least_period(syms.at(s))), 3 * n);
        // X^[n] restricted to E_N: disjoint cycles only
        ShiftSpace xn = higher_block(x, n);
        std::vector<Word> drop;
        for (const auto& s : xn.alphabet())
            if (p.class_of.at(s) != p.N()) drop.push_back({s});
        Graph g = essential_presentation(forbid(xn, drop));
        std::vector<int> outdeg(g.num_states()), indeg(g.num_states());
        for (const auto& e : g.edges) {
            ++outdeg[e.from];
            ++indeg[e.to];
        }
        for (int s = 0; s < g.num_states(); ++s) {
            EXPECT_EQ(outdeg[s], 1);
            EXPECT_EQ(indeg[s], 1);
        }
    }
}

TEST(PhiM, Examples) {
    ShiftSpace x = full_shift(2);
    std::map<std::string, Word> syms;
    for (const auto& w : words(x, 4)) syms[block_name(w)] = w;
    auto p = overlap_partition(syms, 4);
    auto c = build_phi_m(p, higher_block(x, 4), constant(x), 1);
    auto win = [](const std::string& x) {
        Word w;
        for (int i = 0; i < 3; ++i) w.push_back(x.substr(i, 4));
        return w;
    };
    // 0000 and 1111 form the periodic class E_N
    EXPECT_EQ(p.class_of.at("0000"), p.N());
    EXPECT_EQ(p.class_of.at("0001"), 1);
    EXPECT_EQ(c.table.at(win("000000")), "0000");
    EXPECT_EQ(c.table.at(win("100000")), "0");     // E_N centre beside a singleton
    EXPECT_EQ(c.table.at(win("100011")), "0001");  // centre has the least class
    EXPECT_EQ(c.table.at(win("000111")), "0");     // left neighbour 0001 ranks lower
}

TEST(SplitSft, Examples) {
    auto phi = constant(full_shift(2));
    auto r = split_sft(phi, point(), Rational(1, 2));
    ASSERT_TRUE(r.step_claim);
    EXPECT_EQ(*r.step_claim, 2 * r.params.at("m") * r.params.at("N") + 1);
    EXPECT_EQ(r.params.at("n") % 4, 0);
    r.target = entropy(point());
    EXPECT_NO_THROW(certify(r, phi));
    auto easy = split_sft(phi, point(), Rational(1));
    EXPECT_EQ(easy.params.at("n"), 1);
    EXPECT_EQ(easy.params.at("m"), 1);
    EXPECT_NO_THROW(certify(easy, phi));
    EXPECT_THROW(split_sft(BlockMap::identity(full_shift(2)), full_shift(2), Rational(1, 2)), PreconditionError);
}

TEST(SplitSft, GoldenMeanDomain) {
    auto phi = constant(golden_mean());
    auto r = split_sft(phi, point(), Rational(9, 20));
    EXPECT_EQ(*r.step_claim, 2 * r.params.at("m") * r.params.at("N") + 1);
    EXPECT_TRUE(is_k_step(r.intermediate, *r.step_claim));
    EXPECT_NO_THROW(certify(r, phi));
}

TEST(DecomposeDense, Examples) {
    auto phi = constant(full_shift(2));
    Rational eps(693, 10000);  // below 0.1 log 2
    auto r = decompose_dense(phi, point(), scaled_log(Rational(1, 2), 2), eps);
    EXPECT_TRUE(r.step_claim.has_value());
    EXPECT_TRUE(is_perron(r.intermediate_entropy.base));
    EXPECT_FALSE(r.certificates.empty());
    auto lo = decompose_dense(phi, point(), entropy(point()), eps);
    EXPECT_EQ(lo.phi1.front().table, phi.table);
    auto hi = decompose_dense(phi, point(), entropy(full_shift(2)), eps);
    EXPECT_TRUE(language_equal(hi.intermediate, full_shift(2)));
}

TEST(SampleS0, Rows) {
    auto phi = constant(full_shift(2));
    EXPECT_TRUE(sample_S0(phi, point(), {}, Rational(1, 10)).empty());
    auto rows = sample_S0(phi, point(), {scaled_log(Rational(1, 2), 2), scaled_log(1, 3)}, Rational(1, 10));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].status, "ok");
    EXPECT_TRUE(rows[0].perron.value_or(false));
    EXPECT_EQ(rows[1].status, "out-of-range");
}
