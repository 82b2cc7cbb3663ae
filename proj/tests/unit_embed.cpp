#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "symdyn/embed_decomp.hpp"

using namespace symdyn;
using namespace fx;

namespace {

ShiftSpace no111() { return ShiftSpace::sft({"0", "1"}, {{"1", "1", "1"}}); }
ShiftSpace fixed_zero() { return ShiftSpace::sft({"0"}, {}); }

/// Least-period census of an edge shift by walking closed paths edge by edge.
std::vector<long> walk_census(const Matrix& A, int K) {
    const int n = static_cast<int>(A.size());
    std::vector<long> p(K + 1, 0);
    std::function<void(int, int, int, long)> walk = [&](int start, int v, int len, long mult) {
        if (len > 0 && v == start) p[len] += mult;
        if (len == K) return;
        for (int w = 0; w < n; ++w)
            if (A[v][w]) walk(start, w, len + 1, mult * A[v][w]);
    };
    for (int s = 0; s < n; ++s) walk(s, s, 0, 1);
    std::vector<long> q(K + 1, 0);
    for (int k = 1; k <= K; ++k) {
        q[k] = p[k];
        for (int d = 1; d < k; ++d)
            if (k % d == 0) q[k] -= q[d];
    }
    return q;
}

std::vector<long> as_longs(const PeriodicCensus& c, int K) {
    std::vector<long> v(K + 1, 0);
    for (int k = 1; k <= K; ++k) v[k] = c.at(k).get_si();
    return v;
}

EntropyValue log_sqrt2() { return scaled_log(Rational(1, 2), 2); }

}  // namespace

TEST(BlowUp, Examples) {
    auto two = full_shift(2);
    auto r = blow_up_certified(two, {{"0"}, {1, 1}});
    EXPECT_EQ(r.after.at(1), 3);
    for (int k = 2; k <= 12; ++k) EXPECT_EQ(r.after.at(k), r.before.at(k)) << k;

    r = blow_up_certified(two, {{"0"}, {2}});
    EXPECT_EQ(r.after.at(1), 1);
    EXPECT_EQ(r.after.at(2), 4);  // one new orbit of period 2 carries two points
    for (int k = 3; k <= 12; ++k) EXPECT_EQ(r.after.at(k), r.before.at(k)) << k;

    r = blow_up_certified(golden_mean(), {{"0", "1"}, {1}});
    EXPECT_EQ(r.after.q, r.before.q);
    EXPECT_TRUE(structure(r.shift).mixing);
}

TEST(BlowUp, ClausesAgainstClosedWalks) {
    std::vector<ShiftSpace> xs{full_shift(2), golden_mean(), no111()};
    const int K = 8;
    int runs = 0;
    for (const auto& x : xs)
        for (int n = 1; n <= 3; ++n)
            for (const auto& orb : periodic_orbits(x, n))
                for (std::vector<int> M : {std::vector<int>{1, 1}, {2}, {1, 3}, {2, 2}, {3, 1, 2}}) {
                    auto r = blow_up_certified(x, {orb, M});
                    auto got = walk_census(r.shift.matrix(), K);
                    auto want = as_longs(q_census(x, K), K);
                    want[n] -= n;
                    for (int m : M)
                        if (n * m <= K) want[n * m] += n * m;
                    EXPECT_EQ(got, want) << join_word(orb);
                    EXPECT_TRUE(structure(r.shift).mixing);
                    ++runs;
                }
    EXPECT_GT(runs, 30);
}

TEST(BlowUp, FixedPointWithForcedReturn) {
    // golden mean: leaving 0^inf forces 1 then 0, so exits are separated by out-splitting
    auto r = blow_up_certified(golden_mean(), {{"0"}, {1, 1}});
    EXPECT_GT(r.splits, 0);
    EXPECT_EQ(r.after.at(1), 2);
}

TEST(BlowUp, Errors) {
    EXPECT_THROW(blow_up(golden_mean(), {{"1"}, {1}}), OrbitNotFound);
    EXPECT_THROW(blow_up(golden_mean(), {{"0", "0"}, {1}}), PreconditionError);
    EXPECT_THROW(blow_up(golden_mean(), {{"0"}, {0}}), PreconditionError);
    EXPECT_THROW(blow_up(ShiftSpace::edge_shift({{0, 1}, {1, 0}}), {{"0", "1"}, {1}}), PreconditionError);
    EXPECT_THROW(blow_up(ShiftSpace::edge_shift({{1, 1}, {0, 1}}), {{"0"}, {1}}), NotIrreducible);
}

TEST(BuildBn, Examples) {
    EXPECT_EQ(block_cyclic({{2}}, 2), (Matrix{{0, 2}, {2, 0}}));
    auto b2 = build_Bn({{2}}, 2);
    EXPECT_EQ(structure(b2).period, 2);
    EXPECT_EQ(char_poly(b2.matrix()), (IntPolynomial{-4, 0, 1}));
    EXPECT_EQ(compare(entropy(b2), entropy(full_shift(2))), 0);
    EXPECT_EQ(block_cyclic({{1, 1}, {1, 0}}, 1), (Matrix{{1, 1}, {1, 0}}));
    auto g3 = build_Bn({{1, 1}, {1, 0}}, 3);
    EXPECT_EQ(g3.matrix().size(), 6u);
    EXPECT_EQ(structure(g3).period, 3);
    EXPECT_EQ(compare(entropy(g3), entropy(golden_mean())), 0);
    EXPECT_THROW(build_Bn({{1, 1}, {0, 1}}, 2), NotIrreducible);
}

TEST(BuildBn, PeriodAndEntropy) {
    for (const Matrix& B : {Matrix{{2}}, Matrix{{1, 1}, {1, 0}}, Matrix{{1, 2}, {1, 1}}})
        for (int n = 1; n <= 5; ++n) {
            auto s = build_Bn(B, n);
            EXPECT_EQ(structure(s).period, n);
            EXPECT_TRUE(structure(s).irreducible);
            EXPECT_EQ(compare(entropy(s), entropy(ShiftSpace::edge_shift(B))), 0);
        }
}

TEST(EmbedPreconditions, Examples) {
    auto r = embedding_preconditions(golden_mean(), full_shift(2));
    EXPECT_TRUE(r.entropy_ok);
    EXPECT_TRUE(r.census_ok);
    EXPECT_TRUE(r.embeds());
    EXPECT_GT(r.census_horizon, 0);
    EXPECT_FALSE(embedding_preconditions(full_shift(2), golden_mean()).entropy_ok);
    auto b = embedding_preconditions(build_Bn({{2}}, 2), full_shift(2));
    EXPECT_FALSE(b.entropy_ok);
    EXPECT_FALSE(b.embeds());
    EXPECT_THROW(embedding_preconditions(golden_mean(), even_shift()), NotMixingTarget);
    EXPECT_THROW(embedding_preconditions(golden_mean(), build_Bn({{2}}, 2)), NotMixingTarget);
}

TEST(EmbedPreconditions, CensusWitness) {
    // two fixed points cannot go into the golden mean, which has one
    auto two_points = ShiftSpace::sft({"0", "1"}, {{"0", "1"}, {"1", "0"}});
    auto r = embedding_preconditions(two_points, golden_mean());
    EXPECT_TRUE(r.entropy_ok);
    EXPECT_FALSE(r.census_ok);
    ASSERT_FALSE(r.witnesses.empty());
    EXPECT_EQ(r.witnesses.front(), 1);
}

TEST(Membership, Examples) {
    EntropySetQuery q;
    q.hX = EntropyValue::zero();
    q.hY = entropy(full_shift(2));
    q.set = EntropySet::T_prime;
    q.h = entropy(golden_mean());
    EXPECT_TRUE(membership(q).member);
    q.h = q.hX;
    EXPECT_FALSE(membership(q).member);
    q.h = entropy(full_shift(3));
    EXPECT_FALSE(membership(q).member);

    q.set = EntropySet::T0;
    q.h = log_sqrt2();
    q.p = 2;
    q.q = 1;
    auto m = membership(q);
    EXPECT_TRUE(m.member);
    EXPECT_EQ(m.witness, 2);
    q.p = 1;
    EXPECT_FALSE(membership(q).member);
    q.h = entropy(golden_mean());
    m = membership(q);
    EXPECT_TRUE(m.member);
    EXPECT_EQ(m.witness, 1);

    q.set = EntropySet::T1_prime;
    q.h = log_sqrt2();
    m = membership(q);
    EXPECT_TRUE(m.member);
    EXPECT_EQ(m.witness, 2);

    q.set = EntropySet::T;
    q.h = q.hX;
    EXPECT_THROW(membership(q), Undecided);
    q.x_irreducible = true;
    EXPECT_TRUE(membership(q).member);
}

TEST(Membership, T0MonotoneUnderDivisibility) {
    std::vector<EntropyValue> hs{log_sqrt2(), scaled_log(Rational(1, 3), 2), scaled_log(Rational(1, 4), 3),
                                 entropy(golden_mean()), scaled_log(Rational(1, 6), 5)};
    for (const auto& h : hs)
        for (long p = 1; p <= 12; ++p) {
            EntropySetQuery a;
            a.set = EntropySet::T0;
            a.h = h;
            a.hX = EntropyValue::zero();
            a.hY = entropy(full_shift(5));
            a.p = p;
            a.q = 1;
            bool in = membership(a).member;
            for (long mult = 2; mult * p <= 24; ++mult) {
                a.p = p * mult;
                if (in) EXPECT_TRUE(membership(a).member) << h.approx << " " << p << " " << a.p;
            }
        }
}

TEST(BetweenSearch, Examples) {
    auto r = subshift_between_search(fixed_zero(), full_shift(2), EntropyTarget::of(entropy(golden_mean())),
                                     Rational(1, 100), RequireClass::sft);
    ASSERT_EQ(r.forbidden.size(), 1u);
    EXPECT_EQ(r.forbidden[0], (Word{"1", "1"}));
    EXPECT_EQ(compare(r.h, entropy(golden_mean())), 0);
    ASSERT_TRUE(r.step.has_value());
    EXPECT_EQ(*r.step, 1);

    auto y = subshift_between_search(fixed_zero(), golden_mean(), EntropyTarget::of(entropy(golden_mean())),
                                     Rational(1, 1000), RequireClass::none);
    EXPECT_TRUE(y.forbidden.empty());

    BetweenOptions small;
    small.max_word_length = 5;
    EXPECT_THROW(subshift_between_search(fixed_zero(), even_shift(), EntropyTarget::in_nats(Rational(3, 10)),
                                         Rational(1, 20), RequireClass::sft, small),
                 NotFound);
    auto s = subshift_between_search(fixed_zero(), even_shift(), EntropyTarget::of(entropy(golden_mean())),
                                     Rational(1, 20), RequireClass::sofic, small);
    EXPECT_TRUE(s.forbidden.empty());
    EXPECT_THROW(subshift_between_search(golden_mean(), fixed_zero(), EntropyTarget::in_nats(0), Rational(1, 10),
                                         RequireClass::none),
                 PreconditionError);
}

TEST(BetweenSearch, SandwichedAndWithinTolerance) {
    std::vector<std::pair<ShiftSpace, ShiftSpace>> pairs{{fixed_zero(), full_shift(2)},
                                                         {golden_mean(), full_shift(2)},
                                                         {fixed_zero(), full_shift(3)}};
    BetweenOptions opt;
    opt.max_word_length = 4;
    int found = 0;
    for (const auto& [x, y] : pairs)
        for (Rational t : {Rational(1, 2), Rational(3, 5)}) {
            if (compare_log(entropy(x).base, t) >= 0 || compare_log(entropy(y).base, t) <= 0) continue;
            try {
                auto r = subshift_between_search(x, y, EntropyTarget::in_nats(t), Rational(1, 10), RequireClass::sft, opt);
                EXPECT_TRUE(language_contained(x, r.Z));
                EXPECT_TRUE(language_contained(r.Z, y));
                EXPECT_TRUE(log_within(r.h.base, t, Rational(1, 10)));
                EXPECT_TRUE(structure(r.Z).irreducible);
                EXPECT_TRUE(is_k_step(r.Z, *r.step));
                ++found;
            } catch (const NotFound&) {
            }
        }
    EXPECT_GT(found, 0);
}

TEST(CensusSandwich, Examples) {
    auto r = census_sandwich(fixed_zero(), full_shift(2), entropy(golden_mean()));
    EXPECT_EQ(compare(entropy(r.W), entropy(golden_mean())), 0);
    EXPECT_TRUE(r.lower.embeds());
    EXPECT_TRUE(r.upper.embeds());

    auto two = EntropyValue::of_base(AlgebraicReal::rational(2));
    auto r2 = census_sandwich(fixed_zero(), full_shift(3), two);
    EXPECT_EQ(compare(entropy(r2.W), two), 0);
    EXPECT_TRUE(r2.upper.embeds());

    EXPECT_THROW(census_sandwich(fixed_zero(), full_shift(2), log_sqrt2()), RealizationUnavailable);
}

TEST(CensusSandwich, BlowsUpToFitBothSides) {
    auto three_points = ShiftSpace::sft({"0", "1", "2"}, {{"0", "1"}, {"0", "2"}, {"1", "0"}, {"1", "2"}, {"2", "0"}, {"2", "1"}});
    auto t = EntropyValue::of_base(AlgebraicReal::root_of(IntPolynomial{-1, -2, 1}, {Rational(2), Rational(3)}));
    auto r = census_sandwich(three_points, full_shift(4), t);
    EXPECT_GT(r.steps.size(), 1u);
    EXPECT_EQ(compare(entropy(r.W), t), 0);
    const int K = static_cast<int>(std::max(r.lower.census_horizon, r.upper.census_horizon));
    auto qx = q_census(three_points, K), qw = q_census(r.W, K), qy = q_census(full_shift(4), K);
    for (int k = 1; k <= K; ++k) {
        EXPECT_LE(qx.at(k), qw.at(k)) << k;
        EXPECT_LE(qw.at(k), qy.at(k)) << k;
    }
}
