#ifndef SYMDYN_EMBED_DECOMP_HPP
#define SYMDYN_EMBED_DECOMP_HPP

#include <functional>
#include <numeric>
#include <optional>

#include "symdyn/code.hpp"

namespace symdyn {

// ---- blowing up a periodic orbit ----

/// Orbit given by one period block w (w^inf in X, least period |w|) and multipliers M_1..M_k.
struct BlowupSpec {
    Word orbit;
    std::vector<int> multipliers;
};

struct BlowupResult {
    ShiftSpace shift;
    int horizon = 0;
    PeriodicCensus before, after, expected;
    int splits = 0;        // out-splittings used to separate exits
    int families = 0;      // exit families in the routing
    std::vector<std::string> checks;
};

namespace detail {

struct MultiGraph {
    int nv = 0;
    std::vector<std::pair<int, int>> edges;

    Matrix matrix() const {
        Matrix A = zero_matrix(nv);
        for (auto [a, b] : edges) ++A[a][b];
        return A;
    }
};

/// det(I - tA) as a polynomial in t.
inline IntPolynomial zeta_inverse(const Matrix& A) {
    auto c = char_poly(A).coeffs();
    std::reverse(c.begin(), c.end());
    return IntPolynomial(std::move(c));
}

inline int least_period_of(const Word& w) {
    const int n = static_cast<int>(w.size());
    for (int p = 1; p <= n; ++p) {
        if (n % p) continue;
        bool ok = true;
        for (int i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
        if (ok) return p;
    }
    return n;
}

/// Exit permissions for the loops in `members`: residues[j] are the copy classes mod M of members[j].
/// The lifted classes partition the windings exactly once.
struct ResidueCover {
    std::vector<int> members;
    std::vector<std::vector<int>> residues;
};

inline std::optional<ResidueCover> find_residue_cover(const std::vector<int>& members, const std::vector<int>& M) {
    long L = 1;
    for (int i : members) L = std::lcm(L, static_cast<long>(M[i]));
    if (L > 720) return std::nullopt;
    std::vector<int> owner(L, -1);
    ResidueCover c;
    c.members = members;
    c.residues.assign(members.size(), {});
    std::function<bool()> go = [&]() -> bool {
        long x = 0;
        while (x < L && owner[x] >= 0) ++x;
        if (x == L) {
            for (const auto& r : c.residues)
                if (r.empty()) return false;
            return true;
        }
        for (std::size_t j = 0; j < members.size(); ++j) {
            const long m = M[members[j]];
            bool free = true;
            for (long y = x % m; y < L && free; y += m) free = owner[y] < 0;
            if (!free) continue;
            for (long y = x % m; y < L; y += m) owner[y] = static_cast<int>(j);
            c.residues[j].push_back(static_cast<int>(x % m));
            if (go()) return true;
            c.residues[j].pop_back();
            for (long y = x % m; y < L; y += m) owner[y] = -1;
        }
        return false;
    };
    if (!go()) return std::nullopt;
    for (auto& r : c.residues) std::sort(r.begin(), r.end());
    return c;
}

/// Fewest residue covers whose members together use every loop.
inline std::vector<ResidueCover> exit_families(const std::vector<int>& M) {
    const int k = static_cast<int>(M.size());
    if (k > 10) throw PreconditionError("at most 10 multipliers supported");
    std::vector<std::pair<int, ResidueCover>> coverable;
    for (int s = 1; s < (1 << k); ++s) {
        std::vector<int> mem;
        for (int i = 0; i < k; ++i)
            if (s >> i & 1) mem.push_back(i);
        if (auto c = find_residue_cover(mem, M)) coverable.push_back({s, *c});
    }
    const int full = (1 << k) - 1;
    std::vector<int> dist(1 << k, -1), from(1 << k, -1), via(1 << k, -1);
    std::vector<int> queue{0};
    dist[0] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int m = queue[h];
        for (std::size_t j = 0; j < coverable.size(); ++j) {
            int t = m | coverable[j].first;
            if (dist[t] >= 0) continue;
            dist[t] = dist[m] + 1;
            from[t] = m;
            via[t] = static_cast<int>(j);
            queue.push_back(t);
        }
    }
    std::vector<ResidueCover> out;
    for (int m = full; m != 0; m = from[m]) out.push_back(coverable[via[m]].second);
    std::reverse(out.begin(), out.end());
    return out;
}

/// Out-split v: one out-edge moves to a fresh copy, every in-edge of v is duplicated onto the copy.
inline void out_split(MultiGraph& g, int v) {
    const int u = g.nv++;
    std::vector<std::pair<int, int>> out;
    bool moved = false;
    for (auto [a, b] : g.edges) {
        int src = a;
        if (a == v && !moved) {
            src = u;
            moved = true;
        }
        out.push_back({src, b});
        if (b == v) out.push_back({src, u});
    }
    g.edges = std::move(out);
}

}  // namespace detail

/// Replaces the orbit by k disjoint loops of lengths n*M_i. Each loop unrolls the orbit cycle M_i times;
/// every entry into the orbit enters every loop at the first copy, and each exit edge leaves from a
/// residue-cover family of (loop, copy) pairs, so every old path through the orbit lifts exactly once.
/// Exits are separated by out-splitting when there are fewer than the families need.
/// The census is certified by the zeta identity det(I - tA~)(1 - t^n) = det(I - tA) prod(1 - t^(n M_i)).
inline BlowupResult blow_up_certified(const ShiftSpace& x, const BlowupSpec& spec) {
    if (!x.is_finite_type()) throw PreconditionError("blow_up needs a shift of finite type");
    const int n = static_cast<int>(spec.orbit.size());
    const auto& M = spec.multipliers;
    if (n == 0) throw PreconditionError("orbit block must be nonempty");
    if (M.empty()) throw PreconditionError("need at least one multiplier");
    for (int m : M)
        if (m < 1) throw PreconditionError("multipliers must be >= 1");
    if (detail::least_period_of(spec.orbit) != n) throw PreconditionError("orbit block is not primitive");
    StructureFacts f = structure(x);
    if (!f.irreducible) throw NotIrreducible("blow_up needs an irreducible shift");
    if (compare(entropy(x), EntropyValue::zero()) <= 0) throw PreconditionError("blow_up needs positive entropy");

    // Vertex presentation on L-blocks; L > n keeps the orbit cycle chordless.
    const int L = std::max(x.step(), n + 1);
    auto vw = words(x, L);
    std::map<Word, int> vid;
    for (std::size_t i = 0; i < vw.size(); ++i) vid[vw[i]] = static_cast<int>(i);
    detail::MultiGraph g;
    g.nv = static_cast<int>(vw.size());
    for (const auto& w : words(x, L + 1))
        g.edges.push_back({vid.at(Word(w.begin(), w.end() - 1)), vid.at(Word(w.begin() + 1, w.end()))});
    std::vector<int> cyc;
    for (int j = 0; j < n; ++j) {
        Word b;
        for (int i = 0; i < L; ++i) b.push_back(spec.orbit[(j + i) % n]);
        auto it = vid.find(b);
        if (it == vid.end()) throw OrbitNotFound("orbit block [" + join_word(spec.orbit) + "] is not periodic in X");
        cyc.push_back(it->second);
    }
    const Matrix A0 = g.matrix();

    auto families = detail::exit_families(M);
    BlowupResult res;
    res.families = static_cast<int>(families.size());
    auto pos_of = [&](int v) {
        for (int j = 0; j < n; ++j)
            if (cyc[j] == v) return j;
        return -1;
    };
    auto exits = [&]() {
        std::vector<int> e;
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            if (pos_of(g.edges[i].first) >= 0 && pos_of(g.edges[i].second) < 0) e.push_back(static_cast<int>(i));
        return e;
    };
    while (static_cast<int>(exits().size()) < res.families) {
        if (res.splits >= 64) throw BlowupUnavailable("exit separation budget exhausted");
        // nearest vertex off the orbit, forward from the exits, with two or more out-edges
        std::vector<int> seen(g.nv, 0), q;
        for (int e : exits()) {
            int b = g.edges[e].second;
            if (!seen[b]) q.push_back(b), seen[b] = 1;
        }
        int pick = -1;
        for (std::size_t h = 0; h < q.size() && pick < 0; ++h) {
            int v = q[h], deg = 0;
            for (auto [a, b] : g.edges) deg += a == v;
            if (deg >= 2) {
                pick = v;
                break;
            }
            for (auto [a, b] : g.edges)
                if (a == v && pos_of(b) < 0 && !seen[b]) q.push_back(b), seen[b] = 1;
        }
        if (pick < 0)
            throw BlowupUnavailable("every excursion from the orbit is forced; the multipliers need " +
                                    std::to_string(res.families) + " separable exits");
        detail::out_split(g, pick);
        ++res.splits;
    }

    // New vertices: kept off-orbit vertices, then loop copies d(i, p), p < n*M_i.
    std::vector<int> keep_id(g.nv, -1);
    int nv = 0;
    for (int v = 0; v < g.nv; ++v)
        if (pos_of(v) < 0) keep_id[v] = nv++;
    std::vector<int> base(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        base[i] = nv;
        nv += n * M[i];
    }
    detail::MultiGraph h;
    h.nv = nv;
    for (std::size_t i = 0; i < M.size(); ++i)
        for (int p = 0; p < n * M[i]; ++p) h.edges.push_back({base[i] + p, base[i] + (p + 1) % (n * M[i])});
    auto ex = exits();
    std::map<int, int> family_of;
    for (std::size_t j = 0; j < ex.size(); ++j)
        family_of[ex[j]] = j < families.size() ? static_cast<int>(j) : 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [a, b] = g.edges[e];
        int pa = pos_of(a), pb = pos_of(b);
        if (pa < 0 && pb < 0) {
            h.edges.push_back({keep_id[a], keep_id[b]});
        } else if (pa < 0) {
            for (std::size_t i = 0; i < M.size(); ++i) h.edges.push_back({keep_id[a], base[i] + pb});
        } else if (pb < 0) {
            const auto& fam = families[family_of.at(static_cast<int>(e))];
            for (std::size_t j = 0; j < fam.members.size(); ++j) {
                int i = fam.members[j];
                for (int r : fam.residues[j]) h.edges.push_back({base[i] + pa + n * r, keep_id[b]});
            }
        } else if (pb != (pa + 1) % n) {
            throw CensusMismatch("orbit cycle has a chord");
        }
    }
    std::sort(h.edges.begin(), h.edges.end());
    const Matrix A1 = h.matrix();
    res.shift = ShiftSpace::edge_shift(A1);

    IntPolynomial lhs = detail::zeta_inverse(A1) * (IntPolynomial{1} - IntPolynomial::monomial(n));
    IntPolynomial rhs = detail::zeta_inverse(A0);
    for (int m : M) rhs = rhs * (IntPolynomial{1} - IntPolynomial::monomial(static_cast<std::size_t>(n) * m));
    if (lhs != rhs) throw CensusMismatch("zeta identity fails after surgery");
    res.checks.push_back("det(I - tA~)(1 - t^n) = det(I - tA) prod(1 - t^(n M_i))");

    int mx = *std::max_element(M.begin(), M.end());
    res.horizon = std::max(12, n * mx + n);
    res.before = q_census(x, res.horizon);
    res.after = q_census(res.shift, res.horizon);
    res.expected = res.before;
    res.expected.q[n - 1] -= n;
    for (int m : M) {
        int per = n * m;
        if (per <= res.horizon) res.expected.q[per - 1] += per;
    }
    for (int k = 1; k <= res.horizon; ++k)
        if (res.after.at(k) != res.expected.at(k))
            throw CensusMismatch("census differs at period " + std::to_string(k));
    res.checks.push_back("census matches the blow-up clauses for k <= " + std::to_string(res.horizon));
    StructureFacts g2 = structure(res.shift);
    if (!g2.irreducible) throw CensusMismatch("surgery lost irreducibility");
    if (f.mixing && !g2.mixing) throw CensusMismatch("surgery lost mixing");
    res.checks.push_back(f.mixing ? "irreducible and mixing" : "irreducible");
    return res;
}

inline ShiftSpace blow_up(const ShiftSpace& x, const BlowupSpec& spec) { return blow_up_certified(x, spec).shift; }

/// Primitive blocks w of length n with w^inf in X, one per orbit (least rotation).
inline std::vector<Word> periodic_orbits(const ShiftSpace& x, int n) {
    std::vector<Word> out;
    const int reps = std::max(2, (std::max(x.step(), 1) + 2 * n) / n + 1);
    for (const auto& w : words(x, n)) {
        if (detail::least_period_of(w) != n) continue;
        bool least = true;
        for (int s = 1; s < n && least; ++s) {
            Word r(w.begin() + s, w.end());
            r.insert(r.end(), w.begin(), w.begin() + s);
            least = !(r < w);
        }
        if (!least) continue;
        Word rep;
        for (int i = 0; i < reps; ++i) rep.insert(rep.end(), w.begin(), w.end());
        if (contains_word(x, rep)) out.push_back(w);
    }
    return out;
}

// ---- block-cyclic matrices ----

/// nm x nm matrix with B on the superdiagonal blocks and in the lower-left block.
inline Matrix block_cyclic(const Matrix& B, int n) {
    if (n < 1) throw PreconditionError("n must be >= 1");
    const std::size_t m = B.size();
    auto comps = strongly_connected_components(adjacency_lists(B));
    if (m == 0 || comps.size() != 1 || !component_has_cycle(adjacency_lists(B), comps[0]))
        throw NotIrreducible("B must be irreducible");
    Matrix R = zero_matrix(n * m);
    for (int b = 0; b < n; ++b) {
        const std::size_t r0 = b * m, c0 = ((b + 1) % n) * m;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) R[r0 + i][c0 + j] = B[i][j];
    }
    return R;
}

inline ShiftSpace build_Bn(const Matrix& B, int n) { return ShiftSpace::edge_shift(block_cyclic(B, n)); }

// ---- embedding hypotheses ----

struct EmbedPreconditionReport {
    bool entropy_ok = false;
    long census_horizon = 0;   // K*: census checked for k <= K*
    bool census_ok = false;
    bool horizon_certified = false;  // K* came from crossover_bound, so k > K* needs no check
    std::vector<long> witnesses;     // k with q_k(X) > q_k(Y)

    bool embeds() const { return entropy_ok && census_ok && horizon_certified; }
};

/// h(X) < h(Y) and q_k(X) <= q_k(Y) for all k, for Y a mixing SFT. When the entropies are not
/// separated the census is still compared up to `fallback_horizon` for information.
inline EmbedPreconditionReport embedding_preconditions(const ShiftSpace& x, const ShiftSpace& y,
                                                       int fallback_horizon = 12) {
    if (!y.is_finite_type() || !structure(y).mixing) throw NotMixingTarget("target must be a mixing shift of finite type");
    EmbedPreconditionReport r;
    r.entropy_ok = compare(entropy(x), entropy(y)) < 0;
    if (r.entropy_ok) {
        r.census_horizon = crossover_bound(x, y);
        r.horizon_certified = true;
    } else {
        r.census_horizon = fallback_horizon;
    }
    const int K = static_cast<int>(r.census_horizon);
    auto qx = q_census(x, K), qy = q_census(y, K);
    for (int k = 1; k <= K; ++k)
        if (qx.at(k) > qy.at(k)) r.witnesses.push_back(k);
    r.census_ok = r.witnesses.empty();
    return r;
}

// ---- entropy set membership ----

enum class EntropySet { T_prime, T, T0, T0_prime, T1_prime, T1 };

inline std::string to_string(EntropySet s) {
    switch (s) {
        case EntropySet::T_prime: return "T_prime";
        case EntropySet::T: return "T";
        case EntropySet::T0: return "T0";
        case EntropySet::T0_prime: return "T0_prime";
        case EntropySet::T1_prime: return "T1_prime";
        case EntropySet::T1: return "T1";
    }
    return "?";
}

inline EntropySet parse_entropy_set(const std::string& s) {
    for (auto e : {EntropySet::T_prime, EntropySet::T, EntropySet::T0, EntropySet::T0_prime, EntropySet::T1_prime,
                   EntropySet::T1})
        if (to_string(e) == s) return e;
    throw ParseError("unknown entropy set '" + s + "'");
}

struct EntropySetQuery {
    EntropySet set = EntropySet::T_prime;
    EntropyValue h, hX, hY;
    long p = 1, q = 1;            // periods of X and Y (T0 variants)
    bool x_irreducible = false;   // T and T1: closed endpoint at h(X)
};

struct MembershipResult {
    bool member = false;
    std::optional<long> witness;  // r for T0 variants, weak Perron exponent for T1 variants
    std::string hypothesis;       // which characterization the answer relies on
    std::string reason;
};

namespace detail {

inline bool perron_safe(const AlgebraicReal& x) {
    if (!x.is_algebraic_integer()) return false;
    return is_perron(x);
}

}  // namespace detail

/// Exact decision against the interval characterizations of the embedding entropy sets.
inline MembershipResult membership(const EntropySetQuery& qy) {
    if (compare(qy.hX, qy.hY) > 0) throw PreconditionError("need h(X) <= h(Y)");
    if (qy.p < 1 || qy.q < 1) throw PreconditionError("periods must be >= 1");
    MembershipResult r;
    const int lo = compare(qy.h, qy.hX), hi = compare(qy.h, qy.hY);
    const bool open_in = lo > 0 && hi <= 0, closed_in = lo >= 0 && hi <= 0;
    switch (qy.set) {
        case EntropySet::T_prime:
            r.hypothesis = "Y irreducible sofic: T' = (h(X), h(Y)]";
            r.member = open_in;
            r.reason = open_in ? "h in (h(X), h(Y)]" : "h outside (h(X), h(Y)]";
            return r;
        case EntropySet::T:
            if (!qy.x_irreducible && lo == 0)
                throw Undecided("h = h(X) is characterized only for irreducible X");
            r.hypothesis = qy.x_irreducible ? "X irreducible, Y irreducible sofic: T = [h(X), h(Y)]"
                                            : "Y irreducible sofic: T' = (h(X), h(Y)]";
            r.member = closed_in;
            r.reason = closed_in ? "h in [h(X), h(Y)]" : "h outside [h(X), h(Y)]";
            return r;
        case EntropySet::T0:
        case EntropySet::T0_prime: {
            const bool prime = qy.set == EntropySet::T0_prime;
            r.hypothesis = prime ? "X nonwandering SFT, Y irreducible SFT: T0' = (h(X), h(Y)] with r-condition"
                                 : "X, Y irreducible SFTs: T0 = [h(X), h(Y)] with r-condition";
            if (qy.p % qy.q) throw PreconditionError("period of Y must divide period of X for an embedding");
            if (!(prime ? open_in : closed_in)) {
                r.reason = "h outside the interval";
                return r;
            }
            for (long d = qy.q; d <= qy.p; d += qy.q) {
                if (qy.p % d) continue;
                if (detail::perron_safe(power(qy.h.base, static_cast<int>(d)))) {
                    r.member = true;
                    r.witness = d;
                    r.reason = "e^(r h) is Perron for r = " + std::to_string(d);
                    return r;
                }
            }
            r.reason = "no r with q | r | p makes e^(r h) Perron";
            return r;
        }
        case EntropySet::T1_prime:
        case EntropySet::T1: {
            const bool prime = qy.set == EntropySet::T1_prime;
            if (!prime && !qy.x_irreducible) throw Undecided("T1 is characterized only for irreducible sofic X");
            r.hypothesis = prime ? "Y irreducible sofic: T1' = (h(X), h(Y)] with weak Perron"
                                 : "X irreducible sofic, Y irreducible sofic: T1 = [h(X), h(Y)] with weak Perron";
            if (!(prime ? open_in : closed_in)) {
                r.reason = "h outside the interval";
                return r;
            }
            if (!qy.h.base.is_algebraic_integer()) {
                r.reason = "e^h is not an algebraic integer";
                return r;
            }
            auto w = is_weak_perron(qy.h.base);
            r.member = w.weak_perron;
            r.witness = w.p;
            r.reason = w.weak_perron ? "e^h is weak Perron with exponent " + std::to_string(*w.p) : "e^h is not weak Perron";
            return r;
        }
    }
    return r;
}

// ---- searching between X and Y ----

/// Target entropy: exact (log of an algebraic base) or a rational number of nats.
struct EntropyTarget {
    std::optional<EntropyValue> exact;
    Rational nats;

    static EntropyTarget of(const EntropyValue& e) {
        EntropyTarget t;
        t.exact = e;
        return t;
    }
    static EntropyTarget in_nats(const Rational& r) {
        EntropyTarget t;
        t.nats = r;
        return t;
    }
    /// Sign of h - target.
    int compare_to(const EntropyValue& h) const { return exact ? compare(h, *exact) : compare_log(h.base, nats); }
    bool within(const EntropyValue& h, const Rational& tol) const {
        return exact ? log_distance_below(h.base, exact->base, tol) : log_within(h.base, nats, tol);
    }
    double approx() const { return exact ? exact->approx : nats.get_d(); }
};

enum class RequireClass { none, sofic, sft };

inline RequireClass parse_require(const std::string& s) {
    if (s == "none") return RequireClass::none;
    if (s == "sofic") return RequireClass::sofic;
    if (s == "sft") return RequireClass::sft;
    throw ParseError("require must be none, sofic or sft");
}

struct BetweenOptions {
    int max_word_length = 8;
    int max_set_size = 2;
    long max_sets = 200000;
};

struct BetweenResult {
    ShiftSpace Z;
    std::vector<Word> forbidden;
    EntropyValue h;
    std::optional<int> step;  // for require = sft
    long sets_tried = 0;
};

namespace detail {

inline bool has_factor(const Word& w, const Word& u) {
    if (u.size() > w.size()) return false;
    for (std::size_t i = 0; i + u.size() <= w.size(); ++i)
        if (std::equal(u.begin(), u.end(), w.begin() + i)) return true;
    return false;
}

/// Smallest k with Z k-step, searched up to s^2 for s presentation states.
inline std::optional<int> sft_step(const ShiftSpace& z) {
    if (z.is_finite_type()) return std::max(z.step(), 0);
    SyncOracle o(z);
    const int s = o.presentation().num_states();
    return o.min_step(std::min(64, std::max(1, s * s)));
}

}  // namespace detail

/// Restrictions Z = forbid(Y, F), F disjoint from B(X), tried in order of (|F|, then words by
/// (length, lexicographic)); returns the first irreducible Z with |h(Z) - target| < tol in the required class.
inline BetweenResult subshift_between_search(const ShiftSpace& x, const ShiftSpace& y, const EntropyTarget& target,
                                             const Rational& tol, RequireClass req, const BetweenOptions& opt = {}) {
    if (tol <= 0) throw PreconditionError("tol must be positive");
    Word wit;
    if (!language_contained(x, y, &wit)) throw PreconditionError("X is not contained in Y: [" + join_word(wit) + "]");
    const EntropyValue hX = entropy(x), hY = entropy(y);
    if (target.compare_to(hX) > 0 || target.compare_to(hY) < 0)
        throw PreconditionError("target outside [h(X), h(Y)]");

    std::vector<Word> cand;
    for (int len = 1; len <= opt.max_word_length; ++len)
        for (const auto& w : words(y, len))
            if (!contains_word(x, w)) cand.push_back(w);

    BetweenResult r;
    auto accept = [&](const std::vector<Word>& F) -> bool {
        if (++r.sets_tried > opt.max_sets) throw NotFound("set budget exhausted after " + std::to_string(opt.max_sets));
        ShiftSpace z = F.empty() ? y : forbid(y, F);
        if (essential_presentation(z).edges.empty()) return false;
        if (std::fabs(approx_entropy(z) - target.approx()) > tol.get_d() + 1e-3) return false;
        EntropyValue h = entropy(z);
        if (!target.within(h, tol)) return false;
        if (!structure(z).irreducible) return false;
        std::optional<int> k;
        if (req == RequireClass::sft) {
            k = detail::sft_step(z);
            if (!k) return false;
        }
        r.Z = z;
        r.forbidden = F;
        r.h = h;
        r.step = k;
        return true;
    };
    std::vector<int> pick;
    std::function<bool(std::size_t, int)> go = [&](std::size_t from, int left) -> bool {
        if (left == 0) {
            std::vector<Word> F;
            for (int i : pick) F.push_back(cand[i]);
            return accept(F);
        }
        for (std::size_t i = from; i < cand.size(); ++i) {
            bool redundant = false;
            for (int j : pick) redundant = redundant || detail::has_factor(cand[i], cand[j]);
            if (redundant) continue;
            pick.push_back(static_cast<int>(i));
            if (go(i + 1, left - 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    for (int size = 0; size <= opt.max_set_size; ++size)
        if (go(0, size)) return r;
    throw NotFound("no restriction within tolerance: " + std::to_string(r.sets_tried) + " sets, words of length <= " +
                   std::to_string(opt.max_word_length) + ", at most " + std::to_string(opt.max_set_size) + " words");
}

// ---- census sandwich ----

struct SandwichResult {
    ShiftSpace W;
    Matrix realization;           // matrix before any blow-up
    std::vector<std::string> steps;
    EmbedPreconditionReport lower, upper;  // X into W, W into Y
};

/// Nonnegative companion matrix of the minimal polynomial of e^h when it has the form
/// x^d - a_1 x^(d-1) - ... - a_d with all a_i >= 0.
inline Matrix dominant_companion(const EntropyValue& h) {
    const AlgebraicReal& b = h.base;
    if (!b.is_algebraic_integer() || !detail::perron_safe(b))
        throw RealizationUnavailable("e^h is not a Perron number");
    const auto& c = b.poly().coeffs();  // monic, low to high
    const int d = b.degree();
    Matrix A = zero_matrix(d);
    for (int i = 1; i <= d; ++i) {
        BigInt a = -c[d - i];
        if (a < 0) throw RealizationUnavailable("minimal polynomial of e^h is not of dominant companion form");
        if (!a.fits_slong_p()) throw RealizationUnavailable("companion coefficient too large");
        A[0][i - 1] = a.get_si();
    }
    for (int i = 1; i < d; ++i) A[i][i - 1] = 1;
    return A;
}

/// Mixing SFT W with h(W) = target and q_k(X) <= q_k(W) <= q_k(Y) for all k, built from a realizing
/// matrix by repeated blow-ups of low-period orbits. Both embedding hypotheses are certified.
inline SandwichResult census_sandwich(const ShiftSpace& x, const ShiftSpace& y, const EntropyValue& target,
                                      std::optional<Matrix> realization = std::nullopt, int max_rounds = 32) {
    if (!y.is_finite_type() || !structure(y).mixing) throw NotMixingTarget("target must be a mixing shift of finite type");
    if (compare(entropy(x), target) >= 0 || compare(target, entropy(y)) >= 0)
        throw PreconditionError("need h(X) < target < h(Y)");
    SandwichResult res;
    res.realization = realization ? *realization : dominant_companion(target);
    ShiftSpace w = ShiftSpace::edge_shift(res.realization);
    if (compare(entropy(w), target) != 0) throw RealizationUnavailable("realizing matrix has the wrong Perron root");
    if (!structure(w).mixing) throw RealizationUnavailable("realizing matrix is not primitive");
    res.steps.push_back("realization of size " + std::to_string(res.realization.size()));

    for (int round = 0;; ++round) {
        if (round >= max_rounds) throw IterationCap("census sandwich rounds exhausted");
        const long H = std::max(crossover_bound(x, w), crossover_bound(w, y));
        auto qx = q_census(x, static_cast<int>(H)), qw = q_census(w, static_cast<int>(H)),
             qy = q_census(y, static_cast<int>(H));
        std::optional<BlowupSpec> spec;
        for (int k = 1; k <= H && !spec; ++k) {
            if (qx.at(k) > qw.at(k)) {
                // add orbits of period k by blowing up an orbit of period d | k, which stays in place
                for (int d = 1; d <= k && !spec; ++d) {
                    if (k % d || qw.at(d) == 0) continue;
                    auto orbs = periodic_orbits(w, d);
                    if (orbs.empty()) continue;
                    BigInt need = qx.at(k) - qw.at(k);
                    long c = BigInt((need + k - 1) / k).get_si();
                    std::vector<int> M{1};
                    for (long i = 0; i < c; ++i) M.push_back(k / d);
                    spec = BlowupSpec{orbs.front(), M};
                    res.steps.push_back("period " + std::to_string(k) + ": add " + std::to_string(c) + " orbit(s) via [" +
                                        join_word(orbs.front()) + "]");
                }
                if (!spec) throw RealizationUnavailable("no orbit of a divisor period to blow up for period " +
                                                        std::to_string(k));
            } else if (qw.at(k) > qy.at(k)) {
                auto orbs = periodic_orbits(w, k);
                if (orbs.empty() || qw.at(k) - k < qx.at(k))
                    throw RealizationUnavailable("cannot remove period-" + std::to_string(k) + " points");
                for (int m = 2; m * k <= H && !spec; ++m)
                    if (qw.at(m * k) + m * k <= qy.at(m * k)) {
                        spec = BlowupSpec{orbs.front(), {m}};
                        res.steps.push_back("period " + std::to_string(k) + ": move [" + join_word(orbs.front()) +
                                            "] to period " + std::to_string(m * k));
                    }
                if (!spec) throw RealizationUnavailable("no room to move period-" + std::to_string(k) + " points");
            }
        }
        if (!spec) break;
        w = blow_up(w, *spec);
    }
    res.W = w;
    res.lower = embedding_preconditions(x, w);
    res.upper = embedding_preconditions(w, y);
    if (!res.lower.embeds() || !res.upper.embeds()) throw CertificateFailure("census sandwich certificates fail");
    return res;
}

}  // namespace symdyn

#endif
