#ifndef SYMDYN_DYNAMICS_HPP
#define SYMDYN_DYNAMICS_HPP

#include "symdyn/algebraic.hpp"
#include "symdyn/shift.hpp"

namespace symdyn {

struct StructureFacts {
    bool irreducible = false;
    bool mixing = false;
    long period = 1;
    std::string nonwandering_note;
};

namespace detail {

inline long presentation_period(const Graph& g) {
    auto adj = g.successor_lists();
    long p = 0;
    for (const auto& comp : strongly_connected_components(adj))
        if (component_has_cycle(adj, comp)) p = std::gcd(p, component_period(adj, comp));
    return p == 0 ? 1 : p;
}

/// Graph used for counting and entropy: one-to-one for finite type, right-resolving otherwise.
inline Graph counting_presentation(const ShiftSpace& x) {
    Graph g = essential_presentation(x);
    return x.is_finite_type() ? g : determinize(g);
}

}  // namespace detail

/// Irreducibility, period and mixing. For sofic shifts the period is that of the minimal presentation
/// of the irreducible component carrying the whole language.
inline StructureFacts structure(const ShiftSpace& x) {
    StructureFacts f;
    Graph g = detail::counting_presentation(x);
    auto adj = g.successor_lists();
    auto comps = strongly_connected_components(adj);
    if (x.is_finite_type()) {
        f.irreducible = comps.size() == 1;
        f.period = detail::presentation_period(g);
    } else {
        f.period = detail::presentation_period(g);
        for (const auto& comp : comps) {
            if (!component_has_cycle(adj, comp)) continue;
            Graph sub = induced(g, comp);
            if (language_equal(sub, g)) {
                f.irreducible = true;
                f.period = detail::presentation_period(minimize(sub));
                break;
            }
        }
    }
    f.mixing = f.irreducible && f.period == 1;
    int cyclic = 0;
    for (const auto& comp : comps)
        if (component_has_cycle(adj, comp)) ++cyclic;
    f.nonwandering_note = std::to_string(cyclic) + " irreducible component(s) in the presentation";
    return f;
}

inline EntropyValue entropy(const ShiftSpace& x) {
    return EntropyValue::of_base(perron_root(minimize(detail::counting_presentation(x)).adjacency()));
}

/// Floating estimate of the entropy of the edge shift of g by power iteration on A + I.
/// Steers searches only; nothing is certified from it.
inline double approx_entropy(const Graph& g0) {
    Graph g = trim_graph(g0);
    if (g.edges.empty()) return -std::numeric_limits<double>::infinity();
    const std::size_t n = g.states.size();
    std::vector<double> v(n, 1.0), w(n);
    double lam = 0;
    for (int it = 0; it < 20000; ++it) {
        w = v;
        for (const auto& e : g.edges) w[e.from] += v[e.to];
        double norm = *std::max_element(w.begin(), w.end());
        for (auto& t : w) t /= norm;
        double diff = 0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::fabs(w[i] - v[i]));
        v.swap(w);
        if (std::fabs(norm - lam) < 1e-13 && diff < 1e-11) {
            lam = norm;
            break;
        }
        lam = norm;
    }
    return std::log(std::max(lam - 1, 1.0));
}

inline double approx_entropy(const ShiftSpace& x) { return approx_entropy(essential_presentation(x)); }

struct PeriodicCensus {
    int horizon = 0;
    std::vector<BigInt> q;  // q[k-1] = points of least period k

    const BigInt& at(int k) const { return q.at(k - 1); }
};

inline int mobius(int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            m = -m;
        }
    return n > 1 ? -m : m;
}

/// q_k from fixed-point counts p_k = |{x : sigma^k x = x}|.
inline PeriodicCensus census_from_fixed_counts(const std::vector<BigInt>& p) {
    PeriodicCensus c;
    c.horizon = static_cast<int>(p.size());
    for (int k = 1; k <= c.horizon; ++k) {
        BigInt s = 0;
        for (int d = 1; d <= k; ++d)
            if (k % d == 0) s += p[d - 1] * mobius(k / d);
        c.q.push_back(s);
    }
    return c;
}

/// Counts p_k for k = 1..K. Finite type: traces of the one-to-one presentation. Sofic: words w of
/// length k whose transition map in the right-resolving presentation has a cycle (exactly w^inf in X).
inline std::vector<BigInt> fixed_point_counts(const ShiftSpace& x, int K, std::size_t map_budget = 2000000) {
    if (K < 1) throw PreconditionError("census horizon must be >= 1");
    Graph g = detail::counting_presentation(x);
    if (x.is_finite_type()) return power_traces(g.adjacency(), K);
    auto delta = transition_table(g);
    const int n = g.num_states();
    using Map = std::vector<int>;
    auto has_cycle = [n](const Map& f) {
        std::vector<char> color(n, 0);
        for (int s = 0; s < n; ++s) {
            if (color[s]) continue;
            std::vector<int> path;
            int v = s;
            while (v >= 0 && !color[v]) {
                color[v] = 1;
                path.push_back(v);
                v = f[v];
            }
            if (v >= 0 && color[v] == 1) return true;
            for (int w : path) color[w] = 2;
        }
        return false;
    };
    std::map<Map, BigInt> cur;
    Map id(n);
    std::iota(id.begin(), id.end(), 0);
    cur[id] = 1;
    std::vector<BigInt> out;
    for (int k = 1; k <= K; ++k) {
        std::map<Map, BigInt> next;
        for (const auto& [f, cnt] : cur)
            for (std::size_t a = 0; a < g.alphabet.size(); ++a) {
                Map h(n, -1);
                bool any = false;
                for (int s = 0; s < n; ++s)
                    if (f[s] >= 0) {
                        h[s] = delta[f[s]][a];
                        any = any || h[s] >= 0;
                    }
                if (any) next[h] += cnt;
            }
        if (next.size() > map_budget) throw IterationCap("census exceeded transition-map budget");
        BigInt p = 0;
        for (const auto& [f, cnt] : next)
            if (has_cycle(f)) p += cnt;
        out.push_back(p);
        cur.swap(next);
    }
    return out;
}

inline PeriodicCensus q_census(const ShiftSpace& x, int K) { return census_from_fixed_counts(fixed_point_counts(x, K)); }

namespace detail {

inline BigInt ceil_rational(const Rational& r) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

/// Smallest m with A^m entrywise positive; 0 if none within the Wielandt bound.
inline int primitivity_exponent(const Matrix& A) {
    const std::size_t n = A.size();
    std::vector<std::vector<char>> P(n, std::vector<char>(n)), B(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B[i][j] = P[i][j] = A[i][j] > 0;
    const std::size_t bound = (n - 1) * (n - 1) + 1;
    for (std::size_t m = 1; m <= bound; ++m) {
        bool pos = true;
        for (const auto& row : P)
            for (char v : row) pos = pos && v;
        if (pos) return static_cast<int>(m);
        std::vector<std::vector<char>> Q(n, std::vector<char>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (P[i][l])
                    for (std::size_t j = 0; j < n; ++j)
                        if (B[l][j]) Q[i][j] = 1;
        P.swap(Q);
    }
    return 0;
}

/// Solves (rho I - A) u = 1 over Q; for rho above the spectral radius u is positive.
inline std::vector<Rational> resolvent_vector(const Matrix& A, const Rational& rho) {
    const std::size_t n = A.size();
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = (i == j ? rho : Rational(0)) - Rational(static_cast<long>(A[i][j]));
        M[i][n] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && M[piv][c] == 0) ++piv;
        if (piv == n) throw CertificateFailure("singular resolvent");
        std::swap(M[piv], M[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || M[r][c] == 0) continue;
            Rational f = M[r][c] / M[c][c];
            for (std::size_t j = c; j <= n; ++j) M[r][j] -= f * M[c][j];
        }
    }
    std::vector<Rational> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = M[i][n] / M[i][i];
    return u;
}

inline Rational rpow(const Rational& b, long e) {
    Rational r = 1;
    if (e < 0) return 1 / rpow(b, -e);
    mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(e));
    r.canonicalize();
    return r;
}

}  // namespace detail

/// K* such that q_k(X) <= q_k(Y) holds for every k > K*.
/// Upper side: q_k(X) <= p_k(X) <= C_X rho^k, where rho = lambda_X (trace bound, finite type) or a rational
/// above lambda_X with a positive resolvent supervector (sofic). Lower side, for Y with A^m > 0:
/// q_k(Y) >= d_Y lambda_Y^(k-2m) - d_Y lambda_Y^(floor(k/2)+1) / (lambda_Y - 1).
inline long crossover_bound(const ShiftSpace& x, const ShiftSpace& y) {
    if (!y.is_finite_type()) throw NotMixingTarget("target must be a mixing shift of finite type");
    StructureFacts fy = structure(y);
    if (!fy.mixing) throw NotMixingTarget("target must be a mixing shift of finite type");
    EntropyValue hx = entropy(x), hy = entropy(y);
    if (compare(hx, hy) >= 0) throw EntropyNotSeparated("h(X) must be smaller than h(Y)");
    Graph gx = detail::counting_presentation(x);
    Matrix AY = detail::counting_presentation(y).adjacency();
    const long dY = static_cast<long>(AY.size());
    const int m = detail::primitivity_exponent(AY);
    if (m == 0) throw NotMixingTarget("target adjacency is not primitive");

    // Separate the two Perron roots by rationals.
    AlgebraicReal lx = hx.base, ly = hy.base;
    while (lx.interval().hi >= ly.interval().lo) {
        lx = lx.bisected();
        ly = ly.bisected();
    }
    Rational x_hi = lx.interval().hi, y_lo = ly.interval().lo;
    Rational y_hi = ly.interval().hi;
    Rational rho, CX;
    if (x.is_finite_type()) {
        rho = x_hi;
        CX = static_cast<long>(gx.num_states());
    } else {
        rho = (x_hi + y_lo) / 2;
        auto u = detail::resolvent_vector(gx.adjacency(), rho);
        Rational sum = 0, lo = u[0];
        for (const auto& v : u) {
            if (v <= 0) throw CertificateFailure("resolvent vector not positive");
            sum += v;
            lo = std::min(lo, v);
        }
        CX = sum / lo;
    }
    const Rational ratio = rho / y_lo;
    const Rational tail = Rational(dY) * y_hi / (y_lo - 1);
    const Rational rhs = Rational(dY) / detail::rpow(y_hi, 2L * m);
    // LHS(k) = CX ratio^k + tail * y_lo^(floor(k/2) - k); nonincreasing in k.
    auto holds = [&](long k) {
        if (k < 2L * m) return false;
        Rational lhs = CX * detail::rpow(ratio, k) + tail * detail::rpow(y_lo, k / 2 - k);
        return lhs <= rhs;
    };
    long hi = 1;
    while (!holds(hi)) {
        hi *= 2;
        if (hi > (1L << 22)) throw IterationCap("crossover bound exceeds search range");
    }
    long lo = hi / 2;  // holds(lo) false or lo == 0
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        if (holds(mid)) hi = mid;
        else lo = mid;
    }
    // k = hi and k + 1 (odd/even floor) both satisfy the bound from here on
    while (!holds(hi + 1)) ++hi;
    return hi - 1;
}

}  // namespace symdyn

#endif
