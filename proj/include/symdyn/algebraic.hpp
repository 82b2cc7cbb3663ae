#ifndef SYMDYN_ALGEBRAIC_HPP
#define SYMDYN_ALGEBRAIC_HPP

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <optional>

#include "symdyn/errors.hpp"
#include "symdyn/factor.hpp"
#include "symdyn/matrix.hpp"

namespace symdyn {

/// Power sums p_1..p_N of the roots of f (with multiplicity), exact rationals.
inline std::vector<Rational> power_sums(const IntPolynomial& f, int N) {
    const int n = f.degree();
    // monic normalization a_k = c_{n-k} / c_n
    std::vector<Rational> a(n + 1);
    for (int k = 0; k <= n; ++k) a[k] = Rational(f.coeffs()[n - k], f.leading());
    std::vector<Rational> p(N + 1, 0);
    for (int m = 1; m <= N; ++m) {
        Rational s = 0;
        for (int i = 1; i <= std::min(m - 1, n); ++i) s += a[i] * p[m - i];
        if (m <= n) s += a[m] * m;
        p[m] = -s;
    }
    return p;
}

/// Monic rational polynomial with the given power sums p_1..p_n, scaled to a primitive integer one.
inline IntPolynomial from_power_sums(const std::vector<Rational>& p, int n) {
    std::vector<Rational> e(n + 1, 0);
    e[0] = 1;
    for (int k = 1; k <= n; ++k) {
        Rational s = 0;
        for (int i = 1; i <= k; ++i) s += (i % 2 == 1 ? 1 : -1) * e[k - i] * p[i];
        e[k] = s / k;
    }
    // x^n - e1 x^{n-1} + e2 x^{n-2} ...
    BigInt den = 1;
    for (auto& v : e) {
        v.canonicalize();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    }
    std::vector<BigInt> c(n + 1);
    for (int k = 0; k <= n; ++k) {
        Rational v = e[k] * den * (k % 2 == 0 ? 1 : -1);
        v.canonicalize();
        c[n - k] = v.get_num();
    }
    return IntPolynomial(std::move(c)).primitive_part();
}

/// Polynomial whose roots are mu^k over the roots mu of f.
inline IntPolynomial root_power_poly(const IntPolynomial& f, int k) {
    const int n = f.degree();
    auto p = power_sums(f, n * k);
    std::vector<Rational> q(n + 1, 0);
    for (int m = 1; m <= n; ++m) q[m] = p[m * k];
    return from_power_sums(q, n);
}

/// Polynomial whose roots are the products mu_i * mu_j over ordered pairs of roots of f.
inline IntPolynomial pair_product_poly(const IntPolynomial& f) {
    const int n = f.degree();
    auto p = power_sums(f, n * n);
    std::vector<Rational> q(n * n + 1, 0);
    for (int m = 1; m <= n * n; ++m) q[m] = p[m] * p[m];
    return from_power_sums(q, n * n);
}

/// Exact real algebraic number: minimal polynomial plus an isolating rational interval.
/// The interval is a single point for rational numbers, otherwise the polynomial changes sign on it.
class AlgebraicReal {
public:
    AlgebraicReal() : poly_{0, 1}, iv_{0, 0} {}

    static AlgebraicReal rational(const Rational& r) {
        Rational c = r;
        c.canonicalize();
        AlgebraicReal a;
        a.poly_ = IntPolynomial(std::vector<BigInt>{-c.get_num(), c.get_den()});
        a.iv_ = {c, c};
        return a;
    }

    /// The unique root of square-free part of p inside [lo, hi]; checked.
    static AlgebraicReal root_of(const IntPolynomial& p, Interval iv) {
        if (p.degree() <= 0) throw PreconditionError("root_of: constant polynomial");
        if (iv.lo > iv.hi) throw PreconditionError("root_of: empty interval");
        IntPolynomial sq = squarefree_part(p);
        if (iv.lo == iv.hi) {
            if (sq.sign_at(iv.lo) != 0) throw PreconditionError("root_of: point is not a root");
            return rational(iv.lo);
        }
        int n = count_roots(sq, iv.lo, iv.hi) + (sq.sign_at(iv.lo) == 0 ? 1 : 0);
        if (n != 1) throw PreconditionError("root_of: interval does not isolate exactly one root");
        if (sq.sign_at(iv.lo) == 0) return rational(iv.lo);
        if (sq.sign_at(iv.hi) == 0) return rational(iv.hi);
        IntPolynomial f = factor_with_root(sq, iv);
        return from_minimal(f, iv);
    }

    /// Trusted constructor: f irreducible primitive, iv a sign-change interval (or point root).
    static AlgebraicReal from_minimal(const IntPolynomial& f, Interval iv) {
        if (f.degree() == 1) {
            Rational r(-f.coeffs()[0], f.coeffs()[1]);
            r.canonicalize();
            return rational(r);
        }
        AlgebraicReal a;
        a.poly_ = f.primitive_part();
        a.iv_ = iv;
        return a;
    }

    const IntPolynomial& poly() const noexcept { return poly_; }
    const Interval& interval() const noexcept { return iv_; }
    int degree() const noexcept { return poly_.degree(); }
    bool is_rational() const noexcept { return iv_.lo == iv_.hi; }
    bool is_algebraic_integer() const { return poly_.leading() == 1; }

    /// A copy whose interval has width at most w.
    AlgebraicReal refined(const Rational& w) const {
        AlgebraicReal a = *this;
        a.iv_ = refine_to(poly_, iv_, w);
        return a;
    }

    AlgebraicReal bisected() const {
        AlgebraicReal a = *this;
        a.iv_ = bisect_once(poly_, iv_);
        return a;
    }

    double approx() const {
        if (is_rational()) return iv_.lo.get_d();
        AlgebraicReal a = refined(Rational(1, BigInt(1) << 60));
        Rational mid = (a.iv_.lo + a.iv_.hi) / 2;
        return mid.get_d();
    }

    /// Sign of (this - r).
    int compare_rational(const Rational& r) const {
        AlgebraicReal a = *this;
        while (true) {
            if (a.iv_.lo > r) return 1;
            if (a.iv_.hi < r) return -1;
            if (a.is_rational()) return 0;  // lo == hi == r
            if (a.poly_.degree() >= 2 && a.iv_.lo == r) return 1;  // interior root of a sign-change interval
            if (a.poly_.degree() >= 2 && a.iv_.hi == r) return -1;
            a = a.bisected();
        }
    }

    friend bool operator==(const AlgebraicReal& a, const AlgebraicReal& b);

private:
    IntPolynomial poly_;
    Interval iv_;
};

/// Exact three-way comparison: -1, 0, 1.
inline int compare(const AlgebraicReal& x, const AlgebraicReal& y) {
    if (x.is_rational() && y.is_rational()) {
        int c = cmp(x.interval().lo, y.interval().lo);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (x.is_rational()) return -y.compare_rational(x.interval().lo);
    if (y.is_rational()) return x.compare_rational(y.interval().lo);
    const bool same = x.poly() == y.poly();
    AlgebraicReal a = x, b = y;
    while (true) {
        if (a.interval().hi < b.interval().lo) return -1;
        if (b.interval().hi < a.interval().lo) return 1;
        if (same) {
            Interval hull{std::min(a.interval().lo, b.interval().lo), std::max(a.interval().hi, b.interval().hi)};
            if (monotone_on(a.poly(), hull)) return 0;
        }
        a = a.bisected();
        b = b.bisected();
    }
}

inline bool operator==(const AlgebraicReal& a, const AlgebraicReal& b) { return compare(a, b) == 0; }

/// x^k for x > 0.
inline AlgebraicReal power(const AlgebraicReal& x, int k) {
    if (k == 1) return x;
    if (x.is_rational()) {
        Rational r = 1;
        for (int i = 0; i < k; ++i) r *= x.interval().lo;
        return AlgebraicReal::rational(r);
    }
    if (x.compare_rational(0) <= 0) throw PreconditionError("power: base must be positive");
    IntPolynomial g = squarefree_part(root_power_poly(x.poly(), k));
    auto chain = sturm_chain(g);
    AlgebraicReal a = x;
    while (a.interval().lo <= 0) a = a.bisected();
    while (true) {
        Rational lo = 1, hi = 1;
        for (int i = 0; i < k; ++i) {
            lo *= a.interval().lo;
            hi *= a.interval().hi;
        }
        if (g.sign_at(lo) != 0 && g.sign_at(hi) != 0 &&
            sign_variations(chain, lo) - sign_variations(chain, hi) == 1)
            return AlgebraicReal::from_minimal(factor_with_root(g, {lo, hi}), {lo, hi});
        a = a.bisected();
    }
}

// ---- logarithms with directed rounding ----

namespace detail {

struct Mpfr {
    mpfr_t v;
    explicit Mpfr(mpfr_prec_t prec = 256) { mpfr_init2(v, prec); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

/// log(r) rounded in direction rnd, r > 0.
inline void log_rational(mpfr_t out, const Rational& r, mpfr_rnd_t rnd) {
    Mpfr t(mpfr_get_prec(out) + 16);
    mpfr_set_q(t.v, r.get_mpq_t(), rnd);
    mpfr_log(out, t.v, rnd);
}

}  // namespace detail

/// Certified decision of |log a - log b| < eps for a, b > 0 and eps > 0.
inline bool log_distance_below(const AlgebraicReal& a0, const AlgebraicReal& b0, const Rational& eps) {
    AlgebraicReal a = a0, b = b0;
    detail::Mpfr dlo, dhi, t, e_dn, e_up;
    mpfr_set_q(e_dn.v, eps.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e_up.v, eps.get_mpq_t(), MPFR_RNDU);
    for (int iter = 0; iter < 4000; ++iter) {
        if (a.interval().lo > 0 && b.interval().lo > 0) {
            // D in [log a.lo - log b.hi, log a.hi - log b.lo]
            detail::log_rational(dlo.v, a.interval().lo, MPFR_RNDD);
            detail::log_rational(t.v, b.interval().hi, MPFR_RNDU);
            mpfr_sub(dlo.v, dlo.v, t.v, MPFR_RNDD);
            detail::log_rational(dhi.v, a.interval().hi, MPFR_RNDU);
            detail::log_rational(t.v, b.interval().lo, MPFR_RNDD);
            mpfr_sub(dhi.v, dhi.v, t.v, MPFR_RNDU);
            mpfr_neg(t.v, e_dn.v, MPFR_RNDU);
            if (mpfr_less_p(dhi.v, e_dn.v) && mpfr_greater_p(dlo.v, t.v)) return true;
            mpfr_neg(t.v, e_up.v, MPFR_RNDD);
            if (mpfr_greaterequal_p(dlo.v, e_up.v) || mpfr_lessequal_p(dhi.v, t.v)) return false;
        }
        if (!a.is_rational()) a = a.bisected();
        if (!b.is_rational()) b = b.bisected();
    }
    throw Undecided("log distance undecided within refinement budget");
}

/// Certified decision of log a < log b + eps, i.e. a < b * e^eps (eps may be 0 or negative).
inline bool log_less_than(const AlgebraicReal& a0, const AlgebraicReal& b0, const Rational& eps) {
    if (eps == 0) return compare(a0, b0) < 0;
    AlgebraicReal a = a0, b = b0;
    detail::Mpfr dlo, dhi, t, e_dn, e_up;
    mpfr_set_q(e_dn.v, eps.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e_up.v, eps.get_mpq_t(), MPFR_RNDU);
    for (int iter = 0; iter < 4000; ++iter) {
        if (a.interval().lo > 0 && b.interval().lo > 0) {
            detail::log_rational(dlo.v, a.interval().lo, MPFR_RNDD);
            detail::log_rational(t.v, b.interval().hi, MPFR_RNDU);
            mpfr_sub(dlo.v, dlo.v, t.v, MPFR_RNDD);
            detail::log_rational(dhi.v, a.interval().hi, MPFR_RNDU);
            detail::log_rational(t.v, b.interval().lo, MPFR_RNDD);
            mpfr_sub(dhi.v, dhi.v, t.v, MPFR_RNDU);
            if (mpfr_less_p(dhi.v, e_dn.v)) return true;
            if (mpfr_greaterequal_p(dlo.v, e_up.v)) return false;
        }
        if (!a.is_rational()) a = a.bisected();
        if (!b.is_rational()) b = b.bisected();
    }
    throw Undecided("log comparison undecided within refinement budget");
}

/// Sign of log a - t for a > 0 and rational t.
inline int compare_log(const AlgebraicReal& a0, const Rational& t) {
    if (a0.compare_rational(0) <= 0) throw PreconditionError("compare_log: need a > 0");
    if (t == 0) return a0.compare_rational(1);
    AlgebraicReal a = a0;
    detail::Mpfr lo, hi, tdn, tup;
    mpfr_set_q(tdn.v, t.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(tup.v, t.get_mpq_t(), MPFR_RNDU);
    for (int iter = 0; iter < 4000; ++iter) {
        if (a.interval().lo > 0) {
            detail::log_rational(lo.v, a.interval().lo, MPFR_RNDD);
            detail::log_rational(hi.v, a.interval().hi, MPFR_RNDU);
            if (mpfr_greater_p(lo.v, tup.v)) return 1;
            if (mpfr_less_p(hi.v, tdn.v)) return -1;
        }
        if (a.is_rational()) break;
        a = a.bisected();
    }
    throw Undecided("log comparison with a rational undecided");
}

/// Certified decision of |log a - t| < tol.
inline bool log_within(const AlgebraicReal& a, const Rational& t, const Rational& tol) {
    return compare_log(a, t - tol) > 0 && compare_log(a, t + tol) < 0;
}

/// Natural log enclosure as doubles (display and diagnostics only).
inline std::pair<double, double> log_bounds(const AlgebraicReal& a, int bits = 60) {
    AlgebraicReal r = a.refined(Rational(1, BigInt(1) << bits));
    detail::Mpfr lo, hi;
    detail::log_rational(lo.v, r.interval().lo, MPFR_RNDD);
    detail::log_rational(hi.v, r.interval().hi, MPFR_RNDU);
    return {mpfr_get_d(lo.v, MPFR_RNDD), mpfr_get_d(hi.v, MPFR_RNDU)};
}

/// e^h carried exactly as its base; approx is log(base) for display.
struct EntropyValue {
    AlgebraicReal base;
    double approx = 0;

    static EntropyValue of_base(const AlgebraicReal& b) {
        EntropyValue e;
        e.base = b;
        e.approx = std::log(b.approx());
        return e;
    }
    static EntropyValue zero() { return of_base(AlgebraicReal::rational(1)); }
};

inline int compare(const EntropyValue& a, const EntropyValue& b) { return compare(a.base, b.base); }

/// exp(r * log n) = n^r as an exact algebraic number (r >= 0 rational, n >= 1 integer).
inline EntropyValue scaled_log(const Rational& r0, const BigInt& n) {
    Rational r = r0;
    r.canonicalize();
    if (r < 0 || n < 1) throw PreconditionError("scaled_log: need r >= 0, n >= 1");
    if (r == 0 || n == 1) return EntropyValue::zero();
    unsigned long q = r.get_den().get_ui();
    BigInt c;
    mpz_pow_ui(c.get_mpz_t(), n.get_mpz_t(), r.get_num().get_ui());
    IntPolynomial p = IntPolynomial::monomial(q) - IntPolynomial(std::vector<BigInt>{c});
    Rational hi = c > 1 ? Rational(c) : Rational(1);
    return EntropyValue::of_base(AlgebraicReal::root_of(p, {Rational(1), hi}));
}

// ---- Perron roots ----

namespace detail {

/// Largest real root of an irreducible f within [lo, hi], or nullopt if none.
inline std::optional<AlgebraicReal> largest_root_in(const IntPolynomial& f, Rational lo, Rational hi) {
    if (f.degree() == 1) {
        Rational r(-f.coeffs()[0], f.coeffs()[1]);
        r.canonicalize();
        if (r >= lo && r <= hi) return AlgebraicReal::rational(r);
        return std::nullopt;
    }
    auto chain = sturm_chain(f);
    if (sign_variations(chain, lo) - sign_variations(chain, hi) == 0) return std::nullopt;
    while (sign_variations(chain, lo) - sign_variations(chain, hi) > 1) {
        Rational mid = (lo + hi) / 2;
        if (sign_variations(chain, mid) - sign_variations(chain, hi) >= 1) lo = mid;
        else hi = mid;
    }
    return AlgebraicReal::from_minimal(f, {lo, hi});
}

/// Spectral radius of an irreducible nonnegative matrix.
inline AlgebraicReal component_perron_root(const Matrix& B) {
    const std::size_t n = B.size();
    // Collatz-Wielandt: for positive v, min (Bv)_i/v_i <= lambda <= max (Bv)_i/v_i.
    std::vector<long double> v(n, 1.0L), w(n);
    for (int it = 0; it < 5000; ++it) {
        long double norm = 0;
        for (std::size_t i = 0; i < n; ++i) {
            long double s = v[i];
            for (std::size_t j = 0; j < n; ++j) s += static_cast<long double>(B[i][j]) * v[j];
            w[i] = s;
            norm = std::max(norm, s);
        }
        long double diff = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= norm;
            diff = std::max(diff, std::fabs(w[i] - v[i]));
        }
        v.swap(w);
        if (diff < 1e-17L) break;
    }
    std::vector<Rational> vr(n);
    for (std::size_t i = 0; i < n; ++i) vr[i] = Rational(static_cast<double>(v[i]));
    Rational lo, hi;
    for (std::size_t i = 0; i < n; ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (B[i][j]) s += vr[j] * static_cast<long>(B[i][j]);
        Rational ratio = s / vr[i];
        if (i == 0 || ratio < lo) lo = ratio;
        if (i == 0 || ratio > hi) hi = ratio;
    }
    if (lo == hi) return AlgebraicReal::rational(lo);
    IntPolynomial cp = char_poly(B);
    std::optional<AlgebraicReal> best;
    for (const auto& [f, mult] : factor(cp)) {
        auto r = largest_root_in(f, lo, hi);
        if (!r) continue;
        if (!best || compare(*r, *best) > 0) best = r;
    }
    if (!best) throw CertificateFailure("Perron root not found in Collatz-Wielandt bracket");
    return *best;
}

}  // namespace detail

/// Spectral radius of a nonnegative matrix (maximum over irreducible components).
inline AlgebraicReal perron_root(const Matrix& A) {
    auto adj = adjacency_lists(A);
    std::optional<AlgebraicReal> best;
    for (const auto& comp : strongly_connected_components(adj)) {
        if (!component_has_cycle(adj, comp)) continue;
        Matrix B = zero_matrix(comp.size());
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = 0; j < comp.size(); ++j) B[i][j] = A[comp[i]][comp[j]];
        AlgebraicReal r = detail::component_perron_root(B);
        if (!best || compare(r, *best) > 0) best = r;
    }
    if (!best) throw ZeroMatrix("matrix has spectral radius 0");
    return *best;
}

// ---- Perron / weak Perron decisions ----

namespace detail {

using cld = std::complex<long double>;

/// Aberth-Ehrlich approximations of all roots, with inclusion radii.
inline void approximate_roots(const IntPolynomial& f, std::vector<cld>& z, std::vector<long double>& rad) {
    const int n = f.degree();
    std::vector<long double> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(f.coeffs()[i].get_d());
    auto eval = [&](cld x, cld& d) {
        cld p = c[n];
        d = 0;
        for (int i = n - 1; i >= 0; --i) {
            d = d * x + p;
            p = p * x + c[i];
        }
        return p;
    };
    long double bound = 0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i] / c[n]));
    bound += 1;
    z.resize(n);
    for (int i = 0; i < n; ++i)
        z[i] = std::polar(bound * 0.7L, static_cast<long double>(2 * M_PI * i / n + 0.4));
    for (int it = 0; it < 2000; ++it) {
        long double move = 0;
        for (int i = 0; i < n; ++i) {
            cld d;
            cld p = eval(z[i], d);
            if (std::abs(p) == 0) continue;
            cld ratio = p / d;
            cld s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0L / (z[i] - z[j]);
            cld step = ratio / (1.0L - ratio * s);
            z[i] -= step;
            move = std::max(move, std::abs(step) / (1 + std::abs(z[i])));
        }
        if (move < 1e-19L) break;
    }
    rad.resize(n);
    for (int i = 0; i < n; ++i) {
        cld d;
        cld p = eval(z[i], d);
        cld prod = c[n];
        for (int j = 0; j < n; ++j)
            if (j != i) prod *= (z[i] - z[j]);
        long double r = n * std::abs(p) / std::abs(prod);
        // floating evaluation error allowance
        rad[i] = r + 1e-12L * (1 + std::abs(z[i]));
    }
}

/// Multiplicity of the irreducible h as a factor of g.
inline int factor_multiplicity(IntPolynomial g, const IntPolynomial& h) {
    int m = 0;
    IntPolynomial q;
    while (!g.is_zero() && divide_exact(g, h, q)) {
        g = q;
        ++m;
    }
    return m;
}

/// Whether some conjugate mu != x has |mu| == |x| (exact, via pair products).
inline bool has_equal_modulus_conjugate(const AlgebraicReal& x) {
    if (x.degree() > 24) throw Undecided("equal-modulus test limited to degree 24");
    IntPolynomial R = pair_product_poly(x.poly());
    AlgebraicReal x2 = power(x, 2);
    return factor_multiplicity(R, x2.poly()) >= 2;
}

struct ConjugateScan {
    bool dominated = true;        // all other conjugates certainly smaller in modulus
    bool exceeded = false;        // some conjugate certainly larger
    std::vector<cld> ambiguous;   // conjugates with modulus not separated from x
};

inline ConjugateScan scan_conjugates(const AlgebraicReal& x) {
    ConjugateScan s;
    std::vector<cld> z;
    std::vector<long double> rad;
    approximate_roots(x.poly(), z, rad);
    AlgebraicReal xr = x.refined(Rational(1, BigInt(1) << 50));
    long double xlo = xr.interval().lo.get_d(), xhi = xr.interval().hi.get_d();
    long double xv = (xlo + xhi) / 2;
    // the approximation closest to x is x itself
    std::size_t self = 0;
    for (std::size_t i = 1; i < z.size(); ++i)
        if (std::abs(z[i] - cld(xv, 0)) < std::abs(z[self] - cld(xv, 0))) self = i;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i == self) continue;
        long double m = std::abs(z[i]);
        if (m + rad[i] < xlo * (1 - 1e-18L)) continue;
        s.dominated = false;
        if (m - rad[i] > xhi * (1 + 1e-18L)) s.exceeded = true;
        else s.ambiguous.push_back(z[i]);
    }
    return s;
}

}  // namespace detail

/// Perron number test: algebraic integer strictly dominating its other conjugates.
inline bool is_perron(const AlgebraicReal& x) {
    if (!x.is_algebraic_integer()) throw NotAlgebraicInteger("minimal polynomial is not monic");
    if (x.compare_rational(0) <= 0) return false;
    if (x.degree() == 1) return true;
    auto s = detail::scan_conjugates(x);
    if (s.dominated) return true;
    if (s.exceeded) return false;
    if (detail::has_equal_modulus_conjugate(x)) return false;
    throw Undecided("conjugate modulus too close to decide numerically");
}

struct WeakPerronResult {
    bool weak_perron = false;
    std::optional<long> p;
};

/// Smallest p with x^p Perron, derived from the orders of x's equal-modulus conjugate ratios
/// and confirmed exactly; bound P_max = lcm{k : phi(k) <= d^2}.
inline WeakPerronResult is_weak_perron(const AlgebraicReal& x) {
    if (!x.is_algebraic_integer()) throw NotAlgebraicInteger("minimal polynomial is not monic");
    if (is_perron(x)) return {true, 1};
    auto s = detail::scan_conjugates(x);
    if (s.exceeded) return {false, std::nullopt};
    const long d = x.degree();
    const long phi_cap = d * d;
    long p = 1;
    for (const auto& mu : s.ambiguous) {
        long double turns = std::arg(mu) / (2 * M_PI);
        long found = 0;
        for (long k = 1; k <= 2 * phi_cap * phi_cap + 2 && !found; ++k) {
            if (detail::euler_phi(k) > phi_cap) continue;
            long double t = turns * k;
            if (std::fabs(t - std::round(t)) < 1e-9L) found = k;
        }
        if (!found) throw Undecided("equal-modulus conjugate is not a recognisable root-of-unity multiple");
        p = std::lcm(p, found);
    }
    // smallest divisor of p that works, confirmed exactly
    for (long q = 1; q <= p; ++q) {
        if (p % q) continue;
        if (is_perron(power(x, static_cast<int>(q)))) return {true, q};
    }
    throw Undecided("weak Perron exponent not confirmed");
}

}  // namespace symdyn

#endif
