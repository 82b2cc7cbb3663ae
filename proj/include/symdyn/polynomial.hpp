#ifndef SYMDYN_POLYNOMIAL_HPP
#define SYMDYN_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cassert>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace symdyn {

using BigInt = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const BigInt& v) { return v.get_str(); }

inline std::string to_string(const Rational& v) {
    Rational c = v;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parses "p/q", "p" or a finite decimal like "0.125" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational r(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
        r.canonicalize();
        return r;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    BigInt den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    if (digits.empty() || digits == "-") digits += "0";
    Rational r(BigInt(digits), den);
    r.canonicalize();
    return r;
}

/// Dense integer polynomial, coefficients in ascending degree order.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }
    IntPolynomial(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        normalize();
    }

    static IntPolynomial monomial(std::size_t degree, const BigInt& coeff = 1) {
        std::vector<BigInt> c(degree + 1, 0);
        c[degree] = coeff;
        return IntPolynomial(std::move(c));
    }

    /// Degree, or -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<BigInt>& coeffs() const noexcept { return c_; }
    BigInt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }
    const BigInt& leading() const {
        assert(!c_.empty());
        return c_.back();
    }

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const IntPolynomial& a, const IntPolynomial& b) { return !(a == b); }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPolynomial(std::move(r));
    }
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntPolynomial(std::move(r));
    }
    IntPolynomial operator-() const {
        auto r = c_;
        for (auto& v : r) v = -v;
        return IntPolynomial(std::move(r));
    }
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<BigInt> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return IntPolynomial(std::move(r));
    }
    friend IntPolynomial operator*(const BigInt& s, const IntPolynomial& a) {
        auto r = a.c_;
        for (auto& v : r) v *= s;
        return IntPolynomial(std::move(r));
    }

    IntPolynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<BigInt> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<unsigned long>(i);
        return IntPolynomial(std::move(r));
    }

    BigInt content() const {
        BigInt g = 0;
        for (const auto& v : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    /// Divides out the content and makes the leading coefficient positive.
    IntPolynomial primitive_part() const {
        if (is_zero()) return {};
        BigInt g = content();
        if (leading() < 0) g = -g;
        auto r = c_;
        for (auto& v : r) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        return IntPolynomial(std::move(r));
    }

    /// p(-x)
    IntPolynomial reflect() const {
        auto r = c_;
        for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
        return IntPolynomial(std::move(r));
    }

    /// Sign of p(num/den) for den > 0, computed on the homogenized integer form.
    int sign_at(const Rational& x) const {
        if (is_zero()) return 0;
        const BigInt& num = x.get_num();
        const BigInt& den = x.get_den();
        BigInt acc = c_.back();
        BigInt dpow = 1;
        for (std::size_t i = c_.size() - 1; i-- > 0;) {
            dpow *= den;
            acc = acc * num + c_[i] * dpow;
        }
        return sgn(acc);
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    double eval_double(double x) const {
        double acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].get_d();
        return acc;
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const IntPolynomial& p) {
        if (p.is_zero()) return os << "0";
        bool first = true;
        for (std::size_t i = p.c_.size(); i-- > 0;) {
            if (p.c_[i] == 0) continue;
            BigInt v = p.c_[i];
            if (!first) os << (v < 0 ? " - " : " + ");
            else if (v < 0) os << "-";
            BigInt a = abs(v);
            if (a != 1 || i == 0) os << a.get_str();
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<BigInt> c_;
};

/// Pseudo-division: lc(b)^(deg a - deg b + 1) * a = q*b + r.
inline std::pair<IntPolynomial, IntPolynomial> pseudo_divmod(const IntPolynomial& a, const IntPolynomial& b) {
    assert(!b.is_zero());
    if (a.degree() < b.degree()) return {IntPolynomial{}, a};
    std::vector<BigInt> r = a.coeffs();
    const int db = b.degree();
    const BigInt& lb = b.leading();
    std::vector<BigInt> q(a.degree() - db + 1, 0);
    for (int k = a.degree(); k >= db; --k) {
        for (auto& v : q) v *= lb;
        BigInt lead = r[k];
        q[k - db] += lead;
        for (int i = 0; i <= k; ++i) r[i] *= lb;
        for (int i = 0; i <= db; ++i) r[k - db + i] -= lead * b.coeffs()[i];
    }
    return {IntPolynomial(std::move(q)), IntPolynomial(std::move(r))};
}

/// Exact division over Z; returns false if b does not divide a in Z[x].
inline bool divide_exact(const IntPolynomial& a, const IntPolynomial& b, IntPolynomial& quotient) {
    assert(!b.is_zero());
    if (a.is_zero()) {
        quotient = {};
        return true;
    }
    if (a.degree() < b.degree()) return false;
    std::vector<BigInt> r = a.coeffs();
    const int db = b.degree();
    const BigInt& lb = b.leading();
    std::vector<BigInt> q(a.degree() - db + 1, 0);
    for (int k = a.degree(); k >= db; --k) {
        if (r[k] == 0) continue;
        if (!mpz_divisible_p(r[k].get_mpz_t(), lb.get_mpz_t())) return false;
        BigInt t;
        mpz_divexact(t.get_mpz_t(), r[k].get_mpz_t(), lb.get_mpz_t());
        q[k - db] = t;
        for (int i = 0; i <= db; ++i) r[k - db + i] -= t * b.coeffs()[i];
    }
    for (int i = 0; i < db; ++i)
        if (r[i] != 0) return false;
    quotient = IntPolynomial(std::move(q));
    return true;
}

inline IntPolynomial exact_quotient(const IntPolynomial& a, const IntPolynomial& b) {
    IntPolynomial q;
    [[maybe_unused]] bool ok = divide_exact(a, b, q);
    assert(ok);
    return q;
}

namespace detail {

using u64 = std::uint64_t;

inline u64 mod_pow(u64 b, u64 e, u64 p) {
    u64 r = 1;
    b %= p;
    for (; e; e >>= 1, b = b * b % p)
        if (e & 1) r = r * b % p;
    return r;
}

inline std::vector<u64> mod_reduce(const IntPolynomial& f, u64 p) {
    std::vector<u64> r;
    for (const auto& c : f.coeffs()) {
        BigInt t = c % static_cast<unsigned long>(p);
        if (t < 0) t += static_cast<unsigned long>(p);
        r.push_back(t.get_ui());
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

/// Monic gcd over Z/p (p < 2^32).
inline std::vector<u64> mod_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
    while (!b.empty()) {
        const u64 inv = mod_pow(b.back(), p - 2, p);
        while (a.size() >= b.size()) {
            const u64 f = a.back() * inv % p;
            const std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = (a[off + i] + p - f * b[i] % p) % p;
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        const u64 inv = mod_pow(a.back(), p - 2, p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

inline IntPolynomial prs_gcd(IntPolynomial a, IntPolynomial b) {
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        auto r = pseudo_divmod(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? r : r.primitive_part();
    }
    return a.primitive_part();
}

}  // namespace detail

/// Primitive gcd with positive leading coefficient. Small inputs use the primitive PRS, larger ones
/// Chinese remaindering of gcds modulo 31-bit primes, accepted only after exact trial division.
inline IntPolynomial gcd(IntPolynomial a, IntPolynomial b) {
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    a = a.primitive_part();
    b = b.primitive_part();
    if (std::min(a.degree(), b.degree()) < 12) return detail::prs_gcd(std::move(a), std::move(b));
    BigInt lc;
    mpz_gcd(lc.get_mpz_t(), a.leading().get_mpz_t(), b.leading().get_mpz_t());
    int best = -1;
    BigInt M = 1;
    std::vector<BigInt> acc;
    IntPolynomial last;
    detail::u64 p = (detail::u64(1) << 31);
    for (int round = 0; round < 4000; ++round) {
        do {
            --p;
        } while (mpz_probab_prime_p(BigInt(static_cast<unsigned long>(p)).get_mpz_t(), 25) == 0);
        BigInt bp = static_cast<unsigned long>(p);
        if (BigInt(a.leading() % bp) == 0 || BigInt(b.leading() % bp) == 0) continue;
        auto g = detail::mod_gcd(detail::mod_reduce(a, p), detail::mod_reduce(b, p), p);
        const int d = static_cast<int>(g.size()) - 1;
        if (d == 0) return IntPolynomial{1};
        if (best >= 0 && d > best) continue;
        BigInt lcp = lc % bp;
        if (lcp < 0) lcp += bp;
        const detail::u64 s = lcp.get_ui();
        if (best < 0 || d < best) {
            best = d;
            M = bp;
            acc.assign(g.size(), 0);
            for (std::size_t i = 0; i < g.size(); ++i) acc[i] = static_cast<unsigned long>(g[i] * s % p);
            last = IntPolynomial();
            continue;
        }
        // CRT: x = acc mod M, x = g*s mod p
        BigInt inv;
        BigInt Mp = M % bp;
        mpz_invert(inv.get_mpz_t(), Mp.get_mpz_t(), bp.get_mpz_t());
        for (std::size_t i = 0; i < g.size(); ++i) {
            BigInt r = static_cast<unsigned long>(g[i] * s % p);
            BigInt t = ((r - acc[i] % bp) * inv) % bp;
            if (t < 0) t += bp;
            acc[i] += M * t;
        }
        M *= bp;
        std::vector<BigInt> sym(acc.size());
        const BigInt half = M / 2;
        for (std::size_t i = 0; i < acc.size(); ++i) sym[i] = acc[i] > half ? BigInt(acc[i] - M) : acc[i];
        IntPolynomial cand = IntPolynomial(std::move(sym)).primitive_part();
        if (cand != last) {
            last = cand;
            continue;
        }
        IntPolynomial q;
        if (divide_exact(a, cand, q) && divide_exact(b, cand, q)) return cand;
    }
    return detail::prs_gcd(std::move(a), std::move(b));
}

/// Square-free part, primitive with positive leading coefficient.
inline IntPolynomial squarefree_part(const IntPolynomial& p) {
    if (p.degree() <= 0) return p.primitive_part();
    IntPolynomial g = gcd(p, p.derivative());
    if (g.degree() == 0) return p.primitive_part();
    return exact_quotient(p.primitive_part(), g).primitive_part();
}

/// Square-free decomposition: (factor, multiplicity), each factor square-free and primitive.
inline std::vector<std::pair<IntPolynomial, int>> squarefree_decomposition(const IntPolynomial& p) {
    std::vector<std::pair<IntPolynomial, int>> out;
    IntPolynomial a = p.primitive_part();
    if (a.degree() <= 0) return out;
    // a_k = gcd(a_{k-1}, a_{k-1}'), and a_{k-1}/a_k is the product of factors of multiplicity >= k.
    IntPolynomial next = gcd(a, a.derivative());
    IntPolynomial prod = exact_quotient(a, next).primitive_part();
    int k = 1;
    while (prod.degree() > 0) {
        IntPolynomial after = next.degree() > 0 ? gcd(next, next.derivative()) : IntPolynomial{1};
        IntPolynomial prod_next =
            next.degree() > 0 ? exact_quotient(next, after).primitive_part() : IntPolynomial{1};
        IntPolynomial layer = exact_quotient(prod, prod_next).primitive_part();
        if (layer.degree() > 0) out.emplace_back(layer, k);
        prod = prod_next;
        next = after;
        ++k;
    }
    return out;
}

/// Closed rational interval.
struct Interval {
    Rational lo, hi;
};

/// Enclosure of p over [lo, hi] by interval Horner evaluation.
inline Interval eval_range(const IntPolynomial& p, const Interval& x) {
    Interval acc{0, 0};
    const auto& c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        Rational a = acc.lo * x.lo, b = acc.lo * x.hi, d = acc.hi * x.lo, e = acc.hi * x.hi;
        acc.lo = std::min({a, b, d, e}) + c[i];
        acc.hi = std::max({a, b, d, e}) + c[i];
    }
    return acc;
}

/// True when p is certainly strictly monotone on x (derivative enclosure excludes zero).
inline bool monotone_on(const IntPolynomial& p, const Interval& x) {
    Interval r = eval_range(p.derivative(), x);
    return r.lo > 0 || r.hi < 0;
}

/// Sturm chain of p (p, p', negated pseudo-remainders, kept primitive).
inline std::vector<IntPolynomial> sturm_chain(const IntPolynomial& p) {
    std::vector<IntPolynomial> chain{p, p.derivative()};
    if (chain[1].is_zero()) {
        chain.pop_back();
        return chain;
    }
    while (true) {
        const auto& a = chain[chain.size() - 2];
        const auto& b = chain.back();
        auto r = pseudo_divmod(a, b).second;
        if (r.is_zero()) break;
        int k = a.degree() - b.degree() + 1;
        bool flip = true;  // Sturm uses -rem
        if (b.leading() < 0 && (k % 2 == 1)) flip = !flip;
        BigInt g = r.content();
        auto c = r.coeffs();
        for (auto& v : c) {
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
            if (flip) v = -v;
        }
        chain.emplace_back(std::move(c));
    }
    return chain;
}

inline int sign_variations(const std::vector<IntPolynomial>& chain, const Rational& x) {
    int count = 0, last = 0;
    for (const auto& q : chain) {
        int s = q.sign_at(x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

/// Number of distinct real roots of p in the half-open interval (lo, hi].
inline int count_roots(const IntPolynomial& p, const Rational& lo, const Rational& hi) {
    auto chain = sturm_chain(p);
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

/// Cauchy bound: every root has modulus below the returned integer.
inline BigInt root_bound(const IntPolynomial& p) {
    BigInt m = 0;
    for (int i = 0; i < p.degree(); ++i) m = std::max(m, BigInt(abs(p.coeffs()[i])));
    BigInt lc = abs(p.leading());
    BigInt q = m / lc + 2;
    return q;
}

/// Disjoint isolating intervals for the real roots of a square-free p, ascending.
/// Each interval is either a point (rational root) or open-ended with a sign change.
inline std::vector<Interval> isolate_real_roots(const IntPolynomial& p) {
    std::vector<Interval> out;
    if (p.degree() <= 0) return out;
    auto chain = sturm_chain(p);
    BigInt b = root_bound(p);
    struct Job {
        Rational lo, hi;
        int vlo, vhi;
    };
    std::vector<Job> stack{{Rational(-b), Rational(b), sign_variations(chain, Rational(-b)),
                            sign_variations(chain, Rational(b))}};
    while (!stack.empty()) {
        Job j = stack.back();
        stack.pop_back();
        int n = j.vlo - j.vhi;
        if (n == 0) continue;
        if (n == 1) {
            if (p.sign_at(j.hi) == 0) out.push_back({j.hi, j.hi});
            else out.push_back({j.lo, j.hi});
            continue;
        }
        Rational mid = (j.lo + j.hi) / 2;
        int vm = sign_variations(chain, mid);
        stack.push_back({j.lo, mid, j.vlo, vm});
        stack.push_back({mid, j.hi, vm, j.vhi});
    }
    // Roots sitting exactly on an upper end: shrink neighbours so intervals do not touch.
    for (auto& iv : out) {
        if (iv.lo == iv.hi) continue;
        if (p.sign_at(iv.lo) == 0) {
            // the root counted in (lo,hi] is not lo itself, so nudge lo upward
            Rational step = (iv.hi - iv.lo) / 2;
            while (true) {
                Rational cand = iv.lo + step;
                if (p.sign_at(cand) != 0 && count_roots(p, cand, iv.hi) == 1) {
                    iv.lo = cand;
                    break;
                }
                step /= 2;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& c) { return a.lo < c.lo; });
    return out;
}

/// Halves an isolating interval (sign change at the ends) once. Point intervals are kept.
inline Interval bisect_once(const IntPolynomial& p, const Interval& iv) {
    if (iv.lo == iv.hi) return iv;
    Rational mid = (iv.lo + iv.hi) / 2;
    int sm = p.sign_at(mid);
    if (sm == 0) return {mid, mid};
    int slo = p.sign_at(iv.lo);
    if (slo == sm) return {mid, iv.hi};
    return {iv.lo, mid};
}

/// Refines until hi - lo <= width.
inline Interval refine_to(const IntPolynomial& p, Interval iv, const Rational& width) {
    while (iv.hi - iv.lo > width) iv = bisect_once(p, iv);
    return iv;
}

}  // namespace symdyn

#endif
