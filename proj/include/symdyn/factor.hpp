#ifndef SYMDYN_FACTOR_HPP
#define SYMDYN_FACTOR_HPP

// Factorization of integer polynomials over Q: cyclotomic stripping, then
// Berlekamp-free Cantor-Zassenhaus mod p, Hensel lifting and Zassenhaus recombination.

#include <cstdint>
#include <map>
#include <random>

#include "symdyn/errors.hpp"
#include "symdyn/polynomial.hpp"

namespace symdyn {

namespace detail {

// ---- polynomials over F_p, p < 2^31 ----

using ModPoly = std::vector<std::uint64_t>;

inline void mp_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t mp_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t mp_inv(std::uint64_t a, std::uint64_t p) { return mp_pow(a, p - 2, p); }

inline ModPoly mp_from(const IntPolynomial& f, std::uint64_t p) {
    ModPoly r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        BigInt v = f.coeffs()[i] % static_cast<unsigned long>(p);
        if (v < 0) v += static_cast<unsigned long>(p);
        r[i] = v.get_ui();
    }
    mp_trim(r);
    return r;
}

inline ModPoly mp_sub(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
    ModPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    mp_trim(r);
    return r;
}

inline ModPoly mp_mul(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    mp_trim(r);
    return r;
}

inline void mp_divmod(const ModPoly& a, const ModPoly& b, std::uint64_t p, ModPoly* q, ModPoly* r) {
    ModPoly rem = a;
    const long db = static_cast<long>(b.size()) - 1;
    const std::uint64_t inv = mp_inv(b.back(), p);
    ModPoly quo(a.size() > b.size() - 1 ? a.size() - db : 0, 0);
    for (long k = static_cast<long>(rem.size()) - 1; k >= db; --k) {
        std::uint64_t c = rem[k] * inv % p;
        if (c == 0) continue;
        quo[k - db] = c;
        for (long i = 0; i <= db; ++i) rem[k - db + i] = (rem[k - db + i] + p - c * b[i] % p) % p;
    }
    mp_trim(rem);
    mp_trim(quo);
    if (q) *q = std::move(quo);
    if (r) *r = std::move(rem);
}

inline ModPoly mp_mod(const ModPoly& a, const ModPoly& b, std::uint64_t p) {
    ModPoly r;
    mp_divmod(a, b, p, nullptr, &r);
    return r;
}

inline ModPoly mp_monic(ModPoly a, std::uint64_t p) {
    if (a.empty()) return a;
    std::uint64_t inv = mp_inv(a.back(), p);
    for (auto& v : a) v = v * inv % p;
    return a;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, std::uint64_t p) {
    while (!b.empty()) {
        ModPoly r = mp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return mp_monic(a, p);
}

inline ModPoly mp_derivative(const ModPoly& a, std::uint64_t p) {
    if (a.size() <= 1) return {};
    ModPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * (i % p) % p;
    mp_trim(r);
    return r;
}

inline ModPoly mp_powmod(ModPoly base, BigInt e, const ModPoly& m, std::uint64_t p) {
    ModPoly r{1};
    base = mp_mod(base, m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mp_mod(mp_mul(r, base, p), m, p);
        e >>= 1;
        if (e > 0) base = mp_mod(mp_mul(base, base, p), m, p);
    }
    return r;
}

/// Distinct-degree then equal-degree factorization of a monic square-free f mod p.
inline std::vector<ModPoly> mp_factor(const ModPoly& f, std::uint64_t p, std::mt19937_64& rng) {
    std::vector<ModPoly> out;
    std::vector<std::pair<ModPoly, int>> ddf;
    ModPoly rest = f;
    ModPoly h{0, 1};
    for (int d = 1; 2 * d <= static_cast<int>(rest.size()) - 1; ++d) {
        h = mp_powmod(h, BigInt(static_cast<unsigned long>(p)), rest, p);
        ModPoly g = mp_gcd(rest, mp_sub(h, ModPoly{0, 1}, p), p);
        if (g.size() > 1) {
            ddf.emplace_back(g, d);
            ModPoly q;
            mp_divmod(rest, g, p, &q, nullptr);
            rest = q;
            h = mp_mod(h, rest, p);
        }
    }
    if (rest.size() > 1) ddf.emplace_back(rest, static_cast<int>(rest.size()) - 1);

    for (auto& [g, d] : ddf) {
        std::vector<ModPoly> todo{g};
        while (!todo.empty()) {
            ModPoly u = todo.back();
            todo.pop_back();
            if (static_cast<int>(u.size()) - 1 == d) {
                out.push_back(u);
                continue;
            }
            BigInt e;
            mpz_ui_pow_ui(e.get_mpz_t(), p, d);
            e = (e - 1) / 2;
            while (true) {
                ModPoly a(u.size() - 1);
                for (auto& v : a) v = rng() % p;
                mp_trim(a);
                if (a.size() <= 1) continue;
                ModPoly b = mp_powmod(a, e, u, p);
                b = mp_sub(b, ModPoly{1}, p);
                ModPoly g2 = mp_gcd(u, b, p);
                if (g2.size() > 1 && g2.size() < u.size()) {
                    ModPoly q;
                    mp_divmod(u, g2, p, &q, nullptr);
                    todo.push_back(g2);
                    todo.push_back(mp_monic(q, p));
                    break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- polynomials over Z/mZ with BigInt modulus ----

using ZmPoly = std::vector<BigInt>;

inline void zm_norm(ZmPoly& a, const BigInt& m) {
    for (auto& v : a) {
        v %= m;
        if (v < 0) v += m;
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ZmPoly zm_add(const ZmPoly& a, const ZmPoly& b, const BigInt& m) {
    ZmPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    zm_norm(r, m);
    return r;
}

inline ZmPoly zm_sub(const ZmPoly& a, const ZmPoly& b, const BigInt& m) {
    ZmPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    zm_norm(r, m);
    return r;
}

inline ZmPoly zm_mul(const ZmPoly& a, const ZmPoly& b, const BigInt& m) {
    if (a.empty() || b.empty()) return {};
    ZmPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    zm_norm(r, m);
    return r;
}

/// Division by a monic b.
inline void zm_divmod(const ZmPoly& a, const ZmPoly& b, const BigInt& m, ZmPoly& q, ZmPoly& r) {
    r = a;
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    for (std::size_t k = r.size(); k >= b.size() && k > 0; --k) {
        std::size_t top = k - 1;
        BigInt c = r[top] % m;
        if (c == 0) continue;
        std::size_t shift = top - (b.size() - 1);
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
        for (std::size_t i = shift; i <= top; ++i) {
            r[i] %= m;
            if (r[i] < 0) r[i] += m;
        }
    }
    zm_norm(q, m);
    zm_norm(r, m);
}

inline ZmPoly to_zm(const ModPoly& a) {
    ZmPoly r;
    for (auto v : a) r.emplace_back(static_cast<unsigned long>(v));
    return r;
}

/// Extended gcd mod p: s*g + t*h = 1.
inline void mp_xgcd(const ModPoly& g, const ModPoly& h, std::uint64_t p, ModPoly& s, ModPoly& t) {
    ModPoly r0 = g, r1 = h, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        ModPoly q, r;
        mp_divmod(r0, r1, p, &q, &r);
        ModPoly s2 = mp_sub(s0, mp_mul(q, s1, p), p);
        ModPoly t2 = mp_sub(t0, mp_mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    std::uint64_t inv = mp_inv(r0.at(0), p);
    for (auto& v : s0) v = v * inv % p;
    for (auto& v : t0) v = v * inv % p;
    s = s0;
    t = t0;
}

/// Lifts f = g*h (mod p), h monic, to modulus >= target. Returns the final modulus.
inline BigInt hensel_pair(const IntPolynomial& f, ZmPoly& g, ZmPoly& h, const ModPoly& g0, const ModPoly& h0,
                          std::uint64_t p, const BigInt& target) {
    ModPoly s0, t0;
    mp_xgcd(g0, h0, p, s0, t0);
    ZmPoly s = to_zm(s0), t = to_zm(t0);
    g = to_zm(g0);
    h = to_zm(h0);
    BigInt m = static_cast<unsigned long>(p);
    ZmPoly fz(f.coeffs().begin(), f.coeffs().end());
    while (m < target) {
        BigInt m2 = m * m;
        ZmPoly e = zm_sub(fz, zm_mul(g, h, m2), m2);
        ZmPoly q, r;
        zm_divmod(zm_mul(s, e, m2), h, m2, q, r);
        ZmPoly g2 = zm_add(g, zm_add(zm_mul(t, e, m2), zm_mul(q, g, m2), m2), m2);
        ZmPoly h2 = zm_add(h, r, m2);
        ZmPoly b = zm_sub(zm_add(zm_mul(s, g2, m2), zm_mul(t, h2, m2), m2), ZmPoly{1}, m2);
        ZmPoly c, d;
        zm_divmod(zm_mul(s, b, m2), h2, m2, c, d);
        s = zm_sub(s, d, m2);
        t = zm_sub(t, zm_add(zm_mul(t, b, m2), zm_mul(c, g2, m2), m2), m2);
        g = std::move(g2);
        h = std::move(h2);
        m = m2;
    }
    return m;
}

inline IntPolynomial symmetric(const ZmPoly& a, const BigInt& m) {
    BigInt half = m / 2;
    std::vector<BigInt> c;
    for (auto v : a) {
        v %= m;
        if (v < 0) v += m;
        if (v > half) v -= m;
        c.push_back(v);
    }
    return IntPolynomial(std::move(c));
}

inline bool is_prime_small(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Irreducible factors of a primitive square-free f with f(0) != 0, deg >= 1.
inline std::vector<IntPolynomial> zassenhaus(const IntPolynomial& f) {
    if (f.degree() <= 1) return {f};
    std::mt19937_64 rng(0x5eed);
    // Choose the prime with the fewest modular factors among a few candidates.
    std::uint64_t best_p = 0;
    std::vector<ModPoly> best;
    int tried = 0;
    for (std::uint64_t p = 3; tried < 5 && p < 100000; p += 2) {
        if (!is_prime_small(p)) continue;
        if (f.leading() % static_cast<unsigned long>(p) == 0) continue;
        ModPoly fp = mp_from(f, p);
        if (mp_gcd(fp, mp_derivative(fp, p), p).size() != 1) continue;
        ++tried;
        auto fac = mp_factor(mp_monic(fp, p), p, rng);
        if (best_p == 0 || fac.size() < best.size()) {
            best_p = p;
            best = std::move(fac);
        }
        if (best.size() == 1) break;
    }
    if (best.size() <= 1) return {f};
    const std::uint64_t p = best_p;

    // Factor coefficient bound: 2^n * ||f||_2 * |lc|, target modulus > 2 * bound.
    BigInt norm2 = 0;
    for (const auto& c : f.coeffs()) norm2 += c * c;
    BigInt nrm = sqrt(norm2) + 1;
    BigInt bound = (BigInt(1) << f.degree()) * nrm * abs(f.leading());
    BigInt target = 2 * bound + 1;

    // Sequential lifting: peel one monic factor at a time.
    std::vector<ZmPoly> lifted;
    BigInt modulus;
    {
        IntPolynomial cur = f;
        std::uint64_t lcp = mp_from(IntPolynomial(std::vector<BigInt>{f.leading()}), p).at(0);
        for (std::size_t i = 0; i + 1 < best.size(); ++i) {
            ModPoly rest{lcp};
            for (std::size_t j = i + 1; j < best.size(); ++j) rest = mp_mul(rest, best[j], p);
            ZmPoly g, h;
            modulus = hensel_pair(cur, g, h, rest, best[i], p, target);
            lifted.push_back(h);
            cur = symmetric(g, modulus);
            // cur is lc * prod(remaining) modulo the lifting modulus; the next lift starts from it.
        }
        // the last factor: monic part of cur
        ZmPoly last(cur.coeffs().begin(), cur.coeffs().end());
        zm_norm(last, modulus);
        BigInt inv;
        BigInt lc = last.back();
        mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), modulus.get_mpz_t());
        for (auto& v : last) v = v * inv % modulus;
        lifted.push_back(last);
    }
    // Reduce every factor to a common modulus p^a >= target (the smallest of those used).
    BigInt M = static_cast<unsigned long>(p);
    while (M < target) M = M * M;

    std::vector<IntPolynomial> result;
    IntPolynomial cur = f;
    std::vector<ZmPoly> pool = lifted;
    for (auto& u : pool) zm_norm(u, M);
    std::size_t k = 1;
    while (2 * k <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            ZmPoly prod{BigInt(cur.leading())};
            zm_norm(prod, M);
            for (auto i : idx) prod = zm_mul(prod, pool[i], M);
            IntPolynomial cand = symmetric(prod, M).primitive_part();
            IntPolynomial quo;
            if (cand.degree() > 0 && divide_exact(cur, cand, quo)) {
                result.push_back(cand);
                cur = quo.primitive_part();
                for (std::size_t i = k; i-- > 0;) pool.erase(pool.begin() + idx[i]);
                found = true;
                break;
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++k;
    }
    if (cur.degree() > 0) result.push_back(cur);
    return result;
}

inline const IntPolynomial& cyclotomic(int n) {
    static std::map<int, IntPolynomial> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    IntPolynomial q = IntPolynomial::monomial(n) - IntPolynomial{1};
    for (int d = 1; d < n; ++d)
        if (n % d == 0) q = exact_quotient(q, cyclotomic(d));
    return cache.emplace(n, q).first->second;
}

inline long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

}  // namespace detail

/// Irreducible factors over Q with multiplicities; factors primitive, positive leading coefficient,
/// sorted by (degree, coefficients). The integer content is dropped.
inline std::vector<std::pair<IntPolynomial, int>> factor(const IntPolynomial& p) {
    std::vector<std::pair<IntPolynomial, int>> out;
    for (const auto& [sq, mult] : squarefree_decomposition(p)) {
        IntPolynomial f = sq;
        if (f.coeff(0) == 0) {
            out.emplace_back(IntPolynomial{0, 1}, mult);
            f = exact_quotient(f, IntPolynomial{0, 1});
        }
        // Cyclotomic factors are cheap to find by division and make modular splitting worse.
        for (long n = 1; f.degree() > 0 && n <= 6L * f.degree() + 6; ++n) {
            if (detail::euler_phi(n) > f.degree()) continue;
            const auto& c = detail::cyclotomic(static_cast<int>(n));
            IntPolynomial q;
            if (divide_exact(f, c, q)) {
                out.emplace_back(c, mult);
                f = q.primitive_part();
            }
        }
        if (f.degree() <= 0) continue;
        for (auto& g : detail::zassenhaus(f.primitive_part())) out.emplace_back(g.primitive_part(), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return out;
}

/// The irreducible factor of p having the unique root of sqfree(p) in iv.
inline IntPolynomial factor_with_root(const IntPolynomial& p, const Interval& iv) {
    auto facs = factor(p);
    for (const auto& [g, mult] : facs) {
        if (iv.lo == iv.hi) {
            if (g.sign_at(iv.lo) == 0) return g;
            continue;
        }
        if (g.sign_at(iv.lo) * g.sign_at(iv.hi) < 0) return g;
    }
    throw CertificateFailure("no irreducible factor has a root in the isolating interval");
}

}  // namespace symdyn

#endif
