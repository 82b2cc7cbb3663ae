#ifndef SYMDYN_MATRIX_HPP
#define SYMDYN_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "symdyn/polynomial.hpp"

namespace symdyn {

/// Square integer matrix with machine-size entries (adjacency matrices, companions).
using Matrix = std::vector<std::vector<long long>>;

inline Matrix zero_matrix(std::size_t n) { return Matrix(n, std::vector<long long>(n, 0)); }

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

inline u64 powmod(u64 b, u64 e, u64 p) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
    }
    return r;
}

/// Characteristic polynomial mod p via Hessenberg reduction, ascending coefficients.
inline std::vector<u64> char_poly_mod(const Matrix& A, u64 p) {
    const std::size_t n = A.size();
    std::vector<std::vector<u64>> H(n, std::vector<u64>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long long v = A[i][j] % static_cast<long long>(p);
            H[i][j] = static_cast<u64>(v < 0 ? v + static_cast<long long>(p) : v);
        }
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t piv = j + 1;
        while (piv < n && H[piv][j] == 0) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            std::swap(H[piv], H[j + 1]);
            for (std::size_t r = 0; r < n; ++r) std::swap(H[r][piv], H[r][j + 1]);
        }
        u64 inv = powmod(H[j + 1][j], p - 2, p);
        for (std::size_t i = j + 2; i < n; ++i) {
            if (H[i][j] == 0) continue;
            u64 u = mulmod(H[i][j], inv, p);
            for (std::size_t c = 0; c < n; ++c) H[i][c] = (H[i][c] + p - mulmod(u, H[j + 1][c], p)) % p;
            for (std::size_t r = 0; r < n; ++r) H[r][j + 1] = (H[r][j + 1] + mulmod(u, H[r][i], p)) % p;
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im * prod_{j=i+1..m} h_{j,j-1} * p_{i-1}
    std::vector<std::vector<u64>> P(n + 1);
    P[0] = {1};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<u64> cur(m + 1, 0);
        const auto& prev = P[m - 1];
        for (std::size_t k = 0; k < prev.size(); ++k) {
            cur[k + 1] = (cur[k + 1] + prev[k]) % p;
            cur[k] = (cur[k] + p - mulmod(H[m - 1][m - 1], prev[k], p)) % p;
        }
        u64 prod = 1;
        for (std::size_t i = m - 1; i >= 1; --i) {
            prod = mulmod(prod, H[i][i - 1], p);
            if (prod == 0) break;
            u64 coef = mulmod(H[i - 1][m - 1], prod, p);
            if (coef == 0) continue;
            const auto& pp = P[i - 1];
            for (std::size_t k = 0; k < pp.size(); ++k) cur[k] = (cur[k] + p - mulmod(coef, pp[k], p)) % p;
        }
        P[m] = std::move(cur);
    }
    return P[n];
}

}  // namespace detail

/// Exact det(xI - A) by Chinese remaindering over 62-bit primes.
inline IntPolynomial char_poly(const Matrix& A) {
    const std::size_t n = A.size();
    if (n == 0) return IntPolynomial{1};
    // |coefficients| <= prod(1 + ||row_i||_2)
    double bits = 2;
    for (const auto& row : A) {
        double s = 0;
        for (long long v : row) s += static_cast<double>(v) * static_cast<double>(v);
        bits += std::log2(1 + std::sqrt(s));
    }
    BigInt modulus = 1;
    std::vector<BigInt> coeffs(n + 1, 0);
    BigInt prime = (BigInt(1) << 62);
    while (static_cast<double>(mpz_sizeinbase(modulus.get_mpz_t(), 2)) < bits + 2) {
        do {
            prime -= 1;
        } while (mpz_probab_prime_p(prime.get_mpz_t(), 30) == 0);
        detail::u64 p = prime.get_ui();
        auto cp = detail::char_poly_mod(A, p);
        // CRT combine: x = c mod modulus, x = r mod p
        BigInt inv;
        BigInt mp = modulus % prime;
        mpz_invert(inv.get_mpz_t(), mp.get_mpz_t(), prime.get_mpz_t());
        for (std::size_t k = 0; k <= n; ++k) {
            BigInt r = static_cast<unsigned long>(cp[k]);
            BigInt t = ((r - coeffs[k] % prime) * inv) % prime;
            if (t < 0) t += prime;
            coeffs[k] += modulus * t;
        }
        modulus *= prime;
    }
    BigInt half = modulus / 2;
    for (auto& c : coeffs)
        if (c > half) c -= modulus;
    return IntPolynomial(std::move(coeffs));
}

/// Traces tr(A^k) for k = 1..K, exact.
inline std::vector<BigInt> power_traces(const Matrix& A, int K) {
    const std::size_t n = A.size();
    std::vector<BigInt> out;
    std::vector<std::vector<BigInt>> P(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) P[i][i] = 1;
    for (int k = 1; k <= K; ++k) {
        std::vector<std::vector<BigInt>> Q(n, std::vector<BigInt>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (P[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (A[l][j]) Q[i][j] += P[i][l] * static_cast<long>(A[l][j]);
            }
        P = std::move(Q);
        BigInt t = 0;
        for (std::size_t i = 0; i < n; ++i) t += P[i][i];
        out.push_back(t);
    }
    return out;
}

/// Strongly connected components (Tarjan, iterative) in discovery-stable order.
inline std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> out;
    int counter = 0;
    for (int s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        std::vector<std::pair<int, std::size_t>> call{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on[s] = 1;
        while (!call.empty()) {
            auto& [v, it] = call.back();
            if (it < adj[v].size()) {
                int w = adj[v][it++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                int vv = v;
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[vv]);
                if (low[vv] == index[vv]) {
                    std::vector<int> c;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on[w] = 0;
                        c.push_back(w);
                        if (w == vv) break;
                    }
                    std::sort(c.begin(), c.end());
                    out.push_back(std::move(c));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Whether a component carries at least one cycle (size > 1 or a self-loop).
inline bool component_has_cycle(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp) {
    if (comp.size() > 1) return true;
    for (int w : adj[comp[0]])
        if (w == comp[0]) return true;
    return false;
}

/// gcd of cycle lengths inside one strongly connected component.
inline long component_period(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp) {
    std::vector<long> level(adj.size(), -1);
    std::vector<char> in(adj.size(), 0);
    for (int v : comp) in[v] = 1;
    level[comp[0]] = 0;
    std::vector<int> queue{comp[0]};
    long g = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int v = queue[h];
        for (int w : adj[v]) {
            if (!in[w]) continue;
            if (level[w] == -1) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                g = std::gcd(g, std::labs(level[v] + 1 - level[w]));
            }
        }
    }
    return g;
}

inline std::vector<std::vector<int>> adjacency_lists(const Matrix& A) {
    std::vector<std::vector<int>> adj(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j)
            if (A[i][j] > 0) adj[i].push_back(static_cast<int>(j));
    return adj;
}

}  // namespace symdyn

#endif
