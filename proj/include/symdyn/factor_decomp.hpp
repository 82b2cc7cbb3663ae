#ifndef SYMDYN_FACTOR_DECOMP_HPP
#define SYMDYN_FACTOR_DECOMP_HPP

#include "symdyn/code.hpp"

namespace symdyn {

/// Codes applied left to right; the domain of each link is the image of the previous one.
using CodeChain = std::vector<BlockMap>;

struct FactorOptions {
    int max_word_length = 10;     // find_sub_sft
    int max_N = 40;               // alpha iterations
    int max_block_n = 16;         // split_sft block length
    int max_m = 6;                // split_sft window sweep
    std::size_t max_windows = 200000;
    std::size_t max_states = 400;     // presentations handed to exact entropy
    std::size_t max_block_symbols = 512;
    bool diagnostics = true;      // also compute h(hat Z_n)
};

// ---- small utilities ----

inline ShiftSpace rename_symbols(const ShiftSpace& x, const std::map<std::string, std::string>& ren) {
    std::vector<std::string> a;
    for (const auto& s : x.alphabet()) a.push_back(ren.count(s) ? ren.at(s) : s);
    switch (x.kind()) {
        case ShiftSpace::Kind::edge_shift:
            return ShiftSpace::edge_shift(x.matrix(), a);
        case ShiftSpace::Kind::sft:
            return ShiftSpace::sft_indexed(a, x.forbidden());
        default: {
            Graph g = x.graph();
            g.alphabet = a;
            return ShiftSpace::sofic(g);
        }
    }
}

/// Drops leading/trailing window coordinates the table does not depend on.
inline BlockMap shrink(BlockMap c) {
    auto drop = [&](bool front) {
        std::map<Word, std::string> t;
        for (const auto& [w, o] : c.table) {
            Word k = front ? Word(w.begin() + 1, w.end()) : Word(w.begin(), w.end() - 1);
            auto [it, fresh] = t.emplace(k, o);
            if (!fresh && it->second != o) return false;
        }
        if (front) --c.memory;
        else --c.anticipation;
        c.table = std::move(t);
        return true;
    };
    while (c.memory > 0 && drop(true)) {}
    while (c.anticipation > 0 && drop(false)) {}
    return c;
}

/// Single code equal to the whole chain (tables grow with the summed windows).
inline BlockMap fold(const CodeChain& chain, std::size_t max_windows = 2000000) {
    if (chain.empty()) throw PreconditionError("empty code chain");
    BlockMap c = chain.front();
    for (std::size_t i = 1; i < chain.size(); ++i) {
        BigInt need = count_words(essential_presentation(chain.front().domain), c.window() + chain[i].window() - 1);
        if (need > static_cast<long>(max_windows)) throw IterationCap("composite code exceeds the window budget");
        c = compose(chain[i], c);
    }
    return c;
}

inline ShiftSpace chain_image(const CodeChain& chain) { return image(chain.back()); }

/// Certifies phi = (phi2 chain) o (phi1 chain) with every link onto the next domain. The composite
/// table is folded from the outside in, dropping coordinates it does not read after each step, then
/// compared with phi at the common window.
inline DecompositionCertificate verify_chain(const BlockMap& phi, const CodeChain& phi1, const CodeChain& phi2) {
    if (phi1.empty() || phi2.empty()) throw Mismatch("", "empty stage");
    DecompositionCertificate cert;
    if (!language_equal(phi.domain, phi1.front().domain)) throw Mismatch("", "phi1 and phi have different domains");
    CodeChain all = phi1;
    all.insert(all.end(), phi2.begin(), phi2.end());
    Word wit;
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        ShiftSpace im = image(all[i]);
        if (!language_contained(im, all[i + 1].domain, &wit) || !language_contained(all[i + 1].domain, im, &wit))
            throw Mismatch(join_word(wit), "link " + std::to_string(i) + " is not onto the next domain");
    }
    cert.checks.push_back("each of " + std::to_string(all.size()) + " links is onto the next domain");
    BlockMap c = all.back();
    for (std::size_t i = all.size() - 1; i-- > 0;) {
        try {
            c = shrink(compose(c, all[i]));
        } catch (const ImageNotInDomain& e) {
            throw Mismatch("", std::string("composition undefined: ") + e.what());
        }
    }
    const int M = std::max(c.memory, phi.memory), A = std::max(c.anticipation, phi.anticipation);
    BlockMap l = widen(c, M, A), r = widen(phi, M, A);
    for (const auto& [w, o] : r.table) {
        auto it = l.table.find(w);
        if (it == l.table.end() || it->second != o)
            throw Mismatch(join_word(w), "phi2 o phi1 differs from phi on window [" + join_word(w) + "]");
    }
    cert.memory = M;
    cert.anticipation = A;
    cert.window = M + A + 1;
    cert.windows_checked = r.table.size();
    cert.checks.push_back("table equality on all " + std::to_string(r.table.size()) + " windows of length " +
                          std::to_string(cert.window));
    ShiftSpace im = image(phi), im2 = image(all.back());
    if (!language_contained(im, im2, &wit) || !language_contained(im2, im, &wit))
        throw Mismatch(join_word(wit), "image(phi2) differs from image(phi)");
    cert.checks.push_back("image(phi2) = image(phi)");
    return cert;
}

// ---- sub-SFT search ----

/// Sub-SFT of x with entropy in (max(floor, target - tol), target + tol). Greedy: at each word length,
/// forbid the single word giving the largest entropy drop that stays above the lower end; lengthen words
/// when no such drop exists. Floating estimates steer the search, the answer is checked exactly.
inline ShiftSpace find_sub_sft(const ShiftSpace& x, const EntropyValue& target, const EntropyValue& floor,
                               const Rational& tol, int max_n = 10) {
    if (!x.is_finite_type()) throw PreconditionError("find_sub_sft needs a shift of finite type");
    if (compare(floor, target) >= 0) throw PreconditionError("floor must be below the target");
    if (compare(target, entropy(x)) >= 0) throw PreconditionError("target must be below h(X)");
    auto exact_ok = [&](const ShiftSpace& z) {
        EntropyValue h = entropy(z);
        return compare(h, floor) > 0 && log_distance_below(h.base, target.base, tol);
    };
    const double t = log_bounds(target.base).first, f = log_bounds(floor.base).first;
    const double lower = std::max(f, t - tol.get_d()), upper = t + tol.get_d(), slack = 1e-7;
    ShiftSpace z = forbid(x, {});
    double hz = approx_entropy(z), closest = hz;
    for (int n = 1; n <= max_n; ++n) {
        while (true) {
            if (hz > lower + slack && hz < upper - slack && exact_ok(z)) return z;
            std::optional<ShiftSpace> best;
            double best_h = hz;
            for (const auto& w : words(z, n)) {
                ShiftSpace c;
                try {
                    c = forbid(z, {w});
                } catch (const EmptyShift&) {
                    continue;
                }
                double h = approx_entropy(c);
                if (h > lower + slack && h < best_h - 1e-12) {
                    best = c;
                    best_h = h;
                }
            }
            if (!best) break;
            z = *best;
            hz = best_h;
            if (std::fabs(hz - t) < std::fabs(closest - t)) closest = hz;
        }
    }
    throw SearchExhausted("no sub-SFT within tolerance up to word length " + std::to_string(max_n) +
                          "; closest entropy " + std::to_string(closest));
}

// ---- normalization ----

struct NormalizedTriple {
    ShiftSpace X;                                   // 1-step SFT on L-blocks of the domain
    ShiftSpace Z;                                   // 1-step sub-SFT over fresh symbols
    BlockMap phi;                                   // 1-block on X
    BlockMap beta;                                  // domain -> X
    int block_length = 1;
    std::map<std::string, std::string> fresh;       // X-symbol -> Z-symbol
    std::map<std::string, std::string> origin;      // Z-symbol -> X-symbol
    std::vector<std::string> y_alphabet;

    bool in_z(const std::string& s) const { return origin.count(s) > 0; }
    std::string phi_of(const std::string& zsym) const { return phi.table.at({origin.at(zsym)}); }
    std::vector<std::string> alphabet() const {
        std::vector<std::string> a;
        for (const auto& [z, o] : origin) a.push_back(z);
        a.insert(a.end(), y_alphabet.begin(), y_alphabet.end());
        return a;
    }
};

namespace detail {

/// phi read as a 1-block code on L-blocks: (X^[L], 1-block code, beta), beta with phi's memory.
struct BlockRecoding {
    ShiftSpace XL;
    BlockMap one;
    BlockMap beta;
    std::map<std::string, Word> block_of;
};

inline BlockRecoding recode_blocks(const BlockMap& phi, int L) {
    if (L < phi.window()) throw PreconditionError("block length below the code window");
    BlockRecoding r;
    const ShiftSpace& X = phi.domain;
    r.XL = higher_block(X, L);
    std::map<Word, std::string> one, beta;
    for (const auto& b : words(X, L)) {
        std::string name = block_name(b);
        r.block_of[name] = b;
        one[{name}] = phi.table.at(Word(b.begin(), b.begin() + phi.window()));
        beta[b] = name;
    }
    r.one = BlockMap::make(r.XL, 0, 0, std::move(one), phi.target_alphabet);
    r.beta = BlockMap::make(X, phi.memory, L - 1 - phi.memory, std::move(beta), r.XL.alphabet());
    return r;
}

inline int step_of(const ShiftSpace& x) { return std::max(x.step(), 0); }

}  // namespace detail

/// Higher-block recoding and fresh renaming so that X is 1-step, phi is 1-block, Z is a 1-step
/// sub-SFT over symbols disjoint from Y's, and ab in B(X) implies ab in B(Z) for Z-symbols a, b.
inline NormalizedTriple normalize(const ShiftSpace& X, const ShiftSpace& Z, const BlockMap& phi) {
    if (!X.is_finite_type() || !Z.is_finite_type()) throw PreconditionError("normalize needs shifts of finite type");
    if (!language_contained(Z, X)) throw PreconditionError("Z is not contained in X");
    const std::set<std::string> ya(phi.target_alphabet.begin(), phi.target_alphabet.end());
    int L = std::max({phi.window(), detail::step_of(X), detail::step_of(Z), 1});
    for (;; ++L) {
        auto rec = detail::recode_blocks(phi, L);
        std::set<std::string> zblocks;
        for (const auto& b : words(Z, L)) zblocks.insert(block_name(b));
        std::set<std::pair<std::string, std::string>> zpairs;
        for (const auto& w : words(Z, L + 1))
            zpairs.insert({block_name(Word(w.begin(), w.end() - 1)), block_name(Word(w.begin() + 1, w.end()))});
        bool unique = true;
        for (const auto& w : words(rec.XL, 2))
            if (zblocks.count(w[0]) && zblocks.count(w[1]) && !zpairs.count({w[0], w[1]})) unique = false;
        if (!unique) {
            if (L > std::max(phi.window(), detail::step_of(Z) + 1)) throw CertificateFailure("normalization failed");
            continue;
        }
        std::string prefix;
        auto collides = [&] {
            for (const auto& b : zblocks)
                if (ya.count(prefix + b)) return true;
            return false;
        };
        while (collides()) prefix += "z";
        NormalizedTriple t;
        t.X = rec.XL;
        t.phi = rec.one;
        t.beta = rec.beta;
        t.block_length = L;
        t.y_alphabet = phi.target_alphabet;
        std::vector<std::string> za;
        for (const auto& b : zblocks) {
            t.fresh[b] = prefix + b;
            t.origin[prefix + b] = b;
            za.push_back(prefix + b);
        }
        std::vector<Word> forb;
        for (const auto& a : zblocks)
            for (const auto& b : zblocks)
                if (!zpairs.count({a, b})) forb.push_back({prefix + a, prefix + b});
        t.Z = trim(ShiftSpace::sft(za, forb));
        return t;
    }
}

/// 1-block code on X: Z-symbols fixed (under the fresh names), others mapped by phi.
inline BlockMap build_theta(const NormalizedTriple& t) {
    std::map<Word, std::string> tab;
    for (const auto& w : words(t.X, 1)) tab[w] = t.fresh.count(w[0]) ? t.fresh.at(w[0]) : t.phi.table.at(w);
    return BlockMap::make(t.X, 0, 0, std::move(tab), t.alphabet());
}

/// 3-block code on `domain` (a subshift over Z- and Y-symbols): a Z-symbol next to a Y-symbol is
/// replaced by its phi image, everything else is kept.
inline BlockMap build_alpha(const NormalizedTriple& t, const ShiftSpace& domain) {
    std::map<Word, std::string> tab;
    for (const auto& w : words(domain, 3)) {
        bool edge = t.in_z(w[1]) && (!t.in_z(w[0]) || !t.in_z(w[2]));
        tab[w] = edge ? t.phi_of(w[1]) : w[1];
    }
    return BlockMap::make(domain, 1, 1, std::move(tab), t.alphabet());
}

/// 1-block back-map onto Y: Z-symbols by phi, Y-symbols fixed.
inline BlockMap build_back_map(const NormalizedTriple& t, const ShiftSpace& domain) {
    std::map<Word, std::string> tab;
    for (const auto& w : words(domain, 1)) tab[w] = t.in_z(w[0]) ? t.phi_of(w[0]) : w[0];
    return BlockMap::make(domain, 0, 0, std::move(tab), t.y_alphabet);
}

/// Points whose maximal core runs are core paths and whose maximal Y runs are Y-words, with every Y run
/// between two core runs of length >= cap. A core run is entered through `entries` (label, core state).
inline Graph gap_join(const Graph& core, const std::vector<std::pair<std::string, int>>& entries, const Graph& y,
                      int cap) {
    if (cap < 1) throw PreconditionError("gap must be at least 1");
    Graph g;
    g.alphabet = core.alphabet;
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < g.alphabet.size(); ++i) pos[g.alphabet[i]] = static_cast<int>(i);
    for (const auto& s : y.alphabet) {
        if (pos.count(s)) throw PreconditionError("core and Y alphabets overlap at '" + s + "'");
        pos[s] = static_cast<int>(g.alphabet.size());
        g.alphabet.push_back(s);
    }
    const int C = core.num_states(), S = y.num_states();
    g.states = core.states;
    auto ystate = [&](int t, int c) { return C + (c - 1) * S + t; };
    for (int c = 1; c <= cap; ++c)
        for (int t = 0; t < S; ++t) g.states.push_back(y.states[t] + "#" + std::to_string(c));
    for (const auto& e : core.edges) g.edges.push_back(e);
    for (const auto& e : y.edges) {
        int lab = pos.at(y.alphabet[e.label]);
        for (int s = 0; s < C; ++s) g.edges.push_back({s, ystate(e.to, 1), lab});
        for (int c = 1; c <= cap; ++c) g.edges.push_back({ystate(e.from, c), ystate(e.to, std::min(c + 1, cap)), lab});
    }
    for (const auto& [lab, v] : entries)
        for (int t = 0; t < S; ++t) g.edges.push_back({ystate(t, cap), v, pos.at(lab)});
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

/// hat Z_n: forbids F_Y, F_Z and every Z-symbol, 1..2n Y-symbols, Z-symbol pattern.
inline ShiftSpace hatZ(const NormalizedTriple& t, const ShiftSpace& Y, int n) {
    Graph core = essential_presentation(t.Z);
    std::vector<std::pair<std::string, int>> entries;
    for (const auto& e : core.edges) entries.push_back({core.alphabet[e.label], e.to});
    return ShiftSpace::sofic(gap_join(core, entries, essential_presentation(Y), 2 * n + 1));
}

// ---- reports ----

struct TraceRow {
    std::string stage;
    int index = 0;
    EntropyValue h;
};

struct DecompositionReport {
    std::string construction;
    CodeChain phi1, phi2;
    ShiftSpace intermediate;
    EntropyValue intermediate_entropy;
    EntropyValue target;
    Rational epsilon;
    std::optional<int> step_claim;               // intermediate is claimed k-step
    std::map<std::string, long> params;          // n, N, m, block lengths
    std::vector<TraceRow> trace;
    std::vector<std::string> certificates;
};

/// Runs every certificate of the report against phi; throws on the first failure.
inline void certify(DecompositionReport& r, const BlockMap& phi) {
    r.certificates.clear();
    DecompositionCertificate c = verify_chain(phi, r.phi1, r.phi2);
    for (const auto& s : c.checks) r.certificates.push_back(s);
    if (!language_equal(chain_image(r.phi1), r.intermediate)) throw CertificateFailure("intermediate is not image(phi1)");
    r.certificates.push_back("intermediate = image(phi1)");
    EntropyValue h = entropy(r.intermediate);
    if (compare(h, r.intermediate_entropy) != 0) throw CertificateFailure("intermediate entropy does not match");
    r.certificates.push_back("intermediate entropy recomputed exactly");
    if (!log_distance_below(h.base, r.target.base, r.epsilon))
        throw CertificateFailure("|h(intermediate) - target| >= epsilon");
    r.certificates.push_back("|h(intermediate) - target| < epsilon");
    if (r.step_claim) {
        if (!is_k_step(r.intermediate, *r.step_claim))
            throw CertificateFailure("intermediate is not " + std::to_string(*r.step_claim) + "-step");
        r.certificates.push_back("intermediate is " + std::to_string(*r.step_claim) + "-step");
    }
}

namespace detail {

inline DecompositionReport degenerate(const std::string& what, const BlockMap& phi, const ShiftSpace& Y,
                                      const EntropyValue& target, const Rational& eps, bool at_domain) {
    DecompositionReport r;
    r.construction = what;
    r.target = target;
    r.epsilon = eps;
    if (at_domain) {
        r.phi1 = {BlockMap::identity(phi.domain)};
        r.phi2 = {phi};
        r.intermediate = phi.domain;
    } else {
        r.phi1 = {phi};
        r.phi2 = {BlockMap::identity(Y)};
        r.intermediate = Y;
    }
    r.intermediate_entropy = entropy(r.intermediate);
    return r;
}

inline void check_factor(const BlockMap& phi, const ShiftSpace& Y) {
    if (!phi.domain.is_finite_type()) throw PreconditionError("domain must be of finite type");
    if (!is_factor_onto(phi, Y)) throw PreconditionError("phi is not onto Y");
}

}  // namespace detail

/// Factor phi = phi2 o phi1 with h(phi1(X)) within eps of target (intermediate sofic in general).
/// Sub-SFT Z of X at tolerance eps/2, normalization, theta, then Z~_n = alpha(Z~_{n-1}) until the
/// intermediate entropy is within eps of the target.
inline DecompositionReport split_sofic(const BlockMap& phi, const ShiftSpace& Y, const EntropyValue& target,
                                       const Rational& eps, const FactorOptions& opt = {}) {
    if (eps <= 0) throw PreconditionError("epsilon must be positive");
    detail::check_factor(phi, Y);
    EntropyValue hX = entropy(phi.domain), hY = entropy(Y);
    if (compare(target, hY) < 0 || compare(target, hX) > 0) throw PreconditionError("target outside [h(Y), h(X)]");
    if (compare(target, hY) == 0) return detail::degenerate("split_sofic", phi, Y, target, eps, false);
    if (compare(target, hX) == 0) return detail::degenerate("split_sofic", phi, Y, target, eps, true);

    DecompositionReport r;
    r.construction = "split_sofic";
    r.target = target;
    r.epsilon = eps;
    ShiftSpace Z = find_sub_sft(phi.domain, target, hY, eps / 2, opt.max_word_length);
    EntropyValue hZ = entropy(Z);
    r.trace.push_back({"sub_sft", 0, hZ});
    NormalizedTriple t = normalize(phi.domain, Z, phi);
    r.params["block_length"] = t.block_length;
    r.params["z_symbols"] = static_cast<long>(t.origin.size());
    BlockMap theta = build_theta(t);
    r.phi1 = {t.beta, theta};
    ShiftSpace D = image(theta);
    for (int N = 0;; ++N) {
        if (N > 0) {
            BlockMap alpha = build_alpha(t, D);
            r.phi1.push_back(alpha);
            D = image(alpha);
        }
        if (D.graph().num_states() > static_cast<int>(opt.max_states))
            throw IterationCap("intermediate presentation exceeds the state budget at N = " + std::to_string(N));
        EntropyValue h = entropy(D);
        r.trace.push_back({"tilde_Z", N, h});
        if (opt.diagnostics) r.trace.push_back({"hat_Z", N, entropy(hatZ(t, Y, N))});
        if (log_distance_below(h.base, target.base, eps)) {
            r.params["N"] = N;
            r.intermediate = D;
            r.intermediate_entropy = h;
            break;
        }
        if (N >= opt.max_N) throw IterationCap("alpha iteration reached N = " + std::to_string(N));
    }
    r.phi2 = {build_back_map(t, r.intermediate)};
    return r;
}

// ---- finite-type intermediates ----

struct OverlapPartition {
    int n = 1;
    std::vector<std::vector<std::string>> classes;   // E_1 .. E_N; E_N may be empty
    std::map<std::string, int> class_of;             // symbol -> j in 1..N
    std::map<std::string, Word> word_of;             // symbol -> its n-word

    int N() const { return static_cast<int>(classes.size()); }
};

/// Least p >= 1 with w[i] = w[i+p] for all valid i (p = |w| when w has no border).
inline int least_period(const Word& w) {
    const int n = static_cast<int>(w.size());
    std::vector<int> fail(n + 1, 0);
    fail[0] = -1;
    for (int i = 1, k = -1; i <= n; ++i) {
        while (k >= 0 && w[k] != w[i - 1]) k = fail[k];
        fail[i] = ++k;
    }
    return n - fail[n];
}

/// Singletons for words whose least self-overlap shift exceeds n/4 (sorted by word); the rest form E_N.
inline OverlapPartition overlap_partition(const std::map<std::string, Word>& symbols, int n) {
    OverlapPartition p;
    p.n = n;
    p.word_of = symbols;
    std::vector<std::pair<Word, std::string>> single;
    std::vector<std::string> rest;
    for (const auto& [s, w] : symbols) {
        if (static_cast<int>(w.size()) != n) throw PreconditionError("symbol word of the wrong length");
        if (4 * least_period(w) <= n) rest.push_back(s);
        else single.push_back({w, s});
    }
    std::sort(single.begin(), single.end());
    for (const auto& [w, s] : single) p.classes.push_back({s});
    p.classes.push_back(rest);
    for (int j = 0; j < p.N(); ++j)
        for (const auto& s : p.classes[j]) p.class_of[s] = j + 1;
    return p;
}

/// (2m+1)-block code on X^[n]: keep x_0 when no window symbol has a smaller class index than x_0,
/// else write phi of the first letter of x_0.
inline BlockMap build_phi_m(const OverlapPartition& part, const ShiftSpace& Xn, const BlockMap& phi, int m) {
    if (m < 1) throw PreconditionError("m must be >= 1");
    if (phi.window() != 1) throw PreconditionError("phi must be 1-block");
    std::vector<std::string> target;
    for (const auto& [s, w] : part.word_of) target.push_back(s);
    for (const auto& y : phi.target_alphabet) target.push_back(y);
    std::map<Word, std::string> tab;
    for (const auto& w : words(Xn, 2 * m + 1)) {
        const std::string& x0 = w[m];
        const int j = part.class_of.at(x0);
        bool keep = true;
        for (const auto& s : w) keep = keep && part.class_of.at(s) >= j;
        tab[w] = keep ? x0 : phi.table.at({part.word_of.at(x0).front()});
    }
    return BlockMap::make(Xn, m, m, std::move(tab), target);
}

namespace detail {

/// Shift over Y's symbols and one extra symbol a where a is never followed, after fewer than k
/// Y-symbols, by another a.
inline ShiftSpace one_extra_symbol(const ShiftSpace& Y, const std::string& a, int k) {
    Graph core;
    core.alphabet = {a};
    core.states = {"a"};
    if (k == 0) core.edges.push_back({0, 0, 0});
    return ShiftSpace::sofic(gap_join(core, {{a, 0}}, essential_presentation(Y), std::max(k, 1)));
}

inline std::string fresh_prefix(const std::vector<std::string>& names, const std::vector<std::string>& taken,
                                const std::string& letter) {
    std::set<std::string> t(taken.begin(), taken.end());
    std::string prefix;
    auto clash = [&] {
        for (const auto& s : names)
            if (t.count(prefix + s)) return true;
        return false;
    };
    while (clash()) prefix += letter;
    return prefix;
}

}  // namespace detail

/// Factor phi = phi2 o phi1 with phi1(X) of finite type and h(phi1(X)) < h(Y) + eps.
inline DecompositionReport split_sft(const BlockMap& phi, const ShiftSpace& Y, const Rational& eps,
                                     const FactorOptions& opt = {}) {
    if (eps <= 0) throw PreconditionError("epsilon must be positive");
    detail::check_factor(phi, Y);
    const ShiftSpace& X = phi.domain;
    EntropyValue hX = entropy(X), hY = entropy(Y);
    if (compare(hX, hY) <= 0) throw PreconditionError("h(X) must exceed h(Y)");

    DecompositionReport r;
    r.construction = "split_sft";
    r.target = hY;
    r.epsilon = eps;
    // 1-step X1 with phi 1-block on it.
    const int L = std::max({phi.window(), detail::step_of(X), 1});
    auto rec = detail::recode_blocks(phi, L);
    r.params["block_length"] = L;

    int n = 1;
    if (!log_less_than(hX.base, hY.base, eps)) {
        std::string a = "a" + detail::fresh_prefix({""}, Y.alphabet(), "a");
        for (n = 4;; n += 4) {
            if (n > opt.max_block_n) throw IterationCap("block length n exceeded " + std::to_string(opt.max_block_n));
            EntropyValue hF = entropy(detail::one_extra_symbol(Y, a, n / 4));
            r.trace.push_back({"one_extra_symbol", n, hF});
            if (log_less_than(hF.base, hY.base, eps)) break;
        }
    }
    r.params["n"] = n;
    BigInt count = count_words(essential_presentation(rec.XL), n);
    if (count > static_cast<long>(opt.max_block_symbols))
        throw IterationCap("X^[n] has " + count.get_str() + " symbols, over the budget");

    // X^[n] over names disjoint from Y's alphabet.
    std::map<Word, std::string> beta_n;
    std::vector<std::string> raw;
    auto blocks = words(rec.XL, n);
    for (const auto& b : blocks) raw.push_back(block_name(b));
    std::string px = detail::fresh_prefix(raw, Y.alphabet(), "x");
    std::map<std::string, std::string> ren;
    std::map<std::string, Word> word_of;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        ren[raw[i]] = px + raw[i];
        word_of[px + raw[i]] = blocks[i];
        beta_n[blocks[i]] = px + raw[i];
    }
    ShiftSpace Xn = rename_symbols(higher_block(rec.XL, n), ren);
    BlockMap beta2 = BlockMap::make(rec.XL, 0, n - 1, std::move(beta_n), Xn.alphabet());
    OverlapPartition part = overlap_partition(word_of, n);
    r.params["N"] = part.N();

    std::optional<BlockMap> code;
    for (int m = 1;; ++m) {
        if (m > opt.max_m) throw IterationCap("window sweep reached m = " + std::to_string(m));
        BigInt need = count_words(essential_presentation(Xn), 2 * m + 1);
        if (need > static_cast<long>(opt.max_windows)) throw IterationCap("phi^(m) table exceeds the window budget");
        BlockMap c = build_phi_m(part, Xn, rec.one, m);
        ShiftSpace Zm = image(c);
        if (Zm.graph().num_states() > static_cast<int>(opt.max_states))
            throw IterationCap("Z_m presentation has " + std::to_string(Zm.graph().num_states()) +
                               " states at m = " + std::to_string(m) + ", over the state budget");
        EntropyValue h = entropy(Zm);
        r.trace.push_back({"Z_m", m, h});
        if (log_less_than(h.base, hY.base, eps)) {
            r.params["m"] = m;
            r.intermediate = Zm;
            r.intermediate_entropy = h;
            r.step_claim = 2 * m * part.N() + 1;
            code = c;
            break;
        }
    }
    r.phi1 = {rec.beta, beta2, *code};
    std::map<Word, std::string> back;
    for (const auto& w : words(r.intermediate, 1))
        back[w] = word_of.count(w[0]) ? rec.one.table.at({word_of.at(w[0]).front()}) : w[0];
    r.phi2 = {BlockMap::make(r.intermediate, 0, 0, std::move(back), phi.target_alphabet)};
    return r;
}

/// phi = phi2 o phi1 with phi1(X) of finite type and |h(phi1(X)) - target| < eps. The sofic stage runs
/// at eps/2; when its intermediate is certified finite type no second stage is needed, otherwise the
/// finite-type split runs on the first stage at eps/2.
inline DecompositionReport decompose_dense(const BlockMap& phi, const ShiftSpace& Y, const EntropyValue& target,
                                           const Rational& eps, const FactorOptions& opt = {}) {
    if (eps <= 0) throw PreconditionError("epsilon must be positive");
    detail::check_factor(phi, Y);
    EntropyValue hX = entropy(phi.domain), hY = entropy(Y);
    if (compare(target, hY) < 0 || compare(target, hX) > 0) throw PreconditionError("target outside [h(Y), h(X)]");
    auto finish = [&](DecompositionReport r) {
        if (!r.step_claim) {
            SyncOracle so(r.intermediate);
            auto k = so.min_step(2 * static_cast<int>(r.params.count("N") ? r.params.at("N") : 0) +
                                 2 * static_cast<int>(r.params.count("block_length") ? r.params.at("block_length") : 1) + 4);
            if (!k) throw CertificateFailure("intermediate not certified of finite type");
            r.step_claim = *k;
        }
        r.construction = "decompose_dense";
        r.target = target;
        r.epsilon = eps;
        certify(r, phi);
        return r;
    };
    if (compare(target, hY) == 0) {
        if (!Y.is_finite_type() && !SyncOracle(Y).min_step(64)) throw PreconditionError("Y is not of finite type");
        return finish(detail::degenerate("decompose_dense", phi, Y, target, eps, false));
    }
    if (compare(target, hX) == 0) return finish(detail::degenerate("decompose_dense", phi, Y, target, eps, true));

    DecompositionReport s = split_sofic(phi, Y, target, eps / 2, opt);
    SyncOracle so(s.intermediate);
    const int bound = 2 * static_cast<int>(s.params.at("N")) + 2 * static_cast<int>(s.params.at("block_length")) + 4;
    if (auto k = so.min_step(bound)) {
        s.step_claim = *k;
        s.params["sft_stage"] = 0;
        return finish(s);
    }
    BlockMap psi = fold(s.phi1, opt.max_windows);
    DecompositionReport t = split_sft(psi, s.intermediate, eps / 2, opt);
    DecompositionReport r = s;
    r.phi1 = t.phi1;
    r.phi2 = t.phi2;
    r.phi2.insert(r.phi2.end(), s.phi2.begin(), s.phi2.end());
    r.intermediate = t.intermediate;
    r.intermediate_entropy = t.intermediate_entropy;
    r.step_claim = t.step_claim;
    r.params["sft_stage"] = 1;
    for (const auto& [k, v] : t.params) r.params["sft_" + k] = v;
    for (const auto& row : t.trace) r.trace.push_back({"sft_" + row.stage, row.index, row.h});
    return finish(r);
}

struct S0Row {
    EntropyValue target;
    std::string status;                 // ok, out-of-range, failed: ...
    std::optional<EntropyValue> achieved;
    std::optional<bool> perron;
};

/// Runs decompose_dense on each grid point; failures are recorded per row.
inline std::vector<S0Row> sample_S0(const BlockMap& phi, const ShiftSpace& Y, const std::vector<EntropyValue>& grid,
                                    const Rational& eps, const FactorOptions& opt = {}) {
    std::vector<S0Row> rows;
    if (grid.empty()) return rows;
    EntropyValue hX = entropy(phi.domain), hY = entropy(Y);
    for (const auto& t : grid) {
        S0Row row;
        row.target = t;
        if (compare(t, hY) < 0 || compare(t, hX) > 0) {
            row.status = "out-of-range";
        } else {
            try {
                auto r = decompose_dense(phi, Y, t, eps, opt);
                row.status = "ok";
                row.achieved = r.intermediate_entropy;
                row.perron = is_perron(r.intermediate_entropy.base);
            } catch (const Error& e) {
                row.status = std::string("failed: ") + e.what();
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace symdyn

#endif
