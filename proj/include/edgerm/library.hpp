#pragma once

// Bundled instances and case studies: butterfly networks, permutation codes
// over Z_{mw} and Z_{m^(a+1)}, and decoding identities over Z_N with an
// auxiliary function t.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgerm/code.hpp"
#include "edgerm/cwl.hpp"
#include "edgerm/error.hpp"
#include "edgerm/group.hpp"
#include "edgerm/network.hpp"
#include "edgerm/parallel.hpp"

namespace edgerm {

struct BundledCode {
    NetworkInstance instance;
    NetworkCode code;
};

namespace detail {

inline NetworkInstance butterfly_skeleton(std::uint64_t source_size) {
    NetworkInstance inst;
    inst.nodes = {"s1", "s2", "u1", "u2", "m", "n", "t1", "t2"};
    inst.sources = {{"s1", source_size}, {"s2", source_size}};
    inst.terminals = {"t1", "t2"};
    inst.demands = {{1, 1}, {1, 1}};
    return inst;
}

inline std::vector<Symbol> iota_table(std::uint64_t n) {
    std::vector<Symbol> t(n);
    std::iota(t.begin(), t.end(), 0);
    return t;
}

}  // namespace detail

/// Two one-bit sources, two terminals demanding both, unit edges, XOR on the
/// bottleneck m -> n.
inline BundledCode butterfly() {
    BundledCode b;
    auto& inst = b.instance;
    inst = detail::butterfly_skeleton(2);
    inst.edges = {{"s1u1", "s1", "u1", 2}, {"s2u2", "s2", "u2", 2}, {"u1m", "u1", "m", 2},
                  {"u2m", "u2", "m", 2},   {"bottleneck", "m", "n", 2}, {"u1t1", "u1", "t1", 2},
                  {"u2t2", "u2", "t2", 2}, {"nt1", "n", "t1", 2},       {"nt2", "n", "t2", 2}};
    auto& c = b.code;
    c.blocklength = 1;
    c.source_alphabets = {2, 2};
    for (const auto& e : inst.edges) c.edge_alphabets[e.id] = 2;
    for (const auto& id : {"s1u1", "s2u2", "u1m", "u2m", "u1t1", "u2t2", "nt1", "nt2"})
        c.encoders[id] = detail::iota_table(2);
    c.encoders["bottleneck"] = {0, 1, 1, 0};  // inputs (u1m, u2m)
    // t1 inputs (nt1, u1t1); t2 inputs (nt2, u2t2)
    c.decoders["t1"] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    c.decoders["t2"] = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    return b;
}

/// Butterfly with 2-bit sources. The bottleneck (2 symbols) carries the XOR
/// of the low bits; the high bit of each source reaches the far terminal on
/// its own side edge. Zero-error at 2 bits per source.
inline BundledCode butterfly4() {
    BundledCode b;
    auto& inst = b.instance;
    inst = detail::butterfly_skeleton(4);
    inst.edges = {{"s1u1", "s1", "u1", 4}, {"s2u2", "s2", "u2", 4},       {"u1m", "u1", "m", 2},
                  {"u2m", "u2", "m", 2},   {"bottleneck", "m", "n", 2},   {"u1t1", "u1", "t1", 4},
                  {"u2t2", "u2", "t2", 4}, {"nt1", "n", "t1", 2},         {"nt2", "n", "t2", 2},
                  {"u2t1", "u2", "t1", 2}, {"u1t2", "u1", "t2", 2}};
    auto& c = b.code;
    c.blocklength = 1;
    c.source_alphabets = {4, 4};
    for (const auto& e : inst.edges) c.edge_alphabets[e.id] = e.alphabet_size;
    for (const auto& id : {"s1u1", "s2u2", "u1t1", "u2t2"}) c.encoders[id] = detail::iota_table(4);
    for (const auto& id : {"u1m", "u2m"}) c.encoders[id] = {0, 1, 0, 1};
    for (const auto& id : {"u2t1", "u1t2"}) c.encoders[id] = {0, 0, 1, 1};
    for (const auto& id : {"nt1", "nt2"}) c.encoders[id] = detail::iota_table(2);
    c.encoders["bottleneck"] = {0, 1, 1, 0};
    // t1 inputs sorted by id: nt1 (2), u1t1 (4), u2t1 (2)
    // t2 inputs sorted by id: nt2 (2), u1t2 (2), u2t2 (4)
    MixedRadix r1({2, 4, 2}), r2({2, 2, 4});
    c.decoders["t1"].resize(r1.size());
    c.decoders["t2"].resize(r2.size());
    for (std::uint64_t idx = 0; idx < r1.size(); ++idx) {
        auto d = r1.decode(idx);
        auto x1 = static_cast<Symbol>(d[1]);
        auto low2 = static_cast<Symbol>(d[0] ^ (x1 & 1));
        c.decoders["t1"][idx] = {x1, static_cast<Symbol>(2 * d[2] + low2)};
    }
    for (std::uint64_t idx = 0; idx < r2.size(); ++idx) {
        auto d = r2.decode(idx);
        auto x2 = static_cast<Symbol>(d[2]);
        auto low1 = static_cast<Symbol>(d[0] ^ (x2 & 1));
        c.decoders["t2"][idx] = {static_cast<Symbol>(2 * d[1] + low1), x2};
    }
    return b;
}

struct PermutationFamily {
    std::uint64_t modulus = 0;
    std::vector<std::vector<Symbol>> perms;
};

inline bool is_bijection(const std::vector<Symbol>& p) {
    std::vector<char> seen(p.size(), 0);
    for (auto v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

/// pi_1..pi_w on Z_{mw}: pi_l advances the residue mod m inside block l of
/// the decomposition a = q m + r and fixes everything else; pi_w = id.
inline PermutationFamily n2_permutations(std::uint64_t m, std::uint64_t w) {
    if (m < 2 || w < 1) throw DomainError("n2 permutations need m >= 2 and w >= 1");
    PermutationFamily f;
    f.modulus = m * w;
    for (std::uint64_t l = 1; l <= w; ++l) {
        std::vector<Symbol> p(f.modulus);
        for (std::uint64_t a = 0; a < f.modulus; ++a) {
            auto q = a / m;
            auto r = a % m;
            p[a] = static_cast<Symbol>(l < w && q == l ? q * m + (r + 1) % m : a);
        }
        if (!is_bijection(p)) throw InternalError("n2 permutation is not a bijection");
        f.perms.push_back(std::move(p));
    }
    return f;
}

struct N2BlockReport {
    std::uint64_t block = 0;        // l, 1-based
    std::uint64_t permutation = 0;  // index of the permutation used, 1-based
    bool bijective = false;
    bool decoding_ok = false;
    std::optional<std::vector<Symbol>> counterexample;  // (x_1..x_{m+1}, z)
    bool identity = false;
    /// check_cwl verdicts for e_0, e_1..e_{m+1}, e (only for identity blocks
    /// and e_0, which never involves the permutation).
    std::vector<std::pair<std::string, bool>> cwl;
};

struct N2Report {
    std::uint64_t m = 0;
    std::uint64_t w = 0;
    bool assignment_is_reassignment = false;
    std::vector<N2BlockReport> blocks;
    bool ok() const {
        if (!assignment_is_reassignment) return false;
        for (const auto& b : blocks) {
            if (!b.bijective || !b.decoding_ok) return false;
            for (const auto& c : b.cwl)
                if (!c.second) return false;
        }
        return true;
    }
};

/// Exhaustive check of one block's relations x_i = e - e_i and
/// pi^{-1}(e - e_0) = z, plus linearity of every edge of identity blocks.
/// assignment[l-1] is the permutation (1-based) used by block l; it must be
/// a rearrangement of 1..w.
inline N2Report n2_code_check(std::uint64_t m, const PermutationFamily& family,
                              const std::vector<std::uint64_t>& assignment,
                              std::uint64_t cap = default_enumeration_cap, unsigned workers = 1) {
    const auto w = family.perms.size();
    const auto M = family.modulus;
    if (m < 2 || w == 0 || M != m * w) throw DomainError("permutation family does not match m");
    if (assignment.size() != w) throw DomainError("assignment needs one permutation per block");
    N2Report rep;
    rep.m = m;
    rep.w = w;
    {
        auto sorted = assignment;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::uint64_t> expect(w);
        std::iota(expect.begin(), expect.end(), 1);
        rep.assignment_is_reassignment = sorted == expect;
    }
    const std::uint64_t k = m + 1;  // x sources per block
    MixedRadix radix(std::vector<std::uint64_t>(k + 1, M));
    if (radix.size() > cap)
        throw ResourceError("block check needs " + std::to_string(radix.size()) + " tuples, cap is " +
                            std::to_string(cap));
    std::vector<FiniteGroup> groups(k + 1, make_cyclic(M));
    auto zm = make_cyclic(M);
    auto symbols = detail::iota_table(M);
    std::optional<bool> e0_cwl;
    for (std::uint64_t l = 1; l <= w; ++l) {
        N2BlockReport b;
        b.block = l;
        b.permutation = assignment[l - 1];
        if (b.permutation < 1 || b.permutation > w) throw DomainError("assignment refers to an unknown permutation");
        const auto& pi = family.perms[b.permutation - 1];
        if (pi.size() != M) throw DomainError("permutation has the wrong size");
        b.bijective = is_bijection(pi);
        b.identity = true;
        for (std::uint64_t a = 0; a < M; ++a) b.identity = b.identity && pi[a] == a;
        // first preimage; M marks none
        std::vector<std::uint64_t> inv(M, M);
        for (std::uint64_t a = M; a-- > 0;)
            if (pi[a] < M) inv[pi[a]] = a;

        std::mutex merge;
        std::optional<std::uint64_t> first_bad;
        // Values stay below 3M, so reduction is a few subtractions.
        auto red = [M](std::uint64_t v) {
            while (v >= M) v -= M;
            return v;
        };
        parallel_for(radix.size(), workers, [&](std::uint64_t begin, std::uint64_t end) {
            std::vector<std::uint64_t> d(k + 1);
            radix.decode(begin, d);
            std::uint64_t sum = 0;  // sum of the x digits mod M
            for (std::uint64_t j = 0; j < k; ++j) sum = red(sum + d[j]);
            for (std::uint64_t t = begin; t < end; ++t) {
                const auto z = d[k];
                const auto pz = pi[z] % M;
                const auto e0 = sum;
                const auto e = red(pz + sum);
                bool ok = inv[red(e + M - e0)] == z;
                for (std::uint64_t i = 0; i < k && ok; ++i) {
                    auto ei = red(pz + sum + M - d[i]);
                    ok = red(e + M - ei) == d[i];
                }
                if (!ok) {
                    std::lock_guard lock(merge);
                    if (!first_bad || t < *first_bad) first_bad = t;
                    return;
                }
                // odometer step; the last digit is z
                for (std::uint64_t j = k + 1; j-- > 0;) {
                    if (j < k) sum = red(sum + 1);
                    if (++d[j] < M) break;
                    d[j] = 0;
                }
            }
        });
        b.decoding_ok = !first_bad.has_value();
        if (first_bad) {
            auto d = radix.decode(*first_bad);
            b.counterexample = std::vector<Symbol>(d.begin(), d.end());
        }

        // Linearity over Z_M for the edges of this block.
        auto edge_fn = [&](std::int64_t which) {
            // which = -1: e_0, 0..k-1: e_{which+1}, k: e
            std::vector<Symbol> phi(radix.size());
            std::vector<std::uint64_t> d(k + 1, 0);
            std::uint64_t sum = 0;
            for (std::uint64_t t = 0; t < radix.size(); ++t) {
                std::uint64_t v = sum;
                if (which >= 0) v += pi[d[k]] % M;
                if (which >= 0 && static_cast<std::uint64_t>(which) < k) v += M - d[static_cast<std::size_t>(which)];
                phi[t] = static_cast<Symbol>(red(v));
                for (std::uint64_t j = k + 1; j-- > 0;) {
                    if (j < k) sum = red(sum + 1);
                    if (++d[j] < M) break;
                    d[j] = 0;
                }
            }
            return phi;
        };
        auto check = [&](const std::string& name, std::int64_t which) {
            auto phi = edge_fn(which);
            b.cwl.emplace_back(name, check_cwl(phi, groups, zm, symbols).has_value());
        };
        // e_0 never involves the permutation, so one check serves all blocks.
        if (!e0_cwl) e0_cwl = check_cwl(edge_fn(-1), groups, zm, symbols).has_value();
        b.cwl.emplace_back("e0", *e0_cwl);
        if (b.identity) {
            for (std::uint64_t i = 0; i < k; ++i) check("e" + std::to_string(i + 1), static_cast<std::int64_t>(i));
            check("e", static_cast<std::int64_t>(k));
        }
        rep.blocks.push_back(std::move(b));
    }
    return rep;
}

/// The original assignment: block l uses pi_l.
inline std::vector<std::uint64_t> n2_original_assignment(std::uint64_t w) {
    std::vector<std::uint64_t> a(w);
    std::iota(a.begin(), a.end(), 1);
    return a;
}

/// Block l uses the identity pi_w and block w takes pi_l.
inline std::vector<std::uint64_t> n2_identity_assignment(std::uint64_t w, std::uint64_t l) {
    if (l < 1 || l > w) throw DomainError("block index out of range");
    auto a = n2_original_assignment(w);
    std::swap(a[l - 1], a[w - 1]);
    return a;
}

/// pi_1 = id and pi_2 the base-m digit rotation on Z_{m^(alpha+1)}.
inline PermutationFamily n3_permutations(std::uint64_t m, std::uint64_t alpha) {
    if (m < 2 || alpha < 1) throw DomainError("n3 permutations need m >= 2 and alpha >= 1");
    PermutationFamily f;
    f.modulus = 1;
    for (std::uint64_t i = 0; i <= alpha; ++i) f.modulus *= m;
    std::vector<Symbol> id(f.modulus), rot(f.modulus);
    for (std::uint64_t a = 0; a < f.modulus; ++a) {
        id[a] = static_cast<Symbol>(a);
        // digits a_0..a_alpha, a = sum m^i a_i
        std::uint64_t rest = a, value = 0, power = m;
        std::uint64_t top = 0;
        for (std::uint64_t i = 0; i <= alpha; ++i) {
            auto digit = rest % m;
            rest /= m;
            if (i < alpha) {
                value += power * digit;
                power *= m;
            } else {
                top = digit;
            }
        }
        rot[a] = static_cast<Symbol>(value + top);
    }
    f.perms = {std::move(id), std::move(rot)};
    for (const auto& p : f.perms)
        if (!is_bijection(p)) throw InternalError("n3 permutation is not a bijection");
    return f;
}

struct N3Report {
    std::uint64_t modulus = 0;
    bool injective = false;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> collision;
};

/// Injectivity of a -> (m pi_1(a), s m^alpha pi_2(a)) on Z_{m^(alpha+1)}.
inline N3Report n3_injectivity(std::uint64_t m, std::uint64_t s, std::uint64_t alpha) {
    if (std::gcd(m, s) != 1) throw PreconditionError("n3 map requires gcd(m, s) = 1");
    auto f = n3_permutations(m, alpha);
    const auto M = f.modulus;
    std::uint64_t scale = s % M;
    for (std::uint64_t i = 0; i < alpha; ++i) scale = scale * m % M;
    N3Report r;
    r.modulus = M;
    std::vector<std::int64_t> seen(M * M, -1);
    for (std::uint64_t a = 0; a < M; ++a) {
        auto u = m * f.perms[0][a] % M;
        auto v = scale * f.perms[1][a] % M;
        auto& slot = seen[u * M + v];
        if (slot >= 0) {
            r.collision = std::make_pair(static_cast<std::uint64_t>(slot), a);
            return r;
        }
        slot = static_cast<std::int64_t>(a);
    }
    r.injective = true;
    return r;
}

struct IdentityResult {
    std::string name;
    bool holds = true;
    /// (a, b, c, d, e) of the first failure.
    std::optional<std::vector<std::uint64_t>> counterexample;
};

struct DoughertyReport {
    std::uint64_t modulus = 0;
    std::vector<Symbol> t;
    std::vector<IdentityResult> identities;
    /// t(2 t(c)) + t(2c) = c, the composed reading of the n43 line; reported
    /// separately and not part of all_hold().
    IdentityResult n43_composed;
    bool all_hold() const {
        return std::all_of(identities.begin(), identities.end(), [](const IdentityResult& r) { return r.holds; });
    }
};

/// Evaluates the decoding identities n40..n46 of the modified code over
/// Z_N from the edge messages, for every (a, b, c, d, e).
inline DoughertyReport dougherty_identity_check(std::uint64_t N, const std::vector<Symbol>& t) {
    if (N < 1) throw DomainError("alphabet size must be positive");
    if (t.size() != N) throw DomainError("t must be total on Z_N");
    for (auto v : t)
        if (v >= N) throw DomainError("t takes a value outside Z_N");
    DoughertyReport r;
    r.modulus = N;
    r.t = t;
    const std::vector<std::string> names{"n40", "n41", "n42", "n43", "n44", "n45", "n46"};
    for (const auto& n : names) r.identities.push_back({n, true, std::nullopt});
    r.n43_composed = {"n43-composed", true, std::nullopt};
    auto add = [N](std::uint64_t x, std::uint64_t y) { return (x + y) % N; };
    auto sub = [N](std::uint64_t x, std::uint64_t y) { return (x + N - y) % N; };
    auto T = [&](std::uint64_t x) -> std::uint64_t { return t[x % N]; };
    auto fail = [](IdentityResult& res, std::vector<std::uint64_t> at) {
        if (res.holds) {
            res.holds = false;
            res.counterexample = std::move(at);
        }
    };
    for (std::uint64_t a = 0; a < N; ++a)
        for (std::uint64_t b = 0; b < N; ++b)
            for (std::uint64_t c = 0; c < N; ++c)
                for (std::uint64_t d = 0; d < N; ++d)
                    for (std::uint64_t e = 0; e < N; ++e) {
                        const std::vector<std::uint64_t> at{a, b, c, d, e};
                        // network B edges
                        auto e19 = add(add(a, b), T(c));
                        auto e31 = add(a, b);
                        auto e32 = add(a, T(c));
                        auto e33 = add(b, T(c));
                        // network C edges
                        auto e20 = add(add(c, d), e);
                        auto e34 = add(c, d);
                        auto e35 = add(c, e);
                        auto e36 = add(d, e);
                        if (T(sub(e19, e31)) != c) fail(r.identities[0], at);
                        if (sub(e19, e32) != b) fail(r.identities[1], at);
                        if (sub(e19, e33) != a) fail(r.identities[2], at);
                        if (add(sub(add(e33, e32), e31), T(sub(add(e34, e35), e36))) != c) fail(r.identities[3], at);
                        if (sub(e20, e34) != e) fail(r.identities[4], at);
                        if (sub(e20, e35) != d) fail(r.identities[5], at);
                        if (sub(e20, e36) != c) fail(r.identities[6], at);
                        if (add(T(sub(add(e33, e32), e31)), T(sub(add(e34, e35), e36))) != c) fail(r.n43_composed, at);
                    }
    return r;
}

struct DoughertySearch {
    std::uint64_t modulus = 0;
    std::uint64_t candidates = 0;
    /// Every t (lexicographic order) for which n40..n46 all hold.
    std::vector<std::vector<Symbol>> solutions;
    /// Subset of solutions that also satisfy the composed n43 reading.
    std::vector<std::vector<Symbol>> composed_solutions;
};

/// All t: Z_N -> Z_N making the identities hold, by exhaustive search.
inline DoughertySearch dougherty_t_search(std::uint64_t N, std::uint64_t cap = std::uint64_t{1} << 20) {
    if (N < 1) throw DomainError("alphabet size must be positive");
    std::uint64_t total = 1;
    for (std::uint64_t k = 0; k < N; ++k) {
        if (total > cap / N) throw ResourceError("search over N^N functions exceeds the cap");
        total *= N;
    }
    DoughertySearch s;
    s.modulus = N;
    s.candidates = total;
    MixedRadix radix(std::vector<std::uint64_t>(N, N));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        auto d = radix.decode(idx);
        std::vector<Symbol> t(d.begin(), d.end());
        // cheap filters first: the only identities that involve t
        bool ok = true;
        for (std::uint64_t c = 0; c < N && ok; ++c)
            ok = t[t[c]] == c && (t[2 * c % N] + 2 * t[c]) % N == c;
        if (!ok) continue;
        auto rep = dougherty_identity_check(N, t);
        if (!rep.all_hold()) continue;
        if (rep.n43_composed.holds) s.composed_solutions.push_back(t);
        s.solutions.push_back(std::move(t));
    }
    return s;
}

}  // namespace edgerm
