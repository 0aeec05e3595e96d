#pragma once

// Test-side oracles. Each recomputes a library quantity by a different route (enumeration,
// naive expansion or a full presentation) so the suites never check a function against itself.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "iwalab/iwalab.hpp"

namespace oracle {

using namespace iwalab;
using Vec = std::vector<u64>;

/// Schoolbook product of two coefficient lists, reduced mod (q, T^len).
inline Vec naive_mul(const Vec& a, const Vec& b, u64 q, std::size_t len) {
    Vec r(len, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j)
            r[i + j] = static_cast<u64>((static_cast<u128>(a[i]) * b[j] + r[i + j]) % q);
    return r;
}

/// f((1+T)^{-1} - 1) as sum_k c_k S^k with S from the geometric series and S^k by repeated products.
inline Vec iota_by_powers(const PowerSeries& f) {
    const u64 q = f.precision().ring().value();
    const std::size_t M = f.size();
    Vec S(M, 0);
    for (std::size_t k = 1; k < M; ++k) S[k] = k % 2 ? q - 1 : 1;  // -T + T^2 - T^3 + ...
    Vec acc(M, 0), pw(M, 0);
    pw[0] = 1 % q;
    for (std::size_t k = 0; k < M; ++k) {
        for (std::size_t i = 0; i < M; ++i) acc[i] = static_cast<u64>((static_cast<u128>(f[k]) * pw[i] + acc[i]) % q);
        pw = naive_mul(pw, S, q, M);
    }
    return acc;
}

/// All x in (Z/q)^k, as a list of vectors (k small).
inline std::vector<Vec> all_vectors(u64 q, std::size_t k) {
    std::vector<Vec> out{Vec(k, 0)};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Vec> next;
        for (const auto& v : out)
            for (u64 x = 0; x < q; ++x) {
                Vec w = v;
                w[i] = x;
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

/// log_p |coker A| by enumerating the image of A.
inline int cokernel_exponent_brute(const ModMatrix& a, const Modulus& R) {
    std::set<Vec> image;
    for (const auto& x : all_vectors(R.value(), a.cols())) image.insert(apply(a, x, R));
    int e = 0;
    for (std::size_t s = image.size(); s > 1; s /= R.p()) ++e;
    return static_cast<int>(a.rows()) * R.exponent() - e;
}

/// The subgroup generated by `gens`, by closure under addition.
inline std::set<Vec> span(const std::vector<Vec>& gens, const Modulus& R, std::size_t k) {
    std::set<Vec> seen{Vec(k, 0)};
    std::vector<Vec> frontier{Vec(k, 0)};
    while (!frontier.empty()) {
        std::vector<Vec> next;
        for (const auto& v : frontier)
            for (const auto& g : gens) {
                Vec w(k);
                for (std::size_t i = 0; i < k; ++i) w[i] = R.add(v[i], R.reduce_u(g[i]));
                if (seen.insert(w).second) next.push_back(std::move(w));
            }
        frontier = std::move(next);
    }
    return seen;
}

inline std::set<Vec> annihilator_brute(const FinitePairing& pair, const std::set<Vec>& c) {
    std::set<Vec> out;
    for (const auto& y : all_vectors(pair.ring().value(), pair.rank())) {
        bool ok = true;
        for (const auto& x : c)
            if (pair.pair(x, y) != 0) {
                ok = false;
                break;
            }
        if (ok) out.insert(y);
    }
    return out;
}

inline int log_p(std::size_t size, u64 p) {
    int e = 0;
    while (size > 1) {
        size /= p;
        ++e;
    }
    return e;
}

// Matrix of multiplication by g on (Z/q)[T]/(w), built by explicit shifting and reduction.
inline ModMatrix mult_matrix_by_shifts(const Vec& g, const Vec& w, const Modulus& R) {
    const std::size_t D = w.size() - 1;
    auto reduce = [&](Vec v) {
        for (std::size_t i = v.size(); i-- > D;) {
            const u64 c = v[i];
            if (c == 0) continue;
            for (std::size_t j = 0; j <= D; ++j) v[i - D + j] = R.sub(v[i - D + j], R.mul(c, w[j]));
        }
        v.resize(D, 0);
        return v;
    };
    ModMatrix out(D, D);
    for (std::size_t col = 0; col < D; ++col) {
        Vec v(col + g.size(), 0);
        for (std::size_t i = 0; i < g.size(); ++i) v[col + i] = R.reduce_u(g[i]);
        Vec r = reduce(v);
        for (std::size_t i = 0; i < D; ++i) out(i, col) = r[i];
    }
    return out;
}

// (1+T)^{p^n} - 1 from Pascal's triangle.
inline Vec omega_by_binomials(u64 pn, const Modulus& R) {
    Vec row{1 % R.value()};
    for (u64 i = 0; i < pn; ++i) {
        Vec nx(row.size() + 1, 0);
        for (std::size_t k = 0; k < row.size(); ++k) {
            nx[k] = R.add(nx[k], row[k]);
            nx[k + 1] = R.add(nx[k + 1], row[k]);
        }
        row = std::move(nx);
    }
    row[0] = R.sub(row[0], 1 % R.value());
    return row;
}

/// log_p |M / (p^m, omega_n) M| from one presentation of the whole module: the direct sum of
/// copies of A = Z/p^m[T]/(omega_n), one per summand, modulo the relation columns of every
/// summand (p^alpha, f^beta, or p^e together with T), then a single Smith form.
inline long long coinvariant_size_presentation(const ElementaryModule& mod, int m, int n) {
    const Precision& prec = mod.precision();
    const Modulus R(prec.p(), m);
    u64 pn = 1;
    for (int i = 0; i < n; ++i) pn *= prec.p();
    const Vec w = omega_by_binomials(pn, R);
    const std::size_t D = pn;

    std::vector<std::vector<ModMatrix>> blocks;  // per summand: list of relation matrices
    for (int i = 0; i < mod.free_rank(); ++i) blocks.push_back({});
    auto scalar = [&](u64 s) {
        ModMatrix a(D, D);
        for (std::size_t i = 0; i < D; ++i) a(i, i) = R.reduce_u(s);
        return a;
    };
    for (int a : mod.p_parts()) blocks.push_back({scalar(R.pow(prec.p(), static_cast<u64>(a)))});
    for (const auto& pp : mod.poly_parts()) {
        Vec g{1 % R.value()};
        Vec f = poly::lift(pp.f.coeffs(), R);
        for (int b = 0; b < pp.beta; ++b) g = naive_mul(g, f, R.value(), g.size() + f.size() - 1);
        blocks.push_back({mult_matrix_by_shifts(g, w, R)});
    }
    for (int e : mod.finite_parts())
        blocks.push_back({scalar(R.pow(prec.p(), static_cast<u64>(e))), mult_matrix_by_shifts({0, 1}, w, R)});

    std::size_t cols = 0;
    for (const auto& b : blocks) cols += b.size() * D;
    const std::size_t rows = blocks.size() * D;
    if (rows == 0) return 0;
    ModMatrix big(rows, std::max<std::size_t>(cols, 1));
    std::size_t c0 = 0;
    for (std::size_t s = 0; s < blocks.size(); ++s)
        for (const auto& rel : blocks[s]) {
            for (std::size_t i = 0; i < D; ++i)
                for (std::size_t j = 0; j < D; ++j) big(s * D + i, c0 + j) = rel(i, j);
            c0 += D;
        }
    long long e = 0;
    for (int v : cokernel_divisors(big, R)) e += v;
    return e;
}

/// Same quotient through the other presentation: multiplication by omega_n on Z/p^m[T]/(f^beta).
inline long long poly_part_size_dual(const PolyPart& pp, int m, int n) {
    const Precision& prec = pp.f.precision();
    const Modulus R(prec.p(), m);
    u64 pn = 1;
    for (int i = 0; i < n; ++i) pn *= prec.p();
    Vec g{1 % R.value()};
    const Vec f = poly::lift(pp.f.coeffs(), R);
    for (int b = 0; b < pp.beta; ++b) g = naive_mul(g, f, R.value(), g.size() + f.size() - 1);
    long long e = 0;
    for (int v : cokernel_divisors(mult_matrix_by_shifts(omega_by_binomials(pn, R), g, R), R)) e += v;
    return e;
}

// ---- random generation -------------------------------------------------------------------

inline DistinguishedPoly random_distinguished(std::mt19937_64& rng, const Precision& prec, int deg) {
    const Modulus& R = prec.ring();
    std::vector<u64> c(static_cast<std::size_t>(deg) + 1);
    std::uniform_int_distribution<u64> dist(0, R.value() / prec.p() - 1);
    for (int i = 0; i < deg; ++i) c[static_cast<std::size_t>(i)] = R.mul(dist(rng), prec.p());
    c[static_cast<std::size_t>(deg)] = 1;
    return DistinguishedPoly(prec, c);
}

struct ModuleShape {
    int max_summands = 3;
    int max_rank = 1;
    int max_alpha = 3;
    int max_deg = 3;
    int max_beta = 2;
    bool finite = false;
};

/// A random elementary module; retries until the poly parts are pairwise coprime at precision.
inline ElementaryModule random_module(std::mt19937_64& rng, const Precision& prec, const ModuleShape& s = {}) {
    std::uniform_int_distribution<int> pick(0, 99);
    for (;;) {
        const int count = 1 + pick(rng) % s.max_summands;
        int rank = 0;
        std::vector<int> ps, fin;
        std::vector<PolyPart> polys;
        for (int i = 0; i < count; ++i) {
            const int kind = pick(rng) % (s.finite ? 4 : 3);
            if (kind == 0 && rank < s.max_rank)
                ++rank;
            else if (kind == 1)
                ps.push_back(1 + pick(rng) % s.max_alpha);
            else if (kind == 3)
                fin.push_back(1 + pick(rng) % 2);
            else {
                // reuse an existing f now and then so repeated divisors get exercised
                if (!polys.empty() && pick(rng) % 4 == 0)
                    polys.push_back({polys.front().f, 1 + pick(rng) % s.max_beta});
                else
                    polys.push_back({random_distinguished(rng, prec, 1 + pick(rng) % s.max_deg), 1 + pick(rng) % s.max_beta});
            }
        }
        try {
            return ElementaryModule(prec, rank, ps, polys, fin);
        } catch (const error&) {
            // not coprime at precision; draw again
        }
    }
}

inline PowerSeries random_series(std::mt19937_64& rng, const Precision& prec) {
    std::uniform_int_distribution<u64> dist(0, prec.ring().value() - 1);
    std::vector<u64> c(static_cast<std::size_t>(prec.M()));
    for (auto& x : c) x = dist(rng);
    return PowerSeries::from_residues(prec, c);
}

/// A random series whose first unit coefficient sits at index `d`.
inline PowerSeries random_preparable(std::mt19937_64& rng, const Precision& prec, int d) {
    const Modulus& R = prec.ring();
    std::uniform_int_distribution<u64> dist(0, R.value() - 1);
    std::vector<u64> c(static_cast<std::size_t>(prec.M()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        u64 x = dist(rng);
        if (static_cast<int>(i) < d) x = R.mul(x, prec.p());
        if (static_cast<int>(i) == d && !R.is_unit(x)) x = R.add(x, 1);
        c[i] = x;
    }
    return PowerSeries::from_residues(prec, c);
}

}  // namespace oracle
