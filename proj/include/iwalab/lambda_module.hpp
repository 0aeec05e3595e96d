#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/expr.hpp"
#include "iwalab/matrix.hpp"
#include "iwalab/power_series.hpp"

namespace iwalab {

/// log_p of a finite group order (or of a ratio of orders when negative).
struct SizeExponent {
    long long value = 0;

    SizeExponent operator+(SizeExponent o) const noexcept { return {value + o.value}; }
    SizeExponent operator-(SizeExponent o) const noexcept { return {value - o.value}; }
    SizeExponent& operator+=(SizeExponent o) noexcept {
        value += o.value;
        return *this;
    }
    auto operator<=>(const SizeExponent&) const = default;
};

/// Summand Lambda / f^beta.
struct PolyPart {
    DistinguishedPoly f;
    int beta;

    bool operator==(const PolyPart& o) const noexcept { return beta == o.beta && f == o.f; }
    bool operator<(const PolyPart& o) const noexcept {
        if (!(f == o.f)) return f < o.f;
        return beta < o.beta;
    }
};

/// A finitely generated Lambda-module in elementary form
///   Lambda^r (+) (+)_i Lambda/p^{alpha_i} (+) (+)_j Lambda/f_j^{beta_j} (+) (+)_k Lambda/(p^{e_k}, T).
///
/// The last family holds finite summands. They are invisible to every pseudo-isomorphism
/// invariant and exist so that Selmer data can carry a finite submodule explicitly.
/// Irreducibility of the f_j is the caller's claim; distinct f_j must be coprime at precision.
class ElementaryModule {
public:
    explicit ElementaryModule(const Precision& prec, int free_rank = 0, std::vector<int> p_parts = {},
                              std::vector<PolyPart> poly_parts = {}, std::vector<int> finite_parts = {})
        : prec_(prec),
          rank_(free_rank),
          p_parts_(std::move(p_parts)),
          poly_parts_(std::move(poly_parts)),
          finite_parts_(std::move(finite_parts)) {
        validate();
        std::sort(p_parts_.begin(), p_parts_.end());
        std::sort(poly_parts_.begin(), poly_parts_.end());
        std::sort(finite_parts_.begin(), finite_parts_.end());
    }

    static ElementaryModule zero(const Precision& prec) { return ElementaryModule(prec); }

    const Precision& precision() const noexcept { return prec_; }
    int free_rank() const noexcept { return rank_; }
    const std::vector<int>& p_parts() const noexcept { return p_parts_; }
    const std::vector<PolyPart>& poly_parts() const noexcept { return poly_parts_; }
    const std::vector<int>& finite_parts() const noexcept { return finite_parts_; }

    bool is_zero() const noexcept {
        return rank_ == 0 && p_parts_.empty() && poly_parts_.empty() && finite_parts_.empty();
    }
    bool is_torsion() const noexcept { return rank_ == 0; }

    /// The torsion submodule: drop the free part.
    ElementaryModule torsion() const { return ElementaryModule(prec_, 0, p_parts_, poly_parts_, finite_parts_); }

    ElementaryModule direct_sum(const ElementaryModule& o) const {
        require_same(prec_, o.prec_);
        auto cat = [](auto a, const auto& b) {
            a.insert(a.end(), b.begin(), b.end());
            return a;
        };
        return ElementaryModule(prec_, rank_ + o.rank_, cat(p_parts_, o.p_parts_), cat(poly_parts_, o.poly_parts_),
                                cat(finite_parts_, o.finite_parts_));
    }

    bool operator==(const ElementaryModule& o) const noexcept {
        return prec_ == o.prec_ && rank_ == o.rank_ && p_parts_ == o.p_parts_ && poly_parts_ == o.poly_parts_ &&
               finite_parts_ == o.finite_parts_;
    }

    std::string describe() const {
        std::string out;
        auto sep = [&] {
            if (!out.empty()) out += " + ";
        };
        if (rank_ > 0) out += rank_ == 1 ? "L" : "L^" + std::to_string(rank_);
        for (int a : p_parts_) {
            sep();
            out += "L/p^" + std::to_string(a);
        }
        for (const auto& pp : poly_parts_) {
            sep();
            out += "L/(" + to_string(pp.f) + ")";
            if (pp.beta > 1) out += "^" + std::to_string(pp.beta);
        }
        for (int e : finite_parts_) {
            sep();
            out += "L/(p^" + std::to_string(e) + ",T)";
        }
        return out.empty() ? "0" : out;
    }

private:
    void validate() const {
        if (rank_ < 0) throw error(errc::invalid_argument, "free rank must be >= 0");
        for (int a : p_parts_)
            if (a < 1) throw error(errc::invalid_argument, "p-part exponents must be >= 1");
        for (int e : finite_parts_)
            if (e < 1) throw error(errc::invalid_argument, "finite-part exponents must be >= 1");
        for (const auto& pp : poly_parts_) {
            require_same(prec_, pp.f.precision());
            if (pp.beta < 1) throw error(errc::invalid_argument, "poly-part exponents must be >= 1");
            if (pp.f.degree() < 1) throw error(errc::invalid_argument, "poly parts need degree >= 1");
        }
        const Modulus& R = prec_.ring();
        for (std::size_t i = 0; i < poly_parts_.size(); ++i)
            for (std::size_t j = i + 1; j < poly_parts_.size(); ++j) {
                const auto& a = poly_parts_[i].f;
                const auto& b = poly_parts_[j].f;
                if (a == b) continue;
                if (poly::resultant(a.coeffs(), b.coeffs(), R) == 0)
                    throw error(errc::invalid_argument,
                                to_string(a) + " and " + to_string(b) + " are not coprime at precision " + prec_.to_string());
            }
    }

    Precision prec_;
    int rank_;
    std::vector<int> p_parts_;
    std::vector<PolyPart> poly_parts_;
    std::vector<int> finite_parts_;
};

struct IwasawaInvariants {
    int rank = 0;
    int mu = 0;
    int lambda = 0;
    int char_p_exponent = 0;
    DistinguishedPoly char_poly;
};

/// rank, mu = sum alpha_i, lambda = sum beta_j deg f_j, and Char = p^mu * prod f_j^beta_j
/// (the free part does not contribute to Char).
inline IwasawaInvariants invariants(const ElementaryModule& mod) {
    IwasawaInvariants inv{mod.free_rank(), 0, 0, 0, DistinguishedPoly::one(mod.precision())};
    for (int a : mod.p_parts()) inv.mu += a;
    inv.char_p_exponent = inv.mu;
    for (const auto& pp : mod.poly_parts()) {
        inv.lambda += pp.beta * pp.f.degree();
        inv.char_poly = inv.char_poly * pp.f.pow(pp.beta);
    }
    return inv;
}

/// The module with Lambda acting through iota: Lambda/g becomes Lambda/g^iota.
inline ElementaryModule iota_module(const ElementaryModule& mod) {
    std::vector<PolyPart> parts;
    parts.reserve(mod.poly_parts().size());
    for (const auto& pp : mod.poly_parts()) parts.push_back({iota_distinguished(pp.f), pp.beta});
    return ElementaryModule(mod.precision(), mod.free_rank(), mod.p_parts(), std::move(parts), mod.finite_parts());
}

namespace detail {

inline void check_levels(const Precision& prec, int m, int n) {
    if (m < 1) throw error(errc::invalid_argument, "m must be >= 1");
    if (m > prec.N())
        throw error(errc::insufficient_precision,
                    "m=" + std::to_string(m) + " exceeds the coefficient precision N=" + std::to_string(prec.N()));
    (void)omega(prec, n);  // enforces p^n < M
}

inline int ipow(u64 p, int n) {
    int r = 1;
    for (int i = 0; i < n; ++i) r *= static_cast<int>(p);
    return r;
}

}  // namespace detail

/// Elementary divisors of (M/p^m)_{Gamma_n} = M / (p^m, omega_n) M, as exponents.
/// A poly part contributes Z/p^m[T]/(f^beta, omega_n), read off the Smith form of
/// multiplication by f^beta on the free Z/p^m-module Z/p^m[T]/(omega_n) of rank p^n.
inline std::vector<int> coinvariant_divisors(const ElementaryModule& mod, int m, int n) {
    const Precision& prec = mod.precision();
    detail::check_levels(prec, m, n);
    const Modulus R(prec.p(), m);
    const int pn = detail::ipow(prec.p(), n);
    std::vector<int> out;
    for (int i = 0; i < mod.free_rank() * pn; ++i) out.push_back(m);
    for (int a : mod.p_parts())
        for (int i = 0; i < pn; ++i) out.push_back(std::min(a, m));
    if (!mod.poly_parts().empty()) {
        const poly::Coeffs w = omega_coeffs(static_cast<u64>(pn), R);
        for (const auto& pp : mod.poly_parts()) {
            poly::Coeffs g = poly::pow(poly::lift(pp.f.coeffs(), R), static_cast<unsigned>(pp.beta), R);
            for (int v : cokernel_divisors(poly::multiplication_matrix(g, w, R), R)) out.push_back(v);
        }
    }
    for (int e : mod.finite_parts()) out.push_back(std::min(e, m));
    std::sort(out.begin(), out.end());
    return out;
}

/// log_p |(M/p^m)_{Gamma_n}|.
inline SizeExponent coinvariant_size(const ElementaryModule& mod, int m, int n) {
    SizeExponent e;
    for (int v : coinvariant_divisors(mod, m, n)) e.value += v;
    return e;
}

/// mu(M/p^m) = m r + sum_i min(alpha_i, m): the growth rate of coinvariant_size in p^n.
inline int mu_mod_pm(const ElementaryModule& mod, int m) {
    int mu = m * mod.free_rank();
    for (int a : mod.p_parts()) mu += std::min(a, m);
    return mu;
}

/// Least n >= 0 from which coinvariant_size(mod, m, n) - mu_mod_pm(mod, m) p^n is constant.
///
/// Free and p-power summands follow the law exactly at every n and finite summands do not
/// move. A poly part gives the finite ring A = Z/p^m[T]/(f^beta), in which 1+T is unipotent;
/// once (1+T)^{p^n} = 1 in A the summand's coinvariants are all of A.
inline int stable_level(const ElementaryModule& mod, int m) {
    const Precision& prec = mod.precision();
    if (m < 1 || m > prec.N()) throw error(errc::insufficient_precision, "m must lie in [1, N]");
    const Modulus R(prec.p(), m);
    int level = 0;
    for (const auto& pp : mod.poly_parts()) {
        const poly::Coeffs g = poly::pow(poly::lift(pp.f.coeffs(), R), static_cast<unsigned>(pp.beta), R);
        poly::Coeffs x = poly::rem_monic({1 % R.value(), 1 % R.value()}, g, R);
        int n = 0;
        for (;;) {
            poly::Coeffs t = x;
            poly::trim(t);
            if (t == poly::Coeffs{1 % R.value()}) break;
            poly::Coeffs y{1 % R.value()};
            for (u64 i = 0; i < prec.p(); ++i) y = poly::rem_monic(poly::mul(y, x, R), g, R);
            x = std::move(y);
            ++n;
        }
        level = std::max(level, n);
    }
    return level;
}

/// Elementary divisors of ((M (x)_Zp Lambda/f) / p^m)_{Gamma_n}, Gamma acting diagonally.
///
/// Free and p-power summands untwist (Zp[[Gamma]] (x) B is induced), giving deg f * p^n
/// copies of Z/p^{min(alpha, m)}. A summand Lambda/g with g distinguished is computed as the
/// cokernel of A (x) Q - I, where A and Q are multiplication by (1+T)^{p^n} on
/// Z/p^m[T]/(g) and on Z/p^m[T]/(f).
inline std::vector<int> tensor_coinvariant_divisors(const ElementaryModule& mod, const DistinguishedPoly& f, int m,
                                                    int n) {
    const Precision& prec = mod.precision();
    require_same(prec, f.precision());
    detail::check_levels(prec, m, n);
    const Modulus R(prec.p(), m);
    const int pn = detail::ipow(prec.p(), n);
    const int d = f.degree();
    const poly::Coeffs fR = poly::lift(f.coeffs(), R);
    const poly::Coeffs gamma_n = poly::pow({1, 1}, static_cast<unsigned>(pn), R);
    const ModMatrix Q = poly::multiplication_matrix(gamma_n, fR, R);

    std::vector<int> out;
    for (int i = 0; i < mod.free_rank() * pn * d; ++i) out.push_back(m);
    for (int a : mod.p_parts())
        for (int i = 0; i < pn * d; ++i) out.push_back(std::min(a, m));
    for (const auto& pp : mod.poly_parts()) {
        poly::Coeffs g = poly::pow(poly::lift(pp.f.coeffs(), R), static_cast<unsigned>(pp.beta), R);
        const ModMatrix A = poly::multiplication_matrix(gamma_n, g, R);
        const std::size_t D = A.rows(), dd = Q.rows();
        ModMatrix X(D * dd, D * dd);
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j)
                for (std::size_t k = 0; k < dd; ++k)
                    for (std::size_t l = 0; l < dd; ++l) X(i * dd + k, j * dd + l) = R.mul(A(i, j), Q(k, l));
        for (std::size_t i = 0; i < D * dd; ++i) X(i, i) = R.sub(X(i, i), 1 % R.value());
        for (int v : cokernel_divisors(X, R)) out.push_back(v);
    }
    for (int e : mod.finite_parts()) {
        const Modulus Re(prec.p(), std::min(e, m));
        ModMatrix X = poly::multiplication_matrix(poly::lift(gamma_n, Re), poly::lift(fR, Re), Re);
        for (std::size_t i = 0; i < X.rows(); ++i) X(i, i) = Re.sub(X(i, i), 1 % Re.value());
        for (int v : cokernel_divisors(X, Re)) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline SizeExponent tensor_coinvariant_size(const ElementaryModule& mod, const DistinguishedPoly& f, int m, int n) {
    SizeExponent e;
    for (int v : tensor_coinvariant_divisors(mod, f, m, n)) e.value += v;
    return e;
}

/// corank_Zp (M^dual (x) Lambda/f^n)^Gamma = rank_Zp Hom_Lambda(M, Lambda/f^n)
///   = (r n + sum_j [f_j = f] min(beta_j, n)) deg f.
/// Each free summand contributes Hom(Lambda, Lambda/f^n) = Lambda/f^n of rank n deg f.
inline int hom_corank(const ElementaryModule& mod, const DistinguishedPoly& f, int n) {
    require_same(mod.precision(), f.precision());
    if (n < 0) throw error(errc::invalid_argument, "n must be >= 0");
    int count = mod.free_rank() * n;
    for (const auto& pp : mod.poly_parts())
        if (pp.f == f) count += std::min(pp.beta, n);
    return count * f.degree();
}

namespace detail {

// rank over Qp of the kernel of the stacked relation matrices acting on Zp[T]/(f^n),
// read off at working precision W; also returns the largest finite valuation seen.
struct KernelReading {
    int rank;
    int max_valuation;
};

using RelationsAt = std::function<std::vector<poly::Coeffs>(const Modulus&)>;

inline KernelReading hom_kernel_reading(const RelationsAt& relations, const poly::Coeffs& f_int, int n, u64 p, int W) {
    const Modulus R(p, W);
    const poly::Coeffs fn = poly::pow(poly::lift(f_int, R), static_cast<unsigned>(n), R);
    const std::size_t D = fn.size() - 1;
    const std::vector<poly::Coeffs> rels = relations(R);
    if (rels.empty()) return {static_cast<int>(D), -1};
    ModMatrix stacked(D * rels.size(), D);
    for (std::size_t r = 0; r < rels.size(); ++r) {
        ModMatrix block = poly::multiplication_matrix(rels[r], fn, R);
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) stacked(r * D + i, j) = block(i, j);
    }
    int nonzero = 0, vmax = -1;
    for (int v : smith_form(stacked, R).valuations)
        if (v < W) {
            ++nonzero;
            vmax = std::max(vmax, v);
        }
    return {static_cast<int>(D) - nonzero, vmax};
}

inline int max_working_exponent(u64 p) {
    int e = 0;
    u64 q = 1;
    while (q <= kMaxModulus / p) {
        q *= p;
        ++e;
    }
    return e;
}

}  // namespace detail

/// Independent route to hom_corank: solve for Lambda-linear maps M -> Lambda/f^n summand by
/// summand. A map out of Lambda/(g_1, ..., g_k) is an x in Zp[T]/(f^n) with g_i x = 0, so
/// each summand contributes the Zp-rank of the kernel of the stacked multiplication
/// matrices. Coefficients are the canonical integer lifts; the rank is read at working
/// precision W and confirmed at 2W, doubling until the two readings agree.
inline int hom_corank_oracle(const ElementaryModule& mod, const DistinguishedPoly& f, int n) {
    const Precision& prec = mod.precision();
    require_same(prec, f.precision());
    if (n < 0) throw error(errc::invalid_argument, "n must be >= 0");
    if (n == 0) return 0;
    const u64 p = prec.p();
    const int wmax = detail::max_working_exponent(p);

    auto summand_rank = [&](const detail::RelationsAt& rels) {
        int W = std::min(prec.N() + 2, wmax);
        for (;;) {
            const int W2 = std::min(2 * W, wmax);
            if (W2 == W)
                throw error(errc::oracle_inconclusive, "working precision exhausted at p^" + std::to_string(W));
            auto lo = detail::hom_kernel_reading(rels, f.coeffs(), n, p, W);
            auto hi = detail::hom_kernel_reading(rels, f.coeffs(), n, p, W2);
            if (lo.rank == hi.rank && hi.max_valuation < W) return lo.rank;
            W = W2;
        }
    };
    auto p_power = [](const Modulus& R, int e) { return poly::Coeffs{R.pow(R.p(), static_cast<u64>(e))}; };

    int total = 0;
    if (mod.free_rank() > 0) total += mod.free_rank() * summand_rank([](const Modulus&) { return std::vector<poly::Coeffs>{}; });
    for (int a : mod.p_parts())
        total += summand_rank([&](const Modulus& R) { return std::vector<poly::Coeffs>{p_power(R, a)}; });
    for (const auto& pp : mod.poly_parts())
        total += summand_rank([&](const Modulus& R) {
            return std::vector<poly::Coeffs>{poly::pow(poly::lift(pp.f.coeffs(), R), static_cast<unsigned>(pp.beta), R)};
        });
    for (int e : mod.finite_parts())
        total += summand_rank([&](const Modulus& R) {
            return std::vector<poly::Coeffs>{p_power(R, e), poly::Coeffs{0, 1 % R.value()}};
        });
    return total;
}

/// Pseudo-isomorphism of torsion parts: equal multisets of p-power and polynomial elementary
/// divisors. Free rank and finite summands are ignored.
inline bool pseudo_isomorphic(const ElementaryModule& a, const ElementaryModule& b) {
    if (!(a.precision() == b.precision())) return false;
    return a.p_parts() == b.p_parts() && a.poly_parts() == b.poly_parts();
}

struct CompareVerdict {
    struct CoinvariantFailure {
        int m;
        int n;
        long long previous_gap;
        long long gap;
    };
    struct CorankFailure {
        DistinguishedPoly f;
        int n;
        int corank_a;
        int corank_b;
    };

    bool bounded_coinvariants = true;  // hypothesis (1) on the tested range
    std::optional<CoinvariantFailure> coinvariant_failure;
    bool coranks_agree = true;  // hypothesis (2)
    std::optional<CorankFailure> corank_failure;
    bool ranks_equal = false;
    bool torsion_pseudo_isomorphic = false;

    bool hypotheses_hold() const noexcept { return bounded_coinvariants && coranks_agree; }
    bool conclusion_holds() const noexcept { return ranks_equal && torsion_pseudo_isomorphic; }
};

/// Check the two comparison hypotheses and the conclusion independently.
///
/// Hypothesis (1) asks that the exponent gap coinvariant_size(a) - coinvariant_size(b) stay
/// bounded in n for every m. Past stable_level both sizes are mu p^n + const, so the gap is
/// bounded iff it agrees at two consecutive stable levels. Those levels are the last two of
/// n_range, moved up to the stable range when needed; they must still satisfy p^n < M.
/// Hypothesis (2) compares hom_corank for every f in f_list and every n in n_range.
inline CompareVerdict compare_modules(const ElementaryModule& a, const ElementaryModule& b, std::vector<int> m_range,
                                      std::vector<int> n_range, const std::vector<DistinguishedPoly>& f_list) {
    require_same(a.precision(), b.precision());
    std::sort(n_range.begin(), n_range.end());
    std::sort(m_range.begin(), m_range.end());
    if (n_range.empty()) throw error(errc::invalid_argument, "empty n range");
    CompareVerdict v;

    for (int m : m_range) {
        const int n1 = std::max({n_range.back() - 1, stable_level(a, m), stable_level(b, m), 0});
        const long long g0 = (coinvariant_size(a, m, n1) - coinvariant_size(b, m, n1)).value;
        const long long g1 = (coinvariant_size(a, m, n1 + 1) - coinvariant_size(b, m, n1 + 1)).value;
        if (g0 != g1) {
            v.bounded_coinvariants = false;
            v.coinvariant_failure = CompareVerdict::CoinvariantFailure{m, n1 + 1, g0, g1};
            break;
        }
    }

    for (const auto& f : f_list) {
        if (v.corank_failure) break;
        for (int n : n_range) {
            if (n < 1) continue;
            int ca = hom_corank(a, f, n), cb = hom_corank(b, f, n);
            if (ca != cb) {
                v.coranks_agree = false;
                v.corank_failure = CompareVerdict::CorankFailure{f, n, ca, cb};
                break;
            }
        }
    }

    v.ranks_equal = a.free_rank() == b.free_rank();
    v.torsion_pseudo_isomorphic = pseudo_isomorphic(a.torsion(), b.torsion());
    return v;
}

}  // namespace iwalab
