#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "iwalab/error.hpp"
#include "iwalab/matrix.hpp"
#include "iwalab/residue.hpp"

namespace iwalab {

/// Working precision for Zp[[T]]: coefficients modulo p^N, series modulo T^M.
class Precision {
public:
    Precision(u64 p, int N, int M) : p_(p), N_(N), M_(M), ring_(checked(p, N, M), N) {}

    u64 p() const noexcept { return p_; }
    int N() const noexcept { return N_; }
    int M() const noexcept { return M_; }
    const Modulus& ring() const noexcept { return ring_; }

    bool operator==(const Precision& o) const noexcept { return p_ == o.p_ && N_ == o.N_ && M_ == o.M_; }

    std::string to_string() const {
        return "p=" + std::to_string(p_) + " N=" + std::to_string(N_) + " M=" + std::to_string(M_);
    }

private:
    static u64 checked(u64 p, int N, int M) {
        if (p < 3 || !is_prime(p)) throw error(errc::invalid_argument, "p must be an odd prime, got " + std::to_string(p));
        if (N < 1) throw error(errc::invalid_argument, "N must be >= 1");
        if (M < 1) throw error(errc::invalid_argument, "M must be >= 1");
        return p;
    }

    u64 p_;
    int N_;
    int M_;
    Modulus ring_;
};

inline void require_same(const Precision& a, const Precision& b) {
    if (!(a == b)) throw error(errc::precision_mismatch, a.to_string() + " vs " + b.to_string());
}

namespace poly {

// Dense polynomials over Z/p^e, ascending coefficients.
using Coeffs = std::vector<u64>;

inline void trim(Coeffs& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b, const Modulus& mod, std::size_t limit = static_cast<std::size_t>(-1)) {
    if (a.empty() || b.empty()) return {};
    std::size_t n = std::min(a.size() + b.size() - 1, limit);
    Coeffs c(n, 0);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] = mod.add(c[i + j], mod.mul(a[i], b[j]));
    }
    return c;
}

inline Coeffs add(Coeffs a, const Coeffs& b, const Modulus& mod) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod.add(a[i], b[i]);
    return a;
}

inline Coeffs sub(Coeffs a, const Coeffs& b, const Modulus& mod) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod.sub(a[i], b[i]);
    return a;
}

inline Coeffs pow(const Coeffs& a, unsigned e, const Modulus& mod) {
    Coeffs r{1 % mod.value()};
    for (unsigned i = 0; i < e; ++i) r = mul(r, a, mod);
    return r;
}

/// Division by a monic polynomial: a = q * b + r with deg r < deg b.
inline std::pair<Coeffs, Coeffs> divmod_monic(Coeffs a, const Coeffs& b, const Modulus& mod) {
    if (b.empty() || b.back() != 1 % mod.value()) throw error(errc::invalid_argument, "divisor is not monic");
    const std::size_t d = b.size() - 1;
    if (a.size() <= d) return {Coeffs{}, a};
    Coeffs q(a.size() - d, 0);
    for (std::size_t i = a.size(); i-- > d;) {
        u64 c = a[i];
        if (c == 0) continue;
        q[i - d] = c;
        for (std::size_t j = 0; j <= d; ++j) a[i - d + j] = mod.sub(a[i - d + j], mod.mul(c, b[j]));
    }
    a.resize(d);
    return {q, a};
}

inline Coeffs rem_monic(const Coeffs& a, const Coeffs& b, const Modulus& mod) { return divmod_monic(a, b, mod).second; }

/// Matrix of multiplication by g on (Z/p^e)[T]/(f), f monic of degree d, in the basis 1, T, ..., T^{d-1}.
inline ModMatrix multiplication_matrix(const Coeffs& g, const Coeffs& f, const Modulus& mod) {
    const std::size_t d = f.size() - 1;
    ModMatrix m(d, d);
    Coeffs col = rem_monic(g, f, mod);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) m(i, j) = i < col.size() ? col[i] : 0;
        // col <- T * col mod f
        Coeffs shifted(col.size() + 1, 0);
        for (std::size_t i = 0; i < col.size(); ++i) shifted[i + 1] = col[i];
        col = rem_monic(shifted, f, mod);
    }
    return m;
}

/// Resultant Res(f, g) for monic f, as det of multiplication by g modulo f.
inline u64 resultant(const Coeffs& f, const Coeffs& g, const Modulus& mod) {
    if (f.size() <= 1) return 1 % mod.value();
    return determinant(multiplication_matrix(g, f, mod), mod);
}

/// Reduce integer coefficients into a new modulus (coefficients are canonical lifts).
inline Coeffs lift(const Coeffs& a, const Modulus& to) {
    Coeffs r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = to.reduce_u(a[i]);
    return r;
}

}  // namespace poly

/// An element of Zp[[T]] known modulo (p^N, T^M).
class PowerSeries {
public:
    explicit PowerSeries(const Precision& prec) : prec_(prec), c_(static_cast<std::size_t>(prec.M()), 0) {}

    PowerSeries(const Precision& prec, const std::vector<i64>& coeffs) : PowerSeries(prec) {
        for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = prec_.ring().reduce(coeffs[i]);
    }

    static PowerSeries from_residues(const Precision& prec, const std::vector<u64>& coeffs) {
        PowerSeries s(prec);
        for (std::size_t i = 0; i < coeffs.size() && i < s.c_.size(); ++i) s.c_[i] = prec.ring().reduce_u(coeffs[i]);
        return s;
    }

    static PowerSeries constant(const Precision& prec, i64 c) { return PowerSeries(prec, std::vector<i64>{c}); }
    static PowerSeries monomial(const Precision& prec, std::size_t k, i64 c = 1) {
        PowerSeries s(prec);
        if (k < s.c_.size()) s.c_[k] = prec.ring().reduce(c);
        return s;
    }

    const Precision& precision() const noexcept { return prec_; }
    std::span<const u64> coeffs() const noexcept { return c_; }
    u64 operator[](std::size_t k) const { return c_.at(k); }
    std::size_t size() const noexcept { return c_.size(); }

    bool is_zero() const noexcept {
        return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
    }

    /// Index of the first coefficient that is a unit mod p, or -1.
    int first_unit_index() const noexcept {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (prec_.ring().is_unit(c_[i])) return static_cast<int>(i);
        return -1;
    }

    PowerSeries operator+(const PowerSeries& o) const {
        require_same(prec_, o.prec_);
        PowerSeries r(prec_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = prec_.ring().add(c_[i], o.c_[i]);
        return r;
    }
    PowerSeries operator-(const PowerSeries& o) const {
        require_same(prec_, o.prec_);
        PowerSeries r(prec_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = prec_.ring().sub(c_[i], o.c_[i]);
        return r;
    }
    PowerSeries operator-() const {
        PowerSeries r(prec_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = prec_.ring().neg(c_[i]);
        return r;
    }
    PowerSeries operator*(const PowerSeries& o) const {
        require_same(prec_, o.prec_);
        PowerSeries r(prec_);
        r.c_ = poly::mul(c_, o.c_, prec_.ring(), c_.size());
        r.c_.resize(c_.size(), 0);
        return r;
    }
    PowerSeries scaled(u64 k) const {
        PowerSeries r(prec_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = prec_.ring().mul(c_[i], prec_.ring().reduce_u(k));
        return r;
    }

    bool operator==(const PowerSeries& o) const noexcept { return prec_ == o.prec_ && c_ == o.c_; }

private:
    Precision prec_;
    std::vector<u64> c_;
};

inline PowerSeries series_mul(const PowerSeries& f, const PowerSeries& g) { return f * g; }

/// A power series with unit constant term.
class UnitSeries {
public:
    explicit UnitSeries(PowerSeries s) : s_(std::move(s)) {
        if (!s_.precision().ring().is_unit(s_[0]))
            throw error(errc::not_a_unit, "constant term " + std::to_string(s_[0]) + " is divisible by p");
    }
    const PowerSeries& series() const noexcept { return s_; }
    bool operator==(const UnitSeries&) const = default;

private:
    PowerSeries s_;
};

/// Monic polynomial whose non-leading coefficients are divisible by p.
/// Degree is unbounded here; `to_series()` needs degree < M.
class DistinguishedPoly {
public:
    DistinguishedPoly(const Precision& prec, std::vector<u64> coeffs) : prec_(prec), c_(std::move(coeffs)) {
        const Modulus& R = prec_.ring();
        for (auto& x : c_) x = R.reduce_u(x);
        if (c_.empty() || c_.back() != 1 % R.value())
            throw error(errc::invalid_argument, "distinguished polynomial must be monic");
        for (std::size_t i = 0; i + 1 < c_.size(); ++i)
            if (R.is_unit(c_[i]))
                throw error(errc::invalid_argument, "coefficient of T^" + std::to_string(i) + " is not divisible by p");
    }

    static DistinguishedPoly from_integers(const Precision& prec, const std::vector<i64>& coeffs) {
        std::vector<u64> c(coeffs.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = prec.ring().reduce(coeffs[i]);
        return DistinguishedPoly(prec, std::move(c));
    }

    static DistinguishedPoly one(const Precision& prec) { return DistinguishedPoly(prec, {1}); }

    const Precision& precision() const noexcept { return prec_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<u64>& coeffs() const noexcept { return c_; }

    PowerSeries to_series() const {
        if (degree() >= prec_.M())
            throw error(errc::insufficient_truncation,
                        "degree " + std::to_string(degree()) + " does not fit below T^" + std::to_string(prec_.M()));
        return PowerSeries::from_residues(prec_, c_);
    }

    DistinguishedPoly operator*(const DistinguishedPoly& o) const {
        require_same(prec_, o.prec_);
        return DistinguishedPoly(prec_, poly::mul(c_, o.c_, prec_.ring()));
    }

    DistinguishedPoly pow(int e) const {
        DistinguishedPoly r = one(prec_);
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    bool operator==(const DistinguishedPoly& o) const noexcept { return prec_ == o.prec_ && c_ == o.c_; }
    // canonical order: degree first, then coefficients from the top
    bool operator<(const DistinguishedPoly& o) const noexcept {
        if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
        return std::lexicographical_compare(c_.rbegin(), c_.rend(), o.c_.rbegin(), o.c_.rend());
    }

private:
    Precision prec_;
    std::vector<u64> c_;
};

/// Multiplicative inverse of a unit series by the triangular recursion.
inline UnitSeries invert_unit(const UnitSeries& u) {
    const PowerSeries& s = u.series();
    const Modulus& R = s.precision().ring();
    const std::size_t M = s.size();
    std::vector<u64> g(M, 0);
    u64 inv0 = R.inverse(s[0]);
    g[0] = inv0;
    for (std::size_t k = 1; k < M; ++k) {
        u64 acc = 0;
        for (std::size_t i = 1; i <= k; ++i) acc = R.add(acc, R.mul(s[i], g[k - i]));
        g[k] = R.neg(R.mul(inv0, acc));
    }
    return UnitSeries(PowerSeries::from_residues(s.precision(), g));
}

namespace detail {

inline std::vector<u64> invert_trunc(const std::vector<u64>& s, std::size_t len, const Modulus& R) {
    std::vector<u64> g(len, 0);
    u64 inv0 = R.inverse(s.at(0));
    g[0] = inv0;
    for (std::size_t k = 1; k < len; ++k) {
        u64 acc = 0;
        for (std::size_t i = 1; i <= k && i < s.size(); ++i) acc = R.add(acc, R.mul(s[i], g[k - i]));
        g[k] = R.neg(R.mul(inv0, acc));
    }
    return g;
}

}  // namespace detail

/// Index of the first coefficient of f that is a unit modulo p.
inline int weierstrass_degree(const PowerSeries& f) {
    int d = f.first_unit_index();
    if (d < 0) throw error(errc::no_preparation, "every stored coefficient is divisible by p");
    return d;
}

struct Preparation {
    UnitSeries unit;
    DistinguishedPoly poly;
};

/// Weierstrass preparation f = u * f1 of the stored polynomial f (degree < M).
///
/// Solves the division T^d = q f + r (deg r < d) by the contraction
/// q <- U^{-1} * ((T^d - q P) div T^d), where f = P + T^d U and p | P; each round gains
/// one p-adic digit, so N + 1 rounds fix q modulo p^N. Then f1 = q f and u = q^{-1}.
/// The work length is padded by (N + 2) d so that the shifts never reach the first M terms.
///
/// The stored coefficients are treated as an exact polynomial. When f is the truncation of
/// a longer series, f1 agrees with the preparation of that series once M > N * deg f1.
inline Preparation weierstrass_prepare(const PowerSeries& f) {
    const Precision& prec = f.precision();
    const Modulus& R = prec.ring();
    const int d = weierstrass_degree(f);
    const std::size_t M = static_cast<std::size_t>(prec.M());
    if (d == 0) return {UnitSeries(f), DistinguishedPoly::one(prec)};

    const std::size_t ud = static_cast<std::size_t>(d);
    const std::size_t L = M + static_cast<std::size_t>(prec.N() + 2) * ud;
    std::vector<u64> P(f.coeffs().begin(), f.coeffs().begin() + d);
    std::vector<u64> U(L, 0);
    for (std::size_t i = ud; i < M; ++i) U[i - ud] = f[i];
    const std::vector<u64> Uinv = detail::invert_trunc(U, L, R);

    std::vector<u64> q = Uinv;
    for (int round = 0; round <= prec.N(); ++round) {
        std::vector<u64> qP = poly::mul(q, P, R, L);
        qP.resize(L, 0);
        std::vector<u64> shifted(L, 0);
        // (T^d - qP) div T^d
        shifted[0] = 1 % R.value();
        for (std::size_t i = 0; i + ud < L; ++i) shifted[i] = R.sub(shifted[i], qP[i + ud]);
        q = poly::mul(Uinv, shifted, R, L);
        q.resize(L, 0);
    }

    std::vector<u64> full(f.coeffs().begin(), f.coeffs().end());
    std::vector<u64> qf = poly::mul(q, full, R, M + ud);
    qf.resize(M + ud, 0);
    std::vector<u64> f1(qf.begin(), qf.begin() + d + 1);
    if (f1.back() != 1 % R.value() || std::any_of(qf.begin() + d + 1, qf.end(), [](u64 x) { return x != 0; }))
        throw error(errc::insufficient_precision, "Weierstrass division did not converge");
    std::vector<u64> qM(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(M));
    std::vector<u64> u = detail::invert_trunc(qM, M, R);
    return {UnitSeries(PowerSeries::from_residues(prec, u)), DistinguishedPoly(prec, std::move(f1))};
}

/// f((1+T)^{-1} - 1), exact modulo T^M since the substituted series has no constant term.
inline PowerSeries iota(const PowerSeries& f) {
    const Precision& prec = f.precision();
    PowerSeries s = invert_unit(UnitSeries(PowerSeries(prec, {1, 1}))).series() - PowerSeries::constant(prec, 1);
    PowerSeries acc(prec);
    // Horner in the substituted variable
    for (std::size_t k = f.size(); k-- > 0;) acc = acc * s + PowerSeries::from_residues(prec, {f[k]});
    return acc;
}

/// Distinguished generator of the ideal iota(f) Lambda, computed exactly:
/// iota(f) = (1+T)^{-d} * sum_k c_k (-T)^k (1+T)^{d-k}, a unit times a degree-d polynomial
/// whose leading coefficient f(-1) is a unit.
inline DistinguishedPoly iota_distinguished(const DistinguishedPoly& f) {
    const Precision& prec = f.precision();
    const Modulus& R = prec.ring();
    const int d = f.degree();
    poly::Coeffs g;
    const poly::Coeffs minus_t{0, R.neg(1)};
    const poly::Coeffs one_plus_t{1, 1};
    for (int k = 0; k <= d; ++k) {
        u64 ck = f.coeffs()[static_cast<std::size_t>(k)];
        if (ck == 0) continue;
        poly::Coeffs term = poly::mul(poly::pow(minus_t, static_cast<unsigned>(k), R),
                                      poly::pow(one_plus_t, static_cast<unsigned>(d - k), R), R);
        for (auto& x : term) x = R.mul(x, ck);
        g = poly::add(std::move(g), term, R);
    }
    g.resize(static_cast<std::size_t>(d) + 1, 0);
    u64 lead_inv = R.inverse(g.back());
    for (auto& x : g) x = R.mul(x, lead_inv);
    return DistinguishedPoly(prec, std::move(g));
}

/// omega_n as an exact polynomial modulo the given modulus, with no truncation bound.
inline poly::Coeffs omega_coeffs(u64 pn, const Modulus& R) {
    // binomial row by Pascal's rule
    std::vector<u64> row{1 % R.value()};
    for (u64 i = 0; i < pn; ++i) {
        std::vector<u64> next(row.size() + 1, 0);
        for (std::size_t k = 0; k < row.size(); ++k) {
            next[k] = R.add(next[k], row[k]);
            next[k + 1] = R.add(next[k + 1], row[k]);
        }
        row = std::move(next);
    }
    row[0] = R.sub(row[0], 1 % R.value());
    return row;
}

/// p^n, or 0 once it would reach `bound`.
inline u64 ppow_below(u64 p, int n, u64 bound) {
    u64 pn = 1;
    for (int i = 0; i < n; ++i) {
        if (pn > bound / p) return 0;
        pn *= p;
    }
    return pn < bound ? pn : 0;
}

/// omega_n = (1+T)^{p^n} - 1.
inline DistinguishedPoly omega(const Precision& prec, int n) {
    if (n < 0) throw error(errc::invalid_argument, "omega level must be >= 0");
    u64 pn = ppow_below(prec.p(), n, static_cast<u64>(prec.M()));
    if (pn == 0)
        throw error(errc::insufficient_truncation,
                    "p^" + std::to_string(n) + " must be below M=" + std::to_string(prec.M()));
    return DistinguishedPoly(prec, omega_coeffs(pn, prec.ring()));
}

}  // namespace iwalab
