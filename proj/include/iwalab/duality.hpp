#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwalab/lambda_module.hpp"
#include "iwalab/matrix.hpp"

namespace iwalab {

/// <x, y> = x^T G y on H = (Z/p^m)^k; perfect iff det G is a unit.
class FinitePairing {
public:
    FinitePairing(u64 p, int m, ModMatrix gram) : R_(p, m), gram_(std::move(gram)) {
        if (gram_.rows() != gram_.cols()) throw error(errc::invalid_argument, "gram matrix must be square");
        for (std::size_t i = 0; i < gram_.rows(); ++i)
            for (std::size_t j = 0; j < gram_.cols(); ++j) gram_(i, j) = R_.reduce_u(gram_(i, j));
        if (!R_.is_unit(determinant(gram_, R_)))
            throw error(errc::not_perfect, "gram determinant is divisible by p");
    }

    const Modulus& ring() const noexcept { return R_; }
    std::size_t rank() const noexcept { return gram_.rows(); }
    const ModMatrix& gram() const noexcept { return gram_; }
    int order_exponent() const noexcept { return static_cast<int>(rank()) * R_.exponent(); }

    u64 pair(const std::vector<u64>& x, const std::vector<u64>& y) const {
        u64 s = 0;
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) s = R_.add(s, R_.mul(R_.mul(x[i], gram_(i, j)), y[j]));
        return s;
    }

private:
    Modulus R_;
    ModMatrix gram_;
};

/// A subgroup of (Z/p^m)^k held in Howell form, so equality is equality of bases.
class Subgroup {
public:
    Subgroup(const Modulus& R, std::size_t k, std::vector<std::vector<u64>> generators)
        : R_(R), k_(k), basis_(howell_form(check(std::move(generators), k), k, R)) {}

    static Subgroup whole(const Modulus& R, std::size_t k) {
        std::vector<std::vector<u64>> rows(k, std::vector<u64>(k, 0));
        for (std::size_t i = 0; i < k; ++i) rows[i][i] = 1 % R.value();
        return Subgroup(R, k, std::move(rows));
    }

    const std::vector<std::vector<u64>>& basis() const noexcept { return basis_; }
    std::size_t ambient_rank() const noexcept { return k_; }
    int order_exponent() const { return howell_order_exponent(basis_, R_); }

    bool operator==(const Subgroup& o) const noexcept { return R_ == o.R_ && k_ == o.k_ && basis_ == o.basis_; }

private:
    static std::vector<std::vector<u64>> check(std::vector<std::vector<u64>> g, std::size_t k) {
        for (const auto& r : g)
            if (r.size() != k) throw error(errc::invalid_argument, "generator length differs from the ambient rank");
        return g;
    }

    Modulus R_;
    std::size_t k_;
    std::vector<std::vector<u64>> basis_;
};

/// C^perp = { y : <x, y> = 0 for all x in C }: the kernel of (generators * G) via Smith form.
inline Subgroup exact_annihilator(const FinitePairing& pair, const Subgroup& c) {
    const Modulus& R = pair.ring();
    const std::size_t k = pair.rank();
    if (c.ambient_rank() != k) throw error(errc::invalid_argument, "subgroup lives in a different ambient group");
    if (c.basis().empty()) return Subgroup::whole(R, k);
    ModMatrix gens(c.basis().size(), k);
    for (std::size_t i = 0; i < gens.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) gens(i, j) = c.basis()[i][j];
    return Subgroup(R, k, kernel_generators(multiply(gens, pair.gram(), R), R));
}

inline bool self_annihilator_check(const FinitePairing& pair, const Subgroup& c) {
    return exact_annihilator(pair, c) == c;
}

enum class Sign { plus, minus };

inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

/// delta = 2 when 4 | d and eta is trivial, else 0.
inline int delta(int d, bool eta_trivial) {
    if (d < 1) throw error(errc::invalid_argument, "local degree must be >= 1");
    return (d % 4 == 0 && eta_trivial) ? 2 : 0;
}

namespace detail {
inline long long local_degree_at(int d, int n, u64 p) {
    long long v = d;
    for (int i = 0; i < n; ++i) v *= static_cast<long long>(p);
    return v;
}
}  // namespace detail

/// Corank of the signed local condition: d p^n + delta for +, d p^n for -.
inline long long signed_corank(Sign s, int d, int n, bool eta_trivial, u64 p) {
    if (n < 0) throw error(errc::invalid_argument, "n must be >= 0");
    const int dl = delta(d, eta_trivial);
    const long long dpn = detail::local_degree_at(d, n, p);
    return s == Sign::plus ? dpn + dl : dpn;
}

/// Supersingular local ratio: -m [K_n:Qp] deg f with [K_n:Qp] = d p^n.
inline SizeExponent local_ratio_ss(int m, int n, int d, int deg_f, u64 p) {
    if (m < 0) throw error(errc::invalid_argument, "m must be >= 0");
    return {-static_cast<long long>(m) * detail::local_degree_at(d, n, p) * deg_f};
}

enum class Reduction { ordinary, supersingular, away };

struct LocalDatum {
    Reduction kind = Reduction::away;
    int local_degree = 1;
    std::optional<Sign> sign;
    bool eta_trivial = true;
    // ordinary only: exponents of |E[p^inf]_f/p^m|, |Ehat[p^inf]_f/p^m|, |E[p^m]_f|
    std::optional<int> a, b, c;
};

/// Ordinary local ratio: a + b - c - m [K_n:Qp] deg f.
inline SizeExponent local_ratio_ord(const LocalDatum& datum, int m, int n, int deg_f, u64 p) {
    if (datum.kind != Reduction::ordinary)
        throw error(errc::invalid_argument, "local_ratio_ord needs an ordinary prime");
    if (!datum.a || !datum.b || !datum.c)
        throw error(errc::incomplete_datum, "ordinary prime without torsion exponents a, b, c");
    if (*datum.a < 0 || *datum.b < 0 || *datum.c < 0)
        throw error(errc::invalid_argument, "torsion exponents must be >= 0");
    return {*datum.a + *datum.b - *datum.c -
            static_cast<long long>(m) * detail::local_degree_at(datum.local_degree, n, p) * deg_f};
}

inline SizeExponent local_ratio_away() { return {0}; }

/// Global Euler characteristic exponent [F_n:Q] m deg f.
inline SizeExponent global_euler_exponent(long long field_degree_Fn, int m, int deg_f) {
    if (field_degree_Fn < 1) throw error(errc::invalid_argument, "field degree must be >= 1");
    return {field_degree_Fn * m * deg_f};
}

}  // namespace iwalab
