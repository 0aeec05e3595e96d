#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/lambda_module.hpp"

namespace iwalab {

/// Teichmueller lift of a unit a mod p to Z/p^N: the (p-1)-th root of unity congruent to a.
inline u64 teichmuller(u64 a, const Modulus& R) {
    if (a % R.p() == 0) throw error(errc::not_a_unit, "teichmuller: " + std::to_string(a) + " is divisible by p");
    u64 x = R.reduce_u(a);
    // x -> x^p converges p-adically; N rounds reach the fixed point mod p^N
    for (int i = 0; i < R.exponent(); ++i) x = R.pow(x, R.p());
    return x;
}

inline u64 teichmuller(u64 a, u64 p, int N) { return teichmuller(a, Modulus(p, N)); }

inline void require_cyclic_order(u64 p, int g) {
    if (g < 1 || (p - 1) % static_cast<u64>(g) != 0)
        throw error(errc::unsupported_group,
                    "group order " + std::to_string(g) + " must divide p-1 = " + std::to_string(p - 1));
}

/// eta_k(sigma0) = omega(r)^{k (p-1)/g}, r the least primitive root mod p.
class Character {
public:
    Character(const Modulus& R, int group_order, int index) : R_(R), g_(group_order) {
        require_cyclic_order(R.p(), g_);
        k_ = ((index % g_) + g_) % g_;
        const u64 t = teichmuller(primitive_root(R.p()), R);
        const u64 gen = R.pow(t, static_cast<u64>(k_) * ((R.p() - 1) / static_cast<u64>(g_)));
        values_.resize(static_cast<std::size_t>(g_));
        u64 v = 1 % R.value();
        for (int j = 0; j < g_; ++j) {
            values_[static_cast<std::size_t>(j)] = v;
            v = R.mul(v, gen);
        }
    }
    Character(const Precision& prec, int group_order, int index) : Character(prec.ring(), group_order, index) {}

    const Modulus& ring() const noexcept { return R_; }
    int group_order() const noexcept { return g_; }
    int index() const noexcept { return k_; }
    bool is_trivial() const noexcept { return k_ == 0; }

    /// eta(sigma0^j) for any integer j.
    u64 value(long long j) const { return values_[static_cast<std::size_t>(((j % g_) + g_) % g_)]; }
    const std::vector<u64>& values() const noexcept { return values_; }

    bool operator==(const Character& o) const noexcept { return R_ == o.R_ && g_ == o.g_ && k_ == o.k_; }

private:
    Modulus R_;
    int g_;
    int k_ = 0;
    std::vector<u64> values_;
};

inline Character contragredient(const Character& eta) { return Character(eta.ring(), eta.group_order(), -eta.index()); }

/// Element sum_j c_j sigma0^j of (Z/p^N)[G], G cyclic of order g.
struct GroupAlgebraElement {
    std::vector<u64> coeffs;

    bool operator==(const GroupAlgebraElement&) const = default;
};

inline GroupAlgebraElement group_algebra_mul(const GroupAlgebraElement& a, const GroupAlgebraElement& b,
                                             const Modulus& R) {
    const std::size_t g = a.coeffs.size();
    if (b.coeffs.size() != g) throw error(errc::group_mismatch, "group algebra elements of different orders");
    GroupAlgebraElement r{std::vector<u64>(g, 0)};
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) r.coeffs[(i + j) % g] = R.add(r.coeffs[(i + j) % g], R.mul(a.coeffs[i], b.coeffs[j]));
    return r;
}

/// e_eta = g^{-1} sum_j eta(sigma0^j) sigma0^{-j}; the coefficient of sigma0^i is g^{-1} eta(sigma0^{-i}).
inline GroupAlgebraElement idempotent(const Character& eta) {
    const Modulus& R = eta.ring();
    const int g = eta.group_order();
    const u64 ginv = R.inverse(static_cast<u64>(g));
    GroupAlgebraElement e{std::vector<u64>(static_cast<std::size_t>(g))};
    for (int i = 0; i < g; ++i) e.coeffs[static_cast<std::size_t>(i)] = R.mul(ginv, eta.value(-i));
    return e;
}

/// The scalar by which a group algebra element acts on the chi-eigenspace.
inline u64 evaluate_at(const GroupAlgebraElement& e, const Character& chi) {
    const Modulus& R = chi.ring();
    u64 s = 0;
    for (std::size_t i = 0; i < e.coeffs.size(); ++i) s = R.add(s, R.mul(e.coeffs[i], chi.value(static_cast<long long>(i))));
    return s;
}

/// A Lambda[G]-module stored by eigenspace: M = (+)_k e_{eta_k} M.
class GModule {
public:
    GModule(const Precision& prec, int group_order, std::map<int, ElementaryModule> slots = {})
        : prec_(prec), g_(group_order) {
        require_cyclic_order(prec.p(), g_);
        for (auto& [k, mod] : slots) {
            if (k < 0 || k >= g_)
                throw error(errc::invalid_argument,
                            "eigenspace index " + std::to_string(k) + " outside [0, " + std::to_string(g_) + ")");
            require_same(prec_, mod.precision());
            if (!mod.is_zero()) slots_.emplace(k, std::move(mod));
        }
    }

    /// (+)_chi Lambda, one copy per character.
    static GModule regular(const Precision& prec, int group_order) {
        std::map<int, ElementaryModule> s;
        for (int k = 0; k < group_order; ++k) s.emplace(k, ElementaryModule(prec, 1));
        return GModule(prec, group_order, std::move(s));
    }

    const Precision& precision() const noexcept { return prec_; }
    int group_order() const noexcept { return g_; }

    ElementaryModule slot(int k) const {
        auto it = slots_.find(((k % g_) + g_) % g_);
        return it == slots_.end() ? ElementaryModule::zero(prec_) : it->second;
    }
    /// Nonzero slots only.
    const std::map<int, ElementaryModule>& slots() const noexcept { return slots_; }

    GModule with_slot(int k, ElementaryModule mod) const {
        auto s = slots_;
        s.erase(k);
        s.emplace(k, std::move(mod));
        return GModule(prec_, g_, std::move(s));
    }

    Character character(int k) const { return Character(prec_, g_, k); }

    bool operator==(const GModule& o) const noexcept { return prec_ == o.prec_ && g_ == o.g_ && slots_ == o.slots_; }

private:
    Precision prec_;
    int g_;
    std::map<int, ElementaryModule> slots_;
};

namespace detail {
inline void require_order(const GModule& gm, const Character& eta) {
    if (gm.group_order() != eta.group_order())
        throw error(errc::group_mismatch, "character of order " + std::to_string(eta.group_order()) +
                                              " applied to a module over a group of order " +
                                              std::to_string(gm.group_order()));
}
}  // namespace detail

inline ElementaryModule eigenspace(const GModule& gm, const Character& eta) {
    detail::require_order(gm, eta);
    return gm.slot(eta.index());
}

/// M(eta) = M (x) Zp(eta): sigma acts on m (x) 1 by eta(sigma) sigma m, so the chi-slot of the
/// twist is the (chi eta^{-1})-slot of M.
inline GModule twist(const GModule& gm, const Character& eta) {
    detail::require_order(gm, eta);
    std::map<int, ElementaryModule> s;
    for (const auto& [k, mod] : gm.slots()) s.emplace((k + eta.index()) % gm.group_order(), mod);
    return GModule(gm.precision(), gm.group_order(), std::move(s));
}

struct IdentityLine {
    std::string item;
    bool pass;
    std::string detail;
};

struct TwistIdentityReport {
    std::vector<IdentityLine> lines;

    bool all_pass() const noexcept {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

namespace detail {
// log_p |s * A| for A = (+) Z/p^{e_i} and a scalar s in Z/p^m
inline long long image_exponent(const std::vector<int>& divisors, u64 s, const Modulus& Rm) {
    const int v = Rm.valuation(Rm.reduce_u(s));
    long long e = 0;
    for (int d : divisors) e += std::max(d - v, 0);
    return e;
}
}  // namespace detail

/// Items (1), (2) and (4) of the eigenspace/twist compatibility, checked on sizes.
///
/// (1) e_eta(M_f) against (e_eta M)_f: the left side applies the idempotent, as a scalar on
///     each slot, to the coinvariants of M (x) Lambda/f; the right side tensors the eta-slot.
/// (2) the eta-bar slot with Lambda acting through iota, tensored with Lambda/f, against the
///     untwisted slot tensored with Lambda/f^iota.
/// (4) e_eta M against the G-fixed (trivial) slot of M(eta-bar).
/// `projector` replaces e_eta on the left of (1); it exists for negative controls.
inline TwistIdentityReport twist_identity_check(const GModule& gm, const Character& eta, const DistinguishedPoly& f,
                                                int m, int n,
                                                const std::optional<GroupAlgebraElement>& projector = std::nullopt) {
    detail::require_order(gm, eta);
    require_same(gm.precision(), f.precision());
    if (f.degree() < 1) throw error(errc::invalid_argument, "f must have positive degree");
    const Precision& prec = gm.precision();
    const Modulus Rm(prec.p(), m);
    TwistIdentityReport rep;

    {
        const GroupAlgebraElement e = projector.value_or(idempotent(eta));
        long long lhs = 0;
        for (int k = 0; k < gm.group_order(); ++k) {
            const Character chi = gm.character(k);
            lhs += detail::image_exponent(tensor_coinvariant_divisors(gm.slot(k), f, m, n), evaluate_at(e, chi), Rm);
        }
        const long long rhs = tensor_coinvariant_size(eigenspace(gm, eta), f, m, n).value;
        rep.lines.push_back({"(1)", lhs == rhs,
                             "e_eta(M_f) exp " + std::to_string(lhs) + ", (e_eta M)_f exp " + std::to_string(rhs)});
    }
    {
        const ElementaryModule bar = eigenspace(gm, contragredient(eta));
        const long long lhs = tensor_coinvariant_size(iota_module(bar), f, m, n).value;
        const long long rhs = tensor_coinvariant_size(bar, iota_distinguished(f), m, n).value;
        rep.lines.push_back({"(2)", lhs == rhs,
                             "iota side exp " + std::to_string(lhs) + ", f^iota side exp " + std::to_string(rhs)});
    }
    {
        const ElementaryModule lhs = eigenspace(gm, eta);
        const ElementaryModule rhs = twist(gm, contragredient(eta)).slot(0);
        rep.lines.push_back({"(4)", lhs == rhs, lhs.describe() + " vs " + rhs.describe()});
    }
    return rep;
}

}  // namespace iwalab
