#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/duality.hpp"
#include "iwalab/eigenspaces.hpp"
#include "iwalab/lambda_module.hpp"

namespace iwalab {

/// Elementary divisor exponents of E(K_n)[p^inf](eta-bar)_f and of the formal-group
/// counterpart at an ordinary prime.
struct TorsionGroups {
    std::vector<int> E;
    std::vector<int> Ehat;

    int total() const noexcept {
        int s = 0;
        for (int e : E) s += e;
        for (int e : Ehat) s += e;
        return s;
    }
};

/// Caps stand in for the finiteness of local torsion; `levels` overrides them at given n
/// (levels not listed have reached the caps).
struct TorsionData {
    TorsionGroups caps;
    std::map<int, TorsionGroups> levels;

    const TorsionGroups& at(int n) const {
        auto it = levels.find(n);
        return it == levels.end() ? caps : it->second;
    }
};

struct PrimeDatum {
    std::string id;
    Reduction reduction = Reduction::away;
    int local_degree = 1;             // [F_v : Qp]
    std::optional<Sign> sign;         // supersingular only
    long long a_u = 0;                // supersingular only
    bool unramified_in_F = true;      // supersingular only
    int base_local_degree = 1;        // [F'_u : Qp], supersingular only
    std::optional<TorsionData> torsion;  // ordinary only
};

struct SelmerDatum {
    Precision prec;
    int field_degree = 1;  // [F : Q]
    bool assume_torsion = false;
    std::vector<PrimeDatum> primes;
    GModule X;

    int group_order() const noexcept { return X.group_order(); }
};

inline std::string to_string(Reduction r) {
    switch (r) {
        case Reduction::ordinary: return "ordinary";
        case Reduction::supersingular: return "supersingular";
        case Reduction::away: return "away";
    }
    return "?";
}

/// Structural and per-prime invariants. Every violation is listed; an empty result means valid.
/// The global hypotheses (S1), (S2)(a) and the 4 | d condition are left to hypothesis_check.
inline std::vector<std::string> datum_violations(const SelmerDatum& d) {
    std::vector<std::string> out;
    if ((d.prec.p() - 1) % static_cast<u64>(d.group_order()) != 0) out.push_back("g must divide p-1");
    if (d.field_degree < 1) out.push_back("field degree must be >= 1");
    for (const auto& pr : d.primes) {
        const std::string at = "prime '" + pr.id + "': ";
        if (pr.local_degree < 1) out.push_back(at + "local_degree must be >= 1");
        if (pr.reduction == Reduction::supersingular) {
            if (!pr.sign) out.push_back(at + "supersingular prime needs a sign");
            if (pr.a_u != 0) out.push_back("(S2)(b) violated: a_u = " + std::to_string(pr.a_u) + " at " + pr.id);
            if (!pr.unramified_in_F) out.push_back("(S2)(c) violated: " + pr.id + " ramifies in F/F'");
            if (pr.base_local_degree < 1) out.push_back(at + "base_local_degree must be >= 1");
        } else if (pr.sign) {
            out.push_back(at + "sign given at a non-supersingular prime");
        }
        if (pr.reduction != Reduction::ordinary && pr.torsion)
            out.push_back(at + "torsion caps given at a non-ordinary prime");
        if (pr.torsion) {
            auto neg = [](const TorsionGroups& t) {
                for (int e : t.E)
                    if (e < 0) return true;
                for (int e : t.Ehat)
                    if (e < 0) return true;
                return false;
            };
            if (neg(pr.torsion->caps)) out.push_back(at + "torsion exponents must be >= 0");
            for (const auto& [n, t] : pr.torsion->levels)
                if (n < 0 || neg(t)) out.push_back(at + "torsion level entries need n >= 0 and exponents >= 0");
        }
    }
    return out;
}

struct HypothesisLine {
    std::string name;
    bool pass;
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisLine> lines;

    bool all_pass() const noexcept {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

inline HypothesisReport hypothesis_check(const SelmerDatum& d) {
    HypothesisReport rep;
    int ss = 0;
    for (const auto& pr : d.primes) ss += pr.reduction == Reduction::supersingular;
    rep.lines.push_back({"(S1)", ss > 0,
                         ss > 0 ? std::to_string(ss) + " supersingular prime(s) above p" : "no supersingular prime above p"});
    const bool g_ok = (d.prec.p() - 1) % static_cast<u64>(d.group_order()) == 0;
    rep.lines.push_back({"g | p-1", g_ok, "g = " + std::to_string(d.group_order())});
    for (const auto& pr : d.primes) {
        if (pr.reduction != Reduction::supersingular) continue;
        rep.lines.push_back({"(S2)(a) " + pr.id, pr.base_local_degree == 1,
                             "[F'_u:Qp] = " + std::to_string(pr.base_local_degree)});
        rep.lines.push_back({"(S2)(b) " + pr.id, pr.a_u == 0, "a_u = " + std::to_string(pr.a_u)});
        rep.lines.push_back({"(S2)(c) " + pr.id, pr.unramified_in_F,
                             pr.unramified_in_F ? "unramified in F/F'" : "ramified in F/F'"});
        if (pr.sign == Sign::plus) {
            const bool ok = pr.local_degree % 4 != 0;
            rep.lines.push_back({"4 !| d " + pr.id, ok,
                                 ok ? "d = " + std::to_string(pr.local_degree)
                                    : "4 | d at +-signed prime (d = " + std::to_string(pr.local_degree) + ")"});
        }
    }
    return rep;
}

struct CharacterRecord {
    int eta;
    int rank_eta;
    int rank_eta_bar_iota;
    bool ranks_equal;
    bool torsion_pseudo_iso;

    bool pass() const noexcept { return ranks_equal && torsion_pseudo_iso; }
};

struct FEVerdict {
    std::vector<CharacterRecord> records;
    bool pass = false;
    HypothesisReport hypotheses;
};

/// For each eta compares e_eta X with (e_{eta-bar} X)^iota. Skipped when a hypothesis fails.
inline FEVerdict functional_equation_check(const SelmerDatum& d) {
    FEVerdict v;
    v.hypotheses = hypothesis_check(d);
    if (!v.hypotheses.all_pass()) return v;
    v.pass = true;
    for (int k = 0; k < d.group_order(); ++k) {
        const Character eta = d.X.character(k);
        const ElementaryModule A = eigenspace(d.X, eta);
        const ElementaryModule B = iota_module(eigenspace(d.X, contragredient(eta)));
        CharacterRecord r{k, A.free_rank(), B.free_rank(), A.free_rank() == B.free_rank(),
                          pseudo_isomorphic(A.torsion(), B.torsion())};
        v.pass = v.pass && r.pass();
        v.records.push_back(r);
    }
    return v;
}

enum class Vanishing { consistent, inconsistent, not_applicable };

inline std::string to_string(Vanishing v) {
    switch (v) {
        case Vanishing::consistent: return "consistent";
        case Vanishing::inconsistent: return "inconsistent";
        case Vanishing::not_applicable: return "not applicable";
    }
    return "?";
}

struct VanishingVerdict {
    int eta;
    Vanishing status;
    std::vector<std::string> offenders;  // named summands or failed clauses
};

/// e_eta X = 0 iff e_{eta-bar} X = 0, together with torsion iff torsion.
/// A torsion slot may not carry a finite summand, so once the characteristic data of a slot
/// is trivial the slot must be zero; any finite summand in a torsion slot is reported.
inline VanishingVerdict vanishing_equivalence(const SelmerDatum& d, int eta_index) {
    const int g = d.group_order();
    const int k = ((eta_index % g) + g) % g;
    const int kb = (g - k) % g;
    const ElementaryModule A = d.X.slot(k), B = d.X.slot(kb);
    VanishingVerdict v{k, Vanishing::consistent, {}};

    if (A.is_torsion() != B.is_torsion())
        v.offenders.push_back("part (a): slot " + std::to_string(A.is_torsion() ? kb : k) + " has rank " +
                              std::to_string(A.is_torsion() ? B.free_rank() : A.free_rank()) + ", slot " +
                              std::to_string(A.is_torsion() ? k : kb) + " is torsion");
    for (int idx : k == kb ? std::vector<int>{k} : std::vector<int>{k, kb}) {
        const ElementaryModule mod = d.X.slot(idx);
        if (!mod.is_torsion()) continue;
        for (int e : mod.finite_parts())
            v.offenders.push_back("finite submodule L/(p^" + std::to_string(e) + ",T) in torsion slot " +
                                  std::to_string(idx));
    }
    const bool live = A.is_zero() || B.is_zero();
    if (live && !(A.is_zero() && B.is_zero())) {
        const int nz = A.is_zero() ? kb : k;
        v.offenders.push_back("slot " + std::to_string(A.is_zero() ? k : kb) + " is zero but slot " +
                              std::to_string(nz) + " = " + d.X.slot(nz).describe());
    }
    if (!v.offenders.empty())
        v.status = Vanishing::inconsistent;
    else if (!live)
        v.status = Vanishing::not_applicable;
    return v;
}

struct PoitouTatePoint {
    int m;
    int n;
    long long exponent;
};

struct PoitouTateReport {
    std::vector<PoitouTatePoint> points;
    long long cap = 0;
    long long max_exponent = 0;
    bool bounded = true;
    bool constant_in_n = true;
};

/// Exponent of the global Euler factor times the local ratios over the primes above p.
/// The m [K_n:Qp] deg f parts cancel against [F_n:Q] m deg f (this needs the local degrees
/// above p to add up to [F:Q]), leaving the ordinary torsion terms a + b - c.
inline PoitouTateReport poitou_tate_bound(const SelmerDatum& d, const DistinguishedPoly& f,
                                          const std::vector<int>& m_range, const std::vector<int>& n_range) {
    require_same(d.prec, f.precision());
    const u64 p = d.prec.p();
    int above_p = 0;
    for (const auto& pr : d.primes) {
        if (pr.reduction == Reduction::away) continue;
        above_p += pr.local_degree;
        if (pr.reduction == Reduction::ordinary && !pr.torsion)
            throw error(errc::incomplete_datum, "ordinary prime '" + pr.id + "' has no torsion_caps");
    }
    if (above_p != d.field_degree)
        throw error(errc::incomplete_datum, "local degrees above p sum to " + std::to_string(above_p) +
                                                " but [F:Q] = " + std::to_string(d.field_degree));
    PoitouTateReport rep;
    for (const auto& pr : d.primes)
        if (pr.torsion) rep.cap += pr.torsion->caps.total();

    const int deg = f.degree();
    for (int m : m_range) {
        std::optional<long long> first;
        for (int n : n_range) {
            SizeExponent e = global_euler_exponent(static_cast<long long>(d.field_degree) * detail::ipow(p, n), m, deg);
            for (const auto& pr : d.primes) {
                switch (pr.reduction) {
                    case Reduction::supersingular: e += local_ratio_ss(m, n, pr.local_degree, deg, p); break;
                    case Reduction::away: e += local_ratio_away(); break;
                    case Reduction::ordinary: {
                        const TorsionGroups& t = pr.torsion->at(n);
                        int a = 0, b = 0;
                        for (int x : t.E) a += std::min(x, m);
                        for (int x : t.Ehat) b += std::min(x, m);
                        LocalDatum ld{Reduction::ordinary, pr.local_degree, std::nullopt, true, a, b, a};
                        e += local_ratio_ord(ld, m, n, deg, p);
                        break;
                    }
                }
            }
            rep.points.push_back({m, n, e.value});
            rep.max_exponent = std::max(rep.max_exponent, e.value);
            if (first && *first != e.value) rep.constant_in_n = false;
            if (!first) first = e.value;
        }
    }
    rep.bounded = rep.max_exponent <= rep.cap;
    return rep;
}

}  // namespace iwalab
