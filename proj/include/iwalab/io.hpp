#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <toml.hpp>

#include "iwalab/duality.hpp"
#include "iwalab/fe_checker.hpp"

namespace iwalab {

namespace detail {

// Collects every problem in a file before failing, so one run reports all of them.
class Issues {
public:
    void add(std::string what) { list_.push_back(std::move(what)); }
    bool empty() const noexcept { return list_.empty(); }

    void raise_if_any(const std::string& source) const {
        if (list_.empty()) return;
        std::string msg = source + ":";
        for (const auto& s : list_) msg += "\n  " + s;
        throw error(errc::validation_error, msg);
    }

private:
    std::vector<std::string> list_;
};

inline toml::table parse_toml_text(std::string_view text, std::string_view name) {
    try {
        return toml::parse(text, name);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
        throw error(errc::parse_error, os.str());
    }
}

inline void check_keys(const toml::table& t, std::initializer_list<std::string_view> allowed, const std::string& where,
                       Issues& issues) {
    for (const auto& [k, v] : t) {
        bool ok = false;
        for (auto a : allowed) ok |= k.str() == a;
        if (!ok) issues.add(where + ": unknown key '" + std::string(k.str()) + "'");
    }
}

template <class T>
std::optional<T> get_int(const toml::table& t, std::string_view key, const std::string& where, Issues& issues) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    if (auto v = n->value<long long>(); v && n->is_integer()) return static_cast<T>(*v);
    issues.add(where + ": '" + std::string(key) + "' must be an integer");
    return std::nullopt;
}

inline std::optional<bool> get_bool(const toml::table& t, std::string_view key, const std::string& where,
                                    Issues& issues) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    if (n->is_boolean()) return n->value<bool>();
    issues.add(where + ": '" + std::string(key) + "' must be true or false");
    return std::nullopt;
}

inline std::optional<std::string> get_string(const toml::table& t, std::string_view key, const std::string& where,
                                             Issues& issues) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    if (n->is_string()) return n->value<std::string>();
    issues.add(where + ": '" + std::string(key) + "' must be a string");
    return std::nullopt;
}

inline std::vector<int> get_int_list(const toml::table& t, std::string_view key, const std::string& where,
                                     Issues& issues) {
    std::vector<int> out;
    const toml::node* n = t.get(key);
    if (!n) return out;
    const toml::array* arr = n->as_array();
    if (!arr) {
        issues.add(where + ": '" + std::string(key) + "' must be an array of integers");
        return out;
    }
    for (const auto& el : *arr) {
        if (!el.is_integer()) {
            issues.add(where + ": '" + std::string(key) + "' must be an array of integers");
            return {};
        }
        out.push_back(static_cast<int>(*el.value<long long>()));
    }
    return out;
}

inline std::optional<Precision> read_precision(const toml::table& t, const std::string& where, Issues& issues) {
    auto p = get_int<long long>(t, "p", where, issues);
    auto N = get_int<int>(t, "N", where, issues);
    auto M = get_int<int>(t, "M", where, issues);
    if (!p || !N || !M) {
        issues.add(where + ": precision needs integers p, N and M");
        return std::nullopt;
    }
    if (*p < 2) {
        issues.add(where + ": p must be an odd prime");
        return std::nullopt;
    }
    try {
        return Precision(static_cast<u64>(*p), *N, *M);
    } catch (const error& e) {
        issues.add(where + ": " + e.what());
        return std::nullopt;
    }
}

inline std::optional<ElementaryModule> read_module(const toml::table& t, const Precision& prec,
                                                   const std::string& where, Issues& issues) {
    check_keys(t, {"rank", "p_parts", "poly_parts", "finite_parts"}, where, issues);
    const int rank = get_int<int>(t, "rank", where, issues).value_or(0);
    std::vector<int> p_parts = get_int_list(t, "p_parts", where, issues);
    std::vector<int> finite = get_int_list(t, "finite_parts", where, issues);
    std::vector<PolyPart> polys;
    bool ok = true;
    if (const toml::node* n = t.get("poly_parts")) {
        const toml::array* arr = n->as_array();
        if (!arr) {
            issues.add(where + ": 'poly_parts' must be an array of {f, beta} tables");
            ok = false;
        } else {
            for (std::size_t i = 0; i < arr->size(); ++i) {
                const std::string at = where + ".poly_parts[" + std::to_string(i) + "]";
                const toml::table* pt = (*arr)[i].as_table();
                if (!pt) {
                    issues.add(at + ": expected a table {f = \"...\", beta = k}");
                    ok = false;
                    continue;
                }
                check_keys(*pt, {"f", "beta"}, at, issues);
                auto f = get_string(*pt, "f", at, issues);
                const int beta = get_int<int>(*pt, "beta", at, issues).value_or(1);
                if (!f) {
                    issues.add(at + ": missing polynomial 'f'");
                    ok = false;
                    continue;
                }
                try {
                    polys.push_back({parse_distinguished(*f, prec), beta});
                } catch (const error& e) {
                    issues.add(at + ": " + e.what());
                    ok = false;
                }
            }
        }
    }
    if (!ok) return std::nullopt;
    try {
        return ElementaryModule(prec, rank, std::move(p_parts), std::move(polys), std::move(finite));
    } catch (const error& e) {
        issues.add(where + ": " + e.what());
        return std::nullopt;
    }
}

inline std::optional<Sign> read_sign(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    return std::nullopt;
}

inline std::optional<TorsionGroups> read_torsion_groups(const toml::table& t, const std::string& where,
                                                        Issues& issues, std::initializer_list<std::string_view> keys) {
    check_keys(t, keys, where, issues);
    return TorsionGroups{get_int_list(t, "E", where, issues), get_int_list(t, "Ehat", where, issues)};
}

inline std::optional<PrimeDatum> read_prime(const toml::table& t, const std::string& where, Issues& issues) {
    check_keys(t,
               {"id", "reduction", "local_degree", "sign", "a_u", "unramified_in_F", "base_local_degree",
                "torsion_caps", "torsion_levels"},
               where, issues);
    PrimeDatum pr;
    pr.id = get_string(t, "id", where, issues).value_or(where);
    const std::string red = get_string(t, "reduction", where, issues).value_or("");
    if (red == "ordinary")
        pr.reduction = Reduction::ordinary;
    else if (red == "supersingular")
        pr.reduction = Reduction::supersingular;
    else if (red == "away")
        pr.reduction = Reduction::away;
    else {
        issues.add(where + ": reduction must be ordinary, supersingular or away");
        return std::nullopt;
    }
    pr.local_degree = get_int<int>(t, "local_degree", where, issues).value_or(1);
    if (auto s = get_string(t, "sign", where, issues)) {
        pr.sign = read_sign(*s);
        if (!pr.sign) issues.add(where + ": sign must be \"+\" or \"-\"");
    }
    pr.a_u = get_int<long long>(t, "a_u", where, issues).value_or(0);
    pr.unramified_in_F = get_bool(t, "unramified_in_F", where, issues).value_or(true);
    pr.base_local_degree = get_int<int>(t, "base_local_degree", where, issues).value_or(1);
    if (const toml::node* n = t.get("torsion_caps")) {
        if (const toml::table* ct = n->as_table()) {
            TorsionData td;
            td.caps = *read_torsion_groups(*ct, where + ".torsion_caps", issues, {"E", "Ehat"});
            if (const toml::node* ln = t.get("torsion_levels")) {
                const toml::array* arr = ln->as_array();
                if (!arr) issues.add(where + ": torsion_levels must be an array of tables");
                for (std::size_t i = 0; arr && i < arr->size(); ++i) {
                    const std::string at = where + ".torsion_levels[" + std::to_string(i) + "]";
                    const toml::table* lt = (*arr)[i].as_table();
                    if (!lt) {
                        issues.add(at + ": expected {n = k, E = [...], Ehat = [...]}");
                        continue;
                    }
                    auto lv = get_int<int>(*lt, "n", at, issues);
                    if (!lv) {
                        issues.add(at + ": missing level 'n'");
                        continue;
                    }
                    td.levels[*lv] = *read_torsion_groups(*lt, at, issues, {"n", "E", "Ehat"});
                }
            }
            pr.torsion = std::move(td);
        } else {
            issues.add(where + ": torsion_caps must be a table {E = [...], Ehat = [...]}");
        }
    } else if (t.get("torsion_levels")) {
        issues.add(where + ": torsion_levels given without torsion_caps");
    }
    return pr;
}

}  // namespace detail

/// Module file: precision as top-level p/N/M or a [precision] table, and `module = {...}`.
inline ElementaryModule parse_module_text(std::string_view text, std::string_view name = "module") {
    const toml::table t = detail::parse_toml_text(text, name);
    detail::Issues issues;
    const std::string src(name);
    const toml::table* pt = t["precision"].as_table();
    auto prec = detail::read_precision(pt ? *pt : t, src, issues);
    const toml::table* mt = t["module"].as_table();
    if (!mt) issues.add(src + ": missing table 'module'");
    std::optional<ElementaryModule> mod;
    if (prec && mt) mod = detail::read_module(*mt, *prec, src + ".module", issues);
    issues.raise_if_any(src);
    return *mod;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::parse_error, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline ElementaryModule load_module(const std::filesystem::path& path) {
    return parse_module_text(read_text_file(path), path.string());
}

/// Datum file: [precision], [group], [field], [[primes]], [eigenspaces].
inline SelmerDatum parse_datum_text(std::string_view text, std::string_view name = "datum") {
    const toml::table t = detail::parse_toml_text(text, name);
    const std::string src(name);
    detail::Issues issues;
    detail::check_keys(t, {"precision", "group", "field", "primes", "eigenspaces"}, src, issues);

    std::optional<Precision> prec;
    if (const toml::table* pt = t["precision"].as_table()) {
        detail::check_keys(*pt, {"p", "N", "M"}, "[precision]", issues);
        prec = detail::read_precision(*pt, "[precision]", issues);
    } else {
        issues.add("missing section [precision]");
    }

    int g = 1;
    if (const toml::table* gt = t["group"].as_table()) {
        detail::check_keys(*gt, {"order"}, "[group]", issues);
        g = detail::get_int<int>(*gt, "order", "[group]", issues).value_or(1);
    }
    bool g_ok = g >= 1;
    if (g < 1) issues.add("[group]: order must be >= 1");
    if (prec && g_ok && (prec->p() - 1) % static_cast<u64>(g) != 0) {
        issues.add("g must divide p-1 (g = " + std::to_string(g) + ", p = " + std::to_string(prec->p()) + ")");
        g_ok = false;
    }

    int field_degree = 1;
    bool assume_torsion = false;
    if (const toml::table* ft = t["field"].as_table()) {
        detail::check_keys(*ft, {"degree", "assume_torsion"}, "[field]", issues);
        field_degree = detail::get_int<int>(*ft, "degree", "[field]", issues).value_or(1);
        assume_torsion = detail::get_bool(*ft, "assume_torsion", "[field]", issues).value_or(false);
    }

    std::vector<PrimeDatum> primes;
    if (const toml::node* pn = t.get("primes")) {
        const toml::array* arr = pn->as_array();
        if (!arr) issues.add("primes must be an array of tables [[primes]]");
        std::set<std::string> ids;
        for (std::size_t i = 0; arr && i < arr->size(); ++i) {
            const std::string at = "primes[" + std::to_string(i) + "]";
            const toml::table* pt = (*arr)[i].as_table();
            if (!pt) {
                issues.add(at + ": expected a table");
                continue;
            }
            if (auto pr = detail::read_prime(*pt, at, issues)) {
                if (!ids.insert(pr->id).second) issues.add(at + ": duplicate prime id '" + pr->id + "'");
                primes.push_back(std::move(*pr));
            }
        }
    }

    std::map<int, ElementaryModule> slots;
    if (const toml::node* en = t.get("eigenspaces")) {
        const toml::table* et = en->as_table();
        if (!et) issues.add("[eigenspaces] must be a table");
        for (const auto& [k, v] : et ? *et : toml::table{}) {
            const std::string at = "eigenspaces.\"" + std::string(k.str()) + "\"";
            int idx = -1;
            try {
                std::size_t used = 0;
                idx = std::stoi(std::string(k.str()), &used);
                if (used != k.str().size()) idx = -1;
            } catch (const std::exception&) {
                idx = -1;
            }
            if (idx < 0 || idx >= g) {
                issues.add(at + ": character index must be an integer in [0, " + std::to_string(g) + ")");
                continue;
            }
            const toml::table* mt = v.as_table();
            if (!mt) {
                issues.add(at + ": expected a module table");
                continue;
            }
            if (!prec) continue;
            if (auto mod = detail::read_module(*mt, *prec, at, issues)) slots.emplace(idx, std::move(*mod));
        }
    }

    if (prec && g_ok && issues.empty()) {
        SelmerDatum d{*prec, field_degree, assume_torsion, std::move(primes), GModule(*prec, g, std::move(slots))};
        for (auto& v : datum_violations(d)) issues.add(std::move(v));
        issues.raise_if_any(src);
        return d;
    }
    // still report per-prime invariant violations alongside structural ones
    if (prec) {
        SelmerDatum probe{*prec, field_degree, assume_torsion, primes, GModule(*prec, 1)};
        for (auto& v : datum_violations(probe)) issues.add(std::move(v));
    }
    issues.raise_if_any(src);
    throw error(errc::validation_error, src + ": invalid datum");
}

inline SelmerDatum load_datum(const std::filesystem::path& path) {
    return parse_datum_text(read_text_file(path), path.string());
}

struct PairingFile {
    FinitePairing pairing;
    Subgroup subgroup;
};

/// Pairing file: p, m, gram = [[...], ...], generators = [[...], ...].
inline PairingFile parse_pairing_text(std::string_view text, std::string_view name = "pairing") {
    const toml::table t = detail::parse_toml_text(text, name);
    const std::string src(name);
    detail::Issues issues;
    detail::check_keys(t, {"p", "m", "gram", "generators"}, src, issues);
    auto p = detail::get_int<long long>(t, "p", src, issues);
    auto m = detail::get_int<int>(t, "m", src, issues);
    if (!p || !m) issues.add(src + ": needs integers p and m");

    auto read_rows = [&](std::string_view key) {
        std::vector<std::vector<i64>> rows;
        const toml::node* n = t.get(key);
        if (!n) return rows;
        const toml::array* arr = n->as_array();
        for (std::size_t i = 0; arr && i < arr->size(); ++i) {
            const toml::array* r = (*arr)[i].as_array();
            if (!r) {
                issues.add(src + ": '" + std::string(key) + "' must be an array of integer rows");
                return rows;
            }
            std::vector<i64> row;
            for (const auto& x : *r) {
                if (!x.is_integer()) {
                    issues.add(src + ": '" + std::string(key) + "' entries must be integers");
                    return rows;
                }
                row.push_back(*x.value<long long>());
            }
            rows.push_back(std::move(row));
        }
        if (!arr) issues.add(src + ": '" + std::string(key) + "' must be an array of integer rows");
        return rows;
    };
    auto gram = read_rows("gram");
    auto gens = read_rows("generators");
    if (gram.empty()) issues.add(src + ": missing 'gram'");
    const std::size_t k = gram.size();
    for (const auto& r : gram)
        if (r.size() != k) issues.add(src + ": gram must be square");
    for (const auto& r : gens)
        if (r.size() != k) issues.add(src + ": generator rows must have length " + std::to_string(k));
    issues.raise_if_any(src);

    try {
        const Modulus R(static_cast<u64>(*p), *m);
        ModMatrix G(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) G(i, j) = R.reduce(gram[i][j]);
        std::vector<std::vector<u64>> rows;
        for (const auto& r : gens) {
            std::vector<u64> row;
            for (i64 x : r) row.push_back(R.reduce(x));
            rows.push_back(std::move(row));
        }
        return {FinitePairing(static_cast<u64>(*p), *m, std::move(G)), Subgroup(R, k, std::move(rows))};
    } catch (const error& e) {
        if (e.code() == errc::not_perfect) throw;
        throw error(errc::validation_error, src + ": " + e.what());
    }
}

inline PairingFile load_pairing(const std::filesystem::path& path) {
    return parse_pairing_text(read_text_file(path), path.string());
}

}  // namespace iwalab
