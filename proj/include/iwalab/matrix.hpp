#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "iwalab/residue.hpp"

namespace iwalab {

/// Dense row-major matrix of residues modulo p^m.
class ModMatrix {
public:
    ModMatrix() = default;
    ModMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static ModMatrix identity(std::size_t n) {
        ModMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static ModMatrix from_rows(const std::vector<std::vector<u64>>& rows, std::size_t cols) {
        ModMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols && j < rows[i].size(); ++j) m(i, j) = rows[i][j];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    u64& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    u64 operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<u64> row(std::size_t i) const {
        return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }
    std::vector<u64> column(std::size_t j) const {
        std::vector<u64> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    ModMatrix transposed() const {
        ModMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const ModMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<u64> data_;
};

inline ModMatrix multiply(const ModMatrix& a, const ModMatrix& b, const Modulus& mod) {
    if (a.cols() != b.rows()) throw error(errc::invalid_argument, "matrix shape mismatch");
    ModMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            u64 aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = mod.add(c(i, j), mod.mul(aik, b(k, j)));
        }
    return c;
}

inline std::vector<u64> apply(const ModMatrix& a, const std::vector<u64>& x, const Modulus& mod) {
    std::vector<u64> y(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] = mod.add(y[i], mod.mul(a(i, j), x[j]));
    return y;
}

/// Smith normal form over the local ring Z/p^m: U * A * V = diag(p^v_0, p^v_1, ...),
/// with v_0 <= v_1 <= ... . A zero diagonal entry is reported as valuation m.
struct SmithForm {
    std::vector<int> valuations;  // length min(rows, cols)
    ModMatrix left;               // U (rows x rows), only when transforms requested
    ModMatrix right;              // V (cols x cols), only when transforms requested
};

inline SmithForm smith_form(ModMatrix a, const Modulus& mod, bool with_transforms = false) {
    const std::size_t r = a.rows(), c = a.cols(), k = std::min(r, c);
    const int m = mod.exponent();
    SmithForm out;
    out.valuations.assign(k, m);
    if (with_transforms) {
        out.left = ModMatrix::identity(r);
        out.right = ModMatrix::identity(c);
    }
    for (std::size_t t = 0; t < k; ++t) {
        // the entry of least valuation divides everything left in the block
        int best = m;
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < r && best > 0; ++i)
            for (std::size_t j = t; j < c; ++j) {
                int v = mod.valuation(a(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best == m) break;
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        if (with_transforms) {
            out.left.swap_rows(t, bi);
            out.right.swap_cols(t, bj);
        }
        // normalize the pivot to exactly p^best
        u64 unit = mod.div_ppow(a(t, t), best);
        u64 uinv = mod.inverse(unit);
        for (std::size_t j = t; j < c; ++j) a(t, j) = mod.mul(a(t, j), uinv);
        if (with_transforms)
            for (std::size_t j = 0; j < r; ++j) out.left(t, j) = mod.mul(out.left(t, j), uinv);
        for (std::size_t i = t + 1; i < r; ++i) {
            if (a(i, t) == 0) continue;
            u64 factor = mod.div_ppow(a(i, t), best);
            for (std::size_t j = t; j < c; ++j) a(i, j) = mod.sub(a(i, j), mod.mul(factor, a(t, j)));
            if (with_transforms)
                for (std::size_t j = 0; j < r; ++j)
                    out.left(i, j) = mod.sub(out.left(i, j), mod.mul(factor, out.left(t, j)));
        }
        for (std::size_t j = t + 1; j < c; ++j) {
            if (a(t, j) == 0) continue;
            u64 factor = mod.div_ppow(a(t, j), best);
            a(t, j) = 0;
            if (with_transforms)
                for (std::size_t i = 0; i < c; ++i)
                    out.right(i, j) = mod.sub(out.right(i, j), mod.mul(factor, out.right(i, t)));
        }
        out.valuations[t] = best;
    }
    return out;
}

/// Exponents e_i > 0 of the cokernel (Z/p^m)^rows / A (Z/p^m)^cols = (+) Z/p^{e_i}.
inline std::vector<int> cokernel_divisors(const ModMatrix& a, const Modulus& mod) {
    auto snf = smith_form(a, mod);
    std::vector<int> out;
    for (int v : snf.valuations)
        if (v > 0) out.push_back(v);
    for (std::size_t i = snf.valuations.size(); i < a.rows(); ++i) out.push_back(mod.exponent());
    return out;
}

/// log_p of the cokernel order.
inline int cokernel_exponent(const ModMatrix& a, const Modulus& mod) {
    int e = 0;
    for (int v : cokernel_divisors(a, mod)) e += v;
    return e;
}

/// Generators of {y : A y = 0} in (Z/p^m)^cols.
inline std::vector<std::vector<u64>> kernel_generators(const ModMatrix& a, const Modulus& mod) {
    auto snf = smith_form(a, mod, true);
    const int m = mod.exponent();
    std::vector<std::vector<u64>> gens;
    for (std::size_t i = 0; i < a.cols(); ++i) {
        int v = i < snf.valuations.size() ? snf.valuations[i] : m;
        if (v == 0) continue;
        u64 scale = mod.ppow(m - std::min(v, m)) % mod.value();
        if (v >= m) scale = 1;
        std::vector<u64> g(a.cols());
        bool nonzero = false;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            g[j] = mod.mul(snf.right(j, i), scale);
            nonzero |= g[j] != 0;
        }
        if (nonzero) gens.push_back(std::move(g));
    }
    return gens;
}

/// Determinant modulo p^m by elimination with least-valuation pivots.
inline u64 determinant(ModMatrix a, const Modulus& mod) {
    if (a.rows() != a.cols()) throw error(errc::invalid_argument, "determinant of non-square matrix");
    const std::size_t n = a.rows();
    u64 det = 1 % mod.value();
    for (std::size_t t = 0; t < n; ++t) {
        int best = mod.exponent();
        std::size_t bi = t;
        for (std::size_t i = t; i < n; ++i) {
            int v = mod.valuation(a(i, t));
            if (v < best) {
                best = v;
                bi = i;
            }
        }
        if (best == mod.exponent()) return 0;
        if (bi != t) {
            a.swap_rows(t, bi);
            det = mod.neg(det);
        }
        det = mod.mul(det, a(t, t));
        u64 unit_inv = mod.inverse(mod.div_ppow(a(t, t), best));
        for (std::size_t i = t + 1; i < n; ++i) {
            if (a(i, t) == 0) continue;
            u64 factor = mod.mul(mod.div_ppow(a(i, t), best), unit_inv);
            for (std::size_t j = t; j < n; ++j) a(i, j) = mod.sub(a(i, j), mod.mul(factor, a(t, j)));
        }
    }
    return det;
}

/// Canonical row basis (Howell form) of the submodule of (Z/p^m)^cols spanned by `rows`.
/// Pivots are powers of p, entries above a pivot p^v lie in [0, p^v), and the rows whose
/// pivot lies right of column j span every element of the module vanishing on columns <= j.
inline std::vector<std::vector<u64>> howell_form(std::vector<std::vector<u64>> rows, std::size_t cols,
                                                 const Modulus& mod) {
    const int m = mod.exponent();
    struct Pivot {
        std::vector<u64> row;
        std::size_t col;
        int val;
    };
    std::vector<Pivot> out;
    for (auto& r : rows) {
        r.resize(cols, 0);
        for (auto& x : r) x = mod.reduce_u(x);
    }
    for (std::size_t col = 0; col < cols; ++col) {
        int best = m;
        std::size_t bi = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            int v = mod.valuation(rows[i][col]);
            if (v < best) {
                best = v;
                bi = i;
            }
        }
        if (bi == rows.size()) continue;
        std::vector<u64> piv = std::move(rows[bi]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(bi));
        u64 uinv = mod.inverse(mod.div_ppow(piv[col], best));
        for (auto& x : piv) x = mod.mul(x, uinv);
        for (auto& r : rows) {
            if (r[col] == 0) continue;
            u64 factor = mod.div_ppow(r[col], best);
            for (std::size_t j = col; j < cols; ++j) r[j] = mod.sub(r[j], mod.mul(factor, piv[j]));
        }
        // p^(m-best) * pivot row vanishes at this column and may survive further right
        std::vector<u64> ann(cols);
        bool nonzero = false;
        for (std::size_t j = 0; j < cols; ++j) {
            ann[j] = mod.mul(piv[j], mod.ppow(m - best) % mod.value());
            nonzero |= ann[j] != 0;
        }
        if (best > 0 && nonzero) rows.push_back(std::move(ann));
        std::erase_if(rows, [](const std::vector<u64>& r) {
            return std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; });
        });
        out.push_back({std::move(piv), col, best});
    }
    // reduce entries above each pivot
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& pv = out[i];
        u64 pp = mod.ppow(pv.val);
        for (std::size_t h = 0; h < i; ++h) {
            u64 x = out[h].row[pv.col];
            u64 factor = x / pp;
            if (factor == 0) continue;
            for (std::size_t j = 0; j < cols; ++j)
                out[h].row[j] = mod.sub(out[h].row[j], mod.mul(factor, pv.row[j]));
        }
    }
    std::vector<std::vector<u64>> result;
    result.reserve(out.size());
    for (auto& pv : out) result.push_back(std::move(pv.row));
    return result;
}

/// log_p of the order of a module given in Howell form.
inline int howell_order_exponent(const std::vector<std::vector<u64>>& basis, const Modulus& mod) {
    int e = 0;
    for (const auto& r : basis) {
        auto it = std::find_if(r.begin(), r.end(), [](u64 x) { return x != 0; });
        if (it != r.end()) e += mod.exponent() - mod.valuation(*it);
    }
    return e;
}

}  // namespace iwalab
