#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "iwalab/power_series.hpp"

namespace iwalab {

namespace detail {

// Recursive-descent parser for integer expressions in T:
//   expr := term (('+' | '-') term)*      term := unary ('*'? unary)*
//   unary := '-' unary | power             power := primary ('^' integer)?
//   primary := integer | 'T' | '(' expr ')'
class ExprParser {
public:
    ExprParser(std::string_view text, const Modulus& mod) : s_(text), mod_(mod) {}

    poly::Coeffs parse() {
        poly::Coeffs r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        poly::trim(r);
        return r;
    }

private:
    static constexpr std::size_t kMaxDegree = 4096;

    [[noreturn]] void fail(const std::string& what) const {
        throw error(errc::parse_error, "in \"" + std::string(s_) + "\" at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool starts_primary() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == 'T' || c == '(' || std::isdigit(static_cast<unsigned char>(c));
    }

    poly::Coeffs expr() {
        poly::Coeffs acc = term();
        for (;;) {
            if (peek('+')) {
                ++pos_;
                acc = poly::add(std::move(acc), term(), mod_);
            } else if (peek('-')) {
                ++pos_;
                acc = poly::sub(std::move(acc), term(), mod_);
            } else {
                return acc;
            }
        }
    }

    poly::Coeffs term() {
        poly::Coeffs acc = unary();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                acc = checked_mul(acc, unary());
            } else if (starts_primary()) {
                acc = checked_mul(acc, unary());  // implicit product, e.g. 3T
            } else {
                return acc;
            }
        }
    }

    poly::Coeffs unary() {
        if (peek('-')) {
            ++pos_;
            return poly::sub({}, unary(), mod_);
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return power();
    }

    poly::Coeffs power() {
        poly::Coeffs base = primary();
        if (!peek('^')) return base;
        ++pos_;
        skip();
        std::size_t start = pos_;
        unsigned long long e = integer_literal();
        if (e > kMaxDegree) {
            pos_ = start;
            fail("exponent too large");
        }
        poly::Coeffs r{1 % mod_.value()};
        for (unsigned long long i = 0; i < e; ++i) r = checked_mul(r, base);
        return r;
    }

    poly::Coeffs primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == 'T') {
            ++pos_;
            return {0, 1 % mod_.value()};
        }
        if (c == '(') {
            ++pos_;
            poly::Coeffs inner = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            u64 v = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                v = mod_.add(mod_.mul(v, 10 % mod_.value()), static_cast<u64>(s_[pos_] - '0') % mod_.value());
                ++pos_;
            }
            (void)start;
            return {v};
        }
        fail("expected a number, T or '('");
    }

    unsigned long long integer_literal() {
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected an integer exponent");
        unsigned long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<unsigned long long>(s_[pos_] - '0');
            if (v > kMaxDegree * 10) fail("exponent too large");
            ++pos_;
        }
        return v;
    }

    poly::Coeffs checked_mul(const poly::Coeffs& a, const poly::Coeffs& b) {
        if (a.size() + b.size() > kMaxDegree + 2) fail("polynomial degree exceeds " + std::to_string(kMaxDegree));
        poly::Coeffs r = poly::mul(a, b, mod_);
        poly::trim(r);
        return r;
    }

    std::string_view s_;
    const Modulus& mod_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an integer polynomial in T, reducing coefficients modulo p^N (no T-truncation).
inline poly::Coeffs parse_polynomial(std::string_view text, const Precision& prec) {
    return detail::ExprParser(text, prec.ring()).parse();
}

inline PowerSeries parse_series(std::string_view text, const Precision& prec) {
    return PowerSeries::from_residues(prec, parse_polynomial(text, prec));
}

inline DistinguishedPoly parse_distinguished(std::string_view text, const Precision& prec) {
    poly::Coeffs c = parse_polynomial(text, prec);
    if (c.empty()) throw error(errc::invalid_argument, "\"" + std::string(text) + "\" is zero");
    return DistinguishedPoly(prec, std::move(c));
}

/// Render ascending coefficients as `c*T^k + ... + c0`, highest degree first.
inline std::string format_polynomial(std::span<const u64> coeffs) {
    std::string out;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        u64 c = coeffs[k];
        if (c == 0) continue;
        if (!out.empty()) out += " + ";
        if (k == 0) {
            out += std::to_string(c);
            continue;
        }
        if (c != 1) out += std::to_string(c) + "*";
        out += "T";
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

inline std::string to_string(const PowerSeries& s) { return format_polynomial(s.coeffs()); }
inline std::string to_string(const DistinguishedPoly& f) { return format_polynomial(f.coeffs()); }

}  // namespace iwalab
