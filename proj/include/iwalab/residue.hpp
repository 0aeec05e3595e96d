#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iwalab/error.hpp"

namespace iwalab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Largest modulus we accept; keeps a + b below 2^64 for reduced residues.
inline constexpr u64 kMaxModulus = u64{1} << 62;

/// Arithmetic in Z/p^e. Residues are always kept in the canonical range [0, p^e).
class Modulus {
public:
    Modulus(u64 p, int e) : p_(p), e_(e) {
        if (p < 2 || !is_prime(p)) throw error(errc::invalid_argument, "modulus base " + std::to_string(p) + " is not prime");
        if (e < 1) throw error(errc::invalid_argument, "modulus exponent must be >= 1");
        pows_.reserve(static_cast<std::size_t>(e) + 1);
        u64 q = 1;
        pows_.push_back(1);
        for (int i = 0; i < e; ++i) {
            if (q > kMaxModulus / p)
                throw error(errc::insufficient_precision,
                            std::to_string(p) + "^" + std::to_string(e) + " exceeds the 62-bit residue range");
            q *= p;
            pows_.push_back(q);
        }
        q_ = q;
    }

    u64 p() const noexcept { return p_; }
    int exponent() const noexcept { return e_; }
    u64 value() const noexcept { return q_; }

    /// p^k as an integer, 0 <= k <= exponent().
    u64 ppow(int k) const { return pows_.at(static_cast<std::size_t>(k)); }

    u64 reduce(i64 x) const noexcept {
        i64 r = x % static_cast<i64>(q_);
        return r < 0 ? static_cast<u64>(r + static_cast<i64>(q_)) : static_cast<u64>(r);
    }
    u64 reduce_u(u64 x) const noexcept { return x % q_; }

    u64 add(u64 a, u64 b) const noexcept {
        u64 s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + (q_ - b); }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : q_ - a; }
    u64 mul(u64 a, u64 b) const noexcept { return static_cast<u64>((static_cast<u128>(a) * b) % q_); }

    u64 pow(u64 base, u64 exp) const noexcept {
        u64 r = 1 % q_;
        base %= q_;
        while (exp) {
            if (exp & 1) r = mul(r, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return r;
    }

    bool is_unit(u64 a) const noexcept { return a % p_ != 0; }

    /// p-adic valuation of a residue; exponent() for zero.
    int valuation(u64 a) const noexcept {
        if (a == 0) return e_;
        int v = 0;
        while (a % p_ == 0) {
            a /= p_;
            ++v;
        }
        return v;
    }

    u64 inverse(u64 a) const {
        a %= q_;
        if (!is_unit(a)) throw error(errc::not_a_unit, std::to_string(a) + " is divisible by " + std::to_string(p_));
        // extended Euclid on signed 128-bit to stay clear of overflow
        __int128 old_r = static_cast<__int128>(a), r = static_cast<__int128>(q_);
        __int128 old_s = 1, s = 0;
        while (r != 0) {
            __int128 quot = old_r / r;
            __int128 t = old_r - quot * r;
            old_r = r;
            r = t;
            t = old_s - quot * s;
            old_s = s;
            s = t;
        }
        __int128 inv = old_s % static_cast<__int128>(q_);
        if (inv < 0) inv += q_;
        return static_cast<u64>(inv);
    }

    /// Integer quotient a / p^k; requires p^k | a (true whenever valuation(a) >= k).
    u64 div_ppow(u64 a, int k) const noexcept { return a / pows_[static_cast<std::size_t>(k)]; }

    /// Signed representative in (-q/2, q/2].
    i64 centered(u64 a) const noexcept {
        return a > q_ / 2 ? -static_cast<i64>(q_ - a) : static_cast<i64>(a);
    }

    bool operator==(const Modulus& o) const noexcept { return p_ == o.p_ && e_ == o.e_; }

private:
    u64 p_;
    int e_;
    u64 q_ = 1;
    std::vector<u64> pows_;
};

/// Smallest primitive root modulo an odd prime p.
inline u64 primitive_root(u64 p) {
    if (!is_prime(p)) throw error(errc::invalid_argument, "primitive_root: modulus not prime");
    if (p == 2) return 1;
    std::vector<u64> factors;
    u64 n = p - 1;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) factors.push_back(n);
    Modulus mod(p, 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (u64 q : factors)
            if (mod.pow(g, (p - 1) / q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;
}

}  // namespace iwalab
