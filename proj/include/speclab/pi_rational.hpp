#pragma once

#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "speclab/errors.hpp"

namespace speclab {

// Exact rational multiple of pi. Used wherever eigenvalue bounds and limit
// values are integer or rational multiples of pi, so that the symbolic
// checks can compare with zero tolerance.
class PiRational {
  public:
    constexpr PiRational() = default;
    constexpr PiRational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        normalize();
    }

    static constexpr PiRational zero() { return PiRational(0, 1); }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }

    double to_double() const { return std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_); }

    // Renders e.g. "8*pi", "-3/2*pi", "0".
    std::string str() const {
        if (num_ == 0) return "0";
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s + "*pi";
    }

    friend constexpr PiRational operator+(PiRational a, PiRational b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend constexpr PiRational operator-(PiRational a, PiRational b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend constexpr PiRational operator*(std::int64_t c, PiRational a) {
        return from_wide(static_cast<__int128>(c) * a.num_, a.den_);
    }

    friend constexpr bool operator==(PiRational a, PiRational b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr bool operator<(PiRational a, PiRational b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend constexpr bool operator<=(PiRational a, PiRational b) { return a == b || a < b; }
    friend constexpr bool operator>(PiRational a, PiRational b) { return b < a; }
    friend constexpr bool operator>=(PiRational a, PiRational b) { return b <= a; }

  private:
    static constexpr PiRational from_wide(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        PiRational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static constexpr __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    constexpr void normalize() {
        if (den_ == 0) den_ = 1; // never constructed this way through public API
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace speclab
