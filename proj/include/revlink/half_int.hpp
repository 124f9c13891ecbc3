#pragma once

#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>

#include "errors.hpp"

namespace revlink {

// Exact element of (1/2)Z, stored as a count of halves.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_halves(long long h) { return HalfInt(h); }
    static constexpr HalfInt from_int(long long n) { return HalfInt(2 * n); }

    constexpr long long halves() const { return h_; }
    constexpr double value() const { return static_cast<double>(h_) / 2.0; }
    constexpr bool is_integer() const { return h_ % 2 == 0; }

    constexpr HalfInt operator+(HalfInt o) const { return HalfInt(h_ + o.h_); }
    constexpr HalfInt operator-(HalfInt o) const { return HalfInt(h_ - o.h_); }
    constexpr HalfInt operator-() const { return HalfInt(-h_); }
    constexpr HalfInt& operator+=(HalfInt o) {
        h_ += o.h_;
        return *this;
    }
    constexpr HalfInt& operator-=(HalfInt o) {
        h_ -= o.h_;
        return *this;
    }
    friend constexpr HalfInt operator*(long long k, HalfInt x) { return HalfInt(k * x.h_); }
    friend constexpr HalfInt operator*(HalfInt x, long long k) { return HalfInt(k * x.h_); }
    constexpr auto operator<=>(const HalfInt&) const = default;

    // "3", "-1", "1/2", "-5/2"
    std::string str() const { return is_integer() ? std::to_string(h_ / 2) : std::to_string(h_) + "/2"; }
    friend std::ostream& operator<<(std::ostream& os, HalfInt x) { return os << x.str(); }

private:
    constexpr explicit HalfInt(long long h) : h_(h) {}
    long long h_ = 0;
};

inline constexpr HalfInt half(long long n) { return HalfInt::from_halves(n); }

// Type of a closed geodesic: p signed turns around the axis, 2q equator crossings.
struct GeodesicType {
    int p = 0;
    int q = 1;

    GeodesicType() = default;
    GeodesicType(int p_, int q_) : p(p_), q(q_) {
        if (q < 1) throw InvalidInput("geodesic type needs q >= 1");
        if (p == 0 && q != 1) throw InvalidInput("p = 0 is a meridian and forces q = 1");
    }
    bool operator==(const GeodesicType&) const = default;
    bool reduced() const { return std::gcd(std::abs(p), q) == 1; }
    std::string str() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }
};

enum class EquatorOrientation { Plus, Minus };

inline std::string to_string(EquatorOrientation e) { return e == EquatorOrientation::Plus ? "e+" : "e-"; }

} // namespace revlink
