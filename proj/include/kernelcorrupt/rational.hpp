#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "kernelcorrupt/errors.hpp"

namespace kc {

__extension__ typedef __int128 int128;

// Exact rational on int64 with gcd normalization. Intermediate products go
// through a 128-bit type; anything that would not fit back into int64 throws.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    Rational operator-() const { return Rational(-num_, den_, tag{}); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        int128 d = i128(a.den_) * b.den_;
        return from128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw ZeroDenominator("rational division by zero");
        return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    // Parses "n", "n/d" or a plain decimal like "0.25".
    static Rational parse(const std::string& s);

private:
    struct tag {};
    Rational(long long n, long long d, tag) : num_(n), den_(d) {}

    static int128 i128(long long v) { return static_cast<int128>(v); }

    static Rational from128(int128 n, int128 d) {
        if (d == 0) throw ZeroDenominator("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw Error("rational overflow (value does not fit in int64 after reduction)");
        return Rational(static_cast<long long>(n), static_cast<long long>(d), tag{});
    }

    static int128 gcd128(int128 a, int128 b) {
        while (b != 0) { int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw ZeroDenominator("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_;
    long long den_;
};

inline Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            long long n = std::stoll(s.substr(0, slash));
            long long d = std::stoll(s.substr(slash + 1));
            return Rational(n, d);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(std::stoll(s));
        std::string frac = s.substr(dot + 1);
        if (frac.empty()) return Rational(std::stoll(s.substr(0, dot)));
        long long scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            if (scale > INT64_MAX / 10) throw Error("decimal too long for exact parse: " + s);
            scale *= 10;
        }
        bool neg = !s.empty() && s[0] == '-';
        std::string ip = s.substr(0, dot);
        long long whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : std::stoll(ip);
        long long part = std::stoll(frac);
        Rational r = Rational(whole) + (neg ? -Rational(part, scale) : Rational(part, scale));
        return r;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("cannot parse rational from '" + s + "'");
    }
}

// Scalar glue so the algebra templates work for both double and Rational.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long v) { return static_cast<double>(v); }
    static double to_double(double v) { return v; }
    static bool close(double a, double b, double eps) {
        double d = a - b;
        return (d < 0 ? -d : d) <= eps;
    }
    static bool nonnegative(double v) { return v >= 0.0; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long long v) { return Rational(v); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static bool close(const Rational& a, const Rational& b, double) { return a == b; }
    static bool nonnegative(const Rational& v) { return v >= Rational(0); }
};

} // namespace kc
