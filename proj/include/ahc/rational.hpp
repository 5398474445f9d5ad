#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahc/num.hpp"

namespace ahc {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parse "p/q", "p" or a decimal string like "-1.25" into an exact rational.
inline Rational parse_rational(const std::string& s) {
    using boost::multiprecision::cpp_int;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        cpp_int num{s.substr(0, slash)};
        cpp_int den{s.substr(slash + 1)};
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return Rational{num} / Rational{den};
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        cpp_int whole{s};
        return Rational{whole};
    }
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (head.empty() || head == "-" || head == "+") head += "0";
    cpp_int hd{head};
    Rational r{hd};
    if (!tail.empty()) {
        cpp_int tl{tail};
        Rational frac{tl};
        cpp_int den = 1;
        for (std::size_t k = 0; k < tail.size(); ++k) den *= 10;
        frac /= Rational{den};
        r += neg ? -frac : frac;
    }
    return r;
}

// Gaussian rational: the coefficient ring of the exact series backend.
struct RC {
    Rational re, im;

    RC() = default;
    RC(Rational r) : re(std::move(r)) {}
    RC(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    RC operator-() const { return {-re, -im}; }
    RC& operator+=(const RC& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    RC& operator-=(const RC& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend RC operator+(RC a, const RC& b) { return a += b; }
    friend RC operator-(RC a, const RC& b) { return a -= b; }
    friend RC operator*(const RC& a, const RC& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    RC& operator*=(const RC& o) { return *this = *this * o; }
    friend RC operator/(const RC& a, const RC& b) {
        Rational d = b.re * b.re + b.im * b.im;
        if (d == 0) throw std::domain_error("RC: division by zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend bool operator==(const RC& a, const RC& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const RC& a, const RC& b) { return !(a == b); }
};

inline cd to_cd(const RC& z) { return {to_double(z.re), to_double(z.im)}; }

template <>
struct ring<RC> {
    static RC zero() { return {}; }
    static RC one() { return {Rational(1)}; }
    static RC i() { return {Rational(0), Rational(1)}; }
    static RC from_ratio(long long p, long long q) {
        return {Rational(p) / Rational(q)};
    }
    static RC from_int(long long p) { return {Rational(p)}; }
    static RC conj(const RC& z) { return {z.re, -z.im}; }
    static bool is_zero(const RC& z) { return z.re == 0 && z.im == 0; }
    static double abs2(const RC& z) {
        double r = to_double(z.re), i = to_double(z.im);
        return r * r + i * i;
    }
    static cd approx(const RC& z) { return to_cd(z); }
};

// Polynomial in one formal real variable ("s") over RC, used by the indicial
// analysis so radial weights stay symbolic.
struct RCPoly {
    std::vector<RC> c;  // c[k] multiplies s^k; trailing zeros trimmed

    RCPoly() = default;
    RCPoly(RC v) {
        if (!ring<RC>::is_zero(v)) c.push_back(std::move(v));
    }
    static RCPoly variable() {
        RCPoly p;
        p.c = {RC{}, ring<RC>::one()};
        return p;
    }
    int degree() const { return int(c.size()) - 1; }
    void trim() {
        while (!c.empty() && ring<RC>::is_zero(c.back())) c.pop_back();
    }
    RC eval(const RC& s) const {
        RC acc{};
        for (size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
        return acc;
    }

    RCPoly operator-() const {
        RCPoly r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }
    friend RCPoly operator+(const RCPoly& a, const RCPoly& b) {
        RCPoly r;
        r.c.resize(std::max(a.c.size(), b.c.size()));
        for (size_t k = 0; k < r.c.size(); ++k) {
            if (k < a.c.size()) r.c[k] += a.c[k];
            if (k < b.c.size()) r.c[k] += b.c[k];
        }
        r.trim();
        return r;
    }
    friend RCPoly operator-(const RCPoly& a, const RCPoly& b) { return a + (-b); }
    RCPoly& operator+=(const RCPoly& o) { return *this = *this + o; }
    RCPoly& operator-=(const RCPoly& o) { return *this = *this - o; }
    friend RCPoly operator*(const RCPoly& a, const RCPoly& b) {
        RCPoly r;
        if (a.c.empty() || b.c.empty()) return r;
        r.c.assign(a.c.size() + b.c.size() - 1, RC{});
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }
    RCPoly& operator*=(const RCPoly& o) { return *this = *this * o; }
    // division only by a scalar (degree-0) polynomial
    friend RCPoly operator/(const RCPoly& a, const RCPoly& b) {
        if (b.degree() != 0) throw std::domain_error("RCPoly: non-scalar divisor");
        RCPoly r = a;
        for (auto& v : r.c) v = v / b.c[0];
        return r;
    }
    friend bool operator==(const RCPoly& a, const RCPoly& b) {
        return a.c == b.c;
    }
    friend bool operator!=(const RCPoly& a, const RCPoly& b) { return !(a == b); }
};

template <>
struct ring<RCPoly> {
    static RCPoly zero() { return {}; }
    static RCPoly one() { return RCPoly(ring<RC>::one()); }
    static RCPoly i() { return RCPoly(ring<RC>::i()); }
    static RCPoly from_ratio(long long p, long long q) {
        return RCPoly(ring<RC>::from_ratio(p, q));
    }
    static RCPoly from_int(long long p) { return RCPoly(ring<RC>::from_int(p)); }
    static RCPoly conj(const RCPoly& z) {
        RCPoly r = z;
        for (auto& v : r.c) v = ring<RC>::conj(v);
        return r;
    }
    static bool is_zero(const RCPoly& z) { return z.c.empty(); }
    static double abs2(const RCPoly& z) {
        double s = 0;
        for (const auto& v : z.c) s += ring<RC>::abs2(v);
        return s;
    }
    static cd approx(const RCPoly& z) { return z.c.empty() ? cd{} : to_cd(z.c[0]); }
};

}  // namespace ahc
