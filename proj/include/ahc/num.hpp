#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ahc {

using cd = std::complex<double>;

// Component ring of a tensor backend. Specialized for std::complex<double>
// (lattice), RC (exact rational complex) and RCPoly (polynomials in a formal
// real variable over RC).
template <class R>
struct ring;

template <>
struct ring<cd> {
    static cd zero() { return {0.0, 0.0}; }
    static cd one() { return {1.0, 0.0}; }
    static cd i() { return {0.0, 1.0}; }
    static cd from_ratio(long long p, long long q) {
        return {double(p) / double(q), 0.0};
    }
    static cd from_int(long long p) { return {double(p), 0.0}; }
    static cd conj(const cd& z) { return std::conj(z); }
    static bool is_zero(const cd& z) { return z == cd{0.0, 0.0}; }
    // squared magnitude as a double, for residual reports
    static double abs2(const cd& z) { return std::norm(z); }
    static cd approx(const cd& z) { return z; }
};

inline double to_double(double x) { return x; }

}  // namespace ahc
