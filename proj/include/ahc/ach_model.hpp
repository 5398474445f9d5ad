#pragma once

#include <array>
#include <cmath>
#include <string>

#include "ahc/connections.hpp"
#include "ahc/rational.hpp"
#include "ahc/variational.hpp"

namespace ahc {

// Constant Tanaka-Webster data of a homogeneous boundary of dimension 2n-1.
// Boundary indices alpha run over 1..n-1; they occupy frame slots 1..n-1 of
// the model, slot 0 being the Z_0 = x/2 d_x + i x^2 T direction.
struct TWBoundaryData {
    int n = 2;
    std::vector<RC> levi;          // h-hat_{alpha betabar}, (n-1)^2, Hermitian PD
    std::vector<RC> tw_torsion;    // A-hat_{alpha beta}, (n-1)^2, symmetric
    std::vector<RC> cr_nijenhuis;  // N-hat^{gammabar}_{alpha beta}, (n-1)^3, skew in (alpha,beta)
    std::vector<RC> conn_hol;      // Gamma-hat^{gamma}_{alpha beta}, (n-1)^3
    std::vector<RC> conn_antihol;  // Gamma-hat^{gamma}_{alphabar beta}, (n-1)^3
    std::vector<RC> conn_reeb;     // Gamma-hat^{gamma}_{0 beta}, (n-1)^2

    int m() const { return n - 1; }
    const RC& h(int a, int b) const { return levi[std::size_t(a * m() + b)]; }
    const RC& A(int a, int b) const { return tw_torsion[std::size_t(a * m() + b)]; }
    const RC& Nh(int g, int a, int b) const {
        return cr_nijenhuis[std::size_t((g * m() + a) * m() + b)];
    }
    const RC& Gh(int g, int a, int b) const { return conn_hol[std::size_t((g * m() + a) * m() + b)]; }
    const RC& Gah(int g, int a, int b) const {
        return conn_antihol[std::size_t((g * m() + a) * m() + b)];
    }
    const RC& Gr(int g, int b) const { return conn_reeb[std::size_t(g * m() + b)]; }

    static TWBoundaryData heisenberg(int n);
    // 5-dimensional nilpotent example with nonvanishing CR Nijenhuis tensor
    static TWBoundaryData nilpotent_n3();

    // Hermitian PD Levi metric, symmetric torsion, skew Nijenhuis, metric
    // compatibility of the connection constants, and the Jacobi identity of
    // the derived model brackets (all exact); throws on failure
    void validate() const;
};

namespace detail {
template <class R>
R lift_rc(const RC& v);
template <>
inline RC lift_rc<RC>(const RC& v) { return v; }
template <>
inline RCPoly lift_rc<RCPoly>(const RC& v) { return RCPoly(v); }
}  // namespace detail

// exact frame metric of the model: g_{0 0bar} = 1, g_{alpha betabar} = h-hat
template <class R>
HermitianMetric<R> model_metric(const TWBoundaryData& tw) {
    const int n = tw.n;
    std::vector<R> g(std::size_t(n) * std::size_t(n), ring<R>::zero());
    g[0] = ring<R>::one();
    for (int a = 0; a < tw.m(); ++a)
        for (int b = 0; b < tw.m(); ++b)
            g[std::size_t((a + 1) * n + (b + 1))] = detail::lift_rc<R>(tw.h(a, b));
    return HermitianMetric<R>(n, std::move(g));
}

// structure functions C^c_{ab} of the model frame as a series field
template <class R>
SeriesField<R> model_structure_constants(const TWBoundaryData& tw, int maxdeg) {
    const int n = tw.n, m = tw.m();
    SeriesField<R> C(n, maxdeg, {up_f, dn_f, dn_f});
    auto mirror = [&](int i) { return i < n ? i + n : i - n; };
    auto put = [&](int c, int a, int b, int deg, const RC& v) {
        if (deg > maxdeg) throw std::logic_error("model structure constants need maxdeg >= 2");
        R lv = detail::lift_rc<R>(v);
        R lvc = detail::lift_rc<R>(ring<RC>::conj(v));
        C[deg].at({c, a, b}) = lv;
        C[deg].at({c, b, a}) = ring<R>::from_int(-1) * lv;
        C[deg].at({mirror(c), mirror(a), mirror(b)}) = lvc;
        C[deg].at({mirror(c), mirror(b), mirror(a)}) = ring<R>::from_int(-1) * lvc;
    };
    // A-hat with the index raised by the frame metric h-hat
    std::vector<RC> hi = invert_matrix(tw.levi, m);
    auto Aup = [&](int a, int g) {  // A-hat_alpha^{gammabar}
        RC acc{};
        for (int b = 0; b < m; ++b) acc += hi[std::size_t(g * m + b)] * tw.A(a, b);
        return acc;
    };
    const RC iu = ring<RC>::i();
    const RC half = ring<RC>::from_ratio(1, 2);

    // [Z_0, Z_alpha] = (1/2) Z_alpha + i x^2 (Ghat^g_{0a} Z_g - Ahat_a^gbar Z_gbar)
    for (int a = 0; a < m; ++a) {
        put(1 + a, 0, 1 + a, 0, half);
        for (int g = 0; g < m; ++g) {
            if (!ring<RC>::is_zero(tw.Gr(g, a))) put(1 + g, 0, 1 + a, 2, iu * tw.Gr(g, a));
            RC au = Aup(a, g);
            if (!ring<RC>::is_zero(au)) put(n + 1 + g, 0, 1 + a, 2, RC{Rational(0), Rational(-1)} * au);
        }
    }
    // [Z_0bar, Z_alpha] = (1/2) Z_alpha - i x^2 (...)
    for (int a = 0; a < m; ++a) {
        put(1 + a, n, 1 + a, 0, half);
        for (int g = 0; g < m; ++g) {
            if (!ring<RC>::is_zero(tw.Gr(g, a)))
                put(1 + g, n, 1 + a, 2, RC{Rational(0), Rational(-1)} * tw.Gr(g, a));
            RC au = Aup(a, g);
            if (!ring<RC>::is_zero(au)) put(n + 1 + g, n, 1 + a, 2, iu * au);
        }
    }
    // [Z_0, Z_0bar] = -Z_0 + Z_0bar
    put(0, 0, n, 0, RC{Rational(-1)});
    put(n, 0, n, 0, RC{Rational(1)});
    // [Z_alpha, Z_beta] = x (Ghat^g_{ab} - Ghat^g_{ba}) Z_g - x Nhat^gbar_{ab} Z_gbar
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int g = 0; g < m; ++g) {
                RC anti = tw.Gh(g, a, b) - tw.Gh(g, b, a);
                if (!ring<RC>::is_zero(anti)) put(1 + g, 1 + a, 1 + b, 1, anti);
                if (!ring<RC>::is_zero(tw.Nh(g, a, b)))
                    put(n + 1 + g, 1 + a, 1 + b, 1, RC{Rational(-1)} * tw.Nh(g, a, b));
            }
    // [Z_alpha, Z_betabar] = -x Ghat^g_{bbar a} Z_g + x conj(Ghat^g_{abar b}) Z_gbar
    //                        - h-hat_{a bbar} (Z_0 - Z_0bar)
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            for (int g = 0; g < m; ++g) {
                if (!ring<RC>::is_zero(tw.Gah(g, b, a)))
                    put(1 + g, 1 + a, n + 1 + b, 1, RC{Rational(-1)} * tw.Gah(g, b, a));
                RC cg = ring<RC>::conj(tw.Gah(g, a, b));
                if (!ring<RC>::is_zero(cg)) put(n + 1 + g, 1 + a, n + 1 + b, 1, cg);
            }
            if (!ring<RC>::is_zero(tw.h(a, b))) {
                put(0, 1 + a, n + 1 + b, 0, RC{Rational(-1)} * tw.h(a, b));
                put(n, 1 + a, n + 1 + b, 0, tw.h(a, b));
            }
        }
    return C;
}

// model backend over a ring rich enough for the task at hand
template <class R>
SeriesGeo<R> model_geometry(const TWBoundaryData& tw, int maxdeg) {
    SeriesGeo<R> geo;
    geo.nn = tw.n;
    geo.maxdeg = maxdeg;
    geo.C = model_structure_constants<R>(tw, maxdeg);
    HermitianMetric<R> gm = model_metric<R>(tw);
    auto lift = [&](const Tensor<R>& t) {
        SeriesField<R> f(tw.n, maxdeg, t.slots());
        f[0] = t;
        return f;
    };
    geo.gmat = lift(gm.as_tensor());
    geo.gmatinv = lift(gm.inv_tensor());
    geo.gfull = lift(gm.full_tensor());
    geo.gfullinv = lift(gm.full_inv_tensor());
    return geo;
}

// the full Ehresmann-Libermann package of the model structure
struct ModelStructure {
    SeriesGeo<RC> geo;
    FullConnection<SeriesGeo<RC>> lc;
    HermitianConnection<SeriesGeo<RC>> lich, el;
    TorsionData<SeriesGeo<RC>> tors;
    SeriesField<RC> S;  // Euler-Lagrange tensor series
};

ModelStructure model_structure(const TWBoundaryData& tw, int maxdeg = -1);

// constant coefficients of the complex hyperbolic model (Heisenberg boundary)
HermitianConnection<SeriesGeo<RC>> chn_christoffels(int n);

struct IndicialData {
    int n = 2;
    // monic quadratics s^2 - 2 n s - c for the two blocks
    double c_0a = 0, c_ab = 0;
    std::array<double, 2> roots_0a{}, roots_ab{};
    double radius = 0;
    RCPoly poly_0a, poly_ab;  // exact
};

IndicialData indicial_data(int n);

// Apply the model Dolbeault-normalized operator 2 P_S to x^s * (constant A)
// with tangential dependence suppressed; returns the两 extracted radial
// polynomials in s for the (0,alpha) and (alpha,beta) blocks. The second is
// defined for n >= 3 (the skew tangential block is trivial at n = 2).
struct RadialPolys {
    RCPoly p0a, pab;
    bool ab_defined = false;
};
RadialPolys radial_polynomials(int n);

// |2 P_S (x^s A) - (-(1/4))(s^2 - 2 n s - c) x^s A| evaluated at a real s
std::pair<double, double> radial_indicial_residual(int n, double s);

}  // namespace ahc
