#pragma once

#include <array>
#include <vector>

#include "ahc/connections.hpp"

namespace ahc {

// |x|^2 density: contract x against the conjugate with every slot flipped by
// the metric; rank-0 field, real for tensors with the reality property
template <class G>
typename G::Field squared_norm_density(const G& geo, const typename G::Field& x) {
    auto g2 = geo.metric_g();
    auto gi2 = geo.metric_ginv();
    auto xc = fconj(x);
    const auto slots = xc.slots();
    for (int k = 0; k < int(slots.size()); ++k)
        xc = slots[std::size_t(k)].v == Var::down ? fraise(xc, k, gi2) : flower(xc, k, g2);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < int(slots.size()); ++k) pairs.push_back({k, k});
    return fmulcon(x, xc, pairs);
}

template <class G>
struct DensityFields {
    typename G::Field n2, nsym2, nskew2, t2, tau2, ncross;
};

template <class G>
DensityFields<G> density_fields(const G& geo, const TorsionData<G>& t) {
    DensityFields<G> d{squared_norm_density(geo, t.N3),
                       squared_norm_density(geo, fsymmetrize(t.N3, {0, 1})),
                       squared_norm_density(geo, falternate(t.N3, {0, 1})),
                       squared_norm_density(geo, t.T20),
                       squared_norm_density(geo, t.tau),
                       geo.zero({})};
    // N_{ijk} N^{jik}
    auto gi2 = geo.metric_ginv();
    auto up = fraise(fraise(fraise(fconj(t.N3), 0, gi2), 1, gi2), 2, gi2);
    d.ncross = fmulcon(t.N3, up, {{0, 1}, {1, 0}, {2, 2}});
    return d;
}

// tau^k with an up-plain slot
template <class G>
typename G::Field tau_up(const G& geo, const TorsionData<G>& t) {
    return fraise(fconj(t.tau), 0, geo.metric_ginv());
}

// (nabla^k X)...k-first: raise the barred derivative direction
template <class G>
typename G::Field nabla_up(const G& geo, const HermitianConnection<G>& co,
                           const typename G::Field& x) {
    return fraise(fblock(nabla(geo, co, x), 0, Bar::bar), 0, geo.metric_ginv());
}

// Euler-Lagrange tensor S_{ij} of the N^2 + tau^2/2 functional
template <class G>
typename G::Field s_tensor(const G& geo, const HermitianConnection<G>& co,
                           const TorsionData<G>& t) {
    using R = typename G::S;
    auto tup = tau_up(geo, t);
    auto P = falternate(t.N3, {0, 1});  // N_{[ij]k}
    // (nabla^k + tau^k) N_{[ij]k}
    auto acc = fcontract(nabla_up(geo, co, P), 0, 3);
    acc += fmulcon(P, tup, {{2, 0}});
    // (1/2) nabla_{[i} tau_{j]}
    auto dtau = fblock(nabla(geo, co, t.tau), 0, Bar::plain);
    acc += fscale(falternate(dtau, {0, 1}), ring<R>::from_ratio(1, 2));
    // (1/2) N_{[i|kl} T_{|j]}^{kl}
    auto nt = fmulcon(t.N3, t.Tkl, {{1, 1}, {2, 2}});
    acc += fscale(falternate(nt, {0, 1}), ring<R>::from_ratio(1, 2));
    // -(1/4) N_{kij} tau^k
    acc += fscale(fmulcon(t.N3, tup, {{0, 0}}), ring<R>::from_ratio(-1, 4));
    // +(1/4) T^k_{ij} tau_k
    acc += fscale(fmulcon(t.T20, t.tau, {{0, 0}}), ring<R>::from_ratio(1, 4));
    return fscale(acc, ring<R>::i());
}

template <class G>
struct TermwiseEL {
    typename G::Field nsym, nskew, tt, tau, n;  // Edot for each functional
};

template <class G>
TermwiseEL<G> termwise_el(const G& geo, const HermitianConnection<G>& co,
                          const TorsionData<G>& t) {
    using R = typename G::S;
    auto tup = tau_up(geo, t);
    auto gi2 = geo.metric_ginv();

    auto nsk = falternate(t.N3, {0, 1});
    auto nsy = fsymmetrize(t.N3, {0, 1});

    // (nabla^k + tau^k) applied to N_{kij} (contract slot 0) and to X_{ijk} (slot 2)
    auto div0 = [&](const typename G::Field& x) {
        auto nx = nabla_up(geo, co, x);
        return fcontract(nx, 0, 1) + fmulcon(x, tup, {{0, 0}});
    };
    auto div2 = [&](const typename G::Field& x) {
        auto nx = nabla_up(geo, co, x);
        return fcontract(nx, 0, 3) + fmulcon(x, tup, {{2, 0}});
    };
    // X_{[i|kl} T_{|j]}^{kl}
    auto tcross = [&](const typename G::Field& x) {
        return falternate(fmulcon(x, t.Tkl, {{1, 1}, {2, 2}}), {0, 1});
    };

    TermwiseEL<G> e{geo.zero({dn_p, dn_p}), geo.zero({dn_p, dn_p}), geo.zero({dn_p, dn_p}),
                    geo.zero({dn_p, dn_p}), geo.zero({dn_p, dn_p})};

    auto d0 = div0(t.N3);    // (nabla^k+tau^k) N_{kij} -> (i,j)
    auto dsk = div2(nsk);    // (nabla^k+tau^k) (Nskew)_{ijk}
    e.nsym = fscale(fscale(d0, ring<R>::from_ratio(-1, 4)) +
                        fscale(dsk, ring<R>::from_ratio(1, 4)) +
                        fscale(tcross(nsy), ring<R>::from_ratio(1, 2)),
                    ring<R>::i());
    e.nskew = fscale(fscale(d0, ring<R>::from_ratio(1, 4)) +
                         fscale(dsk, ring<R>::from_ratio(3, 4)) +
                         fscale(tcross(nsk), ring<R>::from_ratio(1, 2)),
                     ring<R>::i());

    // Edot^T = i( -(nabla^kbar + tau^kbar) T_{kbar i j} + N_{kl[i} T_{j]}^{kl}
    //             - (1/2) N_{[i|kl} T_{|j]}^{kl} )
    {
        auto Tlow = flower(t.T20, 0, geo.metric_g());  // T_{kbar i j}
        auto nT = nabla(geo, co, Tlow);
        auto nup = fraise(fblock(nT, 0, Bar::plain), 0, gi2);  // nabla^kbar, slot up-bar
        auto acc = fscale(fcontract(nup, 0, 1), ring<R>::from_int(-1));
        auto tupbar = fconj(tup);  // tau^kbar
        acc -= fmulcon(Tlow, tupbar, {{0, 0}});
        auto ntl = fmulcon(t.N3, t.Tkl, {{0, 1}, {1, 2}});  // N_{kl i} T_j^{kl} -> (i, j)
        acc += falternate(ntl, {0, 1});
        acc -= fscale(tcross(t.N3), ring<R>::from_ratio(1, 2));
        e.tt = fscale(acc, ring<R>::i());
    }
    // Edot^tau = i( nabla_{[i} tau_{j]} - (1/2) N_{kij} tau^k + (1/2) T^k_{ij} tau_k )
    {
        auto dtau = fblock(nabla(geo, co, t.tau), 0, Bar::plain);
        auto acc = falternate(dtau, {0, 1});
        acc += fscale(fmulcon(t.N3, tup, {{0, 0}}), ring<R>::from_ratio(-1, 2));
        acc += fscale(fmulcon(t.T20, t.tau, {{0, 0}}), ring<R>::from_ratio(1, 2));
        e.tau = fscale(acc, ring<R>::i());
    }
    e.n = e.nsym + e.nskew;
    return e;
}

// ---------------------------------------------------------------------------
// first variations of Gamma, N, T, tau under Jdot = A in a fixed frame

template <class G>
struct FirstVariations {
    // connection blocks, all arranged (output, direction, differentiated)
    typename G::Field dG_bar_pp;  // Gammadot^{kbar}_{ij}
    typename G::Field dG_bar_bp;  // Gammadot^{kbar}_{ibar j}
    typename G::Field dG_p_bp;    // Gammadot^{k}_{ibar j}
    typename G::Field dG_p_pp;    // Gammadot^{k}_{ij}
    // torsion blocks, arranged (up, first, second)
    typename G::Field dN_pp, dN_pb, dN_bb;
    typename G::Field dT_pp, dT_pb, dT_bb;
    typename G::Field dtau;
};

template <class G>
FirstVariations<G> first_variations(const G& geo, const HermitianConnection<G>& co,
                                    const TorsionData<G>& t, const typename G::Field& A) {
    using R = typename G::S;
    const R ih = ring<R>::i() * ring<R>::from_ratio(1, 2);
    auto gi2 = geo.metric_ginv();
    auto Ab = fconj(A);                  // A_{ibar jbar}
    auto Ar = fraise(A, 1, gi2);         // A_j^{kbar}
    auto Abr = fraise(Ab, 1, gi2);       // A_{jbar}^k
    auto Aup = fraise(Ab, 0, gi2);       // A^k_{lbar}
    auto Nc = fconj(t.N);                // N^k_{ibar jbar}
    auto Ncr = fraise(Nc, 2, gi2);       // N^k_{ibar}^l
    auto T20r = fraise(t.T20, 2, gi2);   // T^k_{i}^{lbar}
    auto N3r = fraise(t.N3, 2, gi2);     // N_{ij}^{lbar}
    auto Tc = fconj(t.T20);              // T^{lbar}_{ibar jbar}

    FirstVariations<G> v{geo.zero({up_b, dn_p, dn_p}), geo.zero({up_b, dn_b, dn_p}),
                         geo.zero({up_p, dn_b, dn_p}), geo.zero({up_p, dn_p, dn_p}),
                         geo.zero({up_p, dn_p, dn_p}), geo.zero({up_p, dn_p, dn_b}),
                         geo.zero({up_p, dn_b, dn_b}), geo.zero({up_p, dn_p, dn_p}),
                         geo.zero({up_p, dn_p, dn_b}), geo.zero({up_p, dn_b, dn_b}),
                         geo.zero({dn_p})};

    auto nAr = nabla(geo, co, Ar);  // (dir, j, kbar)
    v.dG_bar_pp = fscale(fpermute(fblock(nAr, 0, Bar::plain), {2, 0, 1}), ih);
    v.dG_bar_bp = fscale(fpermute(fblock(nAr, 0, Bar::bar), {2, 0, 1}), ih);

    auto nAbr = nabla(geo, co, Abr);  // (dir, ibar, k)
    {
        auto t1 = fpermute(fblock(nAbr, 0, Bar::plain), {2, 1, 0});  // (k, ibar, j)
        auto t2 = fmulcon(Ncr, A, {{2, 1}});                         // (k, ibar, j)
        auto t3 = fpermute(fmulcon(T20r, Ab, {{2, 1}}), {0, 2, 1});  // (k, ibar, j)
        v.dG_p_bp = fscale(t1 + t2 + t3, ih);
    }
    {
        auto nA = nabla(geo, co, A);
        auto t1 = fraise(fblock(nA, 0, Bar::bar), 0, gi2);           // nabla^k A_{ij}
        auto t2 = fpermute(fmulcon(N3r, Aup, {{2, 1}}), {2, 1, 0});  // N_{ji}^{lbar} A^k_{lbar} -> (k,i,j)
        auto t3 = fpermute(fmulcon(t.Tkl, A, {{2, 1}}), {1, 2, 0});  // T_j^{kl} A_{il} -> (k,i,j)
        v.dG_p_pp = fscale(t1 - t2 - t3, R(ring<R>::from_int(-1)) * ih);
    }

    // Ndot blocks
    v.dN_pp = fscale(fpermute(fmulcon(t.N, Aup, {{0, 1}}), {2, 0, 1}), R(ring<R>::from_int(-1)) * ih);
    v.dN_pb = fscale(fpermute(fmulcon(Ncr, A, {{2, 1}}), {0, 2, 1}), R(ring<R>::from_int(-1)) * ih);
    {
        auto x = falternate(fblock(nabla(geo, co, Abr), 0, Bar::bar), {0, 1});  // grad_{[ibar} A_{jbar]}^k
        auto y = fpermute(fmulcon(Tc, Aup, {{0, 1}}), {2, 0, 1});               // T^{lbar}_{ibar jbar} A^k_{lbar}
        v.dN_bb = fscale(fpermute(x, {2, 0, 1}) - fscale(y, ring<R>::from_ratio(1, 2)),
                         R(ring<R>::from_int(-1)) * ring<R>::i());
    }
    // Tdot blocks
    {
        auto nA = nabla(geo, co, A);
        auto t1 = fraise(fblock(nA, 0, Bar::bar), 0, gi2);  // nabla^k A_{ij} -> (k,i,j)
        auto t2 = fpermute(fmulcon(falternate(N3r, {0, 1}), Aup, {{2, 1}}), {2, 0, 1});
        auto t3 = fpermute(falternate(fmulcon(t.Tkl, A, {{2, 1}}), {0, 2}), {1, 0, 2});
        auto t4 = fpermute(fmulcon(t.N, Aup, {{0, 1}}), {2, 0, 1});
        v.dT_pp = fscale(t1 + t2 + t3 - fscale(t4, ring<R>::from_ratio(1, 2)),
                         R(ring<R>::from_int(-1)) * ring<R>::i());
    }
    v.dT_pb = fscale(fmulcon(t.T20, Abr, {{2, 1}}), R(ring<R>::from_int(-1)) * ih);
    v.dT_bb = fscale(fpermute(fmulcon(Tc, Aup, {{0, 1}}), {2, 0, 1}), R(ring<R>::from_int(-1)) * ih);
    // taudot
    {
        auto nA = nabla(geo, co, A);
        auto t1 = fcontract(fraise(fblock(nA, 0, Bar::bar), 0, gi2), 0, 2);  // nabla^j A_{ij}
        auto N3rr = fraise(N3r, 1, gi2);                                     // N_i^{jbar kbar}... from N3_{ijk}
        auto t2 = fmulcon(N3rr, Ab, {{1, 0}, {2, 1}});
        auto t3 = fmulcon(t.Tkl, A, {{1, 0}, {2, 1}});
        auto tup = tau_up(geo, t);
        auto t4 = fmulcon(A, tup, {{1, 0}});
        const R h = ring<R>::from_ratio(1, 2);
        v.dtau = fscale(t1 + fscale(t2 + t3 + t4, h), R(ring<R>::from_int(-1)) * ring<R>::i());
    }
    return v;
}

// ---------------------------------------------------------------------------
// linearization at Kahler-Einstein points

// nabla_k nabla^k X
template <class G>
typename G::Field rough_laplacian(const G& geo, const HermitianConnection<G>& co,
                                  const typename G::Field& x) {
    auto nn = nabla(geo, co, nabla(geo, co, x));
    auto blk = fblock(fblock(nn, 0, Bar::plain), 1, Bar::bar);
    return fmulcon(geo.metric_ginv(), blk, {{0, 0}, {1, 1}});
}

// nabla_{[i} nabla^k A_{j]k}
template <class G>
typename G::Field skew_div_grad(const G& geo, const HermitianConnection<G>& co,
                                const typename G::Field& A) {
    auto Y = fcontract(fraise(fblock(nabla(geo, co, A), 0, Bar::bar), 0, geo.metric_ginv()), 0, 2);
    auto nY = fblock(nabla(geo, co, Y), 0, Bar::plain);
    return falternate(nY, {0, 1});
}

// P_S A = -(1/2)(nabla_k nabla^k A + lambda A)
template <class G>
typename G::Field linearized_s(const G& geo, const HermitianConnection<G>& co,
                               const typename G::Field& A, const typename G::S& lambda) {
    using R = typename G::S;
    auto r = rough_laplacian(geo, co, A) + fscale(A, lambda);
    return fscale(r, ring<R>::from_ratio(-1, 2));
}

// identification with T^{1,0}-valued (0,1)-forms: A_{ibar}^j
template <class G>
typename G::Field to_ts_form(const G& geo, const typename G::Field& A) {
    return fraise(fconj(A), 1, geo.metric_ginv());
}

// Dolbeault Laplacian on A_{ibar}^j:
//   -(nabla_kbar nabla^kbar A_{ibar}^j + R_k^j A_{ibar}^k)
template <class G>
typename G::Field dolbeault(const G& geo, const HermitianConnection<G>& co,
                            const typename G::Field& ric, const typename G::Field& Aop) {
    using R = typename G::S;
    auto nn = nabla(geo, co, nabla(geo, co, Aop));
    auto blk = fblock(fblock(nn, 0, Bar::bar), 1, Bar::plain);
    auto lap = fmulcon(geo.metric_ginv(), blk, {{0, 1}, {1, 0}});
    auto rup = fraise(ric, 1, geo.metric_ginv());  // R_k^j
    auto rterm = fpermute(fmulcon(rup, Aop, {{0, 1}}), {1, 0});
    return fscale(lap + rterm, ring<R>::from_int(-1));
}

template <class G>
struct SecondVariations {
    typename G::Field nsym, nskew, tt, tau;
};

// linearizations of the termwise Euler-Lagrange tensors at a Kahler-Einstein
// point with Ric = lambda g
template <class G>
SecondVariations<G> second_variations(const G& geo, const HermitianConnection<G>& co,
                                      const typename G::Field& A, const typename G::S& lambda) {
    using R = typename G::S;
    auto L = rough_laplacian(geo, co, A);
    auto B = skew_div_grad(geo, co, A);
    auto lamA = fscale(A, lambda);
    SecondVariations<G> s{geo.zero({dn_p, dn_p}), geo.zero({dn_p, dn_p}), geo.zero({dn_p, dn_p}),
                          geo.zero({dn_p, dn_p})};
    s.nsym = fscale(L, ring<R>::from_ratio(-1, 8)) + fscale(lamA, ring<R>::from_ratio(-3, 8)) +
             fscale(B, ring<R>::from_ratio(1, 8));
    s.nskew = fscale(L, ring<R>::from_ratio(-3, 8)) + fscale(lamA, ring<R>::from_ratio(-1, 8)) +
              fscale(B, ring<R>::from_ratio(-5, 8));
    s.tt = fscale(L, ring<R>::from_int(-1));
    s.tau = B;
    return s;
}

// admissible second-order functionals: coefficients (a,b,c,d) with
// linearized Euler-Lagrange equal to half the Dolbeault Laplacian
struct EnergyCoefficients {
    double a = 1, b = 1, c = 0, d = 0.5;
};

inline EnergyCoefficients family_member(double s) {
    return {1 + s, 1 - 3 * s, s, 0.5 - 2 * s};
}

// residuals of the three linear conditions, zero iff (a,b,c,d) lies on the
// family line
inline std::array<double, 3> family_residual(const EnergyCoefficients& c) {
    return {-c.a / 8 - 3 * c.b / 8 - c.c + 0.5, -3 * c.a / 8 - c.b / 8 + 0.5,
            c.a / 8 - 5 * c.b / 8 + c.d};
}

inline bool family_contains(const EnergyCoefficients& c, double tol = 1e-12) {
    auto r = family_residual(c);
    return std::abs(r[0]) <= tol && std::abs(r[1]) <= tol && std::abs(r[2]) <= tol;
}

}  // namespace ahc
