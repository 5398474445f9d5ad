#pragma once

#include <vector>

#include "ahc/geometry.hpp"

namespace ahc {

// Gamma^c_{ab}, slots (up-full c, down-full a, down-full b); a is the
// derivative direction, b the differentiated frame vector
template <class G>
struct FullConnection {
    typename G::Field gamma;
};

// Hermitian connection: only the (1,0)->(1,0) block Gamma^j_{a i} is free,
// slots (up-plain j, down-full a, down-plain i)
template <class G>
struct HermitianConnection {
    typename G::Field gamma;
    typename G::Field gammabar;  // conjugate block
    typename G::Field full;      // both blocks widened into Gamma^c_{ab}
};

template <class G>
HermitianConnection<G> make_hermitian(const typename G::Field& gamma) {
    HermitianConnection<G> h{gamma, fconj(gamma), gamma};
    h.full = fwiden(fwiden(h.gamma, 0), 2) + fwiden(fwiden(h.gammabar, 0), 2);
    return h;
}

// torsion blocks of the Ehresmann-Libermann connection and derived forms
template <class G>
struct TorsionData {
    typename G::Field Tprim;  // T_i^k_{jbar}           (down-plain, up-plain, down-bar)
    typename G::Field T20;    // T^k_{ij}               (up-plain, down-plain, down-plain)
    typename G::Field Tkl;    // T_i^{kl}               (down-plain, up-plain, up-plain)
    typename G::Field N;      // N^{kbar}_{ij}          (up-bar, down-plain, down-plain)
    typename G::Field N3;     // N_{kij}, all lowered   (down-plain x3)
    typename G::Field tau;    // tau_i = T^j_{ij}       (down-plain)
};

// Koszul formula in frame terms; exact given the structure functions
template <class G>
FullConnection<G> levi_civita(const G& geo) {
    using R = typename G::S;
    const auto& C = geo.structure();
    auto Gf = geo.metric_gfull();
    auto GFI = geo.metric_gfull_inv();
    auto Cl = fmulcon(Gf, C, {{1, 0}});  // C_{cab} = G_{cd} C^d_{ab}
    auto DG = geo.dd(Gf);                // D_e G_{ab}

    // 2 Gamma_{cab} = D_a G_{bc} + D_b G_{ac} - D_c G_{ab}
    //               + C_{cab} - C_{bac} - C_{abc}
    auto low = fpermute(DG, {2, 0, 1});  // D_a G_{bc} arranged (c,a,b)
    low += fpermute(DG, {2, 1, 0});      // D_b G_{ac}
    low -= DG;                           // D_c G_{ab}
    low += Cl;
    low -= fpermute(Cl, {2, 1, 0});  // C_{bac}
    low -= fpermute(Cl, {2, 0, 1});  // C_{abc}
    low = fscale(low, ring<R>::from_ratio(1, 2));
    return {fmulcon(GFI, low, {{1, 0}})};
}

// first structure equation residual: Gamma^c_{ab} - Gamma^c_{ba} - C^c_{ab}
template <class G>
typename G::Field torsion_of(const G& geo, const typename G::Field& gamma_full) {
    return gamma_full - fpermute(gamma_full, {0, 2, 1}) - geo.structure();
}

// nabla_a g_{bc} for a full connection
template <class G>
typename G::Field metric_compat_residual(const G& geo, const FullConnection<G>& co) {
    auto Gf = geo.metric_gfull();
    auto r = geo.dd(Gf);
    r -= fmulcon(co.gamma, Gf, {{0, 0}});                     // Gamma^d_{ab} g_{dc}
    r -= fpermute(fmulcon(co.gamma, Gf, {{0, 1}}), {0, 2, 1});  // Gamma^d_{ac} g_{bd}
    return r;
}

// (1,0)-projection of the Levi-Civita connection
template <class G>
HermitianConnection<G> lichnerowicz(const G& geo, const FullConnection<G>& lc) {
    auto g = fblock(fblock(lc.gamma, 0, Bar::plain), 2, Bar::plain);
    (void)geo;
    return make_hermitian<G>(g);
}

// T_i^k_{jbar} = -2 * LC Gamma^k_{i jbar}; N^{kbar}_{ij} = -C^{kbar}_{ij}
template <class G>
TorsionData<G> torsion_data(const G& geo, const FullConnection<G>& lc) {
    using R = typename G::S;
    TorsionData<G> t;
    auto x = fblock(fblock(fblock(lc.gamma, 0, Bar::plain), 1, Bar::plain), 2, Bar::bar);
    t.Tprim = fscale(fpermute(x, {1, 0, 2}), ring<R>::from_int(-2));
    auto g2 = geo.metric_g();
    auto gi2 = geo.metric_ginv();
    t.T20 = fconj(flower(fraise(t.Tprim, 0, gi2), 1, g2));
    t.Tkl = fraise(t.Tprim, 2, gi2);
    t.N = fscale(fblock(fblock(fblock(geo.structure(), 0, Bar::bar), 1, Bar::plain), 2, Bar::plain),
                 ring<R>::from_int(-1));
    t.N3 = flower(t.N, 0, g2);
    t.tau = fcontract(t.T20, 0, 2);
    return t;
}

// Gamma^j_{ki} = L Gamma^j_{ki} - T^j_{ik}/2,  Gamma^j_{kbar i} = L Gamma^j_{kbar i} + T_i^j_{kbar}/2
template <class G>
HermitianConnection<G> ehresmann_libermann(const G& geo, const HermitianConnection<G>& lich,
                                           const TorsionData<G>& t) {
    using R = typename G::S;
    (void)geo;
    auto corr_p = fwiden(fpermute(t.T20, {0, 2, 1}), 1);    // T^j_{ik} arranged (j, k, i)
    auto corr_b = fwiden(fpermute(t.Tprim, {1, 2, 0}), 1);  // T_i^j_{kbar} arranged (j, kbar, i)
    auto g = lich.gamma + fscale(corr_p, ring<R>::from_ratio(-1, 2)) +
             fscale(corr_b, ring<R>::from_ratio(1, 2));
    return make_hermitian<G>(g);
}

namespace detail {

// + X(out, dir, c) contracted with t's slot k over X slot 2; free X slot 0
// replaces slot k; result slots (dir) + t-slots
template <class F>
F conn_term_out(const F& X, const F& t, int k) {
    F r = fmulcon(X, t, {{2, k}});
    const int rank = int(t.slots().size());
    std::vector<int> perm(static_cast<std::size_t>(rank) + 1, 0);
    perm[0] = 1;
    for (int m = 0; m < rank; ++m)
        perm[std::size_t(1 + m)] = m == k ? 0 : 2 + (m < k ? m : m - 1);
    return fpermute(r, perm);
}

// X contracted over slot 0; free X slot 2 replaces slot k
template <class F>
F conn_term_in(const F& X, const F& t, int k) {
    F r = fmulcon(X, t, {{0, k}});
    const int rank = int(t.slots().size());
    std::vector<int> perm(static_cast<std::size_t>(rank) + 1, 0);
    perm[0] = 0;
    for (int m = 0; m < rank; ++m)
        perm[std::size_t(1 + m)] = m == k ? 1 : 2 + (m < k ? m : m - 1);
    return fpermute(r, perm);
}

}  // namespace detail

// covariant derivative along all frame directions; prepends a down-full slot
template <class G>
typename G::Field nabla(const G& geo, const HermitianConnection<G>& co,
                        const typename G::Field& t) {
    auto out = geo.dd(t);
    const auto slots = t.slots();
    for (int k = 0; k < int(slots.size()); ++k) {
        const Slot s = slots[std::size_t(k)];
        if (s.v == Var::up) {
            if (s.b == Bar::plain)
                out += detail::conn_term_out(co.gamma, t, k);
            else if (s.b == Bar::bar)
                out += detail::conn_term_out(co.gammabar, t, k);
            else
                out += detail::conn_term_out(co.full, t, k);
        } else {
            if (s.b == Bar::plain)
                out -= detail::conn_term_in(co.gamma, t, k);
            else if (s.b == Bar::bar)
                out -= detail::conn_term_in(co.gammabar, t, k);
            else
                out -= detail::conn_term_in(co.full, t, k);
        }
    }
    return out;
}

// R_i^j_{ab}, slots (down-plain i, up-plain j, down-full a, down-full b)
template <class G>
typename G::Field curvature(const G& geo, const HermitianConnection<G>& co) {
    auto dG = geo.dd(co.gamma);  // (e, j, a', i)
    auto R = fpermute(dG, {3, 1, 0, 2});
    R -= fpermute(dG, {3, 1, 2, 0});
    auto gg = fmulcon(co.gamma, co.gamma, {{2, 0}});  // (j, a, b, i)
    R += fpermute(gg, {3, 0, 1, 2});
    R -= fpermute(gg, {3, 0, 2, 1});
    auto cg = fmulcon(geo.structure(), co.gamma, {{0, 1}});  // (a, b, j, i)
    R -= fpermute(cg, {3, 2, 0, 1});
    return R;
}

// R_{i jbar} = R_k^k_{i jbar}
template <class G>
typename G::Field ricci(const typename G::Field& R) {
    auto tr = fcontract(R, 0, 1);
    return fblock(fblock(tr, 0, Bar::plain), 1, Bar::bar);
}

template <class G>
typename G::Field scalar_curvature(const G& geo, const typename G::Field& ric) {
    return fmulcon(geo.metric_ginv(), ric, {{0, 0}, {1, 1}});
}

// residual fields of the four first Bianchi identities; callers take norms
template <class G>
struct BianchiResiduals {
    typename G::Field b30, b21, b12, b03;
};

template <class G>
BianchiResiduals<G> bianchi_residuals(const G& geo, const HermitianConnection<G>& co,
                                      const TorsionData<G>& t, const typename G::Field& R) {
    BianchiResiduals<G> out{geo.zero({dn_p, up_p, dn_p, dn_p}), geo.zero({dn_p, up_p, dn_p, dn_b}),
                            geo.zero({dn_p, up_p, dn_b, dn_b}), geo.zero({up_p, dn_b, dn_b, dn_b})};

    auto Nc = fconj(t.N);  // N^k_{ibar jbar}
    auto nT = nabla(geo, co, t.T20);
    auto nN = nabla(geo, co, Nc);

    // (3,0):  cyc{ R_j^i_{kl} } = cyc{ nabla_j T^i_{kl} } + cyc{ T^i_{pj} T^p_{kl} }
    {
        auto Rpp = fblock(fblock(R, 2, Bar::plain), 3, Bar::plain);
        auto dT = fblock(nT, 0, Bar::plain);        // (j, i, k, l)
        auto TT = fmulcon(t.T20, t.T20, {{1, 0}});  // (i, j, k, l)
        out.b30 = fcyclic(Rpp, {0, 2, 3}) - fcyclic(dT, {0, 2, 3}) -
                  fcyclic(fpermute(TT, {1, 0, 2, 3}), {0, 2, 3});
    }
    // (2,1):  R_j^i_{k lbar} - R_k^i_{j lbar} = nabla_lbar T^i_{jk} + N^i_{qbar lbar} N^{qbar}_{jk}
    {
        auto Rm = fblock(fblock(R, 2, Bar::plain), 3, Bar::bar);  // (j, i, k, lbar)
        auto lhs = Rm - fpermute(Rm, {2, 1, 0, 3});
        auto dT = fpermute(fblock(nT, 0, Bar::bar), {2, 1, 3, 0});  // -> (j, i, k, lbar)
        auto NN = fmulcon(Nc, t.N, {{1, 0}});                       // (i, lbar, j, k)
        out.b21 = lhs - dT - fpermute(NN, {2, 0, 3, 1});
    }
    // (1,2):  R_j^i_{kbar lbar} = nabla_j N^i_{kbar lbar} + N^p_{kbar lbar} T^i_{pj}
    {
        auto Rb = fblock(fblock(R, 2, Bar::bar), 3, Bar::bar);
        auto dN = fblock(nN, 0, Bar::plain);     // (j, i, kbar, lbar)
        auto NT = fmulcon(t.T20, Nc, {{1, 0}});  // (i, j, kbar, lbar)
        out.b12 = Rb - dN - fpermute(NT, {1, 0, 2, 3});
    }
    // (0,3):  0 = cyc{ nabla_jbar N^i_{kbar lbar} } + cyc{ N^i_{pbar jbar} T^{pbar}_{kbar lbar} }
    // assembled as (i, jbar, kbar, lbar)
    {
        auto dN = fpermute(fblock(nN, 0, Bar::bar), {1, 0, 2, 3});  // (i, jbar, kbar, lbar)
        auto NT = fmulcon(Nc, fconj(t.T20), {{1, 0}});              // (i, jbar, kbar, lbar)
        out.b03 = fcyclic(dN, {1, 2, 3}) + fcyclic(NT, {1, 2, 3});
    }
    return out;
}

// commutation residual (nabla_a nabla_b - nabla_b nabla_a) V^i
//   - R_j^i_{ab} V^j + Theta^c_{ab} nabla_c V^i   on a (1,0) vector field V
template <class G>
typename G::Field commutation_residual(const G& geo, const HermitianConnection<G>& co,
                                       const typename G::Field& R, const typename G::Field& V) {
    auto nV = nabla(geo, co, V);
    auto nnV = nabla(geo, co, nV);  // (a, b, i)
    auto lhs = nnV - fpermute(nnV, {1, 0, 2});
    auto RV = fmulcon(R, V, {{0, 0}});  // (i, a, b)
    auto theta = torsion_of(geo, co.full);
    auto TdV = fmulcon(theta, nV, {{0, 0}});  // (a, b, i)
    return lhs - fpermute(RV, {1, 2, 0}) + TdV;
}

}  // namespace ahc
