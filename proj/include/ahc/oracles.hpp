#pragma once

#include <random>

#include "ahc/flows.hpp"

namespace ahc {

// A smooth field presented as a finite list of Fourier modes, so it can be
// sampled exactly on lattices of different extents.
struct ModeField {
    int n = 0;
    std::vector<Slot> slots;
    std::vector<std::pair<std::vector<int>, Tensor<cd>>> modes;

    LatticeField realize(const TorusLattice& lat) const {
        return make_mode_field(lat, slots, modes);
    }
};

// random skew (down,down) mode field for retraction directions
inline ModeField random_skew_modes(int n, std::uint64_t seed, int nmodes, int maxfreq,
                                   double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> fdist(-maxfreq, maxfreq);
    std::normal_distribution<double> cdist(0.0, 1.0);
    ModeField m{n, {dn_p, dn_p}, {}};
    for (int k = 0; k < nmodes; ++k) {
        std::vector<int> freq(std::size_t(2 * n));
        for (auto& f : freq) f = fdist(rng);
        Tensor<cd> c(n, {dn_p, dn_p});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                cd v(cdist(rng), cdist(rng));
                c.at({i, j}) = amplitude * v;
                c.at({j, i}) = -amplitude * v;
            }
        m.modes.push_back({freq, c});
    }
    return m;
}

// random (1,0)-form / vector-style mode fields with arbitrary slots
inline ModeField random_modes(int n, std::vector<Slot> slots, std::uint64_t seed, int nmodes,
                              int maxfreq, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> fdist(-maxfreq, maxfreq);
    std::normal_distribution<double> cdist(0.0, 1.0);
    ModeField m{n, slots, {}};
    for (int k = 0; k < nmodes; ++k) {
        std::vector<int> freq(std::size_t(2 * n));
        for (auto& f : freq) f = fdist(rng);
        Tensor<cd> c(n, slots);
        for (auto& v : c.data()) v = amplitude * cd(cdist(rng), cdist(rng));
        m.modes.push_back({freq, c});
    }
    return m;
}

// transition P^b_a with Z'_a = P^b_a Z_b expressing the primed frame in the
// fixed one; both pairs must live on the same lattice
inline LatticeField frame_transition(const CompatiblePair& fixed, const CompatiblePair& primed) {
    const TorusLattice& lat = fixed.lat;
    const int d = lat.dim();
    LatticeField P(lat, {up_f, dn_f});
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        const cd* co = fixed.coframe.point(p);
        const cd* fr = primed.frame.point(p);
        cd* out = P.point(p);
        for (int b = 0; b < d; ++b)
            for (int a = 0; a < d; ++a) {
                cd acc{};
                for (int mu = 0; mu < d; ++mu) acc += co[b * d + mu] * fr[a * d + mu];
                out[b * d + a] = acc;
            }
    });
    return P;
}

// push components of a tensor field from the primed frame into the fixed
// frame; the result has every slot widened to full range
inline LatticeField components_in_frame(const LatticeField& x, const LatticeField& P,
                                        const LatticeField& Pinv) {
    LatticeField r = x;
    const int rank = int(x.proto().slots().size());
    for (int k = 0; k < rank; ++k)
        if (r.proto().slots()[std::size_t(k)].b != Bar::full) r = fwiden(r, k);
    for (int k = 0; k < rank; ++k) {
        const Slot s = r.proto().slots()[std::size_t(k)];
        LatticeField term = s.v == Var::up ? fmulcon(P, r, {{1, k}}) : fmulcon(Pinv, r, {{0, k}});
        // free transition slot back into position k
        std::vector<int> perm(static_cast<std::size_t>(rank), 0);
        for (int m = 0; m < rank; ++m)
            perm[std::size_t(m)] = m == k ? 0 : 1 + (m < k ? m : m - 1);
        r = fpermute(term, perm);
    }
    return r;
}

// connection coefficients of a primed-frame Hermitian connection expressed in
// the fixed frame (non-tensorial transformation with D'(P^-1) terms)
inline LatticeField connection_in_frame(const LatticeGeo& primed_geo,
                                        const HermitianConnection<LatticeGeo>& co,
                                        const LatticeField& P, const LatticeField& Pinv) {
    auto X1 = fpermute(primed_geo.dd(Pinv), {1, 0, 2});  // D'_{a'} (Pinv)^{c'}_b -> (c', a', b)
    auto Y = fmulcon(co.full, Pinv, {{2, 0}});           // Gamma'^{c'}_{a' b'} Pinv^{b'}_b
    auto Z = X1 + Y;
    auto W = fmulcon(Pinv, Z, {{0, 1}});  // contract a' -> (a, c', b)
    return fmulcon(P, W, {{1, 1}});       // contract c' -> (c, a, b)
}

// relative max-norm difference, |x - y| / max(1, |y|)
inline double rel_err(const LatticeField& x, const LatticeField& y) {
    return max_abs(x - y) / std::max(1.0, max_abs(y));
}

inline double rel_err(double x, double y) {
    return std::abs(x - y) / std::max(1.0, std::abs(y));
}

}  // namespace ahc
