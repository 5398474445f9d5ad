#pragma once

#include <optional>
#include <vector>

#include "ahc/lattice.hpp"
#include "ahc/metric.hpp"
#include "ahc/rational.hpp"
#include "ahc/series.hpp"

namespace ahc {

// A metric, a compatible almost complex structure and a unitary (1,0)-frame
// on the flat torus. The constant frame metric g_{i jbar} fixes the real
// coordinate metric by declaring the reference frame unitary.
struct CompatiblePair {
    TorusLattice lat;
    HermitianMetric<cd> gframe;
    std::vector<double> greal, greal_inv;  // constant 2n x 2n coordinate metric
    double sqrt_det_greal = 1.0;

    LatticeField J;        // slots (up-full, down-full): J^mu_nu in coordinates
    LatticeField frame;    // slots (up-full a, down-full mu): Z_a^mu; barred rows conjugate
    LatticeField coframe;  // slots (down-full a, down-full mu): theta^a_mu

    // maximal residuals of J^2 = -1, g(J.,J.) = g and frame unitarity
    struct Residuals {
        double jsq, compat, unitary;
    };
    Residuals residuals() const;
    void validate(double tol = 1e-10) const;
};

// flat torus with the standard complex structure; frame metric defaults to
// the identity (frame Z_k = (d_{2k} - i d_{2k+1})/sqrt(2) rescaled by gframe)
CompatiblePair flat_pair(const TorusLattice& lat,
                         std::optional<HermitianMetric<cd>> gframe = std::nullopt);

// J(tA) = e^K J e^{-K} with K = -(t/2) (graise A_real) J; the frame is
// transported by e^K, so both compatibility invariants are preserved exactly.
// A has slots (down-plain, down-plain) and must be pointwise skew.
CompatiblePair retract(const CompatiblePair& base, const LatticeField& A, double t);

// rebuild the unitary frame for a J that was not produced by a retraction:
// project the reference frame onto T^{1,0}(J) and re-orthonormalize; throws
// if the projection degenerates
CompatiblePair pair_from_J(const TorusLattice& lat, const HermitianMetric<cd>& gframe,
                           const LatticeField& J);

// backend for the generic connection/variational machinery on the lattice
struct LatticeGeo {
    using Field = LatticeField;
    using S = cd;

    const CompatiblePair* pair = nullptr;
    Scheme scheme = Scheme::order4;

    LatticeField C;  // structure functions C^c_{ab}, slots (up-full, down-full, down-full)

    LatticeGeo(const CompatiblePair& p, Scheme s);

    int n() const { return pair->lat.n; }
    const Field& structure() const { return C; }
    Field metric_g() const { return constant_field(pair->lat, pair->gframe.as_tensor()); }
    Field metric_ginv() const { return constant_field(pair->lat, pair->gframe.inv_tensor()); }
    Field metric_gfull() const { return constant_field(pair->lat, pair->gframe.full_tensor()); }
    Field metric_gfull_inv() const {
        return constant_field(pair->lat, pair->gframe.full_inv_tensor());
    }
    Field zero(std::vector<Slot> slots) const { return LatticeField(pair->lat, std::move(slots)); }

    // directional derivative along every frame vector; prepends a down-full slot
    Field dd(const Field& f) const;
};

// ---------------------------------------------------------------------------
// Homogeneous model backend: tensor coefficients are polynomials in x (exact
// ring R), the frame is { Z_0 = x/2 d_x + i x^2 T, Z_alpha = x Z^CR_alpha }
// composed with an optional series transition Q.

template <class R>
struct SeriesGeo {
    using Field = SeriesField<R>;
    using S = R;

    int nn = 0;      // complex dimension n (frame rank)
    int maxdeg = 0;  // truncation degree

    Field C;        // structure functions in the current frame
    Field gmat;     // g_{i jbar} field (down-plain, down-bar)
    Field gmatinv;  // g^{i jbar} field (up-plain, up-bar)
    Field gfull, gfullinv;
    std::optional<Field> Q;  // current frame in terms of the model frame (up-full b, down-full a)

    int n() const { return nn; }
    const Field& structure() const { return C; }
    Field metric_g() const { return gmat; }
    Field metric_ginv() const { return gmatinv; }
    Field metric_gfull() const { return gfull; }
    Field metric_gfull_inv() const { return gfullinv; }
    Field zero(std::vector<Slot> slots) const { return Field(nn, maxdeg, std::move(slots)); }

    // model-frame directional derivative: Z_0 and Z_0bar act as (1/2) x d/dx on
    // coefficient functions of x, tangential directions annihilate them
    Field dd_model(const Field& f) const {
        Field g = xdx(f);
        std::vector<Slot> sl = f.slots();
        sl.insert(sl.begin(), dn_f);
        Field out(nn, maxdeg, sl);
        out.offset = f.offset;
        R half = ring<R>::from_ratio(1, 2);
        for (int d = 0; d <= maxdeg; ++d) {
            const Tensor<R>& src = g[d];
            Tensor<R>& dst = out[d];
            std::vector<int> jdx;
            src.visit([&](const std::vector<int>& idx, std::size_t p) {
                jdx.assign(idx.begin(), idx.end());
                jdx.insert(jdx.begin(), 0);
                dst.at(jdx) = half * src.data()[p];  // Z_0 direction
                jdx[0] = nn;                         // Z_0bar direction
                dst.at(jdx) = half * src.data()[p];
            });
        }
        return out;
    }

    Field dd(const Field& f) const {
        Field d0 = dd_model(f);
        if (!Q) return d0;
        // D'_a = Q^b_a D_b
        return fmulcon(*Q, d0, {{0, 0}});
    }
};

// metric-aware raise/lower on fields (slot keeps its position)
template <class F>
F fraise(const F& x, int k, const F& ginv2) {
    // down-plain -> up-bar or down-bar -> up-plain
    Bar b = x.slots()[std::size_t(k)].b;
    int gslot = b == Bar::plain ? 0 : 1;  // contract g^{i jbar}'s matching slot
    F r = fmulcon(ginv2, x, {{gslot, k}});
    // result slots: [free ginv slot] + x-slots minus k; move front slot back to position k
    std::vector<int> perm;
    int rank = int(x.slots().size());
    for (int m = 0; m < rank; ++m) {
        if (m == k)
            perm.push_back(0);
        else
            perm.push_back(1 + (m < k ? m : m - 1));
    }
    return fpermute(r, perm);
}

template <class F>
F flower(const F& x, int k, const F& g2) {
    Bar b = x.slots()[std::size_t(k)].b;
    int gslot = b == Bar::plain ? 0 : 1;
    F r = fmulcon(g2, x, {{gslot, k}});
    std::vector<int> perm;
    int rank = int(x.slots().size());
    for (int m = 0; m < rank; ++m) {
        if (m == k)
            perm.push_back(0);
        else
            perm.push_back(1 + (m < k ? m : m - 1));
    }
    return fpermute(r, perm);
}

}  // namespace ahc
