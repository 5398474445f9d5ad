#pragma once

#include <memory>
#include <random>
#include <string>

#include "ahc/variational.hpp"

namespace ahc {

// everything the variational layer needs from one compatible pair
struct Derived {
    FullConnection<LatticeGeo> lc;
    HermitianConnection<LatticeGeo> lich, el;
    TorsionData<LatticeGeo> tors;
};

inline Derived derive_connections(const LatticeGeo& geo) {
    Derived d{levi_civita(geo), {}, {}, {}};
    d.lich = lichnerowicz(geo, d.lc);
    d.tors = torsion_data(geo, d.lc);
    d.el = ehresmann_libermann(geo, d.lich, d.tors);
    return d;
}

inline double energy(const LatticeGeo& geo, const TorsionData<LatticeGeo>& tors,
                     const EnergyCoefficients& c) {
    auto d = density_fields(geo, tors);
    auto dens = fscale(d.nsym2, cd(c.a)) + fscale(d.nskew2, cd(c.b)) + fscale(d.t2, cd(c.c)) +
                fscale(d.tau2, cd(c.d));
    return integrate(dens) * geo.pair->sqrt_det_greal;
}

inline double l2_norm(const LatticeGeo& geo, const LatticeField& x) {
    return std::sqrt(std::max(0.0, integrate(squared_norm_density(geo, x)) * geo.pair->sqrt_det_greal));
}

// Einstein constant of the base, measured as the Ric/g ratio; second member
// is the constancy residual max |Ric - lambda g|
inline std::pair<double, double> measure_lambda(const LatticeGeo& geo,
                                                const HermitianConnection<LatticeGeo>& el) {
    auto R = curvature(geo, el);
    auto ric = ricci<LatticeGeo>(R);
    const int n = geo.n();
    auto tr = fmulcon(geo.metric_ginv(), ric, {{0, 0}, {1, 1}});
    std::vector<double> buf(std::size_t(tr.npoints()));
    par::for_n(tr.npoints(), [&](std::int64_t p) {
        buf[std::size_t(p)] = tr.data()[std::size_t(p)].real() / n;
    });
    double lambda = pairwise_sum(buf) / double(tr.npoints());
    auto dev = ric - fscale(constant_field(geo.pair->lat, geo.pair->gframe.as_tensor()), cd(lambda));
    return {lambda, max_abs(dev)};
}

struct FlowRecord {
    int step;
    double energy;
    double s_norm;
};

struct FlowResult {
    std::vector<FlowRecord> trajectory;
    bool halted = false;  // divergence guard fired
    std::string message;
};

// steepest descent for the (1,1,0,1/2) functional: the L2(g) gradient in the
// A_{ij} chart is the S tensor itself
inline FlowResult gradient_descend(CompatiblePair pair, int steps, double rate, Scheme scheme,
                                   const EnergyCoefficients& coeffs = {}) {
    if (rate <= 0) throw std::invalid_argument("gradient_descend: rate must be positive");
    FlowResult out;
    int rising = 0;
    double last = 0;
    for (int k = 0; k <= steps; ++k) {
        LatticeGeo geo(pair, scheme);
        Derived d = derive_connections(geo);
        auto S = s_tensor(geo, d.el, d.tors);
        const double E = energy(geo, d.tors, coeffs);
        const double sn = l2_norm(geo, S);
        out.trajectory.push_back({k, E, sn});
        if (k > 0 && E > last) {
            if (++rising >= 5) {
                out.halted = true;
                out.message = "energy increased over 5 consecutive steps; rate too large";
                return out;
            }
        } else {
            rising = 0;
        }
        last = E;
        if (k == steps) break;
        pair = retract(pair, fscale(S, cd(-rate)), 1.0);
    }
    return out;
}

}  // namespace ahc
