#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ahc/flows.hpp"
#include "ahc/oracles.hpp"

using namespace ahc;

namespace {

struct Setup {
    CompatiblePair pair;
    std::unique_ptr<LatticeGeo> geo;
    Derived d;
};

Setup make_setup(int n, int extent, double amplitude, std::uint64_t seed, Scheme scheme) {
    TorusLattice lat(n, extent);
    auto base = flat_pair(lat);
    Setup s{base, nullptr, {}};
    if (amplitude != 0.0) {
        auto A = random_skew_modes(n, seed, 3, 1, amplitude).realize(lat);
        s.pair = retract(base, A, 1.0);
    }
    s.geo = std::make_unique<LatticeGeo>(s.pair, scheme);
    s.d = derive_connections(*s.geo);
    return s;
}

}  // namespace

TEST_CASE("flat Kahler torus: everything vanishes") {
    auto s = make_setup(2, 8, 0.0, 0, Scheme::order4);
    CHECK(max_abs(s.d.lc.gamma) < 1e-13);
    CHECK(max_abs(s.d.el.gamma) < 1e-13);
    CHECK(max_abs(s.d.tors.N) < 1e-13);
    CHECK(max_abs(s.d.tors.T20) < 1e-13);
    CHECK(max_abs(s.d.tors.tau) < 1e-13);
    auto R = curvature(*s.geo, s.d.el);
    CHECK(max_abs(R) < 1e-13);
}

TEST_CASE("Levi-Civita matches the coordinate-frame oracle") {
    // flat coordinate metric: coordinate Christoffels vanish, so
    // Gamma^c_{ab} = theta^c_nu Z_a^mu d_mu Z_b^nu
    auto s = make_setup(2, 16, 0.05, 3, Scheme::spectral);
    const auto& pair = s.pair;
    const TorusLattice& lat = pair.lat;
    const int d = lat.dim();
    std::vector<LatticeField> df;
    for (int mu = 0; mu < d; ++mu) df.push_back(partial_derivative(pair.frame, mu, Scheme::spectral));
    double worst = 0;
    for (std::int64_t p = 0; p < lat.npoints(); p += 17) {
        const cd* fr = pair.frame.point(p);
        const cd* co = pair.coframe.point(p);
        const cd* ga = s.d.lc.gamma.point(p);
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    cd acc{};
                    for (int mu = 0; mu < d; ++mu) {
                        const cd* dmu = df[std::size_t(mu)].point(p);
                        for (int nu = 0; nu < d; ++nu)
                            acc += co[c * d + nu] * fr[a * d + mu] * dmu[b * d + nu];
                    }
                    worst = std::max(worst, std::abs(acc - ga[(c * d + a) * d + b]));
                }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("Levi-Civita is metric compatible and torsion free") {
    auto s = make_setup(2, 8, 0.1, 5, Scheme::order4);
    CHECK(max_abs(metric_compat_residual(*s.geo, s.d.lc)) < 1e-12);
    CHECK(max_abs(torsion_of(*s.geo, s.d.lc.gamma)) < 1e-12);
}

TEST_CASE("torsion conventions: two routes for T and N") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto s = make_setup(2, 8, 0.15, seed, Scheme::order4);
        // route 1: T from the Levi-Civita mixed block (torsion_data)
        // route 2: T from the Lichnerowicz structure equation,
        //          Theta^k_{i jbar} = -L Gamma^k_{jbar i} - C^k_{i jbar} = T/2
        auto lichbar = fblock(s.d.lich.gamma, 1, Bar::bar);  // L Gamma^j_{kbar i}
        auto cmix = fblock(fblock(fblock(s.geo->structure(), 0, Bar::plain), 1, Bar::plain), 2,
                           Bar::bar);  // C^k_{i jbar}
        // arrange both to (i, k, jbar)
        auto r2 = fscale(fpermute(lichbar, {2, 0, 1}) + fpermute(cmix, {1, 0, 2}), cd(-2));
        CHECK(max_abs(r2 - s.d.tors.Tprim) < 1e-8);

        // N from brackets vs N from the Levi-Civita (0,2) torsion block:
        // N^{kbar}_{ij} = *Gamma^{kbar}_{ji} - *Gamma^{kbar}_{ij}
        auto lcb = fblock(fblock(fblock(s.d.lc.gamma, 0, Bar::bar), 1, Bar::plain), 2, Bar::plain);
        auto nroute = fpermute(lcb, {0, 2, 1}) - lcb;
        CHECK(max_abs(nroute - s.d.tors.N) < 1e-8);

        // T20 skewness and tau = trace
        CHECK(max_abs(s.d.tors.T20 + fpermute(s.d.tors.T20, {0, 2, 1})) < 1e-8);
        CHECK(max_abs(fcontract(s.d.tors.T20, 0, 2) - s.d.tors.tau) < 1e-13);
    }
}

TEST_CASE("Ehresmann-Libermann torsion blocks") {
    auto s = make_setup(2, 8, 0.2, 7, Scheme::order4);
    auto theta = torsion_of(*s.geo, s.d.el.full);
    // mixed block vanishes
    auto mixed = fblock(fblock(fblock(theta, 0, Bar::plain), 1, Bar::plain), 2, Bar::bar);
    CHECK(max_abs(mixed) < 1e-10);
    // (2,0) block equals T
    auto t20 = fblock(fblock(fblock(theta, 0, Bar::plain), 1, Bar::plain), 2, Bar::plain);
    CHECK(max_abs(t20 - s.d.tors.T20) < 1e-10);
    // (0,2) block equals N
    auto n02 = fblock(fblock(fblock(theta, 0, Bar::bar), 1, Bar::plain), 2, Bar::plain);
    CHECK(max_abs(n02 - s.d.tors.N) < 1e-10);
    // the Lichnerowicz connection has a nonzero mixed torsion block here
    auto thl = torsion_of(*s.geo, s.d.lich.full);
    auto mixedl = fblock(fblock(fblock(thl, 0, Bar::plain), 1, Bar::plain), 2, Bar::bar);
    CHECK(max_abs(mixedl) > 1e-4);
    CHECK(max_abs(mixedl - fscale(fpermute(s.d.tors.Tprim, {1, 0, 2}), cd(0.5))) < 1e-10);
}

TEST_CASE("EL metric compatibility and J-compatibility are structural") {
    auto s = make_setup(2, 8, 0.2, 11, Scheme::order4);
    // nabla g = 0 exactly: the Hermitian blocks preserve the constant frame metric
    auto g2 = s.geo->metric_g();
    auto ng = nabla(*s.geo, s.d.el, g2);
    CHECK(max_abs(ng) < 1e-12);
    // nabla of the Kronecker delta vanishes
    LatticeField delta(s.pair.lat, {up_p, dn_p});
    par::for_n(delta.npoints(), [&](std::int64_t p) {
        for (int i = 0; i < 2; ++i) delta.point(p)[i * 2 + i] = 1.0;
    });
    CHECK(max_abs(nabla(*s.geo, s.d.el, delta)) < 1e-12);
}

TEST_CASE("covariant derivative satisfies the Leibniz rule") {
    auto s = make_setup(2, 8, 0.1, 13, Scheme::spectral);
    auto x = random_modes(2, {dn_p}, 17, 2, 1, 0.5).realize(s.pair.lat);
    auto y = random_modes(2, {up_p, dn_b}, 19, 2, 1, 0.5).realize(s.pair.lat);
    auto xy = fmulcon(x, y, {});  // tensor product
    auto nxy = nabla(*s.geo, s.d.el, xy);
    auto lhs = fmulcon(nabla(*s.geo, s.d.el, x), y, {});
    // nabla x (x) tensor y : arrange (dir, x, y...) + x tensor (nabla y) arranged
    auto ny = nabla(*s.geo, s.d.el, y);
    auto rhs2 = fpermute(fmulcon(x, ny, {}), {1, 0, 2, 3});
    CHECK(max_abs(nxy - lhs - rhs2) < 1e-9);
}

TEST_CASE("commutation identity for the curvature") {
    auto s = make_setup(2, 8, 1e-3, 23, Scheme::spectral);
    auto R = curvature(*s.geo, s.d.el);
    auto V = random_modes(2, {up_p}, 29, 2, 1, 1.0).realize(s.pair.lat);
    CHECK(max_abs(commutation_residual(*s.geo, s.d.el, R, V)) < 1e-7);
}

TEST_CASE("first Bianchi identities on a perturbed torus") {
    auto s = make_setup(2, 8, 1e-3, 31, Scheme::spectral);
    auto R = curvature(*s.geo, s.d.el);
    auto b = bianchi_residuals(*s.geo, s.d.el, s.d.tors, R);
    CHECK(max_abs(b.b30) < 1e-7);
    CHECK(max_abs(b.b21) < 1e-7);
    CHECK(max_abs(b.b12) < 1e-7);
    CHECK(max_abs(b.b03) < 1e-7);
}

TEST_CASE("Bianchi residuals decay at the scheme order under refinement") {
    auto modes = random_skew_modes(2, 37, 2, 1, 1e-2);
    auto resid = [&](int extent) {
        TorusLattice lat(2, extent);
        auto pair = retract(flat_pair(lat), modes.realize(lat), 1.0);
        LatticeGeo geo(pair, Scheme::order4);
        auto d = derive_connections(geo);
        auto R = curvature(geo, d.el);
        auto b = bianchi_residuals(geo, d.el, d.tors, R);
        return std::max(std::max(max_abs(b.b30), max_abs(b.b21)),
                        std::max(max_abs(b.b12), max_abs(b.b03)));
    };
    double r8 = resid(8), r16 = resid(16);
    double slope = std::log2(r8 / r16);
    CHECK(slope > 3.5);
    CHECK(slope < 4.5);
}

TEST_CASE("Hermitian symmetry of the Ricci tensor") {
    auto s = make_setup(2, 8, 1e-2, 41, Scheme::spectral);
    auto R = curvature(*s.geo, s.d.el);
    auto ric = ricci<LatticeGeo>(R);
    // R_{jbar i} = conj(R_{i jbar}): the conjugate-transposed block agrees
    auto rc = fpermute(fconj(ric), {1, 0});
    CHECK(max_abs(rc - ric) < 1e-8);
}
