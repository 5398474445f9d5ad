#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "ahc/geometry.hpp"
#include "ahc/oracles.hpp"

using namespace ahc;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("lattice shape constraints") {
    CHECK_THROWS_AS(TorusLattice(2, 6), std::invalid_argument);
    CHECK_THROWS_AS(TorusLattice(2, 9), std::invalid_argument);
    TorusLattice lat(2, 8);
    CHECK(lat.npoints() == 8 * 8 * 8 * 8);
}

TEST_CASE("derivatives annihilate constants and differentiate modes") {
    TorusLattice lat(1, 32);
    LatticeField one(lat, {});
    for (auto& v : one.data()) v = cd(3.7, -1.2);
    for (Scheme s : {Scheme::order2, Scheme::order4, Scheme::order6, Scheme::spectral})
        CHECK(max_abs(partial_derivative(one, 0, s)) < 1e-13);

    // f = sin(u_0): derivative at u_0 = 0 equals 1
    LatticeField f(lat, {});
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        std::vector<int> c;
        lat.coords(p, c);
        f.data()[std::size_t(p)] = std::sin(lat.x(c[0]));
    });
    // order-4 truncation bound for sin: |f^(5)| h^4 / 30
    const double h = lat.spacing();
    const double bound = h * h * h * h / 30.0;
    auto d4 = partial_derivative(f, 0, Scheme::order4);
    CHECK(std::abs(d4.data()[0].real() - 1.0) < 1.05 * bound);
    auto dsp = partial_derivative(f, 0, Scheme::spectral);
    CHECK(std::abs(dsp.data()[0].real() - 1.0) < 1e-12);

    // a finer grid reaches 1e-5
    TorusLattice lat48(1, 48);
    LatticeField f48(lat48, {});
    par::for_n(lat48.npoints(), [&](std::int64_t p) {
        std::vector<int> c;
        lat48.coords(p, c);
        f48.data()[std::size_t(p)] = std::sin(lat48.x(c[0]));
    });
    auto d48 = partial_derivative(f48, 0, Scheme::order4);
    CHECK(std::abs(d48.data()[0].real() - 1.0) < 1e-5);
}

TEST_CASE("product rule against a symbolic product of modes") {
    TorusLattice lat(1, 32);
    auto fm = random_modes(1, {}, 5, 2, 2, 1.0);
    auto gm = random_modes(1, {}, 6, 2, 2, 1.0);
    auto f = fm.realize(lat), g = gm.realize(lat);
    LatticeField fg(lat, {});
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        fg.data()[std::size_t(p)] = f.data()[std::size_t(p)] * g.data()[std::size_t(p)];
    });
    // symbolic product of the mode lists
    ModeField prod{1, {}, {}};
    for (const auto& [kf, cf] : fm.modes)
        for (const auto& [kg, cg] : gm.modes) {
            std::vector<int> k(kf.size());
            for (std::size_t q = 0; q < k.size(); ++q) k[q] = kf[q] + kg[q];
            Tensor<cd> c(1, {});
            c.data()[0] = cf.data()[0] * cg.data()[0];
            prod.modes.push_back({k, c});
        }
    auto dsym = partial_derivative(prod.realize(lat), 0, Scheme::spectral);
    auto dnum = partial_derivative(fg, 0, Scheme::spectral);
    CHECK(max_abs(dsym - dnum) < 1e-10);
}

TEST_CASE("central differences are skew-adjoint on the torus") {
    TorusLattice lat(1, 16);
    auto f = random_modes(1, {}, 7, 3, 3, 1.0).realize(lat);
    auto h = random_modes(1, {}, 8, 3, 3, 1.0).realize(lat);
    for (Scheme s : {Scheme::order4, Scheme::spectral}) {
        auto df = partial_derivative(f, 1, s);
        auto dh = partial_derivative(h, 1, s);
        LatticeField dens(lat, {});
        par::for_n(lat.npoints(), [&](std::int64_t p) {
            dens.data()[std::size_t(p)] = df.data()[std::size_t(p)] * h.data()[std::size_t(p)] +
                                          f.data()[std::size_t(p)] * dh.data()[std::size_t(p)];
        });
        CHECK(std::abs(integrate(dens)) < 1e-9);
    }
}

TEST_CASE("quadrature: volume, sin^2 and odd modes") {
    TorusLattice lat(2, 12);
    LatticeField one(lat, {});
    for (auto& v : one.data()) v = 1.0;
    const double vol = std::pow(2 * pi, 4);
    CHECK(std::abs(integrate(one) - vol) < 1e-9 * vol);

    LatticeField s2(lat, {}), s1(lat, {});
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        std::vector<int> c;
        lat.coords(p, c);
        double u = lat.x(c[0]);
        s2.data()[std::size_t(p)] = std::sin(u) * std::sin(u);
        s1.data()[std::size_t(p)] = std::sin(u);
    });
    CHECK(std::abs(integrate(s2) - 0.5 * vol) < 1e-10 * vol);
    CHECK(std::abs(integrate(s1)) < 1e-12);
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    TorusLattice lat(2, 8);
    auto A = random_skew_modes(2, 42, 3, 2, 0.3).realize(lat);
    auto abs2_field = [&](const LatticeField& x) {
        LatticeField dens(lat, {});
        par::for_n(lat.npoints(), [&](std::int64_t p) {
            double acc = 0;
            for (std::size_t c = 0; c < x.ncomp(); ++c) acc += std::norm(x.point(p)[c]);
            dens.data()[std::size_t(p)] = acc;
        });
        return dens;
    };
    auto saved = par::mode();
    par::set_mode(par::Mode::serial);
    auto d_s = partial_derivative(A, 1, Scheme::order4);
    auto sp_s = partial_derivative(A, 2, Scheme::spectral);
    auto m_s = fmulcon(A, fpermute(fconj(A), {1, 0}), {});
    double i_s = integrate(abs2_field(A));
    par::set_mode(par::Mode::openmp);
    auto d_p = partial_derivative(A, 1, Scheme::order4);
    auto sp_p = partial_derivative(A, 2, Scheme::spectral);
    auto m_p = fmulcon(A, fpermute(fconj(A), {1, 0}), {});
    double i_p = integrate(abs2_field(A));
    par::set_mode(saved);
    CHECK(max_abs(d_s - d_p) == 0.0);
    CHECK(max_abs(sp_s - sp_p) == 0.0);
    CHECK(max_abs(m_s - m_p) == 0.0);
    CHECK(i_s == i_p);
}

TEST_CASE("retraction: identity at A = 0, invariants for random A") {
    TorusLattice lat(2, 8);
    auto base = flat_pair(lat);
    base.validate(1e-12);

    LatticeField zero(lat, {dn_p, dn_p});
    auto same = retract(base, zero, 1.0);
    CHECK(max_abs(same.J - base.J) == 0.0);

    auto A = random_skew_modes(2, 1, 3, 2, 0.4).realize(lat);
    for (double t : {-1.0, -0.3, 0.5, 1.0}) {
        auto moved = retract(base, A, t);
        auto r = moved.residuals();
        CHECK(r.jsq < 1e-12);
        CHECK(r.compat < 1e-12);
        CHECK(r.unitary < 1e-12);
    }

    // non-skew input rejected
    LatticeField bad(lat, {dn_p, dn_p});
    for (auto& v : bad.data()) v = 1.0;
    CHECK_THROWS_AS(retract(base, bad, 1.0), std::invalid_argument);
}

TEST_CASE("retraction derivative reproduces A to second order") {
    TorusLattice lat(2, 8);
    auto base = flat_pair(lat);
    auto A = random_skew_modes(2, 9, 2, 1, 0.7).realize(lat);

    auto deriv_at = [&](double t) {
        auto plus = retract(base, A, t);
        auto minus = retract(base, A, -t);
        auto Jd = fscale(plus.J - minus.J, cd(1.0 / (2 * t)));
        // g(Jdot ., .) compared with the real 2-form of A
        const int d = lat.dim(), n = lat.n;
        double worst = 0;
        for (std::int64_t p = 0; p < lat.npoints(); p += 37) {
            const cd* jd = Jd.point(p);
            const cd* co = base.coframe.point(p);
            const cd* ap = A.point(p);
            for (int mu = 0; mu < d; ++mu)
                for (int nu = 0; nu < d; ++nu) {
                    double g = 0;
                    for (int s = 0; s < d; ++s)
                        g += base.greal[std::size_t(s * d + nu)] * jd[s * d + mu].real();
                    cd aval{};
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            aval += ap[i * n + j] * co[i * d + mu] * co[j * d + nu];
                    worst = std::max(worst, std::abs(g - 2 * aval.real()));
                }
        }
        return worst;
    };
    double e1 = deriv_at(1e-2), e2 = deriv_at(1e-3);
    double slope = std::log10(e1 / e2);
    CHECK(slope > 1.7);  // second-order in t
    CHECK(e2 < 1e-5);
}

TEST_CASE("constant A gives a constant structure; projection fallback works") {
    TorusLattice lat(2, 8);
    auto base = flat_pair(lat);
    Tensor<cd> c(2, {dn_p, dn_p});
    c.at({0, 1}) = cd(0.3, 0.1);
    c.at({1, 0}) = -c.at({0, 1});
    auto A = constant_field(lat, c);
    auto moved = retract(base, A, 1.0);
    // all frame derivatives vanish
    for (int mu = 0; mu < lat.dim(); ++mu)
        CHECK(max_abs(partial_derivative(moved.frame, mu, Scheme::order4)) < 1e-12);

    // rebuild the frame from J alone and check unitarity
    auto rebuilt = pair_from_J(lat, base.gframe, moved.J);
    auto r = rebuilt.residuals();
    CHECK(r.unitary < 1e-10);
    CHECK(r.jsq < 1e-10);
}
