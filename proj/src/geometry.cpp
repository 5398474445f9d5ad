#include "ahc/geometry.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace ahc {

namespace {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

Mat real_matrix(const std::vector<double>& a, int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = a[std::size_t(i * d + j)];
    return m;
}

}  // namespace

CompatiblePair flat_pair(const TorusLattice& lat, std::optional<HermitianMetric<cd>> gframe) {
    CompatiblePair p;
    p.lat = lat;
    p.gframe = gframe ? *gframe : HermitianMetric<cd>::identity(lat.n);
    const int n = lat.n, d = lat.dim();
    const double isq2 = 1.0 / std::sqrt(2.0);

    // reference frame Z_k = (d_{2k} - i d_{2k+1})/sqrt(2), coframe the dual
    Tensor<cd> fr(n, {up_f, dn_f}), co(n, {dn_f, dn_f}), j0(n, {up_f, dn_f});
    for (int k = 0; k < n; ++k) {
        fr.at({k, 2 * k}) = cd(isq2, 0);
        fr.at({k, 2 * k + 1}) = cd(0, -isq2);
        fr.at({n + k, 2 * k}) = cd(isq2, 0);
        fr.at({n + k, 2 * k + 1}) = cd(0, isq2);
        co.at({k, 2 * k}) = cd(isq2, 0);
        co.at({k, 2 * k + 1}) = cd(0, isq2);
        co.at({n + k, 2 * k}) = cd(isq2, 0);
        co.at({n + k, 2 * k + 1}) = cd(0, -isq2);
        j0.at({2 * k + 1, 2 * k}) = cd(1, 0);
        j0.at({2 * k, 2 * k + 1}) = cd(-1, 0);
    }
    p.frame = constant_field(lat, fr);
    p.coframe = constant_field(lat, co);
    p.J = constant_field(lat, j0);

    // real coordinate metric making the reference frame unitary:
    // g_real(U,V) = 2 Re sum g_{i jbar} theta^i(U) conj(theta^j(V))
    p.greal.assign(std::size_t(d) * std::size_t(d), 0.0);
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) {
            cd acc{};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    acc += p.gframe.G(i, j) * co.at({i, mu}) * std::conj(co.at({j, nu}));
            p.greal[std::size_t(mu * d + nu)] = 2.0 * acc.real();
        }
    Mat G = real_matrix(p.greal, d);
    Mat Gi = G.inverse();
    p.greal_inv.assign(std::size_t(d) * std::size_t(d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p.greal_inv[std::size_t(i * d + j)] = Gi(i, j);
    p.sqrt_det_greal = std::sqrt(G.determinant());
    return p;
}

CompatiblePair::Residuals CompatiblePair::residuals() const {
    const int n = lat.n, d = lat.dim();
    std::vector<double> worst(3 * std::size_t(lat.npoints()), 0.0);
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        const cd* jp = J.point(p);
        const cd* fp = frame.point(p);
        double rj = 0, rc = 0, ru = 0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                cd acc{};
                for (int c = 0; c < d; ++c) acc += jp[a * d + c] * jp[c * d + b];
                if (a == b) acc += 1.0;
                rj = std::max(rj, std::abs(acc));
                // g(J.,J.) - g
                cd gc{};
                for (int mu = 0; mu < d; ++mu)
                    for (int nu = 0; nu < d; ++nu)
                        gc += jp[mu * d + a] * jp[nu * d + b] * greal[std::size_t(mu * d + nu)];
                gc -= greal[std::size_t(a * d + b)];
                rc = std::max(rc, std::abs(gc));
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cd acc{};
                for (int mu = 0; mu < d; ++mu)
                    for (int nu = 0; nu < d; ++nu)
                        acc += fp[i * d + mu] * std::conj(fp[j * d + nu]) *
                               greal[std::size_t(mu * d + nu)];
                acc -= gframe.G(i, j);
                ru = std::max(ru, std::abs(acc));
            }
        worst[std::size_t(3 * p)] = rj;
        worst[std::size_t(3 * p + 1)] = rc;
        worst[std::size_t(3 * p + 2)] = ru;
    });
    Residuals r{0, 0, 0};
    for (std::int64_t p = 0; p < lat.npoints(); ++p) {
        r.jsq = std::max(r.jsq, worst[std::size_t(3 * p)]);
        r.compat = std::max(r.compat, worst[std::size_t(3 * p + 1)]);
        r.unitary = std::max(r.unitary, worst[std::size_t(3 * p + 2)]);
    }
    return r;
}

void CompatiblePair::validate(double tol) const {
    Residuals r = residuals();
    if (r.jsq > tol || r.compat > tol || r.unitary > tol)
        throw std::runtime_error("CompatiblePair: invariants violated (J^2 " +
                                 std::to_string(r.jsq) + ", compat " + std::to_string(r.compat) +
                                 ", unitary " + std::to_string(r.unitary) + ")");
}

CompatiblePair retract(const CompatiblePair& base, const LatticeField& A, double t) {
    const TorusLattice& lat = base.lat;
    const int n = lat.n, d = lat.dim();
    if (!(A.lattice() == lat) || !(A.proto().slots() == std::vector<Slot>{dn_p, dn_p}))
        throw std::invalid_argument("retract: A must be a (down,down) field on the base lattice");

    // skewness check
    std::vector<double> skew(std::size_t(lat.npoints()), 0.0);
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        const cd* ap = A.point(p);
        double m = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m = std::max(m, std::abs(ap[i * n + j] + ap[j * n + i]));
        skew[std::size_t(p)] = m;
    });
    for (double v : skew)
        if (v > 1e-10) throw std::invalid_argument("retract: A is not skew");

    CompatiblePair out = base;
    Mat Greal = real_matrix(base.greal, d), Gri = real_matrix(base.greal_inv, d);
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        const cd* ap = A.point(p);
        const cd* cop = base.coframe.point(p);
        const cd* jp = base.J.point(p);
        // real 2-form A_real(mu,nu) = 2 Re sum A_ij theta^i_mu theta^j_nu
        Mat Am(d, d);
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu) {
                cd acc{};
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        acc += ap[i * n + j] * cop[i * d + mu] * cop[j * d + nu];
                Am(mu, nu) = 2.0 * t * acc.real();
            }
        Mat J0(d, d);
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu) J0(mu, nu) = jp[mu * d + nu].real();
        // endomorphism with g(hat A ., .) = A_real: hat A = G^-1 A^T
        Mat Ahat = Gri * Am.transpose();
        Mat K = -0.5 * Ahat * J0;
        Mat Q = K.exp();
        Mat Qi = (-K).exp();
        Mat Jn = Q * J0 * Qi;
        cd* jo = out.J.point(p);
        for (int mu = 0; mu < d; ++mu)
            for (int nu = 0; nu < d; ++nu) jo[mu * d + nu] = Jn(mu, nu);
        const cd* fp = base.frame.point(p);
        cd* fo = out.frame.point(p);
        cd* coo = out.coframe.point(p);
        for (int a = 0; a < d; ++a)
            for (int mu = 0; mu < d; ++mu) {
                cd accf{}, accc{};
                for (int nu = 0; nu < d; ++nu) {
                    accf += Q(mu, nu) * fp[a * d + nu];
                    accc += cop[a * d + nu] * Qi(nu, mu);
                }
                fo[a * d + mu] = accf;
                coo[a * d + mu] = accc;
            }
    });
    (void)Greal;
    return out;
}

CompatiblePair pair_from_J(const TorusLattice& lat, const HermitianMetric<cd>& gframe,
                           const LatticeField& Jf) {
    CompatiblePair ref = flat_pair(lat, gframe);
    const int n = lat.n, d = lat.dim();
    CompatiblePair out = ref;
    out.J = Jf;

    CMat L0 = [&] {
        CMat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = gframe.G(i, j);
        Eigen::LLT<CMat> llt(g);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("pair_from_J: frame metric not positive definite");
        return CMat(llt.matrixL());
    }();

    std::vector<int> failed(std::size_t(lat.npoints()), 0);
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        const cd* jp = Jf.point(p);
        const cd* fp = ref.frame.point(p);
        // project the reference frame onto T^{1,0}(J)
        CMat P(n, d);
        for (int i = 0; i < n; ++i)
            for (int mu = 0; mu < d; ++mu) {
                cd acc = fp[i * d + mu];
                cd jz{};
                for (int nu = 0; nu < d; ++nu) jz += jp[mu * d + nu] * fp[i * d + nu];
                P(i, mu) = 0.5 * (acc - cd(0, 1) * jz);
            }
        CMat Gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cd acc{};
                for (int mu = 0; mu < d; ++mu)
                    for (int nu = 0; nu < d; ++nu)
                        acc += P(i, mu) * std::conj(P(j, nu)) * ref.greal[std::size_t(mu * d + nu)];
                Gram(i, j) = acc;
            }
        Eigen::LLT<CMat> llt(Gram);
        if (llt.info() != Eigen::Success || llt.matrixL()(n - 1, n - 1).real() < 1e-6) {
            failed[std::size_t(p)] = 1;
            return;
        }
        CMat L = llt.matrixL();
        CMat M = L.adjoint().inverse() * L0.adjoint();  // Gram(W) = gframe for W = M^T P
        CMat W = M.transpose() * P;
        cd* fo = out.frame.point(p);
        for (int i = 0; i < n; ++i)
            for (int mu = 0; mu < d; ++mu) {
                fo[i * d + mu] = W(i, mu);
                fo[(n + i) * d + mu] = std::conj(W(i, mu));
            }
        CMat F(d, d);
        for (int a = 0; a < d; ++a)
            for (int mu = 0; mu < d; ++mu) F(a, mu) = fo[a * d + mu];
        CMat Co = F.inverse();
        cd* coo = out.coframe.point(p);
        for (int a = 0; a < d; ++a)
            for (int mu = 0; mu < d; ++mu) coo[a * d + mu] = Co(mu, a);
    });
    for (int f : failed)
        if (f) throw std::runtime_error("pair_from_J: projection of the reference frame degenerates");
    out.validate(1e-8);
    return out;
}

LatticeGeo::LatticeGeo(const CompatiblePair& p, Scheme s)
    : pair(&p), scheme(s), C(p.lat, {up_f, dn_f, dn_f}) {
    const TorusLattice& lat = p.lat;
    const int d = lat.dim();
    std::vector<LatticeField> df;
    df.reserve(std::size_t(d));
    for (int mu = 0; mu < d; ++mu) df.push_back(partial_derivative(p.frame, mu, scheme));
    par::for_n(lat.npoints(), [&](std::int64_t q) {
        const cd* fp = p.frame.point(q);
        const cd* cop = p.coframe.point(q);
        cd* cp = C.point(q);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                // [Z_a, Z_b]^nu
                std::vector<cd> w(std::size_t(d), cd{});
                for (int mu = 0; mu < d; ++mu) {
                    const cd za = fp[a * d + mu], zb = fp[b * d + mu];
                    const cd* dba = df[std::size_t(mu)].point(q);
                    for (int nu = 0; nu < d; ++nu)
                        w[std::size_t(nu)] += za * dba[b * d + nu] - zb * dba[a * d + nu];
                }
                for (int cidx = 0; cidx < d; ++cidx) {
                    cd acc{};
                    for (int nu = 0; nu < d; ++nu) acc += cop[cidx * d + nu] * w[std::size_t(nu)];
                    cp[(cidx * d + a) * d + b] = acc;
                }
            }
    });
}

LatticeField LatticeGeo::dd(const LatticeField& f) const {
    const TorusLattice& lat = pair->lat;
    const int d = lat.dim();
    std::vector<Slot> sl = f.proto().slots();
    sl.insert(sl.begin(), dn_f);
    LatticeField out(lat, sl);
    const std::size_t nc = f.ncomp();
    for (int mu = 0; mu < d; ++mu) {
        LatticeField dmu = partial_derivative(f, mu, scheme);
        par::for_n(lat.npoints(), [&](std::int64_t p) {
            const cd* fp = pair->frame.point(p);
            const cd* dp = dmu.point(p);
            cd* op = out.point(p);
            for (int a = 0; a < d; ++a) {
                const cd za = fp[a * d + mu];
                if (za == cd{}) continue;
                cd* row = op + std::size_t(a) * nc;
                for (std::size_t c = 0; c < nc; ++c) row[c] += za * dp[c];
            }
        });
    }
    return out;
}

}  // namespace ahc
