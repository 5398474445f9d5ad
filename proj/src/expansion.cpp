#include "ahc/expansion.hpp"

namespace ahc {

namespace {

using SF = SeriesField<RC>;

SF matmul(const SF& A, const SF& B) { return fmulcon(A, B, {{1, 0}}); }

SF identity_series(int n, int maxdeg) {
    SF I(n, maxdeg, {up_f, dn_f});
    for (int a = 0; a < 2 * n; ++a) I[0].at({a, a}) = ring<RC>::one();
    return I;
}

SF model_J_series(int n, int maxdeg) {
    SF J(n, maxdeg, {up_f, dn_f});
    for (int i = 0; i < n; ++i) {
        J[0].at({i, i}) = ring<RC>::i();
        J[0].at({n + i, n + i}) = -ring<RC>::i();
    }
    return J;
}

// g(J., J.) - g as a series of bilinear forms
SF metric_defect(const SF& J, const SF& G) {
    auto X = fmulcon(J, G, {{0, 0}});   // J^c_a G_{cd} -> (a, d)
    auto Y = fmulcon(J, X, {{0, 1}});   // J^d_b -> (b, a)
    return fpermute(Y, {1, 0}) - G;
}

SF square_defect(const SF& J) {
    auto JJ = matmul(J, J);
    return JJ + identity_series(J.n, J.maxdeg);
}

SF series_exp(const SF& K) {
    SF acc = identity_series(K.n, K.maxdeg);
    SF term = acc;
    for (long long m = 1;; ++m) {
        term = fscale(matmul(term, K), ring<RC>::from_ratio(1, m));
        if (is_exactly_zero(term)) break;
        acc += term;
        if (m > 4 * (K.maxdeg + 1)) throw std::logic_error("series_exp: no termination");
    }
    return acc;
}

// project the running frame onto T^{1,0}(J) and mirror the barred columns
SF adapt_frame(const SF& J, const SF& Qold) {
    const int n = J.n;
    auto JQ = matmul(J, Qold);
    SF Q(n, J.maxdeg, {up_f, dn_f});
    const RC half = ring<RC>::from_ratio(1, 2);
    const RC mih = RC{Rational(0), Rational(-1) / 2};  // -i/2
    for (int d = 0; d <= J.maxdeg; ++d)
        for (int b = 0; b < 2 * n; ++b)
            for (int i = 0; i < n; ++i) {
                RC v = half * Qold[d].at({b, i}) + mih * JQ[d].at({b, i});
                Q[d].at({b, i}) = v;
                int bm = b < n ? b + n : b - n;
                Q[d].at({bm, n + i}) = ring<RC>::conj(v);
            }
    // exact adaptedness: J Q e_i = i Q e_i
    auto dev = matmul(J, Q);
    for (int d = 0; d <= J.maxdeg; ++d)
        for (int b = 0; b < 2 * n; ++b)
            for (int i = 0; i < n; ++i) {
                RC want = ring<RC>::i() * Q[d].at({b, i});
                if (!(dev[d].at({b, i}) == want))
                    throw std::runtime_error("adapt_frame: projected frame is not J-adapted");
            }
    return Q;
}

// fill in B-corrections from degree `from` until both compatibility defects
// vanish through maxdeg; returns |B| at degree `from`
double complete_compat(SF& J, const SF& G, const Tensor<RC>& J0, const Tensor<RC>& G0, int from) {
    double bnorm = 0;
    for (int k = from; k <= J.maxdeg; ++k) {
        auto D = metric_defect(J, G);
        Tensor<RC> B = compatibility_correction(D[k], J0, G0);
        if (k == from) bnorm = max_abs(B);
        J[k] += B;
        auto E = square_defect(J);
        for (int d = 0; d <= k; ++d)
            if (!is_exactly_zero(E[d]))
                throw std::runtime_error(
                    "compatibility correction left a J^2 defect at degree " + std::to_string(d));
        auto D2 = metric_defect(J, G);
        for (int d = 0; d <= k; ++d)
            if (!is_exactly_zero(D2[d]))
                throw std::runtime_error("compatibility correction left a metric defect at degree " +
                                         std::to_string(d));
    }
    return bnorm;
}

struct PipelineOut {
    SeriesGeo<RC> geo;
    SF S;
};

PipelineOut run_pipeline(const TWBoundaryData& tw, const SF& G, const SF& Q, int maxdeg) {
    PipelineOut out{adapted_geometry(tw, G, Q, maxdeg), SF{}};
    auto lc = levi_civita(out.geo);
    auto lich = lichnerowicz(out.geo, lc);
    auto tors = torsion_data(out.geo, lc);
    auto el = ehresmann_libermann(out.geo, lich, tors);
    out.S = s_tensor(out.geo, el, tors);
    return out;
}

}  // namespace

SeriesField<RC> series_matrix_inverse(const SeriesField<RC>& M) {
    const int k = M[0].extent(0);
    SeriesField<RC> X(M.n, M.maxdeg, M.slots());
    // invert the degree-0 part, then solve degree by degree
    std::vector<RC> m0(std::size_t(k) * std::size_t(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m0[std::size_t(i * k + j)] = M[0].at({i, j});
    std::vector<RC> mi = invert_matrix(m0, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) X[0].at({i, j}) = mi[std::size_t(i * k + j)];
    for (int d = 1; d <= M.maxdeg; ++d) {
        // X_d = -M0^-1 sum_{e=1..d} M_e X_{d-e}
        Tensor<RC> acc(M.n, M.slots());
        for (int e = 1; e <= d; ++e) acc += mulcon(M[e], X[d - e], {{1, 0}});
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                RC v{};
                for (int l = 0; l < k; ++l) v += mi[std::size_t(i * k + l)] * acc.at({l, j});
                X[d].at({i, j}) = -v;
            }
    }
    return X;
}

SeriesField<RC> model_metric_series(const TWBoundaryData& tw, int maxdeg) {
    SF G(tw.n, maxdeg, {dn_f, dn_f});
    G[0] = model_metric<RC>(tw).full_tensor();
    return G;
}

SeriesGeo<RC> adapted_geometry(const TWBoundaryData& tw, const SeriesField<RC>& Gfull_model,
                               const SeriesField<RC>& Q, int maxdeg) {
    SeriesGeo<RC> geo;
    geo.nn = tw.n;
    geo.maxdeg = maxdeg;
    auto Cm = model_structure_constants<RC>(tw, maxdeg);
    auto Qinv = series_matrix_inverse(Q);

    // primed metric G'_{ab} = Q^c_a Q^d_b G_{cd}
    auto X = fmulcon(Q, Gfull_model, {{0, 0}});
    auto Gp = fpermute(fmulcon(Q, X, {{0, 1}}), {1, 0});
    geo.gfull = Gp;
    geo.gfullinv = series_matrix_inverse(Gp);
    // the adapted frame is (1,0) for J, so the (plain,plain) block vanishes
    if (!is_exactly_zero(fblock(fblock(Gp, 0, Bar::plain), 1, Bar::plain)))
        throw std::runtime_error("adapted_geometry: frame not isotropic for the metric");
    geo.gmat = fblock(fblock(Gp, 0, Bar::plain), 1, Bar::bar);
    {
        auto mi = series_matrix_inverse(geo.gmat);
        geo.gmatinv = fzero_like(geo.gmat, {up_p, up_b});
        for (int d = 0; d <= maxdeg; ++d) geo.gmatinv[d] = conj_t(mi[d]);
    }

    // structure functions of the primed frame
    {
        SeriesGeo<RC> model;
        model.nn = tw.n;
        model.maxdeg = maxdeg;
        auto dQ = model.dd_model(Q);                       // (c-dir, e, b)
        auto t1 = fpermute(fmulcon(Q, dQ, {{0, 0}}), {1, 0, 2});  // (e, a, b)
        auto t2 = fpermute(t1, {0, 2, 1});
        auto t3 = fpermute(fmulcon(Q, fmulcon(Q, Cm, {{0, 1}}), {{0, 2}}), {2, 1, 0});
        auto Z = t1 - t2 + t3;
        geo.C = fmulcon(Qinv, Z, {{1, 0}});
    }
    geo.Q = Q;
    return geo;
}

Tensor<RC> compatibility_correction(const Tensor<RC>& D, const Tensor<RC>& J0,
                                    const Tensor<RC>& G0) {
    const int d = D.extent(0);
    // beta_{ab} = g(J0 Z_a, B Z_b) = (J0^T G0)_{ac} B^c_b = -(1/2) D_{ab}
    std::vector<RC> M(std::size_t(d) * std::size_t(d));
    for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) {
            RC acc{};
            for (int e = 0; e < d; ++e) acc += J0.at({e, a}) * G0.at({e, c});
            M[std::size_t(a * d + c)] = acc;
        }
    std::vector<RC> Mi = invert_matrix(M, d);
    Tensor<RC> B(D.n(), {up_f, dn_f});
    const RC mh = ring<RC>::from_ratio(-1, 2);
    for (int c = 0; c < d; ++c)
        for (int b = 0; b < d; ++b) {
            RC acc{};
            for (int a = 0; a < d; ++a) acc += Mi[std::size_t(c * d + a)] * (mh * D.at({a, b}));
            B.at({c, b}) = acc;
        }
    return B;
}

Tensor<RC> order_reduction(const Tensor<RC>& S_l, int n, int l) {
    if (l < 1 || l > 2 * n - 1) throw std::invalid_argument("order_reduction: l out of range");
    Rational d0a = Rational(l) * l - Rational(2 * n) * l - Rational(2 * n + 5);
    Rational dab = Rational(l) * l - Rational(2 * n) * l - Rational(8);
    if (d0a == 0 || dab == 0) throw std::logic_error("order_reduction: vanishing denominator");
    Tensor<RC> A(n, {dn_p, dn_p});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Rational den = i == 0 ? d0a : dab;
            RC v = S_l.at({i, j}) * RC{Rational(8) / den};
            A.at({i, j}) = v;
            A.at({j, i}) = -v;
        }
    return A;
}

SeriesField<RC> expansion_s_series(const TWBoundaryData& tw, const SeriesField<RC>& Gfull_model,
                                   const SeriesField<RC>& Q, int maxdeg) {
    return run_pipeline(tw, Gfull_model, Q, maxdeg).S;
}

ExpansionResult solve_expansion(const SeriesField<RC>& Gfull_model, const TWBoundaryData& tw) {
    tw.validate();
    const int n = tw.n;
    const int maxdeg = Gfull_model.maxdeg;
    if (maxdeg < 2 * n) throw std::invalid_argument("solve_expansion: metric series too short");

    ExpansionResult res;
    res.n = n;
    res.J = model_J_series(n, maxdeg);
    Tensor<RC> J0 = res.J[0];
    Tensor<RC> G0 = Gfull_model[0];

    // make the seed exactly compatible with the caller metric
    complete_compat(res.J, Gfull_model, J0, G0, 1);
    res.Q = adapt_frame(res.J, identity_series(n, maxdeg));

    for (int l = 1; l <= 2 * n - 1; ++l) {
        ExpansionOrderRecord rec;
        rec.l = l;
        res.J = truncate_above(res.J, l - 1);
        rec.b_norm = complete_compat(res.J, Gfull_model, J0, G0, l);
        res.Q = adapt_frame(res.J, res.Q);

        auto pipe = run_pipeline(tw, Gfull_model, res.Q, maxdeg);
        if (order_in_x(pipe.S) < l)
            throw std::runtime_error("solve_expansion: S fails to vanish through degree " +
                                     std::to_string(l - 1));
        Tensor<RC> A = order_reduction(pipe.S[l], n, l);
        rec.a_norm = max_abs(A);

        // series retraction by e^K with K built from the degree-l coefficient
        SF As(n, maxdeg, {dn_p, dn_p});
        As[l] = A;
        auto Afull = fwiden(fwiden(As, 0), 1) + fwiden(fwiden(fconj(As), 0), 1);
        auto Qinv = series_matrix_inverse(res.Q);
        auto Am = fpermute(fmulcon(Qinv, fmulcon(Qinv, Afull, {{0, 0}}), {{0, 1}}), {1, 0});
        auto GFI = series_matrix_inverse(Gfull_model);
        auto Ahat = fmulcon(GFI, Am, {{1, 1}});
        auto K = fscale(matmul(Ahat, res.J), ring<RC>::from_ratio(-1, 2));
        auto expK = series_exp(K);
        auto expKi = series_exp(fscale(K, ring<RC>::from_int(-1)));
        res.J = matmul(matmul(expK, res.J), expKi);
        res.Q = matmul(expK, res.Q);
        res.orders.push_back(rec);
    }

    // final S, recomputed from a freshly projected frame
    auto Qfresh = adapt_frame(res.J, identity_series(n, maxdeg));
    res.S = expansion_s_series(tw, Gfull_model, Qfresh, maxdeg);
    res.s_order = order_in_x(res.S);
    return res;
}

}  // namespace ahc
