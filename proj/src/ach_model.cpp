#include "ahc/ach_model.hpp"

namespace ahc {

namespace {

// determinant of a k x k RC matrix by Laplace expansion (k <= 3 in practice)
RC rc_det(const std::vector<RC>& a, int k) {
    if (k == 0) return ring<RC>::one();
    if (k == 1) return a[0];
    RC acc{};
    int sign = 1;
    for (int c = 0; c < k; ++c) {
        std::vector<RC> minor;
        minor.reserve(std::size_t((k - 1) * (k - 1)));
        for (int r = 1; r < k; ++r)
            for (int cc = 0; cc < k; ++cc)
                if (cc != c) minor.push_back(a[std::size_t(r * k + cc)]);
        RC term = a[std::size_t(c)] * rc_det(minor, k - 1);
        acc += sign > 0 ? term : -term;
        sign = -sign;
    }
    return acc;
}

}  // namespace

TWBoundaryData TWBoundaryData::heisenberg(int n) {
    if (n < 2) throw std::invalid_argument("heisenberg: n must be >= 2");
    TWBoundaryData tw;
    tw.n = n;
    const int m = n - 1;
    tw.levi.assign(std::size_t(m * m), RC{});
    for (int a = 0; a < m; ++a) tw.levi[std::size_t(a * m + a)] = ring<RC>::from_ratio(1, 2);
    tw.tw_torsion.assign(std::size_t(m * m), RC{});
    tw.cr_nijenhuis.assign(std::size_t(m * m * m), RC{});
    tw.conn_hol.assign(std::size_t(m * m * m), RC{});
    tw.conn_antihol.assign(std::size_t(m * m * m), RC{});
    tw.conn_reeb.assign(std::size_t(m * m), RC{});
    return tw;
}

// 3-step nilpotent Lie group: [X1,X2]=X3, [X2,X3]=X5, [X1,X4]=X5, contact
// form dual to X5, gamma X1 = -X4, gamma X2 = -X3.  The CR frame is
// Z_1 = X1 + i X4, Z_2 = X2 + i X3, with Levi metric h-hat = id and
// Nhat^{2bar}_{12} = -i/2.
TWBoundaryData TWBoundaryData::nilpotent_n3() {
    TWBoundaryData tw = heisenberg(3);
    const int m = 2;
    auto at3 = [&](std::vector<RC>& v, int g, int a, int b) -> RC& {
        return v[std::size_t((g * m + a) * m + b)];
    };
    for (int a = 0; a < m; ++a) tw.levi[std::size_t(a * m + a)] = ring<RC>::one();
    const RC ih = RC{Rational(0), Rational(1) / 2};  // i/2
    // indices are 0-based: alpha = 1, 2 map to 0, 1
    at3(tw.cr_nijenhuis, 1, 0, 1) = -ih;
    at3(tw.cr_nijenhuis, 1, 1, 0) = ih;
    at3(tw.conn_hol, 1, 0, 1) = -ih;
    at3(tw.conn_antihol, 1, 0, 1) = -ih;  // Gamma-hat^2_{1bar 2}
    at3(tw.conn_antihol, 1, 1, 0) = ih;   // Gamma-hat^2_{2bar 1}
    return tw;
}

void TWBoundaryData::validate() const {
    const int mm = m();
    if (n < 2) throw std::invalid_argument("TWBoundaryData: n must be >= 2");
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument("TWBoundaryData: " + what);
    };
    need(int(levi.size()) == mm * mm && int(tw_torsion.size()) == mm * mm &&
             int(cr_nijenhuis.size()) == mm * mm * mm && int(conn_hol.size()) == mm * mm * mm &&
             int(conn_antihol.size()) == mm * mm * mm && int(conn_reeb.size()) == mm * mm,
         "field sizes do not match n");
    for (int a = 0; a < mm; ++a)
        for (int b = 0; b < mm; ++b) {
            need(h(a, b) == ring<RC>::conj(h(b, a)), "Levi metric is not Hermitian");
            need(A(a, b) == A(b, a), "Tanaka-Webster torsion is not symmetric");
            for (int g = 0; g < mm; ++g)
                need(Nh(g, a, b) == -Nh(g, b, a), "CR Nijenhuis tensor is not skew");
        }
    // positive definiteness by leading principal minors
    for (int k = 1; k <= mm; ++k) {
        std::vector<RC> lead;
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) lead.push_back(h(r, c));
        RC d = rc_det(lead, k);
        need(d.im == 0 && d.re > 0, "Levi metric is not positive definite");
    }
    // metric compatibility of the connection constants
    for (int al = 0; al < mm; ++al)
        for (int be = 0; be < mm; ++be)
            for (int ga = 0; ga < mm; ++ga) {
                RC acc{};
                for (int de = 0; de < mm; ++de)
                    acc += Gh(de, al, be) * h(de, ga) + ring<RC>::conj(Gah(de, al, ga)) * h(be, de);
                need(ring<RC>::is_zero(acc), "connection constants are not h-compatible (H direction)");
            }
    for (int be = 0; be < mm; ++be)
        for (int ga = 0; ga < mm; ++ga) {
            RC acc{};
            for (int de = 0; de < mm; ++de)
                acc += Gr(de, be) * h(de, ga) + ring<RC>::conj(Gr(de, ga)) * h(be, de);
            need(ring<RC>::is_zero(acc), "connection constants are not h-compatible (Reeb direction)");
        }
    // Jacobi identity of the model frame brackets (exact, as a series)
    auto geo = model_geometry<RC>(*this, 4);
    auto X = geo.dd(geo.C);                            // D_a C^e_{bc}
    auto Y = fmulcon(geo.C, geo.C, {{0, 2}});          // C^d_{bc} C^e_{ad} -> (b,c,e,a)
    auto J = fpermute(X, {0, 1, 2, 3}) + fpermute(Y, {3, 2, 0, 1});  // (a,e,b,c)
    auto res = fcyclic(fpermute(J, {1, 0, 2, 3}), {1, 2, 3});        // cycle (a,b,c)
    need(is_exactly_zero(res), "structure constants violate the Jacobi identity");
}

ModelStructure model_structure(const TWBoundaryData& tw, int maxdeg) {
    tw.validate();
    if (maxdeg < 0) maxdeg = 2 * tw.n + 1;
    ModelStructure ms{model_geometry<RC>(tw, maxdeg), {}, {}, {}, {}, {}};
    ms.lc = levi_civita(ms.geo);
    ms.lich = lichnerowicz(ms.geo, ms.lc);
    ms.tors = torsion_data(ms.geo, ms.lc);
    ms.el = ehresmann_libermann(ms.geo, ms.lich, ms.tors);
    ms.S = s_tensor(ms.geo, ms.el, ms.tors);
    return ms;
}

HermitianConnection<SeriesGeo<RC>> chn_christoffels(int n) {
    if (n < 2) throw std::invalid_argument("chn_christoffels: n must be >= 2");
    return model_structure(TWBoundaryData::heisenberg(n), 0).el;
}

IndicialData indicial_data(int n) {
    IndicialData d;
    d.n = n;
    d.c_0a = 2.0 * n + 5.0;
    d.c_ab = 8.0;
    d.roots_0a = {n - std::sqrt(n * n + 2.0 * n + 5.0), n + std::sqrt(n * n + 2.0 * n + 5.0)};
    d.roots_ab = {n - std::sqrt(n * n + 8.0), n + std::sqrt(n * n + 8.0)};
    d.radius = std::sqrt(n * n + 8.0);
    auto quad = [&](long long c) {
        RCPoly s = RCPoly::variable();
        return s * s - ring<RCPoly>::from_int(2 * n) * s - ring<RCPoly>::from_int(c);
    };
    d.poly_0a = quad(2 * n + 5);
    d.poly_ab = quad(8);
    return d;
}

RadialPolys radial_polynomials(int n) {
    auto tw = TWBoundaryData::heisenberg(n);
    auto geo = model_geometry<RCPoly>(tw, 0);
    auto lc = levi_civita(geo);
    auto lich = lichnerowicz(geo, lc);
    auto tors = torsion_data(geo, lc);
    auto el = ehresmann_libermann(geo, lich, tors);
    const RCPoly lambda = ring<RCPoly>::from_int(-(n + 1));

    auto probe = [&](int i, int j) {
        SeriesField<RCPoly> A(n, 0, {dn_p, dn_p});
        A.offset = RCPoly::variable();
        A[0].at({i, j}) = ring<RCPoly>::one();
        A[0].at({j, i}) = ring<RCPoly>::from_int(-1);
        auto r = fscale(linearized_s(geo, el, A, lambda), ring<RCPoly>::from_int(2));
        RCPoly q = r[0].at({i, j});
        // the radial operator acts diagonally on the block
        auto dev = r[0] - q * A[0];
        if (!is_exactly_zero(dev))
            throw std::runtime_error("radial operator is not diagonal on the probe block");
        return q;
    };

    RadialPolys rp;
    rp.p0a = probe(0, 1);
    if (n >= 3) {
        rp.pab = probe(1, 2);
        rp.ab_defined = true;
    }
    return rp;
}

std::pair<double, double> radial_indicial_residual(int n, double s) {
    RadialPolys rp = radial_polynomials(n);
    IndicialData id = indicial_data(n);
    auto eval = [&](const RCPoly& p) {
        cd acc{};
        for (std::size_t k = p.c.size(); k-- > 0;) acc = acc * s + to_cd(p.c[k]);
        return acc;
    };
    auto closed = [&](double c) { return -0.25 * (s * s - 2.0 * n * s - c); };
    double r1 = std::abs(eval(rp.p0a) - closed(id.c_0a));
    double r2 = rp.ab_defined ? std::abs(eval(rp.pab) - closed(id.c_ab)) : 0.0;
    return {r1, r2};
}

}  // namespace ahc
