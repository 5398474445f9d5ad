#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ahc/metric.hpp"
#include "ahc/rational.hpp"
#include "ahc/tensor.hpp"

using namespace ahc;

namespace {

Tensor<cd> random_tensor(int n, std::vector<Slot> slots, std::uint64_t seed) {
    Tensor<cd> t(n, std::move(slots));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0, 1);
    for (auto& v : t.data()) v = cd(d(rng), d(rng));
    return t;
}

HermitianMetric<cd> random_metric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0, 1);
    // B B^H + n I is Hermitian positive definite
    std::vector<cd> b(std::size_t(n) * std::size_t(n));
    for (auto& v : b) v = cd(d(rng), d(rng));
    std::vector<cd> g(std::size_t(n) * std::size_t(n), cd{});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd acc = i == j ? cd(n, 0) : cd{};
            for (int k = 0; k < n; ++k)
                acc += b[std::size_t(i * n + k)] * std::conj(b[std::size_t(j * n + k)]);
            g[std::size_t(i * n + j)] = acc;
        }
    return HermitianMetric<cd>(n, g);
}

}  // namespace

TEST_CASE("conj is an involution and fixes real tensors") {
    const int n = 3;
    Tensor<cd> delta(n, {up_p, dn_p});
    for (int i = 0; i < n; ++i) delta.at({i, i}) = 1.0;
    auto dbar = conj_t(delta);
    CHECK(dbar.slot(0) == up_b);
    CHECK(dbar.slot(1) == dn_b);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(dbar.at({i, j}) == delta.at({i, j}));

    auto t = random_tensor(n, {dn_p, up_p, dn_b}, 7);
    auto tcc = conj_t(conj_t(t));
    CHECK(max_abs(tcc - t) == 0.0);

    Tensor<cd> s(n, {dn_p, up_p, dn_b});
    s.at({0, 1, 2}) = cd(1, 2);
    auto sc = conj_t(s);
    CHECK(sc.at({0, 1, 2}) == cd(1, -2));
}

TEST_CASE("contract traces") {
    const int n = 4;
    Tensor<cd> delta(n, {up_p, dn_p});
    for (int i = 0; i < n; ++i) delta.at({i, i}) = 1.0;
    auto tr = contract(delta, 0, 1);
    CHECK(tr.rank() == 0);
    CHECK(tr.at(std::vector<int>{}) == cd(n, 0));

    // tau_i = T^j_{ij}
    auto T = random_tensor(n, {up_p, dn_p, dn_p}, 3);
    auto tau = contract(T, 0, 2);
    for (int i = 0; i < n; ++i) {
        cd acc{};
        for (int j = 0; j < n; ++j) acc += T.at({j, i, j});
        CHECK(std::abs(tau.at({i}) - acc) < 1e-14);
    }

    CHECK_THROWS_WITH_AS(contract(T, 1, 2), doctest::Contains("not contractible"),
                         std::invalid_argument);
}

TEST_CASE("contraction commutes with permutation of untouched slots") {
    const int n = 3;
    auto t = random_tensor(n, {up_p, dn_p, dn_b, up_b}, 11);
    auto a = permuted(contract(t, 0, 1), {1, 0});
    auto b = contract(permuted(t, {0, 1, 3, 2}), 0, 1);
    CHECK(max_abs(a - b) == 0.0);
}

TEST_CASE("raise then lower restores the tensor") {
    const int n = 3;
    auto g = random_metric(n, 21);
    auto t = random_tensor(n, {dn_p, up_p, dn_b}, 5);
    for (int k = 0; k < 3; ++k) {
        Dir d1 = t.slot(k).v == Var::down ? Dir::raise : Dir::lower;
        Dir d2 = d1 == Dir::raise ? Dir::lower : Dir::raise;
        auto rt = raise_lower(raise_lower(t, k, g, d1), k, g, d2);
        CHECK(max_abs(rt - t) < 1e-12);
    }
    // identity metric: raising is a pure reindexing
    auto id = HermitianMetric<cd>::identity(n);
    auto r = raise_lower(t, 0, id, Dir::raise);
    CHECK(r.slot(0) == up_b);
    CHECK(max_abs(r - Tensor<cd>(r)) == 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) CHECK(r.at({i, j, k}) == t.at({i, j, k}));
}

TEST_CASE("metric raising convention matches the componentwise formula") {
    const int n = 2;
    auto g = random_metric(n, 33);
    auto T = random_tensor(n, {dn_p, up_p, dn_b}, 8);  // T_l^m_{jbar}
    // T^{kbar}_{ibar jbar} = g^{l kbar} g_{m ibar} T_l^m_{jbar}
    auto up = raise_lower(T, 0, g, Dir::raise);
    auto full = raise_lower(up, 1, g, Dir::lower);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cd acc{};
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        acc += std::conj(g.GI(l, k)) * g.G(m, i) * T.at({l, m, j});
                CHECK(std::abs(full.at({k, i, j}) - acc) < 1e-12);
            }
}

TEST_CASE("alternate and symmetrize are weight-one projections") {
    const int n = 3;
    auto t = random_tensor(n, {dn_p, dn_p, up_b}, 13);
    auto sym = symmetrize(t, {0, 1});
    auto alt = alternate(t, {0, 1});
    CHECK(max_abs(sym + alt - t) < 1e-14);
    CHECK(max_abs(alternate(sym, {0, 1})) < 1e-14);
    CHECK(max_abs(alternate(alt, {0, 1}) - alt) < 1e-14);
    CHECK(max_abs(symmetrize(sym, {0, 1}) - sym) < 1e-14);
    CHECK_THROWS_AS(alternate(t, {0, 2}), std::invalid_argument);
}

TEST_CASE("cyclic sums the p cyclic permutations without weight") {
    const int n = 2;
    auto t = random_tensor(n, {dn_p, dn_p, dn_p}, 17);
    auto c = cyclic(t, {0, 1, 2});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                cd expect = t.at({i, j, k}) + t.at({j, k, i}) + t.at({k, i, j});
                CHECK(std::abs(c.at({i, j, k}) - expect) < 1e-14);
            }
}

TEST_CASE("mulcon agrees with a brute-force loop") {
    const int n = 2;
    auto a = random_tensor(n, {up_p, dn_b, dn_p}, 19);
    auto b = random_tensor(n, {dn_p, up_b, up_p}, 23);
    auto r = mulcon(a, b, {{0, 0}, {1, 1}});
    for (int i = 0; i < n; ++i)   // remaining a slot
        for (int j = 0; j < n; ++j) {  // remaining b slot
            cd acc{};
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) acc += a.at({p, q, i}) * b.at({p, q, j});
            CHECK(std::abs(r.at({i, j}) - acc) < 1e-13);
        }
}

TEST_CASE("full slots: widen, block and conj mirror") {
    const int n = 2;
    auto t = random_tensor(n, {up_p, dn_p}, 29);
    auto w = widen(t, 0);
    CHECK(max_abs(block(w, 0, Bar::plain) - t) == 0.0);
    CHECK(max_abs(block(w, 0, Bar::bar)) == 0.0);
    auto wc = conj_t(w);
    auto back = block(wc, 0, Bar::bar);
    CHECK(max_abs(back - conj_t(t)) == 0.0);
}

TEST_CASE("exact rational tensors behave identically") {
    const int n = 2;
    Tensor<RC> t(n, {dn_p, dn_p});
    t.at({0, 1}) = RC(Rational(1), Rational(1) / 2);
    t.at({1, 0}) = -t.at({0, 1});
    auto alt = alternate(t, {0, 1});
    CHECK(is_exactly_zero(alt - t));
    auto sym = symmetrize(t, {0, 1});
    CHECK(is_exactly_zero(sym));
}
