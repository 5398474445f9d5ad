#pragma once

#include <stdexcept>
#include <vector>

#include "ahc/tensor.hpp"

namespace ahc {

// Gauss-Jordan inverse of a dense k x k matrix over the component ring.
// Pivots are chosen by |.|^2, which is exact enough for the rings in use
// (exact rings only need a nonzero pivot).
template <class S>
std::vector<S> invert_matrix(std::vector<S> m, int k) {
    std::vector<S> inv(std::size_t(k) * std::size_t(k), ring<S>::zero());
    for (int i = 0; i < k; ++i) inv[std::size_t(i * k + i)] = ring<S>::one();
    auto row = [&](std::vector<S>& a, int r) { return a.begin() + r * k; };
    for (int col = 0; col < k; ++col) {
        int piv = -1;
        double best = 0;
        for (int r = col; r < k; ++r) {
            double v = ring<S>::abs2(m[std::size_t(r * k + col)]);
            if (!ring<S>::is_zero(m[std::size_t(r * k + col)]) && (piv < 0 || v > best)) {
                piv = r;
                best = v;
            }
        }
        if (piv < 0) throw std::domain_error("invert_matrix: singular matrix");
        if (piv != col) {
            std::swap_ranges(row(m, piv), row(m, piv) + k, row(m, col));
            std::swap_ranges(row(inv, piv), row(inv, piv) + k, row(inv, col));
        }
        S d = m[std::size_t(col * k + col)];
        for (int j = 0; j < k; ++j) {
            m[std::size_t(col * k + j)] = m[std::size_t(col * k + j)] / d;
            inv[std::size_t(col * k + j)] = inv[std::size_t(col * k + j)] / d;
        }
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            S f = m[std::size_t(r * k + col)];
            if (ring<S>::is_zero(f)) continue;
            for (int j = 0; j < k; ++j) {
                m[std::size_t(r * k + j)] -= f * m[std::size_t(col * k + j)];
                inv[std::size_t(r * k + j)] -= f * inv[std::size_t(col * k + j)];
            }
        }
    }
    return inv;
}

// Metric g_{i jbar} in a (1,0)-frame. Hermitian positive definite.
template <class S>
struct HermitianMetric {
    int n = 0;
    std::vector<S> g;   // row-major, g[i*n+j] = g_{i jbar}
    std::vector<S> gi;  // matrix inverse of g (GI * G = I); Hermitian as well

    HermitianMetric() = default;
    explicit HermitianMetric(int n_, std::vector<S> entries) : n(n_), g(std::move(entries)) {
        if (int(g.size()) != n * n) throw std::invalid_argument("HermitianMetric: bad size");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!ring<S>::is_zero(g[std::size_t(i * n + j)] -
                                      ring<S>::conj(g[std::size_t(j * n + i)])))
                    throw std::invalid_argument("HermitianMetric: not Hermitian");
        gi = invert_matrix(g, n);
    }

    static HermitianMetric identity(int n_) {
        std::vector<S> e(std::size_t(n_) * std::size_t(n_), ring<S>::zero());
        for (int i = 0; i < n_; ++i) e[std::size_t(i * n_ + i)] = ring<S>::one();
        return HermitianMetric(n_, std::move(e));
    }

    const S& G(int i, int j) const { return g[std::size_t(i * n + j)]; }
    const S& GI(int i, int j) const { return gi[std::size_t(i * n + j)]; }

    // g_{i jbar} as a rank-2 tensor, slots (down-plain, down-bar)
    Tensor<S> as_tensor() const {
        Tensor<S> t(n, {dn_p, dn_b});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.at({i, j}) = G(i, j);
        return t;
    }
    // g^{i jbar} with slots (up-plain, up-bar); entries conj(GI)
    Tensor<S> inv_tensor() const {
        Tensor<S> t(n, {up_p, up_b});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.at({i, j}) = ring<S>::conj(GI(i, j));
        return t;
    }
    // full-range bilinear metric G_{ab}, slots (down-full, down-full)
    Tensor<S> full_tensor() const {
        Tensor<S> t(n, {dn_f, dn_f});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                t.at({i, n + j}) = G(i, j);
                t.at({n + i, j}) = G(j, i);
            }
        return t;
    }
    Tensor<S> full_inv_tensor() const {
        Tensor<S> t(n, {up_f, up_f});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                // inverse of [[0,G],[G^T,0]] is [[0,(G^T)^-1],[G^-1,0]]
                t.at({i, n + j}) = GI(j, i);
                t.at({n + i, j}) = GI(i, j);
            }
        return t;
    }
};

enum class Dir { raise, lower };

// Flip variance and bar of slot k using the metric; slot keeps its position.
template <class S>
Tensor<S> raise_lower(const Tensor<S>& t, int k, const HermitianMetric<S>& m, Dir dir) {
    const Slot s = t.slot(k);
    if (s.b == Bar::full) throw std::invalid_argument("raise_lower: full slot");
    if ((dir == Dir::raise) != (s.v == Var::down))
        throw std::invalid_argument("raise_lower: direction does not match variance");
    std::vector<Slot> sl = t.slots();
    sl[std::size_t(k)] = {s.v == Var::up ? Var::down : Var::up,
                          s.b == Bar::plain ? Bar::bar : Bar::plain};
    Tensor<S> r(t.n(), sl);
    const int n = t.n();
    std::vector<int> jdx(std::size_t(t.rank()));
    r.visit([&](const std::vector<int>& idx, std::size_t p) {
        jdx = idx;
        S acc = ring<S>::zero();
        const int i = idx[std::size_t(k)];
        for (int q = 0; q < n; ++q) {
            jdx[std::size_t(k)] = q;
            S f;
            if (dir == Dir::lower)
                f = s.b == Bar::plain ? m.G(q, i)   // up-plain m -> down-bar
                                      : m.G(i, q);  // up-bar m -> down-plain
            else
                f = s.b == Bar::plain ? m.GI(i, q)                  // down-plain -> up-bar
                                      : ring<S>::conj(m.GI(i, q));  // down-bar -> up-plain
            acc += f * t.at(jdx);
        }
        r.data()[p] = acc;
    });
    return r;
}

}  // namespace ahc
