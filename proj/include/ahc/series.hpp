#pragma once

#include <stdexcept>
#include <vector>

#include "ahc/lattice.hpp"
#include "ahc/metric.hpp"
#include "ahc/tensor.hpp"

namespace ahc {

// Tensor-valued polynomial in the boundary defining function x, with
// coefficients constant in the model frame. An optional offset o represents
// x^o * (polynomial); x d/dx acts on the degree-k coefficient as
// multiplication by (o + k). Arithmetic truncates uniformly at maxdeg.
template <class R>
struct SeriesField {
    int n = 0;
    int maxdeg = 0;
    R offset = ring<R>::zero();
    std::vector<Tensor<R>> c;  // degree 0..maxdeg

    SeriesField() = default;
    SeriesField(int n_, int maxdeg_, std::vector<Slot> slots)
        : n(n_), maxdeg(maxdeg_) {
        c.assign(std::size_t(maxdeg + 1), Tensor<R>(n, slots));
    }

    const std::vector<Slot>& slots() const { return c.front().slots(); }
    Tensor<R>& operator[](int d) { return c[std::size_t(d)]; }
    const Tensor<R>& operator[](int d) const { return c[std::size_t(d)]; }

    void check_compat(const SeriesField& o, const char* op) const {
        if (n != o.n || maxdeg != o.maxdeg) throw std::invalid_argument(std::string("SeriesField: shape mismatch in ") + op);
        if (!ring<R>::is_zero(offset - o.offset))
            throw std::invalid_argument(std::string("SeriesField: offset mismatch in ") + op);
        c.front().check_same_sig(o.c.front(), op);
    }

    SeriesField& operator+=(const SeriesField& o) {
        check_compat(o, "+=");
        for (int d = 0; d <= maxdeg; ++d) c[std::size_t(d)] += o[d];
        return *this;
    }
    SeriesField& operator-=(const SeriesField& o) {
        check_compat(o, "-=");
        for (int d = 0; d <= maxdeg; ++d) c[std::size_t(d)] -= o[d];
        return *this;
    }
    friend SeriesField operator+(SeriesField a, const SeriesField& b) { return a += b; }
    friend SeriesField operator-(SeriesField a, const SeriesField& b) { return a -= b; }
    friend SeriesField operator*(const R& s, SeriesField f) {
        for (auto& t : f.c) t = s * t;
        return f;
    }
};

template <class R, class F>
SeriesField<R> series_map(const SeriesField<R>& x, F&& f) {
    SeriesField<R> out;
    out.n = x.n;
    out.maxdeg = x.maxdeg;
    out.offset = x.offset;
    out.c.reserve(x.c.size());
    for (const auto& t : x.c) out.c.push_back(f(t));
    return out;
}

template <class R>
SeriesField<R> fconj(const SeriesField<R>& x) {
    auto out = series_map(x, [](const Tensor<R>& t) { return conj_t(t); });
    out.offset = ring<R>::conj(x.offset);
    return out;
}
template <class R>
SeriesField<R> fpermute(const SeriesField<R>& x, const std::vector<int>& perm) {
    return series_map(x, [&](const Tensor<R>& t) { return permuted(t, perm); });
}
template <class R>
SeriesField<R> fcontract(const SeriesField<R>& x, int a, int b) {
    return series_map(x, [&](const Tensor<R>& t) { return contract(t, a, b); });
}
template <class R>
SeriesField<R> falternate(const SeriesField<R>& x, const std::vector<int>& ks) {
    return series_map(x, [&](const Tensor<R>& t) { return alternate(t, ks); });
}
template <class R>
SeriesField<R> fsymmetrize(const SeriesField<R>& x, const std::vector<int>& ks) {
    return series_map(x, [&](const Tensor<R>& t) { return symmetrize(t, ks); });
}
template <class R>
SeriesField<R> fcyclic(const SeriesField<R>& x, const std::vector<int>& ks) {
    return series_map(x, [&](const Tensor<R>& t) { return cyclic(t, ks); });
}
template <class R>
SeriesField<R> fblock(const SeriesField<R>& x, int k, Bar half) {
    return series_map(x, [&](const Tensor<R>& t) { return block(t, k, half); });
}
template <class R>
SeriesField<R> fwiden(const SeriesField<R>& x, int k) {
    return series_map(x, [&](const Tensor<R>& t) { return widen(t, k); });
}
template <class R>
SeriesField<R> fscale(const SeriesField<R>& x, const R& s) {
    return s * x;
}
template <class R>
SeriesField<R> fzero_like(const SeriesField<R>& x, std::vector<Slot> slots) {
    SeriesField<R> out(x.n, x.maxdeg, std::move(slots));
    return out;
}

// Cauchy product with contractions; offsets add (at most one may be nonzero)
template <class R>
SeriesField<R> fmulcon(const SeriesField<R>& a, const SeriesField<R>& b,
                       const std::vector<std::pair<int, int>>& pairs) {
    if (a.n != b.n || a.maxdeg != b.maxdeg)
        throw std::invalid_argument("fmulcon(series): shape mismatch");
    if (!ring<R>::is_zero(a.offset) && !ring<R>::is_zero(b.offset))
        throw std::invalid_argument("fmulcon(series): both operands carry an offset");
    Tensor<R> probe = mulcon(a[0], b[0], pairs);
    SeriesField<R> out(a.n, a.maxdeg, probe.slots());
    out.offset = a.offset + b.offset;
    for (int d = 0; d <= a.maxdeg; ++d)
        for (int e = 0; e <= d; ++e) out[d] += mulcon(a[e], b[d - e], pairs);
    return out;
}

// x d/dx
template <class R>
SeriesField<R> xdx(const SeriesField<R>& x) {
    SeriesField<R> out = x;
    for (int d = 0; d <= x.maxdeg; ++d) {
        R f = x.offset + ring<R>::from_int(d);
        out[d] = f * out[d];
    }
    return out;
}

template <class R>
SeriesField<R> truncate_above(const SeriesField<R>& x, int deg) {
    SeriesField<R> out = x;
    for (int d = deg + 1; d <= x.maxdeg; ++d)
        out[d] = Tensor<R>(x.n, x.slots());
    return out;
}

template <class R>
double max_abs(const SeriesField<R>& x) {
    double m = 0;
    for (const auto& t : x.c) m = std::max(m, max_abs(t));
    return m;
}

template <class R>
bool is_exactly_zero(const SeriesField<R>& x) {
    for (const auto& t : x.c)
        if (!is_exactly_zero(t)) return false;
    return true;
}

template <class R>
struct FieldTraits<SeriesField<R>> {
    using S = R;
};

// lowest degree with a nonzero coefficient, or maxdeg+1 if identically zero
template <class R>
int order_in_x(const SeriesField<R>& x) {
    for (int d = 0; d <= x.maxdeg; ++d)
        if (!is_exactly_zero(x[d])) return d;
    return x.maxdeg + 1;
}

}  // namespace ahc
