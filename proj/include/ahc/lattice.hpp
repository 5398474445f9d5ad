#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ahc/parallel.hpp"
#include "ahc/tensor.hpp"

namespace ahc {

enum class Scheme { order2, order4, order6, spectral };

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "order2") return Scheme::order2;
    if (s == "order4") return Scheme::order4;
    if (s == "order6") return Scheme::order6;
    if (s == "spectral") return Scheme::spectral;
    throw std::invalid_argument("unknown derivative scheme: " + s);
}

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::order2: return "order2";
        case Scheme::order4: return "order4";
        case Scheme::order6: return "order6";
        default: return "spectral";
    }
}

// Flat periodic grid on the 2n-torus, period 2*pi per axis.
struct TorusLattice {
    int n = 0;       // complex dimension; 2n real axes
    int extent = 0;  // grid points per axis

    TorusLattice() = default;
    TorusLattice(int n_, int extent_) : n(n_), extent(extent_) {
        if (n < 1) throw std::invalid_argument("TorusLattice: n must be >= 1");
        if (extent < 8 || extent % 2 != 0)
            throw std::invalid_argument("TorusLattice: extent must be even and >= 8");
    }

    int dim() const { return 2 * n; }
    double spacing() const { return 2.0 * std::numbers::pi / extent; }
    std::int64_t npoints() const {
        std::int64_t p = 1;
        for (int k = 0; k < dim(); ++k) p *= extent;
        return p;
    }
    double cell_volume() const {
        double v = 1;
        for (int k = 0; k < dim(); ++k) v *= spacing();
        return v;
    }
    std::int64_t stride(int axis) const {
        std::int64_t s = 1;
        for (int k = axis + 1; k < dim(); ++k) s *= extent;
        return s;
    }
    void coords(std::int64_t p, std::vector<int>& c) const {
        c.resize(std::size_t(dim()));
        for (int k = dim() - 1; k >= 0; --k) {
            c[std::size_t(k)] = int(p % extent);
            p /= extent;
        }
    }
    // coordinate value of axis k at grid position j
    double x(int j) const { return spacing() * j; }

    friend bool operator==(const TorusLattice&, const TorusLattice&) = default;
};

// Field of frame tensors with one uniform signature over the lattice.
// Storage is point-major: data[p*ncomp + c].
class LatticeField {
public:
    LatticeField() = default;
    LatticeField(TorusLattice lat, std::vector<Slot> slots)
        : lat_(lat), proto_(lat.n, std::move(slots)) {
        a_.assign(std::size_t(lat_.npoints()) * proto_.size(), cd{});
    }

    const TorusLattice& lattice() const { return lat_; }
    const Tensor<cd>& proto() const { return proto_; }
    const std::vector<Slot>& slots() const { return proto_.slots(); }
    int rank() const { return proto_.rank(); }
    std::size_t ncomp() const { return proto_.size(); }
    std::int64_t npoints() const { return lat_.npoints(); }
    std::vector<cd>& data() { return a_; }
    const std::vector<cd>& data() const { return a_; }

    cd* point(std::int64_t p) { return a_.data() + std::size_t(p) * ncomp(); }
    const cd* point(std::int64_t p) const { return a_.data() + std::size_t(p) * ncomp(); }

    Tensor<cd> get(std::int64_t p) const {
        Tensor<cd> t = proto_;
        std::copy(point(p), point(p) + ncomp(), t.data().begin());
        return t;
    }
    void set(std::int64_t p, const Tensor<cd>& t) {
        proto_.check_same_sig(t, "LatticeField::set");
        std::copy(t.data().begin(), t.data().end(), point(p));
    }

    LatticeField& operator+=(const LatticeField& o) {
        check_same(o);
        par::for_n(std::int64_t(a_.size()), [&](std::int64_t i) { a_[std::size_t(i)] += o.a_[std::size_t(i)]; });
        return *this;
    }
    LatticeField& operator-=(const LatticeField& o) {
        check_same(o);
        par::for_n(std::int64_t(a_.size()), [&](std::int64_t i) { a_[std::size_t(i)] -= o.a_[std::size_t(i)]; });
        return *this;
    }
    friend LatticeField operator+(LatticeField a, const LatticeField& b) { return a += b; }
    friend LatticeField operator-(LatticeField a, const LatticeField& b) { return a -= b; }
    friend LatticeField operator*(const cd& c, LatticeField f) {
        par::for_n(std::int64_t(f.a_.size()), [&](std::int64_t i) { f.a_[std::size_t(i)] = c * f.a_[std::size_t(i)]; });
        return f;
    }

    void check_same(const LatticeField& o) const {
        if (!(lat_ == o.lat_)) throw std::invalid_argument("LatticeField: lattice mismatch");
        proto_.check_same_sig(o.proto_, "field op");
    }

private:
    TorusLattice lat_;
    Tensor<cd> proto_;
    std::vector<cd> a_;
};

// pointwise lift of a tensor operation
template <class F>
LatticeField map1(const LatticeField& x, F&& f) {
    Tensor<cd> probe = f(x.get(0));
    LatticeField out(x.lattice(), probe.slots());
    par::for_n(x.npoints(), [&](std::int64_t p) {
        Tensor<cd> r = f(x.get(p));
        out.set(p, r);
    });
    return out;
}

template <class F>
LatticeField map2(const LatticeField& x, const LatticeField& y, F&& f) {
    if (!(x.lattice() == y.lattice())) throw std::invalid_argument("map2: lattice mismatch");
    Tensor<cd> probe = f(x.get(0), y.get(0));
    LatticeField out(x.lattice(), probe.slots());
    par::for_n(x.npoints(), [&](std::int64_t p) { out.set(p, f(x.get(p), y.get(p))); });
    return out;
}

// constant (broadcast) field
inline LatticeField constant_field(const TorusLattice& lat, const Tensor<cd>& t) {
    LatticeField out(lat, t.slots());
    par::for_n(lat.npoints(), [&](std::int64_t p) { out.set(p, t); });
    return out;
}

// field-level tensor algebra, mirrored by the series backend
inline LatticeField fconj(const LatticeField& x) {
    return map1(x, [](const Tensor<cd>& t) { return conj_t(t); });
}
inline LatticeField fpermute(const LatticeField& x, const std::vector<int>& perm) {
    return map1(x, [&](const Tensor<cd>& t) { return permuted(t, perm); });
}
inline LatticeField fcontract(const LatticeField& x, int a, int b) {
    return map1(x, [&](const Tensor<cd>& t) { return contract(t, a, b); });
}
inline LatticeField falternate(const LatticeField& x, const std::vector<int>& ks) {
    return map1(x, [&](const Tensor<cd>& t) { return alternate(t, ks); });
}
inline LatticeField fsymmetrize(const LatticeField& x, const std::vector<int>& ks) {
    return map1(x, [&](const Tensor<cd>& t) { return symmetrize(t, ks); });
}
inline LatticeField fcyclic(const LatticeField& x, const std::vector<int>& ks) {
    return map1(x, [&](const Tensor<cd>& t) { return cyclic(t, ks); });
}
inline LatticeField fblock(const LatticeField& x, int k, Bar half) {
    return map1(x, [&](const Tensor<cd>& t) { return block(t, k, half); });
}
inline LatticeField fwiden(const LatticeField& x, int k) {
    return map1(x, [&](const Tensor<cd>& t) { return widen(t, k); });
}
inline LatticeField fscale(const LatticeField& x, const cd& s) { return s * x; }
inline LatticeField fmulcon(const LatticeField& a, const LatticeField& b,
                            const std::vector<std::pair<int, int>>& pairs) {
    return map2(a, b, [&](const Tensor<cd>& x, const Tensor<cd>& y) { return mulcon(x, y, pairs); });
}

inline double max_abs(const LatticeField& x) {
    double m = 0;
    for (const auto& v : x.data()) m = std::max(m, std::norm(v));
    return std::sqrt(m);
}

template <class F>
struct FieldTraits;
template <>
struct FieldTraits<LatticeField> {
    using S = cd;
};

namespace detail {

struct Stencil {
    int half;
    std::array<double, 7> w;  // offsets -half..half
};

inline Stencil stencil_for(Scheme s, double h) {
    switch (s) {
        case Scheme::order2:
            return {1, {-0.5 / h, 0.0, 0.5 / h, 0, 0, 0, 0}};
        case Scheme::order4:
            return {2, {1.0 / (12 * h), -8.0 / (12 * h), 0.0, 8.0 / (12 * h), -1.0 / (12 * h), 0, 0}};
        case Scheme::order6:
            return {3,
                    {-1.0 / (60 * h), 9.0 / (60 * h), -45.0 / (60 * h), 0.0, 45.0 / (60 * h),
                     -9.0 / (60 * h), 1.0 / (60 * h)}};
        default:
            throw std::logic_error("stencil_for: spectral has no stencil");
    }
}

void spectral_derivative_lines(std::vector<cd>& out, const std::vector<cd>& in, int extent,
                               std::int64_t nlines, std::int64_t block, std::int64_t stride,
                               std::size_t ncomp);

}  // namespace detail

// d/du_axis of every component, periodic
LatticeField partial_derivative(const LatticeField& f, int axis, Scheme scheme);

// deterministic pairwise sum
double pairwise_sum(std::vector<double>& buf);

// integral of a real scalar density; vol is an optional pointwise volume
// density factor (sqrt det of the real metric), 1 if null
double integrate(const LatticeField& density, const LatticeField* vol = nullptr);

// field from a list of Fourier modes: value(u) = sum_m coeff_m * exp(i<k_m, u>)
LatticeField make_mode_field(const TorusLattice& lat, const std::vector<Slot>& slots,
                             const std::vector<std::pair<std::vector<int>, Tensor<cd>>>& modes);

}  // namespace ahc
