#include "ahc/lattice.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <unordered_map>

namespace ahc {

namespace detail {

struct FftPlans {
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex *in = nullptr, *out = nullptr;
};

// one cached plan pair per line length; execution uses new-array interface
// with per-thread fftw_malloc'd buffers of the same size/alignment class
inline FftPlans& plans_for(int extent) {
    static std::unordered_map<int, FftPlans> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(extent);
    if (it != cache.end()) return it->second;
    FftPlans p;
    p.in = fftw_alloc_complex(std::size_t(extent));
    p.out = fftw_alloc_complex(std::size_t(extent));
    p.fwd = fftw_plan_dft_1d(extent, p.in, p.out, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_1d(extent, p.in, p.out, FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache.emplace(extent, p).first->second;
}

void spectral_derivative_lines(std::vector<cd>& out, const std::vector<cd>& in, int extent,
                               std::int64_t nlines, std::int64_t block, std::int64_t stride,
                               std::size_t ncomp) {
    FftPlans& pl = plans_for(extent);
    const std::int64_t total = nlines * std::int64_t(ncomp);
    par::for_n(total, [&](std::int64_t job) {
        const std::int64_t line = job / std::int64_t(ncomp);
        const std::size_t c = std::size_t(job % std::int64_t(ncomp));
        const std::int64_t b = line / block;   // index over axes before this one
        const std::int64_t o = line % block;   // index over axes after this one
        const std::int64_t base = b * std::int64_t(extent) * block + o;

        fftw_complex* buf_in;
        fftw_complex* buf_out;
#ifdef _OPENMP
        thread_local fftw_complex* tin = nullptr;
        thread_local fftw_complex* tout = nullptr;
        thread_local int tsize = 0;
        if (tsize != extent) {
            if (tin) fftw_free(tin);
            if (tout) fftw_free(tout);
            tin = fftw_alloc_complex(std::size_t(extent));
            tout = fftw_alloc_complex(std::size_t(extent));
            tsize = extent;
        }
        buf_in = tin;
        buf_out = tout;
#else
        buf_in = pl.in;
        buf_out = pl.out;
#endif
        for (int k = 0; k < extent; ++k) {
            cd z = in[std::size_t(base + k * stride) * ncomp + c];
            buf_in[k][0] = z.real();
            buf_in[k][1] = z.imag();
        }
        fftw_execute_dft(pl.fwd, buf_in, buf_out);
        // multiply by i*k; the Nyquist mode derivative is set to zero
        for (int k = 0; k < extent; ++k) {
            int wav = k <= extent / 2 ? k : k - extent;
            if (k == extent / 2) wav = 0;
            const double re = buf_out[k][0], im = buf_out[k][1];
            buf_in[k][0] = -double(wav) * im;
            buf_in[k][1] = double(wav) * re;
        }
        fftw_execute_dft(pl.bwd, buf_in, buf_out);
        const double scale = 1.0 / extent;
        for (int k = 0; k < extent; ++k)
            out[std::size_t(base + k * stride) * ncomp + c] =
                cd(buf_out[k][0] * scale, buf_out[k][1] * scale);
    });
}

}  // namespace detail

LatticeField partial_derivative(const LatticeField& f, int axis, Scheme scheme) {
    const TorusLattice& lat = f.lattice();
    if (axis < 0 || axis >= lat.dim()) throw std::invalid_argument("partial_derivative: bad axis");
    LatticeField out(lat, f.proto().slots());
    const int E = lat.extent;
    const std::int64_t stride = lat.stride(axis);
    const std::int64_t block = stride;  // points per line position after the axis
    const std::int64_t nlines = lat.npoints() / E;
    const std::size_t nc = f.ncomp();

    if (scheme == Scheme::spectral) {
        detail::spectral_derivative_lines(out.data(), f.data(), E, nlines, block, stride, nc);
        return out;
    }

    const detail::Stencil st = detail::stencil_for(scheme, lat.spacing());
    par::for_n(nlines, [&](std::int64_t line) {
        const std::int64_t b = line / block;
        const std::int64_t o = line % block;
        const std::int64_t base = b * std::int64_t(E) * block + o;
        for (int k = 0; k < E; ++k) {
            cd* op = out.data().data() + std::size_t(base + k * stride) * nc;
            for (int s = -st.half; s <= st.half; ++s) {
                const double w = st.w[std::size_t(s + st.half)];
                if (w == 0.0) continue;
                int kk = (k + s) % E;
                if (kk < 0) kk += E;
                const cd* ip = f.data().data() + std::size_t(base + kk * stride) * nc;
                for (std::size_t c = 0; c < nc; ++c) op[c] += w * ip[c];
            }
        }
    });
    return out;
}

double pairwise_sum(std::vector<double>& buf) {
    std::size_t m = buf.size();
    if (m == 0) return 0.0;
    while (m > 1) {
        const std::size_t half = m / 2;
        for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
        if (m % 2) {
            buf[half] = buf[m - 1];
            m = half + 1;
        } else {
            m = half;
        }
    }
    return buf[0];
}

double integrate(const LatticeField& density, const LatticeField* vol) {
    if (density.rank() != 0) throw std::invalid_argument("integrate: density must be scalar");
    if (vol && vol->rank() != 0) throw std::invalid_argument("integrate: vol must be scalar");
    const std::int64_t np = density.npoints();
    std::vector<double> buf(static_cast<std::size_t>(np), 0.0);
    par::for_n(np, [&](std::int64_t p) {
        double v = density.data()[std::size_t(p)].real();
        if (vol) v *= vol->data()[std::size_t(p)].real();
        buf[std::size_t(p)] = v;
    });
    return pairwise_sum(buf) * density.lattice().cell_volume();
}

LatticeField make_mode_field(const TorusLattice& lat, const std::vector<Slot>& slots,
                             const std::vector<std::pair<std::vector<int>, Tensor<cd>>>& modes) {
    LatticeField out(lat, slots);
    for (const auto& [freq, coeff] : modes)
        if (int(freq.size()) != lat.dim() || !(coeff.slots() == slots))
            throw std::invalid_argument("make_mode_field: inconsistent mode");
    par::for_n(lat.npoints(), [&](std::int64_t p) {
        std::vector<int> c;
        lat.coords(p, c);
        cd* dst = out.point(p);
        for (const auto& [freq, coeff] : modes) {
            double phase = 0;
            for (int k = 0; k < lat.dim(); ++k) phase += freq[std::size_t(k)] * lat.x(c[std::size_t(k)]);
            const cd e = std::polar(1.0, phase);
            for (std::size_t q = 0; q < coeff.size(); ++q) dst[q] += e * coeff.data()[q];
        }
    });
    return out;
}

}  // namespace ahc
