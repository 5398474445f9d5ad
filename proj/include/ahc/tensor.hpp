#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahc/num.hpp"

namespace ahc {

enum class Var : std::uint8_t { up, down };
// Index range of a slot: plain/bar slots run over n values of fixed type,
// full slots run over all 2n frame directions (0..n-1 plain, n..2n-1 barred).
enum class Bar : std::uint8_t { plain, bar, full };

struct Slot {
    Var v;
    Bar b;
    friend bool operator==(const Slot&, const Slot&) = default;
};

inline constexpr Slot up_p{Var::up, Bar::plain};
inline constexpr Slot up_b{Var::up, Bar::bar};
inline constexpr Slot dn_p{Var::down, Bar::plain};
inline constexpr Slot dn_b{Var::down, Bar::bar};
inline constexpr Slot up_f{Var::up, Bar::full};
inline constexpr Slot dn_f{Var::down, Bar::full};

inline std::string slot_name(const Slot& s) {
    std::string r = s.v == Var::up ? "up" : "down";
    r += s.b == Bar::plain ? "-plain" : s.b == Bar::bar ? "-bar" : "-full";
    return r;
}

inline Slot conj_slot(const Slot& s) {
    if (s.b == Bar::full) return s;
    return {s.v, s.b == Bar::plain ? Bar::bar : Bar::plain};
}

// Dense complex multi-index tensor in a fixed unitary frame. n is the frame
// rank; every slot has extent n (plain/bar) or 2n (full). Row-major storage.
template <class S>
class Tensor {
public:
    Tensor() = default;
    Tensor(int n, std::vector<Slot> slots) : n_(n), slots_(std::move(slots)) {
        if (n_ <= 0) throw std::invalid_argument("Tensor: n must be positive");
        std::size_t sz = 1;
        for (std::size_t k = 0; k < slots_.size(); ++k) sz *= extent(int(k));
        a_.assign(sz, ring<S>::zero());
    }

    int n() const { return n_; }
    int rank() const { return int(slots_.size()); }
    const std::vector<Slot>& slots() const { return slots_; }
    const Slot& slot(int k) const { return slots_[std::size_t(k)]; }
    int extent(int k) const { return slots_[std::size_t(k)].b == Bar::full ? 2 * n_ : n_; }
    std::size_t size() const { return a_.size(); }
    const std::vector<S>& data() const { return a_; }
    std::vector<S>& data() { return a_; }

    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t p = 0;
        for (int k = 0; k < rank(); ++k) p = p * std::size_t(extent(k)) + std::size_t(idx[std::size_t(k)]);
        return p;
    }
    S& at(const std::vector<int>& idx) { return a_[flat(idx)]; }
    const S& at(const std::vector<int>& idx) const { return a_[flat(idx)]; }
    S& at(std::initializer_list<int> idx) { return at(std::vector<int>(idx)); }
    const S& at(std::initializer_list<int> idx) const { return at(std::vector<int>(idx)); }

    // odometer over all multi-indices; f(idx, flat)
    template <class F>
    void visit(F&& f) const {
        std::vector<int> idx(std::size_t(rank()), 0);
        for (std::size_t p = 0; p < a_.size(); ++p) {
            f(idx, p);
            for (int k = rank() - 1; k >= 0; --k) {
                if (++idx[std::size_t(k)] < extent(k)) break;
                idx[std::size_t(k)] = 0;
            }
        }
    }

    Tensor& operator+=(const Tensor& o) {
        check_same_sig(o, "+=");
        for (std::size_t p = 0; p < a_.size(); ++p) a_[p] += o.a_[p];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        check_same_sig(o, "-=");
        for (std::size_t p = 0; p < a_.size(); ++p) a_[p] -= o.a_[p];
        return *this;
    }
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(const S& c, Tensor t) {
        for (auto& v : t.a_) v = c * v;
        return t;
    }

    void check_same_sig(const Tensor& o, const char* op) const {
        if (n_ != o.n_ || slots_ != o.slots_)
            throw std::invalid_argument(std::string("Tensor: signature mismatch in ") + op);
    }

private:
    int n_ = 0;
    std::vector<Slot> slots_;
    std::vector<S> a_;
};

// mirrored index for conjugation: plain/bar slots keep the numeric index,
// full slots swap halves
inline int conj_index(int i, int n, Bar b) {
    if (b != Bar::full) return i;
    return i < n ? i + n : i - n;
}

template <class S>
Tensor<S> conj_t(const Tensor<S>& t) {
    std::vector<Slot> sl;
    sl.reserve(std::size_t(t.rank()));
    for (const auto& s : t.slots()) sl.push_back(conj_slot(s));
    Tensor<S> r(t.n(), sl);
    std::vector<int> jdx(std::size_t(t.rank()));
    t.visit([&](const std::vector<int>& idx, std::size_t p) {
        for (int k = 0; k < t.rank(); ++k)
            jdx[std::size_t(k)] = conj_index(idx[std::size_t(k)], t.n(), t.slot(k).b);
        r.at(jdx) = ring<S>::conj(t.data()[p]);
    });
    return r;
}

// out slot i carries in slot perm[i]
template <class S>
Tensor<S> permuted(const Tensor<S>& t, const std::vector<int>& perm) {
    if (int(perm.size()) != t.rank()) throw std::invalid_argument("permuted: bad perm size");
    std::vector<Slot> sl;
    for (int k : perm) sl.push_back(t.slot(k));
    Tensor<S> r(t.n(), sl);
    std::vector<int> jdx(std::size_t(t.rank()));
    r.visit([&](const std::vector<int>& idx, std::size_t p) {
        for (int k = 0; k < t.rank(); ++k) jdx[std::size_t(perm[std::size_t(k)])] = idx[std::size_t(k)];
        r.data()[p] = t.at(jdx);
    });
    return r;
}

inline bool contractible(const Slot& a, const Slot& b) {
    if (a.v == b.v) return false;
    return a.b == b.b;  // plain-plain, bar-bar or full-full
}

// trace over slots ka,kb (opposite variance, equal bar kind)
template <class S>
Tensor<S> contract(const Tensor<S>& t, int ka, int kb) {
    if (ka == kb || ka < 0 || kb < 0 || ka >= t.rank() || kb >= t.rank())
        throw std::invalid_argument("contract: bad slot indices");
    if (!contractible(t.slot(ka), t.slot(kb)))
        throw std::invalid_argument("contract: slots " + slot_name(t.slot(ka)) + " and " +
                                    slot_name(t.slot(kb)) + " are not contractible");
    std::vector<Slot> sl;
    std::vector<int> keep;
    for (int k = 0; k < t.rank(); ++k)
        if (k != ka && k != kb) {
            sl.push_back(t.slot(k));
            keep.push_back(k);
        }
    Tensor<S> r(t.n(), sl);
    const int ext = t.extent(ka);
    std::vector<int> jdx(std::size_t(t.rank()));
    r.visit([&](const std::vector<int>& idx, std::size_t p) {
        S acc = ring<S>::zero();
        for (std::size_t k = 0; k < keep.size(); ++k) jdx[std::size_t(keep[k])] = idx[k];
        for (int m = 0; m < ext; ++m) {
            jdx[std::size_t(ka)] = m;
            jdx[std::size_t(kb)] = m;
            acc += t.at(jdx);
        }
        r.data()[p] = acc;
    });
    return r;
}

// general contracted product: output slots are the remaining A slots followed
// by the remaining B slots
template <class S>
Tensor<S> mulcon(const Tensor<S>& A, const Tensor<S>& B,
                 const std::vector<std::pair<int, int>>& pairs) {
    if (A.n() != B.n()) throw std::invalid_argument("mulcon: rank mismatch");
    std::vector<bool> ca(std::size_t(A.rank()), false), cb(std::size_t(B.rank()), false);
    for (auto [ia, ib] : pairs) {
        if (ia < 0 || ia >= A.rank() || ib < 0 || ib >= B.rank() || ca[std::size_t(ia)] || cb[std::size_t(ib)])
            throw std::invalid_argument("mulcon: bad contraction pair");
        if (!contractible(A.slot(ia), B.slot(ib)))
            throw std::invalid_argument("mulcon: slots " + slot_name(A.slot(ia)) + " and " +
                                        slot_name(B.slot(ib)) + " are not contractible");
        ca[std::size_t(ia)] = cb[std::size_t(ib)] = true;
    }
    std::vector<int> fa, fb;
    std::vector<Slot> sl;
    for (int k = 0; k < A.rank(); ++k)
        if (!ca[std::size_t(k)]) {
            fa.push_back(k);
            sl.push_back(A.slot(k));
        }
    for (int k = 0; k < B.rank(); ++k)
        if (!cb[std::size_t(k)]) {
            fb.push_back(k);
            sl.push_back(B.slot(k));
        }
    Tensor<S> r(A.n(), sl);

    std::vector<int> exts;
    for (auto [ia, ib] : pairs) exts.push_back(A.extent(ia));
    std::vector<int> ja(std::size_t(A.rank())), jb(std::size_t(B.rank()));
    std::vector<int> m(pairs.size(), 0);
    r.visit([&](const std::vector<int>& idx, std::size_t p) {
        for (std::size_t k = 0; k < fa.size(); ++k) ja[std::size_t(fa[k])] = idx[k];
        for (std::size_t k = 0; k < fb.size(); ++k) jb[std::size_t(fb[k])] = idx[fa.size() + k];
        S acc = ring<S>::zero();
        std::fill(m.begin(), m.end(), 0);
        while (true) {
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                ja[std::size_t(pairs[k].first)] = m[k];
                jb[std::size_t(pairs[k].second)] = m[k];
            }
            acc += A.at(ja) * B.at(jb);
            std::size_t k = pairs.size();
            while (k > 0) {
                --k;
                if (++m[k] < exts[k]) break;
                m[k] = 0;
                if (k == 0) goto done;
            }
            if (pairs.empty()) break;
        }
    done:
        r.data()[p] = acc;
    });
    return r;
}

namespace detail {

inline void all_perms(int p, std::vector<std::pair<std::vector<int>, int>>& out) {
    std::vector<int> pi(static_cast<std::size_t>(p), 0);
    std::iota(pi.begin(), pi.end(), 0);
    // enumerate with explicit parity computation (p is tiny)
    do {
        int sign = 1;
        std::vector<bool> seen(std::size_t(p), false);
        for (int k = 0; k < p; ++k) {
            if (seen[std::size_t(k)]) continue;
            int len = 0, j = k;
            while (!seen[std::size_t(j)]) {
                seen[std::size_t(j)] = true;
                j = pi[std::size_t(j)];
                ++len;
            }
            if (len % 2 == 0) sign = -sign;
        }
        out.emplace_back(pi, sign);
    } while (std::next_permutation(pi.begin(), pi.end()));
}

// sum of sign^use_sign * t with listed slots permuted; optional 1/count weight
template <class S>
Tensor<S> perm_sum(const Tensor<S>& t, const std::vector<int>& ks,
                   const std::vector<std::pair<std::vector<int>, int>>& perms,
                   bool use_sign, bool weight) {
    for (std::size_t k = 1; k < ks.size(); ++k)
        if (!(t.slot(ks[k]) == t.slot(ks[0])))
            throw std::invalid_argument("slot signature mismatch over " + slot_name(t.slot(ks[k])) +
                                        " vs " + slot_name(t.slot(ks[0])));
    Tensor<S> r(t.n(), t.slots());
    std::vector<int> jdx(std::size_t(t.rank()));
    for (const auto& [pi, sign] : perms) {
        r.visit([&](const std::vector<int>& idx, std::size_t p) {
            jdx = idx;
            for (std::size_t k = 0; k < ks.size(); ++k)
                jdx[std::size_t(ks[k])] = idx[std::size_t(ks[std::size_t(pi[k])])];
            if (use_sign && sign < 0)
                r.data()[p] -= t.at(jdx);
            else
                r.data()[p] += t.at(jdx);
        });
    }
    if (weight) {
        S w = ring<S>::from_ratio(1, (long long)perms.size());
        for (auto& v : r.data()) v = w * v;
    }
    return r;
}

}  // namespace detail

// weight-one antisymmetrization over the listed slots (includes 1/p!)
template <class S>
Tensor<S> alternate(const Tensor<S>& t, const std::vector<int>& ks) {
    std::vector<std::pair<std::vector<int>, int>> perms;
    detail::all_perms(int(ks.size()), perms);
    return detail::perm_sum(t, ks, perms, true, true);
}

// weight-one symmetrization over the listed slots
template <class S>
Tensor<S> symmetrize(const Tensor<S>& t, const std::vector<int>& ks) {
    std::vector<std::pair<std::vector<int>, int>> perms;
    detail::all_perms(int(ks.size()), perms);
    return detail::perm_sum(t, ks, perms, false, true);
}

// unweighted sum of the p cyclic permutations of the listed slots
template <class S>
Tensor<S> cyclic(const Tensor<S>& t, const std::vector<int>& ks) {
    std::vector<std::pair<std::vector<int>, int>> perms;
    std::vector<int> pi(ks.size());
    std::iota(pi.begin(), pi.end(), 0);
    for (std::size_t s = 0; s < ks.size(); ++s) {
        perms.emplace_back(pi, 1);
        std::rotate(pi.begin(), pi.begin() + 1, pi.end());
    }
    return detail::perm_sum(t, ks, perms, false, false);
}

// restrict a full slot to its plain or barred half
template <class S>
Tensor<S> block(const Tensor<S>& t, int k, Bar half) {
    if (t.slot(k).b != Bar::full || half == Bar::full)
        throw std::invalid_argument("block: slot is not full / half is not plain|bar");
    std::vector<Slot> sl = t.slots();
    sl[std::size_t(k)] = {t.slot(k).v, half};
    Tensor<S> r(t.n(), sl);
    const int off = half == Bar::bar ? t.n() : 0;
    std::vector<int> jdx(std::size_t(t.rank()));
    r.visit([&](const std::vector<int>& idx, std::size_t p) {
        jdx = idx;
        jdx[std::size_t(k)] += off;
        r.data()[p] = t.at(jdx);
    });
    return r;
}

// embed a plain/bar slot into a full slot (the other half is zero)
template <class S>
Tensor<S> widen(const Tensor<S>& t, int k) {
    if (t.slot(k).b == Bar::full) throw std::invalid_argument("widen: slot already full");
    const int off = t.slot(k).b == Bar::bar ? t.n() : 0;
    std::vector<Slot> sl = t.slots();
    sl[std::size_t(k)] = {t.slot(k).v, Bar::full};
    Tensor<S> r(t.n(), sl);
    std::vector<int> jdx(std::size_t(t.rank()));
    t.visit([&](const std::vector<int>& idx, std::size_t p) {
        jdx = idx;
        jdx[std::size_t(k)] += off;
        r.at(jdx) = t.data()[p];
    });
    return r;
}

template <class S>
double max_abs2(const Tensor<S>& t) {
    double m = 0;
    for (const auto& v : t.data()) m = std::max(m, ring<S>::abs2(v));
    return m;
}

template <class S>
double max_abs(const Tensor<S>& t) {
    return std::sqrt(max_abs2(t));
}

template <class S>
bool is_exactly_zero(const Tensor<S>& t) {
    for (const auto& v : t.data())
        if (!ring<S>::is_zero(v)) return false;
    return true;
}

}  // namespace ahc
