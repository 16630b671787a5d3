#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscmult/fft.hpp"
#include "oscmult/oscillation.hpp"
#include "oscmult/rational.hpp"
#include "oscmult/torus.hpp"

namespace oscmult {

// Triangle transform of the Fejer kernel at scale D: max(0, 1 - |xi|/D).
inline double fejer_transform(double D, double xi) {
    if (D <= 0.0) throw std::invalid_argument("fejer_transform: D must be positive");
    const double t = 1.0 - std::abs(xi) / D;
    return t > 0.0 ? t : 0.0;
}

inline Rational fejer_transform(const Rational& D, const Rational& xi) {
    if (!(Rational(0) < D)) throw std::invalid_argument("fejer_transform: D must be positive");
    const Rational a = xi.abs();
    if (D <= a) return Rational(0);
    return Rational(1) - a / D;
}

// Transform of the normalized box of half-width D; continuous extension 1 at 0.
inline double box_transform(double D, double xi) {
    if (D <= 0.0) throw std::invalid_argument("box_transform: D must be positive");
    const double t = 6.283185307179586476925286766559 * D * xi;
    if (t == 0.0) return 1.0;
    return std::sin(t) / t;
}

// 2*Fejer(2D) - Fejer(D): identically 1 on |xi| <= D, 0 beyond 2D, linear in
// between.
inline double fejer_combination(double D, double xi) {
    return 2.0 * fejer_transform(2.0 * D, xi) - fejer_transform(D, xi);
}

inline Rational fejer_combination(const Rational& D, const Rational& xi) {
    return Rational(2) * fejer_transform(Rational(2) * D, xi) - fejer_transform(D, xi);
}

// The two interleaved dyadic scales from the parity decomposition; both are
// exact dyadic rationals comparable to 2^{-n}.
struct DyadicScalePair {
    int n = 0;

    explicit DyadicScalePair(int n_) : n(n_) {
        if (n_ < 0 || n_ > 40) throw std::invalid_argument("DyadicScalePair: n out of range");
    }

    Rational d1() const { return dyadic_pow2(-2 * ((n + 2) / 2)); }
    Rational d2() const { return dyadic_pow2(-(2 * ((n + 1) / 2) + 1)); }
};

// Exact annulus index of a nonzero frequency k/Q: the unique m with
// 2^{-m-1} <= |k|/Q < 2^{-m}. Negative m covers the outer band.
inline int annulus_level(std::int64_t k, std::int64_t Q) {
    std::int64_t t = k < 0 ? -k : k;
    if (t < 1 || Q < 1) throw std::invalid_argument("annulus_level: need k != 0 and Q >= 1");
    int m = 0;
    if (t < Q) {
        // largest m with t * 2^m < Q, via shift-safe division
        while (m + 1 <= 62 && t <= ((Q - 1) >> (m + 1))) ++m;
    } else {
        int mm = 0;
        while (mm <= 62 && (t >> mm) >= Q) ++mm;
        m = -mm;
    }
    return m;
}

// Per-axis annulus parity on a grid: -1 for the excluded zero bin, else the
// annulus index mod 2. The four tensor masks read off these vectors.
struct ParityMasks {
    TorusGrid2 grid;
    std::vector<std::int8_t> axis1; // indexed by raw u1
    std::vector<std::int8_t> axis2;

    // 1 if the bin belongs to m_{d1 d2}, 0 otherwise; zero bins belong to none.
    int value(int d1, int d2, std::int64_t u1, std::int64_t u2) const {
        const std::int8_t c1 = axis1[static_cast<std::size_t>(u1)];
        const std::int8_t c2 = axis2[static_cast<std::size_t>(u2)];
        if (c1 < 0 || c2 < 0) return 0;
        return (c1 == d1 && c2 == d2) ? 1 : 0;
    }

    bool excluded(std::int64_t u1, std::int64_t u2) const {
        return axis1[static_cast<std::size_t>(u1)] < 0 || axis2[static_cast<std::size_t>(u2)] < 0;
    }
};

inline ParityMasks parity_masks(const TorusGrid2& grid) {
    ParityMasks pm{grid, {}, {}};
    pm.axis1.resize(static_cast<std::size_t>(grid.L1));
    pm.axis2.resize(static_cast<std::size_t>(grid.L2));
    for (std::int64_t u = 0; u < grid.L1; ++u) {
        const std::int64_t k = TorusGrid2::signed_of(u, grid.L1);
        pm.axis1[static_cast<std::size_t>(u)] =
            k == 0 ? std::int8_t{-1}
                   : static_cast<std::int8_t>(((annulus_level(k, grid.Q1) % 2) + 2) % 2);
    }
    for (std::int64_t u = 0; u < grid.L2; ++u) {
        const std::int64_t k = TorusGrid2::signed_of(u, grid.L2);
        pm.axis2[static_cast<std::size_t>(u)] =
            k == 0 ? std::int8_t{-1}
                   : static_cast<std::int8_t>(((annulus_level(k, grid.Q2) % 2) + 2) % 2);
    }
    return pm;
}

// Restriction of f to one parity class (zero bins dropped with the rest).
inline Spectrum2 parity_project(const Spectrum2& f, int d1, int d2) {
    const ParityMasks pm = parity_masks(f.grid);
    Spectrum2 out(f.grid);
    for (std::int64_t u1 = 0; u1 < f.grid.L1; ++u1)
        for (std::int64_t u2 = 0; u2 < f.grid.L2; ++u2) {
            const std::size_t idx = static_cast<std::size_t>(u1 * f.grid.L2 + u2);
            if (pm.value(d1, d2, u1, u2)) out.coeffs[idx] = f.coeffs[idx];
        }
    return out;
}

struct FejerIdentityReport {
    double max_rel_err = 0.0;
    bool multiplier_exact = true; // rational multiplier values match the mask bin-for-bin
    std::int64_t support_bins = 0;
};

// Dual-path evaluation of the box-multiplier / Fejer-combination identity for
// spectra supported on the (even, odd) annulus classes: left side applies the
// centered bin mask, right side multiplies by the tensor Fejer combination.
inline FejerIdentityReport fejer_identity_check(const Spectrum2& f, int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("fejer_identity_check: negative level");
    const TorusGrid2& g = f.grid;
    const ParityMasks pm = parity_masks(g);
    const Rational D1 = DyadicScalePair(n1).d1();
    const Rational D2 = DyadicScalePair(n2).d2();

    FejerIdentityReport rep;
    Spectrum2 lhs(g), rhs(g);
    for (std::int64_t u1 = 0; u1 < g.L1; ++u1) {
        const std::int64_t k1 = TorusGrid2::signed_of(u1, g.L1);
        for (std::int64_t u2 = 0; u2 < g.L2; ++u2) {
            const std::size_t idx = static_cast<std::size_t>(u1 * g.L2 + u2);
            const cplx c = f.coeffs[idx];
            if (c == cplx{}) continue;
            if (!pm.value(0, 1, u1, u2))
                throw std::invalid_argument("fejer_identity_check: support violation");
            ++rep.support_bins;
            const std::int64_t k2 = TorusGrid2::signed_of(u2, g.L2);

            const bool in_mask = (static_cast<__int128>(pow2i(n1 + 1)) * std::llabs(k1) < g.Q1) &&
                                 (static_cast<__int128>(pow2i(n2 + 1)) * std::llabs(k2) < g.Q2);
            if (in_mask) lhs.coeffs[idx] = c;

            const Rational w1 = fejer_combination(D1, g.freq1(k1));
            const Rational w2 = fejer_combination(D2, g.freq2(k2));
            const Rational w = w1 * w2;
            if (w != Rational(in_mask ? 1 : 0)) rep.multiplier_exact = false;
            rhs.coeffs[idx] = c * w.to_double();
        }
    }

    const std::vector<cplx> left = lhs.to_spatial();
    const std::vector<cplx> right = rhs.to_spatial();
    double max_diff = 0.0, max_mag = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(left[i] - right[i]));
        max_mag = std::max({max_mag, std::abs(left[i]), std::abs(right[i])});
    }
    rep.max_rel_err = max_mag > 0.0 ? max_diff / max_mag : 0.0;
    return rep;
}

// Circular box averages by prefix sums; output is sup over the given integer
// half-widths of |mean over 2h+1 samples|.
inline std::vector<double> hl_maximal(std::span<const cplx> g,
                                      std::span<const std::int64_t> halfwidths) {
    const std::int64_t L = static_cast<std::int64_t>(g.size());
    if (L == 0) throw std::invalid_argument("hl_maximal: empty input");
    std::vector<cplx> prefix(static_cast<std::size_t>(L) + 1, cplx{});
    for (std::int64_t j = 0; j < L; ++j)
        prefix[static_cast<std::size_t>(j + 1)] = prefix[static_cast<std::size_t>(j)] +
                                                  g[static_cast<std::size_t>(j)];
    const cplx total = prefix[static_cast<std::size_t>(L)];

    auto range_sum = [&](std::int64_t lo, std::int64_t hi) { // inclusive, may wrap
        cplx s{};
        std::int64_t a = ((lo % L) + L) % L;
        std::int64_t b = ((hi % L) + L) % L;
        if (a <= b) {
            s = prefix[static_cast<std::size_t>(b + 1)] - prefix[static_cast<std::size_t>(a)];
        } else {
            s = (prefix[static_cast<std::size_t>(L)] - prefix[static_cast<std::size_t>(a)]) +
                prefix[static_cast<std::size_t>(b + 1)];
        }
        return s;
    };

    std::vector<double> out(static_cast<std::size_t>(L), 0.0);
    for (std::int64_t h : halfwidths) {
        if (h < 0 || 2 * h + 1 > L)
            throw std::invalid_argument("hl_maximal: half-width incompatible with the torus");
        const double inv = 1.0 / static_cast<double>(2 * h + 1);
        for (std::int64_t j = 0; j < L; ++j) {
            const cplx s = (2 * h + 1 == L) ? total : range_sum(j - h, j + h);
            out[static_cast<std::size_t>(j)] =
                std::max(out[static_cast<std::size_t>(j)], std::abs(s) * inv);
        }
    }
    return out;
}

// Smooth dyadic partition of unity away from zero frequency:
// phi_j(xi) = cos^2(pi/2 * (log2|xi| + j)) on |log2|xi| + j| < 1.
struct LPPartition {
    std::int64_t Q = 1;
    std::int64_t L = 2;
    int j_min = 0;
    int j_max = 0;

    double phi(int j, std::int64_t k) const {
        if (k == 0) return 0.0;
        const double t = std::log2(std::abs(static_cast<double>(k)) /
                                   static_cast<double>(Q)) +
                         static_cast<double>(j);
        if (t <= -1.0 || t >= 1.0) return 0.0;
        const double c = std::cos(1.5707963267948966192313216916398 * t);
        return c * c;
    }
};

inline LPPartition lp_partition(std::int64_t Q, std::int64_t L) {
    if (Q < 1 || L < 2 || (L % 2)) throw std::invalid_argument("lp_partition: bad grid");
    LPPartition p{Q, L, 0, 0};
    const double hi = std::log2(static_cast<double>(L / 2) / static_cast<double>(Q));
    const double lo = std::log2(1.0 / static_cast<double>(Q));
    p.j_min = static_cast<int>(std::floor(-hi)) - 1;
    p.j_max = static_cast<int>(std::ceil(-lo)) + 1;
    return p;
}

// Multiply a 1D spectrum by phi_j and invert (inverse carries 1/L).
inline std::vector<cplx> lp_project(std::span<const cplx> spectrum, const LPPartition& part,
                                    int j) {
    if (j < part.j_min || j > part.j_max)
        throw std::out_of_range("lp_project: octave outside the resolvable range");
    if (static_cast<std::int64_t>(spectrum.size()) != part.L)
        throw std::invalid_argument("lp_project: spectrum length mismatch");
    std::vector<cplx> v(spectrum.begin(), spectrum.end());
    for (std::int64_t u = 0; u < part.L; ++u) {
        const std::int64_t k = TorusGrid2::signed_of(u, part.L);
        v[static_cast<std::size_t>(u)] *= part.phi(j, k);
    }
    fft::transform_1d(v, true);
    const double inv = 1.0 / static_cast<double>(part.L);
    for (cplx& z : v) z *= inv;
    return v;
}

struct DecayReport {
    double sup_ratio = 0.0;
    double arg_scaled_xi = 0.0; // 2^n * xi attaining the sup
};

// Transform-side comparison of the Fejer average and the box average at the
// common spatial scale 2^n: the n-th pair is the triangle of width 2^{-n}
// against sinc(2 pi 2^n xi), and the deviation is measured against
// min(1, |2^n xi|^delta, |2^n xi|^{-delta}).
inline DecayReport decay_check(int n_lo, int n_hi, double delta, double xi_max,
                               std::int64_t points) {
    if (delta <= 0.0 || delta > 1.0) throw std::invalid_argument("decay_check: delta in (0,1]");
    if (n_lo < 0 || n_hi < n_lo || points < 1 || xi_max <= 0.0)
        throw std::invalid_argument("decay_check: bad sweep parameters");
    DecayReport rep;
    for (std::int64_t i = 1; i <= points; ++i) {
        const double xi = xi_max * static_cast<double>(i) / static_cast<double>(points);
        for (int n = n_lo; n <= n_hi; ++n) {
            const double u = std::ldexp(xi, n); // 2^n * xi
            const double tri = u < 1.0 ? 1.0 - u : 0.0;
            const double t = 6.283185307179586476925286766559 * u;
            const double box = std::sin(t) / t;
            const double denom = std::min({1.0, std::pow(u, delta), std::pow(u, -delta)});
            const double ratio = std::abs(tri - box) / denom;
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.arg_scaled_xi = u;
            }
        }
    }
    return rep;
}

struct OscFejerReport {
    double ratio = 0.0;   // ||osc||_2 / ||g||_2
    double max_point = 0.0;
};

// One-parameter oscillation of the Fejer convolution family u_n = sigma * g
// at spatial scales 2^n (triangle spectral weights of width 2^{-n} * Q bins).
inline OscFejerReport osc_fejer_1d(std::span<const cplx> g, std::int64_t Q,
                                   const LacunarySeq& N) {
    const std::int64_t L = static_cast<std::int64_t>(g.size());
    if (L < 2 || (L % 2)) throw std::invalid_argument("osc_fejer_1d: even sample count needed");
    if (Q < 1) throw std::invalid_argument("osc_fejer_1d: bad circumference");
    if (N.back() > 40) throw std::out_of_range("osc_fejer_1d: window exceeds scale range");

    std::vector<cplx> G(g.begin(), g.end());
    fft::transform_1d(G, false);

    const int n_hi = static_cast<int>(N.back());
    std::vector<std::vector<cplx>> family(static_cast<std::size_t>(n_hi) + 1);
    for (int n = 0; n <= n_hi; ++n) {
        std::vector<cplx> v(G);
        for (std::int64_t u = 0; u < L; ++u) {
            const std::int64_t k = TorusGrid2::signed_of(u, L);
            const double w =
                1.0 - std::ldexp(std::abs(static_cast<double>(k)), n) / static_cast<double>(Q);
            v[static_cast<std::size_t>(u)] *= w > 0.0 ? w : 0.0;
        }
        fft::transform_1d(v, true);
        const double inv = 1.0 / static_cast<double>(L);
        for (cplx& z : v) z *= inv;
        family[static_cast<std::size_t>(n)] = std::move(v);
    }

    OscFejerReport rep;
    double acc_norm2 = 0.0;
    for (std::int64_t p = 0; p < L; ++p) {
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < N.terms.size(); ++k) {
            const cplx anchor = family[static_cast<std::size_t>(N.terms[k])]
                                      [static_cast<std::size_t>(p)];
            double win = 0.0;
            for (std::int64_t n = N.terms[k]; n <= N.terms[k + 1]; ++n)
                win = std::max(win, std::abs(family[static_cast<std::size_t>(n)]
                                                   [static_cast<std::size_t>(p)] -
                                             anchor));
            acc += win * win;
        }
        const double osc = std::sqrt(acc);
        rep.max_point = std::max(rep.max_point, osc);
        acc_norm2 += acc;
    }
    const double gn = l2_norm(g);
    rep.ratio = gn > 0.0 ? std::sqrt(acc_norm2) / gn : 0.0;
    return rep;
}

} // namespace oscmult
