#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscmult/fft.hpp"
#include "oscmult/rational.hpp"

namespace oscmult {

using cplx = std::complex<double>;

// Discretized torus [0,Q1) x [0,Q2) sampled L1 x L2 times. Frequency bins on
// axis r sit at k/Q_r for k in [-L_r/2, L_r/2), so every rational with
// denominator Q_r inside the band lies exactly on a bin.
struct TorusGrid2 {
    std::int64_t Q1 = 1, Q2 = 1;
    std::int64_t L1 = 2, L2 = 2;

    TorusGrid2(std::int64_t q1, std::int64_t q2, std::int64_t l1, std::int64_t l2)
        : Q1(q1), Q2(q2), L1(l1), L2(l2) {
        if (Q1 < 1 || Q2 < 1) throw std::invalid_argument("TorusGrid2: circumference must be >= 1");
        if (L1 < 2 || L2 < 2 || (L1 % 2) || (L2 % 2))
            throw std::invalid_argument("TorusGrid2: sample counts must be positive even");
    }

    std::size_t size() const { return static_cast<std::size_t>(L1) * static_cast<std::size_t>(L2); }

    bool in_band1(std::int64_t k) const { return k >= -L1 / 2 && k < L1 / 2; }
    bool in_band2(std::int64_t k) const { return k >= -L2 / 2 && k < L2 / 2; }

    // Raw storage uses the usual transform order u = k mod L.
    static std::int64_t raw_of(std::int64_t k, std::int64_t L) { return k >= 0 ? k : k + L; }
    static std::int64_t signed_of(std::int64_t u, std::int64_t L) { return u < L / 2 ? u : u - L; }

    std::size_t index_of(std::int64_t k1, std::int64_t k2) const {
        if (!in_band1(k1) || !in_band2(k2)) throw std::out_of_range("TorusGrid2: bin out of band");
        return static_cast<std::size_t>(raw_of(k1, L1) * L2 + raw_of(k2, L2));
    }

    Rational freq1(std::int64_t k) const { return Rational(k, Q1); }
    Rational freq2(std::int64_t k) const { return Rational(k, Q2); }

    friend bool operator==(const TorusGrid2& a, const TorusGrid2& b) {
        return a.Q1 == b.Q1 && a.Q2 == b.Q2 && a.L1 == b.L1 && a.L2 == b.L2;
    }
};

inline double l2_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// Frequency-domain array on a grid. Forward transform is unnormalized and the
// inverse carries 1/(L1*L2); Parseval reads
//   sum |coeffs|^2 = L1*L2 * sum |samples|^2.
struct Spectrum2 {
    TorusGrid2 grid;
    std::vector<cplx> coeffs;

    explicit Spectrum2(const TorusGrid2& g) : grid(g), coeffs(g.size(), cplx{}) {}

    cplx& at(std::int64_t k1, std::int64_t k2) { return coeffs[grid.index_of(k1, k2)]; }
    const cplx& at(std::int64_t k1, std::int64_t k2) const { return coeffs[grid.index_of(k1, k2)]; }

    std::vector<cplx> to_spatial() const {
        std::vector<cplx> out = coeffs;
        fft::transform_2d(out, static_cast<std::size_t>(grid.L1),
                          static_cast<std::size_t>(grid.L2), true);
        const double scale = 1.0 / static_cast<double>(grid.size());
        for (cplx& z : out) z *= scale;
        return out;
    }

    static Spectrum2 from_spatial(const TorusGrid2& g, std::span<const cplx> samples) {
        if (samples.size() != g.size())
            throw std::invalid_argument("Spectrum2::from_spatial: shape mismatch");
        Spectrum2 s(g);
        s.coeffs.assign(samples.begin(), samples.end());
        fft::transform_2d(s.coeffs, static_cast<std::size_t>(g.L1),
                          static_cast<std::size_t>(g.L2), false);
        return s;
    }

    double spatial_norm() const {
        // Parseval shortcut; avoids a transform.
        return l2_norm(coeffs) / std::sqrt(static_cast<double>(grid.size()));
    }
};

// CSV rows are "k1,k2,re,im" under a fixed header, signed bins ascending.
inline void spectrum_to_csv(const Spectrum2& s, std::ostream& os, bool include_zeros = false) {
    os << "k1,k2,re,im\n";
    char buf[128];
    for (std::int64_t k1 = -s.grid.L1 / 2; k1 < s.grid.L1 / 2; ++k1)
        for (std::int64_t k2 = -s.grid.L2 / 2; k2 < s.grid.L2 / 2; ++k2) {
            const cplx z = s.at(k1, k2);
            if (!include_zeros && z == cplx{}) continue;
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g\n",
                          static_cast<long long>(k1), static_cast<long long>(k2), z.real(),
                          z.imag());
            os << buf;
        }
}

inline Spectrum2 spectrum_from_csv(const TorusGrid2& g, std::istream& is) {
    Spectrum2 s(g);
    std::string line;
    if (!std::getline(is, line) || line.rfind("k1,k2,re,im", 0) != 0)
        throw std::runtime_error("spectrum_from_csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::int64_t k1, k2;
        double re, im;
        char c1, c2, c3;
        if (!(row >> k1 >> c1 >> k2 >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' ||
            c3 != ',')
            throw std::runtime_error("spectrum_from_csv: bad row: " + line);
        s.at(k1, k2) = cplx(re, im);
    }
    return s;
}

inline constexpr char kSpectrumMagic[8] = {'O', 'S', 'M', 'S', 'P', 'E', 'C', '1'};

inline void spectrum_to_binary(const Spectrum2& s, std::ostream& os) {
    os.write(kSpectrumMagic, 8);
    const std::int64_t dims[4] = {s.grid.Q1, s.grid.Q2, s.grid.L1, s.grid.L2};
    os.write(reinterpret_cast<const char*>(dims), sizeof dims);
    os.write(reinterpret_cast<const char*>(s.coeffs.data()),
             static_cast<std::streamsize>(s.coeffs.size() * sizeof(cplx)));
}

inline Spectrum2 spectrum_from_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::string(magic, 8) != std::string(kSpectrumMagic, 8))
        throw std::runtime_error("spectrum_from_binary: bad magic");
    std::int64_t dims[4];
    is.read(reinterpret_cast<char*>(dims), sizeof dims);
    if (!is) throw std::runtime_error("spectrum_from_binary: truncated header");
    Spectrum2 s(TorusGrid2(dims[0], dims[1], dims[2], dims[3]));
    is.read(reinterpret_cast<char*>(s.coeffs.data()),
            static_cast<std::streamsize>(s.coeffs.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("spectrum_from_binary: truncated payload");
    return s;
}

} // namespace oscmult
