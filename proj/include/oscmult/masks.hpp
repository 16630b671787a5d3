#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "oscmult/frequency_set.hpp"
#include "oscmult/torus.hpp"

namespace oscmult {

inline int ceil_log2(std::int64_t v) {
    if (v < 1) throw std::invalid_argument("ceil_log2: positive input required");
    int e = 0;
    while (pow2i(e) < v) ++e;
    return e;
}

// Rectangle-multiplier family over a separated frequency set: the (n1,n2)
// mask selects bins within the open box of half-widths 2^{-n_r-1} around some
// set point. Membership is the exact integer test 2^{n+1} * d < Q on the
// circular bin distance d; nothing is stored per bin.
//
// Masks shrink as n grows and freeze once the box is narrower than a bin, so
// every level past n_max_r = ceil(log2 Q_r) + 1 repeats the previous one;
// the family is finite for the discretized operator.
struct MaskFamily {
    TorusGrid2 grid;
    FrequencySet fset;
    int n1_max = 1;
    int n2_max = 1;

    static std::int64_t circ_dist(std::int64_t a, std::int64_t b, std::int64_t L) {
        std::int64_t d = (a - b) % L;
        if (d < 0) d += L;
        return d <= L / 2 ? d : L - d;
    }

    // Largest circular distance admitted at level n (open interval).
    std::int64_t halfwidth1(int n) const { return (grid.Q1 - 1) / pow2i(n + 1); }
    std::int64_t halfwidth2(int n) const { return (grid.Q2 - 1) / pow2i(n + 1); }

    bool member1(int n, std::int64_t k, const FrequencySet::Point& p) const {
        return circ_dist(k, p.n1, grid.L1) <= halfwidth1(n);
    }
    bool member2(int n, std::int64_t k, const FrequencySet::Point& p) const {
        return circ_dist(k, p.n2, grid.L2) <= halfwidth2(n);
    }

    bool contains(int n1, int n2, std::int64_t k1, std::int64_t k2) const {
        check_levels(n1, n2);
        for (const auto& p : fset.points)
            if (member1(n1, k1, p) && member2(n2, k2, p)) return true;
        return false;
    }

    void check_levels(int n1, int n2) const {
        if (n1 < 0 || n2 < 0 || n1 > n1_max || n2 > n2_max)
            throw std::out_of_range("MaskFamily: level out of range");
    }
};

inline MaskFamily build_masks(const TorusGrid2& grid, const FrequencySet& fset) {
    if (grid.Q1 != fset.Q1 || grid.Q2 != fset.Q2)
        throw std::invalid_argument("build_masks: grid and set denominators differ");
    if (grid.L1 < 2 * grid.Q1 || grid.L2 < 2 * grid.Q2)
        throw std::invalid_argument("build_masks: grid too coarse for unit-width boxes");
    for (const auto& p : fset.points)
        if (!grid.in_band1(p.n1) || !grid.in_band2(p.n2))
            throw std::invalid_argument("build_masks: frequency off the grid band");
    // Points separated on the line may still collide around the circle.
    for (std::size_t i = 0; i < fset.points.size(); ++i)
        for (std::size_t j = i + 1; j < fset.points.size(); ++j) {
            const std::int64_t d1 =
                MaskFamily::circ_dist(fset.points[i].n1, fset.points[j].n1, grid.L1);
            const std::int64_t d2 =
                MaskFamily::circ_dist(fset.points[i].n2, fset.points[j].n2, grid.L2);
            if (d1 < grid.Q1 && d2 < grid.Q2)
                throw std::invalid_argument("build_masks: circular separation violated");
        }
    MaskFamily m{grid, fset, ceil_log2(grid.Q1) + 1, ceil_log2(grid.Q2) + 1};
    return m;
}

// Copy of f with everything outside mask(n1, n2) zeroed. Set points own
// disjoint windows (separation), so a plain scatter is exact.
inline Spectrum2 masked_spectrum(const Spectrum2& f, const MaskFamily& m, int n1, int n2) {
    m.check_levels(n1, n2);
    if (!(f.grid == m.grid)) throw std::invalid_argument("masked_spectrum: grid mismatch");
    Spectrum2 out(f.grid);
    const std::int64_t h1 = m.halfwidth1(n1), h2 = m.halfwidth2(n2);
    const std::int64_t L1 = f.grid.L1, L2 = f.grid.L2;
    for (const auto& p : m.fset.points) {
        const std::int64_t u1c = TorusGrid2::raw_of(p.n1, L1);
        const std::int64_t u2c = TorusGrid2::raw_of(p.n2, L2);
        for (std::int64_t d1 = -h1; d1 <= h1; ++d1) {
            const std::int64_t u1 = (u1c + d1 % L1 + L1) % L1;
            for (std::int64_t d2 = -h2; d2 <= h2; ++d2) {
                const std::int64_t u2 = (u2c + d2 % L2 + L2) % L2;
                const std::size_t idx = static_cast<std::size_t>(u1 * L2 + u2);
                out.coeffs[idx] = f.coeffs[idx];
            }
        }
    }
    return out;
}

// Inspectable dump: header line, then L1 rows of L2 '0'/'1' characters in raw
// storage order.
inline void mask_to_text(const MaskFamily& m, int n1, int n2, std::ostream& os) {
    m.check_levels(n1, n2);
    os << "mask " << n1 << ' ' << n2 << ' ' << m.grid.L1 << ' ' << m.grid.L2 << '\n';
    for (std::int64_t u1 = 0; u1 < m.grid.L1; ++u1) {
        std::string row(static_cast<std::size_t>(m.grid.L2), '0');
        const std::int64_t k1 = TorusGrid2::signed_of(u1, m.grid.L1);
        for (std::int64_t u2 = 0; u2 < m.grid.L2; ++u2) {
            const std::int64_t k2 = TorusGrid2::signed_of(u2, m.grid.L2);
            if (m.contains(n1, n2, k1, k2)) row[static_cast<std::size_t>(u2)] = '1';
        }
        os << row << '\n';
    }
}

} // namespace oscmult
