#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oscmult/masks.hpp"
#include "oscmult/oscillation.hpp"
#include "oscmult/rng.hpp"
#include "oscmult/torus.hpp"

namespace oscmult {

inline double l2_norm_real(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Masked coefficients back to samples; an orthogonal projection in the
// discrete inner product.
inline std::vector<cplx> apply_multiplier(const Spectrum2& f, const MaskFamily& m, int n1,
                                          int n2) {
    return masked_spectrum(f, m, n1, n2).to_spatial();
}

namespace detail {

// Two levels give the same mask exactly when they admit the same bin
// distances, so the family is deduplicated by half-width pairs.
struct MaskIds {
    int n1_max = 0, n2_max = 0;
    std::vector<int> id; // (n1_max+1) x (n2_max+1), row-major
    int count = 0;
    std::vector<std::pair<int, int>> rep; // representative level per id

    int at(int n1, int n2) const { return id[static_cast<std::size_t>(n1 * (n2_max + 1) + n2)]; }
};

inline MaskIds mask_ids(const MaskFamily& m) {
    MaskIds ids;
    ids.n1_max = m.n1_max;
    ids.n2_max = m.n2_max;
    ids.id.assign(static_cast<std::size_t>((m.n1_max + 1) * (m.n2_max + 1)), -1);
    std::vector<std::pair<std::int64_t, std::int64_t>> seen;
    for (int n1 = 0; n1 <= m.n1_max; ++n1)
        for (int n2 = 0; n2 <= m.n2_max; ++n2) {
            const std::pair<std::int64_t, std::int64_t> hw{m.halfwidth1(n1), m.halfwidth2(n2)};
            int found = -1;
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (seen[i] == hw) {
                    found = static_cast<int>(i);
                    break;
                }
            if (found < 0) {
                found = static_cast<int>(seen.size());
                seen.push_back(hw);
                ids.rep.emplace_back(n1, n2);
            }
            ids.id[static_cast<std::size_t>(n1 * (m.n2_max + 1) + n2)] = found;
        }
    ids.count = static_cast<int>(seen.size());
    return ids;
}

inline std::vector<std::vector<cplx>> family_fields(const Spectrum2& f, const MaskFamily& m,
                                                    const MaskIds& ids) {
    std::vector<std::vector<cplx>> fields(static_cast<std::size_t>(ids.count));
    for (int i = 0; i < ids.count; ++i)
        fields[static_cast<std::size_t>(i)] =
            apply_multiplier(f, m, ids.rep[static_cast<std::size_t>(i)].first,
                             ids.rep[static_cast<std::size_t>(i)].second);
    return fields;
}

} // namespace detail

// Pointwise sup over the whole finite level family (exact for the discrete
// operator thanks to mask stabilization).
inline std::vector<double> maximal_op(const Spectrum2& f, const MaskFamily& m) {
    const detail::MaskIds ids = detail::mask_ids(m);
    const auto fields = detail::family_fields(f, m, ids);
    std::vector<double> out(f.grid.size(), 0.0);
    for (const auto& field : fields)
        for (std::size_t p = 0; p < out.size(); ++p)
            out[p] = std::max(out[p], std::abs(field[p]));
    return out;
}

// Pointwise two-parameter oscillation seminorm of the multiplier family along
// the lacunary windows.
inline std::vector<double> osc_op(const Spectrum2& f, const MaskFamily& m,
                                  const LacunarySeq& N) {
    if (N.back() > std::min(m.n1_max, m.n2_max))
        throw std::out_of_range("osc_op: window exceeds the stabilized level range");
    const detail::MaskIds ids = detail::mask_ids(m);
    const auto fields = detail::family_fields(f, m, ids);

    const std::size_t sz = f.grid.size();
    std::vector<double> acc(sz, 0.0);
    std::vector<double> win(sz);
    std::vector<char> in_window(static_cast<std::size_t>(ids.count));
    for (std::size_t k = 0; k + 1 < N.terms.size(); ++k) {
        const int lo = static_cast<int>(N.terms[k]);
        const int hi = static_cast<int>(N.terms[k + 1]);
        const int anchor = ids.at(lo, lo);
        std::fill(in_window.begin(), in_window.end(), 0);
        for (int n1 = lo; n1 <= hi; ++n1)
            for (int n2 = lo; n2 <= hi; ++n2) in_window[static_cast<std::size_t>(ids.at(n1, n2))] = 1;
        std::fill(win.begin(), win.end(), 0.0);
        for (int i = 0; i < ids.count; ++i) {
            if (!in_window[static_cast<std::size_t>(i)] || i == anchor) continue;
            const auto& fi = fields[static_cast<std::size_t>(i)];
            const auto& fa = fields[static_cast<std::size_t>(anchor)];
            for (std::size_t p = 0; p < sz; ++p)
                win[p] = std::max(win[p], std::abs(fi[p] - fa[p]));
        }
        for (std::size_t p = 0; p < sz; ++p) acc[p] += win[p] * win[p];
    }
    for (std::size_t p = 0; p < sz; ++p) acc[p] = std::sqrt(acc[p]);
    return acc;
}

struct VariationReport {
    double B11 = 0.0;
    double B1 = 0.0;
    double B2 = 0.0;
    double B0 = 0.0;
};

// Per-bin variation sums of the mask family, exact in integers. Only bins
// inside some level-0 window can contribute; each such bin belongs to exactly
// one set point (separation), so its level profile is a single rectangle.
inline VariationReport variation_sums(const MaskFamily& m) {
    VariationReport rep;
    const std::int64_t h10 = m.halfwidth1(0), h20 = m.halfwidth2(0);
    for (const auto& p : m.fset.points) {
        (void)p;
        for (std::int64_t d1 = -h10; d1 <= h10; ++d1)
            for (std::int64_t d2 = -h20; d2 <= h20; ++d2) {
                const std::int64_t a1 = d1 < 0 ? -d1 : d1;
                const std::int64_t a2 = d2 < 0 ? -d2 : d2;
                auto level_member1 = [&](int n) { return a1 <= m.halfwidth1(n); };
                auto level_member2 = [&](int n) { return a2 <= m.halfwidth2(n); };

                std::int64_t sum11 = 0;
                for (int n1 = 1; n1 <= m.n1_max; ++n1)
                    for (int n2 = 1; n2 <= m.n2_max; ++n2) {
                        const int v = (level_member1(n1) && level_member2(n2)) -
                                      (level_member1(n1) && level_member2(n2 - 1)) -
                                      (level_member1(n1 - 1) && level_member2(n2)) +
                                      (level_member1(n1 - 1) && level_member2(n2 - 1));
                        sum11 += v < 0 ? -v : v;
                    }
                std::int64_t sum1 = 0;
                for (int n1 = 1; n1 <= m.n1_max; ++n1)
                    sum1 += std::llabs(static_cast<std::int64_t>(level_member1(n1)) -
                                       static_cast<std::int64_t>(level_member1(n1 - 1)));
                std::int64_t sum2 = 0;
                for (int n2 = 1; n2 <= m.n2_max; ++n2)
                    sum2 += std::llabs(static_cast<std::int64_t>(level_member2(n2)) -
                                       static_cast<std::int64_t>(level_member2(n2 - 1)));

                rep.B11 = std::max(rep.B11, static_cast<double>(sum11));
                rep.B1 = std::max(rep.B1, static_cast<double>(sum1));
                rep.B2 = std::max(rep.B2, static_cast<double>(sum2));
                rep.B0 = std::max(rep.B0, 1.0);
            }
    }
    return rep;
}

struct SquareFunctionReport {
    std::vector<double> S;
    std::vector<double> S1;
    std::vector<double> S2;
    double ratio_S = 0.0;
    double ratio_S1 = 0.0;
    double ratio_S2 = 0.0;
};

// The three square functions built from double/single mask differences.
inline SquareFunctionReport square_functions(const Spectrum2& f, const MaskFamily& m) {
    SquareFunctionReport rep;
    const std::size_t sz = f.grid.size();
    rep.S.assign(sz, 0.0);
    rep.S1.assign(sz, 0.0);
    rep.S2.assign(sz, 0.0);

    // Levels where the window actually narrows; all other differences vanish.
    std::vector<int> drops1, drops2;
    for (int n = 1; n <= m.n1_max; ++n)
        if (m.halfwidth1(n) < m.halfwidth1(n - 1)) drops1.push_back(n);
    for (int n = 1; n <= m.n2_max; ++n)
        if (m.halfwidth2(n) < m.halfwidth2(n - 1)) drops2.push_back(n);

    const std::int64_t L1 = f.grid.L1, L2 = f.grid.L2;
    Spectrum2 delta(f.grid);
    auto scatter_and_accumulate = [&](std::int64_t h1_out, std::int64_t h1_in,
                                      std::int64_t h2_out, std::int64_t h2_in,
                                      std::vector<double>& acc) {
        // Keep bins in the outer box but not the inner one, apply to f,
        // invert, accumulate squared magnitudes.
        std::fill(delta.coeffs.begin(), delta.coeffs.end(), cplx{});
        bool any = false;
        for (const auto& p : m.fset.points) {
            const std::int64_t u1c = TorusGrid2::raw_of(p.n1, L1);
            const std::int64_t u2c = TorusGrid2::raw_of(p.n2, L2);
            for (std::int64_t d1 = -h1_out; d1 <= h1_out; ++d1) {
                const std::int64_t a1 = d1 < 0 ? -d1 : d1;
                const std::int64_t u1 = (u1c + d1 % L1 + L1) % L1;
                for (std::int64_t d2 = -h2_out; d2 <= h2_out; ++d2) {
                    const std::int64_t a2 = d2 < 0 ? -d2 : d2;
                    if (a1 <= h1_in && a2 <= h2_in) continue;
                    const std::int64_t u2 = (u2c + d2 % L2 + L2) % L2;
                    const std::size_t idx = static_cast<std::size_t>(u1 * L2 + u2);
                    if (f.coeffs[idx] != cplx{}) {
                        delta.coeffs[idx] = f.coeffs[idx];
                        any = true;
                    }
                }
            }
        }
        if (!any) return;
        const std::vector<cplx> field = delta.to_spatial();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(field[i]);
    };

    // Double differences: the (n1,n2) term is supported where exactly the
    // (n1-1,n2-1) box holds but neither single-step shrink does; for a
    // rectangle family that is the corner frame
    //   (box(n1-1) \ box(n1)) x (box(n2-1) \ box(n2)).
    for (int n1 : drops1)
        for (int n2 : drops2) {
            std::fill(delta.coeffs.begin(), delta.coeffs.end(), cplx{});
            bool any = false;
            const std::int64_t o1 = m.halfwidth1(n1 - 1), i1 = m.halfwidth1(n1);
            const std::int64_t o2 = m.halfwidth2(n2 - 1), i2 = m.halfwidth2(n2);
            for (const auto& p : m.fset.points) {
                const std::int64_t u1c = TorusGrid2::raw_of(p.n1, L1);
                const std::int64_t u2c = TorusGrid2::raw_of(p.n2, L2);
                for (std::int64_t d1 = -o1; d1 <= o1; ++d1) {
                    const std::int64_t a1 = d1 < 0 ? -d1 : d1;
                    if (a1 <= i1) continue;
                    const std::int64_t u1 = (u1c + d1 % L1 + L1) % L1;
                    for (std::int64_t d2 = -o2; d2 <= o2; ++d2) {
                        const std::int64_t a2 = d2 < 0 ? -d2 : d2;
                        if (a2 <= i2) continue;
                        const std::int64_t u2 = (u2c + d2 % L2 + L2) % L2;
                        const std::size_t idx = static_cast<std::size_t>(u1 * L2 + u2);
                        if (f.coeffs[idx] != cplx{}) {
                            delta.coeffs[idx] = f.coeffs[idx];
                            any = true;
                        }
                    }
                }
            }
            if (!any) continue;
            const std::vector<cplx> field = delta.to_spatial();
            for (std::size_t i = 0; i < sz; ++i) rep.S[i] += std::norm(field[i]);
        }

    for (int n1 : drops1)
        scatter_and_accumulate(m.halfwidth1(n1 - 1), m.halfwidth1(n1), m.halfwidth2(0),
                               m.halfwidth2(0) + 1 /*never skip on axis 2*/, rep.S1);
    for (int n2 : drops2)
        scatter_and_accumulate(m.halfwidth1(0), m.halfwidth1(0) + 1, m.halfwidth2(n2 - 1),
                               m.halfwidth2(n2), rep.S2);

    for (std::size_t i = 0; i < sz; ++i) {
        rep.S[i] = std::sqrt(rep.S[i]);
        rep.S1[i] = std::sqrt(rep.S1[i]);
        rep.S2[i] = std::sqrt(rep.S2[i]);
    }
    const double fn = f.spatial_norm();
    if (fn > 0) {
        rep.ratio_S = l2_norm_real(rep.S) / fn;
        rep.ratio_S1 = l2_norm_real(rep.S1) / fn;
        rep.ratio_S2 = l2_norm_real(rep.S2) / fn;
    }
    return rep;
}

// Per-point data for the periodization inequality: coefficients of one f_l,
// spectrally supported in the open unit box around the origin.
struct BoxSpectrum {
    struct Entry {
        std::int64_t k1 = 0;
        std::int64_t k2 = 0;
        cplx c;
    };
    std::vector<Entry> entries;
};

struct PeriodizedReport {
    double lhs_sq = 0.0;
    double rhs_sq = 0.0;
    double ratio = 0.0;
    bool degenerate = false;
    int n1_lo = 0, n2_lo = 0;
    int n1_max = 0, n2_max = 0;
};

namespace detail {

inline int large_region_start(std::int64_t Q, std::size_t lambda_count) {
    const double x = static_cast<double>(Q) * std::sqrt(static_cast<double>(lambda_count));
    const double l2x = std::log2(std::max(2.0, x));
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(l2x))));
    return 1 << s;
}

} // namespace detail

inline PeriodizedReport periodized_bound_once(const TorusGrid2& grid, const FrequencySet& fset,
                                              std::span<const BoxSpectrum> boxes) {
    if (boxes.size() != fset.size())
        throw std::invalid_argument("periodized_bound_once: one box spectrum per point");
    const MaskFamily m = build_masks(grid, fset); // validates geometry
    for (const auto& b : boxes)
        for (const auto& e : b.entries)
            if (2 * std::llabs(e.k1) >= grid.Q1 || 2 * std::llabs(e.k2) >= grid.Q2)
                throw std::invalid_argument("periodized_bound_once: support outside unit box");

    PeriodizedReport rep;
    rep.n1_max = m.n1_max;
    rep.n2_max = m.n2_max;
    const int S1 = detail::large_region_start(grid.Q1, fset.size());
    const int S2 = detail::large_region_start(grid.Q2, fset.size());
    rep.degenerate = S1 > m.n1_max || S2 > m.n2_max;
    rep.n1_lo = std::min(S1, m.n1_max);
    rep.n2_lo = std::min(S2, m.n2_max);

    double rhs = 0.0;
    for (const auto& b : boxes)
        for (const auto& e : b.entries) rhs += std::norm(e.c);
    rhs /= static_cast<double>(grid.size());
    rep.rhs_sq = rhs;

    const std::int64_t L1 = grid.L1, L2 = grid.L2;
    std::vector<double> sup(grid.size(), 0.0);
    std::vector<std::pair<std::int64_t, std::int64_t>> done;
    for (int n1 = rep.n1_lo; n1 <= m.n1_max; ++n1)
        for (int n2 = rep.n2_lo; n2 <= m.n2_max; ++n2) {
            const std::pair<std::int64_t, std::int64_t> hw{m.halfwidth1(n1), m.halfwidth2(n2)};
            if (std::find(done.begin(), done.end(), hw) != done.end()) continue;
            done.push_back(hw);
            std::vector<cplx> composed(grid.size(), cplx{});
            for (std::size_t i = 0; i < boxes.size(); ++i) {
                const auto& p = fset.points[i];
                for (const auto& e : boxes[i].entries) {
                    if (std::llabs(e.k1) > hw.first || std::llabs(e.k2) > hw.second) continue;
                    const std::int64_t u1 = ((p.n1 + e.k1) % L1 + L1) % L1;
                    const std::int64_t u2 = ((p.n2 + e.k2) % L2 + L2) % L2;
                    composed[static_cast<std::size_t>(u1 * L2 + u2)] += e.c;
                }
            }
            fft::transform_2d(composed, static_cast<std::size_t>(L1), static_cast<std::size_t>(L2),
                              true);
            const double scale = 1.0 / static_cast<double>(grid.size());
            for (std::size_t p = 0; p < sup.size(); ++p)
                sup[p] = std::max(sup[p], std::abs(composed[p]) * scale);
        }
    double lhs = 0.0;
    for (double v : sup) lhs += v * v;
    rep.lhs_sq = lhs;
    rep.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    return rep;
}

// Random instances; returns the report of the worst (largest) ratio.
inline PeriodizedReport periodized_bound_test(const TorusGrid2& grid, const FrequencySet& fset,
                                              int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("periodized_bound_test: trials must be >= 1");
    const std::int64_t bh1 = (grid.Q1 - 1) / 2, bh2 = (grid.Q2 - 1) / 2;
    PeriodizedReport best;
    bool first = true;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        std::vector<BoxSpectrum> boxes(fset.size());
        for (auto& b : boxes)
            for (std::int64_t k1 = -bh1; k1 <= bh1; ++k1)
                for (std::int64_t k2 = -bh2; k2 <= bh2; ++k2)
                    b.entries.push_back({k1, k2, rng.cgaussian()});
        PeriodizedReport rep = periodized_bound_once(grid, fset, boxes);
        if (first || rep.ratio > best.ratio) {
            best = rep;
            first = false;
        }
    }
    return best;
}

enum class OpMode { maximal, oscillation };

struct NormEstimateReport {
    double best_ratio = 0.0;
    Spectrum2 witness;
    std::int64_t evaluations = 0;
};

namespace detail {

inline double op_ratio(const Spectrum2& f, const MaskFamily& m, OpMode mode,
                       const LacunarySeq* N) {
    const double fn = f.spatial_norm();
    if (fn == 0.0) return 0.0;
    const std::vector<double> out =
        mode == OpMode::maximal ? maximal_op(f, m) : osc_op(f, m, *N);
    return l2_norm_real(out) / fn;
}

} // namespace detail

// Empirical lower bound on the operator norm: single-bin probes at the set
// points and at level-0 window edges, seeded random spectra (alternately
// window-supported and full-grid), then greedy coefficient ascent from the
// best candidate. Deterministic for a given seed.
inline NormEstimateReport norm_estimate(const MaskFamily& m, OpMode mode, const LacunarySeq* N,
                                        int trials, std::uint64_t seed, int ascent_steps = 48) {
    if (trials < 0 || ascent_steps < 0) throw std::invalid_argument("norm_estimate: negative trials");
    if (mode == OpMode::oscillation && N == nullptr)
        throw std::invalid_argument("norm_estimate: oscillation mode needs windows");

    const TorusGrid2& grid = m.grid;
    NormEstimateReport best{0.0, Spectrum2(grid), 0};

    std::vector<std::size_t> covered;
    const std::int64_t h10 = m.halfwidth1(0), h20 = m.halfwidth2(0);
    for (const auto& p : m.fset.points) {
        const std::int64_t u1c = TorusGrid2::raw_of(p.n1, grid.L1);
        const std::int64_t u2c = TorusGrid2::raw_of(p.n2, grid.L2);
        for (std::int64_t d1 = -h10; d1 <= h10; ++d1) {
            const std::int64_t u1 = (u1c + d1 % grid.L1 + grid.L1) % grid.L1;
            for (std::int64_t d2 = -h20; d2 <= h20; ++d2) {
                const std::int64_t u2 = (u2c + d2 % grid.L2 + grid.L2) % grid.L2;
                covered.push_back(static_cast<std::size_t>(u1 * grid.L2 + u2));
            }
        }
    }

    auto consider = [&](const Spectrum2& f) {
        const double r = detail::op_ratio(f, m, mode, N);
        ++best.evaluations;
        if (r > best.best_ratio) {
            best.best_ratio = r;
            best.witness = f;
        }
    };

    for (const auto& p : m.fset.points) {
        Spectrum2 probe(grid);
        probe.coeffs[grid.index_of(p.n1, p.n2)] = 1.0;
        consider(probe);
        if (h10 >= 1) {
            Spectrum2 edge(grid);
            const std::int64_t u1 = (TorusGrid2::raw_of(p.n1, grid.L1) + h10) % grid.L1;
            edge.coeffs[static_cast<std::size_t>(u1 * grid.L2 +
                                                 TorusGrid2::raw_of(p.n2, grid.L2))] = 1.0;
            consider(edge);
        }
        if (h20 >= 1) {
            Spectrum2 edge(grid);
            const std::int64_t u2 = (TorusGrid2::raw_of(p.n2, grid.L2) + h20) % grid.L2;
            edge.coeffs[static_cast<std::size_t>(TorusGrid2::raw_of(p.n1, grid.L1) * grid.L2 +
                                                 u2)] = 1.0;
            consider(edge);
        }
    }

    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        Spectrum2 f(grid);
        if (t % 2 == 0 && !covered.empty()) {
            for (std::size_t idx : covered) f.coeffs[idx] = rng.cgaussian();
        } else {
            for (auto& z : f.coeffs) z = rng.cgaussian();
        }
        const double n = l2_norm(f.coeffs);
        if (n > 0)
            for (auto& z : f.coeffs) z /= n;
        consider(f);
    }

    if (!covered.empty() && best.best_ratio > 0.0 && ascent_steps > 0) {
        Rng rng = Rng::stream(seed, 0x61736365u); // ascent stream
        Spectrum2 cur = best.witness;
        double cur_ratio = best.best_ratio;
        const int steps = ascent_steps;
        for (int k = 0; k < steps; ++k) {
            const std::size_t idx = covered[rng.below(covered.size())];
            const double scale =
                0.3 * l2_norm(cur.coeffs) / std::sqrt(static_cast<double>(covered.size()));
            const cplx saved = cur.coeffs[idx];
            cur.coeffs[idx] += scale * rng.cgaussian();
            const double cand = detail::op_ratio(cur, m, mode, N);
            ++best.evaluations;
            if (cand > cur_ratio) {
                cur_ratio = cand;
            } else {
                cur.coeffs[idx] = saved;
            }
        }
        if (cur_ratio > best.best_ratio) {
            best.best_ratio = cur_ratio;
            best.witness = cur;
        }
    }
    return best;
}

} // namespace oscmult
