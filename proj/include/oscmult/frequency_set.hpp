#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oscmult/rational.hpp"
#include "oscmult/rng.hpp"
#include "oscmult/torus.hpp"

namespace oscmult {

// Reduced fractions a/q in [0,1] with 2^s <= q < 2^{s+1}, ordered by
// ascending q then a. s = 0 yields {0/1, 1/1}.
inline std::vector<Rational> gen_rationals(int s) {
    if (s < 0 || s > 20) throw std::invalid_argument("gen_rationals: s out of range");
    std::vector<Rational> out;
    const std::int64_t q_lo = pow2i(s), q_hi = pow2i(s + 1) - 1;
    for (std::int64_t q = q_lo; q <= q_hi; ++q) {
        const std::int64_t a_lo = (q == 1) ? 0 : 1;
        const std::int64_t a_hi = (q == 1) ? 1 : q - 1;
        for (std::int64_t a = a_lo; a <= a_hi; ++a)
            if (std::gcd(a, q) == 1) out.emplace_back(a, q);
    }
    return out;
}

inline bool check_separation(std::span<const Rational> points, const Rational& scale) {
    const Rational one(1);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (((points[i] - points[j]) * scale).abs() < one) return false;
    return true;
}

inline bool check_separation_2d(std::span<const std::pair<Rational, Rational>> points,
                                const Rational& scale) {
    const Rational one(1);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            Rational d1 = ((points[i].first - points[j].first) * scale).abs();
            Rational d2 = ((points[i].second - points[j].second) * scale).abs();
            if (d1 < one && d2 < one) return false;
        }
    return true;
}

// Finite frequency set inside Q1^{-1}Z x Q2^{-1}Z, stored as exact integer
// numerators. Construction enforces the max-metric separation
// max(|l1-l1'|, |l2-l2'|) >= 1 for distinct points.
struct FrequencySet {
    std::int64_t Q1 = 1;
    std::int64_t Q2 = 1;

    struct Point {
        std::int64_t n1 = 0; // frequency n1/Q1
        std::int64_t n2 = 0; // frequency n2/Q2
    };
    std::vector<Point> points;

    FrequencySet(std::int64_t q1, std::int64_t q2, std::vector<Point> pts)
        : Q1(q1), Q2(q2), points(std::move(pts)) {
        if (Q1 < 1 || Q2 < 1) throw std::invalid_argument("FrequencySet: bad denominators");
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                const std::int64_t d1 = std::llabs(points[i].n1 - points[j].n1);
                const std::int64_t d2 = std::llabs(points[i].n2 - points[j].n2);
                if (d1 < Q1 && d2 < Q2)
                    throw std::invalid_argument("FrequencySet: separation violated");
            }
    }

    std::size_t size() const { return points.size(); }

    Rational lambda1(std::size_t i) const { return Rational(points[i].n1, Q1); }
    Rational lambda2(std::size_t i) const { return Rational(points[i].n2, Q2); }
};

// lcm of all integer denominators q in [2^s, 2^{s+1}); throws past int64.
inline std::int64_t lcm_denominators(int s) {
    return lcm_range(pow2i(s), pow2i(s + 1) - 1);
}

// Numerators over Q = lcm_denominators(s) of the fractions 4^{s+1} * a/q.
inline std::vector<std::int64_t> scaled_rational_numerators(int s, std::int64_t Q) {
    const std::int64_t scale = checked_mul(pow2i(s + 1), pow2i(s + 1)); // 4^{s+1}
    std::vector<std::int64_t> nums;
    for (const Rational& r : gen_rationals(s))
        nums.push_back(checked_mul(checked_mul(scale, r.num()), Q / r.den()));
    return nums;
}

// 4^{s+1} * R_s embedded on the first frequency axis: points (lambda, 0),
// Q2 = 1.
inline FrequencySet scaled_rational_axis_set(int s) {
    const std::int64_t Q = lcm_denominators(s);
    std::vector<FrequencySet::Point> pts;
    for (std::int64_t n : scaled_rational_numerators(s, Q)) pts.push_back({n, 0});
    return FrequencySet(Q, 1, std::move(pts));
}

// Full 2D product (4^{s+1} * R_s) x (4^{s+1} * R_s).
inline FrequencySet scaled_rational_product_set(int s) {
    const std::int64_t Q = lcm_denominators(s);
    const std::vector<std::int64_t> nums = scaled_rational_numerators(s, Q);
    std::vector<FrequencySet::Point> pts;
    for (std::int64_t a : nums)
        for (std::int64_t b : nums) pts.push_back({a, b});
    return FrequencySet(Q, Q, std::move(pts));
}

// Rejection-sampled random separated set with numerators in
// [-band_r, band_r]. Gives up (throws) if the box is too crowded.
inline FrequencySet random_separated_set(std::int64_t Q1, std::int64_t Q2, std::size_t count,
                                         std::int64_t band1, std::int64_t band2, Rng& rng) {
    std::vector<FrequencySet::Point> pts;
    int attempts = 0;
    while (pts.size() < count) {
        if (++attempts > 100000)
            throw std::runtime_error("random_separated_set: could not place points");
        FrequencySet::Point cand{
            static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * band1 + 1))) - band1,
            static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * band2 + 1))) - band2};
        bool ok = true;
        for (const auto& p : pts)
            if (std::llabs(p.n1 - cand.n1) < Q1 && std::llabs(p.n2 - cand.n2) < Q2) {
                ok = false;
                break;
            }
        if (ok) pts.push_back(cand);
    }
    return FrequencySet(Q1, Q2, std::move(pts));
}

} // namespace oscmult
