#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscmult/dyadic.hpp"

namespace oscmult {

// Strictly increasing positive integers with N_{k+1} >= tau * N_k.
struct LacunarySeq {
    std::vector<std::int64_t> terms;
    double tau = 2.0;

    LacunarySeq(std::vector<std::int64_t> t, double tau_) : terms(std::move(t)), tau(tau_) {
        if (tau <= 1.0) throw std::invalid_argument("LacunarySeq: tau must exceed 1");
        if (terms.empty()) throw std::invalid_argument("LacunarySeq: empty");
        if (terms.front() < 1) throw std::invalid_argument("LacunarySeq: terms must be >= 1");
        for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
            if (terms[k + 1] <= terms[k])
                throw std::invalid_argument("LacunarySeq: not increasing");
            if (static_cast<double>(terms[k + 1]) + 1e-9 < tau * static_cast<double>(terms[k]))
                throw std::invalid_argument("LacunarySeq: lacunarity violated");
        }
    }

    static LacunarySeq geometric(std::int64_t first, double ratio, std::int64_t max_term) {
        if (first < 1 || ratio <= 1.0 || max_term < first)
            throw std::invalid_argument("LacunarySeq::geometric: bad parameters");
        std::vector<std::int64_t> t{first};
        while (true) {
            auto next = static_cast<std::int64_t>(std::ceil(ratio * static_cast<double>(t.back())));
            next = std::max(next, t.back() + 1);
            if (next > max_term) break;
            t.push_back(next);
        }
        return LacunarySeq(std::move(t), ratio);
    }

    // Documented dropping mechanism for windows beyond an array: keep the
    // leading terms that fit, never clamp.
    LacunarySeq truncated_to(std::int64_t max_term) const {
        std::vector<std::int64_t> t;
        for (std::int64_t v : terms)
            if (v <= max_term) t.push_back(v);
        if (t.empty()) throw std::invalid_argument("LacunarySeq: truncation removed all terms");
        return LacunarySeq(std::move(t), tau);
    }

    std::size_t window_count() const { return terms.size() - 1; }
    std::int64_t back() const { return terms.back(); }
};

// Finite two-parameter arrays enter the seminorms through a view: inclusive
// extents plus entry access. Dense storage and lazy formulas share the code.
struct Array2 {
    std::int64_t max1 = 0;
    std::int64_t max2 = 0;
    std::vector<cplx> v;

    Array2(std::int64_t m1, std::int64_t m2) : max1(m1), max2(m2) {
        if (m1 < 0 || m2 < 0) throw std::invalid_argument("Array2: negative extents");
        v.assign(static_cast<std::size_t>((m1 + 1) * (m2 + 1)), cplx{});
    }

    cplx& at(std::int64_t n1, std::int64_t n2) {
        return v[static_cast<std::size_t>(n1 * (max2 + 1) + n2)];
    }
    cplx operator()(std::int64_t n1, std::int64_t n2) const {
        return v[static_cast<std::size_t>(n1 * (max2 + 1) + n2)];
    }
};

template <class F>
struct FuncView2 {
    std::int64_t max1 = 0;
    std::int64_t max2 = 0;
    F f;
    cplx operator()(std::int64_t n1, std::int64_t n2) const { return f(n1, n2); }
};

template <class F>
FuncView2<F> make_view(std::int64_t max1, std::int64_t max2, F f) {
    return FuncView2<F>{max1, max2, std::move(f)};
}

// The convergent-but-unbounded sequence: n2 on the first row, 0 elsewhere.
inline auto first_row_ramp(std::int64_t max1, std::int64_t max2) {
    return make_view(max1, max2, [](std::int64_t n1, std::int64_t n2) -> cplx {
        return n1 == 0 ? cplx(static_cast<double>(n2), 0.0) : cplx{};
    });
}

inline double osc_1d(std::span<const cplx> b, const LacunarySeq& N) {
    const std::int64_t max_n = static_cast<std::int64_t>(b.size()) - 1;
    if (N.back() > max_n) throw std::out_of_range("osc_1d: window exceeds sequence");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < N.terms.size(); ++k) {
        const cplx anchor = b[static_cast<std::size_t>(N.terms[k])];
        double win = 0.0;
        for (std::int64_t n = N.terms[k]; n <= N.terms[k + 1]; ++n)
            win = std::max(win, std::abs(b[static_cast<std::size_t>(n)] - anchor));
        sum += win * win;
    }
    return std::sqrt(sum);
}

template <class View>
double osc_2d(const View& a, const LacunarySeq& N) {
    if (N.back() > std::min(a.max1, a.max2))
        throw std::out_of_range("osc_2d: window exceeds array");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < N.terms.size(); ++k) {
        const cplx anchor = a(N.terms[k], N.terms[k]);
        double win = 0.0;
        for (std::int64_t n1 = N.terms[k]; n1 <= N.terms[k + 1]; ++n1)
            for (std::int64_t n2 = N.terms[k]; n2 <= N.terms[k + 1]; ++n2)
                win = std::max(win, std::abs(a(n1, n2) - anchor));
        sum += win * win;
    }
    return std::sqrt(sum);
}

enum class Region : int { u00 = 0, u01 = 1, u10 = 2, u11 = 3 };

// Four index regions cut by the corner w = (w1, w2).
struct RegionSplit {
    std::int64_t w1 = 1;
    std::int64_t w2 = 1;

    RegionSplit(std::int64_t w1_, std::int64_t w2_) : w1(w1_), w2(w2_) {
        if (w1 < 1 || w2 < 1) throw std::invalid_argument("RegionSplit: w must be positive");
    }

    Region region_of(std::int64_t n1, std::int64_t n2) const {
        if (n1 < w1) return n2 < w2 ? Region::u00 : Region::u01;
        return n2 < w2 ? Region::u10 : Region::u11;
    }

    bool contains(Region mu, std::int64_t n1, std::int64_t n2) const {
        switch (mu) {
            case Region::u00: return n1 < w1 && n2 < w2;
            case Region::u01: return n1 < w1 && n2 >= w2;
            case Region::u10: return n1 >= w1 && n2 < w2;
            case Region::u11: return n1 >= w1 && n2 >= w2;
        }
        return false;
    }
};

// Seminorm restricted to windows whose diagonal endpoints both lie in the
// same region.
template <class View>
double osc_mu(const View& a, const LacunarySeq& N, const RegionSplit& w, Region mu) {
    if (N.back() > std::min(a.max1, a.max2))
        throw std::out_of_range("osc_mu: window exceeds array");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < N.terms.size(); ++k) {
        if (!w.contains(mu, N.terms[k], N.terms[k]) ||
            !w.contains(mu, N.terms[k + 1], N.terms[k + 1]))
            continue;
        const cplx anchor = a(N.terms[k], N.terms[k]);
        double win = 0.0;
        for (std::int64_t n1 = N.terms[k]; n1 <= N.terms[k + 1]; ++n1)
            for (std::int64_t n2 = N.terms[k]; n2 <= N.terms[k + 1]; ++n2)
                win = std::max(win, std::abs(a(n1, n2) - anchor));
        sum += win * win;
    }
    return std::sqrt(sum);
}

struct Lemma3Report {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

template <class View>
Lemma3Report lemma3_check(const View& a, const LacunarySeq& N, const RegionSplit& w) {
    Lemma3Report rep;
    rep.lhs = osc_2d(a, N);
    double sup = 0.0;
    for (std::int64_t n1 = 0; n1 <= a.max1; ++n1)
        for (std::int64_t n2 = 0; n2 <= a.max2; ++n2)
            sup = std::max(sup, std::abs(a(n1, n2)));
    rep.rhs = 4.0 * sup;
    for (Region mu : {Region::u00, Region::u01, Region::u10, Region::u11})
        rep.rhs += osc_mu(a, N, w, mu);
    rep.holds = rep.lhs <= rep.rhs + 1e-12 * sup;
    return rep;
}

// Greedy construction: N_1 = 1; given N_k, the first (lexicographic) witness
// (u1, u2) >= N_k with |a(u1,u2) - a(N_k,N_k)| >= eps sets
// N_{k+1} = 2*max(u1,u2). Stops when no witness exists or the next term
// leaves the array; a result needs at least one full window.
template <class View>
std::optional<LacunarySeq> witness_windows(const View& a, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("witness_windows: eps must be positive");
    const std::int64_t edge = std::min(a.max1, a.max2);
    if (edge < 1) return std::nullopt;

    std::vector<std::int64_t> terms{1};
    while (true) {
        const std::int64_t cur = terms.back();
        const cplx anchor = a(cur, cur);
        std::int64_t next = -1;
        for (std::int64_t u1 = cur; u1 <= a.max1 && next < 0; ++u1)
            for (std::int64_t u2 = cur; u2 <= a.max2; ++u2)
                if (std::abs(a(u1, u2) - anchor) >= eps) {
                    next = 2 * std::max(u1, u2);
                    break;
                }
        if (next < 0 || next > edge) break;
        terms.push_back(next);
    }
    if (terms.size() < 2) return std::nullopt;
    return LacunarySeq(std::move(terms), 2.0);
}

// Finite Cauchy surrogate: all entries with min(n1,n2) past half the array
// must lie within eps of each other. The threshold is fixed at
// max(1, min(max1,max2)/2).
template <class View>
bool converges_diag(const View& a, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("converges_diag: eps must be positive");
    const std::int64_t h = std::max<std::int64_t>(1, std::min(a.max1, a.max2) / 2);
    if (h > a.max1 || h > a.max2) return true;

    double re_lo = HUGE_VAL, re_hi = -HUGE_VAL, im_lo = HUGE_VAL, im_hi = -HUGE_VAL;
    for (std::int64_t n1 = h; n1 <= a.max1; ++n1)
        for (std::int64_t n2 = h; n2 <= a.max2; ++n2) {
            cplx z = a(n1, n2);
            re_lo = std::min(re_lo, z.real());
            re_hi = std::max(re_hi, z.real());
            im_lo = std::min(im_lo, z.imag());
            im_hi = std::max(im_hi, z.imag());
        }
    const double dre = re_hi - re_lo, dim = im_hi - im_lo;
    if (std::sqrt(dre * dre + dim * dim) <= eps) return true; // box diameter suffices
    if (std::max(dre, dim) > eps) return false;               // one coordinate already too wide

    for (std::int64_t p1 = h; p1 <= a.max1; ++p1)
        for (std::int64_t p2 = h; p2 <= a.max2; ++p2) {
            const cplx zp = a(p1, p2);
            for (std::int64_t q1 = p1; q1 <= a.max1; ++q1)
                for (std::int64_t q2 = (q1 == p1 ? p2 : h); q2 <= a.max2; ++q2)
                    if (std::abs(a(q1, q2) - zp) > eps) return false;
        }
    return true;
}

} // namespace oscmult
