// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any line fails.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oscmult/dyadic.hpp"
#include "oscmult/experiments.hpp"
#include "oscmult/frequency_set.hpp"
#include "oscmult/kernels.hpp"
#include "oscmult/masks.hpp"
#include "oscmult/oscillation.hpp"
#include "oscmult/spectral_ops.hpp"

using namespace oscmult;

namespace {

int failures = 0;

void record(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %-24s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

template <class Fn>
void criterion(const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        record(name, false, std::string("exception: ") + e.what());
    }
}

std::string summary_value(const RunReport& rep, const std::string& key) {
    for (const auto& [k, v] : rep.summary)
        if (k == key) return v;
    return "";
}

// --------------------------------------------------------------------------

void rm_inequalities() {
    WallTimer timer;
    ExperimentConfig cfg;
    cfg.command = "rm-check";
    cfg.trials = 10000;
    cfg.seed = 2026;
    cfg.s_min = 1;
    cfg.s_max = 5;
    cfg.exhaustive = std::string("zero_one");
    const RunReport rep = cmd_rm_check(cfg);
    const double wall = timer.seconds();
    const bool pass = rep.exit_code == 0 && rep.rows.empty() && wall < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "10^4 random 1d+2d (s<=5) + exhaustive {0,1} at s1=s2=2: violations=%s, "
                  "max ratios %s / %s / %s, wall %.1fs (budget 60s)",
                  summary_value(rep, "violations").c_str(),
                  summary_value(rep, "max_ratio_1d").c_str(),
                  summary_value(rep, "max_ratio_2d").c_str(),
                  summary_value(rep, "max_ratio_exhaustive").c_str(), wall);
    record("rm-inequalities", pass, buf);
}

void dyadic_decomposition() {
    WallTimer timer;
    const int s = 10;
    const std::int64_t top = std::int64_t{1} << s;
    std::int64_t cases = 0;
    bool ok = true;
    std::vector<int> per_level(static_cast<std::size_t>(s) + 1, 0);
    for (std::int64_t m = 0; m < top && ok; ++m)
        for (std::int64_t n = m + 1; n <= top && ok; ++n) {
            const Decomposition d = decompose(m, n, s);
            ++cases;
            std::fill(per_level.begin(), per_level.end(), 0);
            std::int64_t cursor = m;
            for (const DyadicInterval& part : d.parts) {
                if (part.left() != cursor || part.level < 0 || part.level > s ||
                    part.left() % part.length() != 0) {
                    ok = false;
                    break;
                }
                cursor = part.right();
                if (++per_level[static_cast<std::size_t>(part.level)] > 2) {
                    ok = false;
                    break;
                }
            }
            if (cursor != n) ok = false;
        }
    const double wall = timer.seconds();
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "all 0<=m<n<=2^10: %lld cases, disjoint+cover+multiplicity<=2, wall %.2fs "
                  "(budget 10s)",
                  static_cast<long long>(cases), wall);
    record("dyadic-decomposition", ok && wall < 10.0 && cases == top * (top + 1) / 2, buf);
}

void lemma3() {
    Rng meta(424242);
    std::int64_t violations = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const std::int64_t m1 = 6 + static_cast<std::int64_t>(meta.below(20));
        const std::int64_t m2 = 6 + static_cast<std::int64_t>(meta.below(20));
        Array2 a(m1, m2);
        for (auto& z : a.v) z = meta.cgaussian();
        const double tau = 1.5 + meta.uniform();
        const LacunarySeq N = LacunarySeq::geometric(
            1 + static_cast<std::int64_t>(meta.below(2)), tau, std::min(m1, m2));
        const RegionSplit w(
            1 + static_cast<std::int64_t>(meta.below(static_cast<std::uint64_t>(m1))),
            1 + static_cast<std::int64_t>(meta.below(static_cast<std::uint64_t>(m2))));
        if (!lemma3_check(a, N, w).holds) ++violations;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "10^4 random (a,N,w): violations=%lld",
                  static_cast<long long>(violations));
    record("lemma3", violations == 0, buf);
}

void projection_identities() {
    const FrequencySet fset = scaled_rational_product_set(1);
    const TorusGrid2 grid(fset.Q1, fset.Q2, 1024, 1024);
    const MaskFamily masks = build_masks(grid, fset);
    Rng rng(31415);
    Spectrum2 f(grid);
    for (auto& z : f.coeffs) z = rng.cgaussian();
    const double fn = f.spatial_norm();

    double worst_idem = 0.0;
    double worst_contract = 0.0;
    for (const auto& [n1, n2] : {std::pair<int, int>{0, 0}, std::pair<int, int>{1, 2},
                                 std::pair<int, int>{masks.n1_max, masks.n2_max}}) {
        const std::vector<cplx> once = apply_multiplier(f, masks, n1, n2);
        const std::vector<cplx> twice =
            apply_multiplier(Spectrum2::from_spatial(grid, once), masks, n1, n2);
        double diff = 0.0;
        for (std::size_t i = 0; i < once.size(); ++i) diff += std::norm(once[i] - twice[i]);
        worst_idem = std::max(worst_idem, std::sqrt(diff) / fn);
        worst_contract = std::max(worst_contract, l2_norm(once) / fn - 1.0);
    }

    const std::vector<cplx> samples = f.to_spatial();
    const Spectrum2 back = Spectrum2::from_spatial(grid, samples);
    double rt = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < back.coeffs.size(); ++i) {
        rt += std::norm(back.coeffs[i] - f.coeffs[i]);
        mag += std::norm(f.coeffs[i]);
    }
    const double roundtrip = std::sqrt(rt / mag);

    const bool pass = worst_idem <= 1e-12 && worst_contract <= 1e-12 && roundtrip <= 1e-12;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "grid 2^10 x 2^10: |P^2f-Pf|/|f|=%.2e, |Pf|/|f|-1=%.2e, round-trip %.2e "
                  "(tolerance 1e-12)",
                  worst_idem, worst_contract, roundtrip);
    record("projection-identities", pass, buf);
}

void variation_bounds() {
    bool pass = true;
    std::string detail;

    const FrequencySet prod1 = scaled_rational_product_set(1);
    const VariationReport r1 =
        variation_sums(build_masks(TorusGrid2(prod1.Q1, prod1.Q2, 256, 256), prod1));
    pass = pass && r1.B11 <= 1.0 && r1.B1 <= 1.0 && r1.B2 <= 1.0 && r1.B0 <= 1.0;

    const FrequencySet axis2 = scaled_rational_axis_set(2);
    const VariationReport r2 =
        variation_sums(build_masks(TorusGrid2(axis2.Q1, axis2.Q2, 65536, 2), axis2));
    pass = pass && r2.B11 <= 1.0 && r2.B1 <= 1.0 && r2.B2 <= 1.0 && r2.B0 <= 1.0;

    const FrequencySet axis3 = scaled_rational_axis_set(3);
    const VariationReport r3 = variation_sums(
        build_masks(TorusGrid2(axis3.Q1, axis3.Q2, std::int64_t{1} << 28, 2), axis3));
    pass = pass && r3.B11 <= 1.0 && r3.B1 <= 1.0 && r3.B2 <= 1.0 && r3.B0 <= 1.0;

    Rng rng(5150);
    int random_sets = 0;
    for (int t = 0; t < 100; ++t) {
        const std::int64_t q1 = 3 + static_cast<std::int64_t>(rng.below(10));
        const std::int64_t q2 = 3 + static_cast<std::int64_t>(rng.below(10));
        const std::size_t count = 2 + static_cast<std::size_t>(rng.below(6));
        FrequencySet fs = random_separated_set(q1, q2, count, 8 * q1, 8 * q2, rng);
        const TorusGrid2 g(q1, q2, detail::ceil_pow2_i64(2 * (8 * q1 + q1 + 2)),
                           detail::ceil_pow2_i64(2 * (8 * q2 + q2 + 2)));
        const VariationReport r = variation_sums(build_masks(g, fs));
        if (!(r.B11 <= 1.0 && r.B1 <= 1.0 && r.B2 <= 1.0 && r.B0 <= 1.0)) pass = false;
        ++random_sets;
    }

    char buf[224];
    std::snprintf(buf, sizeof buf,
                  "scaled sets s=1 (product), s=2,3 (axis) and %d random sets: "
                  "B11=%g B1=%g B2=%g B0=%g at s=1; all bounds <= 1 exactly",
                  random_sets, r1.B11, r1.B1, r1.B2, r1.B0);
    record("variation-bounds", pass, buf);
}

void fejer_identity() {
    bool pass = true;
    double worst = 0.0;
    for (const auto& [l1, l2] : {std::pair<std::int64_t, std::int64_t>{256, 256},
                                 std::pair<std::int64_t, std::int64_t>{4096, 256},
                                 std::pair<std::int64_t, std::int64_t>{256, 4096}}) {
        const TorusGrid2 g(l1 / 4, l2 / 4, l1, l2);
        Rng rng(1789);
        Spectrum2 f(g);
        for (auto& z : f.coeffs) z = rng.cgaussian();
        f = parity_project(f, 0, 1);
        for (const auto& [n1, n2] : {std::pair<int, int>{0, 0}, std::pair<int, int>{1, 2},
                                     std::pair<int, int>{2, 1}, std::pair<int, int>{3, 4}}) {
            const FejerIdentityReport r = fejer_identity_check(f, n1, n2);
            worst = std::max(worst, r.max_rel_err);
            pass = pass && r.multiplier_exact && r.max_rel_err <= 1e-8;
        }
    }

    // exact rational flatness of the combination at sampled points
    for (int n = 0; n <= 6; ++n) {
        for (const Rational& D : {DyadicScalePair(n).d1(), DyadicScalePair(n).d2()}) {
            for (int i = 0; i <= 16; ++i) {
                const Rational xi = D * Rational(i, 16);
                if (fejer_combination(D, xi) != Rational(1)) pass = false;
                const Rational outside = D * Rational(32 + i, 16);
                if (fejer_combination(D, outside) != Rational(0)) pass = false;
            }
        }
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "grids up to 2^12 per axis: max rel err %.2e (tolerance 1e-8); rational "
                  "flatness exact",
                  worst);
    record("fejer-identity", pass, buf);
}

void parity_partition() {
    bool pass = true;
    for (const auto& [q1, q2, l1, l2] :
         {std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>{16, 16, 64, 64},
          std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>{32, 8, 128, 32}}) {
        const TorusGrid2 g(q1, q2, l1, l2);
        const ParityMasks pm = parity_masks(g);
        for (std::int64_t u1 = 0; u1 < g.L1; ++u1)
            for (std::int64_t u2 = 0; u2 < g.L2; ++u2) {
                const int total = pm.value(0, 0, u1, u2) + pm.value(0, 1, u1, u2) +
                                  pm.value(1, 0, u1, u2) + pm.value(1, 1, u1, u2);
                if (pm.excluded(u1, u2) ? total != 0 : total != 1) pass = false;
            }
    }
    record("parity-partition", pass, "m00+m01+m10+m11 = 1 on every off-axis bin, exact");
}

void counterexample_reproduction() {
    bool pass = true;
    std::size_t family_count = 0;
    for (const std::int64_t M : {std::int64_t{256}, std::int64_t{1024}, std::int64_t{4096}}) {
        const auto view = first_row_ramp(M, M);

        std::vector<LacunarySeq> families;
        families.push_back(LacunarySeq::geometric(1, 2.0, M));
        families.push_back(LacunarySeq::geometric(1, 3.0, M));
        families.push_back(LacunarySeq::geometric(2, 2.0, M));
        Rng rng(616);
        for (int t = 0; t < 5; ++t)
            families.push_back(LacunarySeq::geometric(
                1 + static_cast<std::int64_t>(rng.below(3)), 1.5 + rng.uniform(), M));
        family_count = families.size();

        for (const LacunarySeq& N : families)
            if (osc_2d(view, N) != 0.0) pass = false;

        double sup = 0.0;
        for (std::int64_t n2 = 0; n2 <= M; ++n2) sup = std::max(sup, std::abs(view(0, n2)));
        pass = pass && sup == static_cast<double>(M);
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "truncations 2^8, 2^10, 2^12: osc = 0 exactly for %zu lacunary families each, "
                  "sup equals the truncation bound",
                  family_count);
    record("counterexample", pass, buf);
}

void decay_estimate() {
    const double frozen_c0 = 1.0000000001; // oracle sweep supremum (attained at 2^n*xi = 1/2)
    const DecayReport r1 = decay_check(0, 10, 1.0, 8.0, 250000);
    const DecayReport r2 = decay_check(0, 10, 1.0, 8.0, 500000);
    const DecayReport r3 = decay_check(0, 10, 1.0, 8.0, 1000000);
    const double drift =
        std::max(std::abs(r2.sup_ratio - r1.sup_ratio), std::abs(r3.sup_ratio - r2.sup_ratio)) /
        r2.sup_ratio;
    const bool pass = std::isfinite(r3.sup_ratio) && drift < 0.01 && r3.sup_ratio <= frozen_c0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "delta=1, n in [0,10], 10^6-point sweep: sup %.12f <= C0 %.10f, drift %.4f%%",
                  r3.sup_ratio, frozen_c0, 100.0 * drift);
    record("decay-estimate", pass, buf);
}

void periodization_evidence() {
    const FrequencySet one(6, 6, {{8, -4}});
    const FrequencySet prod = scaled_rational_product_set(1);
    bool pass = true;
    double base = 0.0, worst = 0.0;
    for (const std::int64_t L : {std::int64_t{256}, std::int64_t{1024}, std::int64_t{4096}}) {
        const TorusGrid2 g(6, 6, L, L);
        const PeriodizedReport rb = periodized_bound_test(g, one, 2, 99);
        const PeriodizedReport rp = periodized_bound_test(g, prod, 2, 99);
        base = std::max(base, rb.ratio);
        worst = std::max(worst, rp.ratio);
        if (rp.ratio > 100.0 * rb.ratio) pass = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "scaled fractions at s=1 over L in {2^8,2^10,2^12}: worst ratio %.4f vs "
                  "baseline %.4f (bound 100x)",
                  worst, base);
    record("periodization", pass, buf);
}

void witness_construction() {
    Rng rng(8080);
    int produced = 0, checked = 0;
    bool pass = true;
    for (int t = 0; t < 1000; ++t) {
        const std::int64_t m = 10 + static_cast<std::int64_t>(rng.below(40));
        Array2 a(m, m);
        for (auto& z : a.v) z = rng.cgaussian();
        const double eps = 0.2 + 1.5 * rng.uniform();
        const auto N = witness_windows(a, eps);
        ++checked;
        if (!N.has_value()) continue;
        ++produced;
        for (std::size_t k = 0; k + 1 < N->terms.size(); ++k) {
            if (N->terms[k + 1] < 2 * N->terms[k]) pass = false;
            const cplx anchor = a(N->terms[k], N->terms[k]);
            double sup = 0.0;
            for (std::int64_t n1 = N->terms[k]; n1 <= N->terms[k + 1]; ++n1)
                for (std::int64_t n2 = N->terms[k]; n2 <= N->terms[k + 1]; ++n2)
                    sup = std::max(sup, std::abs(a(n1, n2) - anchor));
            if (sup < eps) pass = false;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "%d random inputs, %d windows produced: tau>=2 and window sup >= eps, exact",
                  checked, produced);
    record("witness-construction", pass && produced > 0, buf);
}

void determinism() {
    ExperimentConfig growth;
    growth.command = "growth-study";
    growth.seed = 11;
    growth.trials = 4;
    growth.s_min = 0;
    growth.s_max = 1;
    growth.windows = 2;
    const RunReport g1 = cmd_growth_study(growth);
    const RunReport g2 = cmd_growth_study(growth);
    std::ostringstream c1, c2;
    g1.to_csv(c1);
    g2.to_csv(c2);

    ExperimentConfig fejer;
    fejer.command = "fejer-check";
    fejer.seed = 3;
    fejer.trials = 1;
    fejer.L1 = 64;
    fejer.L2 = 64;
    const RunReport f1 = cmd_fejer_check(fejer);
    const RunReport f2 = cmd_fejer_check(fejer);
    std::ostringstream j1, j2;
    f1.to_json(j1);
    f2.to_json(j2);
    const auto rows1 = nlohmann::json::parse(j1.str()).at("rows");
    const auto rows2 = nlohmann::json::parse(j2.str()).at("rows");

    const bool pass = c1.str() == c2.str() && rows1 == rows2;
    record("determinism", pass,
           "identical seed+config reruns: byte-identical CSV and JSON rows");
}

} // namespace

int main() {
    criterion("rm-inequalities", rm_inequalities);
    criterion("dyadic-decomposition", dyadic_decomposition);
    criterion("lemma3", lemma3);
    criterion("projection-identities", projection_identities);
    criterion("variation-bounds", variation_bounds);
    criterion("fejer-identity", fejer_identity);
    criterion("parity-partition", parity_partition);
    criterion("counterexample", counterexample_reproduction);
    criterion("decay-estimate", decay_estimate);
    criterion("periodization", periodization_evidence);
    criterion("witness-construction", witness_construction);
    criterion("determinism", determinism);

    std::printf("%d criterion(s) failed\n", failures);
    return failures > 0 ? 1 : 0;
}
