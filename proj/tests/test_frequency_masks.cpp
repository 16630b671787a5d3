#include "doctest.h"

#include <numeric>
#include <sstream>
#include <vector>

#include "oscmult/frequency_set.hpp"
#include "oscmult/masks.hpp"
#include "oscmult/rng.hpp"

using namespace oscmult;

namespace {

std::int64_t totient(std::int64_t q) {
    std::int64_t count = 0;
    for (std::int64_t a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) ++count;
    return count;
}

} // namespace

TEST_CASE("gen_rationals small cases") {
    const auto r0 = gen_rationals(0);
    REQUIRE(r0.size() == 2);
    CHECK(r0[0] == Rational(0));
    CHECK(r0[1] == Rational(1));

    const auto r1 = gen_rationals(1);
    REQUIRE(r1.size() == 3);
    CHECK(r1[0] == Rational(1, 2));
    CHECK(r1[1] == Rational(1, 3));
    CHECK(r1[2] == Rational(2, 3));

    CHECK(gen_rationals(2).size() == 14); // phi(4)+phi(5)+phi(6)+phi(7)
}

TEST_CASE("gen_rationals matches the totient sum and the cardinality bound") {
    for (int s = 1; s <= 6; ++s) {
        std::int64_t expected = 0;
        for (std::int64_t q = pow2i(s); q < pow2i(s + 1); ++q) expected += totient(q);
        const auto rs = gen_rationals(s);
        CHECK(static_cast<std::int64_t>(rs.size()) == expected);
        CHECK(static_cast<std::int64_t>(rs.size()) <= pow2i(2 * s)); // 4^s
        for (const Rational& r : rs) {
            CHECK(r.den() >= pow2i(s));
            CHECK(r.den() < pow2i(s + 1));
            CHECK(Rational(0) <= r);
            CHECK(r <= Rational(1));
            CHECK(std::gcd(r.num(), r.den()) == 1);
        }
    }
}

TEST_CASE("separation checks") {
    SUBCASE("1d") {
        const std::vector<Rational> ok{Rational(0), Rational(1)};
        CHECK(check_separation(ok, Rational(1)));
        const std::vector<Rational> close{Rational(0), Rational(1, 2)};
        CHECK(!check_separation(close, Rational(1)));
        CHECK(check_separation(close, Rational(2)));

        // scaled reduced fractions with dyadic denominators in [2,4)
        const auto r1 = gen_rationals(1);
        CHECK(check_separation(r1, Rational(16)));
    }
    SUBCASE("2d") {
        const std::vector<std::pair<Rational, Rational>> ok{{Rational(0), Rational(0)},
                                                            {Rational(1), Rational(0)}};
        CHECK(check_separation_2d(ok, Rational(1)));
        const std::vector<std::pair<Rational, Rational>> bad{
            {Rational(0), Rational(0)}, {Rational(1, 2), Rational(1, 2)}};
        CHECK(!check_separation_2d(bad, Rational(1)));
    }
}

TEST_CASE("scaled rational sets") {
    const FrequencySet axis = scaled_rational_axis_set(1);
    CHECK(axis.Q1 == 6);
    CHECK(axis.Q2 == 1);
    REQUIRE(axis.size() == 3);
    // 16 * {1/2, 1/3, 2/3} = {48, 32, 64} over 6
    CHECK(axis.points[0].n1 == 48);
    CHECK(axis.points[1].n1 == 32);
    CHECK(axis.points[2].n1 == 64);
    CHECK(axis.lambda1(0) == Rational(8));
    CHECK(axis.lambda1(1) == Rational(16, 3));

    const FrequencySet prod = scaled_rational_product_set(1);
    CHECK(prod.size() == 9);
    CHECK(prod.Q1 == 6);
    CHECK(prod.Q2 == 6);
}

TEST_CASE("frequency set rejects separation violations") {
    CHECK_THROWS_AS(FrequencySet(4, 4, {{0, 0}, {3, 3}}), std::invalid_argument);
    CHECK_NOTHROW(FrequencySet(4, 4, {{0, 0}, {4, 3}}));
    CHECK_NOTHROW(FrequencySet(4, 4, {{0, 0}, {1, 4}}));
}

TEST_CASE("random separated sets satisfy the invariant") {
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        const std::int64_t q1 = 2 + static_cast<std::int64_t>(rng.below(8));
        const std::int64_t q2 = 2 + static_cast<std::int64_t>(rng.below(8));
        const FrequencySet fs =
            random_separated_set(q1, q2, 5, 6 * q1, 6 * q2, rng);
        CHECK(fs.size() == 5); // the constructor revalidates separation
    }
}

TEST_CASE("build_masks validation") {
    const TorusGrid2 g(4, 4, 32, 32);
    CHECK_THROWS_AS(build_masks(g, FrequencySet(3, 4, {{0, 0}})), std::invalid_argument);
    CHECK_THROWS_AS(build_masks(TorusGrid2(4, 4, 4, 32), FrequencySet(4, 4, {{0, 0}})),
                    std::invalid_argument); // L1 < 2 Q1
    CHECK_THROWS_AS(build_masks(g, FrequencySet(4, 4, {{17, 0}})),
                    std::invalid_argument); // off the band
    // separated on the line, colliding around the circle
    CHECK_THROWS_AS(build_masks(TorusGrid2(4, 4, 8, 8), FrequencySet(4, 4, {{-4, 0}, {3, 0}})),
                    std::invalid_argument);

    const MaskFamily m = build_masks(g, FrequencySet(4, 4, {{0, 0}, {8, 8}}));
    CHECK(m.n1_max == 3); // ceil(log2 4) + 1
    CHECK(m.n2_max == 3);
}

TEST_CASE("mask membership around a single point") {
    const TorusGrid2 g(8, 8, 32, 32);
    const MaskFamily m = build_masks(g, FrequencySet(8, 8, {{0, 0}}));
    // level 0 admits |k|/8 < 1/2, i.e. |k| <= 3
    for (std::int64_t k = -16; k < 16; ++k) {
        CHECK(m.contains(0, 0, k, 0) == (std::llabs(k) <= 3));
        CHECK(m.contains(0, 0, 0, k) == (std::llabs(k) <= 3));
    }
    // at n = ceil(log2 Q) only the point itself remains
    const int stab = ceil_log2(8);
    for (std::int64_t k1 = -16; k1 < 16; ++k1)
        for (std::int64_t k2 = -16; k2 < 16; ++k2)
            CHECK(m.contains(stab, stab, k1, k2) == (k1 == 0 && k2 == 0));
}

TEST_CASE("mask monotonicity and stabilization on random sets") {
    Rng rng(1234);
    for (int t = 0; t < 20; ++t) {
        const std::int64_t q = 3 + static_cast<std::int64_t>(rng.below(6));
        const TorusGrid2 g(q, q, 64, 64);
        const FrequencySet fs = random_separated_set(q, q, 3, g.L1 / 2 - 1, g.L2 / 2 - 1, rng);
        MaskFamily m{g, fs, ceil_log2(q) + 1, ceil_log2(q) + 1};
        for (std::int64_t k1 = -32; k1 < 32; k1 += 3)
            for (std::int64_t k2 = -32; k2 < 32; k2 += 3) {
                for (int n1 = 0; n1 < m.n1_max; ++n1) {
                    CHECK((m.contains(n1 + 1, 0, k1, k2) ? m.contains(n1, 0, k1, k2) : true));
                }
                for (int n2 = 0; n2 < m.n2_max; ++n2) {
                    CHECK((m.contains(0, n2 + 1, k1, k2) ? m.contains(0, n2, k1, k2) : true));
                }
                // stabilized level equals the level before it
                CHECK(m.contains(m.n1_max, m.n2_max, k1, k2) ==
                      m.contains(m.n1_max - 1, m.n2_max - 1, k1, k2));
            }
    }
}

TEST_CASE("masked spectrum agrees with per-bin membership") {
    const TorusGrid2 g(5, 3, 16, 12);
    const FrequencySet fs(5, 3, {{0, 0}, {6, 1}});
    const MaskFamily m = build_masks(g, fs);
    Rng rng(55);
    Spectrum2 f(g);
    for (auto& z : f.coeffs) z = rng.cgaussian();

    for (int n1 = 0; n1 <= m.n1_max; ++n1)
        for (int n2 = 0; n2 <= m.n2_max; ++n2) {
            const Spectrum2 masked = masked_spectrum(f, m, n1, n2);
            for (std::int64_t u1 = 0; u1 < g.L1; ++u1)
                for (std::int64_t u2 = 0; u2 < g.L2; ++u2) {
                    const std::size_t idx = static_cast<std::size_t>(u1 * g.L2 + u2);
                    const bool in = m.contains(n1, n2, TorusGrid2::signed_of(u1, g.L1),
                                               TorusGrid2::signed_of(u2, g.L2));
                    CHECK(masked.coeffs[idx] == (in ? f.coeffs[idx] : cplx{}));
                }
        }
}

TEST_CASE("mask text export shape") {
    const TorusGrid2 g(4, 4, 8, 8);
    const MaskFamily m = build_masks(g, FrequencySet(4, 4, {{0, 0}}));
    std::ostringstream os;
    mask_to_text(m, 0, 0, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "mask 0 0 8 8");
    std::string row;
    int rows = 0, ones = 0;
    while (std::getline(is, row)) {
        CHECK(row.size() == 8);
        for (char c : row) {
            CHECK((c == '0' || c == '1'));
            ones += c == '1';
        }
        ++rows;
    }
    CHECK(rows == 8);
    CHECK(ones == 9); // |k1| <= 1 and |k2| <= 1 around the origin
}
