#include <doctest.h>

#include "hifs/criteria.hpp"
#include "hifs/errors.hpp"
#include "support.hpp"

using namespace hifs;

TEST_SUITE("criteria") {
    TEST_CASE("fixed-point series terms") {
        const auto s = scale_product_stream(1.0, 2.0);
        const auto r = distortion_series(s, DiscPoint(0.0), 1000, SeriesMode::fixed_point);
        REQUIRE(r.rows.size() == 1000);
        // f_n^#(0) = 1 - 1/(n+1)^2
        double sum = 0.0;
        for (const auto& row : r.rows) {
            const double expect = 1.0 / ((row.n + 1.0) * (row.n + 1.0));
            CHECK(row.term == doctest::Approx(expect).epsilon(1e-9));
            sum += expect;
        }
        CHECK(r.rows.back().partial_sum == doctest::Approx(sum).epsilon(1e-9));
        CHECK(r.verdict == SeriesVerdict::summable_so_far);
        CHECK(r.block_ratio == doctest::Approx(0.5).epsilon(0.02));
    }

    TEST_CASE("harmonic series diverges") {
        const auto r = distortion_series(scale_product_stream(1.0, 1.0), DiscPoint(0.0), 4000, SeriesMode::fixed_point);
        CHECK(r.verdict == SeriesVerdict::diverging);
        CHECK(r.block_ratio > 0.9);
    }

    TEST_CASE("orbit mode product matches the chain rule") {
        const auto r = distortion_series(contraction_shift_stream(0.1, 0.01, 2.0), DiscPoint(0.3), 500, SeriesMode::orbit);
        REQUIRE(r.product_consistency);
        CHECK(*r.product_consistency < 1e-9);
    }

    TEST_CASE("automorphism streams give zero terms") {
        const auto r = distortion_series(alternating_rotation_stream(0.3, 0.7), DiscPoint(0.4), 300, SeriesMode::orbit);
        CHECK(r.verdict == SeriesVerdict::summable_so_far);
        CHECK(r.rows.back().partial_sum == 0.0);
        CHECK_THROWS_AS(distortion_series(GeneratorStream::cycle({MapExpr::constant(DiscPoint(0.1))}), DiscPoint(0.0),
                                          10, SeriesMode::orbit),
                        PreconditionError);
    }

    TEST_CASE("left and right limit classification") {
        const auto basel = scale_product_stream(1.0, 2.0);
        const auto harm = scale_product_stream(1.0, 1.0);
        CHECK(classify_left_limits(basel, DiscPoint(0.0), 4000).verdict == LimitVerdict::nonconstant_limits);
        CHECK(classify_left_limits(harm, DiscPoint(0.0), 4000).verdict == LimitVerdict::constant_limits);
        const auto r = classify_right_limits(harm, DiscPoint(0.7), 4000);
        CHECK(r.verdict == LimitVerdict::constant_limits);
        REQUIRE(r.constant_estimate);
        CHECK(std::abs(*r.constant_estimate) == doctest::Approx(0.7 / 4001.0).epsilon(1e-9));
        CHECK(classify_right_limits(basel, DiscPoint(0.7), 4000).verdict == LimitVerdict::nonconstant_limits);
        const auto esc = classify_left_limits(GeneratorStream::cycle({MapExpr::mobius(make_disc_auto(0.5, 0.0))}),
                                              DiscPoint(0.0), 500);
        CHECK(esc.verdict == LimitVerdict::not_relatively_compact);
    }

    TEST_CASE("right values") {
        const auto s = scale_product_stream(1.0, 2.0);
        const auto v = right_value(s, 0.4, 100);
        const double p = 102.0 / (2.0 * 101.0);
        CHECK(std::abs(v.value - 0.4 * p) < 1e-14);
        CHECK(v.distortion == doctest::Approx(p * (1.0 - 0.16) / (1.0 - 0.16 * p * p)).epsilon(1e-12));
    }

    TEST_CASE("fixed point tracking") {
        const auto s = contraction_shift_stream(0.1, 0.01, 2.0);
        const auto t = track_fixed_points(s, 1000);
        CHECK(t.guard_passed);
        CHECK(t.fixed_point_verdict == TrackVerdict::converges);
        CHECK(t.orbit_verdict == TrackVerdict::converges);
        CHECK(t.orbit_gap < 1e-6);
        for (std::size_t n = 0; n < t.fixed_points.size(); ++n) {
            REQUIRE(t.fixed_points[n]);
            CHECK(t.residuals[n] < 1e-10);
        }
        const auto rot = track_fixed_points(alternating_rotation_stream(0.3, 0.7), 100);
        CHECK_FALSE(rot.guard_passed);
        CHECK(rot.orbit_verdict == TrackVerdict::refused);
        CHECK_FALSE(rot.guard_reason.empty());
    }
}
