#include <doctest.h>

#include "hifs/errors.hpp"
#include "hifs/straighten.hpp"
#include "support.hpp"

using namespace hifs;

TEST_SUITE("straighten") {
    TEST_CASE("probe grids") {
        const auto g = ProbeGrid::standard();
        CHECK(g.points.size() == 25);
        CHECK(std::abs(g.points[0]) == 0.0);
        CHECK(ProbeGrid::rings({0.2, 0.4, 0.8}, 5).points.size() == 16);
    }

    TEST_CASE("left straightening of the telescoping stream") {
        const auto s = scale_product_stream(1.0, 2.0);
        const auto r = left_straighten(s, 3000, ProbeGrid::standard());
        CHECK_FALSE(r.constant_limit);
        CHECK(r.gammas.size() == 3000);
        // exact limit z/2; the partial product at N is (N + 2) / (2 (N + 1))
        const double partial = 3002.0 / (2.0 * 3001.0);
        for (std::size_t k = 0; k < r.grid.size(); ++k) {
            CHECK(std::abs(r.h_samples[k] - partial * r.grid[k]) < 1e-9);
        }
        CHECK(r.trace.back().distortion_at_0 == doctest::Approx(partial).epsilon(1e-9));
        CHECK(r.cauchy_residual < 1e-7);
    }

    TEST_CASE("left straightening detects constant limits") {
        const auto r = left_straighten(GeneratorStream::cycle({MapExpr::scale(0.5)}), 60, ProbeGrid::standard());
        CHECK(r.constant_limit);
    }

    TEST_CASE("automorphism streams straighten to the identity") {
        const auto s = GeneratorStream::cycle({MapExpr::mobius(make_disc_auto(DiscPoint(Complex(0.2, 0.3)), 0.4))});
        const auto r = left_straighten(s, 12, ProbeGrid::standard());
        CHECK(r.converged);
        for (std::size_t k = 0; k < r.grid.size(); ++k) {
            CHECK(std::abs(r.h_samples[k] - r.grid[k]) < 1e-9);
        }
    }

    TEST_CASE("right straightening along the z^2 backward orbit") {
        std::vector<Complex> w;
        for (int n = 0; n <= 25; ++n) {
            w.push_back(std::pow(0.5, std::ldexp(1.0, -n)));
        }
        const auto r = right_straighten(monomial_stream(2), BackwardOrbit::from_values(w), 25, ProbeGrid::standard());
        CHECK(r.converged);
        CHECK_FALSE(r.constant_limit);
        REQUIRE(r.g_derivs.size() == 25);
        for (const Complex& d : r.g_derivs) {
            CHECK(d.real() >= -1e-10);
            CHECK(std::abs(d.imag()) < 1e-9);
        }
        w[3] += 1e-3;
        CHECK_THROWS_AS(right_straighten(monomial_stream(2), BackwardOrbit::from_values(w), 25, ProbeGrid::standard()),
                        PreconditionError);
    }

    TEST_CASE("limit distance and distortion traces") {
        const auto s = scale_product_stream(1.0, 2.0);
        const auto d = limit_distance(s, DiscPoint(0.0), DiscPoint(0.6), 200);
        CHECK(d.trace.size() == 201);
        for (std::size_t n = 1; n < d.trace.size(); ++n) {
            CHECK(d.trace[n] <= d.trace[n - 1] + 1e-14);
        }
        const double expect = 202.0 / (2.0 * 201.0);
        CHECK(d.value == doctest::Approx(std::atanh(0.6 * expect)).epsilon(1e-12));
        CHECK(distortion_limit(s, DiscPoint(0.0), 200).value == doctest::Approx(expect).epsilon(1e-12));
    }

    TEST_CASE("mu-step for a hyperbolic automorphism") {
        const MapExpr f = MapExpr::mobius(make_disc_auto(0.5, 0.0));
        for (std::size_t N = 1; N <= 10; ++N) {
            CHECK(std::abs(mu_step(f, DiscPoint(0.0), 1, N).value - std::atanh(0.5)) < 1e-9);
        }
    }

    TEST_CASE("semiconjugacy probe") {
        const auto hyp = semiconjugacy_probe(MapExpr::mobius(make_disc_auto(0.5, 0.0)), 12);
        CHECK(hyp.kind == SemiconjugacyKind::automorphic);
        CHECK(hyp.residual < 1e-8);
        const auto none = semiconjugacy_probe(MapExpr::compose({MapExpr::scale(0.5), MapExpr::monomial(2)}), 30);
        CHECK(none.kind == SemiconjugacyKind::none);
        const MapExpr g = MapExpr::compose({MapExpr::mobius(make_disc_auto(0.5, 0.0)), MapExpr::monomial(2)});
        const auto semi = semiconjugacy_probe(g, 40);
        CHECK(semi.kind == SemiconjugacyKind::semiconjugate_to_auto);
        CHECK(semi.residual < 1e-6);
        CHECK_THROWS_AS(semiconjugacy_probe(g, 5), InconclusiveError);
    }

    TEST_CASE("three-point Moebius fit") {
        const MoebiusMap g = make_disc_auto(DiscPoint(Complex(0.1, -0.6)), 2.0);
        const std::array<Complex, 3> from{0.0, 0.5, Complex(0.0, 0.3)};
        const std::array<Complex, 3> to{g(from[0]), g(from[1]), g(from[2])};
        CHECK(matrix_distance(fit_moebius(from, to), g) < 1e-10);
        CHECK_THROWS_AS(fit_moebius({0.0, 0.0, 0.5}, to), SingularityError);
    }
}
