#include <doctest.h>

#include "hifs/errors.hpp"
#include "hifs/holomap.hpp"
#include "support.hpp"

using namespace hifs;

TEST_SUITE("holomap") {
    TEST_CASE("jets agree with numerical derivatives") {
        testing::Rng rng(31);
        for (int i = 0; i < 500; ++i) {
            const MapExpr f = rng.map();
            const Complex z = rng.in_disc(0.8);
            const Jet j = f.jet(z);
            CHECK(std::abs(j.value - f(z)) < 1e-15);
            const Complex num = testing::numeric_derivative(f, z, 1e-6);
            CHECK(std::abs(j.deriv - num) < 1e-6 * (1.0 + std::abs(num)));
        }
    }

    TEST_CASE("distortion matches the definition and is at most 1") {
        testing::Rng rng(32);
        for (int i = 0; i < 500; ++i) {
            const MapExpr f = rng.map();
            const Complex z = rng.in_disc(0.9);
            const Jet j = f.jet(z);
            const double d = distortion(f, DiscPoint(z));
            CHECK(d <= 1.0 + 1e-12);
            if (!f.is_automorphism()) {
                CHECK(d == doctest::Approx(testing::distortion_oracle(j.value, j.deriv, z)).epsilon(1e-10));
            } else {
                CHECK(std::abs(d - 1.0) < 1e-12);
            }
        }
    }

    TEST_CASE("node formulas") {
        const Complex z(0.3, 0.4);
        CHECK(std::abs(MapExpr::monomial(3)(z) - z * z * z) < 1e-15);
        CHECK(std::abs(MapExpr::scale(Complex(0.0, 0.5))(z) - Complex(0.0, 0.5) * z) < 1e-15);
        CHECK(std::abs(MapExpr::constant(DiscPoint(0.2))(z) - 0.2) < 1e-15);
        const Complex a(0.5, -0.1);
        const MapExpr b = MapExpr::blaschke({DiscPoint(a), DiscPoint(0.0)}, 0.4);
        CHECK(std::abs(b(z) - std::polar(1.0, 0.4) * (z - a) / (1.0 - std::conj(a) * z) * z) < 1e-15);
        CHECK(std::abs(std::abs(b(std::polar(1.0, 0.3))) - 1.0) < 1e-14);
        const MapExpr avg = MapExpr::average({MapExpr::identity(), MapExpr::monomial(2)}, {0.5, 0.5});
        CHECK(std::abs(avg(z) - 0.5 * (z + z * z)) < 1e-15);
        const MapExpr hp = MapExpr::hp_affine(Complex(1.0, 0.5));
        CHECK(std::abs(hp(cayley_raw(Complex(0.2, 1.0))) - cayley_raw(Complex(1.2, 1.5))) < 1e-14);
        const MapExpr c = MapExpr::compose({MapExpr::monomial(2), MapExpr::scale(0.5)});
        CHECK(std::abs(c(z) - 0.25 * z * z) < 1e-15);  // front applied last
    }

    TEST_CASE("invalid maps are rejected") {
        CHECK_THROWS_AS(MapExpr::monomial(0), DomainError);
        CHECK_THROWS_AS(MapExpr::scale(1.5), DomainError);
        CHECK_THROWS_AS(MapExpr::blaschke({}, 0.0), DomainError);
        CHECK_THROWS_AS(MapExpr::average({MapExpr::identity()}, {-1.0}), DomainError);
        CHECK_THROWS_AS(MapExpr::mobius(MoebiusMap::from_matrix({1.0, -1.0, 0.0, 1.0}, DomainTag::half_plane)), DomainError);
    }

    TEST_CASE("automorphism detection") {
        CHECK(MapExpr::mobius(make_disc_auto(0.3, 1.0)).is_automorphism());
        CHECK(MapExpr::scale(std::polar(1.0, 0.4)).is_automorphism());
        CHECK(MapExpr::blaschke({DiscPoint(0.3)}, 0.0).is_automorphism());
        CHECK(MapExpr::hp_affine(1.0).is_automorphism());
        CHECK_FALSE(MapExpr::hp_affine(Complex(1.0, 0.1)).is_automorphism());
        CHECK_FALSE(MapExpr::monomial(2).is_automorphism());
        CHECK(MapExpr::compose({MapExpr::scale(-1.0), MapExpr::blaschke({DiscPoint(0.1)}, 0.2)}).is_automorphism());
        CHECK(MapExpr::constant(DiscPoint(0.1)).is_constant());
    }

    TEST_CASE("Schwarz-Pick on random maps") {
        testing::Rng rng(33);
        for (int i = 0; i < 2000; ++i) {
            const MapExpr f = rng.map();
            const Complex z = rng.in_disc(0.9), w = rng.in_disc(0.9);
            CHECK(omega(f(z), f(w)) <= omega(z, w) + 1e-10);
        }
    }

    TEST_CASE("distortion as a distance quotient") {
        const MapExpr f = MapExpr::blaschke({DiscPoint(Complex(0.2, 0.1)), DiscPoint(-0.5)}, 0.3);
        const DiscPoint z(Complex(0.1, -0.3));
        CHECK(distortion_via_quotient(f, z, 1e-5) == doctest::Approx(distortion(f, z)).epsilon(1e-4));
        CHECK_THROWS_AS(distortion_via_quotient(f, z, 0.1), PreconditionError);
    }

    TEST_CASE("Denjoy-Wolff classification") {
        const DWReport e = denjoy_wolff(MapExpr::monomial(2));
        CHECK(e.kind == DWKind::elliptic_strict);
        CHECK(std::abs(e.point) < 1e-12);
        CHECK(e.multiplier == doctest::Approx(0.0));

        const DWReport h = denjoy_wolff(MapExpr::mobius(make_disc_auto(0.5, 0.0)));
        CHECK(h.kind == DWKind::hyperbolic);
        CHECK(std::abs(h.point - 1.0) < 1e-6);
        CHECK(h.multiplier == doctest::Approx(1.0 / 3.0).epsilon(1e-3));

        const DWReport p = denjoy_wolff(MapExpr::hp_affine(1.0));
        CHECK(p.kind == DWKind::parabolic);
        CHECK(p.multiplier == doctest::Approx(1.0).epsilon(1e-3));

        const DWReport r = denjoy_wolff(MapExpr::scale(std::polar(1.0, 0.3)));
        CHECK(r.kind == DWKind::elliptic_auto);
        CHECK(denjoy_wolff(MapExpr::identity()).kind == DWKind::identity);
    }

    TEST_CASE("fixed point polishing") {
        const MapExpr f = MapExpr::compose({MapExpr::mobius(make_disc_auto(0.1, 0.0)), MapExpr::scale(0.5)});
        const auto a = polish_fixed_point(f, 0.0);
        REQUIRE(a);
        CHECK(std::abs(f(*a) - *a) < 1e-14);
    }
}
