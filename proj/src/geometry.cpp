#include "hifs/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hifs/errors.hpp"

namespace hifs {

namespace {

std::string describe(Complex z) {
    return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

}  // namespace

bool DiscPoint::admissible(Complex z, double eps) {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < 1.0 - eps;
}

DiscPoint::DiscPoint(Complex z, double eps) : z_(z) {
    if (!admissible(z, eps)) {
        throw DomainError("point " + describe(z) + " is not inside the unit disc");
    }
}

HalfPlanePoint::HalfPlanePoint(Complex z, double eps) : z_(z) {
    if (!(std::isfinite(z.real()) && z.imag() > eps && std::isfinite(z.imag()))) {
        throw DomainError("point " + describe(z) + " is not in the upper half-plane");
    }
}

HyperbolicBall::HyperbolicBall(DiscPoint c, double r) : center(c), radius(r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("hyperbolic ball radius must be a finite nonnegative number");
    }
}

double pseudo_distance(Complex z, Complex w) {
    const double num = std::abs(z - w);
    if (num == 0.0) {
        return 0.0;
    }
    return num / std::abs(1.0 - z * std::conj(w));
}

double omega(Complex z, Complex w) {
    return std::atanh(pseudo_distance(z, w));
}

double disc_distance(DiscPoint z, DiscPoint w) {
    return omega(z.value(), w.value());
}

double metric_density(DiscPoint z) {
    return 1.0 / (1.0 - std::norm(z.value()));
}

Complex cayley_raw(Complex z) {
    const Complex i(0.0, 1.0);
    return (z - i) / (z + i);
}

Complex cayley_inv_raw(Complex w) {
    const Complex i(0.0, 1.0);
    return i * (1.0 + w) / (1.0 - w);
}

DiscPoint cayley(HalfPlanePoint z) {
    return DiscPoint(cayley_raw(z.value()));
}

HalfPlanePoint cayley_inv(DiscPoint z) {
    return HalfPlanePoint(cayley_inv_raw(z.value()));
}

double halfplane_distance(HalfPlanePoint z, HalfPlanePoint w) {
    return omega(cayley_raw(z.value()), cayley_raw(w.value()));
}

bool ball_contains(const HyperbolicBall& ball, DiscPoint z) {
    return disc_distance(ball.center, z) <= ball.radius + 1e-12;
}

Complex polar_point(double r, double theta) {
    return std::polar(std::tanh(r), theta);
}

std::vector<Complex> sample_ball(const HyperbolicBall& ball, int rings, int per_ring) {
    const Complex c = ball.center.value();
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(1 + rings * per_ring));
    out.push_back(c);
    for (int k = 1; k <= rings; ++k) {
        const double r = ball.radius * k / rings;
        for (int j = 0; j < per_ring; ++j) {
            // stagger alternate rings so the sample is not radially aligned
            const double theta = 2.0 * std::numbers::pi * (j + 0.5 * (k % 2)) / per_ring;
            const Complex u = polar_point(r, theta);
            out.push_back((u + c) / (1.0 + std::conj(c) * u));
        }
    }
    return out;
}

}  // namespace hifs
