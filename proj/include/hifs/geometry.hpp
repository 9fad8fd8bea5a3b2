#pragma once

#include <complex>
#include <vector>

namespace hifs {

using Complex = std::complex<double>;

/// Points closer than this to the boundary circle are rejected.
inline constexpr double kBoundaryEps = 1e-13;

/// A point of the unit disc with |z| < 1 - eps enforced at construction.
class DiscPoint {
public:
    DiscPoint() = default;
    explicit DiscPoint(Complex z, double eps = kBoundaryEps);
    DiscPoint(double x) : DiscPoint(Complex(x, 0.0)) {}  // NOLINT: real literals are common

    Complex value() const { return z_; }
    double abs() const { return std::abs(z_); }

    /// True if z would be accepted with the given boundary margin.
    static bool admissible(Complex z, double eps = kBoundaryEps);

private:
    Complex z_{0.0, 0.0};
};

/// A point of the upper half-plane with Im z > eps.
class HalfPlanePoint {
public:
    explicit HalfPlanePoint(Complex z, double eps = kBoundaryEps);
    Complex value() const { return z_; }

private:
    Complex z_;
};

/// Closed hyperbolic disc.
struct HyperbolicBall {
    DiscPoint center;
    double radius = 0.0;

    HyperbolicBall() = default;
    HyperbolicBall(DiscPoint c, double r);
};

// The metric has density 1/(1-|z|^2) (curvature -4), so that
// omega(z,w) = artanh(|z-w| / |1 - z conj(w)|).

/// |z-w| / |1 - z conj(w)|, the pseudo-hyperbolic distance. Accepts raw values.
double pseudo_distance(Complex z, Complex w);

/// Hyperbolic distance on raw values assumed inside the disc.
double omega(Complex z, Complex w);

double disc_distance(DiscPoint z, DiscPoint w);
double metric_density(DiscPoint z);

DiscPoint cayley(HalfPlanePoint z);
HalfPlanePoint cayley_inv(DiscPoint z);

/// Raw Cayley transform (z - i)/(z + i), no domain checks.
Complex cayley_raw(Complex z);
/// Raw inverse i(1 + w)/(1 - w).
Complex cayley_inv_raw(Complex w);

double halfplane_distance(HalfPlanePoint z, HalfPlanePoint w);

bool ball_contains(const HyperbolicBall& ball, DiscPoint z);

/// Point at hyperbolic distance r from 0 in direction theta.
Complex polar_point(double r, double theta);

/// Deterministic sample of a ball: center plus `rings` circles of `per_ring` points.
std::vector<Complex> sample_ball(const HyperbolicBall& ball, int rings, int per_ring);

}  // namespace hifs
