#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hifs/geometry.hpp"
#include "hifs/holomap.hpp"

namespace testing {

using hifs::Complex;

// Closed form cosh(2 omega) = 1 + 2|z - w|^2 / ((1 - |z|^2)(1 - |w|^2)), used
// as an oracle that shares no code with omega().
inline double omega_oracle(Complex z, Complex w) {
    const double q = 2.0 * std::norm(z - w) / ((1.0 - std::norm(z)) * (1.0 - std::norm(w)));
    return 0.5 * std::acosh(1.0 + q);
}

// Half-plane distance with the same curvature normalization.
inline double halfplane_oracle(Complex z, Complex w) {
    return 0.5 * std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

// Central difference for the complex derivative.
template <typename F>
Complex numeric_derivative(const F& f, Complex z, double h = 1e-6) {
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

inline double distortion_oracle(Complex fz, Complex dfz, Complex z) {
    return std::abs(dfz) * (1.0 - std::norm(z)) / (1.0 - std::norm(fz));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    Complex in_disc(double r) {
        return std::polar(r * std::sqrt(uniform()), 2.0 * std::numbers::pi * uniform());
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

    // A random holomorphic self-map from the basic node kinds.
    hifs::MapExpr map(int depth = 2) {
        switch (integer(0, depth > 0 ? 5 : 3)) {
            case 0:
                return hifs::MapExpr::mobius(hifs::make_disc_auto(hifs::DiscPoint(in_disc(0.8)), uniform(0, 6.28)));
            case 1:
                return hifs::MapExpr::monomial(integer(1, 4));
            case 2:
                return hifs::MapExpr::scale(in_disc(0.95));
            case 3: {
                std::vector<hifs::DiscPoint> zeros;
                for (int k = integer(1, 3); k > 0; --k) {
                    zeros.emplace_back(in_disc(0.8));
                }
                return hifs::MapExpr::blaschke(std::move(zeros), uniform(0, 6.28));
            }
            case 4:
                return hifs::MapExpr::compose({map(depth - 1), map(depth - 1)});
            default:
                return hifs::MapExpr::average({map(depth - 1), map(depth - 1)}, {0.3, 0.7});
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace testing
