#pragma once

// Batch arithmetic over structure-of-arrays point sets.
//
// Each kernel has a scalar reference version and an AVX2 version; the public
// entry points dispatch at runtime on CPU support. Both variants evaluate the
// same operation sequence without FMA contraction, so results agree bit for bit.

#include <array>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace hifs::kernels {

using Complex = std::complex<double>;
using Matrix2 = std::array<Complex, 4>;  // row-major a, b, c, d

enum class Isa { scalar, avx2 };

/// ISA used by the dispatching entry points.
Isa active_isa();
/// Override dispatch (tests, HIFS_SIMD=scalar). Requests for unsupported ISAs fall back to scalar.
void set_isa(Isa isa);
bool avx2_supported();
std::string_view isa_name(Isa isa);

struct PointSet {
    std::vector<double> re;
    std::vector<double> im;

    PointSet() = default;
    explicit PointSet(std::span<const Complex> pts);
    std::size_t size() const { return re.size(); }
    Complex at(std::size_t i) const { return {re[i], im[i]}; }
};

/// Points on the circle |z| = radius, equally spaced.
PointSet circle(double radius, std::size_t count);

// out = (a z + b) / (c z + d), elementwise.
void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out);
// max_i |m(z_i) - z_i|
double max_deviation(const Matrix2& m, const PointSet& in);
// out_i = |z_i - w_i| / |1 - z_i conj(w_i)|
void pseudo_distance(const PointSet& z, const PointSet& w, std::span<double> out);

namespace scalar {
void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out);
double max_deviation(const Matrix2& m, const PointSet& in);
void pseudo_distance(const PointSet& z, const PointSet& w, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void mobius_apply(const Matrix2& m, const PointSet& in, PointSet& out);
double max_deviation(const Matrix2& m, const PointSet& in);
void pseudo_distance(const PointSet& z, const PointSet& w, std::span<double> out);
}  // namespace avx2

}  // namespace hifs::kernels
