#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "hifs/geometry.hpp"

namespace hifs {

using Matrix2 = std::array<Complex, 4>;  // row-major a, b, c, d

enum class DomainTag { disc, half_plane, generic };

std::string_view to_string(DomainTag tag);

/// A fractional-linear map z -> (az + b)/(cz + d).
///
/// Stored with det = 1 and a canonical sign (first nonzero entry has positive
/// real part, or zero real part and positive imaginary part), so two maps are
/// equal iff their stored matrices agree. A disc-tagged map is checked to have
/// the automorphism shape [[alpha, beta], [conj(beta), conj(alpha)]].
class MoebiusMap {
public:
    MoebiusMap();  // identity, disc-tagged

    /// Throws DomainError if det = 0 or if the tag does not match the matrix.
    static MoebiusMap from_matrix(const Matrix2& m, DomainTag tag = DomainTag::generic);
    /// Tags the matrix as a disc automorphism when it has that shape, generic otherwise.
    static MoebiusMap infer(const Matrix2& m);

    static MoebiusMap identity() { return MoebiusMap(); }
    static MoebiusMap rotation(double theta);

    const Matrix2& matrix() const { return m_; }
    DomainTag tag() const { return tag_; }
    bool is_disc_automorphism() const { return tag_ == DomainTag::disc; }

    /// Throws SingularityError at a pole.
    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;

    Complex trace() const { return m_[0] + m_[3]; }
    bool is_identity(double tol = 1e-12) const;

private:
    MoebiusMap(const Matrix2& m, DomainTag tag) : m_(m), tag_(tag) {}

    Matrix2 m_;
    DomainTag tag_;
};

/// gamma(z) = e^{i theta} (z + a) / (1 + conj(a) z), so gamma(0) = e^{i theta} a.
MoebiusMap make_disc_auto(DiscPoint a, double theta);
/// Same parameterization on a raw center (|a| < 1 required, no boundary margin).
MoebiusMap make_disc_auto_raw(Complex a, double theta);

/// g o f (f applied first). Mixing disc and half-plane tags is rejected.
MoebiusMap compose(const MoebiusMap& g, const MoebiusMap& f);
MoebiusMap inverse(const MoebiusMap& g);
Complex apply(const MoebiusMap& g, Complex z);
Complex deriv(const MoebiusMap& g, Complex z);

/// Conjugate a half-plane map by the Cayley transform: C o h o C^{-1}.
MoebiusMap halfplane_to_disc(const MoebiusMap& h);
/// Half-plane map z -> z + t as a disc map; disc-tagged when t is real.
MoebiusMap halfplane_translation(Complex t);

/// Distance between the projective classes: min over sign of the Frobenius norm.
double matrix_distance(const MoebiusMap& g, const MoebiusMap& f);

enum class AutKind { identity, elliptic, parabolic, hyperbolic };
std::string_view to_string(AutKind kind);

struct AutClass {
    AutKind kind = AutKind::identity;
    /// Elliptic: the interior fixed point. Parabolic: the boundary fixed point.
    /// Hyperbolic: attracting point first, repelling second.
    std::vector<Complex> fixed_points;
    /// arccosh(|tr|/2) for hyperbolic maps, equal to min_z omega(z, g z); zero otherwise.
    double translation_length = 0.0;
    /// Signed rotation angle about the fixed point, elliptic maps only.
    double rotation_angle = 0.0;
    /// | |tr| - 2 | was inside the parabolic tolerance without being exactly zero.
    bool borderline = false;
};

inline constexpr double kParabolicTol = 1e-9;

/// Throws PreconditionError for maps that are not disc automorphisms.
AutClass classify_auto(const MoebiusMap& g);

/// The principal k-th root in the one-parameter subgroup through g.
MoebiusMap kth_root(const MoebiusMap& g, int k);
/// g composed with itself k times (k >= 0).
MoebiusMap power(const MoebiusMap& g, int k);

}  // namespace hifs
