#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hifs/geometry.hpp"
#include "hifs/moebius.hpp"

namespace hifs {

class MapExpr;

namespace node {

struct Mobius {
    MoebiusMap map;  // always a disc automorphism
};
struct Monomial {
    int power = 1;
};
struct Scale {
    Complex factor;
};
struct Blaschke {
    std::vector<Complex> zeros;  // repetition encodes multiplicity
    double phase = 0.0;
};
struct Constant {
    Complex value;
};
struct Compose {
    std::vector<MapExpr> parts;  // parts.front() is applied last
};
struct HalfPlaneAffine {
    Complex translation;
    MoebiusMap disc_form;  // Cayley conjugate of z -> z + t
};
struct Average {
    std::vector<MapExpr> parts;
    std::vector<double> weights;  // positive, summing to one
};

}  // namespace node

using Node = std::variant<node::Mobius, node::Monomial, node::Scale, node::Blaschke, node::Constant,
                          node::Compose, node::HalfPlaneAffine, node::Average>;

/// Value and complex derivative at a point.
struct Jet {
    Complex value;
    Complex deriv;
};

/// An immutable expression tree of holomorphic self-maps of the disc.
///
/// Every primitive maps the disc into itself and both Compose and Average
/// preserve that, so any tree built through these factories is a self-map.
/// Evaluation works on raw complex numbers as well (all primitives are
/// rational), which root polishing relies on near the boundary.
class MapExpr {
public:
    MapExpr();  // identity

    static MapExpr mobius(const MoebiusMap& g);
    static MapExpr monomial(int power);
    static MapExpr scale(Complex factor);
    static MapExpr blaschke(std::vector<DiscPoint> zeros, double phase);
    static MapExpr constant(DiscPoint value);
    /// parts[0] o parts[1] o ... ; nested compositions are flattened.
    static MapExpr compose(std::vector<MapExpr> parts);
    static MapExpr hp_affine(Complex translation);
    static MapExpr average(std::vector<MapExpr> parts, std::vector<double> weights);
    static MapExpr identity() { return MapExpr(); }

    const Node& node() const { return state_->node; }
    std::string_view kind_name() const;

    Complex operator()(Complex z) const;
    Jet jet(Complex z) const;
    Complex derivative(Complex z) const { return jet(z).deriv; }

    bool is_constant() const;
    /// The Moebius form when the tree is structurally a disc automorphism.
    const std::optional<MoebiusMap>& as_automorphism() const { return state_->automorphism; }
    bool is_automorphism() const { return state_->automorphism.has_value(); }
    std::size_t depth() const;

private:
    struct State {
        Node node;
        std::optional<MoebiusMap> automorphism;  // computed once at construction
    };
    explicit MapExpr(Node n);
    std::shared_ptr<const State> state_;
};

struct EvalResult {
    DiscPoint point;
    bool clamped = false;  // raw value was within the boundary margin and was pulled inside
};

EvalResult eval(const MapExpr& f, DiscPoint z);
Complex deriv(const MapExpr& f, DiscPoint z);

/// |f'(z)| (1 - |z|^2) / (1 - |f(z)|^2), clamped to [0,1]. Values beyond
/// 1 + 1e-9 (plus the rounding allowance of 1 - |z|^2 near the circle) raise
/// ConsistencyError.
double distortion(const MapExpr& f, DiscPoint z);
double distortion_raw(const MapExpr& f, Complex z);
/// Same formula from an already computed jet.
double distortion_from_jet(Complex z, const Jet& j);

/// omega(f(z+h), f(z)) / omega(z+h, z), the distance-quotient estimate of f^#.
double distortion_via_quotient(const MapExpr& f, DiscPoint z, double h);

enum class DWKind { elliptic_auto, elliptic_strict, parabolic, hyperbolic, identity, constant };
std::string_view to_string(DWKind kind);

struct DWReport {
    DWKind kind = DWKind::identity;
    Complex point;      // interior fixed point or Denjoy-Wolff point
    double multiplier = 0.0;  // |f'(p)| inside, angular derivative on the boundary
    std::size_t iterations = 0;
};

struct DWOptions {
    std::size_t budget = 20000;
    double tol = 1e-3;  // parabolic/hyperbolic cutoff on the extrapolated multiplier
};

/// Numerical Denjoy-Wolff classification. Throws InconclusiveError when the
/// orbits do not settle within the budget.
DWReport denjoy_wolff(const MapExpr& f, const DWOptions& opts = {});

/// Radial quotient (1 - |f(r tau)|)/(1 - r) at r = 1 - 10^{-k}, k = 1..4,
/// Richardson-extrapolated to r = 1.
double angular_derivative(const MapExpr& f, Complex tau);

/// Newton's method on f(z) - z from a start point, raw arithmetic.
std::optional<Complex> polish_fixed_point(const MapExpr& f, Complex start, int max_iter = 200);

}  // namespace hifs
