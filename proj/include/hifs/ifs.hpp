#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hifs/geometry.hpp"
#include "hifs/holomap.hpp"

namespace hifs {

/// A deterministic rule n -> f_n with f_0 the identity.
class GeneratorStream {
public:
    enum class Source { list, cycle, rule };

    /// f_1 .. f_m taken from the list; indices beyond m are an error.
    static GeneratorStream list(std::vector<MapExpr> generators);
    /// f_n = generators[(n - 1) mod m].
    static GeneratorStream cycle(std::vector<MapExpr> generators);
    /// `fn` must be a pure function of n (n >= 1).
    static GeneratorStream rule(std::string name, std::function<MapExpr(std::size_t)> fn);

    MapExpr at(std::size_t n) const;
    Source source() const { return impl_->source; }
    const std::string& name() const { return impl_->name; }
    /// Number of available generators (excluding f_0); nullopt when unbounded.
    std::optional<std::size_t> length() const;

private:
    struct Impl {
        Source source;
        std::string name;
        std::vector<MapExpr> generators;
        std::function<MapExpr(std::size_t)> fn;
    };
    explicit GeneratorStream(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Built-in indexed rules.

/// f_n = Scale(1 - coefficient / (n + 1)^exponent).
GeneratorStream scale_product_stream(double coefficient, double exponent);
/// f_n = T_{b_n} o Scale(1/2) with T_b the automorphism moving 0 to b_n = base + amplitude / n^exponent.
GeneratorStream contraction_shift_stream(Complex base, double amplitude, double exponent);
/// f_n = z^k for all n.
GeneratorStream monomial_stream(int power);
/// f_n alternates rotations by theta1 and theta2.
GeneratorStream alternating_rotation_stream(double theta1, double theta2);

/// Tolerance used by the monotone distance ledgers: 1e-10 plus the first-order
/// rounding error of omega at the given points.
double ledger_slack(Complex z, Complex w);

/// L_n = f_n o ... o f_1 applied to tracked seeds.
class LeftOrbitCursor {
public:
    LeftOrbitCursor(GeneratorStream stream, std::span<const DiscPoint> seeds);

    /// Apply f_{n+1} to every tracked value; throws ConsistencyError if a
    /// pairwise distance grows beyond slack.
    void advance();

    std::size_t index() const { return n_; }
    std::span<const Complex> values() const { return values_; }
    std::span<const Complex> seeds() const { return seeds_; }
    /// omega(L_n z_i, L_n z_j) for i < j, row-major over pairs.
    std::span<const double> ledger() const { return ledger_; }
    double pair_distance(std::size_t i, std::size_t j) const;
    const GeneratorStream& stream() const { return stream_; }
    /// Jet of the last applied generator at the previous values (for distortion products).
    std::span<const Jet> last_jets() const { return jets_; }

private:
    std::size_t pair_index(std::size_t i, std::size_t j) const;

    GeneratorStream stream_;
    std::vector<Complex> seeds_;
    std::vector<Complex> values_;
    std::vector<double> ledger_;
    std::vector<Jet> jets_;
    std::size_t n_ = 0;
};

inline constexpr std::size_t kDefaultDepthCap = 100000;

/// R_n = f_1 o ... o f_n applied to tracked seeds.
class RightOrbitState {
public:
    RightOrbitState(GeneratorStream stream, std::span<const DiscPoint> seeds,
                    std::size_t depth_cap = kDefaultDepthCap);

    /// R_{n+1} = R_n o f_{n+1}. Throws CapExceeded past the depth cap and
    /// ConsistencyError when a step violates omega(R_n z, R_{n+1} z) <= omega(z, f_{n+1} z).
    void advance();

    std::size_t index() const { return parts_.size(); }
    std::span<const Complex> values() const { return values_; }
    std::span<const Complex> seeds() const { return seeds_; }
    /// omega(R_{n-1} z, R_n z) per seed for the latest step.
    std::span<const double> step_ledger() const { return steps_; }
    MapExpr composed() const;
    /// Generators f_1 .. f_n in order.
    std::span<const MapExpr> parts() const { return parts_; }

private:
    GeneratorStream stream_;
    std::vector<Complex> seeds_;
    std::vector<Complex> values_;
    std::vector<double> steps_;
    std::vector<MapExpr> parts_;
    std::size_t depth_cap_;
};

/// Evaluate f_1 o ... o f_n at z, parts given in order f_1 .. f_n.
Complex evaluate_right(std::span<const MapExpr> parts, Complex z);

/// Points w_0 .. w_N with f_n(w_n) = w_{n-1}.
struct BackwardOrbit {
    std::vector<DiscPoint> points;

    BackwardOrbit() = default;
    explicit BackwardOrbit(std::vector<DiscPoint> pts) : points(std::move(pts)) {}
    /// Throws DomainError for values outside the disc.
    static BackwardOrbit from_values(std::span<const Complex> values);
    std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
};

struct BackwardOrbitCheck {
    bool ok = false;
    double max_step_residual = 0.0;      // max |f_n(w_n) - w_{n-1}|
    double max_composed_residual = 0.0;  // max |R_n(w_n) - w_0|
    double composed_tolerance = 0.0;     // tol times first-order error amplification
};

BackwardOrbitCheck verify_backward_orbit(const GeneratorStream& stream, const BackwardOrbit& orbit,
                                         double tol = 1e-9);

enum class Side { left, right };

struct OrbitBound {
    bool bounded = true;
    double max_omega = 0.0;  // max over n <= horizon of omega(0, orbit_n(z))
    std::size_t argmax = 0;
    std::optional<std::size_t> escaped_at;  // first index of 3 consecutive exceedances
    std::size_t exceedances = 0;
    std::size_t horizon = 0;
};

/// Finite-horizon heuristic for relative compactness: a bounded orbit of one
/// point. Escape requires three consecutive exceedances of R.
OrbitBound orbit_bounded(const GeneratorStream& stream, Side side, DiscPoint z, std::size_t horizon, double radius);

struct CompactDivergence {
    /// First n0 such that orbit_n(K samples) misses K for every n0 <= n <= horizon.
    std::optional<std::size_t> disjoint_from;
    std::vector<std::size_t> returns;  // indices where some sample lands in K
    std::size_t horizon = 0;
};

CompactDivergence compact_divergence(const GeneratorStream& stream, Side side, const HyperbolicBall& ball,
                                     std::size_t horizon, int rings = 2, int per_ring = 8);

}  // namespace hifs
