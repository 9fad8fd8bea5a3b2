#pragma once

#include <optional>
#include <vector>

#include "hifs/geometry.hpp"
#include "hifs/holomap.hpp"
#include "hifs/ifs.hpp"
#include "hifs/moebius.hpp"

namespace hifs {

/// Probe points for sampling H_n. The default grid is 0 plus 12 points on
/// each of the circles |z| = 0.3 and |z| = 0.6.
struct ProbeGrid {
    std::vector<Complex> points;

    static ProbeGrid standard();
    /// 0 plus `per_ring` points on each radius.
    static ProbeGrid rings(std::vector<double> radii, int per_ring);
};

struct StraightenOptions {
    double tol = 1e-8;
    double tol_zero = 1e-9;
    std::size_t window = 10;
    double phase_freeze = 1e-6;
};

struct StraightenTraceRow {
    std::size_t n = 0;
    std::optional<double> residual;   // max over grid of omega(H_{n-1} z, H_n z)
    std::optional<double> probe_abs;  // |H_n(w)|
    double distortion_at_0 = 1.0;     // H_n^#(0)
};

struct StraighteningResult {
    std::vector<MoebiusMap> gammas;  // gamma_1 .. gamma_N
    std::vector<Complex> grid;
    std::vector<Complex> h_samples;  // H_N on the grid
    double cauchy_residual = 0.0;
    bool converged = false;
    bool constant_limit = false;
    Complex probe_point;
    std::size_t horizon = 0;
    StraightenOptions options;
    std::vector<StraightenTraceRow> trace;
    /// Right straightening only: g_n'(0) for n = 1..N.
    std::vector<Complex> g_derivs;
};

/// gamma_n^{-1} o L_n converging to h with h(0) = 0 and h(w) >= 0.
StraighteningResult left_straighten(const GeneratorStream& stream, std::size_t N, const ProbeGrid& grid,
                                    DiscPoint w = DiscPoint(0.5), const StraightenOptions& opts = {});

/// R_n o gamma_n^{-1} along a backward orbit. The orbit is moved so that
/// w_0 = 0 by post-composing with an automorphism c, i.e. H_n = c o R_n o gamma_n^{-1}.
StraighteningResult right_straighten(const GeneratorStream& stream, const BackwardOrbit& orbit, std::size_t N,
                                     const ProbeGrid& grid, const StraightenOptions& opts = {},
                                     DiscPoint w = DiscPoint(0.5));

struct TracedValue {
    double value = 0.0;
    std::vector<double> trace;  // index n = 0..N
};

/// omega(L_N z, L_N w) with its non-increasing trace.
TracedValue limit_distance(const GeneratorStream& stream, DiscPoint z, DiscPoint w, std::size_t N);
/// L_N^#(z) as the product of f_n^#(L_{n-1} z), with its trace.
TracedValue distortion_limit(const GeneratorStream& stream, DiscPoint z, std::size_t N);
/// omega(f^N z, f^{N+mu} z) with its trace over n = 0..N.
TracedValue mu_step(const MapExpr& f, DiscPoint z, int mu, std::size_t N);

enum class SemiconjugacyKind { automorphic, semiconjugate_to_auto, none };
std::string_view to_string(SemiconjugacyKind kind);

struct SemiconjugacyReport {
    SemiconjugacyKind kind = SemiconjugacyKind::none;
    std::optional<MoebiusMap> phi;
    /// max over grid of omega(h(f z), phi(h z)).
    double residual = 0.0;
    StraighteningResult straightening;
};

/// Throws InconclusiveError when the straightening did not converge at N.
SemiconjugacyReport semiconjugacy_probe(const MapExpr& f, std::size_t N, const ProbeGrid& grid = ProbeGrid::standard(),
                                        const StraightenOptions& opts = {});

/// The fractional-linear map sending from[k] to to[k]. Throws SingularityError for
/// repeated points.
MoebiusMap fit_moebius(const std::array<Complex, 3>& from, const std::array<Complex, 3>& to);

}  // namespace hifs
