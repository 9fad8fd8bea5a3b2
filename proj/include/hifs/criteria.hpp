#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hifs/geometry.hpp"
#include "hifs/ifs.hpp"

namespace hifs {

enum class SeriesMode { fixed_point, orbit };
enum class SeriesVerdict { summable_so_far, diverging, inconclusive };
std::string_view to_string(SeriesMode mode);
std::string_view to_string(SeriesVerdict verdict);

struct SeriesOptions {
    double diverge_sum = 50.0;
    double diverge_product = 1e-20;
    std::size_t tail_window = 100;
    double tail_tol = 1e-10;
    // Dyadic block test: ratio of the term sums over (N/2, N] and (N/4, N/2].
    // Terms of size n^-p give 2^(1-p).
    double ratio_diverging = 0.9;
    double ratio_summable = 0.75;
    double block_floor = 1e-12;
};

struct SeriesRow {
    std::size_t n = 0;
    double term = 0.0;  // 1 - f_n^#(point)
    double partial_sum = 0.0;
    double product = 1.0;
    Complex point;  // z0, or L_{n-1}(z0) in orbit mode
};

struct SeriesReport {
    SeriesMode mode = SeriesMode::fixed_point;
    Complex base;
    std::size_t horizon = 0;
    SeriesOptions options;
    std::vector<SeriesRow> rows;
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    std::string rule;  // which test produced the verdict
    double block_ratio = 0.0;
    /// Orbit mode: max over n of |L_n^#(z0) - product_n|, L_n^# from the chain rule derivative.
    std::optional<double> product_consistency;
};

/// Throws PreconditionError on a constant generator.
SeriesReport distortion_series(const GeneratorStream& stream, DiscPoint z0, std::size_t N, SeriesMode mode,
                               const SeriesOptions& opts = {});

enum class LimitVerdict { nonconstant_limits, constant_limits, not_relatively_compact, inconclusive };
std::string_view to_string(LimitVerdict verdict);

struct ClassifyOptions {
    double radius = 5.0;  // orbit escape radius for the compactness heuristic
    /// Second base point for the base-point independence check; default is
    /// (z0 + 0.25) / (1 + 0.25 z0).
    std::optional<DiscPoint> second_base;
    SeriesOptions series;
};

struct LimitReport {
    Side side = Side::left;
    LimitVerdict verdict = LimitVerdict::inconclusive;
    std::size_t horizon = 0;
    ClassifyOptions options;
    OrbitBound bound;
    SeriesReport series;         // at z0
    SeriesVerdict second_verdict = SeriesVerdict::inconclusive;
    Complex second_base;
    bool base_points_agree = false;
    /// Right side: R_N(z0), the limit estimate for constant verdicts.
    std::optional<Complex> constant_estimate;
    /// Right side: R_N^#(z0) = prod f_j^#(R_{j,N}(z0)).
    std::optional<double> product_lower_bound;
};

LimitReport classify_left_limits(const GeneratorStream& stream, DiscPoint z0, std::size_t N,
                                 const ClassifyOptions& opts = {});
LimitReport classify_right_limits(const GeneratorStream& stream, DiscPoint z0, std::size_t N,
                                  const ClassifyOptions& opts = {});

/// R_N(z) evaluated innermost first, with R_N^#(z) as the product of f_j^#(R_{j,N} z).
struct RightValue {
    Complex value;
    double distortion = 1.0;
};
RightValue right_value(const GeneratorStream& stream, Complex z, std::size_t N);

struct FixedPointOptions {
    double guard_delta = 1e-3;  // generators with sampled distortion >= 1 - delta are refused
    double tol = 1e-6;
    double radius = 5.0;
};

enum class TrackVerdict { converges, does_not_converge, inconclusive, refused };
std::string_view to_string(TrackVerdict verdict);

struct FixedPointTrack {
    std::vector<std::optional<Complex>> fixed_points;  // a_1 .. a_N
    std::vector<double> residuals;                     // |f_n(a_n) - a_n|, NaN when absent
    Complex limit_candidate;
    std::size_t horizon = 0;
    FixedPointOptions options;
    double final_gap = 0.0;    // |a_N - a|
    TrackVerdict fixed_point_verdict = TrackVerdict::inconclusive;  // a_n -> a
    bool guard_passed = false;
    std::string guard_reason;
    double max_sampled_distortion = 0.0;
    double orbit_gap = 0.0;    // sup over the probe grid of |L_N(z) - a|
    TrackVerdict orbit_verdict = TrackVerdict::inconclusive;  // L_N -> a
};

FixedPointTrack track_fixed_points(const GeneratorStream& stream, std::size_t N,
                                   std::optional<Complex> limit_candidate = std::nullopt,
                                   const FixedPointOptions& opts = {});

}  // namespace hifs
