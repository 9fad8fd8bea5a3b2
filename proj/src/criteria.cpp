#include "hifs/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hifs/errors.hpp"
#include "hifs/straighten.hpp"

namespace hifs {

namespace {

double step_distortion(const MapExpr& f, Complex z, const Jet& j) {
    return f.is_automorphism() ? 1.0 : distortion_from_jet(z, j);
}

double block_sum(const std::vector<SeriesRow>& rows, std::size_t from, std::size_t to) {
    // Terms with from < n <= to.
    double s = 0.0;
    for (std::size_t n = from + 1; n <= to; ++n) {
        s += rows[n - 1].term;
    }
    return s;
}

void decide(SeriesReport& rep) {
    const SeriesOptions& o = rep.options;
    const std::size_t N = rep.rows.size();
    if (N == 0) {
        return;
    }
    const SeriesRow& last = rep.rows.back();
    if (last.partial_sum > o.diverge_sum && last.product < o.diverge_product) {
        rep.verdict = SeriesVerdict::diverging;
        rep.rule = "threshold";
        return;
    }
    if (N > o.tail_window) {
        const SeriesRow& back = rep.rows[N - 1 - o.tail_window];
        const double tail = block_sum(rep.rows, N - o.tail_window, N);
        if (tail < o.tail_tol && std::abs(last.product - back.product) < o.tail_tol) {
            rep.verdict = SeriesVerdict::summable_so_far;
            rep.rule = "tail_window";
            return;
        }
    }
    if (N < 8) {
        return;
    }
    const double s1 = block_sum(rep.rows, N / 4, N / 2);
    const double s2 = block_sum(rep.rows, N / 2, N);
    if (s2 < o.block_floor) {
        rep.block_ratio = 0.0;
        rep.verdict = SeriesVerdict::summable_so_far;
        rep.rule = "negligible_block";
        return;
    }
    rep.block_ratio = s1 > 0.0 ? s2 / s1 : std::numeric_limits<double>::infinity();
    if (rep.block_ratio >= o.ratio_diverging) {
        rep.verdict = SeriesVerdict::diverging;
        rep.rule = "block_ratio";
    } else if (rep.block_ratio <= o.ratio_summable) {
        rep.verdict = SeriesVerdict::summable_so_far;
        rep.rule = "block_ratio";
    }
}

LimitVerdict from_series(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::summable_so_far:
            return LimitVerdict::nonconstant_limits;
        case SeriesVerdict::diverging:
            return LimitVerdict::constant_limits;
        case SeriesVerdict::inconclusive:
            break;
    }
    return LimitVerdict::inconclusive;
}

LimitReport classify(const GeneratorStream& stream, Side side, DiscPoint z0, std::size_t N,
                     const ClassifyOptions& opts) {
    LimitReport rep;
    rep.side = side;
    rep.horizon = N;
    rep.options = opts;
    const Complex z = z0.value();
    rep.second_base = opts.second_base ? opts.second_base->value() : (z + 0.25) / (1.0 + 0.25 * z);

    rep.series = distortion_series(stream, z0, N, SeriesMode::fixed_point, opts.series);
    rep.second_verdict =
        distortion_series(stream, DiscPoint(rep.second_base), N, SeriesMode::fixed_point, opts.series).verdict;
    rep.base_points_agree = rep.series.verdict == rep.second_verdict;

    rep.bound = orbit_bounded(stream, side, z0, N, opts.radius);
    if (side == Side::right) {
        const RightValue rv = right_value(stream, z, N);
        rep.constant_estimate = rv.value;
        rep.product_lower_bound = rv.distortion;
    }
    if (!rep.bound.bounded) {
        rep.verdict = LimitVerdict::not_relatively_compact;
    } else if (rep.base_points_agree) {
        rep.verdict = from_series(rep.series.verdict);
    }
    return rep;
}

}  // namespace

std::string_view to_string(SeriesMode mode) {
    return mode == SeriesMode::orbit ? "orbit" : "fixed_point";
}

std::string_view to_string(SeriesVerdict verdict) {
    switch (verdict) {
        case SeriesVerdict::summable_so_far:
            return "summable_so_far";
        case SeriesVerdict::diverging:
            return "diverging";
        case SeriesVerdict::inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(LimitVerdict verdict) {
    switch (verdict) {
        case LimitVerdict::nonconstant_limits:
            return "nonconstant_limits";
        case LimitVerdict::constant_limits:
            return "constant_limits";
        case LimitVerdict::not_relatively_compact:
            return "not_relatively_compact";
        case LimitVerdict::inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(TrackVerdict verdict) {
    switch (verdict) {
        case TrackVerdict::converges:
            return "converges";
        case TrackVerdict::does_not_converge:
            return "does_not_converge";
        case TrackVerdict::inconclusive:
            return "inconclusive";
        case TrackVerdict::refused:
            return "refused";
    }
    return "unknown";
}

SeriesReport distortion_series(const GeneratorStream& stream, DiscPoint z0, std::size_t N, SeriesMode mode,
                               const SeriesOptions& opts) {
    SeriesReport rep;
    rep.mode = mode;
    rep.base = z0.value();
    rep.horizon = N;
    rep.options = opts;
    rep.rows.reserve(N);

    const Complex z = z0.value();
    const double cz = 1.0 - std::norm(z);
    Complex v = z;
    Complex chain = 1.0;  // L_n'(z0)
    double sum = 0.0;
    double product = 1.0;
    double consistency = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const MapExpr f = stream.at(n);
        if (f.is_constant()) {
            throw PreconditionError("generator " + std::to_string(n) + " is constant");
        }
        const Complex point = mode == SeriesMode::orbit ? v : z;
        const Jet j = f.jet(point);
        const double d = step_distortion(f, point, j);
        sum += 1.0 - d;
        product *= d;
        rep.rows.push_back(SeriesRow{n, 1.0 - d, sum, product, point});
        if (mode == SeriesMode::orbit) {
            chain *= j.deriv;
            v = j.value;
            const double lsharp = std::abs(chain) * cz / (1.0 - std::norm(v));
            consistency = std::max(consistency, std::abs(lsharp - product));
        }
    }
    if (mode == SeriesMode::orbit) {
        rep.product_consistency = consistency;
    }
    decide(rep);
    return rep;
}

LimitReport classify_left_limits(const GeneratorStream& stream, DiscPoint z0, std::size_t N,
                                 const ClassifyOptions& opts) {
    return classify(stream, Side::left, z0, N, opts);
}

LimitReport classify_right_limits(const GeneratorStream& stream, DiscPoint z0, std::size_t N,
                                  const ClassifyOptions& opts) {
    return classify(stream, Side::right, z0, N, opts);
}

RightValue right_value(const GeneratorStream& stream, Complex z, std::size_t N) {
    RightValue out;
    out.value = z;
    for (std::size_t j = N; j >= 1; --j) {
        const MapExpr f = stream.at(j);
        const Jet jet = f.jet(out.value);
        out.distortion *= step_distortion(f, out.value, jet);
        out.value = jet.value;
    }
    return out;
}

FixedPointTrack track_fixed_points(const GeneratorStream& stream, std::size_t N, std::optional<Complex> limit_candidate,
                                   const FixedPointOptions& opts) {
    if (N < 1) {
        throw PreconditionError("track_fixed_points needs N >= 1");
    }
    FixedPointTrack out;
    out.horizon = N;
    out.options = opts;
    out.fixed_points.reserve(N);
    out.residuals.reserve(N);

    const std::vector<Complex> grid = ProbeGrid::standard().points;
    std::vector<Complex> orbit = grid;
    bool all_present = true;
    for (std::size_t n = 1; n <= N; ++n) {
        const MapExpr f = stream.at(n);
        std::optional<Complex> a;
        try {
            const DWReport dw = denjoy_wolff(f);
            if (dw.kind == DWKind::elliptic_auto || dw.kind == DWKind::elliptic_strict ||
                dw.kind == DWKind::constant) {
                a = polish_fixed_point(f, dw.point);
            }
        } catch (const InconclusiveError&) {
        }
        double residual = std::numeric_limits<double>::quiet_NaN();
        if (a) {
            residual = std::abs(f(*a) - *a);
            if (!(residual < 1e-10)) {
                a.reset();
                residual = std::numeric_limits<double>::quiet_NaN();
            }
        }
        all_present = all_present && a.has_value();
        out.fixed_points.push_back(a);
        out.residuals.push_back(residual);

        for (const Complex& z : grid) {
            out.max_sampled_distortion = std::max(out.max_sampled_distortion, step_distortion(f, z, f.jet(z)));
        }
        for (Complex& z : orbit) {
            z = f(z);
        }
    }
    if (limit_candidate) {
        out.limit_candidate = *limit_candidate;
    } else if (out.fixed_points.back()) {
        out.limit_candidate = *out.fixed_points.back();
    }
    if (all_present) {
        out.final_gap = std::abs(*out.fixed_points.back() - out.limit_candidate);
        out.fixed_point_verdict = out.final_gap < opts.tol ? TrackVerdict::converges : TrackVerdict::does_not_converge;
    }

    for (const Complex& z : orbit) {
        out.orbit_gap = std::max(out.orbit_gap, std::abs(z - out.limit_candidate));
    }
    const OrbitBound bound = orbit_bounded(stream, Side::left, DiscPoint(0.0), N, opts.radius);
    if (!bound.bounded) {
        out.guard_reason = "orbit of 0 escapes";
    } else if (out.max_sampled_distortion >= 1.0 - opts.guard_delta) {
        out.guard_reason = "a generator is numerically close to an automorphism";
    } else {
        out.guard_passed = true;
    }
    if (!out.guard_passed) {
        out.orbit_verdict = TrackVerdict::refused;
    } else {
        out.orbit_verdict = out.orbit_gap < opts.tol ? TrackVerdict::converges : TrackVerdict::does_not_converge;
    }
    return out;
}

}  // namespace hifs
