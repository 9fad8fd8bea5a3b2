#include "hifs/straighten.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hifs/errors.hpp"
#include "hifs/kernels.hpp"

namespace hifs {

namespace {

constexpr double kPi = std::numbers::pi;

Complex checked_apply(const MapExpr& f, Complex z, std::size_t n) {
    const Complex v = f(z);
    if (!(std::norm(v) < 1.0)) {
        throw NumericalAbort("orbit reached the unit circle at step " + std::to_string(n));
    }
    return v;
}

double step_distortion(const MapExpr& f, Complex z, const Jet& j) {
    // Automorphisms are isometries; the formula loses digits near the boundary.
    return f.is_automorphism() ? 1.0 : distortion_from_jet(z, j);
}

double max_omega(const kernels::PointSet& a, const kernels::PointSet& b) {
    std::vector<double> rho(a.size());
    kernels::pseudo_distance(a, b, rho);
    double worst = 0.0;
    for (double r : rho) {
        worst = std::max(worst, std::atanh(std::min(r, 1.0)));
    }
    return worst;
}

void require_horizon(std::size_t N) {
    if (N < 2) {
        throw PreconditionError("straightening needs N >= 2");
    }
}

}  // namespace

ProbeGrid ProbeGrid::standard() {
    return rings({0.3, 0.6}, 12);
}

ProbeGrid ProbeGrid::rings(std::vector<double> radii, int per_ring) {
    ProbeGrid g;
    g.points.emplace_back(0.0, 0.0);
    for (double r : radii) {
        if (!(r > 0.0 && r < 1.0)) {
            throw DomainError("probe radius must lie in (0, 1)");
        }
        for (int k = 0; k < per_ring; ++k) {
            g.points.push_back(std::polar(r, 2.0 * kPi * k / per_ring));
        }
    }
    return g;
}

StraighteningResult left_straighten(const GeneratorStream& stream, std::size_t N, const ProbeGrid& grid, DiscPoint w,
                                    const StraightenOptions& opts) {
    require_horizon(N);
    if (w.abs() == 0.0) {
        throw PreconditionError("the phase probe must be nonzero");
    }
    StraighteningResult res;
    res.grid = grid.points;
    res.probe_point = w.value();
    res.horizon = N;
    res.options = opts;
    res.gammas.reserve(N);
    res.trace.reserve(N);

    Complex base = 0.0;
    Complex probe = w.value();
    std::vector<Complex> image = grid.points;
    kernels::PointSet h_prev(grid.points);
    kernels::PointSet l_grid(grid.points);
    kernels::PointSet h_cur;
    double theta = 0.0;
    double dist0 = 1.0;
    bool monotone = true;
    double prev_probe_abs = w.abs();

    for (std::size_t n = 1; n <= N; ++n) {
        const MapExpr f = stream.at(n);
        const Jet j0 = f.jet(base);
        dist0 *= step_distortion(f, base, j0);
        base = j0.value;
        if (!(std::norm(base) < 1.0)) {
            throw NumericalAbort("orbit of 0 reached the unit circle at step " + std::to_string(n));
        }
        probe = checked_apply(f, probe, n);
        for (std::size_t k = 0; k < image.size(); ++k) {
            image[k] = checked_apply(f, image[k], n);
            l_grid.re[k] = image[k].real();
            l_grid.im[k] = image[k].imag();
        }

        const Complex u = (probe - base) / (1.0 - std::conj(base) * probe);
        if (std::abs(u) > opts.phase_freeze) {
            theta = std::arg(u);
        }
        const MoebiusMap gamma = make_disc_auto_raw(base * std::polar(1.0, -theta), theta);
        const MoebiusMap ginv = inverse(gamma);
        kernels::mobius_apply(ginv.matrix(), l_grid, h_cur);
        const double probe_abs = std::abs(ginv(probe));

        StraightenTraceRow row;
        row.n = n;
        row.residual = max_omega(h_prev, h_cur);
        row.probe_abs = probe_abs;
        row.distortion_at_0 = dist0;
        res.trace.push_back(row);
        res.gammas.push_back(gamma);

        if (probe_abs > prev_probe_abs * (1.0 + 1e-9) + 1e-15) {
            monotone = false;
        }
        prev_probe_abs = probe_abs;
        std::swap(h_prev, h_cur);
    }

    res.h_samples.resize(h_prev.size());
    for (std::size_t k = 0; k < h_prev.size(); ++k) {
        res.h_samples[k] = h_prev.at(k);
    }
    const std::size_t first = N > opts.window ? N - opts.window : 0;
    for (std::size_t i = first; i < res.trace.size(); ++i) {
        res.cauchy_residual = std::max(res.cauchy_residual, *res.trace[i].residual);
    }
    res.constant_limit = prev_probe_abs < opts.tol_zero && monotone;
    res.converged = res.constant_limit || res.cauchy_residual < opts.tol;
    return res;
}

StraighteningResult right_straighten(const GeneratorStream& stream, const BackwardOrbit& orbit, std::size_t N,
                                     const ProbeGrid& grid, const StraightenOptions& opts, DiscPoint w) {
    require_horizon(N);
    if (orbit.length() < N) {
        throw PreconditionError("backward orbit has " + std::to_string(orbit.length()) + " steps; " +
                                std::to_string(N) + " required");
    }
    const BackwardOrbit head(std::vector<DiscPoint>(orbit.points.begin(), orbit.points.begin() + N + 1));
    const BackwardOrbitCheck check = verify_backward_orbit(stream, head);
    if (!check.ok) {
        throw PreconditionError("backward orbit residual too large: step " + std::to_string(check.max_step_residual) +
                                ", composed " + std::to_string(check.max_composed_residual));
    }

    StraighteningResult res;
    res.grid = grid.points;
    res.probe_point = w.value();
    res.horizon = N;
    res.options = opts;
    res.gammas.reserve(N);
    res.g_derivs.reserve(N);

    const Complex w0 = orbit.points[0].value();
    const MoebiusMap c = make_disc_auto_raw(-w0, 0.0);
    MoebiusMap prev_gamma = c;
    Complex prev_deriv = 1.0 / (1.0 - std::norm(w0));
    double theta = 0.0;
    double dist0 = 1.0;
    std::vector<MapExpr> parts;
    parts.reserve(N);

    for (std::size_t n = 1; n <= N; ++n) {
        const MapExpr f = stream.at(n);
        parts.push_back(f);
        const Complex wn = orbit.points[n].value();
        const Complex target = prev_deriv * f.derivative(wn);
        if (std::abs(target) > 0.0) {
            theta = std::arg(target);
        }
        const MoebiusMap gamma = make_disc_auto_raw(-wn, theta);
        const MoebiusMap ginv = inverse(gamma);

        // g_n = gamma_{n-1} o f_n o gamma_n^{-1}, differentiated at 0 through the actual points.
        const Complex p = ginv(0.0);
        const Jet jp = f.jet(p);
        const Complex gd = prev_gamma.derivative(jp.value) * jp.deriv * ginv.derivative(0.0);
        res.g_derivs.push_back(gd);
        dist0 *= std::abs(gd);

        StraightenTraceRow row;
        row.n = n;
        row.distortion_at_0 = dist0;
        res.trace.push_back(row);
        res.gammas.push_back(gamma);

        const double cw = (1.0 - std::abs(wn)) * (1.0 + std::abs(wn));
        prev_deriv = std::polar(1.0, theta) / cw;
        prev_gamma = gamma;
    }

    // H_n = c o R_n o gamma_n^{-1} over the trailing window only; each
    // evaluation costs n generator applications.
    const std::size_t first = N > opts.window ? N - opts.window : 1;
    std::vector<Complex> prev;
    double prev_probe_abs = 0.0;
    bool monotone = true;
    for (std::size_t n = first; n <= N; ++n) {
        const MoebiusMap ginv = inverse(res.gammas[n - 1]);
        const std::span<const MapExpr> head_parts(parts.data(), n);
        std::vector<Complex> cur(grid.points.size());
        for (std::size_t k = 0; k < cur.size(); ++k) {
            cur[k] = c(evaluate_right(head_parts, ginv(grid.points[k])));
        }
        const double probe_abs = std::abs(c(evaluate_right(head_parts, ginv(w.value()))));
        StraightenTraceRow& row = res.trace[n - 1];
        row.probe_abs = probe_abs;
        if (!prev.empty()) {
            double worst = 0.0;
            for (std::size_t k = 0; k < cur.size(); ++k) {
                worst = std::max(worst, omega(prev[k], cur[k]));
            }
            row.residual = worst;
            res.cauchy_residual = std::max(res.cauchy_residual, worst);
            if (probe_abs > prev_probe_abs * (1.0 + 1e-9) + 1e-15) {
                monotone = false;
            }
        }
        prev_probe_abs = probe_abs;
        prev = std::move(cur);
    }
    res.h_samples = std::move(prev);
    res.constant_limit = prev_probe_abs < opts.tol_zero && monotone;
    res.converged = res.constant_limit || res.cauchy_residual < opts.tol;
    return res;
}

TracedValue limit_distance(const GeneratorStream& stream, DiscPoint z, DiscPoint w, std::size_t N) {
    if (N < 1) {
        throw PreconditionError("limit_distance needs N >= 1");
    }
    const std::array<DiscPoint, 2> seeds{z, w};
    LeftOrbitCursor cursor(stream, seeds);
    TracedValue out;
    out.trace.reserve(N + 1);
    out.trace.push_back(cursor.pair_distance(0, 1));
    for (std::size_t n = 1; n <= N; ++n) {
        cursor.advance();
        out.trace.push_back(cursor.pair_distance(0, 1));
    }
    out.value = out.trace.back();
    return out;
}

TracedValue distortion_limit(const GeneratorStream& stream, DiscPoint z, std::size_t N) {
    TracedValue out;
    out.trace.reserve(N + 1);
    double product = 1.0;
    Complex v = z.value();
    out.trace.push_back(product);
    for (std::size_t n = 1; n <= N; ++n) {
        const MapExpr f = stream.at(n);
        const Jet j = f.jet(v);
        product *= step_distortion(f, v, j);
        v = j.value;
        out.trace.push_back(product);
    }
    out.value = product;
    return out;
}

TracedValue mu_step(const MapExpr& f, DiscPoint z, int mu, std::size_t N) {
    if (mu < 1) {
        throw PreconditionError("mu must be at least 1");
    }
    std::vector<Complex> orbit;
    orbit.reserve(N + mu + 1);
    orbit.push_back(z.value());
    for (std::size_t n = 1; n <= N + static_cast<std::size_t>(mu); ++n) {
        orbit.push_back(checked_apply(f, orbit.back(), n));
    }
    TracedValue out;
    out.trace.reserve(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        out.trace.push_back(omega(orbit[n], orbit[n + mu]));
    }
    out.value = out.trace.back();
    return out;
}

std::string_view to_string(SemiconjugacyKind kind) {
    switch (kind) {
        case SemiconjugacyKind::automorphic:
            return "automorphic";
        case SemiconjugacyKind::semiconjugate_to_auto:
            return "semiconjugate_to_auto";
        case SemiconjugacyKind::none:
            return "none";
    }
    return "unknown";
}

SemiconjugacyReport semiconjugacy_probe(const MapExpr& f, std::size_t N, const ProbeGrid& grid,
                                        const StraightenOptions& opts) {
    if (f.is_constant()) {
        throw PreconditionError("semiconjugacy_probe needs a nonconstant map");
    }
    SemiconjugacyReport rep;
    rep.straightening = left_straighten(GeneratorStream::cycle({f}), N, grid, DiscPoint(0.5), opts);
    const StraighteningResult& s = rep.straightening;
    if (!s.converged) {
        throw InconclusiveError("straightening did not converge at N = " + std::to_string(N) +
                                " (residual " + std::to_string(s.cauchy_residual) + ")");
    }
    if (s.constant_limit) {
        rep.kind = SemiconjugacyKind::none;
        return rep;
    }
    const MoebiusMap phi = compose(inverse(s.gammas[N - 2]), s.gammas[N - 1]);
    rep.phi = phi;
    // h(f z) is read off as gamma_N^{-1}(f^{N+1} z), independent of phi.
    const MoebiusMap hinv = inverse(s.gammas[N - 1]);
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        Complex v = s.grid[k];
        for (std::size_t n = 0; n <= N; ++n) {
            v = checked_apply(f, v, n + 1);
        }
        rep.residual = std::max(rep.residual, omega(hinv(v), phi(s.h_samples[k])));
    }
    const double d0 = s.trace.back().distortion_at_0;
    rep.kind = d0 > 1.0 - 1e-9 ? SemiconjugacyKind::automorphic : SemiconjugacyKind::semiconjugate_to_auto;
    return rep;
}

MoebiusMap fit_moebius(const std::array<Complex, 3>& from, const std::array<Complex, 3>& to) {
    auto to_standard = [](const std::array<Complex, 3>& p) {
        const Complex a = p[1] - p[2];
        const Complex b = p[1] - p[0];
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0 || std::abs(p[0] - p[2]) == 0.0) {
            throw SingularityError("fit_moebius needs three distinct points");
        }
        return MoebiusMap::from_matrix({a, -p[0] * a, b, -p[2] * b});
    };
    return MoebiusMap::infer(compose(inverse(to_standard(to)), to_standard(from)).matrix());
}

}  // namespace hifs
