#include "hifs/ifs.hpp"

#include <cmath>
#include <limits>

#include "hifs/errors.hpp"

namespace hifs {

GeneratorStream GeneratorStream::list(std::vector<MapExpr> generators) {
    return GeneratorStream(std::make_shared<const Impl>(Impl{Source::list, "list", std::move(generators), {}}));
}

GeneratorStream GeneratorStream::cycle(std::vector<MapExpr> generators) {
    if (generators.empty()) {
        throw PreconditionError("a cycled stream needs at least one generator");
    }
    return GeneratorStream(std::make_shared<const Impl>(Impl{Source::cycle, "cycle", std::move(generators), {}}));
}

GeneratorStream GeneratorStream::rule(std::string name, std::function<MapExpr(std::size_t)> fn) {
    return GeneratorStream(std::make_shared<const Impl>(Impl{Source::rule, std::move(name), {}, std::move(fn)}));
}

MapExpr GeneratorStream::at(std::size_t n) const {
    if (n == 0) {
        return MapExpr::identity();
    }
    switch (impl_->source) {
        case Source::list:
            if (n > impl_->generators.size()) {
                throw PreconditionError("stream has only " + std::to_string(impl_->generators.size()) +
                                        " generators; index " + std::to_string(n) + " requested");
            }
            return impl_->generators[n - 1];
        case Source::cycle:
            return impl_->generators[(n - 1) % impl_->generators.size()];
        case Source::rule:
            return impl_->fn(n);
    }
    return MapExpr::identity();
}

std::optional<std::size_t> GeneratorStream::length() const {
    if (impl_->source == Source::list) {
        return impl_->generators.size();
    }
    return std::nullopt;
}

GeneratorStream scale_product_stream(double coefficient, double exponent) {
    if (!(coefficient >= 0.0 && coefficient <= 2.0) || !(exponent > 0.0)) {
        throw PreconditionError("scale_product needs 0 <= coefficient <= 2 and exponent > 0");
    }
    return GeneratorStream::rule("scale_product", [coefficient, exponent](std::size_t n) {
        const double a = 1.0 - coefficient / std::pow(static_cast<double>(n) + 1.0, exponent);
        return MapExpr::scale(Complex(a, 0.0));
    });
}

GeneratorStream contraction_shift_stream(Complex base, double amplitude, double exponent) {
    return GeneratorStream::rule("contraction_shift", [base, amplitude, exponent](std::size_t n) {
        const Complex b = base + amplitude / std::pow(static_cast<double>(n), exponent);
        return MapExpr::compose(
            {MapExpr::mobius(make_disc_auto(DiscPoint(b), 0.0)), MapExpr::scale(Complex(0.5, 0.0))});
    });
}

GeneratorStream monomial_stream(int power) {
    const MapExpr f = MapExpr::monomial(power);
    return GeneratorStream::rule("monomial", [f](std::size_t) { return f; });
}

GeneratorStream alternating_rotation_stream(double theta1, double theta2) {
    const MapExpr r1 = MapExpr::mobius(MoebiusMap::rotation(theta1));
    const MapExpr r2 = MapExpr::mobius(MoebiusMap::rotation(theta2));
    return GeneratorStream::rule("alternating_rotation", [r1, r2](std::size_t n) { return n % 2 == 1 ? r1 : r2; });
}

double ledger_slack(Complex z, Complex w) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double cz = std::max(1.0 - std::norm(z), 1e-300);
    const double cw = std::max(1.0 - std::norm(w), 1e-300);
    return 1e-10 + 8.0 * eps / (cz * cw);
}

// ---------------------------------------------------------------------------

LeftOrbitCursor::LeftOrbitCursor(GeneratorStream stream, std::span<const DiscPoint> seeds)
    : stream_(std::move(stream)) {
    for (const DiscPoint& p : seeds) {
        seeds_.push_back(p.value());
    }
    values_ = seeds_;
    jets_.resize(seeds_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        for (std::size_t j = i + 1; j < values_.size(); ++j) {
            ledger_.push_back(omega(values_[i], values_[j]));
        }
    }
}

std::size_t LeftOrbitCursor::pair_index(std::size_t i, std::size_t j) const {
    if (i > j) {
        std::swap(i, j);
    }
    const std::size_t m = values_.size();
    return i * m - i * (i + 1) / 2 + (j - i - 1);
}

double LeftOrbitCursor::pair_distance(std::size_t i, std::size_t j) const {
    if (i == j) {
        return 0.0;
    }
    return ledger_[pair_index(i, j)];
}

void LeftOrbitCursor::advance() {
    const MapExpr f = stream_.at(n_ + 1);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        jets_[i] = f.jet(values_[i]);
        values_[i] = jets_[i].value;
    }
    ++n_;
    std::size_t k = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        for (std::size_t j = i + 1; j < values_.size(); ++j, ++k) {
            const double d = omega(values_[i], values_[j]);
            if (d > ledger_[k] + ledger_slack(values_[i], values_[j])) {
                throw ConsistencyError("left IFS distance increased at step " + std::to_string(n_));
            }
            ledger_[k] = d;
        }
    }
}

// ---------------------------------------------------------------------------

Complex evaluate_right(std::span<const MapExpr> parts, Complex z) {
    Complex v = z;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        v = (*it)(v);
    }
    return v;
}

RightOrbitState::RightOrbitState(GeneratorStream stream, std::span<const DiscPoint> seeds, std::size_t depth_cap)
    : stream_(std::move(stream)), depth_cap_(depth_cap) {
    for (const DiscPoint& p : seeds) {
        seeds_.push_back(p.value());
    }
    values_ = seeds_;
    steps_.assign(seeds_.size(), 0.0);
}

void RightOrbitState::advance() {
    if (parts_.size() >= depth_cap_) {
        throw CapExceeded("right IFS composition depth cap of " + std::to_string(depth_cap_) + " reached");
    }
    parts_.push_back(stream_.at(parts_.size() + 1));
    const MapExpr& f = parts_.back();
    const std::span<const MapExpr> previous(parts_.data(), parts_.size() - 1);
    for (std::size_t i = 0; i < seeds_.size(); ++i) {
        const Complex fz = f(seeds_[i]);
        const Complex next = evaluate_right(previous, fz);
        const double step = omega(values_[i], next);
        const double bound = omega(seeds_[i], fz) + ledger_slack(values_[i], next);
        if (step > bound) {
            throw ConsistencyError("right IFS step exceeded omega(z, f_n z) at step " +
                                   std::to_string(parts_.size()));
        }
        steps_[i] = step;
        values_[i] = next;
    }
}

MapExpr RightOrbitState::composed() const {
    return MapExpr::compose(parts_);
}

// ---------------------------------------------------------------------------

BackwardOrbit BackwardOrbit::from_values(std::span<const Complex> values) {
    std::vector<DiscPoint> pts;
    pts.reserve(values.size());
    for (const Complex& v : values) {
        pts.emplace_back(v);
    }
    return BackwardOrbit(std::move(pts));
}

BackwardOrbitCheck verify_backward_orbit(const GeneratorStream& stream, const BackwardOrbit& orbit, double tol) {
    const std::size_t n_max = orbit.length();
    if (const auto len = stream.length(); len && n_max > *len) {
        throw PreconditionError("backward orbit is longer than the generator list");
    }
    BackwardOrbitCheck out;
    out.ok = true;
    std::vector<MapExpr> parts;
    double amplification = 1.0;  // sum of |R_{j-1}'(w_{j-1})| over j
    double chain = 1.0;          // |R_{n}'(w_{n})|
    for (std::size_t n = 1; n <= n_max; ++n) {
        parts.push_back(stream.at(n));
        const Complex wn = orbit.points[n].value();
        const Jet j = parts.back().jet(wn);
        const double step = std::abs(j.value - orbit.points[n - 1].value());
        const double composed = std::abs(evaluate_right(parts, wn) - orbit.points[0].value());
        chain *= std::abs(j.deriv);
        amplification += chain;
        out.max_step_residual = std::max(out.max_step_residual, step);
        out.max_composed_residual = std::max(out.max_composed_residual, composed);
        out.composed_tolerance = tol * amplification;
        if (!(step <= tol) || !(composed <= tol * amplification)) {
            out.ok = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

OrbitBound orbit_bounded(const GeneratorStream& stream, Side side, DiscPoint z, std::size_t horizon, double radius) {
    if (horizon < 1 || !(radius > 0.0)) {
        throw PreconditionError("orbit_bounded needs horizon >= 1 and radius > 0");
    }
    OrbitBound out;
    out.horizon = horizon;
    out.max_omega = omega(Complex(0.0, 0.0), z.value());
    std::size_t run = 0;
    const auto record = [&](std::size_t n, Complex v) {
        const double d = omega(Complex(0.0, 0.0), v);
        if (d > out.max_omega) {
            out.max_omega = d;
            out.argmax = n;
        }
        if (d > radius) {
            ++out.exceedances;
            if (++run >= 3 && !out.escaped_at) {
                out.escaped_at = n - 2;
                out.bounded = false;
            }
        } else {
            run = 0;
        }
    };
    record(0, z.value());
    const std::array<DiscPoint, 1> seed{z};
    if (side == Side::left) {
        Complex v = z.value();
        for (std::size_t n = 1; n <= horizon && !out.escaped_at; ++n) {
            v = stream.at(n)(v);
            record(n, v);
        }
    } else {
        RightOrbitState state(stream, seed);
        for (std::size_t n = 1; n <= horizon && !out.escaped_at; ++n) {
            state.advance();
            record(n, state.values()[0]);
        }
    }
    return out;
}

CompactDivergence compact_divergence(const GeneratorStream& stream, Side side, const HyperbolicBall& ball,
                                     std::size_t horizon, int rings, int per_ring) {
    CompactDivergence out;
    out.horizon = horizon;
    const std::vector<Complex> samples = sample_ball(ball, rings, per_ring);
    const Complex c = ball.center.value();
    const auto inside = [&](Complex v) { return omega(c, v) <= ball.radius + 1e-12; };

    std::vector<Complex> values = samples;
    std::vector<MapExpr> parts;
    std::size_t last_return = 0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        const MapExpr f = stream.at(n);
        bool hit = false;
        if (side == Side::left) {
            for (Complex& v : values) {
                v = f(v);
                hit = hit || inside(v);
            }
        } else {
            parts.push_back(f);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                values[i] = evaluate_right(parts, samples[i]);
                hit = hit || inside(values[i]);
            }
        }
        if (hit) {
            out.returns.push_back(n);
            last_return = n;
        }
    }
    if (last_return < horizon) {
        out.disjoint_from = last_return + 1;
    }
    return out;
}

}  // namespace hifs
