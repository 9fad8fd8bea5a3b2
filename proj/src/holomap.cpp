#include "hifs/holomap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hifs/errors.hpp"

namespace hifs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Complex ipow(Complex z, int k) {
    Complex result(1.0, 0.0);
    Complex base = z;
    while (k > 0) {
        if (k & 1) {
            result *= base;
        }
        base *= base;
        k >>= 1;
    }
    return result;
}

}  // namespace

namespace {
std::optional<MoebiusMap> detect_automorphism(const Node& n);
}  // namespace

MapExpr::MapExpr() : MapExpr(Node(node::Monomial{1})) {}

MapExpr::MapExpr(Node n) {
    auto automorphism = detect_automorphism(n);
    state_ = std::make_shared<const State>(State{std::move(n), std::move(automorphism)});
}

MapExpr MapExpr::mobius(const MoebiusMap& g) {
    if (!g.is_disc_automorphism()) {
        throw DomainError("Mobius node needs a disc automorphism");
    }
    return MapExpr(node::Mobius{g});
}

MapExpr MapExpr::monomial(int power) {
    if (power < 1) {
        throw DomainError("monomial power must be at least 1");
    }
    return MapExpr(node::Monomial{power});
}

MapExpr MapExpr::scale(Complex factor) {
    if (!(std::abs(factor) <= 1.0 + 1e-15)) {
        throw DomainError("scale factor must satisfy |a| <= 1");
    }
    return MapExpr(node::Scale{factor});
}

MapExpr MapExpr::blaschke(std::vector<DiscPoint> zeros, double phase) {
    if (zeros.empty()) {
        throw DomainError("Blaschke product needs at least one zero");
    }
    if (!std::isfinite(phase)) {
        throw DomainError("Blaschke phase must be finite");
    }
    std::vector<Complex> raw;
    raw.reserve(zeros.size());
    for (const DiscPoint& a : zeros) {
        raw.push_back(a.value());
    }
    return MapExpr(node::Blaschke{std::move(raw), phase});
}

MapExpr MapExpr::constant(DiscPoint value) {
    return MapExpr(node::Constant{value.value()});
}

MapExpr MapExpr::compose(std::vector<MapExpr> parts) {
    if (parts.empty()) {
        return MapExpr();
    }
    std::vector<MapExpr> flat;
    flat.reserve(parts.size());
    for (MapExpr& p : parts) {
        if (const auto* c = std::get_if<node::Compose>(&p.node())) {
            flat.insert(flat.end(), c->parts.begin(), c->parts.end());
        } else {
            flat.push_back(std::move(p));
        }
    }
    if (flat.size() == 1) {
        return flat.front();
    }
    return MapExpr(node::Compose{std::move(flat)});
}

MapExpr MapExpr::hp_affine(Complex translation) {
    if (!std::isfinite(translation.real()) || !std::isfinite(translation.imag()) || translation.imag() < 0.0) {
        throw DomainError("half-plane translation must be finite with Im t >= 0");
    }
    return MapExpr(node::HalfPlaneAffine{translation, halfplane_translation(translation)});
}

MapExpr MapExpr::average(std::vector<MapExpr> parts, std::vector<double> weights) {
    if (parts.empty() || parts.size() != weights.size()) {
        throw DomainError("average needs one positive weight per part");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw DomainError("average weights must be positive");
        }
        total += w;
    }
    for (double& w : weights) {
        w /= total;
    }
    return MapExpr(node::Average{std::move(parts), std::move(weights)});
}

std::string_view MapExpr::kind_name() const {
    return std::visit(overloaded{
                          [](const node::Mobius&) { return std::string_view("mobius"); },
                          [](const node::Monomial&) { return std::string_view("monomial"); },
                          [](const node::Scale&) { return std::string_view("scale"); },
                          [](const node::Blaschke&) { return std::string_view("blaschke"); },
                          [](const node::Constant&) { return std::string_view("constant"); },
                          [](const node::Compose&) { return std::string_view("compose"); },
                          [](const node::HalfPlaneAffine&) { return std::string_view("hp_affine"); },
                          [](const node::Average&) { return std::string_view("average"); },
                      },
                      state_->node);
}

Jet MapExpr::jet(Complex z) const {
    return std::visit(
        overloaded{
            [&](const node::Mobius& n) { return Jet{n.map(z), n.map.derivative(z)}; },
            [&](const node::Monomial& n) {
                const Complex lower = ipow(z, n.power - 1);
                return Jet{lower * z, static_cast<double>(n.power) * lower};
            },
            [&](const node::Scale& n) { return Jet{n.factor * z, n.factor}; },
            [&](const node::Blaschke& n) {
                Complex value(1.0, 0.0);
                Complex d(0.0, 0.0);
                for (const Complex& a : n.zeros) {
                    const Complex den = 1.0 - std::conj(a) * z;
                    if (den == Complex(0.0, 0.0)) {
                        throw SingularityError("evaluation at a pole of a Blaschke factor");
                    }
                    const Complex u = (z - a) / den;
                    const Complex du = (1.0 - std::norm(a)) / (den * den);
                    d = d * u + value * du;
                    value *= u;
                }
                const Complex e = std::polar(1.0, n.phase);
                return Jet{e * value, e * d};
            },
            [&](const node::Constant& n) { return Jet{n.value, Complex(0.0, 0.0)}; },
            [&](const node::Compose& n) {
                Jet acc{z, Complex(1.0, 0.0)};
                for (auto it = n.parts.rbegin(); it != n.parts.rend(); ++it) {
                    const Jet j = it->jet(acc.value);
                    acc.deriv *= j.deriv;
                    acc.value = j.value;
                }
                return acc;
            },
            [&](const node::HalfPlaneAffine& n) { return Jet{n.disc_form(z), n.disc_form.derivative(z)}; },
            [&](const node::Average& n) {
                Jet acc{Complex(0.0, 0.0), Complex(0.0, 0.0)};
                for (std::size_t k = 0; k < n.parts.size(); ++k) {
                    const Jet j = n.parts[k].jet(z);
                    acc.value += n.weights[k] * j.value;
                    acc.deriv += n.weights[k] * j.deriv;
                }
                return acc;
            },
        },
        state_->node);
}

Complex MapExpr::operator()(Complex z) const {
    if (const auto* c = std::get_if<node::Compose>(&state_->node)) {
        Complex v = z;
        for (auto it = c->parts.rbegin(); it != c->parts.rend(); ++it) {
            v = (*it)(v);
        }
        return v;
    }
    return jet(z).value;
}

bool MapExpr::is_constant() const {
    return std::visit(overloaded{
                          [](const node::Constant&) { return true; },
                          [](const node::Scale& n) { return n.factor == Complex(0.0, 0.0); },
                          [](const node::Compose& n) {
                              return std::any_of(n.parts.begin(), n.parts.end(),
                                                 [](const MapExpr& p) { return p.is_constant(); });
                          },
                          [](const node::Average& n) {
                              return std::all_of(n.parts.begin(), n.parts.end(),
                                                 [](const MapExpr& p) { return p.is_constant(); });
                          },
                          [](const auto&) { return false; },
                      },
                      state_->node);
}

namespace {

std::optional<MoebiusMap> detect_automorphism(const Node& n) {
    return std::visit(
        overloaded{
            [](const node::Mobius& n) -> std::optional<MoebiusMap> { return n.map; },
            [](const node::Monomial& n) -> std::optional<MoebiusMap> {
                if (n.power == 1) {
                    return MoebiusMap::identity();
                }
                return std::nullopt;
            },
            [](const node::Scale& n) -> std::optional<MoebiusMap> {
                if (std::abs(std::abs(n.factor) - 1.0) <= 1e-15) {
                    return MoebiusMap::rotation(std::arg(n.factor));
                }
                return std::nullopt;
            },
            [](const node::Blaschke& n) -> std::optional<MoebiusMap> {
                if (n.zeros.size() != 1) {
                    return std::nullopt;
                }
                const Complex e = std::polar(1.0, n.phase);
                const Complex a = n.zeros.front();
                return MoebiusMap::from_matrix({e, -e * a, -std::conj(a), Complex(1.0)}, DomainTag::disc);
            },
            [](const node::Constant&) -> std::optional<MoebiusMap> { return std::nullopt; },
            [](const node::Compose& n) -> std::optional<MoebiusMap> {
                MoebiusMap acc;
                for (const MapExpr& p : n.parts) {
                    auto g = p.as_automorphism();
                    if (!g) {
                        return std::nullopt;
                    }
                    acc = hifs::compose(acc, *g);
                }
                return acc;
            },
            [](const node::HalfPlaneAffine& n) -> std::optional<MoebiusMap> {
                if (n.disc_form.is_disc_automorphism()) {
                    return n.disc_form;
                }
                return std::nullopt;
            },
            [](const node::Average& n) -> std::optional<MoebiusMap> {
                if (n.parts.size() == 1) {
                    return n.parts.front().as_automorphism();
                }
                return std::nullopt;
            },
        },
        n);
}

}  // namespace


std::size_t MapExpr::depth() const {
    const auto max_depth = [](const std::vector<MapExpr>& parts) {
        std::size_t d = 0;
        for (const MapExpr& p : parts) {
            d = std::max(d, p.depth());
        }
        return d;
    };
    if (const auto* c = std::get_if<node::Compose>(&state_->node)) {
        return 1 + max_depth(c->parts);
    }
    if (const auto* a = std::get_if<node::Average>(&state_->node)) {
        return 1 + max_depth(a->parts);
    }
    return 1;
}

EvalResult eval(const MapExpr& f, DiscPoint z) {
    const Complex v = f(z.value());
    if (DiscPoint::admissible(v)) {
        return {DiscPoint(v), false};
    }
    const double r = std::abs(v);
    if (!(r < 1.0 + 1e-9)) {
        throw ConsistencyError("map sent a disc point outside the closed disc");
    }
    return {DiscPoint(std::polar(1.0 - 2.0 * kBoundaryEps, std::arg(v))), true};
}

Complex deriv(const MapExpr& f, DiscPoint z) {
    return f.derivative(z.value());
}

double distortion_from_jet(Complex z, const Jet& j) {
    const double num = std::abs(j.deriv) * (1.0 - std::norm(z));
    if (num == 0.0) {
        return 0.0;
    }
    const double den = 1.0 - std::norm(j.value);
    if (!(den > 0.0)) {
        throw ConsistencyError("image point reached the boundary; distortion undefined");
    }
    const double d = num / den;
    // Near the circle 1 - |z|^2 carries a relative rounding error of about eps / (1 - |z|^2).
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double slack = 1e-9 + 8.0 * eps / std::min(1.0 - std::norm(z), den);
    if (d > 1.0 + slack) {
        throw ConsistencyError("hyperbolic distortion exceeds 1: expression is not a self-map");
    }
    return std::min(d, 1.0);
}

double distortion_raw(const MapExpr& f, Complex z) {
    return distortion_from_jet(z, f.jet(z));
}

double distortion(const MapExpr& f, DiscPoint z) {
    return distortion_raw(f, z.value());
}

double distortion_via_quotient(const MapExpr& f, DiscPoint z, double h) {
    if (!(h > 0.0 && h < 1e-3)) {
        throw PreconditionError("quotient step must satisfy 0 < h < 1e-3");
    }
    const DiscPoint zh(z.value() + h);  // throws when z + h leaves the disc
    return omega(f(zh.value()), f(z.value())) / omega(zh.value(), z.value());
}

std::string_view to_string(DWKind kind) {
    switch (kind) {
        case DWKind::elliptic_auto:
            return "elliptic_auto";
        case DWKind::elliptic_strict:
            return "elliptic_strict";
        case DWKind::parabolic:
            return "parabolic";
        case DWKind::hyperbolic:
            return "hyperbolic";
        case DWKind::identity:
            return "identity";
        case DWKind::constant:
            return "constant";
    }
    return "identity";
}

std::optional<Complex> polish_fixed_point(const MapExpr& f, Complex start, int max_iter) {
    Complex z = start;
    try {
        for (int it = 0; it < max_iter; ++it) {
            const Jet j = f.jet(z);
            const Complex g = j.value - z;
            const Complex dg = j.deriv - 1.0;
            if (g == Complex(0.0, 0.0)) {
                return z;
            }
            if (dg == Complex(0.0, 0.0)) {
                break;
            }
            const Complex step = g / dg;
            z -= step;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                return std::nullopt;
            }
            if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(z))) {
                break;
            }
        }
        if (std::abs(f(z) - z) <= 1e-10) {
            return z;
        }
    } catch (const SingularityError&) {
    }
    return std::nullopt;
}

double angular_derivative(const MapExpr& f, Complex tau) {
    tau /= std::abs(tau);
    std::array<double, 4> e{};
    double h = 1.0;
    for (double& v : e) {
        h /= 10.0;
        v = (1.0 - std::abs(f((1.0 - h) * tau))) / h;
    }
    // e(h) = A + B h + C h^2 + ...; eliminate the first two error terms
    std::array<double, 3> r1{};
    for (std::size_t k = 0; k < 3; ++k) {
        r1[k] = (10.0 * e[k + 1] - e[k]) / 9.0;
    }
    return (100.0 * r1[2] - r1[1]) / 99.0;
}

DWReport denjoy_wolff(const MapExpr& f, const DWOptions& opts) {
    DWReport rep;
    if (f.is_constant()) {
        rep.kind = DWKind::constant;
        rep.point = f(Complex(0.0, 0.0));
        return rep;
    }
    if (const auto g = f.as_automorphism()) {
        const AutClass cls = classify_auto(*g);
        switch (cls.kind) {
            case AutKind::identity:
                rep.kind = DWKind::identity;
                rep.multiplier = 1.0;
                break;
            case AutKind::elliptic:
                rep.kind = DWKind::elliptic_auto;
                rep.point = cls.fixed_points.front();
                rep.multiplier = std::abs(g->derivative(rep.point));
                break;
            case AutKind::parabolic:
                rep.kind = DWKind::parabolic;
                rep.point = cls.fixed_points.front();
                rep.multiplier = 1.0;
                break;
            case AutKind::hyperbolic:
                rep.kind = DWKind::hyperbolic;
                rep.point = cls.fixed_points.front();
                rep.multiplier = std::abs(g->derivative(rep.point));
                break;
        }
        return rep;
    }

    const std::array<Complex, 5> seeds{Complex(0.0, 0.0), Complex(0.5, 0.0), Complex(-0.5, 0.0),
                                       Complex(0.0, 0.5), Complex(-0.3, -0.4)};
    std::vector<Complex> ends;
    std::size_t iters = 0;
    for (Complex z : seeds) {
        std::size_t n = 0;
        for (; n < opts.budget; ++n) {
            const Complex next = f(z);
            const double step = std::abs(next - z);
            z = next;
            if (step < 1e-14 || 1.0 - std::abs(z) < 1e-12) {
                break;
            }
        }
        iters = std::max(iters, n);
        ends.push_back(z);
    }
    rep.iterations = iters;

    for (const Complex& z : ends) {
        const auto p = polish_fixed_point(f, z);
        if (p && std::abs(*p) < 1.0 - 1e-9) {
            const double m = std::abs(f.derivative(*p));
            if (m < 1.0) {
                rep.kind = DWKind::elliptic_strict;
                rep.point = *p;
                rep.multiplier = m;
                return rep;
            }
        }
    }

    std::vector<Complex> taus;
    for (const Complex& z : ends) {
        const double gap = 1.0 - std::abs(z);
        if (gap > 0.05) {
            continue;
        }
        Complex tau = z / std::abs(z);
        if (const auto p = polish_fixed_point(f, z);
            p && std::abs(std::abs(*p) - 1.0) < 1e-6 && std::abs(*p - z) <= std::max(1e-3, 4.0 * gap)) {
            tau = *p / std::abs(*p);
        }
        taus.push_back(tau);
    }
    if (taus.size() != ends.size()) {
        throw InconclusiveError("Denjoy-Wolff: orbits neither converged inside nor approached the boundary within " +
                                std::to_string(opts.budget) + " iterations");
    }
    for (const Complex& t : taus) {
        if (std::abs(t - taus.front()) > 1e-3) {
            throw InconclusiveError("Denjoy-Wolff: orbits approach different boundary points");
        }
    }
    rep.point = taus.front();
    rep.multiplier = angular_derivative(f, rep.point);
    if (rep.multiplier < 1.0 - opts.tol) {
        rep.kind = DWKind::hyperbolic;
    } else if (std::abs(rep.multiplier - 1.0) <= opts.tol) {
        rep.kind = DWKind::parabolic;
    } else {
        throw InconclusiveError("Denjoy-Wolff: boundary multiplier estimate exceeds 1");
    }
    return rep;
}

}  // namespace hifs
