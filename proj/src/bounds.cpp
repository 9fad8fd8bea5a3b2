#include "hifs/bounds.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hifs/errors.hpp"
#include "hifs/straighten.hpp"

namespace hifs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Portable mapping of 64 random bits to [0, 1).
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Complex uniform_in_disc(std::mt19937_64& rng, double radius) {
    const double r = radius * std::sqrt(unit(rng));
    return std::polar(r, kTwoPi * unit(rng));
}

double omega_real(double a, double b) {
    return omega(Complex(a, 0.0), Complex(b, 0.0));
}

const MapExpr& require_map(const std::optional<MapExpr>& f, InequalityKind kind) {
    if (!f) {
        throw PreconditionError(std::string(to_string(kind)) + " needs a map");
    }
    return *f;
}

}  // namespace

std::string_view to_string(InequalityKind kind) {
    switch (kind) {
        case InequalityKind::lemma_6_1:
            return "lemma_6_1";
        case InequalityKind::lipschitz_2:
            return "lipschitz_2";
        case InequalityKind::transfer:
            return "transfer";
        case InequalityKind::theorem_F:
            return "theorem_F";
    }
    return "unknown";
}

std::optional<InequalityKind> parse_inequality_kind(std::string_view name) {
    if (name == "lemma_6_1" || name == "lemma6.1") {
        return InequalityKind::lemma_6_1;
    }
    if (name == "lipschitz_2" || name == "lipschitz2") {
        return InequalityKind::lipschitz_2;
    }
    if (name == "transfer") {
        return InequalityKind::transfer;
    }
    if (name == "theorem_F" || name == "theoremF") {
        return InequalityKind::theorem_F;
    }
    return std::nullopt;
}

MoebiusMap theorem_f_gamma(const MapExpr& f, DiscPoint w) {
    if (f.is_constant()) {
        throw PreconditionError("theorem_f_gamma needs a nonconstant map");
    }
    if (const auto& g = f.as_automorphism()) {
        return *g;
    }
    const Jet j = f.jet(w.value());
    const MoebiusMap phi = make_disc_auto(w, 0.0);
    const MoebiusMap psi = make_disc_auto_raw(j.value, 0.0);
    const MoebiusMap psi_inv = inverse(psi);
    // g = psi^{-1} o f o phi fixes 0; g'(0) carries the phase.
    const Complex g0 = psi_inv.derivative(j.value) * j.deriv * phi.derivative(0.0);
    MoebiusMap centre = MoebiusMap::identity();
    if (std::abs(g0) > 0.0) {
        centre = MoebiusMap::rotation(std::arg(g0));
    }
    return compose(psi, compose(centre, inverse(phi)));
}

InequalityMargin margin(InequalityKind kind, const std::optional<MapExpr>& f, DiscPoint z, DiscPoint w,
                        double coefficient) {
    if (!(coefficient > 0.0)) {
        throw PreconditionError("coefficient must be positive");
    }
    InequalityMargin m;
    m.kind = kind;
    m.z = z.value();
    m.w = w.value();
    const double d = disc_distance(z, w);
    switch (kind) {
        case InequalityKind::lemma_6_1:
            m.lhs = std::abs(m.z - m.w);
            m.rhs = 2.0 * (1.0 - w.abs()) * std::sinh(2.0 * d);
            break;
        case InequalityKind::lipschitz_2: {
            const MapExpr& g = require_map(f, kind);
            if (g.is_automorphism()) {
                throw PreconditionError("lipschitz_2 excludes automorphisms");
            }
            m.lhs = omega_real(distortion(g, z), distortion(g, w));
            m.rhs = coefficient * d;
            if (d > 0.0) {
                m.needed_coefficient = m.lhs / d;
            }
            break;
        }
        case InequalityKind::transfer: {
            const MapExpr& g = require_map(f, kind);
            const double base = std::exp(4.0 * d) * (1.0 - distortion(g, w));
            m.lhs = 1.0 - distortion(g, z);
            m.rhs = coefficient * base;
            if (base > 0.0) {
                m.needed_coefficient = m.lhs / base;
            }
            break;
        }
        case InequalityKind::theorem_F: {
            const MapExpr& g = require_map(f, kind);
            const MoebiusMap gamma = theorem_f_gamma(g, w);
            const double base = std::exp(4.0 * d) * (1.0 - distortion(g, w));
            m.lhs = omega(g(m.z), gamma(m.z));
            m.rhs = coefficient * base;
            m.gamma = gamma;
            if (base > 0.0) {
                m.needed_coefficient = m.lhs / base;
            }
            break;
        }
    }
    m.margin = m.rhs - m.lhs;
    return m;
}

std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the combined state
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + index + 1;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

FuzzDraw fuzz_draw(std::uint64_t seed, bool allow_automorphism) {
    std::mt19937_64 rng(seed);
    FuzzDraw d;
    d.seed = seed;
    for (;;) {
        const int count = 1 + static_cast<int>(rng() % 4);
        std::vector<DiscPoint> zeros;
        for (int k = 0; k < count; ++k) {
            zeros.emplace_back(uniform_in_disc(rng, 0.8));
        }
        MapExpr f = MapExpr::blaschke(std::move(zeros), kTwoPi * unit(rng));
        if (rng() % 2 == 1) {
            const double r = 0.1 + 0.9 * unit(rng);
            f = MapExpr::compose({f, MapExpr::scale(std::polar(r, kTwoPi * unit(rng)))});
        }
        if (allow_automorphism || !f.is_automorphism()) {
            d.f = std::move(f);
            break;
        }
    }
    d.z = DiscPoint(uniform_in_disc(rng, 0.9));
    d.w = DiscPoint(uniform_in_disc(rng, 0.9));
    return d;
}

FuzzSummary fuzz_margins(InequalityKind kind, std::size_t count, std::uint64_t seed, double coefficient) {
    FuzzSummary s;
    s.kind = kind;
    s.seed = seed;
    s.count = count;
    s.coefficient = coefficient;
    s.rows.reserve(count);
    s.row_seeds.reserve(count);
    const bool allow_auto = kind != InequalityKind::lipschitz_2;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t ds = draw_seed(seed, i);
        const FuzzDraw d = fuzz_draw(ds, allow_auto);
        InequalityMargin m = margin(kind, d.f, d.z, d.w, coefficient);
        if (i == 0 || m.margin < s.min_margin) {
            s.min_margin = m.margin;
            s.argmin = i;
        }
        s.sharp += m.sharp() ? 1 : 0;
        s.failures += m.passed() ? 0 : 1;
        if (m.needed_coefficient && (!s.empirical_coefficient || *m.needed_coefficient > *s.empirical_coefficient)) {
            s.empirical_coefficient = m.needed_coefficient;
        }
        s.rows.push_back(std::move(m));
        s.row_seeds.push_back(ds);
    }
    return s;
}

std::vector<CorollaryGRow> corollary_g_probe(const MapExpr& f, const std::vector<DiscPoint>& boundary_seq) {
    for (std::size_t i = 1; i < boundary_seq.size(); ++i) {
        if (!(boundary_seq[i].abs() > boundary_seq[i - 1].abs())) {
            throw PreconditionError("boundary sequence must increase strictly in modulus");
        }
    }
    const ProbeGrid grid = ProbeGrid::standard();
    double r = 0.0;
    for (const Complex& p : grid.points) {
        r = std::max(r, std::abs(p));
    }
    std::vector<CorollaryGRow> out;
    out.reserve(boundary_seq.size());
    for (const DiscPoint& zn : boundary_seq) {
        CorollaryGRow row;
        row.z = zn.value();
        const double gap = 1.0 - zn.abs();
        // Exact 1 for automorphisms: the formula's rounding is magnified by 1/gap^2.
        const double d = f.is_automorphism() ? 1.0 : distortion(f, zn);
        row.defect = (1.0 - d) / (gap * gap);
        row.gamma = theorem_f_gamma(f, zn);
        for (const Complex& p : grid.points) {
            row.distance = std::max(row.distance, omega(f(p), row.gamma(p)));
        }
        row.bound = 32.0 / ((1.0 - r) * (1.0 - r)) * row.defect;
        out.push_back(row);
    }
    return out;
}

}  // namespace hifs
