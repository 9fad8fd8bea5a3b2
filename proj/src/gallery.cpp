#include "hifs/gallery.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "hifs/errors.hpp"
#include "hifs/kernels.hpp"

namespace hifs {

namespace {

constexpr Complex kI(0.0, 1.0);

MapExpr disc_generator(const MoebiusMap& half_plane_map) {
    return MapExpr::mobius(halfplane_to_disc(half_plane_map));
}

}  // namespace

MoebiusMap section8_F() {
    return MoebiusMap::from_matrix({1.0, -1.0, 0.0, 1.0}, DomainTag::half_plane);
}

MoebiusMap section8_Fn(int n) {
    if (n < 1) {
        throw PreconditionError("F_n needs n >= 1");
    }
    return MoebiusMap::from_matrix({1.0, Complex(-1.0, 1.0 / n), 0.0, 1.0});
}

MoebiusMap section8_phi(int n) {
    if (n < 0) {
        throw PreconditionError("phi_n needs n >= 0");
    }
    return MoebiusMap::from_matrix({static_cast<double>(n), -1.0, 1.0, static_cast<double>(n)}, DomainTag::half_plane);
}

MoebiusMap section8_g(int n) {
    const MoebiusMap phi = section8_phi(n);
    return compose(phi, compose(section8_F(), inverse(phi)));
}

bool Section8Build::structure_ok() const {
    if (milestones.size() < 2 || milestones[0] != 0 || milestones[1] != 1) {
        return false;
    }
    if (milestones.size() != 2 * static_cast<std::size_t>(achieved) + 2 || k.size() != static_cast<std::size_t>(achieved)) {
        return false;
    }
    if (blocks.empty() || blocks[0].kind != Section8Block::Kind::g || blocks[0].n != 0 || blocks[0].first != 1 ||
        blocks[0].last != 1) {
        return false;
    }
    std::size_t b = 1;
    for (int n = 1; n <= achieved; ++n) {
        const std::size_t odd = milestones[2 * n - 1];
        const std::size_t even = milestones[2 * n];
        const std::size_t next = milestones[2 * n + 1];
        if (even != odd + k[n - 1] || next != even + static_cast<std::size_t>(n)) {
            return false;
        }
        if (b + 1 >= blocks.size() + 1) {
            return false;
        }
        const Section8Block& g = blocks[b];
        const Section8Block& f = blocks[b + 1];
        if (g.kind != Section8Block::Kind::g || g.n != n || g.first != odd + 1 || g.last != even ||
            f.kind != Section8Block::Kind::F || f.n != n || f.first != even + 1 || f.last != next) {
            return false;
        }
        b += 2;
    }
    return b == blocks.size() && stream.length() == milestones.back();
}

Section8Build build_section8(int n_max, std::size_t search_cap) {
    if (n_max < 1) {
        throw PreconditionError("build_section8 needs n_max >= 1");
    }
    Section8Build b;
    b.n_max = n_max;
    std::vector<MapExpr> gens;

    Complex z = kI;
    b.orbit.push_back(z);
    const MoebiusMap g0 = section8_g(0);
    z = g0(z);
    b.orbit.push_back(z);
    gens.push_back(disc_generator(g0));
    b.blocks.push_back({Section8Block::Kind::g, 0, 1, 1});
    b.milestones = {0, 1};

    for (int n = 1; n <= n_max; ++n) {
        const MoebiusMap g = section8_g(n);
        const MoebiusMap fn = section8_Fn(n);
        const double target = std::ldexp(1.0, -n);
        const Complex fixed(static_cast<double>(n), 0.0);
        const std::size_t start = b.orbit.size();
        std::size_t steps = 0;
        while (std::abs(z - fixed) >= target) {
            if (steps >= search_cap) {
                b.orbit.resize(start);
                b.diagnostic = "k_" + std::to_string(n) + " search exceeded " + std::to_string(search_cap) +
                               " iterations at distance " + std::to_string(std::abs(z - fixed));
                b.stream = GeneratorStream::list(gens);
                return b;
            }
            z = g(z);
            b.orbit.push_back(z);
            ++steps;
        }
        const std::size_t odd = b.milestones.back();
        const std::size_t even = odd + steps;
        b.k.push_back(steps);
        b.milestones.push_back(even);
        b.blocks.push_back({Section8Block::Kind::g, n, odd + 1, even});
        gens.insert(gens.end(), steps, disc_generator(g));

        Section8Certificate cert;
        cert.n = n;
        cert.far_abs = std::abs(z);
        cert.far_ok = cert.far_abs > n - target;
        const Complex w = z;
        for (int j = 0; j < n; ++j) {
            z = fn(z);
            b.orbit.push_back(z);
        }
        cert.telescoping_residual = std::abs(z - (w - static_cast<double>(n) + kI));
        cert.return_gap = std::abs(z - kI);
        cert.return_ok = cert.return_gap < target;
        b.milestones.push_back(even + n);
        b.blocks.push_back({Section8Block::Kind::F, n, even + 1, even + n});
        gens.insert(gens.end(), n, MapExpr::hp_affine(Complex(-1.0, 1.0 / n)));
        b.certificates.push_back(cert);
        b.achieved = n;
    }
    b.complete = true;
    b.stream = GeneratorStream::list(std::move(gens));

    const std::vector<Complex> probes{kI, 2.0 * kI, Complex(1.0, 1.0), Complex(-1.0, 1.0), Complex(0.5, 0.5),
                                      3.0 * kI};
    const MoebiusMap F = section8_F();
    for (int n = 1; n <= n_max; ++n) {
        const MoebiusMap g = section8_g(n);
        double worst = 0.0;
        for (const Complex& p : probes) {
            worst = std::max(worst, std::abs(g(p) - F(p)));
        }
        b.g_to_F.push_back(worst);
    }
    return b;
}

DivergenceCertificate certify_not_compactly_divergent(const Section8Build& build, const HyperbolicBall& K) {
    const Complex c = K.center.value();
    if (!ball_contains(K, DiscPoint(0.0))) {
        throw PreconditionError("K must contain cayley(i) = 0");
    }
    DivergenceCertificate out;
    for (int n = 1; n <= build.achieved; ++n) {
        const std::size_t far = build.milestones[2 * n];
        const std::size_t back = build.milestones[2 * n + 1];
        const double d_far = omega(c, cayley_raw(build.orbit[far]));
        const double d_back = omega(c, cayley_raw(build.orbit[back]));
        out.exit_distances.push_back(d_far);
        out.return_distances.push_back(d_back);
        if (d_far > K.radius) {
            out.exits.push_back(far);
        }
        if (d_back <= K.radius) {
            out.returns.push_back(back);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

GeneratorStream DenseBuild::stream() const {
    std::vector<MapExpr> gens;
    gens.reserve(generators.size());
    for (const MoebiusMap& g : generators) {
        gens.push_back(MapExpr::mobius(g));
    }
    return GeneratorStream::list(std::move(gens));
}

double sup_deviation(const MoebiusMap& g) {
    static const kernels::PointSet samples = kernels::circle(0.9, kDeviationSamples);
    return kernels::max_deviation(g.matrix(), samples);
}

double dyadic_delta(std::size_t j) {
    return std::ldexp(1.0, -static_cast<int>(j));
}

DenseBuild build_dense(const std::vector<MoebiusMap>& targets, const std::function<double(std::size_t)>& delta_rule,
                       std::size_t k_cap) {
    DenseBuild out;
    MoebiusMap L = MoebiusMap::identity();
    double prev_delta = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= targets.size(); ++j) {
        const MoebiusMap& target = targets[j - 1];
        if (!target.is_disc_automorphism()) {
            throw PreconditionError("dense targets must be disc automorphisms");
        }
        const double delta = delta_rule(j);
        if (!(delta > 0.0 && delta < prev_delta)) {
            throw PreconditionError("delta_j must be positive and strictly decreasing");
        }
        prev_delta = delta;

        DenseBlock block;
        block.target = target;
        block.delta = delta;
        const MoebiusMap M = compose(target, inverse(L));
        if (!M.is_identity(1e-15)) {
            std::size_t k = 1;
            for (;; ++k) {
                if (k > k_cap) {
                    throw CapExceeded("no root of the step to target " + std::to_string(j) + " within " +
                                      std::to_string(k_cap) + " copies meets delta " + std::to_string(delta));
                }
                const MoebiusMap root = kth_root(M, static_cast<int>(k));
                const double dev = sup_deviation(root);
                if (dev <= delta) {
                    block.root = root;
                    block.max_deviation = dev;
                    break;
                }
            }
            block.k = k;
            for (std::size_t c = 0; c < k; ++c) {
                out.generators.push_back(*block.root);
                L = compose(*block.root, L);
            }
        }
        block.realized_at = out.generators.size();
        block.residual = matrix_distance(L, target);
        out.blocks.push_back(block);
    }
    return out;
}

std::vector<MoebiusMap> dyadic_targets(std::size_t count) {
    std::vector<MoebiusMap> out;
    std::set<std::tuple<long long, long long, long long>> seen;  // parameters scaled by 2^30
    constexpr int kScaleBits = 30;
    for (int level = 1; out.size() < count && level < kScaleBits; ++level) {
        const long long steps = 1LL << level;
        const double h = std::ldexp(1.0, -level);
        for (long long r = 0; r < steps && out.size() < count; ++r) {
            for (long long q = -steps; q <= steps && out.size() < count; ++q) {
                for (long long p = -steps; p <= steps && out.size() < count; ++p) {
                    const Complex a(p * h, q * h);
                    if (std::abs(a) > 1.0 - h) {
                        continue;
                    }
                    const auto key = std::make_tuple(p << (kScaleBits - level), q << (kScaleBits - level),
                                                     r << (kScaleBits - level));
                    if (!seen.insert(key).second || (p == 0 && q == 0 && r == 0)) {
                        continue;
                    }
                    out.push_back(make_disc_auto(DiscPoint(a), 2.0 * std::numbers::pi * r * h));
                }
            }
        }
    }
    return out;
}

}  // namespace hifs
