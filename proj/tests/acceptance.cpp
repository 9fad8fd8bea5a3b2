// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hifs/bounds.hpp"
#include "hifs/criteria.hpp"
#include "hifs/gallery.hpp"
#include "hifs/io.hpp"
#include "hifs/straighten.hpp"
#include "support.hpp"

using namespace hifs;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        if (pass) {
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// 1. Schwarz-Pick, isometry and unit distortion of automorphisms.
Outcome schwarz_pick() {
    Outcome o;
    testing::Rng rng(101);
    double worst_contract = 0.0, worst_iso = 0.0, worst_unit = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const FuzzDraw d = fuzz_draw(draw_seed(101, i));
        const Complex z = d.z.value(), w = d.w.value();
        worst_contract = std::max(worst_contract, omega(d.f(z), d.f(w)) - omega(z, w));

        const MoebiusMap g = make_disc_auto(DiscPoint(rng.in_disc(0.95)), rng.uniform(0.0, 2.0 * std::numbers::pi));
        worst_iso = std::max(worst_iso, std::abs(omega(g(z), g(w)) - omega(z, w)));
        // distortion from the raw formula, not the automorphism shortcut
        const double unit = testing::distortion_oracle(g(z), g.derivative(z), z);
        worst_unit = std::max(worst_unit, std::abs(unit - 1.0));
        const MapExpr gm = MapExpr::mobius(g);
        worst_unit = std::max(worst_unit, std::abs(distortion(gm, d.z) - 1.0));
    }
    o.require(worst_contract <= 1e-10, "semicontraction violated by " + num(worst_contract));
    o.require(worst_iso <= 1e-10, "isometry error " + num(worst_iso));
    o.require(worst_unit <= 1e-10, "automorphism distortion error " + num(worst_unit));
    o.note("max excess " + num(worst_contract) + ", isometry err " + num(worst_iso) + ", |g^#-1| " + num(worst_unit));
    return o;
}

// 2. Chain rule and the distance-quotient oracle.
Outcome distortion_calculus() {
    Outcome o;
    double worst_chain = 0.0, worst_quot = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const FuzzDraw a = fuzz_draw(draw_seed(202, 2 * i));
        const FuzzDraw b = fuzz_draw(draw_seed(202, 2 * i + 1));
        const MapExpr fg = MapExpr::compose({a.f, b.f});
        const DiscPoint z = a.z;
        const double lhs = distortion(fg, z);
        const double rhs = distortion(a.f, DiscPoint(b.f(z.value()))) * distortion(b.f, z);
        worst_chain = std::max(worst_chain, std::abs(lhs - rhs));
    }
    const double h = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        const FuzzDraw a = fuzz_draw(draw_seed(203, i));
        const Complex z = a.z.value();
        const double quotient = omega(a.f(z), a.f(z + h)) / omega(z, z + h);
        worst_quot = std::max(worst_quot, std::abs(quotient - distortion(a.f, a.z)));
    }
    o.require(worst_chain <= 1e-10, "chain rule error " + num(worst_chain));
    o.require(worst_quot <= 1e-4, "quotient error " + num(worst_quot));
    o.note("chain err " + num(worst_chain) + ", quotient err " + num(worst_quot));
    return o;
}

// 3. Inequality margins under fuzzing, plus the grazing witness.
Outcome margins() {
    Outcome o;
    std::string mins;
    for (auto kind : {InequalityKind::lemma_6_1, InequalityKind::lipschitz_2, InequalityKind::transfer,
                      InequalityKind::theorem_F}) {
        const FuzzSummary s = fuzz_margins(kind, 10000, 7);
        o.require(s.min_margin >= -1e-9, std::string(to_string(kind)) + " min margin " + num(s.min_margin));
        mins += std::string(mins.empty() ? "" : ", ") + std::string(to_string(kind)) + " " + num(s.min_margin);
    }
    const auto m = margin(InequalityKind::lipschitz_2, MapExpr::monomial(2), DiscPoint(0.5), DiscPoint(0.0));
    o.require(std::abs(m.lhs - m.rhs) < 1e-9, "grazing witness gap " + num(m.lhs - m.rhs));
    o.require(std::abs(m.lhs - std::atanh(0.8)) < 1e-9, "grazing witness value " + num(m.lhs));
    o.note("min margins: " + mins + "; witness gap " + num(std::abs(m.lhs - m.rhs)));
    return o;
}

// 4. Left straightening of the telescoping stream.
Outcome telescoping() {
    Outcome o;
    const std::size_t N = 10000;
    const auto s = scale_product_stream(1.0, 2.0);
    const auto r = left_straighten(s, N, ProbeGrid::standard());
    double sup = 0.0;
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        sup = std::max(sup, std::abs(r.h_samples[k] - 0.5 * r.grid[k]));
    }
    const double d0 = distortion_limit(s, DiscPoint(0.0), N).value;
    const double exact = (N + 2.0) / (2.0 * (N + 1.0));
    o.require(sup < 1e-3, "sup|H_N - z/2| = " + num(sup));
    o.require(std::abs(d0 - 0.5) <= 5e-5, "distortion at 0 = " + num(d0));
    o.require(std::abs(d0 - exact) < 1e-12, "partial product mismatch " + num(d0 - exact));
    o.note("sup|H_N - z/2| " + num(sup) + ", L_N^#(0) " + num(d0));
    return o;
}

std::vector<std::pair<std::string, GeneratorStream>> canned_streams() {
    std::vector<std::pair<std::string, GeneratorStream>> out;
    for (double c : {0.5, 1.0}) {
        for (double p : {0.5, 1.0, 1.5, 2.0, 3.0}) {
            out.emplace_back("scale_product(" + num(c) + "," + num(p) + ")", scale_product_stream(c, p));
        }
    }
    out.emplace_back("contraction_shift(0.1)", contraction_shift_stream(0.1, 0.01, 2.0));
    out.emplace_back("contraction_shift(0.3i)", contraction_shift_stream(Complex(0.0, 0.3), 0.05, 1.0));
    out.emplace_back("contraction_shift(-0.5)", contraction_shift_stream(-0.5, 0.1, 3.0));
    out.emplace_back("rotations(0.3,0.7)", alternating_rotation_stream(0.3, 0.7));
    out.emplace_back("rotations(1,-1)", alternating_rotation_stream(1.0, -1.0));
    out.emplace_back("monomial(2)", monomial_stream(2));
    out.emplace_back("monomial(3)", monomial_stream(3));
    out.emplace_back("blaschke_cycle",
                     GeneratorStream::cycle({MapExpr::blaschke({DiscPoint(0.0), DiscPoint(0.5)}, 0.0),
                                             MapExpr::scale(Complex(0.0, 0.9))}));
    out.emplace_back("hyperbolic", GeneratorStream::cycle({MapExpr::mobius(make_disc_auto(0.5, 0.0))}));
    out.emplace_back("elliptic_mix", GeneratorStream::cycle({MapExpr::mobius(make_disc_auto(0.3, 0.0)),
                                                             MapExpr::mobius(make_disc_auto(-0.3, 0.5))}));
    return out;
}

// 5. Base-point independence, left limits, and the product identity.
Outcome left_limits() {
    Outcome o;
    const std::size_t N = 10000;
    const auto streams = canned_streams();
    int agree = 0;
    double worst_consistency = 0.0;
    for (const auto& [name, s] : streams) {
        const auto r = classify_left_limits(s, DiscPoint(0.3), N);
        agree += r.base_points_agree ? 1 : 0;
        o.require(r.base_points_agree, name + " base points disagree");
        if (r.verdict != LimitVerdict::not_relatively_compact) {
            const auto series = distortion_series(s, DiscPoint(0.3), N, SeriesMode::orbit);
            if (series.product_consistency) {
                worst_consistency = std::max(worst_consistency, *series.product_consistency);
            }
        }
    }
    const auto basel = classify_left_limits(scale_product_stream(1.0, 2.0), DiscPoint(0.0), N);
    const auto harm = classify_left_limits(scale_product_stream(1.0, 1.0), DiscPoint(0.0), N);
    o.require(basel.verdict == LimitVerdict::nonconstant_limits, "Basel verdict " + std::string(to_string(basel.verdict)));
    o.require(harm.verdict == LimitVerdict::constant_limits, "harmonic verdict " + std::string(to_string(harm.verdict)));
    double orbit = 0.0;
    {
        LeftOrbitCursor cur(scale_product_stream(1.0, 1.0), std::vector<DiscPoint>{DiscPoint(0.7)});
        for (std::size_t n = 0; n < N; ++n) {
            cur.advance();
        }
        orbit = std::abs(cur.values()[0]);
    }
    const double right = std::abs(right_value(scale_product_stream(1.0, 1.0), 0.7, N).value);
    o.require(orbit < 1e-4, "|L_N(0.7)| = " + num(orbit));
    o.require(right < 1e-4, "|R_N(0.7)| = " + num(right));
    o.require(worst_consistency < 1e-9, "product residual " + num(worst_consistency));
    o.note(std::to_string(agree) + "/" + std::to_string(streams.size()) + " streams agree; |L_N|,|R_N| " + num(orbit) +
           ", " + num(right) + "; product residual " + num(worst_consistency));
    return o;
}

// 6. Right limits.
Outcome right_limits() {
    Outcome o;
    const std::size_t N = 10000;
    const auto harm = classify_right_limits(scale_product_stream(1.0, 1.0), DiscPoint(0.7), N);
    o.require(harm.verdict == LimitVerdict::constant_limits, "harmonic verdict " + std::string(to_string(harm.verdict)));
    const double r0 = harm.constant_estimate ? std::abs(*harm.constant_estimate) : 1.0;
    o.require(r0 < 1e-4, "|R_N(0.7)| = " + num(r0));
    const auto basel_stream = scale_product_stream(1.0, 2.0);
    const auto basel = classify_right_limits(basel_stream, DiscPoint(0.7), N);
    o.require(basel.verdict == LimitVerdict::nonconstant_limits, "Basel verdict " + std::string(to_string(basel.verdict)));
    double sup = 0.0;
    for (const Complex& z : ProbeGrid::standard().points) {
        sup = std::max(sup, std::abs(right_value(basel_stream, z, N).value - 0.5 * z));
    }
    o.require(sup < 1e-3, "sup|R_N - z/2| = " + num(sup));
    o.note("|R_N(0.7)| " + num(r0) + ", sup|R_N - z/2| " + num(sup));
    return o;
}

// 7. Right straightening of z^2 along its backward orbit.
Outcome backward_orbit() {
    Outcome o;
    std::vector<Complex> w;
    for (int n = 0; n <= 40; ++n) {
        w.push_back(std::pow(0.5, std::ldexp(1.0, -n)));
    }
    const auto stream = monomial_stream(2);
    double residual = 0.0;
    for (int n = 1; n <= 40; ++n) {
        residual = std::max(residual, std::abs(w[n] * w[n] - w[n - 1]));
    }
    const auto chk = verify_backward_orbit(stream, BackwardOrbit::from_values(w), 1e-12);
    o.require(residual < 1e-12 && chk.ok, "backward orbit residual " + num(std::max(residual, chk.max_step_residual)));

    const std::size_t N = 25;
    const std::vector<Complex> head(w.begin(), w.begin() + N + 1);
    const auto r = right_straighten(stream, BackwardOrbit::from_values(head), N, ProbeGrid::standard());
    o.require(r.converged, "not converged, residual " + num(r.cauchy_residual));
    double min_re = 1.0;
    for (const Complex& d : r.g_derivs) {
        min_re = std::min(min_re, d.real());
    }
    o.require(min_re >= -1e-10, "min Re g_n'(0) = " + num(min_re));
    double min_d0 = 1.0;
    for (std::size_t k = r.trace.size() - r.options.window; k < r.trace.size(); ++k) {
        min_d0 = std::min(min_d0, r.trace[k].distortion_at_0);
    }
    o.require(!r.constant_limit && min_d0 > 0.5, "distortion at 0 over window " + num(min_d0));
    o.note("orbit residual " + num(residual) + ", N=25 Cauchy residual " + num(r.cauchy_residual) +
           ", min g_n'(0) " + num(min_re) + ", min H^#(0) " + num(min_d0));
    return o;
}

// 8. mu-step of a hyperbolic automorphism.
Outcome mu_steps() {
    Outcome o;
    const MapExpr f = MapExpr::mobius(make_disc_auto(0.5, 0.0));
    double worst = 0.0;
    for (std::size_t N = 1; N <= 15; ++N) {
        worst = std::max(worst, std::abs(mu_step(f, DiscPoint(0.0), 1, N).value - std::atanh(0.5)));
    }
    o.require(worst <= 1e-9, "s_1(0) error " + num(worst));
    // s_mu is attained at every N for an automorphism; N + mu stays <= 15 so
    // f^{N + mu} z keeps 1e-9 accuracy near the circle.
    const auto grid = ProbeGrid::standard().points;
    const std::size_t N = 5;
    double inf = 1e300;
    for (const Complex& z : grid) {
        inf = std::min(inf, mu_step(f, DiscPoint(z), 1, N).value);
    }
    o.require(std::abs(inf - 0.5 * std::log(3.0)) < 1e-3, "grid infimum " + num(inf));
    double excess = -1e300;
    for (const Complex& z : grid) {
        std::vector<double> s(11);
        for (int mu = 1; mu <= 10; ++mu) {
            s[mu] = mu_step(f, DiscPoint(z), mu, N).value;
        }
        for (int mu = 1; mu <= 5; ++mu) {
            for (int nu = 1; nu <= 5; ++nu) {
                excess = std::max(excess, s[mu + nu] - s[mu] - s[nu]);
            }
        }
    }
    o.require(excess <= 1e-8, "subadditivity excess " + num(excess));
    o.note("s_1(0) err " + num(worst) + " (N<=15), inf s_1 " + num(inf) + ", subadditivity excess " + num(excess));
    return o;
}

// 9. Denjoy-Wolff classification.
Outcome denjoy_wolff_cases() {
    Outcome o;
    const DWReport e = denjoy_wolff(MapExpr::monomial(2));
    o.require(e.kind == DWKind::elliptic_strict && std::abs(e.point) < 1e-12 && std::abs(e.multiplier) < 1e-12,
              "z^2: " + std::string(to_string(e.kind)));
    const DWReport h = denjoy_wolff(MapExpr::mobius(make_disc_auto(0.5, 0.0)));
    o.require(h.kind == DWKind::hyperbolic && std::abs(h.point - 1.0) < 1e-6 && std::abs(h.multiplier - 1.0 / 3.0) <= 1e-3,
              "hyperbolic: " + std::string(to_string(h.kind)) + " multiplier " + num(h.multiplier));
    const DWReport p = denjoy_wolff(MapExpr::hp_affine(1.0));
    o.require(p.kind == DWKind::parabolic && std::abs(p.multiplier - 1.0) <= 1e-3,
              "parabolic: " + std::string(to_string(p.kind)) + " multiplier " + num(p.multiplier));
    o.note("multipliers " + num(e.multiplier) + ", " + num(h.multiplier) + ", " + num(p.multiplier));
    return o;
}

// 10. The half-plane counterexample.
Outcome section8() {
    Outcome o;
    const Section8Build b = build_section8(5);
    o.require(b.complete && b.structure_ok(), "block structure");
    for (const auto& c : b.certificates) {
        o.require(c.far_abs > c.n - std::ldexp(1.0, -c.n), "far certificate n=" + std::to_string(c.n));
        o.require(c.return_gap < std::ldexp(1.0, -c.n), "return certificate n=" + std::to_string(c.n));
    }
    for (int n = 0; n <= 5; ++n) {
        o.require(classify_auto(halfplane_to_disc(section8_g(n))).kind == AutKind::parabolic,
                  "g_" + std::to_string(n) + " not parabolic");
    }
    const auto cert = certify_not_compactly_divergent(b, HyperbolicBall(DiscPoint(0.0), 1.0));
    o.require(cert.returns.size() >= 4 && cert.exits.size() >= 4,
              "returns " + std::to_string(cert.returns.size()) + ", exits " + std::to_string(cert.exits.size()));
    std::string ks;
    for (std::size_t k : b.k) {
        ks += (ks.empty() ? "" : ",") + std::to_string(k);
    }
    o.note("k = " + ks + "; " + std::to_string(cert.returns.size()) + " returns, " + std::to_string(cert.exits.size()) +
           " exits");
    return o;
}

// 11. Dense construction.
Outcome dense() {
    Outcome o;
    const auto targets = dyadic_targets(10);
    const DenseBuild d = build_dense(targets);
    MoebiusMap L = MoebiusMap::identity();
    std::size_t at = 0;
    double prev_max = 1e300, worst_res = 0.0;
    for (std::size_t j = 0; j < d.blocks.size(); ++j) {
        const auto& blk = d.blocks[j];
        double block_max = 0.0;
        for (; at < blk.realized_at; ++at) {
            L = compose(d.generators[at], L);
            const double dev = sup_deviation(d.generators[at]);
            block_max = std::max(block_max, dev);
            o.require(dev <= std::ldexp(1.0, -static_cast<int>(j + 1)), "deviation above delta in block " +
                                                                             std::to_string(j + 1));
        }
        const double res = matrix_distance(L, targets[j]);
        worst_res = std::max(worst_res, res);
        o.require(res < 1e-8, "residual " + num(res) + " at target " + std::to_string(j + 1));
        if (blk.k > 0) {
            o.require(block_max < prev_max, "deviation not decreasing at block " + std::to_string(j + 1));
            prev_max = block_max;
        }
    }
    o.note(std::to_string(d.generators.size()) + " generators, worst residual " + num(worst_res) +
           ", last deviation " + num(prev_max));
    return o;
}

// 12. Fixed point tracking.
Outcome fixed_points() {
    Outcome o;
    const auto s = contraction_shift_stream(0.1, 0.01, 2.0);
    // a is the fixed point of the limit map T_{0.1} o Scale(1/2): a = (a/2 + 0.1)/(1 + 0.05 a)
    const double a = (-0.5 + std::sqrt(0.25 + 4.0 * 0.05 * 0.1)) / (2.0 * 0.05);
    const auto t = track_fixed_points(s, 1000, Complex(a, 0.0));
    o.require(t.orbit_verdict == TrackVerdict::converges && t.orbit_gap < 1e-6, "orbit gap " + num(t.orbit_gap));
    o.require(t.fixed_point_verdict == TrackVerdict::converges, "fixed points gap " + num(t.final_gap));
    const auto rot = track_fixed_points(alternating_rotation_stream(0.3, 0.7), 1000);
    o.require(!rot.guard_passed && rot.orbit_verdict == TrackVerdict::refused, "rotation stream not refused");
    o.note("a = " + num(a) + ", orbit gap " + num(t.orbit_gap) + ", rotation refused");
    return o;
}

// Artifacts of a reduced full run, serialized exactly as the CLI writes them.
std::string artifacts(std::uint64_t seed) {
    std::ostringstream all;
    for (auto kind : {InequalityKind::lemma_6_1, InequalityKind::lipschitz_2, InequalityKind::transfer,
                      InequalityKind::theorem_F}) {
        const auto s = fuzz_margins(kind, 2000, seed);
        io::write_margins_csv(all, s);
        all << io::to_json(s).dump(2);
    }
    const auto basel = scale_product_stream(1.0, 2.0);
    const auto left = classify_left_limits(basel, DiscPoint(0.0), 2000);
    all << io::to_json(left).dump(2);
    io::write_series_csv(all, left.series);
    const auto st = left_straighten(basel, 1000, ProbeGrid::standard());
    all << io::to_json(st).dump(2);
    io::write_straighten_csv(all, st);
    const auto b = build_section8(4);
    all << io::to_json(b).dump(2);
    io::write_section8_orbit_csv(all, b);
    io::write_section8_svg(all, b);
    all << io::to_json(build_dense(dyadic_targets(5))).dump(2);
    all << io::to_json(track_fixed_points(contraction_shift_stream(0.1, 0.01, 2.0), 500)).dump(2);
    return all.str();
}

// 13. Determinism.
Outcome determinism() {
    Outcome o;
    const std::string first = artifacts(7);
    const std::string second = artifacts(7);
    o.require(first == second, "artifacts differ between runs");
    o.require(artifacts(8) != first, "seed has no effect");
    o.note(std::to_string(first.size()) + " bytes identical across runs");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"schwarz_pick_isometry", schwarz_pick},
        {"distortion_calculus", distortion_calculus},
        {"inequality_margins", margins},
        {"telescoping_straightening", telescoping},
        {"left_limit_classification", left_limits},
        {"right_limit_classification", right_limits},
        {"backward_orbit_straightening", backward_orbit},
        {"mu_step", mu_steps},
        {"denjoy_wolff", denjoy_wolff_cases},
        {"half_plane_construction", section8},
        {"dense_construction", dense},
        {"fixed_point_tracking", fixed_points},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::printf("%s %2zu %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
