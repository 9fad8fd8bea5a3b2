#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hifs/geometry.hpp"
#include "hifs/holomap.hpp"
#include "hifs/moebius.hpp"

namespace hifs {

enum class InequalityKind { lemma_6_1, lipschitz_2, transfer, theorem_F };
std::string_view to_string(InequalityKind kind);
/// Accepts the enum names and the CLI spellings lemma6.1, lipschitz2, transfer, theoremF.
std::optional<InequalityKind> parse_inequality_kind(std::string_view name);

/// Margins at least -kSharpTol are passes; |margin| <= kSharpTol is reported as sharp.
inline constexpr double kSharpTol = 1e-9;

struct InequalityMargin {
    InequalityKind kind = InequalityKind::lemma_6_1;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    Complex z;
    Complex w;
    /// lhs divided by the coefficient-free part of rhs (lipschitz_2, transfer,
    /// theorem_F); the smallest coefficient for which this draw would pass.
    std::optional<double> needed_coefficient;
    std::optional<MoebiusMap> gamma;  // theorem_F only

    bool sharp() const { return margin >= -kSharpTol && margin <= kSharpTol; }
    bool passed() const { return margin >= -kSharpTol; }
};

/// The automorphism gamma with gamma(w) = f(w) and arg gamma'(w) = arg f'(w);
/// psi o phi^{-1} when f^#(w) = 0, and f itself when f is an automorphism.
MoebiusMap theorem_f_gamma(const MapExpr& f, DiscPoint w);

/// `f` is ignored for lemma_6_1. `coefficient` replaces the constant 2 on the
/// right-hand side of lipschitz_2, transfer and theorem_F.
InequalityMargin margin(InequalityKind kind, const std::optional<MapExpr>& f, DiscPoint z, DiscPoint w,
                        double coefficient = 2.0);

/// One reproducible fuzz draw: a Blaschke product with 1-4 zeros uniform in
/// |a| <= 0.8 and a uniform phase, composed with probability 1/2 with
/// Scale(r e^{it}), r uniform in [0.1, 1); z and w uniform in |z| <= 0.9.
struct FuzzDraw {
    std::uint64_t seed = 0;
    MapExpr f;
    DiscPoint z;
    DiscPoint w;
};

/// Per-draw seed derived from the run seed and the draw index.
std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t index);
/// Automorphism draws are replaced by redrawing from the same generator when
/// `allow_automorphism` is false.
FuzzDraw fuzz_draw(std::uint64_t draw_seed, bool allow_automorphism = true);

struct FuzzSummary {
    InequalityKind kind = InequalityKind::lemma_6_1;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    double coefficient = 2.0;
    double min_margin = 0.0;
    std::size_t argmin = 0;
    std::size_t sharp = 0;
    std::size_t failures = 0;
    /// Largest needed_coefficient seen, i.e. the empirical minimum coefficient.
    std::optional<double> empirical_coefficient;
    std::vector<InequalityMargin> rows;
    std::vector<std::uint64_t> row_seeds;
};

FuzzSummary fuzz_margins(InequalityKind kind, std::size_t count, std::uint64_t seed, double coefficient = 2.0);

struct CorollaryGRow {
    Complex z;
    double defect = 0.0;    // (1 - f^#(z_n)) / (1 - |z_n|)^2
    MoebiusMap gamma;
    double distance = 0.0;  // sup over the grid of omega(f(z), gamma_n(z))
    double bound = 0.0;     // 32 / (1 - r)^2 times the defect, r the largest grid radius
};

/// Throws PreconditionError unless |z_n| is strictly increasing.
std::vector<CorollaryGRow> corollary_g_probe(const MapExpr& f, const std::vector<DiscPoint>& boundary_seq);

}  // namespace hifs
