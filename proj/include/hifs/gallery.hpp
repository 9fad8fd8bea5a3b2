#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hifs/geometry.hpp"
#include "hifs/ifs.hpp"
#include "hifs/moebius.hpp"

namespace hifs {

// The upper half-plane construction is carried out natively in H+ and only
// transported to the disc (by the Cayley transform) for the stream and for
// distance queries.

/// F(z) = z - 1 as a half-plane map.
MoebiusMap section8_F();
/// F_n(z) = z - 1 + i/n (not an automorphism).
MoebiusMap section8_Fn(int n);
/// phi_n(z) = (n z - 1)/(z + n).
MoebiusMap section8_phi(int n);
/// g_n = phi_n o F o phi_n^{-1}; g_0(z) = z/(1 + z).
MoebiusMap section8_g(int n);

struct Section8Block {
    enum class Kind { g, F };
    Kind kind = Kind::g;
    int n = 0;
    std::size_t first = 0;  // stream indices, inclusive
    std::size_t last = 0;
};

struct Section8Certificate {
    int n = 0;
    double far_abs = 0.0;        // |L_{m_{2n}}(i)|
    bool far_ok = false;         // > n - 2^{-n}
    double return_gap = 0.0;     // |L_{m_{2n+1}}(i) - i|
    bool return_ok = false;      // < 2^{-n}
    double telescoping_residual = 0.0;  // |F_n^n(w) - (w - n + i)|
};

struct Section8Build {
    int n_max = 0;
    int achieved = 0;  // last n with certified milestones
    bool complete = false;
    std::string diagnostic;
    std::vector<std::size_t> milestones;  // m_0 .. m_{2 achieved + 1}
    std::vector<std::size_t> k;           // k_1 .. k_achieved
    std::vector<Section8Block> blocks;
    std::vector<Section8Certificate> certificates;
    /// Stream index 1 is g_0; index n >= 2 is the n-th generator of the construction.
    GeneratorStream stream = GeneratorStream::list({});
    /// L_n(i) in H+ for n = 1 .. m_{2 achieved + 1}; entry 0 is i.
    std::vector<Complex> orbit;
    /// sup over a probe set of |g_n(z) - F(z)|, n = 1..n_max.
    std::vector<double> g_to_F;

    /// Conditions (a)-(d) as exact index bookkeeping.
    bool structure_ok() const;
};

inline constexpr std::size_t kSection8SearchCap = 10000000;

/// Builds up to n_max; stops early (complete = false) when the k_n search
/// exceeds the cap or stalls.
Section8Build build_section8(int n_max, std::size_t search_cap = kSection8SearchCap);

struct DivergenceCertificate {
    std::vector<std::size_t> returns;  // milestones m_{2n+1} with L(i) inside K
    std::vector<std::size_t> exits;    // milestones m_{2n} with L(i) outside K
    std::vector<double> return_distances;  // omega(center, L_{m_{2n+1}}(i)) per n
    std::vector<double> exit_distances;    // omega(center, L_{m_{2n}}(i)) per n
};

/// Throws PreconditionError unless K contains cayley(i) = 0.
DivergenceCertificate certify_not_compactly_divergent(const Section8Build& build, const HyperbolicBall& K);

struct DenseBlock {
    MoebiusMap target;
    double delta = 0.0;
    std::size_t k = 0;            // copies of the root appended
    std::size_t realized_at = 0;  // n_j
    double residual = 0.0;        // matrix_distance(L_{n_j}, target)
    double max_deviation = 0.0;   // sampled sup_{|z| = 0.9} |root(z) - z|
    std::optional<MoebiusMap> root;
};

struct DenseBuild {
    std::vector<DenseBlock> blocks;
    std::vector<MoebiusMap> generators;  // gamma_1 .. gamma_{n_last}
    GeneratorStream stream() const;
};

/// Number of circle samples used for sup_{|z| <= 0.9} deviations.
inline constexpr std::size_t kDeviationSamples = 512;

/// Sampled max over |z| = 0.9 of |g(z) - z|; by the maximum principle this is the sup over |z| <= 0.9.
double sup_deviation(const MoebiusMap& g);

/// delta_j = 2^{-j}.
double dyadic_delta(std::size_t j);

/// Throws CapExceeded when no k <= k_cap meets delta_j.
DenseBuild build_dense(const std::vector<MoebiusMap>& targets,
                       const std::function<double(std::size_t)>& delta_rule = dyadic_delta,
                       std::size_t k_cap = 1000000);

/// Automorphisms e^{i theta}(z + a)/(1 + conj(a) z) with a on the dyadic lattice
/// 2^{-L}(Z + iZ), |a| <= 1 - 2^{-L}, and theta a multiple of 2 pi 2^{-L}, for
/// L = 1, 2, ...; new parameters only, identity skipped.
std::vector<MoebiusMap> dyadic_targets(std::size_t count);

}  // namespace hifs
