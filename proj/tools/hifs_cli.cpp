#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hifs/bounds.hpp"
#include "hifs/criteria.hpp"
#include "hifs/errors.hpp"
#include "hifs/gallery.hpp"
#include "hifs/io.hpp"
#include "hifs/straighten.hpp"

namespace fs = std::filesystem;
using hifs::io::json;

namespace {

enum Exit : int {
    kOk = 0,
    kValidation = 2,
    kNumerical = 3,
    kMalformed = 4,
    kUnknownStream = 5,
    kCap = 6,
};

struct Common {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool svg = false;
};

struct StreamInput {
    std::string path;
    std::string inline_json;
};

Common g_common;
std::string g_command;

void add_common(CLI::App* sub) {
    sub->add_option("--out-dir", g_common.out_dir, "Output directory (default $HIFS_OUT_DIR or .)");
    sub->add_option("--seed", g_common.seed, "Seed recorded in every output");
}

void add_stream(CLI::App* sub, StreamInput& in) {
    auto* file = sub->add_option("--stream", in.path, "Stream description file (JSON)");
    auto* text = sub->add_option("--stream-json", in.inline_json, "Inline stream description");
    file->excludes(text);
}

json load_stream_json(const StreamInput& in) {
    if (!in.inline_json.empty()) {
        return hifs::io::parse_json_text(in.inline_json);
    }
    if (in.path.empty()) {
        throw hifs::PreconditionError("one of --stream or --stream-json is required");
    }
    return hifs::io::read_json_file(in.path);
}

hifs::Complex point_arg(const std::vector<double>& v) {
    if (v.empty() || v.size() > 2) {
        throw hifs::PreconditionError("a point is given as RE or RE IM");
    }
    return {v[0], v.size() == 2 ? v[1] : 0.0};
}

fs::path out_path(const std::string& name) {
    fs::path dir = g_common.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("HIFS_OUT_DIR");
        dir = env ? env : ".";
    }
    fs::create_directories(dir);
    return dir / name;
}

std::ofstream open_out(const std::string& name) {
    const fs::path p = out_path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw hifs::PreconditionError("cannot write " + p.string());
    }
    return out;
}

void write_json(const std::string& name, const json& j) {
    auto out = open_out(name);
    out << j.dump(2) << '\n';
}

json seed_json() {
    return g_common.seed ? json(*g_common.seed) : json();
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw hifs::PreconditionError(std::string(name) + " must be positive");
    }
}

void require_horizon(std::size_t N) {
    if (N < 1) {
        throw hifs::PreconditionError("horizon N must be at least 1");
    }
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
    StreamInput stream;
    std::string side = "left";
    std::size_t N = 100;
    std::vector<double> z{0.0};
};

int run_simulate(const SimulateArgs& a) {
    require_horizon(a.N);
    const hifs::GeneratorStream stream = hifs::io::stream_from_json(load_stream_json(a.stream));
    const hifs::DiscPoint z(point_arg(a.z));
    const std::vector<hifs::DiscPoint> seeds{z};
    auto out = open_out("orbit_" + a.side + ".csv");
    hifs::io::CsvWriter csv(out, {"n", "re", "im", "omega_from_0"});
    auto emit = [&](std::size_t n, hifs::Complex v) {
        csv.row({std::to_string(n), hifs::io::fmt(v.real()), hifs::io::fmt(v.imag()),
                 hifs::io::fmt(hifs::omega(0.0, v))});
    };
    emit(0, z.value());
    if (a.side == "left") {
        hifs::LeftOrbitCursor cursor(stream, seeds);
        for (std::size_t n = 1; n <= a.N; ++n) {
            cursor.advance();
            emit(n, cursor.values()[0]);
        }
    } else {
        hifs::RightOrbitState state(stream, seeds);
        for (std::size_t n = 1; n <= a.N; ++n) {
            state.advance();
            emit(n, state.values()[0]);
        }
    }
    return kOk;
}

// --- straighten ------------------------------------------------------------

struct StraightenArgs {
    StreamInput stream;
    std::string side = "left";
    std::size_t N = 1000;
    std::vector<double> probe{0.5};
    std::string orbit;
    std::optional<double> w0;
    double tol = 1e-8;
    double tol_zero = 1e-9;
    std::size_t window = 10;
};

// Backward orbit for the right side: an explicit file, w_n = 0 when every
// f_n fixes 0, or principal roots of w0 for a monomial rule.
hifs::BackwardOrbit right_orbit(const StraightenArgs& a, const json& spec, const hifs::GeneratorStream& stream) {
    if (!a.orbit.empty()) {
        const json j = hifs::io::read_json_file(a.orbit);
        if (!j.is_array()) {
            throw hifs::MalformedInput("orbit file must be a JSON array of points");
        }
        std::vector<hifs::Complex> values;
        for (const json& p : j) {
            values.push_back(hifs::io::complex_from_json(p));
        }
        return hifs::BackwardOrbit::from_values(values);
    }
    if (a.w0) {
        if (spec.value("type", "") != "rule" || spec.value("name", "") != "monomial") {
            throw hifs::PreconditionError("--w0 builds orbits for the monomial rule only; pass --orbit instead");
        }
        const int p = spec.contains("params") ? spec["params"].value("power", 2) : 2;
        if (*a.w0 <= 0.0 || *a.w0 >= 1.0) {
            throw hifs::PreconditionError("--w0 must lie in (0, 1)");
        }
        std::vector<hifs::Complex> values;
        for (std::size_t n = 0; n <= a.N; ++n) {
            const double v = std::pow(*a.w0, std::pow(1.0 / p, static_cast<double>(n)));
            if (!(v < 1.0)) {
                throw hifs::NumericalAbort("root orbit of w0 rounds to 1 at n = " + std::to_string(n) +
                                           "; lower --N");
            }
            values.emplace_back(v, 0.0);
        }
        return hifs::BackwardOrbit::from_values(values);
    }
    for (std::size_t n = 1; n <= a.N; ++n) {
        if (std::abs(stream.at(n)(0.0)) != 0.0) {
            throw hifs::PreconditionError("f_" + std::to_string(n) +
                                          "(0) != 0; give a backward orbit with --orbit or --w0");
        }
    }
    return hifs::BackwardOrbit(std::vector<hifs::DiscPoint>(a.N + 1, hifs::DiscPoint(0.0)));
}

int run_straighten(const StraightenArgs& a) {
    require_horizon(a.N);
    require_positive(a.tol, "--tol");
    require_positive(a.tol_zero, "--tol-zero");
    if (a.window < 1) {
        throw hifs::PreconditionError("--window must be at least 1");
    }
    const json spec = load_stream_json(a.stream);
    const hifs::GeneratorStream stream = hifs::io::stream_from_json(spec);
    hifs::StraightenOptions opts;
    opts.tol = a.tol;
    opts.tol_zero = a.tol_zero;
    opts.window = a.window;
    const hifs::DiscPoint w(point_arg(a.probe));
    const hifs::ProbeGrid grid = hifs::ProbeGrid::standard();
    hifs::StraighteningResult r;
    if (a.side == "left") {
        r = hifs::left_straighten(stream, a.N, grid, w, opts);
    } else {
        r = hifs::right_straighten(stream, right_orbit(a, spec, stream), a.N, grid, opts, w);
    }
    json j = hifs::io::to_json(r);
    j["side"] = a.side;
    j["seed"] = seed_json();
    j["stream"] = spec;
    write_json("straighten_" + a.side + ".json", j);
    auto csv = open_out("straighten_" + a.side + ".csv");
    hifs::io::write_straighten_csv(csv, r);
    return kOk;
}

// --- classify --------------------------------------------------------------

struct ClassifyArgs {
    StreamInput stream;
    std::string side = "left";
    std::size_t N = 10000;
    std::vector<double> z0{0.0};
    double radius = 5.0;
};

int run_classify(const ClassifyArgs& a) {
    require_horizon(a.N);
    require_positive(a.radius, "--radius");
    const json spec = load_stream_json(a.stream);
    const hifs::GeneratorStream stream = hifs::io::stream_from_json(spec);
    hifs::ClassifyOptions opts;
    opts.radius = a.radius;
    const hifs::DiscPoint z0(point_arg(a.z0));
    const hifs::LimitReport r = a.side == "left" ? hifs::classify_left_limits(stream, z0, a.N, opts)
                                                 : hifs::classify_right_limits(stream, z0, a.N, opts);
    json j = hifs::io::to_json(r);
    j["seed"] = seed_json();
    j["stream"] = spec;
    write_json("classify_" + a.side + ".json", j);
    auto csv = open_out("series_" + a.side + ".csv");
    hifs::io::write_series_csv(csv, r.series);
    std::cout << hifs::to_string(r.verdict) << '\n';
    return kOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string kind;
    std::size_t fuzz = 1000;
    double coefficient = 2.0;
};

int run_verify(const VerifyArgs& a) {
    const auto kind = hifs::parse_inequality_kind(a.kind);
    if (!kind) {
        throw hifs::PreconditionError("unknown inequality kind '" + a.kind + "'");
    }
    if (!g_common.seed) {
        throw hifs::PreconditionError("verify draws random maps and needs --seed");
    }
    if (a.fuzz < 1) {
        throw hifs::PreconditionError("--fuzz must be at least 1");
    }
    require_positive(a.coefficient, "--coefficient");
    const hifs::FuzzSummary s = hifs::fuzz_margins(*kind, a.fuzz, *g_common.seed, a.coefficient);
    const std::string name(hifs::to_string(*kind));
    auto csv = open_out("margins_" + name + ".csv");
    hifs::io::write_margins_csv(csv, s);
    write_json("verify_" + name + ".json", hifs::io::to_json(s));
    std::cout << "min_margin " << hifs::io::fmt(s.min_margin) << " failures " << s.failures << '\n';
    return kOk;
}

// --- gallery ---------------------------------------------------------------

struct GalleryArgs {
    std::string example;
    int nmax = 6;
    std::string targets;
    std::size_t count = 6;
    std::size_t k_cap = 1000000;
    double ball_radius = 1.0;
};

int run_gallery(const GalleryArgs& a) {
    if (a.example == "section8") {
        if (a.nmax < 1) {
            throw hifs::PreconditionError("--nmax must be at least 1");
        }
        const hifs::Section8Build b = hifs::build_section8(a.nmax);
        if (!b.complete) {
            throw hifs::CapExceeded(b.diagnostic);
        }
        const hifs::HyperbolicBall K{hifs::DiscPoint(0.0), a.ball_radius};
        json j = hifs::io::to_json(b);
        j["divergence"] = hifs::io::to_json(hifs::certify_not_compactly_divergent(b, K));
        j["ball_radius"] = a.ball_radius;
        j["seed"] = seed_json();
        write_json("section8.json", j);
        auto csv = open_out("section8_orbit.csv");
        hifs::io::write_section8_orbit_csv(csv, b);
        if (g_common.svg) {
            auto svg = open_out("section8_orbit.svg");
            hifs::io::write_section8_svg(svg, b);
        }
        return kOk;
    }
    std::vector<hifs::MoebiusMap> targets;
    if (!a.targets.empty()) {
        const json j = hifs::io::read_json_file(a.targets);
        if (!j.is_array()) {
            throw hifs::MalformedInput("targets file must be a JSON array of Moebius maps");
        }
        for (const json& t : j) {
            targets.push_back(hifs::io::moebius_from_json(t));
        }
    } else {
        targets = hifs::dyadic_targets(a.count);
    }
    const hifs::DenseBuild d = hifs::build_dense(targets, hifs::dyadic_delta, a.k_cap);
    json j = hifs::io::to_json(d);
    j["seed"] = seed_json();
    write_json("dense.json", j);
    auto out = open_out("dense_orbit.csv");
    hifs::io::CsvWriter csv(out, {"n", "re", "im"});
    hifs::Complex z = 0.0;
    csv.row({"0", hifs::io::fmt(0.0), hifs::io::fmt(0.0)});
    for (std::size_t n = 0; n < d.generators.size(); ++n) {
        z = d.generators[n](z);
        csv.row({std::to_string(n + 1), hifs::io::fmt(z.real()), hifs::io::fmt(z.imag())});
    }
    return kOk;
}

// --- fixed-points ----------------------------------------------------------

struct FixedArgs {
    StreamInput stream;
    std::size_t N = 1000;
    std::vector<double> a;
    double guard_delta = 1e-3;
    double tol = 1e-6;
};

int run_fixed_points(const FixedArgs& a) {
    require_horizon(a.N);
    require_positive(a.guard_delta, "--guard-delta");
    require_positive(a.tol, "--tol");
    const json spec = load_stream_json(a.stream);
    const hifs::GeneratorStream stream = hifs::io::stream_from_json(spec);
    hifs::FixedPointOptions opts;
    opts.guard_delta = a.guard_delta;
    opts.tol = a.tol;
    std::optional<hifs::Complex> candidate;
    if (!a.a.empty()) {
        candidate = point_arg(a.a);
    }
    const hifs::FixedPointTrack t = hifs::track_fixed_points(stream, a.N, candidate, opts);
    json j = hifs::io::to_json(t);
    j["seed"] = seed_json();
    j["stream"] = spec;
    write_json("fixed_points.json", j);
    std::cout << hifs::to_string(t.fixed_point_verdict) << ' ' << hifs::to_string(t.orbit_verdict) << '\n';
    return kOk;
}

void write_diagnostics(const std::string& kind, const std::string& message) {
    try {
        write_json("diagnostics.json",
                   {{"command", g_command}, {"error", kind}, {"message", message}, {"seed", seed_json()}});
    } catch (const std::exception&) {
        // the original error is what gets reported
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic iterated function systems: experiments and verification"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Orbit of a point under L_n or R_n");
    add_common(simulate);
    add_stream(simulate, sim.stream);
    simulate->add_option("--side", sim.side)->check(CLI::IsMember({"left", "right"}));
    simulate->add_option("--N", sim.N, "Horizon");
    simulate->add_option("--z", sim.z, "Start point RE [IM]")->expected(1, 2);

    StraightenArgs st;
    auto* straighten = app.add_subcommand("straighten", "Straightening maps gamma_n and the limit H");
    add_common(straighten);
    add_stream(straighten, st.stream);
    straighten->add_option("--side", st.side)->check(CLI::IsMember({"left", "right"}));
    straighten->add_option("--N", st.N, "Horizon");
    straighten->add_option("--probe", st.probe, "Normalization point w, RE [IM]")->expected(1, 2);
    straighten->add_option("--orbit", st.orbit, "Backward orbit file (JSON array of points)");
    straighten->add_option("--w0", st.w0, "Start of the root orbit for the monomial rule");
    straighten->add_option("--tol", st.tol);
    straighten->add_option("--tol-zero", st.tol_zero);
    straighten->add_option("--window", st.window);

    ClassifyArgs cl;
    auto* classify = app.add_subcommand("classify", "Constant or nonconstant limit functions");
    add_common(classify);
    add_stream(classify, cl.stream);
    classify->add_option("--side", cl.side)->check(CLI::IsMember({"left", "right"}));
    classify->add_option("--N", cl.N, "Horizon");
    classify->add_option("--z0", cl.z0, "Base point RE [IM]")->expected(1, 2);
    classify->add_option("--radius", cl.radius, "Orbit escape radius");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Fuzz an inequality and report margins");
    add_common(verify);
    verify->add_option("--kind", ver.kind, "lemma6.1 | lipschitz2 | transfer | theoremF")->required();
    verify->add_option("--fuzz", ver.fuzz, "Number of random draws");
    verify->add_option("--coefficient", ver.coefficient, "Constant on the right-hand side");

    GalleryArgs gal;
    auto* gallery = app.add_subcommand("gallery", "Worked constructions");
    add_common(gallery);
    gallery->add_option("--example", gal.example)->required()->check(CLI::IsMember({"section8", "dense"}));
    gallery->add_option("--nmax", gal.nmax, "Last block of the half-plane construction");
    gallery->add_option("--ball-radius", gal.ball_radius, "Radius of the ball about 0 used for returns and exits");
    gallery->add_option("--targets", gal.targets, "Dense targets file (JSON array of Moebius maps)");
    gallery->add_option("--count", gal.count, "Number of dyadic targets when no file is given");
    gallery->add_option("--k-cap", gal.k_cap, "Largest root order tried per target");
    gallery->add_flag("--svg", g_common.svg, "Also write an SVG of the orbit");

    FixedArgs fx;
    auto* fixed = app.add_subcommand("fixed-points", "Track fixed points of f_n and the orbit L_n");
    add_common(fixed);
    add_stream(fixed, fx.stream);
    fixed->add_option("--N", fx.N, "Horizon");
    fixed->add_option("--a", fx.a, "Limit candidate RE [IM]")->expected(1, 2);
    fixed->add_option("--guard-delta", fx.guard_delta);
    fixed->add_option("--tol", fx.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*simulate) {
            g_command = "simulate";
            return run_simulate(sim);
        }
        if (*straighten) {
            g_command = "straighten";
            return run_straighten(st);
        }
        if (*classify) {
            g_command = "classify";
            return run_classify(cl);
        }
        if (*verify) {
            g_command = "verify";
            return run_verify(ver);
        }
        if (*gallery) {
            g_command = "gallery";
            return run_gallery(gal);
        }
        g_command = "fixed-points";
        return run_fixed_points(fx);
    } catch (const hifs::MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kMalformed;
    } catch (const hifs::UnknownStreamKind& e) {
        std::cerr << "unknown stream kind: " << e.what() << '\n';
        return kUnknownStream;
    } catch (const hifs::CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kCap;
    } catch (const hifs::PreconditionError& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kValidation;
    } catch (const hifs::DomainError& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kValidation;
    } catch (const hifs::Error& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        write_diagnostics("numerical_abort", e.what());
        return kNumerical;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kValidation;
    }
}
