#include "hifs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hifs/errors.hpp"

namespace hifs::io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw MalformedInput(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("field '") + key + "': " + e.what());
    }
}

Complex complex_field_or(const json& j, const char* key, Complex fallback) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    return complex_from_json(j.at(key));
}

std::vector<MapExpr> maps_from(const json& j, const char* key) {
    const json& arr = j.contains(key) ? j.at(key) : json();
    if (!arr.is_array()) {
        throw MalformedInput(std::string("'") + key + "' must be an array of maps");
    }
    std::vector<MapExpr> out;
    for (const json& e : arr) {
        out.push_back(map_from_json(e));
    }
    return out;
}

json matrix_json(const Matrix2& m) {
    json out = json::array();
    for (const Complex& e : m) {
        out.push_back(complex_to_json(e));
    }
    return out;
}

json options_json(const StraightenOptions& o) {
    return {{"tol", o.tol}, {"tol_zero", o.tol_zero}, {"window", o.window}, {"phase_freeze", o.phase_freeze}};
}

json series_options_json(const SeriesOptions& o) {
    return {{"diverge_sum", o.diverge_sum},
            {"diverge_product", o.diverge_product},
            {"tail_window", o.tail_window},
            {"tail_tol", o.tail_tol},
            {"ratio_diverging", o.ratio_diverging},
            {"ratio_summable", o.ratio_summable},
            {"block_floor", o.block_floor}};
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json();
}

}  // namespace

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw MalformedInput("complex value must be a number or [re, im], got " + j.dump());
}

json to_json(const MoebiusMap& g) {
    return {{"matrix", matrix_json(g.matrix())}, {"tag", std::string(to_string(g.tag()))}};
}

MoebiusMap moebius_from_json(const json& j) {
    if (!j.is_object()) {
        throw MalformedInput("a Moebius map must be an object");
    }
    if (j.contains("matrix")) {
        const json& m = j.at("matrix");
        if (!m.is_array() || m.size() != 4) {
            throw MalformedInput("'matrix' must list four complex entries a, b, c, d");
        }
        const Matrix2 mat{complex_from_json(m[0]), complex_from_json(m[1]), complex_from_json(m[2]),
                          complex_from_json(m[3])};
        const std::string tag = field_or<std::string>(j, "tag", "");
        if (tag == "disc") {
            return MoebiusMap::from_matrix(mat, DomainTag::disc);
        }
        if (tag == "half_plane") {
            return MoebiusMap::from_matrix(mat, DomainTag::half_plane);
        }
        if (tag == "generic") {
            return MoebiusMap::from_matrix(mat, DomainTag::generic);
        }
        if (tag.empty()) {
            return MoebiusMap::infer(mat);
        }
        throw MalformedInput("unknown domain tag '" + tag + "'");
    }
    return make_disc_auto(DiscPoint(complex_field_or(j, "a", 0.0)), field_or<double>(j, "theta", 0.0));
}

json to_json(const MapExpr& f) {
    return std::visit(
        [](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Mobius>) {
                return {{"kind", "mobius"}, {"matrix", matrix_json(n.map.matrix())}};
            } else if constexpr (std::is_same_v<T, node::Monomial>) {
                return {{"kind", "monomial"}, {"power", n.power}};
            } else if constexpr (std::is_same_v<T, node::Scale>) {
                return {{"kind", "scale"}, {"factor", complex_to_json(n.factor)}};
            } else if constexpr (std::is_same_v<T, node::Blaschke>) {
                json zeros = json::array();
                for (const Complex& a : n.zeros) {
                    zeros.push_back(complex_to_json(a));
                }
                return {{"kind", "blaschke"}, {"zeros", zeros}, {"phase", n.phase}};
            } else if constexpr (std::is_same_v<T, node::Constant>) {
                return {{"kind", "constant"}, {"value", complex_to_json(n.value)}};
            } else if constexpr (std::is_same_v<T, node::Compose>) {
                json parts = json::array();
                for (const MapExpr& p : n.parts) {
                    parts.push_back(to_json(p));
                }
                return {{"kind", "compose"}, {"parts", parts}};
            } else if constexpr (std::is_same_v<T, node::HalfPlaneAffine>) {
                return {{"kind", "hp_affine"}, {"translation", complex_to_json(n.translation)}};
            } else {
                json parts = json::array();
                for (const MapExpr& p : n.parts) {
                    parts.push_back(to_json(p));
                }
                return {{"kind", "average"}, {"parts", parts}, {"weights", n.weights}};
            }
        },
        f.node());
}

MapExpr map_from_json(const json& j) {
    if (!j.is_object()) {
        throw MalformedInput("a map must be a JSON object with a 'kind'");
    }
    const std::string kind = field<std::string>(j, "kind");
    if (kind == "identity") {
        return MapExpr::identity();
    }
    if (kind == "mobius") {
        return MapExpr::mobius(moebius_from_json(j));
    }
    if (kind == "monomial") {
        return MapExpr::monomial(field<int>(j, "power"));
    }
    if (kind == "scale") {
        return MapExpr::scale(complex_from_json(j.contains("factor") ? j.at("factor") : json()));
    }
    if (kind == "blaschke") {
        const json& zs = j.contains("zeros") ? j.at("zeros") : json();
        if (!zs.is_array()) {
            throw MalformedInput("'zeros' must be an array");
        }
        std::vector<DiscPoint> zeros;
        for (const json& z : zs) {
            zeros.emplace_back(complex_from_json(z));
        }
        return MapExpr::blaschke(std::move(zeros), field_or<double>(j, "phase", 0.0));
    }
    if (kind == "constant") {
        return MapExpr::constant(DiscPoint(complex_from_json(j.contains("value") ? j.at("value") : json())));
    }
    if (kind == "compose") {
        return MapExpr::compose(maps_from(j, "parts"));
    }
    if (kind == "hp_affine") {
        return MapExpr::hp_affine(complex_from_json(j.contains("translation") ? j.at("translation") : json()));
    }
    if (kind == "average") {
        return MapExpr::average(maps_from(j, "parts"), field<std::vector<double>>(j, "weights"));
    }
    throw MalformedInput("unknown map kind '" + kind + "'");
}

GeneratorStream stream_from_json(const json& j) {
    if (!j.is_object()) {
        throw MalformedInput("a stream must be a JSON object with a 'type'");
    }
    const std::string type = field<std::string>(j, "type");
    if (type == "cycle") {
        return GeneratorStream::cycle(maps_from(j, "generators"));
    }
    if (type == "list") {
        return GeneratorStream::list(maps_from(j, "generators"));
    }
    if (type != "rule") {
        throw UnknownStreamKind("unknown stream type '" + type + "'");
    }
    const std::string name = field<std::string>(j, "name");
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (name == "scale_product") {
        return scale_product_stream(field_or<double>(params, "coefficient", 1.0),
                                    field_or<double>(params, "exponent", 2.0));
    }
    if (name == "contraction_shift") {
        return contraction_shift_stream(complex_field_or(params, "base", 0.1),
                                        field_or<double>(params, "amplitude", 0.01),
                                        field_or<double>(params, "exponent", 2.0));
    }
    if (name == "monomial") {
        return monomial_stream(field_or<int>(params, "power", 2));
    }
    if (name == "alternating_rotation") {
        return alternating_rotation_stream(field_or<double>(params, "theta1", 0.3),
                                           field_or<double>(params, "theta2", 0.7));
    }
    if (name == "section8") {
        return build_section8(field_or<int>(params, "n_max", 6)).stream;
    }
    throw UnknownStreamKind("unknown stream rule '" + name + "'");
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw MalformedInput(std::string("malformed JSON: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw MalformedInput("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

json to_json(const StraighteningResult& r) {
    json gammas = json::array();
    for (const MoebiusMap& g : r.gammas) {
        gammas.push_back(matrix_json(g.matrix()));
    }
    json grid = json::array();
    json samples = json::array();
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        grid.push_back(complex_to_json(r.grid[k]));
        samples.push_back(complex_to_json(r.h_samples[k]));
    }
    json out = {{"horizon", r.horizon},
                {"converged", r.converged},
                {"constant_limit", r.constant_limit},
                {"cauchy_residual", r.cauchy_residual},
                {"probe_point", complex_to_json(r.probe_point)},
                {"options", options_json(r.options)},
                {"grid", grid},
                {"h_samples", samples},
                {"distortion_at_0", r.trace.empty() ? 1.0 : r.trace.back().distortion_at_0},
                {"gammas", gammas}};
    if (!r.g_derivs.empty()) {
        json gd = json::array();
        for (const Complex& d : r.g_derivs) {
            gd.push_back(complex_to_json(d));
        }
        out["g_derivs_at_0"] = gd;
    }
    return out;
}

json to_json(const SeriesReport& r, bool include_rows) {
    json out = {{"mode", std::string(to_string(r.mode))},
                {"base", complex_to_json(r.base)},
                {"horizon", r.horizon},
                {"verdict", std::string(to_string(r.verdict))},
                {"rule", r.rule},
                {"block_ratio", r.block_ratio},
                {"partial_sum", r.rows.empty() ? 0.0 : r.rows.back().partial_sum},
                {"product", r.rows.empty() ? 1.0 : r.rows.back().product},
                {"product_consistency", optional_number(r.product_consistency)},
                {"thresholds", series_options_json(r.options)}};
    if (include_rows) {
        json rows = json::array();
        for (const SeriesRow& row : r.rows) {
            rows.push_back({row.n, row.term, row.partial_sum, row.product});
        }
        out["rows"] = rows;
    }
    return out;
}

json to_json(const LimitReport& r) {
    json out = {{"side", r.side == Side::left ? "left" : "right"},
                {"verdict", std::string(to_string(r.verdict))},
                {"horizon", r.horizon},
                {"radius", r.options.radius},
                {"orbit_bounded", r.bound.bounded},
                {"orbit_max_omega", r.bound.max_omega},
                {"series", to_json(r.series)},
                {"second_base", complex_to_json(r.second_base)},
                {"second_verdict", std::string(to_string(r.second_verdict))},
                {"base_points_agree", r.base_points_agree}};
    if (r.bound.escaped_at) {
        out["escaped_at"] = *r.bound.escaped_at;
    }
    if (r.constant_estimate) {
        out["constant_estimate"] = complex_to_json(*r.constant_estimate);
    }
    out["product_lower_bound"] = optional_number(r.product_lower_bound);
    return out;
}

json to_json(const FixedPointTrack& t) {
    json points = json::array();
    for (std::size_t n = 0; n < t.fixed_points.size(); ++n) {
        const auto& a = t.fixed_points[n];
        points.push_back({{"n", n + 1},
                          {"a", a ? complex_to_json(*a) : json()},
                          {"residual", std::isnan(t.residuals[n]) ? json() : json(t.residuals[n])}});
    }
    return {{"horizon", t.horizon},
            {"limit_candidate", complex_to_json(t.limit_candidate)},
            {"final_gap", t.final_gap},
            {"fixed_point_verdict", std::string(to_string(t.fixed_point_verdict))},
            {"guard_passed", t.guard_passed},
            {"guard_reason", t.guard_reason},
            {"max_sampled_distortion", t.max_sampled_distortion},
            {"orbit_gap", t.orbit_gap},
            {"orbit_verdict", std::string(to_string(t.orbit_verdict))},
            {"tolerances", {{"tol", t.options.tol}, {"guard_delta", t.options.guard_delta}, {"radius", t.options.radius}}},
            {"fixed_points", points}};
}

json to_json(const FuzzSummary& s) {
    return {{"kind", std::string(to_string(s.kind))},
            {"seed", s.seed},
            {"count", s.count},
            {"coefficient", s.coefficient},
            {"min_margin", s.min_margin},
            {"argmin", s.argmin},
            {"sharp", s.sharp},
            {"failures", s.failures},
            {"sharp_tolerance", kSharpTol},
            {"empirical_coefficient", optional_number(s.empirical_coefficient)}};
}

json to_json(const Section8Build& b) {
    json certs = json::array();
    for (const Section8Certificate& c : b.certificates) {
        certs.push_back({{"n", c.n},
                         {"far_abs", c.far_abs},
                         {"far_ok", c.far_ok},
                         {"return_gap", c.return_gap},
                         {"return_ok", c.return_ok},
                         {"telescoping_residual", c.telescoping_residual}});
    }
    json blocks = json::array();
    for (const Section8Block& blk : b.blocks) {
        blocks.push_back({{"kind", blk.kind == Section8Block::Kind::g ? "g" : "F"},
                          {"n", blk.n},
                          {"first", blk.first},
                          {"last", blk.last}});
    }
    return {{"n_max", b.n_max},
            {"achieved", b.achieved},
            {"complete", b.complete},
            {"diagnostic", b.diagnostic},
            {"structure_ok", b.structure_ok()},
            {"milestones", b.milestones},
            {"k", b.k},
            {"blocks", blocks},
            {"certificates", certs},
            {"g_to_F", b.g_to_F}};
}

json to_json(const DivergenceCertificate& c) {
    return {{"returns", c.returns},
            {"exits", c.exits},
            {"return_distances", c.return_distances},
            {"exit_distances", c.exit_distances}};
}

json to_json(const DenseBuild& d) {
    json blocks = json::array();
    for (const DenseBlock& b : d.blocks) {
        blocks.push_back({{"target", matrix_json(b.target.matrix())},
                          {"delta", b.delta},
                          {"k", b.k},
                          {"realized_at", b.realized_at},
                          {"residual", b.residual},
                          {"max_deviation", b.max_deviation},
                          {"root", b.root ? matrix_json(b.root->matrix()) : json()}});
    }
    return {{"generators", d.generators.size()}, {"deviation_samples", kDeviationSamples}, {"blocks", blocks}};
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), width_(header.size()) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) {
        throw PreconditionError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(width_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << (i ? "," : "") << cells[i];
    }
    out_ << '\n';
}

void write_straighten_csv(std::ostream& out, const StraighteningResult& r) {
    CsvWriter csv(out, {"n", "residual", "probe_abs", "distortion_at_0"});
    for (const StraightenTraceRow& row : r.trace) {
        csv.row({std::to_string(row.n), row.residual ? fmt(*row.residual) : "", row.probe_abs ? fmt(*row.probe_abs) : "",
                 fmt(row.distortion_at_0)});
    }
}

void write_series_csv(std::ostream& out, const SeriesReport& r) {
    CsvWriter csv(out, {"n", "term", "partial_sum", "product", "orbit_re", "orbit_im"});
    for (const SeriesRow& row : r.rows) {
        csv.row({std::to_string(row.n), fmt(row.term), fmt(row.partial_sum), fmt(row.product), fmt(row.point.real()),
                 fmt(row.point.imag())});
    }
}

void write_margins_csv(std::ostream& out, const FuzzSummary& s) {
    CsvWriter csv(out, {"kind", "seed", "z", "w", "lhs", "rhs", "margin"});
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const InequalityMargin& m = s.rows[i];
        csv.row({std::string(to_string(m.kind)), std::to_string(s.row_seeds[i]), fmt(m.z), fmt(m.w), fmt(m.lhs),
                 fmt(m.rhs), fmt(m.margin)});
    }
}

void write_section8_orbit_csv(std::ostream& out, const Section8Build& b) {
    CsvWriter csv(out, {"n", "re", "im", "disc_re", "disc_im"});
    for (std::size_t n = 0; n < b.orbit.size(); ++n) {
        const Complex d = cayley_raw(b.orbit[n]);
        csv.row({std::to_string(n), fmt(b.orbit[n].real()), fmt(b.orbit[n].imag()), fmt(d.real()), fmt(d.imag())});
    }
}

void write_section8_svg(std::ostream& out, const Section8Build& b) {
    // Fixed frame: x in [-1, n_max + 1], y in [0, 1.5], y axis flipped.
    const double x0 = -1.0;
    const double x1 = b.n_max + 1.0;
    const double y1 = 1.5;
    const double scale = 100.0;
    const double width = (x1 - x0) * scale;
    const double height = y1 * scale;
    auto px = [&](Complex z) { return fmt((z.real() - x0) * scale) + "," + fmt((y1 - z.imag()) * scale); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
    out << "<line x1=\"0\" y1=\"" << fmt(height) << "\" x2=\"" << fmt(width) << "\" y2=\"" << fmt(height)
        << "\" stroke=\"black\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (std::size_t n = 0; n < b.orbit.size(); ++n) {
        out << (n ? " " : "") << px(b.orbit[n]);
    }
    out << "\"/>\n";
    for (std::size_t i = 1; i < b.milestones.size(); ++i) {
        const std::size_t m = b.milestones[i];
        if (m >= b.orbit.size()) {
            break;
        }
        const Complex z = b.orbit[m];
        const std::string colour = i % 2 == 0 ? "firebrick" : "seagreen";
        out << "<circle cx=\"" << fmt((z.real() - x0) * scale) << "\" cy=\"" << fmt((y1 - z.imag()) * scale)
            << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    out << "<circle cx=\"" << fmt(-x0 * scale) << "\" cy=\"" << fmt((y1 - 1.0) * scale)
        << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
    out << "</svg>\n";
}

}  // namespace hifs::io
