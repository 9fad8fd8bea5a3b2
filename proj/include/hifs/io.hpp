#pragma once

// JSON and CSV serialization for the library types. Input parsers throw
// MalformedInput for schema errors and UnknownStreamKind for unknown stream
// types or rule names.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hifs/bounds.hpp"
#include "hifs/criteria.hpp"
#include "hifs/gallery.hpp"
#include "hifs/holomap.hpp"
#include "hifs/ifs.hpp"
#include "hifs/moebius.hpp"
#include "hifs/straighten.hpp"

namespace hifs::io {

using nlohmann::json;

/// Complex values are written as [re, im]; a bare number is accepted on input.
json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const MoebiusMap& g);
/// {"matrix": [[re, im] x 4], "tag": ...} or {"a": [re, im], "theta": t}.
MoebiusMap moebius_from_json(const json& j);

json to_json(const MapExpr& f);
MapExpr map_from_json(const json& j);

/// {"type": "cycle"|"list", "generators": [...]} or
/// {"type": "rule", "name": ..., "params": {...}}.
GeneratorStream stream_from_json(const json& j);
/// Reads and parses a file; MalformedInput on I/O or syntax errors.
json read_json_file(const std::string& path);
json parse_json_text(const std::string& text);

json to_json(const StraighteningResult& r);
json to_json(const SeriesReport& r, bool include_rows = false);
json to_json(const LimitReport& r);
json to_json(const FixedPointTrack& t);
json to_json(const FuzzSummary& s);
json to_json(const Section8Build& b);
json to_json(const DivergenceCertificate& c);
json to_json(const DenseBuild& d);

/// CSV cells carry %.17g.
std::string fmt(double x);
/// re+imi with %.17g parts, a single CSV cell.
std::string fmt(Complex z);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t width_;
};

void write_straighten_csv(std::ostream& out, const StraighteningResult& r);
void write_series_csv(std::ostream& out, const SeriesReport& r);
void write_margins_csv(std::ostream& out, const FuzzSummary& s);
/// n, re, im (half-plane), disc_re, disc_im.
void write_section8_orbit_csv(std::ostream& out, const Section8Build& b);

/// Polyline of the H+ orbit of i with circles at the milestones.
void write_section8_svg(std::ostream& out, const Section8Build& b);

}  // namespace hifs::io
