#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnus/assoc.hpp"
#include "magnus/free_group.hpp"
#include "magnus/grid.hpp"
#include "magnus/series.hpp"

namespace magnus {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

const char* library_version();

// {"schema", "schema_version", "library_version", "config"}; callers add the payload.
Json artifact(const std::string& schema, const Json& config);

// Tensor-series schema:
//   {"dim_h", "trunc", "mode": "exact"|"float",
//    "components": {"m": [{"word": [...], "num", "den"} | {"word": [...], "val"}]}}
// with 1-based letters. Rationals too large for 64 bits are written as strings.
Json to_json(const QSeries& s);
Json to_json(const FSeries& s);
// Throws std::invalid_argument on malformed input. The float reader also
// accepts exact entries.
QSeries qseries_from_json(const Json& j);
FSeries fseries_from_json(const Json& j);

// {"p", "arity", "images": {"1": series, ...}}: the degree-(p+1) component
// of a derivation or automorphism restricted to H, as tensor series.
Json hom_to_json(const HomComponent<Rational>& h, int p, int trunc);

// Automorphism schema: {"n", "images": {"1": [letters], ...}, "inverse_images": {...}}.
Json to_json(const FreeAut& phi);
FreeAut aut_from_json(const Json& j);

// "0.3+1.1i", "-2i", "1.5", "1e-3-2e-2i".
cplx parse_complex(const std::string& text);
Json to_json(cplx z);  // [re, im]
// Accepts [re, im], a number, or a string in parse_complex syntax.
cplx complex_from_json(const Json& j);

struct LoopSpec {
  std::string label;
  std::vector<cplx> polyline;
};

// {"tau", "p0", "v", "loops": [{"label", "polyline": [[x, y], ...]}]}, points
// in the plane.
struct LoopsFile {
  cplx tau, p0, v;
  std::vector<LoopSpec> loops;
};
LoopsFile loops_from_json(const Json& j);
Json to_json(const LoopsFile& f);

Json to_json(const AssocCell& c);  // {"brackets": [[l, r], ...], "degree", "dim"}

}  // namespace magnus
