#pragma once

#include <string>

#include "oscdecay/surface.hpp"
#include "oscdecay/weights.hpp"

namespace oscdecay::io {

// A parsed surface file: the map, its anisotropy weights, the sector
// region, a display name, and the hash of the canonical form (what
// reports embed so outputs are tied to their exact inputs).
struct SurfaceSpec {
    SurfaceMap phi;
    Weights w;
    SectorRegion r;
    std::string name;
    std::string hash;  // 16 hex digits, 64-bit FNV-1a of canonical_form
};

// Accepts plain decimals and "p/q" fraction strings.
double parse_rational(const std::string& text);

// Loads a JSON surface file; the name "example5" selects the built-in
// surface. Parse and validation failures carry the offending field in
// the exception message.
SurfaceSpec load_surface(const std::string& path_or_name);

// The built-in example: phi1 = -x^12/33 + y^6/30,
// phi2 = -x^12/44 + y^6/30 + x^6 y^3 / 18, weights (1/2, 1, 6),
// region [97/99, 1].
SurfaceSpec example5();

// Deterministic serialization (fixed field order, shortest round-trip
// number formatting); equal math content yields equal strings.
std::string canonical_form(const SurfaceSpec& spec);

std::string fnv1a_hex(const std::string& bytes);

} // namespace oscdecay::io
