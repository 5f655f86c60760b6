#pragma once

#include <string>
#include <vector>

#include "characteristica/chars.hpp"

namespace characteristica {

// Traced curves grouped by the factor family they belong to.
struct CurveFamily {
    std::string name;
    std::vector<Curve> curves;
};

// Self-contained SVG with four panels: one per family (the first two), both
// families overlaid with their seeds, and a per-curve invariant-drift chart.
[[nodiscard]] std::string curves_svg(const std::vector<CurveFamily>& families,
                                     const SampleRegion& region, const VarPair& vars,
                                     const std::string& title);

// family,curve,index,<v1>,<v2> rows for external tooling.
[[nodiscard]] std::string curves_csv(const std::vector<CurveFamily>& families,
                                     const VarPair& vars);

// per_side x per_side interior seeds, evenly spaced and pulled back from the
// boundary so tracers have room in every direction.
[[nodiscard]] std::vector<SamplePoint> seed_grid(const SampleRegion& region, int per_side);

}  // namespace characteristica
