#pragma once

#include <string>

#include "confgeo/field.hpp"

namespace confgeo {

// Deterministic SVG heatmap: fixed color ramp over [min, max], one rect per
// inside cell, masked cells left blank, value range printed as a legend.
std::string svg_heatmap(const ScalarField& f);

}  // namespace confgeo
