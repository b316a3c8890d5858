#pragma once

#include <string>

#include "topopc/persistence.hpp"

namespace topopc {

/// Persistence-diagram SVG: diagonal line, dim-0 pairs as dots, dim-1 pairs as
/// triangles, essential pairs in a labeled gutter band above the plot. Axes
/// span [0, 1.1 * max finite death].
std::string diagram_to_svg(const PersistenceDiagram& d, int size_px = 480);

}  // namespace topopc
