#pragma once

#include <cstddef>

#include "ifp/grid.hpp"

namespace ifp {

/// Procedural resolution target: bar groups of decreasing period in both
/// orientations (top half), a Siemens star (bottom left) and a set of rings
/// and dots (bottom right). Background sits at `background`, features at 1.
/// Layout scales with the grid size.
ImageGrid resolution_chart(std::size_t width, std::size_t height, double pixel_pitch_um, double background = 0.2);

}  // namespace ifp
