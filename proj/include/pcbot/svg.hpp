#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcbot/vec2.hpp"

namespace pcbot::io {

struct SvgPlot {
  std::string title;
  std::vector<std::vector<Vec2>> runs;  ///< cycle-start positions per run, table frame (m)
  std::vector<Vec2> expected;           ///< planned path, drawn as a polyline; may be empty
};

/// Overlay of per-run magnet paths in table-frame millimetres, y up. Each
/// run is one <path>; cycle starts are marked with circles and the start
/// of every run with a red cross.
void write_svg(std::ostream& out, const SvgPlot& plot);

}  // namespace pcbot::io
