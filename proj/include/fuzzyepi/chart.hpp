#pragma once

#include <string>

#include "fuzzyepi/engine.hpp"

namespace fuzzyepi {

/// Self-contained SVG line chart of active infections and daily new
/// infections against the day axis.
void write_chart(const std::string& path, const TimeSeries& series);

} // namespace fuzzyepi
