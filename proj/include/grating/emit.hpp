#pragma once

#include <string>

namespace grating {

/// Shortest decimal string that reads back to the same double ('.' separator).
std::string format_double(double v);

/// Twelve significant digits, for echoing user parameters after unit conversion.
std::string format_parameter(double v);

}  // namespace grating
