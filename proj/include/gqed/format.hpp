#pragma once

#include <string>

namespace gqed {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

// Fixed 15-significant-digit form for human-readable tables.
std::string format_table(double value);

}  // namespace gqed
