#pragma once

#include <string>

namespace curv::detail {

// Shortest decimal form that round-trips the value (metric emit).
std::string format_double(double v);

// Fixed 17-significant-digit form (deterministic JSON reports).
std::string format_double17(double v);

}  // namespace curv::detail
