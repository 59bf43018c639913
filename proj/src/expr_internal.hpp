#pragma once

#include <string>

#include "curv/metric.hpp"

namespace curv::detail {

// Parse one metric-component expression against the names declared so far.
// `line` and `col_offset` locate the expression text inside its file so
// errors report file coordinates.
ExprPtr parse_expression(const std::string& text, const MetricSpec& spec, int line,
                         int col_offset);

}  // namespace curv::detail
