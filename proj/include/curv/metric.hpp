#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "curv/tensor.hpp"

namespace curv {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, Coord, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

// Immutable expression node.  Number nodes are always non-negative; negative
// literals are represented as Neg(Number) so printing round-trips to the
// same tree the parser builds.
struct Expr {
  ExprKind kind;
  double number = 0.0;                    // Number
  int coord = -1;                         // Coord: index into the spec's coords
  std::string name;                       // Coord/Param name, Call function name
  UnivariateFn func = UnivariateFn::Sin;  // Call
  int exponent = 0;                       // Pow
  ExprPtr a, b;                           // a: unary child / left, b: right
};

namespace ast {
ExprPtr number(double v);
ExprPtr coord(int index, std::string name);
ExprPtr param(std::string name);
ExprPtr neg(ExprPtr x);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r);
ExprPtr div(ExprPtr l, ExprPtr r);
ExprPtr pow(ExprPtr x, int e);
ExprPtr call(UnivariateFn f, ExprPtr x);
}  // namespace ast

using Point = std::vector<double>;

struct MetricSpec {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  std::map<std::string, double> params;
  std::vector<std::array<double, 2>> domain;          // per coordinate; default [-1, 1]
  std::map<std::pair<int, int>, ExprPtr> components;  // keys with i <= j; absent = 0

  int coord_index(const std::string& name) const;  // -1 when absent
};

// Text format round trip.
MetricSpec parse_metric(const std::string& text);
MetricSpec parse_metric_file(const std::string& path);
std::string emit_metric(const MetricSpec& spec);

// Structural comparison (used by round-trip checks and the catalog tests).
bool expr_equal(const ExprPtr& x, const ExprPtr& y);
bool spec_equal(const MetricSpec& x, const MetricSpec& y);

// Expression printer with minimal parentheses; parse(print(e)) == e.
std::string print_expr(const ExprPtr& e);

// Rewrite coordinate references: node Coord(i) becomes Coord(index_map[i])
// with the display name taken from new_names.
ExprPtr remap_coords(const ExprPtr& e, const std::vector<int>& index_map,
                     const std::vector<std::string>& new_names);
// Rename parameter references according to the given old->new map.
ExprPtr remap_params(const ExprPtr& e, const std::map<std::string, std::string>& renames);
// Replace every reference to coordinate `index` by a copy of `replacement`.
ExprPtr substitute_coord(const ExprPtr& e, int index, const ExprPtr& replacement);

// Evaluate one expression to a jet seeded from the point's coordinates.
Jet eval_expression(const ExprPtr& e, const MetricSpec& spec, const Point& p, int order);

struct MetricEvaluation {
  TensorJet g;  // (down, down), order K
  double det = 0.0;
  double scale = 0.0;  // max |g_ij| value
  int negative_eigenvalues = 0;
  bool lorentzian = false;
};

// Threshold below which a metric determinant counts as degenerate,
// relative to scale^dim.
inline constexpr double kMetricDetFloor = 1e-12;

MetricEvaluation evaluate_metric(const MetricSpec& spec, const Point& p, int order);

}  // namespace curv
