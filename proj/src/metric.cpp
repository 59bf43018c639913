#include "curv/metric.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "expr_internal.hpp"
#include "format.hpp"

namespace curv {

int MetricSpec::coord_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(coords.size()); ++i)
    if (coords[i] == name) return i;
  return -1;
}

namespace {

// Cursor over one physical line; columns are 1-based for error reports.
struct LineScanner {
  const std::string& s;
  int line;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  int col() const { return static_cast<int>(pos) + 1; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col());
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '=' &&
           s[pos] != '"')
      ++pos;
    if (pos == start) fail("expected a token");
    return s.substr(start, pos - start);
  }

  void expect_eq() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '=') fail("expected '='");
    ++pos;
  }

  double real(const char* what) {
    skip_ws();
    double v = 0.0;
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) fail(std::string("expected ") + what);
    pos += res.ptr - begin;
    return v;
  }

  int integer(const char* what) {
    skip_ws();
    int v = 0;
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) fail(std::string("expected ") + what);
    pos += res.ptr - begin;
    return v;
  }

  // Double-quoted expression text; returns the text and its starting column.
  std::pair<std::string, int> quoted() {
    skip_ws();
    if (pos >= s.size() || s[pos] != '"') fail("expected '\"'");
    const std::size_t open = pos++;
    const std::size_t close = s.find('"', pos);
    if (close == std::string::npos)
      throw ParseError("unterminated string", line, static_cast<int>(open) + 1);
    std::string text = s.substr(pos, close - pos);
    const int start_col = static_cast<int>(pos) + 1;
    pos = close + 1;
    return {std::move(text), start_col};
  }

  std::string rest() {
    skip_ws();
    std::string r = s.substr(pos);
    while (!r.empty() && (r.back() == ' ' || r.back() == '\t')) r.pop_back();
    pos = s.size();
    return r;
  }

  void expect_end(const char* context) {
    if (!done()) fail(std::string("unexpected trailing input after ") + context);
  }
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

MetricSpec parse_metric(const std::string& text) {
  MetricSpec spec;
  enum Stage { Version, Name, Dim, Coords, Body } stage = Version;
  std::set<int> explicit_domain;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string content = strip_comment(raw);
    LineScanner sc{content, lineno};
    if (sc.done()) continue;
    const int key_col = sc.col();
    const std::string key = sc.word();

    switch (stage) {
      case Version: {
        if (key != "version") throw ParseError("expected 'version' directive", lineno, key_col);
        sc.expect_eq();
        const int v = sc.integer("an integer version");
        if (v != 1) sc.fail("unsupported version (expected 1)");
        sc.expect_end("version");
        stage = Name;
        continue;
      }
      case Name: {
        if (key != "name") throw ParseError("expected 'name' directive", lineno, key_col);
        sc.expect_eq();
        spec.name = sc.rest();
        if (spec.name.empty()) sc.fail("empty metric name");
        stage = Dim;
        continue;
      }
      case Dim: {
        if (key != "dim") throw ParseError("expected 'dim' directive", lineno, key_col);
        sc.expect_eq();
        spec.dim = sc.integer("an integer dimension");
        if (spec.dim < 2 || spec.dim > kMaxJetDim) sc.fail("dim outside [2, 8]");
        sc.expect_end("dim");
        stage = Coords;
        continue;
      }
      case Coords: {
        if (key != "coords") throw ParseError("expected 'coords' directive", lineno, key_col);
        sc.expect_eq();
        while (!sc.done()) {
          const int c = sc.col();
          const std::string id = sc.word();
          if (!valid_identifier(id))
            throw ParseError("invalid coordinate name '" + id + "'", lineno, c);
          if (spec.coord_index(id) >= 0)
            throw ParseError("duplicate coordinate '" + id + "'", lineno, c);
          spec.coords.push_back(id);
        }
        if (static_cast<int>(spec.coords.size()) != spec.dim)
          throw ParseError("coords count != dim", lineno, key_col);
        spec.domain.assign(spec.dim, {-1.0, 1.0});
        stage = Body;
        continue;
      }
      case Body:
        break;
    }

    if (key == "param") {
      const int c = sc.col();
      const std::string id = sc.word();
      if (!valid_identifier(id)) throw ParseError("invalid parameter name '" + id + "'", lineno, c);
      if (spec.coord_index(id) >= 0)
        throw ParseError("parameter '" + id + "' shadows a coordinate", lineno, c);
      if (spec.params.count(id))
        throw ParseError("duplicate parameter '" + id + "'", lineno, c);
      sc.expect_eq();
      spec.params[id] = sc.real("a real value");
      sc.expect_end("param");
    } else if (key == "domain") {
      const int c = sc.col();
      const std::string id = sc.word();
      const int ci = spec.coord_index(id);
      if (ci < 0) throw ParseError("unknown coordinate '" + id + "' in domain", lineno, c);
      if (!explicit_domain.insert(ci).second)
        throw ParseError("duplicate domain for '" + id + "'", lineno, c);
      sc.expect_eq();
      const double lo = sc.real("a real lower bound");
      const double hi = sc.real("a real upper bound");
      if (!(lo <= hi)) sc.fail("domain lower bound exceeds upper bound");
      spec.domain[ci] = {lo, hi};
      sc.expect_end("domain");
    } else if (key == "g") {
      const int ci = sc.col();
      int i = sc.integer("a row index");
      const int cj = sc.col();
      int j = sc.integer("a column index");
      if (i < 0 || i >= spec.dim) throw ParseError("row index outside [0, dim)", lineno, ci);
      if (j < 0 || j >= spec.dim) throw ParseError("column index outside [0, dim)", lineno, cj);
      if (i > j) std::swap(i, j);
      if (spec.components.count({i, j}))
        throw ParseError("duplicate symmetric entry g " + std::to_string(i) + " " +
                             std::to_string(j),
                         lineno, ci);
      sc.expect_eq();
      auto [expr_text, col0] = sc.quoted();
      sc.expect_end("component");
      spec.components[{i, j}] = detail::parse_expression(expr_text, spec, lineno, col0 - 1);
    } else {
      throw ParseError("unknown directive '" + key + "'", lineno, key_col);
    }
  }

  switch (stage) {
    case Version: throw ParseError("missing 'version' directive", lineno + 1, 1);
    case Name: throw ParseError("missing 'name' directive", lineno + 1, 1);
    case Dim: throw ParseError("missing 'dim' directive", lineno + 1, 1);
    case Coords: throw ParseError("missing 'coords' directive", lineno + 1, 1);
    case Body: break;
  }
  return spec;
}

MetricSpec parse_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open metric file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric(buf.str());
}

std::string emit_metric(const MetricSpec& spec) {
  std::string out;
  out += "version = 1\n";
  out += "name = " + spec.name + "\n";
  out += "dim = " + std::to_string(spec.dim) + "\n";
  out += "coords =";
  for (const auto& c : spec.coords) out += " " + c;
  out += "\n";
  for (const auto& [name, value] : spec.params)
    out += "param " + name + " = " + detail::format_double(value) + "\n";
  for (int i = 0; i < spec.dim; ++i)
    out += "domain " + spec.coords[i] + " = " + detail::format_double(spec.domain[i][0]) +
           " " + detail::format_double(spec.domain[i][1]) + "\n";
  for (const auto& [key, expr] : spec.components)
    out += "g " + std::to_string(key.first) + " " + std::to_string(key.second) + " = \"" +
           print_expr(expr) + "\"\n";
  return out;
}

bool spec_equal(const MetricSpec& x, const MetricSpec& y) {
  if (x.name != y.name || x.dim != y.dim || x.coords != y.coords) return false;
  if (x.params != y.params || x.domain != y.domain) return false;
  if (x.components.size() != y.components.size()) return false;
  for (const auto& [key, expr] : x.components) {
    auto it = y.components.find(key);
    if (it == y.components.end() || !expr_equal(expr, it->second)) return false;
  }
  return true;
}

MetricEvaluation evaluate_metric(const MetricSpec& spec, const Point& p, int order) {
  if (static_cast<int>(p.size()) != spec.dim) throw ShapeError("point length != spec dim");
  const int n = spec.dim;
  MetricEvaluation ev;
  ev.g = TensorJet(n, {IndexPos::Down, IndexPos::Down}, order);
  for (const auto& [key, expr] : spec.components) {
    Jet j;
    try {
      j = eval_expression(expr, spec, p, order);
    } catch (const DomainError& e) {
      throw DomainError("g " + std::to_string(key.first) + " " + std::to_string(key.second) +
                        ": " + e.what());
    }
    ev.g(key.first, key.second) = j;
    if (key.first != key.second) ev.g(key.second, key.first) = j;
  }

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = ev.g(i, j).value();
  ev.scale = m.cwiseAbs().maxCoeff();
  ev.det = m.determinant();
  const double floor = kMetricDetFloor * std::pow(ev.scale, n);
  if (!(std::abs(ev.det) >= floor)) {
    std::string msg = "degenerate metric at point (";
    for (int i = 0; i < n; ++i) msg += (i ? ", " : "") + detail::format_double(p[i]);
    msg += ")";
    throw DegenerateMetricError(msg);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  ev.negative_eigenvalues =
      static_cast<int>((eig.eigenvalues().array() < 0.0).count());
  ev.lorentzian = (ev.negative_eigenvalues == 1);
  return ev;
}

}  // namespace curv
