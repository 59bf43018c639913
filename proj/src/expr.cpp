#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "curv/metric.hpp"
#include "expr_internal.hpp"
#include "format.hpp"

namespace curv {

namespace ast {

namespace {
std::shared_ptr<Expr> node(ExprKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}
}  // namespace

ExprPtr number(double v) {
  if (std::signbit(v)) return neg(number(-v));
  auto e = node(ExprKind::Number);
  e->number = v;
  return e;
}

ExprPtr coord(int index, std::string name) {
  auto e = node(ExprKind::Coord);
  e->coord = index;
  e->name = std::move(name);
  return e;
}

ExprPtr param(std::string name) {
  auto e = node(ExprKind::Param);
  e->name = std::move(name);
  return e;
}

ExprPtr neg(ExprPtr x) {
  auto e = node(ExprKind::Neg);
  e->a = std::move(x);
  return e;
}

namespace {
ExprPtr binary(ExprKind k, ExprPtr l, ExprPtr r) {
  auto e = node(k);
  e->a = std::move(l);
  e->b = std::move(r);
  return e;
}
}  // namespace

ExprPtr add(ExprPtr l, ExprPtr r) { return binary(ExprKind::Add, std::move(l), std::move(r)); }
ExprPtr sub(ExprPtr l, ExprPtr r) { return binary(ExprKind::Sub, std::move(l), std::move(r)); }
ExprPtr mul(ExprPtr l, ExprPtr r) { return binary(ExprKind::Mul, std::move(l), std::move(r)); }
ExprPtr div(ExprPtr l, ExprPtr r) { return binary(ExprKind::Div, std::move(l), std::move(r)); }

ExprPtr pow(ExprPtr x, int e) {
  auto n = node(ExprKind::Pow);
  n->a = std::move(x);
  n->exponent = e;
  return n;
}

ExprPtr call(UnivariateFn f, ExprPtr x) {
  static const char* names[] = {"sin", "cos", "tan",  "exp", "log",
                                "sqrt", "sinh", "cosh", "tanh"};
  auto e = node(ExprKind::Call);
  e->func = f;
  e->name = names[static_cast<int>(f)];
  e->a = std::move(x);
  return e;
}

}  // namespace ast

namespace {

bool function_name(const std::string& s, UnivariateFn& out) {
  static const std::pair<const char*, UnivariateFn> table[] = {
      {"sin", UnivariateFn::Sin},   {"cos", UnivariateFn::Cos},
      {"tan", UnivariateFn::Tan},   {"exp", UnivariateFn::Exp},
      {"log", UnivariateFn::Log},   {"sqrt", UnivariateFn::Sqrt},
      {"sinh", UnivariateFn::Sinh}, {"cosh", UnivariateFn::Cosh},
      {"tanh", UnivariateFn::Tanh}};
  for (const auto& [name, fn] : table) {
    if (s == name) {
      out = fn;
      return true;
    }
  }
  return false;
}

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  double number = 0.0;
  bool integral = false;  // Number lexed without '.', 'e', 'E'
  std::string text;
  int col = 0;  // 1-based within the expression text
};

class ExprParser {
 public:
  ExprParser(const std::string& text, const MetricSpec& spec, int line, int col_offset)
      : text_(text), spec_(spec), line_(line), col_offset_(col_offset) {
    lex();
  }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    if (cur().kind != Token::End) fail("unexpected trailing input", cur());
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, line_, col_offset_ + t.col);
  }

  void lex() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.col = static_cast<int>(i) + 1;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        bool integral = true;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        if (j < text_.size() && text_[j] == '.') {
          integral = false;
          ++j;
          while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        }
        if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
          if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
            integral = false;
            j = k;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
          }
        }
        t.kind = Token::Number;
        t.text = text_.substr(i, j - i);
        t.integral = integral;
        const auto res =
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (res.ec != std::errc()) fail("malformed number", t);
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) ||
                                    text_[j] == '_'))
          ++j;
        t.kind = Token::Ident;
        t.text = text_.substr(i, j - i);
        i = j;
      } else {
        switch (c) {
          case '+': t.kind = Token::Plus; break;
          case '-': t.kind = Token::Minus; break;
          case '*': t.kind = Token::Star; break;
          case '/': t.kind = Token::Slash; break;
          case '^': t.kind = Token::Caret; break;
          case '(': t.kind = Token::LParen; break;
          case ')': t.kind = Token::RParen; break;
          default:
            t.text = std::string(1, c);
            fail("unexpected character '" + t.text + "'", t);
        }
        ++i;
      }
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::End;
    end.col = static_cast<int>(text_.size()) + 1;
    tokens_.push_back(std::move(end));
  }

  const Token& cur() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(Token::Kind k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    for (;;) {
      if (accept(Token::Plus))
        e = ast::add(std::move(e), parse_product());
      else if (accept(Token::Minus))
        e = ast::sub(std::move(e), parse_product());
      else
        return e;
    }
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    for (;;) {
      if (accept(Token::Star))
        e = ast::mul(std::move(e), parse_unary());
      else if (accept(Token::Slash))
        e = ast::div(std::move(e), parse_unary());
      else
        return e;
    }
  }

  ExprPtr parse_unary() {
    if (accept(Token::Minus)) return ast::neg(parse_unary());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr e = parse_atom();
    while (accept(Token::Caret)) {
      bool negated = accept(Token::Minus);
      const Token& t = cur();
      if (t.kind != Token::Number || !t.integral)
        fail("exponent must be an integer literal", t);
      advance();
      const int ex = static_cast<int>(t.number);
      e = ast::pow(std::move(e), negated ? -ex : ex);
    }
    return e;
  }

  ExprPtr parse_atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Token::Number:
        advance();
        return ast::number(t.number);
      case Token::LParen: {
        advance();
        ExprPtr e = parse_sum();
        if (!accept(Token::RParen)) fail("expected ')'", cur());
        return e;
      }
      case Token::Ident: {
        advance();
        UnivariateFn fn;
        if (cur().kind == Token::LParen) {
          if (!function_name(t.text, fn)) fail("unknown function '" + t.text + "'", t);
          advance();
          ExprPtr arg = parse_sum();
          if (!accept(Token::RParen)) fail("expected ')'", cur());
          return ast::call(fn, std::move(arg));
        }
        const int ci = spec_.coord_index(t.text);
        if (ci >= 0) return ast::coord(ci, t.text);
        if (spec_.params.count(t.text)) return ast::param(t.text);
        fail("unknown identifier '" + t.text + "'", t);
      }
      default:
        fail("expected a value", t);
    }
  }

  const std::string& text_;
  const MetricSpec& spec_;
  int line_;
  int col_offset_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Operator tightness tiers used by the printer; parenthesize a child whose
// tier is below the context it is printed in.
int precedence(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

void print_into(const ExprPtr& e, int context, std::string& out) {
  const int prec = precedence(e);
  const bool parens = prec < context;
  if (parens) out += '(';
  switch (e->kind) {
    case ExprKind::Number:
      out += detail::format_double(e->number);
      break;
    case ExprKind::Coord:
    case ExprKind::Param:
      out += e->name;
      break;
    case ExprKind::Neg:
      out += '-';
      print_into(e->a, 3, out);
      break;
    case ExprKind::Add:
      print_into(e->a, 1, out);
      out += " + ";
      print_into(e->b, 2, out);
      break;
    case ExprKind::Sub:
      print_into(e->a, 1, out);
      out += " - ";
      print_into(e->b, 2, out);
      break;
    case ExprKind::Mul:
      print_into(e->a, 2, out);
      out += "*";
      print_into(e->b, 3, out);
      break;
    case ExprKind::Div:
      print_into(e->a, 2, out);
      out += "/";
      print_into(e->b, 3, out);
      break;
    case ExprKind::Pow:
      print_into(e->a, 5, out);
      out += '^';
      out += std::to_string(e->exponent);
      break;
    case ExprKind::Call:
      out += e->name;
      out += '(';
      print_into(e->a, 1, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::string out;
  print_into(e, 1, out);
  return out;
}

bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
  if (!x || !y) return !x && !y;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case ExprKind::Number: return x->number == y->number;
    case ExprKind::Coord: return x->coord == y->coord && x->name == y->name;
    case ExprKind::Param: return x->name == y->name;
    case ExprKind::Neg: return expr_equal(x->a, y->a);
    case ExprKind::Pow: return x->exponent == y->exponent && expr_equal(x->a, y->a);
    case ExprKind::Call: return x->func == y->func && expr_equal(x->a, y->a);
    default: return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
  }
}

namespace {

ExprPtr rebuild(const ExprPtr& e, const ExprPtr& a, const ExprPtr& b) {
  switch (e->kind) {
    case ExprKind::Neg: return ast::neg(a);
    case ExprKind::Add: return ast::add(a, b);
    case ExprKind::Sub: return ast::sub(a, b);
    case ExprKind::Mul: return ast::mul(a, b);
    case ExprKind::Div: return ast::div(a, b);
    case ExprKind::Pow: return ast::pow(a, e->exponent);
    case ExprKind::Call: return ast::call(e->func, a);
    default: return e;
  }
}

template <class Leaf>
ExprPtr transform(const ExprPtr& e, Leaf&& leaf) {
  if (!e) return e;
  switch (e->kind) {
    case ExprKind::Number:
    case ExprKind::Coord:
    case ExprKind::Param:
      return leaf(e);
    default: {
      ExprPtr a = transform(e->a, leaf);
      ExprPtr b = transform(e->b, leaf);
      if (a == e->a && b == e->b) return e;
      return rebuild(e, a, b);
    }
  }
}

}  // namespace

ExprPtr remap_coords(const ExprPtr& e, const std::vector<int>& index_map,
                     const std::vector<std::string>& new_names) {
  return transform(e, [&](const ExprPtr& leaf) -> ExprPtr {
    if (leaf->kind != ExprKind::Coord) return leaf;
    const int ni = index_map.at(leaf->coord);
    return ast::coord(ni, new_names.at(ni));
  });
}

ExprPtr remap_params(const ExprPtr& e, const std::map<std::string, std::string>& renames) {
  return transform(e, [&](const ExprPtr& leaf) -> ExprPtr {
    if (leaf->kind != ExprKind::Param) return leaf;
    auto it = renames.find(leaf->name);
    if (it == renames.end()) return leaf;
    return ast::param(it->second);
  });
}

ExprPtr substitute_coord(const ExprPtr& e, int index, const ExprPtr& replacement) {
  return transform(e, [&](const ExprPtr& leaf) -> ExprPtr {
    if (leaf->kind == ExprKind::Coord && leaf->coord == index) return replacement;
    return leaf;
  });
}

Jet eval_expression(const ExprPtr& e, const MetricSpec& spec, const Point& p, int order) {
  if (static_cast<int>(p.size()) != spec.dim)
    throw ShapeError("point length != spec dim");
  switch (e->kind) {
    case ExprKind::Number:
      return Jet::constant(e->number, spec.dim, order);
    case ExprKind::Coord:
      return Jet::variable(e->coord, p[e->coord], spec.dim, order);
    case ExprKind::Param:
      return Jet::constant(spec.params.at(e->name), spec.dim, order);
    case ExprKind::Neg:
      return -eval_expression(e->a, spec, p, order);
    case ExprKind::Add:
      return eval_expression(e->a, spec, p, order) + eval_expression(e->b, spec, p, order);
    case ExprKind::Sub:
      return eval_expression(e->a, spec, p, order) - eval_expression(e->b, spec, p, order);
    case ExprKind::Mul:
      return eval_expression(e->a, spec, p, order) * eval_expression(e->b, spec, p, order);
    case ExprKind::Div:
      return eval_expression(e->a, spec, p, order) / eval_expression(e->b, spec, p, order);
    case ExprKind::Pow:
      return jet_pow_int(eval_expression(e->a, spec, p, order), e->exponent);
    case ExprKind::Call:
      return jet_apply_univariate(e->func, eval_expression(e->a, spec, p, order));
  }
  throw Error("unreachable expression kind");
}

namespace detail {

ExprPtr parse_expression(const std::string& text, const MetricSpec& spec, int line,
                         int col_offset) {
  return ExprParser(text, spec, line, col_offset).parse();
}

}  // namespace detail

}  // namespace curv
