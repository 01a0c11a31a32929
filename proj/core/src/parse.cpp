#include <cctype>
#include <cstdlib>

#include "lieco/expr.hpp"
#include "lieco/vfield.hpp"

namespace lieco {

namespace {

// Recursive-descent parser for the field grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' signed-integer)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& variables)
      : text_(text), vars_(variables) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

private:
  Expr parse_sum() {
    Expr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = lhs * parse_factor();
      } else if (accept('/')) {
        lhs = lhs / parse_factor();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    skip_ws();
    if (accept('-')) return -parse_factor();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (!accept('^')) return base;
    skip_ws();
    bool parens = accept('(');
    skip_ws();
    int sign = 1;
    if (accept('-'))
      sign = -1;
    else
      accept('+');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected integer exponent", pos_);
    const int mag = std::atoi(text_.substr(start, pos_ - start).c_str());
    if (parens) {
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')' after exponent", pos_);
    }
    return Expr::pow(base, sign * mag);
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string tok = text_.substr(start, pos_ - start);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ParseError("malformed number '" + tok + "'", start);
    return Expr::constant(v);
  }

  Expr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      Expr arg = parse_sum();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')' after function argument", pos_);
      if (name == "sin") return Expr::sin(arg);
      if (name == "cos") return Expr::cos(arg);
      if (name == "tan") return Expr::tan(arg);
      if (name == "sec") return Expr::sec(arg);
      if (name == "arctan" || name == "atan") return Expr::arctan(arg);
      if (name == "sqrt") return Expr::sqrt(arg);
      throw ParseError("unknown function '" + name + "'", start);
    }
    for (const auto& v : vars_)
      if (v == name) return Expr::variable(name);
    if (name == "pi") return Expr::constant(3.14159265358979323846);
    throw ParseError("unknown variable '" + name + "'", start);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const std::vector<std::string>& variables) {
  return Parser(text, variables).parse();
}

VectorFieldExpr parse_field(const std::string& text, const std::vector<std::string>& variables) {
  std::vector<Expr> comps;
  std::size_t start = 0;
  for (;;) {
    const std::size_t semi = text.find(';', start);
    const std::string piece = text.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
    try {
      comps.push_back(parse_expr(piece, variables));
    } catch (const ParseError& err) {
      throw ParseError(std::string(err.what()).substr(0, std::string(err.what()).rfind(" at position")),
                       start + err.position);
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (comps.size() != variables.size())
    throw std::invalid_argument("parse_field: expected " + std::to_string(variables.size()) +
                                " components, got " + std::to_string(comps.size()));
  return VectorFieldExpr(variables, std::move(comps));
}

}  // namespace lieco
