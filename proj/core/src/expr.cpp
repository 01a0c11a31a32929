#include "lieco/expr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lieco/errors.hpp"

namespace lieco {

namespace {

constexpr double kPoleTol = 1e-12;

bool is_constant(const Expr& e, double v) {
  return e.kind() == ExprKind::Constant && e.constant_value() == v;
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == ExprKind::Variable) out.insert(e.variable_name());
  for (int i = 0; i < e.child_count(); ++i) collect_variables(e.child(i), out);
}

}  // namespace

Expr Expr::make(Node&& node) { return Expr(std::make_shared<const Node>(std::move(node))); }

Expr Expr::constant(double value) {
  Node n;
  n.kind = ExprKind::Constant;
  n.value = value;
  return make(std::move(n));
}

Expr Expr::variable(std::string name) {
  Node n;
  n.kind = ExprKind::Variable;
  n.name = std::move(name);
  return make(std::move(n));
}

double Expr::constant_value() const {
  if (kind() != ExprKind::Constant) throw std::logic_error("Expr: not a constant");
  return node_->value;
}

const std::string& Expr::variable_name() const {
  if (kind() != ExprKind::Variable) throw std::logic_error("Expr: not a variable");
  return node_->name;
}

int Expr::exponent() const {
  if (kind() != ExprKind::Pow) throw std::logic_error("Expr: not a power");
  return node_->exponent;
}

const Expr& Expr::child(int i) const { return node_->children.at(i); }

bool Expr::is_zero() const { return is_constant(*this, 0.0); }
bool Expr::is_one() const { return is_constant(*this, 1.0); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return Expr::constant(a.constant_value() + b.constant_value());
  Expr::Node n;
  n.kind = ExprKind::Add;
  n.children = {a, b};
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a) {
  if (a.kind() == ExprKind::Constant) return Expr::constant(-a.constant_value());
  if (a.kind() == ExprKind::Neg) return a.child(0);
  Expr::Node n;
  n.kind = ExprKind::Neg;
  n.children = {a};
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return Expr::constant(a.constant_value() * b.constant_value());
  if (is_constant(a, -1.0)) return -b;
  if (is_constant(b, -1.0)) return -a;
  Expr::Node n;
  n.kind = ExprKind::Mul;
  n.children = {a, b};
  return Expr::make(std::move(n));
}

Expr operator/(const Expr& a, const Expr& b) { return a * Expr::pow(b, -1); }

Expr Expr::pow(const Expr& base, int exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base.kind() == ExprKind::Constant) {
    const double v = base.constant_value();
    if (v != 0.0 || exponent > 0) return constant(std::pow(v, exponent));
  }
  Node n;
  n.kind = ExprKind::Pow;
  n.exponent = exponent;
  n.children = {base};
  return make(std::move(n));
}

Expr Expr::sin(const Expr& x) {
  if (x.kind() == ExprKind::Constant) return constant(std::sin(x.constant_value()));
  Node n;
  n.kind = ExprKind::Sin;
  n.children = {x};
  return make(std::move(n));
}

Expr Expr::cos(const Expr& x) {
  if (x.kind() == ExprKind::Constant) return constant(std::cos(x.constant_value()));
  Node n;
  n.kind = ExprKind::Cos;
  n.children = {x};
  return make(std::move(n));
}

Expr Expr::tan(const Expr& x) {
  if (x.kind() == ExprKind::Constant) return constant(std::tan(x.constant_value()));
  Node n;
  n.kind = ExprKind::Tan;
  n.children = {x};
  return make(std::move(n));
}

Expr Expr::sec(const Expr& x) {
  if (x.kind() == ExprKind::Constant) return constant(1.0 / std::cos(x.constant_value()));
  Node n;
  n.kind = ExprKind::Sec;
  n.children = {x};
  return make(std::move(n));
}

Expr Expr::arctan(const Expr& x) {
  if (x.kind() == ExprKind::Constant) return constant(std::atan(x.constant_value()));
  Node n;
  n.kind = ExprKind::Arctan;
  n.children = {x};
  return make(std::move(n));
}

Expr Expr::sqrt(const Expr& x) {
  if (x.kind() == ExprKind::Constant && x.constant_value() >= 0.0)
    return constant(std::sqrt(x.constant_value()));
  Node n;
  n.kind = ExprKind::Sqrt;
  n.children = {x};
  return make(std::move(n));
}

double Expr::eval(std::span<const std::string> names, std::span<const double> values) const {
  switch (kind()) {
    case ExprKind::Constant:
      return node_->value;
    case ExprKind::Variable: {
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == node_->name) return values[i];
      throw std::invalid_argument("Expr::eval: unbound variable '" + node_->name + "'");
    }
    case ExprKind::Add:
      return child(0).eval(names, values) + child(1).eval(names, values);
    case ExprKind::Mul:
      return child(0).eval(names, values) * child(1).eval(names, values);
    case ExprKind::Neg:
      return -child(0).eval(names, values);
    case ExprKind::Pow: {
      const double base = child(0).eval(names, values);
      if (node_->exponent < 0 && std::abs(base) < kPoleTol)
        throw DomainError("Expr::eval: negative power of zero");
      return std::pow(base, node_->exponent);
    }
    case ExprKind::Sin:
      return std::sin(child(0).eval(names, values));
    case ExprKind::Cos:
      return std::cos(child(0).eval(names, values));
    case ExprKind::Tan: {
      const double x = child(0).eval(names, values);
      if (std::abs(std::cos(x)) < kPoleTol) throw DomainError("Expr::eval: tan at a pole");
      return std::tan(x);
    }
    case ExprKind::Sec: {
      const double x = child(0).eval(names, values);
      const double c = std::cos(x);
      if (std::abs(c) < kPoleTol) throw DomainError("Expr::eval: sec at a pole");
      return 1.0 / c;
    }
    case ExprKind::Arctan:
      return std::atan(child(0).eval(names, values));
    case ExprKind::Sqrt: {
      const double x = child(0).eval(names, values);
      if (x < 0.0) throw DomainError("Expr::eval: sqrt of a negative value");
      return std::sqrt(x);
    }
  }
  throw std::logic_error("Expr::eval: unreachable");
}

Expr Expr::diff(const std::string& var) const {
  switch (kind()) {
    case ExprKind::Constant:
      return constant(0.0);
    case ExprKind::Variable:
      return constant(node_->name == var ? 1.0 : 0.0);
    case ExprKind::Add:
      return child(0).diff(var) + child(1).diff(var);
    case ExprKind::Mul:
      return child(0).diff(var) * child(1) + child(0) * child(1).diff(var);
    case ExprKind::Neg:
      return -child(0).diff(var);
    case ExprKind::Pow:
      return constant(node_->exponent) * pow(child(0), node_->exponent - 1) * child(0).diff(var);
    case ExprKind::Sin:
      return cos(child(0)) * child(0).diff(var);
    case ExprKind::Cos:
      return -(sin(child(0)) * child(0).diff(var));
    case ExprKind::Tan:
      return pow(sec(child(0)), 2) * child(0).diff(var);
    case ExprKind::Sec:
      return sec(child(0)) * tan(child(0)) * child(0).diff(var);
    case ExprKind::Arctan:
      return child(0).diff(var) / (constant(1.0) + pow(child(0), 2));
    case ExprKind::Sqrt:
      return child(0).diff(var) / (constant(2.0) * sqrt(child(0)));
  }
  throw std::logic_error("Expr::diff: unreachable");
}

std::vector<std::string> Expr::free_variables() const {
  std::set<std::string> s;
  collect_variables(*this, s);
  return {s.begin(), s.end()};
}

namespace {

// Print precedence levels: additive 1, multiplicative 2, unary minus 2,
// power 3, atoms 4.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
      return 1;
    case ExprKind::Mul:
      return 2;
    case ExprKind::Neg:
      return 2;
    case ExprKind::Pow:
      return 3;
    case ExprKind::Constant:
      return e.constant_value() < 0.0 ? 2 : 4;
    default:
      return 4;
  }
}

std::string format_number(double v) {
  if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(v);
    return os.str();
  }
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, std::string& out, int parent_prec) {
  if (precedence(e) < parent_prec) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Constant:
      out += format_number(e.constant_value());
      return;
    case ExprKind::Variable:
      out += e.variable_name();
      return;
    case ExprKind::Add: {
      print_wrapped(e.child(0), out, 1);
      const Expr& rhs = e.child(1);
      if (rhs.kind() == ExprKind::Neg) {
        out += '-';
        print_wrapped(rhs.child(0), out, 2);
      } else if (rhs.kind() == ExprKind::Constant && rhs.constant_value() < 0.0) {
        out += '-';
        out += format_number(-rhs.constant_value());
      } else {
        out += '+';
        print_wrapped(rhs, out, 1);
      }
      return;
    }
    case ExprKind::Mul:
      print_wrapped(e.child(0), out, 2);
      out += '*';
      // right operand needs parens at equal precedence when it is a Neg
      if (e.child(1).kind() == ExprKind::Neg) {
        out += '(';
        print(e.child(1), out);
        out += ')';
      } else {
        print_wrapped(e.child(1), out, 2);
      }
      return;
    case ExprKind::Neg:
      out += '-';
      print_wrapped(e.child(0), out, 3);
      return;
    case ExprKind::Pow:
      print_wrapped(e.child(0), out, 4);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Tan:
    case ExprKind::Sec:
    case ExprKind::Arctan:
    case ExprKind::Sqrt: {
      static const char* names[] = {"sin", "cos", "tan", "sec", "arctan", "sqrt"};
      out += names[static_cast<int>(e.kind()) - static_cast<int>(ExprKind::Sin)];
      out += '(';
      print(e.child(0), out);
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

namespace {

using Poly = PolynomialForm;

Poly poly_scale(const Poly& p, double s) {
  Poly out;
  for (const auto& [m, c] : p) out[m] = c * s;
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) out[m] += c;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b, std::size_t nvars) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      std::vector<int> m(nvars);
      for (std::size_t i = 0; i < nvars; ++i) m[i] = ma[i] + mb[i];
      out[m] += ca * cb;
    }
  }
  return out;
}

}  // namespace

std::optional<PolynomialForm> expand_polynomial(const Expr& e, const std::vector<std::string>& vars) {
  const std::size_t n = vars.size();
  switch (e.kind()) {
    case ExprKind::Constant: {
      Poly p;
      if (e.constant_value() != 0.0) p[std::vector<int>(n, 0)] = e.constant_value();
      return p;
    }
    case ExprKind::Variable: {
      auto it = std::find(vars.begin(), vars.end(), e.variable_name());
      if (it == vars.end()) return std::nullopt;
      std::vector<int> m(n, 0);
      m[static_cast<std::size_t>(it - vars.begin())] = 1;
      Poly p;
      p[m] = 1.0;
      return p;
    }
    case ExprKind::Add: {
      auto a = expand_polynomial(e.child(0), vars);
      auto b = expand_polynomial(e.child(1), vars);
      if (!a || !b) return std::nullopt;
      return poly_add(*a, *b);
    }
    case ExprKind::Mul: {
      auto a = expand_polynomial(e.child(0), vars);
      auto b = expand_polynomial(e.child(1), vars);
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b, n);
    }
    case ExprKind::Neg: {
      auto a = expand_polynomial(e.child(0), vars);
      if (!a) return std::nullopt;
      return poly_scale(*a, -1.0);
    }
    case ExprKind::Pow: {
      if (e.exponent() < 0) return std::nullopt;
      auto a = expand_polynomial(e.child(0), vars);
      if (!a) return std::nullopt;
      Poly acc;
      acc[std::vector<int>(n, 0)] = 1.0;
      for (int k = 0; k < e.exponent(); ++k) acc = poly_mul(acc, *a, n);
      return acc;
    }
    default:
      return std::nullopt;
  }
}

std::string polynomial_to_string(const PolynomialForm& poly, const std::vector<std::string>& vars) {
  // graded lexicographic: total degree first, then exponent vector
  std::vector<std::pair<std::vector<int>, double>> terms;
  for (const auto& [m, c] : poly)
    if (std::abs(c) > 1e-12) terms.emplace_back(m, c);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int e : a.first) da += e;
    for (int e : b.first) db += e;
    if (da != db) return da < db;
    return a.first < b.first;
  });
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    const double mag = std::abs(c);
    if (first) {
      if (c < 0.0) out += '-';
    } else {
      out += c < 0.0 ? '-' : '+';
    }
    first = false;
    std::string monom;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (m[i] == 0) continue;
      if (!monom.empty()) monom += '*';
      monom += vars[i];
      if (m[i] > 1) monom += '^' + std::to_string(m[i]);
    }
    if (monom.empty()) {
      out += format_number(mag);
    } else {
      if (mag != 1.0) {
        out += format_number(mag);
        out += '*';
      }
      out += monom;
    }
  }
  return out;
}

}  // namespace lieco
