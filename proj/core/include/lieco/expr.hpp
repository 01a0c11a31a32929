#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lieco {

enum class ExprKind { Constant, Variable, Add, Mul, Neg, Pow, Sin, Cos, Tan, Sec, Arctan, Sqrt };

/// Immutable expression tree over real-valued variables.
///
/// Node builders perform light simplification only: constant folding and
/// zero/one elimination. Trigonometric identities are out of scope; equality
/// of two expressions is decided by multi-point numeric probes downstream.
class Expr {
public:
  Expr() : Expr(constant(0.0)) {}
  Expr(double value) : Expr(constant(value)) {}  // NOLINT: arithmetic genericity

  static Expr constant(double value);
  static Expr variable(std::string name);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);  ///< a * b^-1
  friend Expr operator-(const Expr& a);

  static Expr pow(const Expr& base, int exponent);
  static Expr sin(const Expr& x);
  static Expr cos(const Expr& x);
  static Expr tan(const Expr& x);
  static Expr sec(const Expr& x);
  static Expr arctan(const Expr& x);
  static Expr sqrt(const Expr& x);

  ExprKind kind() const { return node_->kind; }
  double constant_value() const;
  const std::string& variable_name() const;
  int exponent() const;
  const Expr& child(int i) const;
  int child_count() const { return static_cast<int>(node_->children.size()); }

  /// Evaluate with variables bound positionally: names[i] -> values[i].
  /// Throws DomainError at poles of tan/sec, sqrt of negatives and negative
  /// powers of zero; std::invalid_argument for an unbound variable.
  double eval(std::span<const std::string> names, std::span<const double> values) const;

  /// Exact partial derivative with respect to one variable.
  Expr diff(const std::string& var) const;

  bool is_zero() const;
  bool is_one() const;

  /// Compact parseable text form; to_string(parse(s)) is a fixed point.
  std::string to_string() const;

  /// All variable names referenced by the tree, sorted.
  std::vector<std::string> free_variables() const;

private:
  struct Node {
    ExprKind kind;
    double value = 0.0;        // Constant
    std::string name;          // Variable
    int exponent = 0;          // Pow
    std::vector<Expr> children;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Node&& node);
  std::shared_ptr<const Node> node_;
};

/// Exponent vector (one entry per variable) -> coefficient.
using PolynomialForm = std::map<std::vector<int>, double>;

/// Expand a polynomial expression (constants, variables, +, *, neg,
/// nonnegative integer powers) into its monomial normal form over the given
/// variable order. Returns nullopt when the tree contains any other node.
std::optional<PolynomialForm> expand_polynomial(const Expr& e, const std::vector<std::string>& vars);

/// Render a polynomial normal form as parseable text, graded-lexicographic
/// monomial order. Coefficients within 1e-12 of zero are dropped.
std::string polynomial_to_string(const PolynomialForm& poly, const std::vector<std::string>& vars);

/// Syntax error with the offending position in the input text.
class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position(position) {}
  std::size_t position;
};

/// Parse one expression in the field grammar: operators + - * / ^, function
/// application f(x), identifiers from `variables`, insignificant whitespace.
Expr parse_expr(const std::string& text, const std::vector<std::string>& variables);

}  // namespace lieco
