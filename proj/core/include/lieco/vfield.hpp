#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lieco/algebra.hpp"
#include "lieco/expr.hpp"

namespace lieco {

/// Vector field with symbolic components, one expression per coordinate.
class VectorFieldExpr {
public:
  VectorFieldExpr(std::vector<std::string> variables, std::vector<Expr> components);

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Expr>& components() const { return comps_; }
  int dim() const { return static_cast<int>(vars_.size()); }

  Eigen::VectorXd eval(const Eigen::VectorXd& point) const;

  std::string to_string() const;  ///< components joined by ';'

private:
  std::vector<std::string> vars_;
  std::vector<Expr> comps_;
};

/// [X, Y]^i = sum_j (X^j dY^i/dx_j - Y^j dX^i/dx_j), exact differentiation.
VectorFieldExpr lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y);

/// Probe points for numeric identity testing: uniform samples in
/// [-0.8, 0.8]^dim with a fixed irrational per-coordinate offset, resampled
/// until every field in `guards` evaluates cleanly.
std::vector<Eigen::VectorXd> probe_points(const std::vector<std::string>& variables, int count,
                                          std::uint64_t seed,
                                          const std::vector<VectorFieldExpr>& guards = {});

/// True when the two fields agree at every probe point to `tol` (absolute,
/// relative to max(1, magnitude)).
bool fields_match(const VectorFieldExpr& a, const VectorFieldExpr& b,
                  const std::vector<Eigen::VectorXd>& points, double tol);

struct ClosureResult {
  bool closed = false;
  /// Final basis: the generators first, then bracket-generated fields in
  /// discovery order.
  std::vector<VectorFieldExpr> basis;
  int generator_count = 0;
  /// Structure tensor over the final basis, tensor[g](i, j) = c[i][j][g];
  /// empty when not closed.
  std::vector<Eigen::MatrixXd> constants;
  /// Constants re-validated through the LieAlgebra constructor.
  std::optional<LieAlgebra> algebra;
  /// Smallest dependence-test residual among brackets declared independent
  /// and the largest among those declared dependent, both relative to the
  /// decision threshold; lets callers assert well-separated decisions.
  double min_independent_margin = 0.0;
  double max_dependent_margin = 0.0;
};

/// Iteratively bracket the fields and test linear dependence over R by a
/// multi-point numeric probe (tolerance `tol` relative). Stops with
/// closed=false once more than max_new fields beyond the generators would be
/// needed.
ClosureResult closes_algebra(const std::vector<VectorFieldExpr>& fields, int max_new,
                             std::uint64_t seed = 20240901u, int points = 32, double tol = 1e-9);

/// Rank of the field-evaluation matrix at a point, by row reduction with
/// pivot threshold 1e-10 relative to the largest pivot.
int rank_at(const std::vector<VectorFieldExpr>& fields, const Eigen::VectorXd& point);

/// Parse a semicolon-separated component list, one expression per variable.
VectorFieldExpr parse_field(const std::string& text, const std::vector<std::string>& variables);

}  // namespace lieco
