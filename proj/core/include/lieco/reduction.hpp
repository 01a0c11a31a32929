#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lieco/algebra.hpp"
#include "lieco/expr.hpp"
#include "lieco/groups.hpp"
#include "lieco/ode.hpp"
#include "lieco/signal.hpp"
#include "lieco/vfield.hpp"

namespace lieco {

/// A curve on the homogeneous space, evaluable at arbitrary times. When
/// `derivative` is empty the reduction differentiates `value` by central
/// differences with step 1e-5.
struct BaseCurve {
  std::function<Eigen::VectorXd(double)> value;
  std::function<Eigen::VectorXd(double)> derivative;

  static BaseCurve from_ode_solution(std::shared_ptr<const DenseOdeSolution> sol, OdeRhs rhs);
};

/// Quotient of a shipped group model by the one-parameter center, with the
/// projection (a,b,c,d) -> (a,b,c) in first-kind coordinates, the section
/// (y1,y2,y3) -> (y1,y2,y3,0), and the induced left action.
class HomogeneousSpace {
public:
  static const HomogeneousSpace& g4_center();
  static const HomogeneousSpace& g4bar_center();
  /// by the group name: "g4" or "g4bar"
  static const HomogeneousSpace& by_name(const std::string& name);

  const GroupModel& group() const { return *group_; }
  const std::vector<int>& subalgebra_indices() const { return subalgebra_; }
  int space_dim() const { return group_->dim() - static_cast<int>(subalgebra_.size()); }
  const std::vector<std::string>& space_variables() const { return space_vars_; }

  Eigen::VectorXd project(const GroupElement& g) const;
  GroupElement lift(const Eigen::VectorXd& y) const;
  Eigen::VectorXd action(const GroupElement& g, const Eigen::VectorXd& y) const;

  /// Fundamental vector fields of the action, one per algebra basis element.
  const std::vector<VectorFieldExpr>& fundamental_fields() const { return fields_; }

private:
  HomogeneousSpace(const GroupModel* group, std::vector<int> subalgebra);
  const GroupModel* group_;
  std::vector<int> subalgebra_;
  std::vector<std::string> space_vars_;
  std::vector<VectorFieldExpr> fields_;
};

/// Right-hand side of the projected system ydot = sum_a b_a(t) X_a(y).
OdeRhs project_system(const HomogeneousSpace& space, const ControlSignal& controls);

struct ReducedProblem {
  const HomogeneousSpace* space = nullptr;
  BaseCurve base;
  /// t -> (hdot h^{-1})(t) as an algebra element; supported on the subalgebra.
  std::function<AlgebraElement(double)> subgroup_rhs;
  /// Largest out-of-subalgebra component seen on the validation grid.
  double support_residual = 0.0;
  /// Lifted curve g1 on the validation grid, first-kind coordinates.
  Trajectory lifted;
  std::vector<double> control_breakpoints;
};

/// Factor the group solution through the space: lift the base solution and
/// form the subgroup equation. Throws NumericError when the subalgebra
/// support check fails beyond support_tol (wrong base solution or section).
ReducedProblem reduce(const HomogeneousSpace& space, const ControlSignal& controls,
                      const BaseCurve& base, const TimeGrid& validation_grid,
                      double support_tol = 1e-6);

/// Integrate the subgroup equation h(t0) = e by one quadrature (shipped
/// subgroups are one-parameter). Returns the subgroup coordinate on the grid.
Trajectory solve_subgroup(const ReducedProblem& problem, const TimeGrid& grid, double tol = 1e-12);

/// Pointwise g(t) = g1(t) h(t) in first-kind coordinates; h_traj must be
/// sampled on the problem's validation grid.
Trajectory recombine(const ReducedProblem& problem, const Trajectory& h_traj);

/// Subgroup equation right-hand side at a single probe state and control
/// value; b has one entry per algebra basis direction.
AlgebraElement subgroup_rhs_at(const HomogeneousSpace& space, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& b);

/// The reduced scalar equation ddot = f(y1, y2, y3, b1, b2, ...) as a
/// symbolic expression over space_variables then active control names b<i+1>.
Expr symbolic_reduced_rhs(const HomogeneousSpace& space, const std::vector<int>& active_channels);

}  // namespace lieco
