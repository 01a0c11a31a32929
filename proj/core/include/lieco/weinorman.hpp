#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "lieco/algebra.hpp"
#include "lieco/signal.hpp"

namespace lieco {

/// Factorization data for a product-of-exponentials solution ansatz
/// g(t) = prod_k exp(-v_{ordering[k]}(t) a_{ordering[k]}).
///
/// `controls` must carry one channel per basis direction; directions the
/// driving equation never excites are declared as identically zero channels.
struct WNSystem {
  WNSystem(LieAlgebra algebra, std::vector<int> ordering, ControlSignal controls);

  LieAlgebra algebra;
  std::vector<int> ordering;  ///< permutation of 0..dim-1, factorization order
  ControlSignal controls;

  static std::vector<int> natural_ordering(int dim);
};

/// The matrix M(v) of the fundamental equation M(v) vdot = b(t): column
/// `ordering[k]` is (prod_{m<k} exp_ad(a_{ordering[m]}, -v_{ordering[m]})) applied
/// to the basis vector a_{ordering[k]}.
Eigen::MatrixXd wn_matrix(const WNSystem& system, const Eigen::VectorXd& v);

/// vdot = M(v)^{-1} b(t); throws NumericError reporting t and v when M(v) is
/// singular beyond condition 1e12.
Eigen::VectorXd wn_velocity(const WNSystem& system, double t, const Eigen::VectorXd& v);

/// One channel of an iterated-quadrature evaluation order.
struct ChannelPlan {
  int channel = 0;
  std::vector<int> depends_on;  ///< channels whose solved values feed this integrand
};

/// Structural (zero-pattern) analysis of M(v)^{-1} restricted to the active
/// control channels. When the dependency graph is acyclic the system is
/// solvable channel by channel by iterated quadratures.
struct QuadraturePlan {
  bool triangular = false;
  std::vector<ChannelPlan> order;  ///< evaluation order, empty when not triangular

  std::string to_string() const;
};

QuadraturePlan quadrature_plan(const WNSystem& system);

struct WNTrajectory {
  TimeGrid grid;
  Eigen::MatrixXd v;  ///< grid.size() x dim, v(t0) = 0
  bool solvable_by_quadratures = false;
};

enum class WnMethod { Auto, Quadrature, Ode };

/// Solve the fundamental equation with v(t0) = 0 and sample on the grid.
/// Auto takes the iterated-quadrature path whenever the plan is triangular
/// and falls back to the adaptive ODE solver otherwise.
WNTrajectory solve_wn(const WNSystem& system, const TimeGrid& grid, double tol = 1e-10,
                      WnMethod method = WnMethod::Auto);

}  // namespace lieco
