#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "lieco/signal.hpp"

namespace lieco {

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Continuous solution from an adaptive Dormand-Prince (5)4 integration:
/// stores the accepted steps with their dense-output polynomials.
class DenseOdeSolution {
public:
  Eigen::VectorXd eval(double t) const;
  Trajectory sample(const TimeGrid& grid) const;

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  int dim() const { return dim_; }

private:
  struct Step {
    double t, h;
    Eigen::MatrixXd rcont;  ///< dim x 5
  };
  std::vector<Step> steps_;
  double t0_ = 0.0, t1_ = 0.0;
  int dim_ = 0;
  Eigen::VectorXd final_state_;

  friend DenseOdeSolution solve_ode_dense(const OdeRhs&, const Eigen::VectorXd&, double, double,
                                          double, const std::vector<double>&);
};

/// Integrate x' = rhs(t, x) from t0 to t1 with local tolerance tol.
/// Integration restarts at each declared breakpoint so no step straddles a
/// control discontinuity. Throws NumericError on step-size underflow,
/// reporting the failure time.
DenseOdeSolution solve_ode_dense(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0, double t1,
                                 double tol = 1e-10, const std::vector<double>& breakpoints = {});

/// Convenience wrapper: integrate across the grid span and sample the dense
/// solution at the grid nodes.
Trajectory solve_ode(const OdeRhs& rhs, const Eigen::VectorXd& x0, const TimeGrid& grid,
                     double tol = 1e-10, const std::vector<double>& breakpoints = {});

}  // namespace lieco
