#pragma once

#include <Eigen/Dense>

#include <vector>

#include "lieco/groups.hpp"
#include "lieco/ode.hpp"
#include "lieco/signal.hpp"
#include "lieco/vfield.hpp"
#include "lieco/weinorman.hpp"

namespace lieco {

/// Planar rigid body with two oscillators: state (x1, x2, theta) on R^2 x S1.
/// theta is stored unwrapped; reduce mod 2pi only when presenting results.
struct PlanarRigidBodyState {
  double x1 = 0.0, x2 = 0.0, theta = 0.0;

  Eigen::Vector3d vec() const { return {x1, x2, theta}; }
  static PlanarRigidBodyState from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

/// Front-wheel kinematic car, wheelbase 1: rear-wheel position (x, y), body
/// angle theta and steering angle phi both restricted to (-pi/2, pi/2).
struct CarState {
  double x = 0.0, y = 0.0, theta = 0.0, phi = 0.0;

  Eigen::Vector4d vec() const { return {x, y, theta, phi}; }
  static CarState from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }
  bool in_domain() const;
  void require_in_domain() const;  ///< throws DomainError outside the guards
};

/// Chained-form state (x1, x2, x3, x4) on R^4.
struct ChainedState {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;

  Eigen::Vector4d vec() const { return {x1, x2, x3, x4}; }
  static ChainedState from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }
};

double wrap_angle(double theta);  ///< into (-pi, pi]

// ---- planar rigid body with two oscillators -------------------------------

/// Left action of g4 (second-kind chart) on the configuration space.
PlanarRigidBodyState rb_action(const GroupElement& g, const PlanarRigidBodyState& s);

/// xdot1 = b1, xdot2 = b2, thetadot = x1^2 b2 - x2^2 b1 (two control channels).
OdeRhs rb_oracle_rhs(const ControlSignal& controls);

/// Wei-Norman path: solve on g4 and push the initial state with the action.
Trajectory rb_solution(const ControlSignal& controls, const PlanarRigidBodyState& s0,
                       const TimeGrid& grid, double tol = 1e-10);

/// Input fields X1 = d/dx1 - x2^2 d/dtheta, X2 = d/dx2 + x1^2 d/dtheta.
std::vector<VectorFieldExpr> rb_input_fields();
/// {X1, X2, [X1,X2], [X1,[X1,X2]]}
std::vector<VectorFieldExpr> rb_field_quadruple();

// ---- Brockett integrator ---------------------------------------------------

/// xdot1 = b1, xdot2 = b2, xdot3 = b2 x1 - b1 x2.
OdeRhs brockett_oracle_rhs(const ControlSignal& controls);

/// Wei-Norman path through the Heisenberg group: the system is the
/// right-invariant equation on H(3) in quotient coordinates, related to the
/// classic coordinates by (x1, x2, x3) = (-y1, -y2, -2 y3).
Trajectory brockett_solution(const ControlSignal& controls, const Eigen::Vector3d& s0,
                             const TimeGrid& grid, double tol = 1e-10);

Eigen::Vector3d quotient_to_brockett(const Eigen::Vector3d& y);
Eigen::Vector3d brockett_to_quotient(const Eigen::Vector3d& x);

// ---- front-wheel kinematic car ---------------------------------------------

/// Raw car kinematics driven by (c1, c2); aborts with DomainError carrying
/// state and time when the guards |theta|, |phi| < pi/2 are violated.
OdeRhs car_raw_rhs(const ControlSignal& controls);

/// Feedback transformation (b1, b2) -> (c1, c2) at a state.
Eigen::Vector2d feedback(const CarState& s, const Eigen::Vector2d& b);

/// Raw car kinematics driven through the feedback by chained controls b.
OdeRhs car_feedback_rhs(const ControlSignal& controls);

/// (x, sec^3(theta) tan(phi), tan(theta), y) and its round-trip-consistent
/// inverse phi = arctan(x2 / (1 + x3^2)^(3/2)).
ChainedState car_to_chained(const CarState& s);
CarState chained_to_car(const ChainedState& s);

/// Left action of g4bar (second-kind chart) on R^4.
ChainedState chained_action(const GroupElement& g, const ChainedState& s);

/// xdot1 = b1, xdot2 = b2, xdot3 = b1 x2, xdot4 = b1 x3.
OdeRhs chained_oracle_rhs(const ControlSignal& controls);

/// Wei-Norman path on g4bar.
Trajectory chained_solution(const ControlSignal& controls, const ChainedState& s0,
                            const TimeGrid& grid, double tol = 1e-10);

/// Raw input fields Y1, Y2 over (x, y, theta, phi).
std::vector<VectorFieldExpr> car_raw_input_fields();
/// {Y1, Y2, [Y1,Y2], [Y1,[Y1,Y2]]}
std::vector<VectorFieldExpr> car_raw_quadruple();

/// Chained-form input fields X1, X2 over (x1, x2, x3, x4).
std::vector<VectorFieldExpr> chained_input_fields();
/// {X1, X2, [X1,X2], [X1,[X1,X2]]}
std::vector<VectorFieldExpr> chained_quadruple();

}  // namespace lieco
