#include "lieco/models.hpp"

#include <cmath>
#include <sstream>

#include "lieco/errors.hpp"

namespace lieco {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void require_model_chart(const GroupElement& g, const GroupModel& model, const char* op) {
  if (g.model != &model) throw std::invalid_argument(std::string(op) + ": element of the wrong group");
  if (g.chart != ChartKind::SecondKind)
    throw std::invalid_argument(std::string(op) + ": second-kind chart required");
}

ControlSignal require_two_channels(const ControlSignal& controls, const char* op) {
  if (controls.channels() != 2)
    throw std::invalid_argument(std::string(op) + ": exactly two control channels expected");
  return controls;
}

}  // namespace

double wrap_angle(double theta) {
  double w = std::fmod(theta, 2.0 * M_PI);
  if (w > M_PI) w -= 2.0 * M_PI;
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

bool CarState::in_domain() const {
  return std::abs(theta) < kHalfPi && std::abs(phi) < kHalfPi;
}

void CarState::require_in_domain() const {
  if (!in_domain()) {
    std::ostringstream os;
    os << "car state outside the chart domain: theta = " << theta << ", phi = " << phi
       << " (both must lie in (-pi/2, pi/2))";
    throw DomainError(os.str());
  }
}

// ---- planar rigid body -----------------------------------------------------

PlanarRigidBodyState rb_action(const GroupElement& g, const PlanarRigidBodyState& s) {
  require_model_chart(g, GroupModel::g4(), "rb_action");
  const double a = g.coords(0), b = g.coords(1), c = g.coords(2), d = g.coords(3);
  PlanarRigidBodyState out;
  out.x1 = s.x1 - a;
  out.x2 = s.x2 - b;
  out.theta = s.theta + a * s.x2 * s.x2 - b * s.x1 * s.x1 - 2.0 * (a * b + c) * s.x2 -
              2.0 * c * s.x1 + a * b * b - 2.0 * d;
  return out;
}

OdeRhs rb_oracle_rhs(const ControlSignal& controls) {
  require_two_channels(controls, "rb_oracle_rhs");
  return [controls](double t, const Eigen::VectorXd& s) {
    const Eigen::VectorXd b = controls.eval(t);
    Eigen::Vector3d out;
    out(0) = b(0);
    out(1) = b(1);
    out(2) = s(0) * s(0) * b(1) - s(1) * s(1) * b(0);
    return Eigen::VectorXd(out);
  };
}

Trajectory rb_solution(const ControlSignal& controls, const PlanarRigidBodyState& s0,
                       const TimeGrid& grid, double tol) {
  require_two_channels(controls, "rb_solution");
  const GroupModel& g4 = GroupModel::g4();
  WNSystem system(g4.algebra(), WNSystem::natural_ordering(4), controls.padded_to(4));
  const WNTrajectory wn = solve_wn(system, grid, tol);
  Eigen::MatrixXd states(grid.size(), 3);
  for (int i = 0; i < grid.size(); ++i) {
    const GroupElement g = g4.element(ChartKind::SecondKind, Eigen::VectorXd(-wn.v.row(i).transpose()));
    states.row(i) = rb_action(g, s0).vec().transpose();
  }
  return Trajectory{grid, std::move(states)};
}

std::vector<VectorFieldExpr> rb_input_fields() {
  const std::vector<std::string> vars = {"x1", "x2", "theta"};
  return {parse_field("1; 0; -x2^2", vars), parse_field("0; 1; x1^2", vars)};
}

std::vector<VectorFieldExpr> rb_field_quadruple() {
  auto fields = rb_input_fields();
  fields.push_back(lie_bracket(fields[0], fields[1]));
  fields.push_back(lie_bracket(fields[0], fields[2]));
  return fields;
}

// ---- Brockett integrator ----------------------------------------------------

OdeRhs brockett_oracle_rhs(const ControlSignal& controls) {
  require_two_channels(controls, "brockett_oracle_rhs");
  return [controls](double t, const Eigen::VectorXd& s) {
    const Eigen::VectorXd b = controls.eval(t);
    Eigen::Vector3d out;
    out(0) = b(0);
    out(1) = b(1);
    out(2) = b(1) * s(0) - b(0) * s(1);
    return Eigen::VectorXd(out);
  };
}

Eigen::Vector3d quotient_to_brockett(const Eigen::Vector3d& y) {
  return {-y(0), -y(1), -2.0 * y(2)};
}

Eigen::Vector3d brockett_to_quotient(const Eigen::Vector3d& x) {
  return {-x(0), -x(1), -0.5 * x(2)};
}

Trajectory brockett_solution(const ControlSignal& controls, const Eigen::Vector3d& s0,
                             const TimeGrid& grid, double tol) {
  require_two_channels(controls, "brockett_solution");
  const GroupModel& h3 = GroupModel::h3();
  WNSystem system(h3.algebra(), WNSystem::natural_ordering(3), controls.padded_to(3));
  const WNTrajectory wn = solve_wn(system, grid, tol);
  const GroupElement y0 = h3.element(ChartKind::FirstKind, brockett_to_quotient(s0));
  Eigen::MatrixXd states(grid.size(), 3);
  for (int i = 0; i < grid.size(); ++i) {
    const GroupElement g = h3.element(ChartKind::SecondKind, Eigen::VectorXd(-wn.v.row(i).transpose()));
    const GroupElement y = compose(convert(g, ChartKind::FirstKind), y0);
    states.row(i) = quotient_to_brockett(y.coords).transpose();
  }
  return Trajectory{grid, std::move(states)};
}

// ---- kinematic car ----------------------------------------------------------

OdeRhs car_raw_rhs(const ControlSignal& controls) {
  require_two_channels(controls, "car_raw_rhs");
  return [controls](double t, const Eigen::VectorXd& s) {
    const CarState car = CarState::from(s);
    if (!car.in_domain()) {
      std::ostringstream os;
      os << "car left the chart domain at t = " << t << ": theta = " << car.theta
         << ", phi = " << car.phi;
      throw DomainError(os.str());
    }
    const Eigen::VectorXd c = controls.eval(t);
    Eigen::Vector4d out;
    out(0) = c(0);
    out(1) = c(0) * std::tan(car.theta);
    out(2) = c(0) * std::tan(car.phi) / std::cos(car.theta);
    out(3) = c(1);
    return Eigen::VectorXd(out);
  };
}

Eigen::Vector2d feedback(const CarState& s, const Eigen::Vector2d& b) {
  s.require_in_domain();
  const double sin_phi = std::sin(s.phi);
  const double sec_theta = 1.0 / std::cos(s.theta);
  const double c2 = -3.0 * sin_phi * sin_phi * sec_theta * sec_theta * std::sin(s.theta) * b(0) +
                    std::pow(std::cos(s.theta), 3) * std::pow(std::cos(s.phi), 2) * b(1);
  return {b(0), c2};
}

OdeRhs car_feedback_rhs(const ControlSignal& controls) {
  require_two_channels(controls, "car_feedback_rhs");
  return [controls](double t, const Eigen::VectorXd& s) {
    const CarState car = CarState::from(s);
    if (!car.in_domain()) {
      std::ostringstream os;
      os << "car left the chart domain at t = " << t << ": theta = " << car.theta
         << ", phi = " << car.phi;
      throw DomainError(os.str());
    }
    const Eigen::VectorXd b = controls.eval(t);
    const Eigen::Vector2d c = feedback(car, {b(0), b(1)});
    Eigen::Vector4d out;
    out(0) = c(0);
    out(1) = c(0) * std::tan(car.theta);
    out(2) = c(0) * std::tan(car.phi) / std::cos(car.theta);
    out(3) = c(1);
    return Eigen::VectorXd(out);
  };
}

ChainedState car_to_chained(const CarState& s) {
  s.require_in_domain();
  const double sec_theta = 1.0 / std::cos(s.theta);
  ChainedState out;
  out.x1 = s.x;
  out.x2 = std::pow(sec_theta, 3) * std::tan(s.phi);
  out.x3 = std::tan(s.theta);
  out.x4 = s.y;
  return out;
}

CarState chained_to_car(const ChainedState& s) {
  CarState out;
  out.x = s.x1;
  out.y = s.x4;
  out.theta = std::atan(s.x3);
  out.phi = std::atan(s.x2 / std::pow(1.0 + s.x3 * s.x3, 1.5));
  return out;
}

ChainedState chained_action(const GroupElement& g, const ChainedState& s) {
  require_model_chart(g, GroupModel::g4bar(), "chained_action");
  const double a = g.coords(0), b = g.coords(1), c = g.coords(2), d = g.coords(3);
  ChainedState out;
  out.x1 = s.x1 - a;
  out.x2 = s.x2 - b;
  out.x3 = s.x3 - a * s.x2 + a * b + c;
  out.x4 = s.x4 - a * s.x3 + a * a * s.x2 / 2.0 - a * a * b / 2.0 - a * c - d;
  return out;
}

OdeRhs chained_oracle_rhs(const ControlSignal& controls) {
  require_two_channels(controls, "chained_oracle_rhs");
  return [controls](double t, const Eigen::VectorXd& s) {
    const Eigen::VectorXd b = controls.eval(t);
    Eigen::Vector4d out;
    out(0) = b(0);
    out(1) = b(1);
    out(2) = b(0) * s(1);
    out(3) = b(0) * s(2);
    return Eigen::VectorXd(out);
  };
}

Trajectory chained_solution(const ControlSignal& controls, const ChainedState& s0,
                            const TimeGrid& grid, double tol) {
  require_two_channels(controls, "chained_solution");
  const GroupModel& g4bar = GroupModel::g4bar();
  WNSystem system(g4bar.algebra(), WNSystem::natural_ordering(4), controls.padded_to(4));
  const WNTrajectory wn = solve_wn(system, grid, tol);
  Eigen::MatrixXd states(grid.size(), 4);
  for (int i = 0; i < grid.size(); ++i) {
    const GroupElement g = g4bar.element(ChartKind::SecondKind, Eigen::VectorXd(-wn.v.row(i).transpose()));
    states.row(i) = chained_action(g, s0).vec().transpose();
  }
  return Trajectory{grid, std::move(states)};
}

std::vector<VectorFieldExpr> car_raw_input_fields() {
  const std::vector<std::string> vars = {"x", "y", "theta", "phi"};
  return {parse_field("1; tan(theta); tan(phi)*sec(theta); 0", vars),
          parse_field("0; 0; 0; 1", vars)};
}

std::vector<VectorFieldExpr> car_raw_quadruple() {
  auto fields = car_raw_input_fields();
  fields.push_back(lie_bracket(fields[0], fields[1]));
  fields.push_back(lie_bracket(fields[0], fields[2]));
  return fields;
}

std::vector<VectorFieldExpr> chained_input_fields() {
  const std::vector<std::string> vars = {"x1", "x2", "x3", "x4"};
  return {parse_field("1; 0; x2; x3", vars), parse_field("0; 1; 0; 0", vars)};
}

std::vector<VectorFieldExpr> chained_quadruple() {
  auto fields = chained_input_fields();
  fields.push_back(lie_bracket(fields[0], fields[1]));
  fields.push_back(lie_bracket(fields[0], fields[2]));
  return fields;
}

}  // namespace lieco
