#include "lieco/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chart_laws.hpp"
#include "lieco/errors.hpp"
#include "lieco/quadrature.hpp"

namespace lieco {

BaseCurve BaseCurve::from_ode_solution(std::shared_ptr<const DenseOdeSolution> sol, OdeRhs rhs) {
  BaseCurve curve;
  curve.value = [sol](double t) { return sol->eval(t); };
  curve.derivative = [sol, rhs = std::move(rhs)](double t) { return rhs(t, sol->eval(t)); };
  return curve;
}

namespace {

std::vector<VectorFieldExpr> center_quotient_fields() {
  // X_a(y) = d/ds Phi(exp(-s a_a), y) at s = 0 for the Heisenberg-type action
  // (y1+a, y2+b, y3+c+(a y2 - b y1)/2); identical for both shipped groups.
  const std::vector<std::string> vars = {"y1", "y2", "y3"};
  const Expr y1 = Expr::variable("y1");
  const Expr y2 = Expr::variable("y2");
  const Expr zero = Expr::constant(0.0);
  const Expr minus_one = Expr::constant(-1.0);
  std::vector<VectorFieldExpr> fields;
  fields.emplace_back(vars, std::vector<Expr>{minus_one, zero, -(y2 / Expr::constant(2.0))});
  fields.emplace_back(vars, std::vector<Expr>{zero, minus_one, y1 / Expr::constant(2.0)});
  fields.emplace_back(vars, std::vector<Expr>{zero, zero, minus_one});
  fields.emplace_back(vars, std::vector<Expr>{zero, zero, zero});
  return fields;
}

}  // namespace

HomogeneousSpace::HomogeneousSpace(const GroupModel* group, std::vector<int> subalgebra)
    : group_(group), subalgebra_(std::move(subalgebra)) {
  for (int i = 1; i <= space_dim(); ++i) space_vars_.push_back("y" + std::to_string(i));
  fields_ = center_quotient_fields();
}

const HomogeneousSpace& HomogeneousSpace::g4_center() {
  static const HomogeneousSpace s(&GroupModel::g4(), std::vector<int>{3});
  return s;
}

const HomogeneousSpace& HomogeneousSpace::g4bar_center() {
  static const HomogeneousSpace s(&GroupModel::g4bar(), std::vector<int>{3});
  return s;
}

const HomogeneousSpace& HomogeneousSpace::by_name(const std::string& name) {
  if (name == "g4") return g4_center();
  if (name == "g4bar") return g4bar_center();
  throw std::invalid_argument("unknown homogeneous space: " + name);
}

Eigen::VectorXd HomogeneousSpace::project(const GroupElement& g) const {
  if (g.model != group_) throw std::invalid_argument("project: element of a different group");
  const GroupElement first = convert(g, ChartKind::FirstKind);
  return first.coords.head(space_dim());
}

GroupElement HomogeneousSpace::lift(const Eigen::VectorXd& y) const {
  if (y.size() != space_dim()) throw std::invalid_argument("lift: wrong coordinate count");
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(group_->dim());
  coords.head(space_dim()) = y;
  return group_->element(ChartKind::FirstKind, std::move(coords));
}

Eigen::VectorXd HomogeneousSpace::action(const GroupElement& g, const Eigen::VectorXd& y) const {
  return project(compose(convert(g, ChartKind::FirstKind), lift(y)));
}

OdeRhs project_system(const HomogeneousSpace& space, const ControlSignal& controls) {
  if (controls.channels() != space.group().dim())
    throw std::invalid_argument("project_system: controls must have one channel per basis direction");
  const auto& fields = space.fundamental_fields();
  return [&space, controls, &fields](double t, const Eigen::VectorXd& y) {
    const Eigen::VectorXd b = controls.eval(t);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.space_dim());
    for (int a = 0; a < b.size(); ++a)
      if (b(a) != 0.0) out += b(a) * fields[a].eval(y);
    return out;
  };
}

namespace {

AlgebraElement subgroup_rhs_value(const HomogeneousSpace& space, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& ydot, const Eigen::VectorXd& b) {
  const GroupModel& group = space.group();
  const GroupElement g1 = space.lift(y);
  Eigen::VectorXd g1dot = Eigen::VectorXd::Zero(group.dim());
  g1dot.head(space.space_dim()) = ydot;
  const AlgebraElement rd = right_deriv(g1, g1dot);
  const AlgebraElement w = AlgebraElement(group.algebra(), b) + rd;
  const Eigen::MatrixXd ad_inv = adjoint(inverse(g1));
  return AlgebraElement(group.algebra(), -(ad_inv * w.coeffs()));
}

}  // namespace

AlgebraElement subgroup_rhs_at(const HomogeneousSpace& space, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& b) {
  const auto& fields = space.fundamental_fields();
  Eigen::VectorXd ydot = Eigen::VectorXd::Zero(space.space_dim());
  for (int a = 0; a < b.size(); ++a)
    if (b(a) != 0.0) ydot += b(a) * fields[a].eval(y);
  return subgroup_rhs_value(space, y, ydot, b);
}

ReducedProblem reduce(const HomogeneousSpace& space, const ControlSignal& controls,
                      const BaseCurve& base, const TimeGrid& validation_grid, double support_tol) {
  if (!base.value) throw std::invalid_argument("reduce: base curve has no value function");
  if (controls.channels() != space.group().dim())
    throw std::invalid_argument("reduce: controls must have one channel per basis direction");

  auto deriv = base.derivative;
  if (!deriv) {
    // central differences, falling back to second-order one-sided stencils
    // where the curve's domain ends
    auto value = base.value;
    const double lo = controls.t0(), hi = controls.t1();
    deriv = [value, lo, hi](double t) {
      const double h = 1e-5;
      if (t - h >= lo && t + h <= hi)
        return ((value(t + h) - value(t - h)) / (2.0 * h)).eval();
      if (t + 2.0 * h <= hi)
        return ((-3.0 * value(t) + 4.0 * value(t + h) - value(t + 2.0 * h)) / (2.0 * h)).eval();
      return ((3.0 * value(t) - 4.0 * value(t - h) + value(t - 2.0 * h)) / (2.0 * h)).eval();
    };
  }

  std::function<AlgebraElement(double)> subgroup_rhs =
      [&space, controls, value = base.value, deriv](double t) {
        return subgroup_rhs_value(space, value(t), deriv(t), controls.eval(t));
      };

  // the defining check that reduction succeeded: support inside the subalgebra
  const auto& sub = space.subalgebra_indices();
  double residual = 0.0;
  Eigen::MatrixXd lifted(validation_grid.size(), space.group().dim());
  for (int i = 0; i < validation_grid.size(); ++i) {
    const double t = validation_grid[i];
    const AlgebraElement xi = subgroup_rhs(t);
    for (int k = 0; k < xi.coeffs().size(); ++k) {
      if (std::find(sub.begin(), sub.end(), k) == sub.end())
        residual = std::max(residual, std::abs(xi.coeffs()(k)));
    }
    lifted.row(i) = space.lift(base.value(t)).coords.transpose();
  }
  ReducedProblem problem{&space,   base,
                         std::move(subgroup_rhs), residual,
                         Trajectory{validation_grid, std::move(lifted)},
                         controls.breakpoints()};
  if (residual > support_tol) {
    std::ostringstream os;
    os << "reduce: subgroup equation leaves the subalgebra (residual " << residual
       << " > " << support_tol << "); the base curve does not solve the projected system"
       << " or the section is inconsistent";
    throw NumericError(os.str(), residual);
  }
  return problem;
}

Trajectory solve_subgroup(const ReducedProblem& problem, const TimeGrid& grid, double tol) {
  const auto& sub = problem.space->subalgebra_indices();
  if (sub.size() != 1)
    throw std::invalid_argument("solve_subgroup: only one-parameter subgroups are shipped");
  const int k = sub[0];
  const Antiderivative d(
      [&problem, k](double t) { return problem.subgroup_rhs(t).coeffs()(k); }, grid.t0(), grid.t1(),
      tol, problem.control_breakpoints);
  Eigen::MatrixXd states(grid.size(), 1);
  for (int i = 0; i < grid.size(); ++i) states(i, 0) = d(grid[i]);
  return Trajectory{grid, std::move(states)};
}

Trajectory recombine(const ReducedProblem& problem, const Trajectory& h_traj) {
  const TimeGrid& grid = problem.lifted.grid;
  if (h_traj.grid.nodes() != grid.nodes())
    throw std::invalid_argument("recombine: subgroup trajectory grid does not match");
  const auto& sub = problem.space->subalgebra_indices();
  if (h_traj.dim() != static_cast<int>(sub.size()))
    throw std::invalid_argument("recombine: subgroup trajectory has wrong dimension");
  const GroupModel& group = problem.space->group();

  Eigen::MatrixXd states(grid.size(), group.dim());
  for (int i = 0; i < grid.size(); ++i) {
    const GroupElement g1 = group.element(ChartKind::FirstKind, problem.lifted.states.row(i));
    Eigen::VectorXd h_coords = Eigen::VectorXd::Zero(group.dim());
    for (std::size_t s = 0; s < sub.size(); ++s) h_coords(sub[s]) = h_traj.states(i, static_cast<int>(s));
    const GroupElement h = group.element(ChartKind::FirstKind, std::move(h_coords));
    states.row(i) = compose(g1, h).coords.transpose();
  }
  return Trajectory{grid, std::move(states)};
}

Expr symbolic_reduced_rhs(const HomogeneousSpace& space, const std::vector<int>& active_channels) {
  if (space.subalgebra_indices() != std::vector<int>{3})
    throw std::invalid_argument("symbolic_reduced_rhs: shipped for the center reductions only");

  using A4 = std::array<Expr, 4>;
  const Expr zero = Expr::constant(0.0);
  const Expr y1 = Expr::variable("y1");
  const Expr y2 = Expr::variable("y2");
  const Expr y3 = Expr::variable("y3");

  A4 b = {zero, zero, zero, zero};
  for (int ch : active_channels) b[ch] = Expr::variable("b" + std::to_string(ch + 1));

  // ydot from the fundamental fields
  const auto& fields = space.fundamental_fields();
  std::array<Expr, 3> ydot = {zero, zero, zero};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 3; ++i) ydot[i] = ydot[i] + b[a] * fields[a].components()[i];

  const A4 g1 = {y1, y2, y3, zero};
  const A4 g1dot = {ydot[0], ydot[1], ydot[2], zero};
  const A4 g1inv = {-y1, -y2, -y3, zero};

  const bool is_g4 = (&space.group() == &GroupModel::g4());
  const A4 rd = is_g4 ? detail::right_deriv_first_g4(g1, g1dot)
                      : detail::right_deriv_first_g4bar(g1, g1dot);
  A4 w;
  for (int i = 0; i < 4; ++i) w[i] = b[i] + rd[i];
  const A4 xi = is_g4 ? detail::adjoint_first_g4_apply(g1inv, w)
                      : detail::adjoint_first_g4bar_apply(g1inv, w);
  return -xi[3];
}

}  // namespace lieco
