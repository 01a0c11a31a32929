#include "verify_checks.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lieco/models.hpp"
#include "lieco/reduction.hpp"
#include "lieco/vfield.hpp"
#include "lieco/weinorman.hpp"

namespace lieco::cli {

namespace {

ControlSignal sincos(double t1 = 2.0) {
  return ControlSignal::closed_form({"sin(t)", "cos(t)"}, 0.0, t1);
}

CheckResult check(const std::string& name, double observed, double tol) {
  std::ostringstream os;
  os << "max residual " << observed << " (tolerance " << tol << ")";
  return {name, observed <= tol, os.str()};
}

double wn_endpoint_error(const LieAlgebra& algebra, const Eigen::Vector4d& expected) {
  WNSystem system(algebra, WNSystem::natural_ordering(4),
                  ControlSignal::constants({1.0, 1.0}, 0.0, 1.0).padded_to(4));
  const WNTrajectory wn = solve_wn(system, TimeGrid::uniform(0.0, 1.0, 11));
  return (wn.v.row(10).transpose() - expected).cwiseAbs().maxCoeff();
}

double bracket_error(const std::vector<VectorFieldExpr>& quad,
                     const std::vector<std::string>& expected, std::uint64_t seed) {
  const auto& vars = quad[0].variables();
  const auto pts = probe_points(vars, 32, seed, quad);
  double worst = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const VectorFieldExpr want = parse_field(expected[k], vars);
    for (const auto& p : pts)
      worst = std::max(worst, (quad[2 + k].eval(p) - want.eval(p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double group_law_error(const GroupModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  double worst = 0.0;
  for (ChartKind chart : {ChartKind::FirstKind, ChartKind::SecondKind}) {
    for (int trial = 0; trial < 250; ++trial) {
      Eigen::VectorXd a(model.dim()), b(model.dim()), c(model.dim());
      for (int i = 0; i < model.dim(); ++i) {
        a(i) = uni(rng);
        b(i) = uni(rng);
        c(i) = uni(rng);
      }
      const GroupElement p = model.element(chart, a);
      const GroupElement q = model.element(chart, b);
      const GroupElement s = model.element(chart, c);
      worst = std::max(worst, (compose(compose(p, q), s).coords -
                               compose(p, compose(q, s)).coords).cwiseAbs().maxCoeff());
      worst = std::max(worst, compose(p, inverse(p)).coords.cwiseAbs().maxCoeff());
      worst = std::max(worst, (adjoint(compose(p, q)) - adjoint(p) * adjoint(q))
                                  .cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double reduction_error(const HomogeneousSpace& space, std::uint64_t) {
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 21);
  const ControlSignal controls = sincos().padded_to(4);
  auto rhs = project_system(space, controls);
  auto dense = std::make_shared<DenseOdeSolution>(
      solve_ode_dense(rhs, Eigen::Vector3d::Zero(), 0.0, 2.0, 1e-11));
  const ReducedProblem problem =
      reduce(space, controls, BaseCurve::from_ode_solution(dense, rhs), grid);
  const Trajectory recombined = recombine(problem, solve_subgroup(problem, grid));

  WNSystem system(space.group().algebra(), WNSystem::natural_ordering(4), controls);
  const WNTrajectory wn = solve_wn(system, grid, 1e-11);
  double worst = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const GroupElement direct = convert(
        space.group().element(ChartKind::SecondKind, Eigen::VectorXd(-wn.v.row(i).transpose())),
        ChartKind::FirstKind);
    worst = std::max(worst,
                     (recombined.states.row(i).transpose() - direct.coords).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<CheckResult> verify_rigid_body(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check("wn-closed-form-endpoint",
                      wn_endpoint_error(LieAlgebra::rigid_body_extension(),
                                        Eigen::Vector4d(1.0, 1.0, 0.5, 0.5)),
                      1e-9));
  out.push_back(check("printed-brackets",
                      bracket_error(rb_field_quadruple(), {"0; 0; 2*(x1+x2)", "0; 0; 2"}, seed),
                      1e-10));

  const auto closure = closes_algebra(rb_field_quadruple(), 4, seed);
  double cerr = 1.0;
  if (closure.closed) {
    cerr = std::abs(closure.constants[2](0, 1) - 1.0);
    cerr = std::max(cerr, std::abs(closure.constants[3](0, 2) - 1.0));
    cerr = std::max(cerr, std::abs(closure.constants[3](1, 2) - 1.0));
  }
  out.push_back(check("closure-constants", cerr, 1e-8));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  const auto quad = rb_field_quadruple();
  const std::vector<VectorFieldExpr> spanning = {quad[0], quad[1], quad[3]};
  bool rank_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector3d p(uni(rng), uni(rng), uni(rng));
    rank_ok = rank_ok && rank_at(spanning, p) == 3;
  }
  out.push_back({"rank-spanning-triple", rank_ok, rank_ok ? "rank 3 at 100 points" : "rank defect"});

  double dual = 0.0;
  {
    const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
    std::uniform_real_distribution<double> small(-0.5, 0.5);
    for (int trial = 0; trial < 3; ++trial) {
      const PlanarRigidBodyState s0{small(rng), small(rng), small(rng)};
      const Trajectory wn = rb_solution(sincos(), s0, grid);
      const Trajectory oracle = solve_ode(rb_oracle_rhs(sincos()), s0.vec(), grid, 1e-11);
      dual = std::max(dual, (wn.states - oracle.states).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(check("wn-vs-oracle", dual, 1e-6));
  out.push_back(check("group-laws", group_law_error(GroupModel::g4(), seed), 1e-10));
  out.push_back(check("center-reduction", reduction_error(HomogeneousSpace::g4_center(), seed), 1e-6));
  return out;
}

std::vector<CheckResult> verify_chained(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check("wn-closed-form-endpoint",
                      wn_endpoint_error(LieAlgebra::chained_extension(),
                                        Eigen::Vector4d(1.0, 1.0, 0.5, 1.0 / 6.0)),
                      1e-9));
  out.push_back(check("printed-brackets",
                      bracket_error(chained_quadruple(), {"0; 0; -1; 0", "0; 0; 0; 1"}, seed),
                      1e-10));

  const auto closure = closes_algebra(chained_input_fields(), 4, seed);
  double cerr = 1.0;
  if (closure.closed && closure.basis.size() == 4) {
    cerr = std::abs(closure.constants[2](0, 1) - 1.0);
    cerr = std::max(cerr, std::abs(closure.constants[3](0, 2) - 1.0));
    cerr = std::max(cerr, std::abs(closure.constants[3](1, 2)));  // distinguishes from g4
  }
  out.push_back(check("closure-constants", cerr, 1e-8));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  bool rank_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector4d p(uni(rng), uni(rng), uni(rng), uni(rng));
    rank_ok = rank_ok && rank_at(chained_quadruple(), p) == 4;
  }
  out.push_back({"rank-full", rank_ok, rank_ok ? "rank 4 at 100 points" : "rank defect"});

  double dual = 0.0;
  {
    const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
    std::uniform_real_distribution<double> small(-0.5, 0.5);
    for (int trial = 0; trial < 3; ++trial) {
      const ChainedState s0{small(rng), small(rng), small(rng), small(rng)};
      const Trajectory wn = chained_solution(sincos(), s0, grid);
      const Trajectory oracle = solve_ode(chained_oracle_rhs(sincos()), s0.vec(), grid, 1e-11);
      dual = std::max(dual, (wn.states - oracle.states).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(check("wn-vs-oracle", dual, 1e-6));
  out.push_back(check("group-laws", group_law_error(GroupModel::g4bar(), seed), 1e-10));
  out.push_back(
      check("center-reduction", reduction_error(HomogeneousSpace::g4bar_center(), seed), 1e-6));
  return out;
}

std::vector<CheckResult> verify_car_raw(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto pair = car_raw_input_fields();
  const auto closure = closes_algebra(pair, 8, seed);
  out.push_back({"no-finite-closure", !closure.closed,
                 closure.closed ? "unexpectedly closed" : "independent directions keep appearing"});

  const auto quad = car_raw_quadruple();
  out.push_back({"rank-full-at-sample", rank_at(quad, Eigen::Vector4d(0.0, 0.0, 0.3, 0.2)) == 4,
                 "quadruple rank at (0, 0, 0.3, 0.2)"});

  // feedback equivalence against the chained model
  double dual = 0.0;
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-0.5, 0.5), angle(-0.2, 0.2);
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 21);
    for (int trial = 0; trial < 3; ++trial) {
      const CarState car0{pos(rng), pos(rng), angle(rng), angle(rng)};
      const ControlSignal controls = sincos(1.0);
      const Trajectory raw = solve_ode(car_feedback_rhs(controls), car0.vec(), grid, 1e-11);
      const Trajectory chained = chained_solution(controls, car_to_chained(car0), grid);
      for (int i = 0; i < grid.size(); ++i) {
        const ChainedState mapped = car_to_chained(CarState::from(raw.states.row(i)));
        dual = std::max(dual,
                        (mapped.vec() - chained.states.row(i).transpose()).cwiseAbs().maxCoeff());
      }
    }
  }
  out.push_back(check("feedback-equivalence", dual, 1e-6));

  // round trip of the coordinate change
  double rt = 0.0;
  {
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> pos(-2.0, 2.0), angle(-1.2, 1.2);
    for (int trial = 0; trial < 100; ++trial) {
      const CarState s{pos(rng), pos(rng), angle(rng), angle(rng)};
      rt = std::max(rt, (chained_to_car(car_to_chained(s)).vec() - s.vec()).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(check("coordinate-round-trip", rt, 1e-12));
  return out;
}

std::vector<CheckResult> verify_brockett(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
  double dual = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::Vector3d s0(uni(rng), uni(rng), uni(rng));
    const Trajectory wn = brockett_solution(sincos(), s0, grid);
    const Trajectory oracle = solve_ode(brockett_oracle_rhs(sincos()), s0, grid, 1e-11);
    dual = std::max(dual, (wn.states - oracle.states).cwiseAbs().maxCoeff());
  }
  out.push_back(check("wn-vs-oracle", dual, 1e-6));
  out.push_back(check("group-laws", group_law_error(GroupModel::h3(), seed), 1e-10));
  return out;
}

}  // namespace

std::vector<CheckResult> verify_model(const std::string& model, std::uint64_t seed) {
  if (model == "rigid-body-2osc") return verify_rigid_body(seed);
  if (model == "car-chained") return verify_chained(seed);
  if (model == "car-raw") return verify_car_raw(seed);
  if (model == "brockett") return verify_brockett(seed);
  throw std::invalid_argument("verify: unknown model '" + model + "'");
}

}  // namespace lieco::cli
