#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lieco/errors.hpp"
#include "lieco/groups.hpp"
#include "lieco/weinorman.hpp"
#include "support/oracles.hpp"

using namespace lieco;

namespace {

ControlSignal unit_controls(int dim, double t0 = 0.0, double t1 = 1.0) {
  return ControlSignal::constants({1.0, 1.0}, t0, t1).padded_to(dim);
}

ControlSignal sincos_controls(int dim, double t1 = 2.0) {
  return ControlSignal::closed_form({"sin(t)", "cos(t)"}, 0.0, t1).padded_to(dim);
}

}  // namespace

TEST_CASE("wn_matrix is the identity at v = 0") {
  for (const LieAlgebra& a :
       {LieAlgebra::rigid_body_extension(), LieAlgebra::chained_extension(), oracle::so3()}) {
    WNSystem system(a, WNSystem::natural_ordering(a.dim()), unit_controls(a.dim()));
    CHECK(wn_matrix(system, Eigen::VectorXd::Zero(a.dim())).isIdentity(1e-15));
  }
}

TEST_CASE("the fundamental equation reproduces the printed rigid-body system") {
  const LieAlgebra g4 = LieAlgebra::rigid_body_extension();
  WNSystem system(g4, WNSystem::natural_ordering(4), unit_controls(4));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Vector4d v(uni(rng), uni(rng), uni(rng), uni(rng));
    const double b1 = uni(rng), b2 = uni(rng);
    Eigen::Vector4d b(b1, b2, 0.0, 0.0);
    const Eigen::MatrixXd m = wn_matrix(system, v);
    const Eigen::Vector4d vdot = m.fullPivLu().solve(b);
    CHECK(vdot(0) == doctest::Approx(b1).epsilon(1e-12));
    CHECK(vdot(1) == doctest::Approx(b2).epsilon(1e-12));
    CHECK(vdot(2) == doctest::Approx(b2 * v(0)).epsilon(1e-12));
    CHECK(vdot(3) == doctest::Approx(b2 * v(0) * (v(0) / 2.0 + v(1))).epsilon(1e-12));
  }
}

TEST_CASE("the fundamental equation reproduces the printed chained system") {
  const LieAlgebra g4bar = LieAlgebra::chained_extension();
  WNSystem system(g4bar, WNSystem::natural_ordering(4), unit_controls(4));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Vector4d v(uni(rng), uni(rng), uni(rng), uni(rng));
    const double b1 = uni(rng), b2 = uni(rng);
    const Eigen::Vector4d vdot =
        wn_matrix(system, v).fullPivLu().solve(Eigen::Vector4d(b1, b2, 0, 0));
    CHECK(vdot(2) == doctest::Approx(b2 * v(0)).epsilon(1e-12));
    CHECK(vdot(3) == doctest::Approx(b2 * v(0) * v(0) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("quadrature plans") {
  const LieAlgebra g4 = LieAlgebra::rigid_body_extension();
  const QuadraturePlan plan = quadrature_plan(WNSystem(g4, {0, 1, 2, 3}, unit_controls(4)));
  REQUIRE(plan.triangular);
  CHECK(plan.to_string() == "v1, v2, v3(v1), v4(v1,v2)");

  const LieAlgebra g4bar = LieAlgebra::chained_extension();
  const QuadraturePlan plan_bar = quadrature_plan(WNSystem(g4bar, {0, 1, 2, 3}, unit_controls(4)));
  REQUIRE(plan_bar.triangular);
  CHECK(plan_bar.to_string() == "v1, v2, v3(v1), v4(v1)");

  const LieAlgebra ab = LieAlgebra::abelian(3);
  const QuadraturePlan plan_ab = quadrature_plan(WNSystem(ab, {0, 1, 2}, unit_controls(3)));
  REQUIRE(plan_ab.triangular);
  for (const auto& cp : plan_ab.order) CHECK(cp.depends_on.empty());

  const QuadraturePlan plan_so3 =
      quadrature_plan(WNSystem(oracle::so3(), {0, 1, 2}, unit_controls(3)));
  CHECK_FALSE(plan_so3.triangular);
  CHECK(plan_so3.to_string() == "not triangular");
}

TEST_CASE("solve_wn with zero controls is identically zero") {
  const LieAlgebra g4 = LieAlgebra::rigid_body_extension();
  WNSystem system(g4, {0, 1, 2, 3}, ControlSignal::constants({0, 0}, 0, 1).padded_to(4));
  const WNTrajectory out = solve_wn(system, TimeGrid::uniform(0, 1, 11));
  CHECK(out.v.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("closed-form coordinates for unit controls") {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 21);

  WNSystem rb(LieAlgebra::rigid_body_extension(), {0, 1, 2, 3}, unit_controls(4));
  const WNTrajectory v_rb = solve_wn(rb, grid);
  CHECK(v_rb.solvable_by_quadratures);
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    CHECK(v_rb.v(i, 0) == doctest::Approx(t).epsilon(1e-11));
    CHECK(v_rb.v(i, 1) == doctest::Approx(t).epsilon(1e-11));
    CHECK(std::abs(v_rb.v(i, 2) - t * t / 2.0) < 1e-11);
    CHECK(std::abs(v_rb.v(i, 3) - t * t * t / 2.0) < 1e-11);
  }

  WNSystem ch(LieAlgebra::chained_extension(), {0, 1, 2, 3}, unit_controls(4));
  const WNTrajectory v_ch = solve_wn(ch, grid);
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    CHECK(std::abs(v_ch.v(i, 2) - t * t / 2.0) < 1e-11);
    CHECK(std::abs(v_ch.v(i, 3) - t * t * t / 6.0) < 1e-11);
  }
}

TEST_CASE("quadrature and ODE paths agree") {
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
  for (const LieAlgebra& a : {LieAlgebra::rigid_body_extension(), LieAlgebra::chained_extension()}) {
    WNSystem system(a, {0, 1, 2, 3}, sincos_controls(4));
    const WNTrajectory quad_path = solve_wn(system, grid, 1e-10, WnMethod::Quadrature);
    const WNTrajectory ode_path = solve_wn(system, grid, 1e-11, WnMethod::Ode);
    CHECK(quad_path.solvable_by_quadratures);
    CHECK((quad_path.v - ode_path.v).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("piecewise-constant controls are integrated exactly") {
  // b1 switches from 1 to -1 at t = 1
  std::vector<Channel> channels = {PiecewiseConstantChannel{{1.0}, {1.0, -1.0}},
                                   ConstantChannel{1.0}};
  WNSystem system(LieAlgebra::chained_extension(), {0, 1, 2, 3},
                  ControlSignal(channels, 0.0, 2.0).padded_to(4));
  const TimeGrid grid({0.0, 0.5, 1.0, 1.5, 2.0});
  const WNTrajectory out = solve_wn(system, grid);
  // v1(t) = t then 2 - t; v3 = int b2 v1
  CHECK(out.v(4, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.v(2, 2) == doctest::Approx(0.5).epsilon(1e-11));
  // v3(2) = int_0^1 t dt + int_1^2 (2 - t) dt = 1
  CHECK(out.v(4, 2) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("sampled controls integrate through their kinks") {
  // b1 is the hat function peaking at t = 0.5, b2 = 1; then
  // v1(1) = 1/2 and v3(1) = int_0^1 v1 = 1/4
  std::vector<Channel> channels = {SampledChannel{{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}},
                                   ConstantChannel{1.0}};
  WNSystem system(LieAlgebra::chained_extension(), {0, 1, 2, 3},
                  ControlSignal(channels, 0.0, 1.0).padded_to(4));
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 5);
  const WNTrajectory quad_path = solve_wn(system, grid, 1e-10, WnMethod::Quadrature);
  CHECK(quad_path.v(4, 0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(quad_path.v(4, 2) == doctest::Approx(0.25).epsilon(1e-10));
  const WNTrajectory ode_path = solve_wn(system, grid, 1e-11, WnMethod::Ode);
  CHECK((quad_path.v - ode_path.v).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("reconstruction satisfies the right-invariant equation") {
  // central differences on the realized product of exponentials
  const double h = 1e-5;
  const std::vector<double> times = {0.3, 0.7, 1.1, 1.9};
  std::vector<double> nodes = {0.0};
  for (double t : times) {
    nodes.push_back(t - h);
    nodes.push_back(t);
    nodes.push_back(t + h);
  }
  nodes.push_back(2.0);
  const TimeGrid grid{nodes};

  for (const auto* model : {&GroupModel::g4(), &GroupModel::g4bar()}) {
    const auto rho = oracle::realization(*model);
    WNSystem system(model->algebra(), {0, 1, 2, 3}, sincos_controls(4));
    const WNTrajectory wn = solve_wn(system, grid);

    auto realize_at = [&](int row) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(4, 4);
      for (int k = 0; k < 4; ++k) acc = acc * oracle::expm_series(-wn.v(row, k) * rho[k]);
      return acc;
    };
    for (std::size_t j = 0; j < times.size(); ++j) {
      const int at = static_cast<int>(1 + 3 * j + 1);
      const Eigen::MatrixXd g = realize_at(at);
      const Eigen::MatrixXd gdot = (realize_at(at + 1) - realize_at(at - 1)) / (2.0 * h);
      Eigen::MatrixXd residual = gdot * g.inverse();
      const double b1 = std::sin(times[j]), b2 = std::cos(times[j]);
      residual += b1 * rho[0] + b2 * rho[1];
      CHECK(residual.cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("changing the factorization ordering preserves the group element") {
  const GroupModel& g4 = GroupModel::g4();
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 9);
  WNSystem natural(g4.algebra(), {0, 1, 2, 3}, sincos_controls(4));
  WNSystem swapped(g4.algebra(), {1, 0, 2, 3}, sincos_controls(4));
  const WNTrajectory v_nat = solve_wn(natural, grid);
  const WNTrajectory v_swp = solve_wn(swapped, grid);

  CHECK((v_nat.v - v_swp.v).cwiseAbs().maxCoeff() > 1e-3);  // coordinates differ

  for (int i = 0; i < grid.size(); ++i) {
    std::vector<std::pair<int, double>> f_nat, f_swp;
    for (int k : natural.ordering) f_nat.emplace_back(k, -v_nat.v(i, k));
    for (int k : swapped.ordering) f_swp.emplace_back(k, -v_swp.v(i, k));
    const GroupElement g_nat = second_kind_product(g4, f_nat);
    const GroupElement g_swp = second_kind_product(g4, f_swp);
    CHECK((g_nat.coords - g_swp.coords).cwiseAbs().maxCoeff() < 1e-8);
  }

  // fully reversed factorization order
  WNSystem reversed(g4.algebra(), {3, 2, 1, 0}, sincos_controls(4));
  const WNTrajectory v_rev = solve_wn(reversed, grid);
  for (int i = 0; i < grid.size(); ++i) {
    std::vector<std::pair<int, double>> f_nat, f_rev;
    for (int k : natural.ordering) f_nat.emplace_back(k, -v_nat.v(i, k));
    for (int k : reversed.ordering) f_rev.emplace_back(k, -v_rev.v(i, k));
    CHECK((second_kind_product(g4, f_nat).coords - second_kind_product(g4, f_rev).coords)
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("singular Wei-Norman matrix is reported, not regularized") {
  // on so(3) the second-kind coordinates break down at v2 = pi/2
  WNSystem system(oracle::so3(), {0, 1, 2},
                  ControlSignal::constants({0.0, 0.0, 1.0}, 0.0, 2.0));
  const Eigen::Vector3d near_singular(0.0, M_PI / 2.0 * (1.0 - 1e-14), 0.0);
  CHECK_THROWS_AS(wn_velocity(system, 0.5, near_singular), NumericError);
  try {
    wn_velocity(system, 0.5, near_singular);
  } catch (const NumericError& err) {
    CHECK(std::string(err.what()).find("t = 0.5") != std::string::npos);
  }

  // when the controls never excite the degenerate column the solution stays
  // regular straight through the coordinate breakdown
  WNSystem benign(oracle::so3(), {0, 1, 2},
                  ControlSignal::constants({0.0, 1.0}, 0.0, 2.0).padded_to(3));
  const WNTrajectory out = solve_wn(benign, TimeGrid::uniform(0.0, 2.0, 5));
  CHECK(out.v(4, 1) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("WNSystem validates its ordering and channel count") {
  const LieAlgebra g4 = LieAlgebra::rigid_body_extension();
  CHECK_THROWS_AS(WNSystem(g4, {0, 1, 2}, unit_controls(4)), std::invalid_argument);
  CHECK_THROWS_AS(WNSystem(g4, {0, 1, 2, 2}, unit_controls(4)), std::invalid_argument);
  CHECK_THROWS_AS(WNSystem(g4, {0, 1, 2, 3}, unit_controls(3)), std::invalid_argument);
}
