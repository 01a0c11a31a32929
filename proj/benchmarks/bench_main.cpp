#include <benchmark/benchmark.h>

#include <random>

#include "lieco/models.hpp"
#include "lieco/reduction.hpp"
#include "lieco/weinorman.hpp"

using namespace lieco;

namespace {

ControlSignal sincos4() {
  return ControlSignal::closed_form({"sin(t)", "cos(t)"}, 0.0, 2.0).padded_to(4);
}

void BM_ComposeSecondKind(benchmark::State& state) {
  const GroupModel& g4 = GroupModel::g4();
  const GroupElement p = g4.element(ChartKind::SecondKind, Eigen::Vector4d(0.3, -0.7, 1.1, 0.2));
  const GroupElement q = g4.element(ChartKind::SecondKind, Eigen::Vector4d(-0.4, 0.9, 0.1, -1.3));
  for (auto _ : state) benchmark::DoNotOptimize(compose(p, q).coords);
}
BENCHMARK(BM_ComposeSecondKind);

void BM_AdjointSecondKind(benchmark::State& state) {
  const GroupModel& g4 = GroupModel::g4();
  const GroupElement p = g4.element(ChartKind::SecondKind, Eigen::Vector4d(0.3, -0.7, 1.1, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(adjoint(p));
}
BENCHMARK(BM_AdjointSecondKind);

void BM_ExpAd(benchmark::State& state) {
  const LieAlgebra g4 = LieAlgebra::rigid_body_extension();
  const AlgebraElement x(g4, Eigen::Vector4d(0.4, -0.8, 0.3, 1.2));
  for (auto _ : state) benchmark::DoNotOptimize(exp_ad(x, -0.73));
}
BENCHMARK(BM_ExpAd);

void BM_WnMatrix(benchmark::State& state) {
  WNSystem system(LieAlgebra::rigid_body_extension(), {0, 1, 2, 3}, sincos4());
  const Eigen::Vector4d v(0.2, -0.4, 0.6, -0.8);
  for (auto _ : state) benchmark::DoNotOptimize(wn_matrix(system, v));
}
BENCHMARK(BM_WnMatrix);

void BM_SolveWnQuadrature(benchmark::State& state) {
  WNSystem system(LieAlgebra::rigid_body_extension(), {0, 1, 2, 3}, sincos4());
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_wn(system, grid, 1e-10, WnMethod::Quadrature).v);
}
BENCHMARK(BM_SolveWnQuadrature);

void BM_SolveWnOde(benchmark::State& state) {
  WNSystem system(LieAlgebra::rigid_body_extension(), {0, 1, 2, 3}, sincos4());
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
  for (auto _ : state) benchmark::DoNotOptimize(solve_wn(system, grid, 1e-10, WnMethod::Ode).v);
}
BENCHMARK(BM_SolveWnOde);

void BM_LieBracket(benchmark::State& state) {
  const auto fields = car_raw_input_fields();
  for (auto _ : state) benchmark::DoNotOptimize(lie_bracket(fields[0], fields[1]));
}
BENCHMARK(BM_LieBracket);

void BM_ClosesAlgebraChained(benchmark::State& state) {
  const auto fields = chained_input_fields();
  for (auto _ : state) benchmark::DoNotOptimize(closes_algebra(fields, 4).closed);
}
BENCHMARK(BM_ClosesAlgebraChained);

void BM_RankAt(benchmark::State& state) {
  const auto quad = car_raw_quadruple();
  const Eigen::Vector4d p(0.0, 0.0, 0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(rank_at(quad, p));
}
BENCHMARK(BM_RankAt);

void BM_ChainedSolution(benchmark::State& state) {
  const ControlSignal controls = ControlSignal::closed_form({"sin(t)", "cos(t)"}, 0.0, 2.0);
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 41);
  for (auto _ : state)
    benchmark::DoNotOptimize(chained_solution(controls, {0.1, -0.2, 0.3, 0.0}, grid).states);
}
BENCHMARK(BM_ChainedSolution);

void BM_CenterReduction(benchmark::State& state) {
  const HomogeneousSpace& space = HomogeneousSpace::g4_center();
  const ControlSignal controls = sincos4();
  const TimeGrid grid = TimeGrid::uniform(0.0, 2.0, 21);
  for (auto _ : state) {
    auto rhs = project_system(space, controls);
    auto dense = std::make_shared<DenseOdeSolution>(
        solve_ode_dense(rhs, Eigen::Vector3d::Zero(), 0.0, 2.0, 1e-10));
    const ReducedProblem problem =
        reduce(space, controls, BaseCurve::from_ode_solution(dense, rhs), grid);
    benchmark::DoNotOptimize(recombine(problem, solve_subgroup(problem, grid)).states);
  }
}
BENCHMARK(BM_CenterReduction);

}  // namespace

BENCHMARK_MAIN();
