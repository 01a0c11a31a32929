#include "scenario.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "lieco/errors.hpp"
#include "lieco/models.hpp"
#include "lieco/reduction.hpp"
#include "lieco/weinorman.hpp"
#include "verify_checks.hpp"

namespace lieco::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  return j.at(key);
}

TimeGrid parse_grid(const json& j) {
  const json& g = require(j, "grid");
  const double t0 = require(g, "t0").get<double>();
  const double t1 = require(g, "t1").get<double>();
  const int nodes = require(g, "nodes").get<int>();
  try {
    return TimeGrid::uniform(t0, t1, nodes);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("bad grid: ") + err.what());
  }
}

ControlSignal parse_controls(const json& j, double t0, double t1) {
  const json& spec = require(j, "controls");
  if (!spec.is_array() || spec.empty()) throw ConfigError("'controls' must be a non-empty array");
  std::vector<Channel> channels;
  for (const json& ch : spec) {
    const std::string kind = require(ch, "kind").get<std::string>();
    try {
      if (kind == "constant") {
        channels.push_back(ConstantChannel{require(ch, "value").get<double>()});
      } else if (kind == "piecewise") {
        channels.push_back(PiecewiseConstantChannel{
            require(ch, "breaks").get<std::vector<double>>(),
            require(ch, "values").get<std::vector<double>>()});
      } else if (kind == "expr") {
        channels.push_back(ClosedFormChannel{parse_expr(require(ch, "text").get<std::string>(), {"t"})});
      } else if (kind == "sampled") {
        channels.push_back(SampledChannel{require(ch, "times").get<std::vector<double>>(),
                                          require(ch, "values").get<std::vector<double>>()});
      } else {
        throw ConfigError("unknown control kind '" + kind + "'");
      }
    } catch (const ParseError& err) {
      throw ConfigError(std::string("bad control expression: ") + err.what());
    }
  }
  try {
    return ControlSignal(std::move(channels), t0, t1);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("bad controls: ") + err.what());
  }
}

Eigen::VectorXd parse_state(const json& j, int expected, const char* key = "initial_state") {
  const auto vals = require(j, key).get<std::vector<double>>();
  if (static_cast<int>(vals.size()) != expected) {
    std::ostringstream os;
    os << "'" << key << "' must have " << expected << " entries, got " << vals.size();
    throw ConfigError(os.str());
  }
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), expected);
}

LieAlgebra parse_algebra(const json& j) {
  const json& spec = require(j, "algebra");
  if (spec.is_string()) {
    try {
      return LieAlgebra::by_name(spec.get<std::string>());
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }
  const auto names = require(spec, "basis").get<std::vector<std::string>>();
  std::vector<BracketTerm> brackets;
  for (const json& item : require(spec, "brackets")) {
    if (!item.is_array() || item.size() != 4)
      throw ConfigError("each bracket must be [lhs, rhs, target, coefficient]");
    auto index_of = [&names](const json& v) -> int {
      if (v.is_number_integer()) return v.get<int>() - 1;  // 1-based in configs
      const std::string name = v.get<std::string>();
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
      throw ConfigError("unknown basis name '" + name + "'");
    };
    brackets.push_back(
        {index_of(item.at(0)), index_of(item.at(1)), index_of(item.at(2)), item.at(3).get<double>()});
  }
  try {
    return LieAlgebra(names, brackets);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("bad algebra: ") + err.what());
  }
}

struct FieldSet {
  std::vector<std::string> variables;
  std::vector<VectorFieldExpr> fields;
  std::string description;
};

FieldSet parse_fields(const json& j) {
  const json& spec = require(j, "fields");
  if (spec.contains("set")) {
    const std::string name = spec.at("set").get<std::string>();
    if (name == "rigid-body-2osc")
      return {rb_field_quadruple()[0].variables(), rb_field_quadruple(), name};
    if (name == "car-raw") return {car_raw_quadruple()[0].variables(), car_raw_quadruple(), name};
    if (name == "car-raw-inputs")
      return {car_raw_input_fields()[0].variables(), car_raw_input_fields(), name};
    if (name == "car-chained")
      return {chained_quadruple()[0].variables(), chained_quadruple(), name};
    throw ConfigError("unknown field set '" + name + "'");
  }
  FieldSet out;
  out.variables = require(spec, "variables").get<std::vector<std::string>>();
  out.description = "custom";
  try {
    for (const json& text : require(spec, "components"))
      out.fields.push_back(parse_field(text.get<std::string>(), out.variables));
  } catch (const ParseError& err) {
    throw ConfigError(std::string("bad field expression: ") + err.what());
  }
  if (out.fields.empty()) throw ConfigError("'fields.components' must be non-empty");
  return out;
}

struct ModelInfo {
  std::string name;
  int state_dim;
  std::vector<std::string> state_names;
  bool has_wn_path;
};

ModelInfo model_info(const std::string& name) {
  if (name == "rigid-body-2osc") return {name, 3, {"x1", "x2", "theta"}, true};
  if (name == "brockett") return {name, 3, {"x1", "x2", "x3"}, true};
  if (name == "car-raw") return {name, 4, {"x", "y", "theta", "phi"}, false};
  if (name == "car-chained") return {name, 4, {"x1", "x2", "x3", "x4"}, true};
  throw ConfigError("unknown model '" + name + "'");
}

struct Settings {
  double ode_tol = 1e-10;
  double quad_tol = 1e-12;
  std::uint64_t seed = 1;
  std::string out_path;
};

Settings parse_settings(const json& j, const Scenario& scenario) {
  Settings s;
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("ode")) s.ode_tol = t.at("ode").get<double>();
    if (t.contains("quad")) s.quad_tol = t.at("quad").get<double>();
  }
  if (scenario.tol_override) {
    s.ode_tol = *scenario.tol_override;
    s.quad_tol = *scenario.tol_override;
  }
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (scenario.seed_override) s.seed = *scenario.seed_override;
  if (j.contains("output") && j.at("output").contains("path"))
    s.out_path = j.at("output").at("path").get<std::string>();
  if (scenario.out_override) s.out_path = *scenario.out_override;
  return s;
}

std::vector<std::string> footer_lines(const Settings& s) {
  return {"ode_tol=" + format_real(s.ode_tol), "quad_tol=" + format_real(s.quad_tol),
          "seed=" + std::to_string(s.seed)};
}

// ---- simulate ---------------------------------------------------------------

int run_simulate(const json& config, const Settings& settings) {
  const ModelInfo info = model_info(require(config, "model").get<std::string>());
  const TimeGrid grid = parse_grid(config);
  const ControlSignal controls = parse_controls(config, grid.t0(), grid.t1());
  if (controls.channels() != 2) throw ConfigError("model '" + info.name + "' takes two control channels");
  const Eigen::VectorXd s0 = parse_state(config, info.state_dim);

  Trajectory oracle = [&] {
    if (info.name == "rigid-body-2osc")
      return solve_ode(rb_oracle_rhs(controls), s0, grid, settings.ode_tol, controls.breakpoints());
    if (info.name == "brockett")
      return solve_ode(brockett_oracle_rhs(controls), s0, grid, settings.ode_tol,
                       controls.breakpoints());
    if (info.name == "car-raw")
      return solve_ode(car_raw_rhs(controls), s0, grid, settings.ode_tol, controls.breakpoints());
    return solve_ode(chained_oracle_rhs(controls), s0, grid, settings.ode_tol,
                     controls.breakpoints());
  }();

  std::vector<std::string> columns = {"time"};
  Eigen::MatrixXd rows;
  double deviation = -1.0;

  if (info.has_wn_path) {
    Trajectory wn = [&] {
      if (info.name == "rigid-body-2osc")
        return rb_solution(controls, PlanarRigidBodyState::from(s0), grid, settings.ode_tol);
      if (info.name == "brockett") return brockett_solution(controls, s0, grid, settings.ode_tol);
      return chained_solution(controls, ChainedState::from(s0), grid, settings.ode_tol);
    }();
    deviation = (wn.states - oracle.states).cwiseAbs().maxCoeff();
    rows.resize(grid.size(), 1 + 2 * info.state_dim);
    for (int i = 0; i < grid.size(); ++i) rows(i, 0) = grid[i];
    rows.middleCols(1, info.state_dim) = wn.states;
    rows.middleCols(1 + info.state_dim, info.state_dim) = oracle.states;
    for (const auto& n : info.state_names) columns.push_back("wn_" + n);
    for (const auto& n : info.state_names) columns.push_back("ode_" + n);
  } else {
    rows.resize(grid.size(), 1 + info.state_dim);
    for (int i = 0; i < grid.size(); ++i) rows(i, 0) = grid[i];
    rows.middleCols(1, info.state_dim) = oracle.states;
    for (const auto& n : info.state_names) columns.push_back("ode_" + n);
  }

  std::cout << "task: simulate\nmodel: " << info.name << "\n";
  std::cout << "grid: t0=" << format_real(grid.t0()) << " t1=" << format_real(grid.t1())
            << " nodes=" << grid.size() << "\n";
  if (deviation >= 0.0) std::cout << "sup_deviation: " << format_real(deviation) << "\n";
  std::cout << "final_state:";
  for (int c = 0; c < info.state_dim; ++c) std::cout << ' ' << format_real(rows(grid.size() - 1, 1 + c));
  std::cout << "\n";
  if (!settings.out_path.empty()) {
    Settings s = settings;
    write_csv(s.out_path, columns, rows, footer_lines(s));
    std::cout << "output: " << s.out_path << "\n";
  }
  return kOk;
}

// ---- wn ---------------------------------------------------------------------

int run_wn(const json& config, const Settings& settings) {
  const LieAlgebra algebra = parse_algebra(config);
  const TimeGrid grid = parse_grid(config);
  ControlSignal controls = parse_controls(config, grid.t0(), grid.t1());
  if (controls.channels() > algebra.dim())
    throw ConfigError("more control channels than basis directions");
  controls = controls.padded_to(algebra.dim());

  std::vector<int> ordering = WNSystem::natural_ordering(algebra.dim());
  if (config.contains("ordering")) {
    const auto one_based = config.at("ordering").get<std::vector<int>>();
    ordering.clear();
    for (int i : one_based) ordering.push_back(i - 1);
  }

  const WNSystem system = [&] {
    try {
      return WNSystem(algebra, ordering, controls);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }();
  const QuadraturePlan plan = quadrature_plan(system);
  const WNTrajectory wn = solve_wn(system, grid, settings.ode_tol);

  std::vector<std::string> columns = {"time"};
  for (int k = 0; k < algebra.dim(); ++k) columns.push_back("v" + std::to_string(k + 1));
  Eigen::MatrixXd rows(grid.size(), 1 + algebra.dim());
  for (int i = 0; i < grid.size(); ++i) rows(i, 0) = grid[i];
  rows.rightCols(algebra.dim()) = wn.v;

  std::cout << "task: wn\nalgebra: ";
  for (const auto& n : algebra.basis_names()) std::cout << n << ' ';
  std::cout << "\nquadrature_plan: " << plan.to_string() << "\n";
  std::cout << "solvable_by_quadratures: " << (wn.solvable_by_quadratures ? "true" : "false")
            << "\n";
  std::cout << "final_v:";
  for (int k = 0; k < algebra.dim(); ++k) std::cout << ' ' << format_real(wn.v(grid.size() - 1, k));
  std::cout << "\n";
  if (!settings.out_path.empty()) {
    write_csv(settings.out_path, columns, rows, footer_lines(settings));
    std::cout << "output: " << settings.out_path << "\n";
  }
  return kOk;
}

// ---- reduce -----------------------------------------------------------------

int run_reduce(const json& config, const Settings& settings) {
  const std::string space_name = require(config, "space").get<std::string>();
  const HomogeneousSpace& space = [&]() -> const HomogeneousSpace& {
    try {
      return HomogeneousSpace::by_name(space_name);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }();
  const TimeGrid grid = parse_grid(config);
  ControlSignal controls = parse_controls(config, grid.t0(), grid.t1());
  if (controls.channels() != 2) throw ConfigError("reduce expects two control channels");
  controls = controls.padded_to(space.group().dim());

  auto rhs = project_system(space, controls);
  auto dense = std::make_shared<DenseOdeSolution>(
      solve_ode_dense(rhs, Eigen::VectorXd::Zero(space.space_dim()), grid.t0(), grid.t1(),
                      settings.ode_tol, controls.breakpoints()));
  const ReducedProblem problem =
      reduce(space, controls, BaseCurve::from_ode_solution(dense, rhs), grid);
  const Trajectory h = solve_subgroup(problem, grid, settings.quad_tol);
  const Trajectory recombined = recombine(problem, h);

  // direct group-level solution for the reconstruction residual
  WNSystem system(space.group().algebra(), WNSystem::natural_ordering(space.group().dim()),
                  controls);
  const WNTrajectory wn = solve_wn(system, grid, settings.ode_tol);
  double residual = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const GroupElement direct = convert(
        space.group().element(ChartKind::SecondKind, Eigen::VectorXd(-wn.v.row(i).transpose())),
        ChartKind::FirstKind);
    residual = std::max(
        residual, (recombined.states.row(i).transpose() - direct.coords).cwiseAbs().maxCoeff());
  }

  const Expr reduced = symbolic_reduced_rhs(space, {0, 1});
  std::vector<std::string> vars = space.space_variables();
  vars.push_back("b1");
  vars.push_back("b2");
  const auto poly = expand_polynomial(reduced, vars);

  std::cout << "task: reduce\nspace: " << space_name << "/center\n";
  std::cout << "projected_system: ydot1=-b1 ydot2=-b2 ydot3=(b2*y1-b1*y2)/2\n";
  std::cout << "reduced_equation: ddot=" << (poly ? polynomial_to_string(*poly, vars) : reduced.to_string())
            << "\n";
  std::cout << "support_residual: " << format_real(problem.support_residual) << "\n";
  std::cout << "reconstruction_residual: " << format_real(residual) << "\n";

  std::vector<std::string> columns = {"time", "y1", "y2", "y3", "d"};
  for (int k = 0; k < space.group().dim(); ++k) columns.push_back("g" + std::to_string(k + 1));
  Eigen::MatrixXd rows(grid.size(), 5 + space.group().dim());
  for (int i = 0; i < grid.size(); ++i) {
    rows(i, 0) = grid[i];
    rows.row(i).segment(1, 3) = problem.lifted.states.row(i).head(3);
    rows(i, 4) = h.states(i, 0);
    rows.row(i).tail(space.group().dim()) = recombined.states.row(i);
  }
  if (!settings.out_path.empty()) {
    auto footer = footer_lines(settings);
    footer.push_back("support_residual=" + format_real(problem.support_residual));
    footer.push_back("reconstruction_residual=" + format_real(residual));
    write_csv(settings.out_path, columns, rows, footer);
    std::cout << "output: " << settings.out_path << "\n";
  }
  return kOk;
}

// ---- rank -------------------------------------------------------------------

int run_rank(const json& config, const Settings& settings) {
  const FieldSet fs = parse_fields(config);
  std::vector<Eigen::VectorXd> points;
  if (config.contains("points") && config.at("points").is_array()) {
    for (const json& p : config.at("points")) {
      const auto vals = p.get<std::vector<double>>();
      if (vals.size() != fs.variables.size())
        throw ConfigError("rank point has the wrong number of coordinates");
      points.push_back(Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));
    }
  }
  if (config.contains("sample")) {
    const json& s = config.at("sample");
    const int count = require(s, "count").get<int>();
    double lo = -0.8, hi = 0.8;
    if (s.contains("box")) {
      lo = s.at("box").at(0).get<double>();
      hi = s.at("box").at(1).get<double>();
    }
    std::mt19937_64 rng(settings.seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    for (int i = 0; i < count; ++i) {
      Eigen::VectorXd p(fs.variables.size());
      for (int k = 0; k < p.size(); ++k) p(k) = uni(rng);
      points.push_back(std::move(p));
    }
  }
  if (points.empty()) throw ConfigError("rank task needs 'points' or 'sample'");

  std::ostringstream report;
  report << "task: rank\nfields: " << fs.description << " (" << fs.fields.size() << " fields over ";
  for (std::size_t i = 0; i < fs.variables.size(); ++i)
    report << (i ? "," : "") << fs.variables[i];
  report << ")\n";
  for (const auto& p : points) {
    report << "rank(";
    for (int k = 0; k < p.size(); ++k) report << (k ? "," : "") << format_real(p(k));
    report << ") = " << rank_at(fs.fields, p) << "\n";
  }
  std::cout << report.str();
  if (!settings.out_path.empty()) {
    std::ofstream out(settings.out_path);
    out << report.str();
    for (const auto& line : footer_lines(settings)) out << "# " << line << "\n";
    std::cout << "output: " << settings.out_path << "\n";
  }
  return kOk;
}

// ---- close ------------------------------------------------------------------

int run_close(const json& config, const Settings& settings) {
  const FieldSet fs = parse_fields(config);
  const int max_new = config.contains("max_new") ? config.at("max_new").get<int>() : 8;
  const ClosureResult result = closes_algebra(fs.fields, max_new, settings.seed);

  std::ostringstream report;
  report << "task: close\nfields: " << fs.description << "\n";
  if (!result.closed) {
    report << "closed: false\n";
    report << "reached " << result.basis.size() << " independent fields with budget " << max_new
           << " beyond the " << result.generator_count << " generators\n";
  } else {
    report << "closed: true\n";
    report << "basis_size: " << result.basis.size() << "\n";
    for (std::size_t i = result.generator_count; i < result.basis.size(); ++i)
      report << "X" << (i + 1) << " = " << result.basis[i].to_string() << "\n";
    report << "nonzero_brackets:\n";
    const int r = static_cast<int>(result.basis.size());
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        for (int g = 0; g < r; ++g)
          if (std::abs(result.constants[g](i, j)) > 0.0)
            report << "  [X" << (i + 1) << ",X" << (j + 1) << "] -> "
                   << format_real(result.constants[g](i, j)) << " X" << (g + 1) << "\n";
  }
  report << "decision_margins: dependent<=" << format_real(result.max_dependent_margin)
         << " independent>=" << format_real(result.min_independent_margin) << " (x tolerance)\n";
  std::cout << report.str();
  if (!settings.out_path.empty()) {
    std::ofstream out(settings.out_path);
    out << report.str();
    for (const auto& line : footer_lines(settings)) out << "# " << line << "\n";
    std::cout << "output: " << settings.out_path << "\n";
  }
  return kOk;
}

// ---- verify -----------------------------------------------------------------

int run_verify(const json& config, const Settings& settings) {
  const std::string model = require(config, "model").get<std::string>();
  std::vector<CheckResult> results;
  try {
    results = verify_model(model, settings.seed);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << model << "/" << r.name << ": " << r.detail
              << "\n";
    if (!r.pass) ++failed;
  }
  std::cout << "verify: " << (results.size() - failed) << "/" << results.size() << " checks passed\n";
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

int run_scenario(const Scenario& scenario) {
  try {
    const json config = load_config(scenario.config_path);
    const std::string task =
        scenario.task.empty() ? require(config, "task").get<std::string>() : scenario.task;
    if (config.contains("task") && config.at("task").get<std::string>() != task)
      throw ConfigError("config task '" + config.at("task").get<std::string>() +
                        "' does not match the subcommand '" + task + "'");
    const Settings settings = parse_settings(config, scenario);

    if (task == "simulate") return run_simulate(config, settings);
    if (task == "wn") return run_wn(config, settings);
    if (task == "reduce") return run_reduce(config, settings);
    if (task == "rank") return run_rank(config, settings);
    if (task == "close") return run_close(config, settings);
    if (task == "verify") return run_verify(config, settings);
    throw ConfigError("unknown task '" + task + "'");
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  } catch (const DomainError& err) {
    std::cerr << "domain error: " << err.what() << "\n";
    return kDomainError;
  } catch (const NumericError& err) {
    std::cerr << "numeric error: " << err.what() << "\n";
    return kNumericError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  }
}

}  // namespace lieco::cli
