#include "lieco/vfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lieco/errors.hpp"

namespace lieco {

VectorFieldExpr::VectorFieldExpr(std::vector<std::string> variables, std::vector<Expr> components)
    : vars_(std::move(variables)), comps_(std::move(components)) {
  if (vars_.size() != comps_.size())
    throw std::invalid_argument("VectorFieldExpr: component count must equal variable count");
  if (vars_.empty()) throw std::invalid_argument("VectorFieldExpr: empty variable list");
}

Eigen::VectorXd VectorFieldExpr::eval(const Eigen::VectorXd& point) const {
  if (point.size() != dim()) throw std::invalid_argument("VectorFieldExpr::eval: wrong point size");
  Eigen::VectorXd out(dim());
  std::span<const double> values(point.data(), static_cast<std::size_t>(point.size()));
  for (int i = 0; i < dim(); ++i) out(i) = comps_[i].eval(vars_, values);
  return out;
}

std::string VectorFieldExpr::to_string() const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    if (i) out += "; ";
    out += comps_[i].to_string();
  }
  return out;
}

VectorFieldExpr lie_bracket(const VectorFieldExpr& x, const VectorFieldExpr& y) {
  if (x.variables() != y.variables())
    throw std::invalid_argument("lie_bracket: fields use different variable lists");
  const auto& vars = x.variables();
  std::vector<Expr> comps;
  comps.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Expr acc = Expr::constant(0.0);
    for (std::size_t j = 0; j < vars.size(); ++j) {
      acc = acc + x.components()[j] * y.components()[i].diff(vars[j]);
      acc = acc - y.components()[j] * x.components()[i].diff(vars[j]);
    }
    comps.push_back(acc);
  }
  return VectorFieldExpr(vars, std::move(comps));
}

std::vector<Eigen::VectorXd> probe_points(const std::vector<std::string>& variables, int count,
                                          std::uint64_t seed,
                                          const std::vector<VectorFieldExpr>& guards) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-0.8, 0.8);
  const int n = static_cast<int>(variables.size());
  std::vector<Eigen::VectorXd> points;
  points.reserve(count);
  int attempts = 0;
  while (static_cast<int>(points.size()) < count) {
    if (++attempts > 100 * count)
      throw NumericError("probe_points: could not find enough in-domain points");
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = uni(rng) + 0.01414213562 * (i + 1);
    bool ok = true;
    for (const auto& g : guards) {
      try {
        g.eval(p);
      } catch (const DomainError&) {
        ok = false;
        break;
      }
    }
    if (ok) points.push_back(std::move(p));
  }
  return points;
}

bool fields_match(const VectorFieldExpr& a, const VectorFieldExpr& b,
                  const std::vector<Eigen::VectorXd>& points, double tol) {
  for (const auto& p : points) {
    const Eigen::VectorXd va = a.eval(p);
    const Eigen::VectorXd vb = b.eval(p);
    const double scale = std::max({1.0, va.cwiseAbs().maxCoeff(), vb.cwiseAbs().maxCoeff()});
    if ((va - vb).cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

namespace {

// Stacked evaluations of one field at all probe points.
Eigen::VectorXd stack_evaluations(const VectorFieldExpr& f, const std::vector<Eigen::VectorXd>& pts) {
  const int n = f.dim();
  Eigen::VectorXd out(static_cast<int>(pts.size()) * n);
  for (std::size_t k = 0; k < pts.size(); ++k) out.segment(static_cast<int>(k) * n, n) = f.eval(pts[k]);
  return out;
}

}  // namespace

ClosureResult closes_algebra(const std::vector<VectorFieldExpr>& fields, int max_new,
                             std::uint64_t seed, int points, double tol) {
  if (fields.empty()) throw std::invalid_argument("closes_algebra: no fields");
  const auto& vars = fields[0].variables();
  for (const auto& f : fields)
    if (f.variables() != vars)
      throw std::invalid_argument("closes_algebra: fields use different variable lists");

  ClosureResult result;
  result.generator_count = static_cast<int>(fields.size());
  result.basis = fields;
  result.min_independent_margin = std::numeric_limits<double>::infinity();
  result.max_dependent_margin = 0.0;

  const auto pts = probe_points(vars, points, seed, fields);

  std::vector<Eigen::VectorXd> columns;
  for (const auto& f : result.basis) columns.push_back(stack_evaluations(f, pts));

  // coefficients of each processed bracket over the basis as of its decision
  struct PairEntry {
    int i, j;
    Eigen::VectorXd coeffs;  // padded later
  };
  std::vector<PairEntry> dependent_pairs;

  std::size_t pi = 0, pj = 1;  // next pair (pi < pj) to process
  auto advance = [&]() {
    if (++pi == pj) {
      pi = 0;
      ++pj;
    }
  };

  while (pj < result.basis.size()) {
    VectorFieldExpr br = lie_bracket(result.basis[pi], result.basis[pj]);
    Eigen::VectorXd b = stack_evaluations(br, pts);

    Eigen::MatrixXd a(b.size(), static_cast<int>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) a.col(static_cast<int>(k)) = columns[k];
    Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    const double residual = (a * x - b).cwiseAbs().maxCoeff() / scale;
    const double margin = residual / tol;
    // coefficients below the decision resolution are zeros
    for (int k = 0; k < x.size(); ++k)
      if (std::abs(x(k)) < tol * scale) x(k) = 0.0;

    if (residual <= tol) {
      result.max_dependent_margin = std::max(result.max_dependent_margin, margin);
      dependent_pairs.push_back({static_cast<int>(pi), static_cast<int>(pj), x});
      advance();
      continue;
    }
    result.min_independent_margin = std::min(result.min_independent_margin, margin);
    if (static_cast<int>(result.basis.size()) - result.generator_count >= max_new) {
      result.closed = false;
      return result;
    }
    // new basis direction; the bracket equals the new element exactly
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<int>(columns.size()) + 1);
    coeffs(coeffs.size() - 1) = 1.0;
    dependent_pairs.push_back({static_cast<int>(pi), static_cast<int>(pj), coeffs});
    result.basis.push_back(br);
    columns.push_back(std::move(b));
    advance();
  }

  const int r = static_cast<int>(result.basis.size());
  result.constants.assign(r, Eigen::MatrixXd::Zero(r, r));
  for (const auto& entry : dependent_pairs) {
    for (int g = 0; g < entry.coeffs.size(); ++g) {
      result.constants[g](entry.i, entry.j) = entry.coeffs(g);
      result.constants[g](entry.j, entry.i) = -entry.coeffs(g);
    }
  }
  result.closed = true;

  std::vector<std::string> names;
  for (int i = 0; i < r; ++i) names.push_back("X" + std::to_string(i + 1));
  result.algebra = LieAlgebra(std::move(names), result.constants);
  return result;
}

int rank_at(const std::vector<VectorFieldExpr>& fields, const Eigen::VectorXd& point) {
  if (fields.empty()) return 0;
  const int n = fields[0].dim();
  Eigen::MatrixXd m(static_cast<int>(fields.size()), n);
  for (std::size_t k = 0; k < fields.size(); ++k) m.row(static_cast<int>(k)) = fields[k].eval(point);

  // row reduction with partial pivoting; count pivots above 1e-10 of the
  // largest pivot seen
  std::vector<double> pivots;
  int row = 0;
  for (int col = 0; col < n && row < m.rows(); ++col) {
    int best = -1;
    double best_mag = 0.0;
    for (int i = row; i < m.rows(); ++i) {
      const double mag = std::abs(m(i, col));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best < 0 || best_mag == 0.0) continue;
    m.row(best).swap(m.row(row));
    for (int i = row + 1; i < m.rows(); ++i) m.row(i) -= (m(i, col) / m(row, col)) * m.row(row);
    pivots.push_back(best_mag);
    ++row;
  }
  if (pivots.empty()) return 0;
  const double largest = *std::max_element(pivots.begin(), pivots.end());
  int rank = 0;
  for (double p : pivots)
    if (p > 1e-10 * largest) ++rank;
  return rank;
}

}  // namespace lieco
