#include "lieco/weinorman.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>

#include "lieco/errors.hpp"
#include "lieco/ode.hpp"
#include "lieco/quadrature.hpp"

namespace lieco {

WNSystem::WNSystem(LieAlgebra algebra_in, std::vector<int> ordering_in, ControlSignal controls_in)
    : algebra(std::move(algebra_in)), ordering(std::move(ordering_in)), controls(std::move(controls_in)) {
  const int r = algebra.dim();
  if (static_cast<int>(ordering.size()) != r)
    throw std::invalid_argument("WNSystem: ordering size must equal the algebra dimension");
  std::vector<int> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < r; ++i)
    if (sorted[i] != i) throw std::invalid_argument("WNSystem: ordering must be a permutation of 0..dim-1");
  if (controls.channels() != r)
    throw std::invalid_argument("WNSystem: controls must have one channel per basis direction");
}

std::vector<int> WNSystem::natural_ordering(int dim) {
  std::vector<int> v(dim);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Eigen::MatrixXd wn_matrix(const WNSystem& system, const Eigen::VectorXd& v) {
  const int r = system.algebra.dim();
  if (v.size() != r) throw std::invalid_argument("wn_matrix: v has wrong size");
  Eigen::MatrixXd m(r, r);
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Identity(r, r);
  for (int k = 0; k < r; ++k) {
    const int alpha = system.ordering[k];
    m.col(alpha) = prefix.col(alpha);
    if (k + 1 < r) {
      const AlgebraElement basis = AlgebraElement::basis(system.algebra, alpha);
      prefix = prefix * exp_ad(basis, -v(alpha));
    }
  }
  return m;
}

namespace {

Eigen::VectorXd solve_fundamental(const WNSystem& system, double t, const Eigen::VectorXd& v,
                                  const Eigen::VectorXd& b) {
  const Eigen::MatrixXd m = wn_matrix(system, v);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  const double pmax = std::abs(lu.matrixLU()(0, 0));
  const double pmin = std::abs(lu.matrixLU()(m.rows() - 1, m.cols() - 1));
  if (pmin == 0.0 || pmax / pmin > 1e12) {
    std::ostringstream os;
    os << "Wei-Norman matrix singular at t = " << t << ", v = [" << v.transpose() << "]";
    throw NumericError(os.str());
  }
  return lu.solve(b);
}

// Boolean zero-pattern with per-entry sets of the channels whose coordinate
// functions can appear in that entry. Over-approximates: cancellations are
// ignored, which only ever adds dependencies.
struct Pattern {
  int r = 0;
  std::vector<uint8_t> nz;
  std::vector<uint32_t> deps;

  explicit Pattern(int dim) : r(dim), nz(dim * dim, 0), deps(dim * dim, 0) {}

  static Pattern identity(int dim) {
    Pattern p(dim);
    for (int i = 0; i < dim; ++i) p.nz[i * dim + i] = 1;
    return p;
  }

  uint8_t& at(int i, int j) { return nz[i * r + j]; }
  uint8_t get(int i, int j) const { return nz[i * r + j]; }
  uint32_t dep(int i, int j) const { return deps[i * r + j]; }

  Pattern times(const Pattern& o) const {
    Pattern out(r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        uint8_t any = 0;
        uint32_t d = 0;
        for (int k = 0; k < r; ++k)
          if (get(i, k) && o.get(k, j)) {
            any = 1;
            d |= dep(i, k) | o.dep(k, j);
          }
        out.nz[i * r + j] = any;
        out.deps[i * r + j] = d;
      }
    return out;
  }

  void merge(const Pattern& o) {
    for (std::size_t i = 0; i < nz.size(); ++i) {
      nz[i] |= o.nz[i];
      deps[i] |= o.deps[i];
    }
  }

  bool equal_support(const Pattern& o) const {
    for (std::size_t i = 0; i < nz.size(); ++i)
      if ((nz[i] != o.nz[i]) || (deps[i] != o.deps[i])) return false;
    return true;
  }
};

// Pattern of exp(s * ad(a_beta)): identity plus all powers of the ad pattern,
// every non-identity entry tagged with channel beta.
Pattern exp_ad_pattern(const LieAlgebra& algebra, int beta) {
  const int r = algebra.dim();
  Pattern ad(r);
  for (int g = 0; g < r; ++g)
    for (int b = 0; b < r; ++b)
      if (algebra.c(beta, b, g) != 0.0) {
        ad.at(g, b) = 1;
        ad.deps[g * r + b] = 1u << beta;
      }
  Pattern acc = Pattern::identity(r);
  Pattern power = ad;
  for (int k = 0; k < r + 1; ++k) {
    Pattern next = acc;
    next.merge(power);
    if (next.equal_support(acc)) break;
    acc = next;
    power = power.times(ad);
  }
  return acc;
}

}  // namespace

Eigen::VectorXd wn_velocity(const WNSystem& system, double t, const Eigen::VectorXd& v) {
  return solve_fundamental(system, t, v, system.controls.eval(t));
}

QuadraturePlan quadrature_plan(const WNSystem& system) {
  const int r = system.algebra.dim();
  QuadraturePlan plan;

  // structural pattern of M(v), column by column
  Pattern m(r);
  Pattern prefix = Pattern::identity(r);
  for (int k = 0; k < r; ++k) {
    const int alpha = system.ordering[k];
    for (int i = 0; i < r; ++i) {
      m.at(i, alpha) = prefix.get(i, alpha);
      m.deps[i * r + alpha] = prefix.dep(i, alpha);
    }
    if (k + 1 < r) prefix = prefix.times(exp_ad_pattern(system.algebra, alpha));
  }

  // M must be structurally unipotent: clean units on the diagonal
  for (int i = 0; i < r; ++i)
    if (!m.get(i, i) || m.dep(i, i) != 0) return plan;

  // N = off-diagonal part; require pattern nilpotency so that
  // M^{-1} = I + N + N^2 + ... terminates
  Pattern n(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (i != j && m.get(i, j)) {
        n.at(i, j) = 1;
        n.deps[i * r + j] = m.dep(i, j);
      }
  Pattern minv = Pattern::identity(r);
  Pattern power = n;
  for (int k = 1; k <= r; ++k) {
    bool any = false;
    for (uint8_t z : power.nz) any |= (z != 0);
    if (!any) break;
    if (k == r) return plan;  // pattern not nilpotent
    minv.merge(power);
    power = power.times(n);
  }

  // dependencies of each channel's velocity through the active controls
  std::vector<uint32_t> deps(r, 0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (minv.get(i, j) && !system.controls.channel_is_zero(j)) deps[i] |= minv.dep(i, j);

  // Kahn topological sort; prefer factorization order for determinism
  std::vector<int> position(r);
  for (int k = 0; k < r; ++k) position[system.ordering[k]] = k;
  std::vector<uint8_t> placed(r, 0);
  for (int step = 0; step < r; ++step) {
    int pick = -1;
    for (int k = 0; k < r; ++k) {
      const int ch = system.ordering[k];
      if (placed[ch]) continue;
      bool ready = true;
      for (int b = 0; b < r; ++b)
        if ((deps[ch] >> b) & 1u)
          if (b != ch && !placed[b]) ready = false;
      if ((deps[ch] >> ch) & 1u) ready = false;  // self-dependence
      if (ready) {
        pick = ch;
        break;
      }
    }
    if (pick < 0) {
      plan.order.clear();
      return plan;  // cyclic
    }
    placed[pick] = 1;
    ChannelPlan cp;
    cp.channel = pick;
    for (int b = 0; b < r; ++b)
      if ((deps[pick] >> b) & 1u) cp.depends_on.push_back(b);
    plan.order.push_back(std::move(cp));
  }
  plan.triangular = true;
  return plan;
}

std::string QuadraturePlan::to_string() const {
  if (!triangular) return "not triangular";
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ", ";
    out += "v" + std::to_string(order[i].channel + 1);
    if (!order[i].depends_on.empty()) {
      out += "(";
      for (std::size_t k = 0; k < order[i].depends_on.size(); ++k) {
        if (k) out += ",";
        out += "v" + std::to_string(order[i].depends_on[k] + 1);
      }
      out += ")";
    }
  }
  return out;
}

WNTrajectory solve_wn(const WNSystem& system, const TimeGrid& grid, double tol, WnMethod method) {
  const int r = system.algebra.dim();
  if (grid.t0() < system.controls.t0() - 1e-12 || grid.t1() > system.controls.t1() + 1e-12)
    throw std::invalid_argument("solve_wn: grid leaves the control signal's domain");

  const QuadraturePlan plan = quadrature_plan(system);
  const bool use_quadrature =
      method == WnMethod::Quadrature || (method == WnMethod::Auto && plan.triangular);
  if (method == WnMethod::Quadrature && !plan.triangular)
    throw std::invalid_argument("solve_wn: quadrature path requested but the plan is not triangular");

  WNTrajectory out{grid, Eigen::MatrixXd::Zero(grid.size(), r), plan.triangular};
  const std::vector<double> breaks = system.controls.breakpoints();

  if (use_quadrature) {
    const double cheb_tol = std::min(tol, 1e-12);
    std::vector<std::shared_ptr<Antiderivative>> solved(r);
    for (const ChannelPlan& cp : plan.order) {
      auto integrand = [&system, &solved, r](double s) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(r);
        for (int c = 0; c < r; ++c)
          if (solved[c]) v(c) = (*solved[c])(s);
        return solve_fundamental(system, s, v, system.controls.eval(s));
      };
      const int ch = cp.channel;
      solved[ch] = std::make_shared<Antiderivative>(
          [&integrand, ch](double s) { return integrand(s)(ch); }, grid.t0(), grid.t1(), cheb_tol,
          breaks);
    }
    for (int i = 0; i < grid.size(); ++i)
      for (int c = 0; c < r; ++c) out.v(i, c) = (*solved[c])(grid[i]);
    return out;
  }

  auto rhs = [&system](double t, const Eigen::VectorXd& v) { return wn_velocity(system, t, v); };
  const Trajectory traj = solve_ode(rhs, Eigen::VectorXd::Zero(r), grid, tol, breaks);
  out.v = traj.states;
  return out;
}

}  // namespace lieco
