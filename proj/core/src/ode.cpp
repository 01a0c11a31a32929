#include "lieco/ode.hpp"

#include <algorithm>
#include <cmath>

#include "lieco/errors.hpp"

namespace lieco {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
// 5th-minus-4th-order error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Eigen::VectorXd DenseOdeSolution::eval(double t) const {
  const double slack = 1e-9 * (1.0 + t1_ - t0_);
  if (t < t0_ - slack || t > t1_ + slack) throw DomainError("DenseOdeSolution: t outside the solved span");
  t = std::clamp(t, t0_, t1_);
  if (t >= t1_) return final_state_;
  int lo = 0, hi = static_cast<int>(steps_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (t < steps_[mid].t + steps_[mid].h)
      hi = mid;
    else
      lo = mid + 1;
  }
  const Step& s = steps_[lo];
  const double theta = (t - s.t) / s.h;
  const double theta1 = 1.0 - theta;
  return s.rcont.col(0) +
         theta * (s.rcont.col(1) +
                  theta1 * (s.rcont.col(2) + theta * (s.rcont.col(3) + theta1 * s.rcont.col(4))));
}

Trajectory DenseOdeSolution::sample(const TimeGrid& grid) const {
  Eigen::MatrixXd states(grid.size(), dim_);
  for (int i = 0; i < grid.size(); ++i) states.row(i) = eval(grid[i]).transpose();
  return Trajectory{grid, std::move(states)};
}

DenseOdeSolution solve_ode_dense(const OdeRhs& rhs, const Eigen::VectorXd& x0, double t0, double t1,
                                 double tol, const std::vector<double>& breakpoints) {
  if (!(t1 > t0)) throw std::invalid_argument("solve_ode: t1 must exceed t0");
  if (tol <= 0.0) throw std::invalid_argument("solve_ode: tol must be positive");

  DenseOdeSolution sol;
  sol.t0_ = t0;
  sol.t1_ = t1;
  sol.dim_ = static_cast<int>(x0.size());

  std::vector<double> stops = {t0};
  for (double b : breakpoints)
    if (b > t0 && b < t1) stops.push_back(b);
  stops.push_back(t1);
  std::sort(stops.begin(), stops.end());

  const int n = sol.dim_;
  Eigen::VectorXd y = x0;
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), err(n);

  for (std::size_t seg = 0; seg + 1 < stops.size(); ++seg) {
    double t = stops[seg];
    const double tend = stops[seg + 1];
    // stage times stay strictly inside the segment so a control discontinuity
    // sitting on a segment boundary is always sampled from the correct side
    const double nudge = 1e-13 * std::max(1.0, std::abs(tend - t));
    auto eval = [&](double tq, const Eigen::VectorXd& yq) {
      return rhs(std::clamp(tq, stops[seg] + nudge, tend - nudge), yq);
    };
    k1 = eval(t, y);
    double h = std::min(tend - t, 0.1 * (t1 - t0));
    int rejected_in_a_row = 0;

    while (t < tend) {
      bool final_step = false;
      if (h >= tend - t) {
        h = tend - t;
        final_step = true;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw NumericError("solve_ode: step-size underflow at t = " + std::to_string(t));

      k2 = eval(t + c2 * h, y + h * (a21 * k1));
      k3 = eval(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      k4 = eval(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = eval(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = eval(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = eval(t + h, ynew);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double norm = 0.0;
      for (int i = 0; i < n; ++i) {
        const double sc = tol + tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
        norm += (err(i) / sc) * (err(i) / sc);
      }
      norm = std::sqrt(norm / n);

      if (norm <= 1.0) {
        DenseOdeSolution::Step step;
        step.t = t;
        step.h = h;
        step.rcont.resize(n, 5);
        const Eigen::VectorXd ydiff = ynew - y;
        const Eigen::VectorXd bspl = h * k1 - ydiff;
        step.rcont.col(0) = y;
        step.rcont.col(1) = ydiff;
        step.rcont.col(2) = bspl;
        step.rcont.col(3) = ydiff - h * k7 - bspl;
        step.rcont.col(4) = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        sol.steps_.push_back(std::move(step));

        t = final_step ? tend : t + h;  // land on segment ends exactly
        y = ynew;
        k1 = k7;  // first-same-as-last
        double fac = 0.9 * std::pow(std::max(norm, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, rejected_in_a_row > 0 ? 1.0 : 5.0);
        h *= fac;
        rejected_in_a_row = 0;
      } else {
        ++rejected_in_a_row;
        const double fac = std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
        h *= fac;
      }
    }
  }
  sol.final_state_ = y;
  return sol;
}

Trajectory solve_ode(const OdeRhs& rhs, const Eigen::VectorXd& x0, const TimeGrid& grid, double tol,
                     const std::vector<double>& breakpoints) {
  return solve_ode_dense(rhs, x0, grid.t0(), grid.t1(), tol, breakpoints).sample(grid);
}

}  // namespace lieco
