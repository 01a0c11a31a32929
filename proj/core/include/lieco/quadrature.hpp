#pragma once

#include <functional>
#include <vector>

namespace lieco {

/// Adaptive Gauss-Kronrod (G7, K15) quadrature of f over [t0, t1] with
/// absolute error <= tol. Panels are pre-split at the supplied breakpoints so
/// no panel straddles a declared discontinuity. Throws NumericError carrying
/// the best estimate when the panel budget is exhausted.
double quad(const std::function<double(double)>& f, double t0, double t1, double tol = 1e-12,
            const std::vector<double>& breakpoints = {}, int max_panels = 20000);

/// Antiderivative t -> integral of f from t0 to t, built once by adaptive
/// piecewise Chebyshev interpolation of the integrand and exact integration
/// of the series; evaluable anywhere in [t0, t1].
///
/// This is the workhorse of the iterated-quadrature solution path, where
/// each solved channel must be evaluable at arbitrary interior times.
class Antiderivative {
public:
  Antiderivative(const std::function<double(double)>& f, double t0, double t1, double tol = 1e-12,
                 const std::vector<double>& breakpoints = {});

  double operator()(double t) const;
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double total() const;

private:
  struct Panel {
    double a, b;
    std::vector<double> integrated;  ///< Chebyshev coefficients of the antiderivative on [a,b]
    double value_at_left;            ///< accumulated integral at t = a
  };
  std::vector<Panel> panels_;
  double t0_, t1_;
};

}  // namespace lieco
