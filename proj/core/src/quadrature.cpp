#include "lieco/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "lieco/errors.hpp"

namespace lieco {

namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1] (positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double integral;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  const double fc = f(mid);
  kronrod += kWgk[7] * fc;
  gauss += kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  if (err > 0.0) err = std::min(err, std::pow(200.0 * err, 1.5));
  return {kronrod, err};
}

std::vector<std::pair<double, double>> split_at_breakpoints(double t0, double t1,
                                                            const std::vector<double>& breakpoints) {
  std::vector<double> cuts = {t0};
  for (double b : breakpoints)
    if (b > t0 && b < t1) cuts.push_back(b);
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] > cuts[i - 1]) out.emplace_back(cuts[i - 1], cuts[i]);
  return out;
}

}  // namespace

double quad(const std::function<double(double)>& f, double t0, double t1, double tol,
            const std::vector<double>& breakpoints, int max_panels) {
  if (t1 == t0) return 0.0;
  if (t1 < t0) return -quad(f, t1, t0, tol, breakpoints, max_panels);

  struct Item {
    double a, b, integral, error;
    bool operator<(const Item& o) const { return error < o.error; }
  };
  std::priority_queue<Item> heap;
  double total = 0.0, total_err = 0.0;
  int panels = 0;
  for (const auto& [a, b] : split_at_breakpoints(t0, t1, breakpoints)) {
    const auto est = gk15(f, a, b);
    heap.push({a, b, est.integral, est.error});
    total += est.integral;
    total_err += est.error;
    ++panels;
  }
  while (total_err > tol) {
    if (panels >= max_panels || heap.empty()) {
      throw NumericError("quad: panel budget exhausted, error estimate " + std::to_string(total_err),
                         total);
    }
    const Item worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw NumericError("quad: interval collapsed below machine precision", total);
    const auto left = gk15(f, worst.a, mid);
    const auto right = gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.integral, left.error});
    heap.push({mid, worst.b, right.integral, right.error});
    ++panels;
  }
  return total;
}

namespace {

constexpr int kChebPoints = 16;  // first-kind nodes, all interior

// Chebyshev coefficients c_k (plain T_k convention) of the degree N-1
// interpolant through samples at the first-kind points
// x_j = cos(pi (2j+1) / (2N)); panel endpoints are never evaluated, so panels
// may abut control discontinuities.
std::vector<double> chebyshev_coefficients(const std::vector<double>& fj) {
  const int n = kChebPoints;
  std::vector<double> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += fj[j] * std::cos(M_PI * k * (2 * j + 1) / (2.0 * n));
    c[k] = 2.0 * s / n;
  }
  c[0] *= 0.5;
  return c;
}

// Coefficients of the antiderivative of sum c_k T_k on [-1,1], constant term
// chosen arbitrarily (callers anchor at the left endpoint).
std::vector<double> integrate_series(const std::vector<double>& c, double half_length) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> b(n + 2, 0.0);
  auto cc = [&](int k) { return k <= n ? c[k] : 0.0; };
  b[1] = cc(0) - 0.5 * cc(2);
  for (int k = 2; k <= n + 1; ++k) b[k] = (cc(k - 1) - cc(k + 1)) / (2.0 * k);
  for (auto& v : b) v *= half_length;
  return b;
}

double clenshaw(const std::vector<double>& coeffs, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) {
    const double t = 2.0 * x * b1 - b2 + coeffs[k];
    b2 = b1;
    b1 = t;
  }
  return x * b1 - b2 + coeffs[0];
}

}  // namespace

Antiderivative::Antiderivative(const std::function<double(double)>& f, double t0, double t1,
                               double tol, const std::vector<double>& breakpoints)
    : t0_(t0), t1_(t1) {
  if (!(t1 > t0)) throw std::invalid_argument("Antiderivative: t1 must exceed t0");

  struct Pending {
    double a, b;
    int depth;
  };
  std::vector<Pending> stack;
  const auto segments = split_at_breakpoints(t0, t1, breakpoints);
  for (auto it = segments.rbegin(); it != segments.rend(); ++it)
    stack.push_back({it->first, it->second, 0});

  // processed left to right so the running offset can be accumulated
  std::vector<double> fj(kChebPoints);
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    for (int j = 0; j < kChebPoints; ++j)
      fj[j] = f(mid + half * std::cos(M_PI * (2 * j + 1) / (2.0 * kChebPoints)));
    const std::vector<double> c = chebyshev_coefficients(fj);
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const double tail = std::abs(c[kChebPoints - 1]) + std::abs(c[kChebPoints - 2]);
    if (tail > std::max(tol, 1e-15 * scale) && p.depth < 40) {
      stack.push_back({mid, p.b, p.depth + 1});
      stack.push_back({p.a, mid, p.depth + 1});
      continue;
    }
    if (p.depth >= 40)
      throw NumericError("Antiderivative: refinement depth exhausted near t = " + std::to_string(mid));
    Panel panel;
    panel.a = p.a;
    panel.b = p.b;
    panel.integrated = integrate_series(c, half);
    panel.value_at_left = panels_.empty() ? 0.0
                                          : panels_.back().value_at_left +
                                                clenshaw(panels_.back().integrated, 1.0) -
                                                clenshaw(panels_.back().integrated, -1.0);
    panels_.push_back(std::move(panel));
  }
}

double Antiderivative::operator()(double t) const {
  const double slack = 1e-9 * (1.0 + t1_ - t0_);
  if (t < t0_ - slack || t > t1_ + slack)
    throw DomainError("Antiderivative: t outside its domain");
  t = std::clamp(t, t0_, t1_);
  // binary search for the covering panel
  int lo = 0, hi = static_cast<int>(panels_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (t <= panels_[mid].b)
      hi = mid;
    else
      lo = mid + 1;
  }
  const Panel& p = panels_[lo];
  const double x = std::clamp(2.0 * (t - p.a) / (p.b - p.a) - 1.0, -1.0, 1.0);
  return p.value_at_left + clenshaw(p.integrated, x) - clenshaw(p.integrated, -1.0);
}

double Antiderivative::total() const {
  const Panel& p = panels_.back();
  return p.value_at_left + clenshaw(p.integrated, 1.0) - clenshaw(p.integrated, -1.0);
}

}  // namespace lieco
