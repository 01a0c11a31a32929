#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lieco/expr.hpp"

namespace lieco {

/// Strictly increasing time nodes including both endpoints.
class TimeGrid {
public:
  TimeGrid(std::vector<double> nodes);
  static TimeGrid uniform(double t0, double t1, int node_count);

  double t0() const { return nodes_.front(); }
  double t1() const { return nodes_.back(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  double operator[](int i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

private:
  std::vector<double> nodes_;
};

/// States sampled on a time grid, one row per node.
struct Trajectory {
  TimeGrid grid;
  Eigen::MatrixXd states;  ///< grid.size() x dim

  int dim() const { return static_cast<int>(states.cols()); }
};

/// One control channel.
struct ConstantChannel {
  double value = 0.0;
};
struct PiecewiseConstantChannel {
  std::vector<double> breakpoints;  ///< strictly increasing
  std::vector<double> values;       ///< breakpoints.size() + 1 entries
};
struct ClosedFormChannel {
  Expr expression;  ///< over the single variable t
};
struct SampledChannel {
  std::vector<double> times;  ///< strictly increasing
  std::vector<double> values;
};
using Channel = std::variant<ConstantChannel, PiecewiseConstantChannel, ClosedFormChannel, SampledChannel>;

/// Vector of control functions b(t) on a declared domain [t0, t1].
/// Immutable; evaluation outside the domain throws DomainError.
class ControlSignal {
public:
  ControlSignal(std::vector<Channel> channels, double t0, double t1);

  static ControlSignal constants(const std::vector<double>& values, double t0, double t1);
  /// Channels from expressions in the field grammar over the variable t.
  static ControlSignal closed_form(const std::vector<std::string>& exprs, double t0, double t1);

  /// Same channels followed by identically zero ones, total `count`.
  ControlSignal padded_to(int count) const;

  int channels() const { return static_cast<int>(channels_->size()); }
  double t0() const { return t0_; }
  double t1() const { return t1_; }

  Eigen::VectorXd eval(double t) const;
  double eval_channel(int i, double t) const;

  /// True when the channel is the constant zero.
  bool channel_is_zero(int i) const;

  /// Sorted union of interior discontinuity and kink locations; integrators
  /// must not step across these.
  std::vector<double> breakpoints() const;

private:
  std::shared_ptr<const std::vector<Channel>> channels_;
  double t0_, t1_;
};

}  // namespace lieco
