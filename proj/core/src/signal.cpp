#include "lieco/signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lieco/errors.hpp"

namespace lieco {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double t0, double t1, int node_count) {
  if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: t1 must exceed t0");
  if (node_count < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
  std::vector<double> nodes(node_count);
  for (int i = 0; i < node_count; ++i)
    nodes[i] = t0 + (t1 - t0) * static_cast<double>(i) / (node_count - 1);
  nodes.front() = t0;
  nodes.back() = t1;
  return TimeGrid(std::move(nodes));
}

namespace {

const std::string kTimeVar[] = {"t"};

void validate_channel(const Channel& ch) {
  if (const auto* pw = std::get_if<PiecewiseConstantChannel>(&ch)) {
    if (pw->values.size() != pw->breakpoints.size() + 1)
      throw std::invalid_argument("ControlSignal: piecewise channel needs breakpoints+1 values");
    for (std::size_t i = 1; i < pw->breakpoints.size(); ++i)
      if (!(pw->breakpoints[i] > pw->breakpoints[i - 1]))
        throw std::invalid_argument("ControlSignal: breakpoints must be strictly increasing");
  } else if (const auto* sm = std::get_if<SampledChannel>(&ch)) {
    if (sm->times.size() != sm->values.size() || sm->times.size() < 2)
      throw std::invalid_argument("ControlSignal: sampled channel needs matching times/values, >= 2");
    for (std::size_t i = 1; i < sm->times.size(); ++i)
      if (!(sm->times[i] > sm->times[i - 1]))
        throw std::invalid_argument("ControlSignal: sample times must be strictly increasing");
  }
}

}  // namespace

ControlSignal::ControlSignal(std::vector<Channel> channels, double t0, double t1) : t0_(t0), t1_(t1) {
  if (!(t1 > t0)) throw std::invalid_argument("ControlSignal: t1 must exceed t0");
  if (channels.empty()) throw std::invalid_argument("ControlSignal: need at least one channel");
  for (const auto& ch : channels) validate_channel(ch);
  channels_ = std::make_shared<const std::vector<Channel>>(std::move(channels));
}

ControlSignal ControlSignal::constants(const std::vector<double>& values, double t0, double t1) {
  std::vector<Channel> chs;
  chs.reserve(values.size());
  for (double v : values) chs.push_back(ConstantChannel{v});
  return ControlSignal(std::move(chs), t0, t1);
}

ControlSignal ControlSignal::closed_form(const std::vector<std::string>& exprs, double t0, double t1) {
  std::vector<Channel> chs;
  chs.reserve(exprs.size());
  for (const auto& text : exprs) chs.push_back(ClosedFormChannel{parse_expr(text, {"t"})});
  return ControlSignal(std::move(chs), t0, t1);
}

ControlSignal ControlSignal::padded_to(int count) const {
  if (count < channels()) throw std::invalid_argument("ControlSignal::padded_to: cannot shrink");
  std::vector<Channel> chs = *channels_;
  while (static_cast<int>(chs.size()) < count) chs.push_back(ConstantChannel{0.0});
  return ControlSignal(std::move(chs), t0_, t1_);
}

double ControlSignal::eval_channel(int i, double t) const {
  const double slack = 1e-9 * (1.0 + std::abs(t1_ - t0_));
  if (t < t0_ - slack || t > t1_ + slack)
    throw DomainError("ControlSignal: t outside [" + std::to_string(t0_) + ", " + std::to_string(t1_) + "]");
  const Channel& ch = channels_->at(i);
  if (const auto* c = std::get_if<ConstantChannel>(&ch)) return c->value;
  if (const auto* pw = std::get_if<PiecewiseConstantChannel>(&ch)) {
    // piece k covers [break_{k-1}, break_k)
    const auto it = std::upper_bound(pw->breakpoints.begin(), pw->breakpoints.end(), t);
    return pw->values[static_cast<std::size_t>(it - pw->breakpoints.begin())];
  }
  if (const auto* cf = std::get_if<ClosedFormChannel>(&ch)) {
    const double vals[] = {t};
    return cf->expression.eval(kTimeVar, vals);
  }
  const auto& sm = std::get<SampledChannel>(ch);
  if (t <= sm.times.front()) return sm.values.front();
  if (t >= sm.times.back()) return sm.values.back();
  const auto it = std::upper_bound(sm.times.begin(), sm.times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - sm.times.begin());
  const double w = (t - sm.times[k - 1]) / (sm.times[k] - sm.times[k - 1]);
  return sm.values[k - 1] + w * (sm.values[k] - sm.values[k - 1]);
}

Eigen::VectorXd ControlSignal::eval(double t) const {
  Eigen::VectorXd out(channels());
  for (int i = 0; i < channels(); ++i) out(i) = eval_channel(i, t);
  return out;
}

bool ControlSignal::channel_is_zero(int i) const {
  const Channel& ch = channels_->at(i);
  if (const auto* c = std::get_if<ConstantChannel>(&ch)) return c->value == 0.0;
  if (const auto* cf = std::get_if<ClosedFormChannel>(&ch)) return cf->expression.is_zero();
  return false;
}

std::vector<double> ControlSignal::breakpoints() const {
  std::set<double> pts;
  for (const auto& ch : *channels_) {
    if (const auto* pw = std::get_if<PiecewiseConstantChannel>(&ch)) {
      for (double b : pw->breakpoints)
        if (b > t0_ && b < t1_) pts.insert(b);
    } else if (const auto* sm = std::get_if<SampledChannel>(&ch)) {
      for (double b : sm->times)
        if (b > t0_ && b < t1_) pts.insert(b);
    }
  }
  return {pts.begin(), pts.end()};
}

}  // namespace lieco
