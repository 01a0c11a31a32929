#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "lieco/algebra.hpp"

namespace lieco {

/// Canonical coordinate chart kinds: exp(sum v_a a_a) versus the ordered
/// product exp(v_1 a_1) ... exp(v_r a_r) along the defining basis.
enum class ChartKind { FirstKind, SecondKind };

std::string chart_name(ChartKind chart);

class GroupModel;

/// Coordinate tuple in a named chart of a concrete group model.
struct GroupElement {
  const GroupModel* model = nullptr;
  ChartKind chart = ChartKind::SecondKind;
  Eigen::VectorXd coords;
};

/// Concrete nilpotent group with hand-coded closed-form charts.
/// All three shipped models are globally coordinatized, so no coordinate
/// bounds are enforced.
class GroupModel {
public:
  static const GroupModel& g4();     ///< simply connected group of rigid_body_extension()
  static const GroupModel& g4bar();  ///< simply connected group of chained_extension()
  static const GroupModel& h3();     ///< Heisenberg group
  static const GroupModel& by_name(const std::string& name);

  const std::string& name() const { return name_; }
  const LieAlgebra& algebra() const { return algebra_; }
  int dim() const { return algebra_.dim(); }

  GroupElement identity(ChartKind chart) const;
  GroupElement element(ChartKind chart, Eigen::VectorXd coords) const;

private:
  GroupModel(std::string name, LieAlgebra algebra);
  std::string name_;
  LieAlgebra algebra_;
};

/// Group product in the common chart of p and q; the closed-form law of the
/// model. Chart or model mismatch is an invalid_argument.
GroupElement compose(const GroupElement& p, const GroupElement& q);

GroupElement inverse(const GroupElement& p);

/// Adjoint representation matrix of p acting on the model's algebra.
Eigen::MatrixXd adjoint(const GroupElement& p);

/// Right-trivialized derivative: the algebra value of R_{g^{-1}*g}(gdot) for
/// a curve passing through p with coordinate velocity pdot.
AlgebraElement right_deriv(const GroupElement& p, const Eigen::VectorXd& pdot);

/// Exact closed-form chart change; round-trips to machine precision.
GroupElement convert(const GroupElement& p, ChartKind target);

/// prod_k exp(scale_k a_{index_k}) assembled by composing one-parameter
/// factors in the second-kind chart.
GroupElement second_kind_product(const GroupModel& model,
                                 const std::vector<std::pair<int, double>>& factors);

}  // namespace lieco
