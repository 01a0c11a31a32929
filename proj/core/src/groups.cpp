#include "lieco/groups.hpp"

#include <stdexcept>

namespace lieco {

namespace {

enum class ModelKind { G4, G4Bar, H3 };

ModelKind kind_of(const GroupModel& m) {
  if (&m == &GroupModel::g4()) return ModelKind::G4;
  if (&m == &GroupModel::g4bar()) return ModelKind::G4Bar;
  return ModelKind::H3;
}

void require_same_chart(const GroupElement& p, const GroupElement& q, const char* op) {
  if (p.model != q.model) throw std::invalid_argument(std::string(op) + ": model mismatch");
  if (p.chart != q.chart) throw std::invalid_argument(std::string(op) + ": chart mismatch");
}

}  // namespace

std::string chart_name(ChartKind chart) {
  return chart == ChartKind::FirstKind ? "first" : "second";
}

GroupModel::GroupModel(std::string name, LieAlgebra algebra)
    : name_(std::move(name)), algebra_(std::move(algebra)) {}

const GroupModel& GroupModel::g4() {
  static const GroupModel m("g4", LieAlgebra::rigid_body_extension());
  return m;
}

const GroupModel& GroupModel::g4bar() {
  static const GroupModel m("g4bar", LieAlgebra::chained_extension());
  return m;
}

const GroupModel& GroupModel::h3() {
  static const GroupModel m("h3", LieAlgebra::heisenberg());
  return m;
}

const GroupModel& GroupModel::by_name(const std::string& name) {
  if (name == "g4") return g4();
  if (name == "g4bar") return g4bar();
  if (name == "h3") return h3();
  throw std::invalid_argument("unknown group model: " + name);
}

GroupElement GroupModel::identity(ChartKind chart) const {
  return GroupElement{this, chart, Eigen::VectorXd::Zero(dim())};
}

GroupElement GroupModel::element(ChartKind chart, Eigen::VectorXd coords) const {
  if (coords.size() != dim()) throw std::invalid_argument("GroupModel::element: wrong coordinate count");
  return GroupElement{this, chart, std::move(coords)};
}

GroupElement compose(const GroupElement& p, const GroupElement& q) {
  require_same_chart(p, q, "compose");
  const ModelKind mk = kind_of(*p.model);
  const Eigen::VectorXd& u = p.coords;
  const Eigen::VectorXd& w = q.coords;
  Eigen::VectorXd out(u.size());

  if (p.chart == ChartKind::SecondKind) {
    // shared prefix (a+a', b+b', c+c'-b a')
    out(0) = u(0) + w(0);
    out(1) = u(1) + w(1);
    out(2) = u(2) + w(2) - u(1) * w(0);
    switch (mk) {
      case ModelKind::H3:
        break;
      case ModelKind::G4:
        out(3) = u(3) + w(3) - u(2) * (w(0) + w(1)) +
                 u(1) * w(0) * (u(1) + 2.0 * w(1) + w(0)) / 2.0;
        break;
      case ModelKind::G4Bar:
        out(3) = u(3) + w(3) - u(2) * w(0) + u(1) * w(0) * w(0) / 2.0;
        break;
    }
    return GroupElement{p.model, p.chart, std::move(out)};
  }

  // first kind: shared Heisenberg prefix
  const double cross = u(0) * w(1) - u(1) * w(0);  // a b' - b a'
  out(0) = u(0) + w(0);
  out(1) = u(1) + w(1);
  out(2) = u(2) + w(2) + cross / 2.0;
  switch (mk) {
    case ModelKind::H3:
      break;
    case ModelKind::G4:
      out(3) = u(3) + w(3) + (u(0) * w(2) - u(2) * w(0)) / 2.0 +
               (u(1) * w(2) - u(2) * w(1)) / 2.0 +
               cross * (u(0) - w(0) + u(1) - w(1)) / 12.0;
      break;
    case ModelKind::G4Bar:
      out(3) = u(3) + w(3) + (u(0) * w(2) - u(2) * w(0)) / 2.0 + cross * (u(0) - w(0)) / 12.0;
      break;
  }
  return GroupElement{p.model, p.chart, std::move(out)};
}

GroupElement inverse(const GroupElement& p) {
  if (p.chart == ChartKind::FirstKind)
    return GroupElement{p.model, p.chart, -p.coords};

  const ModelKind mk = kind_of(*p.model);
  const Eigen::VectorXd& u = p.coords;
  Eigen::VectorXd out(u.size());
  out(0) = -u(0);
  out(1) = -u(1);
  out(2) = -u(2) - u(0) * u(1);
  switch (mk) {
    case ModelKind::H3:
      break;
    case ModelKind::G4:
      out(3) = -u(3) - u(2) * (u(0) + u(1)) - u(0) * u(1) * (u(0) + u(1)) / 2.0;
      break;
    case ModelKind::G4Bar:
      out(3) = -u(3) - u(2) * u(0) - u(0) * u(0) * u(1) / 2.0;
      break;
  }
  return GroupElement{p.model, p.chart, std::move(out)};
}

Eigen::MatrixXd adjoint(const GroupElement& p) {
  const ModelKind mk = kind_of(*p.model);
  const LieAlgebra& algebra = p.model->algebra();
  const Eigen::VectorXd& u = p.coords;

  if (p.chart == ChartKind::FirstKind && mk == ModelKind::G4) {
    // closed form for the rigid-body group in first-kind coordinates
    const double a = u(0), b = u(1), c = u(2);
    Eigen::MatrixXd ad = Eigen::MatrixXd::Identity(4, 4);
    ad(2, 0) = -b;
    ad(2, 1) = a;
    ad(3, 0) = -b * (a + b) / 2.0 - c;
    ad(3, 1) = a * (a + b) / 2.0 - c;
    ad(3, 2) = a + b;
    return ad;
  }
  if (p.chart == ChartKind::FirstKind)
    return exp_ad(AlgebraElement(algebra, u), 1.0);

  // second kind: Ad(prod exp(u_k a_k)) = prod exp_ad(a_k, u_k)
  Eigen::MatrixXd ad = Eigen::MatrixXd::Identity(algebra.dim(), algebra.dim());
  for (int k = 0; k < algebra.dim(); ++k)
    ad = ad * exp_ad(AlgebraElement::basis(algebra, k), u(k));
  return ad;
}

AlgebraElement right_deriv(const GroupElement& p, const Eigen::VectorXd& pdot) {
  const LieAlgebra& algebra = p.model->algebra();
  if (pdot.size() != algebra.dim())
    throw std::invalid_argument("right_deriv: velocity has wrong dimension");
  const Eigen::VectorXd& u = p.coords;
  Eigen::VectorXd xi(algebra.dim());

  if (p.chart == ChartKind::SecondKind) {
    // sum_k udot_k (prod_{m<k} exp_ad(a_m, u_m)) e_k
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Identity(algebra.dim(), algebra.dim());
    xi.setZero();
    for (int k = 0; k < algebra.dim(); ++k) {
      xi += pdot(k) * prefix.col(k);
      if (k + 1 < algebra.dim())
        prefix = prefix * exp_ad(AlgebraElement::basis(algebra, k), u(k));
    }
    return AlgebraElement(algebra, std::move(xi));
  }

  const ModelKind mk = kind_of(*p.model);
  const double a = u(0), b = u(1);
  xi(0) = pdot(0);
  xi(1) = pdot(1);
  xi(2) = pdot(2) - (b * pdot(0) - a * pdot(1)) / 2.0;
  switch (mk) {
    case ModelKind::H3:
      break;
    case ModelKind::G4: {
      const double c = u(2);
      xi(3) = pdot(3) - (a * b + b * b + 3.0 * c) * pdot(0) / 6.0 +
              (a * a + a * b - 3.0 * c) * pdot(1) / 6.0 + (a + b) * pdot(2) / 2.0;
      break;
    }
    case ModelKind::G4Bar: {
      const double c = u(2);
      xi(3) = pdot(3) + (a * pdot(2) - c * pdot(0)) / 2.0 + a * (a * pdot(1) - b * pdot(0)) / 6.0;
      break;
    }
  }
  return AlgebraElement(algebra, std::move(xi));
}

GroupElement convert(const GroupElement& p, ChartKind target) {
  if (p.chart == target) return p;
  const ModelKind mk = kind_of(*p.model);
  const Eigen::VectorXd& u = p.coords;
  Eigen::VectorXd out = u;

  if (p.chart == ChartKind::SecondKind) {
    // exp(a a1) exp(b a2) exp(c a3) [exp(d a4)] in first-kind coordinates
    const double a = u(0), b = u(1), c = u(2);
    out(2) = c + a * b / 2.0;
    switch (mk) {
      case ModelKind::H3:
        break;
      case ModelKind::G4:
        out(3) = u(3) + (a + b) * c / 2.0 + a * b * (a - b) / 12.0;
        break;
      case ModelKind::G4Bar:
        out(3) = u(3) + a * c / 2.0 + a * a * b / 12.0;
        break;
    }
    return GroupElement{p.model, ChartKind::FirstKind, std::move(out)};
  }

  const double a = u(0), b = u(1);
  const double c = u(2) - a * b / 2.0;  // second-kind third coordinate
  out(2) = c;
  switch (mk) {
    case ModelKind::H3:
      break;
    case ModelKind::G4:
      out(3) = u(3) - (a + b) * c / 2.0 - a * b * (a - b) / 12.0;
      break;
    case ModelKind::G4Bar:
      out(3) = u(3) - a * c / 2.0 - a * a * b / 12.0;
      break;
  }
  return GroupElement{p.model, ChartKind::SecondKind, std::move(out)};
}

GroupElement second_kind_product(const GroupModel& model,
                                 const std::vector<std::pair<int, double>>& factors) {
  GroupElement acc = model.identity(ChartKind::SecondKind);
  for (const auto& [index, scale] : factors) {
    Eigen::VectorXd coords = Eigen::VectorXd::Zero(model.dim());
    coords(index) = scale;
    acc = compose(acc, model.element(ChartKind::SecondKind, std::move(coords)));
  }
  return acc;
}

}  // namespace lieco
