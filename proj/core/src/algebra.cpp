#include "lieco/algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lieco {

namespace {

constexpr double kValidationTol = 1e-12;

// Rank-revealing basis of the column span of m, pivot cutoff relative to the
// largest column norm.
Eigen::MatrixXd column_span_basis(const Eigen::MatrixXd& m, double tol = 1e-10) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), rank);
  return q;
}

}  // namespace

LieAlgebra::LieAlgebra(std::vector<std::string> basis_names, std::vector<Eigen::MatrixXd> tensor) {
  auto impl = std::make_shared<Impl>();
  impl->names = std::move(basis_names);
  impl->tensor = std::move(tensor);
  const int r = static_cast<int>(impl->names.size());
  if (r <= 0) throw std::invalid_argument("LieAlgebra: dimension must be positive");
  if (static_cast<int>(impl->tensor.size()) != r)
    throw std::invalid_argument("LieAlgebra: tensor must have dim components");
  for (const auto& comp : impl->tensor)
    if (comp.rows() != r || comp.cols() != r)
      throw std::invalid_argument("LieAlgebra: tensor components must be dim x dim");
  impl_ = std::move(impl);
  validate();
}

LieAlgebra::LieAlgebra(std::vector<std::string> basis_names, const std::vector<BracketTerm>& brackets) {
  const int r = static_cast<int>(basis_names.size());
  if (r <= 0) throw std::invalid_argument("LieAlgebra: dimension must be positive");
  std::vector<Eigen::MatrixXd> tensor(r, Eigen::MatrixXd::Zero(r, r));
  for (const auto& term : brackets) {
    if (term.a < 0 || term.a >= r || term.b < 0 || term.b >= r || term.c < 0 || term.c >= r)
      throw std::invalid_argument("LieAlgebra: bracket index out of range");
    if (term.a == term.b)
      throw std::invalid_argument("LieAlgebra: bracket [e_a, e_a] must vanish");
    tensor[term.c](term.a, term.b) += term.coeff;
    tensor[term.c](term.b, term.a) -= term.coeff;
  }
  *this = LieAlgebra(std::move(basis_names), std::move(tensor));
}

void LieAlgebra::validate() const {
  const int r = dim();
  for (int g = 0; g < r; ++g) {
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) {
        if (std::abs(c(a, b, g) + c(b, a, g)) > kValidationTol) {
          std::ostringstream os;
          os << "LieAlgebra: antisymmetry violated at c[" << a << "][" << b << "][" << g << "]";
          throw std::invalid_argument(os.str());
        }
      }
    }
  }
  // sum_m ( c[a][b][m] c[m][d][g] + c[b][d][m] c[m][a][g] + c[d][a][m] c[m][b][g] ) = 0
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      for (int d = b + 1; d < r; ++d) {
        for (int g = 0; g < r; ++g) {
          double s = 0.0;
          for (int m = 0; m < r; ++m) {
            s += c(a, b, m) * c(m, d, g);
            s += c(b, d, m) * c(m, a, g);
            s += c(d, a, m) * c(m, b, g);
          }
          if (std::abs(s) > kValidationTol) {
            std::ostringstream os;
            os << "LieAlgebra: Jacobi identity violated for (" << a << "," << b << "," << d
               << ") component " << g << " residual " << s;
            throw std::invalid_argument(os.str());
          }
        }
      }
    }
  }
}

bool LieAlgebra::same_as(const LieAlgebra& other) const {
  if (impl_ == other.impl_) return true;
  if (dim() != other.dim()) return false;
  for (int g = 0; g < dim(); ++g)
    if (component(g) != other.component(g)) return false;
  return true;
}

NilpotencyInfo LieAlgebra::is_nilpotent(int max_depth) const {
  if (max_depth < 1) throw std::invalid_argument("is_nilpotent: max_depth must be >= 1");
  const int cached = impl_->cached_nilpotency_degree.load(std::memory_order_relaxed);
  if (cached > 0 && cached <= max_depth) return {true, cached};

  const int r = dim();
  // L_1 = g, L_{k+1} = [g, L_k]; class k when L_{k+1} = 0 first.
  Eigen::MatrixXd layer = Eigen::MatrixXd::Identity(r, r);
  for (int depth = 1; depth <= max_depth; ++depth) {
    Eigen::MatrixXd next(r, static_cast<int>(r * layer.cols()));
    int col = 0;
    for (int a = 0; a < r; ++a) {
      for (int j = 0; j < layer.cols(); ++j) {
        // w_g = [e_a, y]_g = sum_b c[a][b][g] y_b
        Eigen::VectorXd w(r);
        for (int g = 0; g < r; ++g) w(g) = component(g).row(a) * layer.col(j);
        next.col(col++) = w;
      }
    }
    Eigen::MatrixXd basis = column_span_basis(next.leftCols(col));
    if (basis.cols() == 0) {
      impl_->cached_nilpotency_degree.store(depth, std::memory_order_relaxed);
      return {true, depth};
    }
    layer = basis;
  }
  impl_->cached_nilpotency_degree.store(0, std::memory_order_relaxed);
  return {false, 0};
}

LieAlgebra LieAlgebra::heisenberg() {
  return LieAlgebra({"a1", "a2", "a3"}, std::vector<BracketTerm>{{0, 1, 2, 1.0}});
}

LieAlgebra LieAlgebra::rigid_body_extension() {
  return LieAlgebra({"a1", "a2", "a3", "a4"},
                    std::vector<BracketTerm>{{0, 1, 2, 1.0}, {0, 2, 3, 1.0}, {1, 2, 3, 1.0}});
}

LieAlgebra LieAlgebra::chained_extension() {
  return LieAlgebra({"a1", "a2", "a3", "a4"},
                    std::vector<BracketTerm>{{0, 1, 2, 1.0}, {0, 2, 3, 1.0}});
}

LieAlgebra LieAlgebra::abelian(int dim) {
  std::vector<std::string> names;
  names.reserve(dim);
  for (int i = 1; i <= dim; ++i) names.push_back("a" + std::to_string(i));
  return LieAlgebra(std::move(names), std::vector<BracketTerm>{});
}

LieAlgebra LieAlgebra::by_name(const std::string& name) {
  if (name == "h3") return heisenberg();
  if (name == "g4") return rigid_body_extension();
  if (name == "g4bar") return chained_extension();
  throw std::invalid_argument("unknown algebra name: " + name);
}

AlgebraElement::AlgebraElement(LieAlgebra algebra, Eigen::VectorXd coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != algebra_.dim())
    throw std::invalid_argument("AlgebraElement: coefficient count must equal the algebra dimension");
}

AlgebraElement AlgebraElement::basis(const LieAlgebra& algebra, int index) {
  if (index < 0 || index >= algebra.dim())
    throw std::invalid_argument("AlgebraElement::basis: index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(algebra.dim());
  v(index) = 1.0;
  return AlgebraElement(algebra, std::move(v));
}

AlgebraElement AlgebraElement::zero(const LieAlgebra& algebra) {
  return AlgebraElement(algebra, Eigen::VectorXd::Zero(algebra.dim()));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& rhs) const {
  if (!algebra_.same_as(rhs.algebra_)) throw std::invalid_argument("AlgebraElement: algebra mismatch");
  return AlgebraElement(algebra_, coeffs_ + rhs.coeffs_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& rhs) const {
  if (!algebra_.same_as(rhs.algebra_)) throw std::invalid_argument("AlgebraElement: algebra mismatch");
  return AlgebraElement(algebra_, coeffs_ - rhs.coeffs_);
}

AlgebraElement AlgebraElement::operator*(double s) const {
  return AlgebraElement(algebra_, coeffs_ * s);
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  if (!x.algebra().same_as(y.algebra()))
    throw std::invalid_argument("bracket: elements belong to different algebras");
  const int r = x.algebra().dim();
  Eigen::VectorXd z(r);
  for (int g = 0; g < r; ++g)
    z(g) = x.coeffs().transpose() * x.algebra().component(g) * y.coeffs();
  return AlgebraElement(x.algebra(), std::move(z));
}

Eigen::MatrixXd ad_matrix(const AlgebraElement& x) {
  const int r = x.algebra().dim();
  Eigen::MatrixXd m(r, r);
  // m(g, b) = sum_a x_a c[a][b][g]
  for (int g = 0; g < r; ++g)
    m.row(g) = x.coeffs().transpose() * x.algebra().component(g);
  return m;
}

Eigen::MatrixXd exp_ad(const AlgebraElement& x, double scale) {
  const int r = x.algebra().dim();
  const Eigen::MatrixXd ad = scale * ad_matrix(x);
  const NilpotencyInfo nil = x.algebra().is_nilpotent();
  if (nil.nilpotent) {
    // ad(x)^k = 0 for k >= nilpotency class: the series terminates exactly.
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(r, r);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(r, r);
    for (int k = 1; k < nil.degree; ++k) {
      term = (term * ad) / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return expm(ad);
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& a, double tol) {
  const int n = static_cast<int>(a.rows());
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  Eigen::MatrixXd scaled = a;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    scaled /= std::pow(2.0, squarings);
  }
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    const double tnorm = term.cwiseAbs().maxCoeff();
    const double snorm = sum.cwiseAbs().maxCoeff();
    if (tnorm <= tol * snorm) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace lieco
