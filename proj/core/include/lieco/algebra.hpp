#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <memory>
#include <string>
#include <vector>

namespace lieco {

/// One defining bracket [basis[a], basis[b]] containing coeff * basis[c].
/// Indices are zero-based. The antisymmetric counterpart is filled in
/// automatically when an algebra is built from a bracket list.
struct BracketTerm {
  int a = 0;
  int b = 0;
  int c = 0;
  double coeff = 0.0;
};

struct NilpotencyInfo {
  bool nilpotent = false;
  int degree = 0;  ///< nilpotency class when nilpotent, else 0
};

/// Finite-dimensional real Lie algebra given by structure constants
/// c[a][b][g], meaning [e_a, e_b] = sum_g c[a][b][g] e_g.
///
/// Immutable after construction; cheap to copy (shared representation).
/// The constructor validates antisymmetry and the Jacobi identity to 1e-12
/// and throws std::invalid_argument on violation.
class LieAlgebra {
public:
  /// Build from the dense constant tensor, tensor[g](a, b) = c[a][b][g].
  LieAlgebra(std::vector<std::string> basis_names, std::vector<Eigen::MatrixXd> tensor);

  /// Build from a sparse list of defining brackets with a > b pairs filled
  /// in by antisymmetry. Entries with a == b are rejected.
  LieAlgebra(std::vector<std::string> basis_names, const std::vector<BracketTerm>& brackets);

  int dim() const { return static_cast<int>(impl_->names.size()); }
  const std::vector<std::string>& basis_names() const { return impl_->names; }

  /// c[a][b][g]
  double c(int a, int b, int g) const { return impl_->tensor[g](a, b); }
  /// Matrix C_g with C_g(a, b) = c[a][b][g].
  const Eigen::MatrixXd& component(int g) const { return impl_->tensor[g]; }

  bool same_as(const LieAlgebra& other) const;

  /// Lower central series from the structure constants; true with the
  /// nilpotency class when the series vanishes within max_depth steps.
  NilpotencyInfo is_nilpotent(int max_depth = 16) const;

  // shipped algebras
  static LieAlgebra heisenberg();                     ///< h(3): [a1,a2]=a3
  static LieAlgebra rigid_body_extension();           ///< g4:  [a1,a2]=a3, [a1,a3]=a4, [a2,a3]=a4
  static LieAlgebra chained_extension();              ///< g4bar: [a1,a2]=a3, [a1,a3]=a4
  static LieAlgebra abelian(int dim);

  /// Lookup by the names used in configs: "h3", "g4", "g4bar".
  static LieAlgebra by_name(const std::string& name);

private:
  struct Impl {
    std::vector<std::string> names;
    std::vector<Eigen::MatrixXd> tensor;
    // -1 unknown, 0 not nilpotent, otherwise the class; atomic so shared
    // algebras stay safe under concurrent queries
    mutable std::atomic<int> cached_nilpotency_degree{-1};
  };
  std::shared_ptr<const Impl> impl_;

  void validate() const;
  friend class AlgebraElement;
  friend Eigen::MatrixXd ad_matrix(const class AlgebraElement& x);
};

/// Element of a LieAlgebra: coordinates in the defining basis.
class AlgebraElement {
public:
  AlgebraElement(LieAlgebra algebra, Eigen::VectorXd coeffs);

  /// Basis element e_index.
  static AlgebraElement basis(const LieAlgebra& algebra, int index);
  static AlgebraElement zero(const LieAlgebra& algebra);

  const LieAlgebra& algebra() const { return algebra_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](int i) const { return coeffs_(i); }

  AlgebraElement operator+(const AlgebraElement& rhs) const;
  AlgebraElement operator-(const AlgebraElement& rhs) const;
  AlgebraElement operator*(double s) const;
  friend AlgebraElement operator*(double s, const AlgebraElement& x) { return x * s; }

private:
  LieAlgebra algebra_;
  Eigen::VectorXd coeffs_;
};

/// [x, y] from the structure constants; bilinear and antisymmetric.
/// Throws std::invalid_argument when x and y live in different algebras.
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// Matrix of ad(x): ad_matrix(x) * y.coeffs() == bracket(x, y).coeffs().
Eigen::MatrixXd ad_matrix(const AlgebraElement& x);

/// Matrix exponential of scale * ad(x). Terminating power series when the
/// algebra is nilpotent, scaled-and-squared series otherwise.
Eigen::MatrixXd exp_ad(const AlgebraElement& x, double scale);

/// Dense matrix exponential by scaling and squaring with the power series
/// truncated at relative tolerance tol.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a, double tol = 1e-14);

}  // namespace lieco
