#pragma once

#include <string>
#include <vector>

#include "symact/common.hpp"

namespace symact {

/// Finite-dimensional real Lie algebra given by structure constants
/// c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k.  Elements and covectors
/// are coefficient vectors in the chosen basis; all pairings are the
/// coefficient dot product.
///
/// Construction validates antisymmetry and the Jacobi identity to 1e-12 and
/// rejects anything worse.
class LieAlgebra {
public:
  /// tensor[i][j][k] is the e_k coefficient of [e_i, e_j], row-major.
  LieAlgebra(int dim, std::vector<double> tensor);

  int dim() const { return dim_; }
  bool abelian() const { return abelian_; }

  double structure(int i, int j, int k) const {
    return c_[static_cast<size_t>((i * dim_ + j) * dim_ + k)];
  }

  /// Matrix of ad(e_i) acting on coefficient vectors.
  const MatrixXd& adBasis(int i) const { return ad_[static_cast<size_t>(i)]; }

  /// Matrix of ad(X) = sum_i X_i ad(e_i).
  MatrixXd ad(const VectorXd& X) const;

  /// [X, Y] in coefficients.
  VectorXd bracket(const VectorXd& X, const VectorXd& Y) const;

  /// ad(X)* p, defined by <ad(X)* p, Z> = <p, [X, Z]>.
  VectorXd adStar(const VectorXd& X, const VectorXd& p) const;

  /// Largest Jacobi residual over basis triples (diagnostic; construction
  /// already enforces <= 1e-12).
  double jacobiResidual() const;

  static LieAlgebra so3();
  static LieAlgebra abelianAlgebra(int n);

private:
  int dim_;
  bool abelian_;
  std::vector<double> c_;
  std::vector<MatrixXd> ad_;
};

/// Linear action of a Lie algebra m on the underlying space of a second
/// algebra g, stored as the rank-3 table r[a][i][j] with
/// rho^{e_a}(f_i) = sum_j r[a][i][j] f_j.
///
/// The table is the derivative of a right representation of the group, so
/// construction checks the anti-homomorphism property
///   rho^{[u,v]} = -(rho^u rho^v - rho^v rho^u)
/// and, for non-abelian g, the derivation property on brackets, both to 1e-10.
class Representation {
public:
  Representation(const LieAlgebra& m, const LieAlgebra& g,
                 std::vector<double> table);

  int dimM() const { return dim_m_; }
  int dimG() const { return dim_g_; }
  bool trivial() const { return trivial_; }

  /// Matrix of rho^{e_a} on g-coefficients.
  const MatrixXd& basis(int a) const { return mats_[static_cast<size_t>(a)]; }

  /// Matrix of rho^u = sum_a u_a rho^{e_a}.
  MatrixXd rhoMatrix(const VectorXd& u) const;

  /// rho^u X (infinitesimal action on g).
  VectorXd rhoInf(const VectorXd& u, const VectorXd& X) const;

  /// rho_*^u p = -(rho^u)* p (induced action on g*).
  VectorXd rhoStar(const VectorXd& u, const VectorXd& p) const;

  /// Diamond pairing m x g* -> m*: <X <> p, u> = <p, rho^u X>.
  VectorXd diamond(const VectorXd& X, const VectorXd& p) const;

  static Representation trivialRep(const LieAlgebra& m, const LieAlgebra& g);
  /// so(3) acting on R^3 through the right group action R^{-1}x, so
  /// rho^u X = X x u.
  static Representation so3OnR3(const LieAlgebra& so3, const LieAlgebra& r3);

private:
  int dim_m_, dim_g_;
  bool trivial_;
  std::vector<MatrixXd> mats_;
};

/// Rate of change of the body form of a constant spatial g*-covector along a
/// curve with right-trivialized velocity (u, Y):
///
///   d qt/dt = -(ad(Y)* + rho_*^u) qt.
///
/// The overall sign is pinned by the matrix-exponential transport oracle on
/// so(3) |x R^3 (see tests) and hard-coded here.
VectorXd transportRate(const LieAlgebra& g, const Representation& rep,
                       const VectorXd& u, const VectorXd& Y,
                       const VectorXd& qt);

/// Hat map R^3 -> so(3) matrices, w x v = hat(w) v.
Eigen::Matrix3d hat(const Eigen::Vector3d& w);

/// Rodrigues exponential for so(3), series branch below 1e-8 rotation angle.
Eigen::Matrix3d groupExpSo3(const Eigen::Vector3d& w);

/// Nearest rotation in Frobenius norm (polar projection via SVD).
Eigen::Matrix3d polarProject(const Eigen::Matrix3d& A);

struct AlgebraPair {
  LieAlgebra m;
  LieAlgebra g;
  Representation rep;
};

/// Parse an algebra pair from JSON text: either a preset name ("so3",
/// "abelian:<n>", "so3_semidirect_r3") or an inline object with keys
/// dim_m, dim_g, structure_m, structure_g, rep.
AlgebraPair algebraFromJson(const std::string& json_text);

}  // namespace symact
