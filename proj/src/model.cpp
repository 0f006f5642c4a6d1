#include "symact/model.hpp"

#include <cmath>
#include <iostream>

namespace symact {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kInvarianceTol = 1e-10;
constexpr double kRcondFloor = 1e-10;

void checkSymmetricSpd(const MatrixXd& M, const char* name) {
  if (M.rows() != M.cols())
    throw ConstructionError(std::string(name) + ": must be square");
  const double asym = (M - M.transpose()).lpNorm<Eigen::Infinity>();
  if (asym > kSymTol)
    throw ConstructionError(std::string(name) + ": asymmetry " +
                            std::to_string(asym) + " exceeds 1e-12");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConstructionError(std::string(name) + ": not positive definite");
}

}  // namespace

double rcond(const MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(A);
  const double smax = svd.singularValues().maxCoeff();
  const double smin = svd.singularValues().minCoeff();
  if (smax == 0.0) return 0.0;
  return smin / smax;
}

SemidirectModel::SemidirectModel(LieAlgebra m, LieAlgebra g, Representation rep,
                                 KKData kk, ControlGain gain)
    : m_(std::move(m)),
      g_(std::move(g)),
      rep_(std::move(rep)),
      kk_(std::move(kk)),
      C_(std::move(gain.C)) {
  const int dm = m_.dim();
  const int dg = g_.dim();
  if (rep_.dimM() != dm || rep_.dimG() != dg)
    throw ConstructionError("model: representation dimensions do not match algebras");
  if (kk_.mu_M.rows() != dm || kk_.mu_M.cols() != dm)
    throw ConstructionError("model: mu_M must be dim_m x dim_m");
  if (kk_.I0.rows() != dg || kk_.I0.cols() != dg)
    throw ConstructionError("model: I0 must be dim_g x dim_g");
  if (kk_.A0.rows() != dg || kk_.A0.cols() != dm)
    throw ConstructionError("model: A0 must be dim_g x dim_m");
  if (C_.rows() != dg || C_.cols() != dm)
    throw ConstructionError("model: C must be dim_g x dim_m");

  checkSymmetricSpd(kk_.mu_M, "mu_M");
  checkSymmetricSpd(kk_.I0, "I0");

  // Infinitesimal invariance of I0 under the group action and under Ad of G:
  //   I0 rho^u + (rho^u)* I0 = 0,   I0 ad(Y) + ad(Y)* I0 = 0
  double inv_res = 0.0;
  for (int a = 0; a < dm; ++a) {
    const MatrixXd& R = rep_.basis(a);
    inv_res = std::max(inv_res,
                       (kk_.I0 * R + R.transpose() * kk_.I0).lpNorm<Eigen::Infinity>());
  }
  for (int i = 0; i < dg; ++i) {
    const MatrixXd& ad = g_.adBasis(i);
    inv_res = std::max(inv_res,
                       (kk_.I0 * ad + ad.transpose() * kk_.I0).lpNorm<Eigen::Infinity>());
  }
  if (inv_res > kInvarianceTol)
    throw ConstructionError("model: I0 invariance residual " +
                            std::to_string(inv_res) + " exceeds 1e-10");

  A0T_ = kk_.A0.transpose();
  muM_inv_ = kk_.mu_M.inverse();
  I0_inv_ = kk_.I0.inverse();

  const MatrixXd one_g = MatrixXd::Identity(dg, dg);
  const MatrixXd one_m = MatrixXd::Identity(dm, dm);
  const MatrixXd gainced = one_g + C_ * A0T_;
  e_rcond_ = rcond(gainced);
  if (e_rcond_ < kRcondFloor)
    throw SingularGainError("1 + C A0* is numerically singular (rcond " +
                            std::to_string(e_rcond_) + " < 1e-10)");
  E_ = gainced.inverse();
  Estar_ = (one_m + A0T_ * C_).inverse();
  EC_ = E_ * C_;

  // Block metric and its closed-form inverse
  const int n = dm + dg;
  metric_.matrix = MatrixXd(n, n);
  metric_.matrix.topLeftCorner(dm, dm) = kk_.mu_M + A0T_ * kk_.I0 * kk_.A0;
  metric_.matrix.topRightCorner(dm, dg) = A0T_ * kk_.I0;
  metric_.matrix.bottomLeftCorner(dg, dm) = kk_.I0 * kk_.A0;
  metric_.matrix.bottomRightCorner(dg, dg) = kk_.I0;
  metric_.inverse = MatrixXd(n, n);
  metric_.inverse.topLeftCorner(dm, dm) = muM_inv_;
  metric_.inverse.topRightCorner(dm, dg) = -muM_inv_ * A0T_;
  metric_.inverse.bottomLeftCorner(dg, dm) = -kk_.A0 * muM_inv_;
  metric_.inverse.bottomRightCorner(dg, dg) = I0_inv_ + kk_.A0 * muM_inv_ * A0T_;

  m_is_so3_ = false;
  if (dm == 3) {
    const LieAlgebra ref = LieAlgebra::so3();
    double diff = 0.0;
    for (int i = 0; i < 3; ++i)
      diff = std::max(diff,
                      (m_.adBasis(i) - ref.adBasis(i)).lpNorm<Eigen::Infinity>());
    m_is_so3_ = diff == 0.0;
  }
}

double SemidirectModel::reducedHamiltonian(const VectorXd& nu,
                                           const VectorXd& pt) const {
  requireDim(nu, dimM(), "reducedHamiltonian: nu");
  requireDim(pt, dimG(), "reducedHamiltonian: pt");
  return 0.5 * nu.dot(muM_inv_ * nu) + 0.5 * pt.dot(I0_inv_ * pt);
}

VectorXd SemidirectModel::curvaturePairing(const VectorXd& u,
                                           const VectorXd& pt) const {
  return curvaturePairingWith(kk_.A0, u, pt);
}

VectorXd SemidirectModel::curvaturePairingWith(const MatrixXd& A,
                                               const VectorXd& u,
                                               const VectorXd& pt) const {
  requireDim(u, dimM(), "curvaturePairing: u");
  requireDim(pt, dimG(), "curvaturePairing: pt");
  if (A.rows() != dimG() || A.cols() != dimM())
    throw ContractError("curvaturePairing: A must be dim_g x dim_m");
  const VectorXd Au = A * u;
  const MatrixXd AT = A.transpose();
  return m_.adStar(u, AT * pt) + AT * g_.adStar(Au, pt) - rep_.diamond(Au, pt) -
         AT * rep_.rhoStar(u, pt);
}

VectorXd SemidirectModel::jBody(const VectorXd& nu_c, const VectorXd& p_c) const {
  requireDim(nu_c, dimM(), "jBody: nu_c");
  requireDim(p_c, dimG(), "jBody: p_c");
  return EC_ * nu_c - C_ * (A0T_ * (E_ * p_c));
}

VectorXd SemidirectModel::conservedBody(const VectorXd& nu_c,
                                        const VectorXd& p_c) const {
  requireDim(nu_c, dimM(), "conservedBody: nu_c");
  requireDim(p_c, dimG(), "conservedBody: p_c");
  return E_ * (C_ * nu_c + p_c);
}

std::pair<VectorXd, VectorXd> SemidirectModel::cotangentFromW(
    const VectorXd& nu, const VectorXd& pt) const {
  requireDim(nu, dimM(), "cotangentFromW: nu");
  requireDim(pt, dimG(), "cotangentFromW: pt");
  return {nu + A0T_ * pt, pt};
}

std::pair<VectorXd, VectorXd> SemidirectModel::wFromCotangent(
    const VectorXd& nu_c, const VectorXd& p_c) const {
  requireDim(nu_c, dimM(), "wFromCotangent: nu_c");
  requireDim(p_c, dimG(), "wFromCotangent: p_c");
  return {nu_c - A0T_ * p_c, p_c};
}

VectorXd SemidirectModel::phiJShift(const VectorXd& nu, const VectorXd& qt) const {
  requireDim(nu, dimM(), "phiJShift: nu");
  requireDim(qt, dimG(), "phiJShift: qt");
  return qt - EC_ * nu;
}

VectorXd SemidirectModel::phiJShiftInverse(const VectorXd& nu,
                                           const VectorXd& pt) const {
  requireDim(nu, dimM(), "phiJShiftInverse: nu");
  requireDim(pt, dimG(), "phiJShiftInverse: pt");
  return pt + EC_ * nu;
}

EquilibriumGates SemidirectModel::equilibriumGates(const VectorXd& nu_e) const {
  requireDim(nu_e, dimM(), "equilibriumGates: nu_e");
  const VectorXd u0 = muM_inv_ * nu_e;
  const double r_un = m_.adStar(u0, nu_e).lpNorm<Eigen::Infinity>();
  const MatrixXd mu_C = Estar_ * kk_.mu_M;
  const VectorXd uC = mu_C.partialPivLu().solve(nu_e);
  const double r_ctrl = m_.adStar(uC, nu_e).lpNorm<Eigen::Infinity>();
  const double gate = (C_ * nu_e).lpNorm<Eigen::Infinity>();
  return EquilibriumGates{r_un, r_ctrl, gate};
}

MatrixXd gammaFamilyC(const KKData& kk, double gamma) {
  const MatrixXd A0T = kk.A0.transpose();
  const MatrixXd muM_inv = kk.mu_M.inverse();
  const MatrixXd D = kk.I0 * kk.A0 * muM_inv;  // m* -> g*
  const int dg = static_cast<int>(kk.I0.rows());
  const MatrixXd op = MatrixXd::Identity(dg, dg) - gamma * D * A0T;
  const double rc = rcond(op);
  if (rc < kRcondFloor)
    throw SingularGainError(
        "gamma out of range: 1 - gamma I0 A0 mu_M^{-1} A0* has rcond " +
        std::to_string(rc) + " < 1e-10");
  return gamma * op.inverse() * D;
}

}  // namespace symact
