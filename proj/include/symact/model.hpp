#pragma once

#include <optional>
#include <utility>

#include "symact/algebra.hpp"

namespace symact {

/// Kaluza-Klein data for the block metric on m x g:
///   mu_M : m -> m*   (symmetric positive definite)
///   I0   : g -> g*   (symmetric positive definite, invariant)
///   A0   : m -> g    (connection coefficient)
struct KKData {
  MatrixXd mu_M;
  MatrixXd I0;
  MatrixXd A0;
};

/// Feedback gain C : m* -> g*.
struct ControlGain {
  MatrixXd C;
};

/// Assembled block metric on m x g together with its closed-form inverse.
struct KKMetric {
  MatrixXd matrix;
  MatrixXd inverse;
};

struct EquilibriumGates {
  double uncontrolled_residual;
  double controlled_residual;
  double gate_C;
};

/// Semidirect-product control model: algebra pair, KK data and gain, with all
/// derived operators precomputed.  Construction validates everything eagerly:
/// metric symmetry/positivity, I0 invariance under the representation and the
/// g-bracket, and invertibility of 1 + C A0* (reciprocal condition >= 1e-10).
class SemidirectModel {
public:
  SemidirectModel(LieAlgebra m, LieAlgebra g, Representation rep, KKData kk,
                  ControlGain gain);

  const LieAlgebra& m() const { return m_; }
  const LieAlgebra& g() const { return g_; }
  const Representation& rep() const { return rep_; }
  const KKData& kk() const { return kk_; }
  const MatrixXd& C() const { return C_; }

  int dimM() const { return m_.dim(); }
  int dimG() const { return g_.dim(); }

  const MatrixXd& muMInv() const { return muM_inv_; }
  const MatrixXd& I0Inv() const { return I0_inv_; }
  const MatrixXd& A0T() const { return A0T_; }

  /// E = (1 + C A0*)^{-1} on g*.
  const MatrixXd& eMap() const { return E_; }
  /// (1 + A0* C)^{-1} on m*; equals the data map phi_C of the matching theorem.
  const MatrixXd& eMapMStar() const { return Estar_; }
  /// E C : m* -> g*.
  const MatrixXd& EC() const { return EC_; }

  double eMapRcond() const { return e_rcond_; }

  /// Block metric [[mu_M + A0* I0 A0, A0* I0], [I0 A0, I0]] and its inverse.
  const KKMetric& kkMetric() const { return metric_; }

  /// H(nu, pt) = 1/2 <nu, mu_M^{-1} nu> + 1/2 <pt, I0^{-1} pt>.
  double reducedHamiltonian(const VectorXd& nu, const VectorXd& pt) const;

  /// <pt, Curv(u)> for the connection A0: the m*-valued pairing
  ///   ad(u)* A0* pt + A0* ad(A0 u)* pt - (A0 u) <> pt - A0* rho_*^u pt.
  VectorXd curvaturePairing(const VectorXd& u, const VectorXd& pt) const;

  /// Same pairing for an arbitrary connection coefficient A : m -> g.
  VectorXd curvaturePairingWith(const MatrixXd& A, const VectorXd& u,
                                const VectorXd& pt) const;

  /// j in body form on cotangent-fiber coordinates: E C nu_c - C A0* E p_c.
  VectorXd jBody(const VectorXd& nu_c, const VectorXd& p_c) const;

  /// Body form of the conserved quantity (J + j): E (C nu_c + p_c).
  VectorXd conservedBody(const VectorXd& nu_c, const VectorXd& p_c) const;

  /// Cotangent-fiber coordinates from W-coordinates: (nu + A0* pt, pt).
  std::pair<VectorXd, VectorXd> cotangentFromW(const VectorXd& nu,
                                               const VectorXd& pt) const;
  std::pair<VectorXd, VectorXd> wFromCotangent(const VectorXd& nu_c,
                                               const VectorXd& p_c) const;

  /// Body momentum from trajectory state: pt = qt - E C nu.
  VectorXd phiJShift(const VectorXd& nu, const VectorXd& qt) const;
  /// Inverse shift: qt = pt + E C nu.
  VectorXd phiJShiftInverse(const VectorXd& nu, const VectorXd& pt) const;

  /// Residuals of the stationarity conditions at nu_e (uncontrolled and
  /// controlled coadjoint equations) and of the sufficient gate C nu_e = 0.
  /// The controlled residual uses mu_C = (1 + A0* C)^{-1} mu_M.
  EquilibriumGates equilibriumGates(const VectorXd& nu_e) const;

  /// True when the model is a direct product with trivial action and abelian
  /// g, in which case qt itself is the conserved monitor.
  bool conservedIsQt() const { return rep_.trivial() && g_.abelian(); }

  /// True when m is so(3) with the standard cross-product table; enables
  /// group tracking and spatial reconstruction of monitors.
  bool mIsSo3() const { return m_is_so3_; }

private:
  LieAlgebra m_;
  LieAlgebra g_;
  Representation rep_;
  KKData kk_;
  MatrixXd C_;

  MatrixXd muM_inv_, I0_inv_, A0T_;
  MatrixXd E_, Estar_, EC_;
  double e_rcond_;
  KKMetric metric_;
  bool m_is_so3_;
};

/// Gain family C = gamma (1 - gamma I0 A0 mu_M^{-1} A0*)^{-1} I0 A0 mu_M^{-1},
/// the unique scalar-family solution of E C mu_M = gamma I0 A0.  Throws when
/// gamma puts the inverted operator within 1e-10 reciprocal condition of
/// singular.
MatrixXd gammaFamilyC(const KKData& kk, double gamma);

/// Reciprocal condition number from the singular values of A (0 for empty).
double rcond(const MatrixXd& A);

}  // namespace symact
