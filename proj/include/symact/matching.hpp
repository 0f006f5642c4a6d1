#pragma once

#include "symact/model.hpp"

namespace symact {

/// Controlled Kaluza-Klein data produced by the matching construction:
///   mu_C  = (1 + A0* C)^{-1} mu_M
///   I_C   = S I0
///   A_C   = A0 + I0^{-1} C (1 + A0* C)^{-1} mu_M
/// together with the data map phi_C = (1 + A0* C)^{-1} on m* and the
/// equivariant change of inertia S on g*.
struct ControlledData {
  MatrixXd mu_C;
  MatrixXd I_C;
  MatrixXd A_C;
  MatrixXd phi_C;
  MatrixXd S;
};

struct MatchingReport {
  double residual;
  bool satisfied;
  double residual_force_norm;
  ControlledData data;
};

/// Max-norm of the matching obstruction (A0 u) <> (E C nu) over basis pairs
/// (u, nu).  Zero means the feedback force is realizable as a change of
/// Kaluza-Klein data.
double matchingResidual(const SemidirectModel& model);

/// Build the controlled data for a given equivariant S.  Validates that S is
/// invertible and commutes with ad(Y)* and rho_*^u on g* (tolerance 1e-10),
/// and that the symmetric part of mu_C is positive definite.  An asymmetry of
/// mu_C above 1e-10 is reported on stderr as a warning, not symmetrized.
ControlledData synthesizeControlled(const SemidirectModel& model,
                                    const MatrixXd& S);

/// Scalar factor of the satellite family: A_C = f_k A0 with
/// f_k = (I0 - k lambda3) / (I0 (1 - k)).  Throws at the pole k = 1.
double fKFactor(double I0, double lambda3, double k);

/// Residual force of the controlled system at (u, rt):
///   <rt, Curv^{A_C}(u)> - <S^{-1} rt, Curv^{A0}(u)>.
VectorXd residualForce(const SemidirectModel& model, const ControlledData& cd,
                       const VectorXd& u, const VectorXd& rt);

struct ScalarSChoice {
  MatrixXd S;
  double residual_norm;
};

/// Search S = c Id for the scalar minimizing the basis-sampled residual-force
/// norm.  For abelian g with A_C proportional to A0 the minimum is exact
/// (residual 0, c the reciprocal of the proportionality factor).  Only the
/// scalar family is searched; a nonzero residual is reported, not an error.
ScalarSChoice chooseS(const SemidirectModel& model, const ControlledData& cd_partial);

/// Full pipeline: residual, scalar S choice, synthesized data, and the
/// residual-force norm at the chosen S.
MatchingReport matchControl(const SemidirectModel& model, double tolerance = 1e-10);

}  // namespace symact
