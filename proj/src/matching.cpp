#include "symact/matching.hpp"

#include <cmath>
#include <iostream>

namespace symact {

namespace {
constexpr double kEquivTol = 1e-10;
}

double matchingResidual(const SemidirectModel& model) {
  const int dm = model.dimM();
  double worst = 0.0;
  for (int i = 0; i < dm; ++i) {
    const VectorXd Au = model.kk().A0 * VectorXd::Unit(dm, i);
    for (int j = 0; j < dm; ++j) {
      const VectorXd ECnu = model.EC() * VectorXd::Unit(dm, j);
      worst = std::max(worst,
                       model.rep().diamond(Au, ECnu).lpNorm<Eigen::Infinity>());
    }
  }
  return worst;
}

ControlledData synthesizeControlled(const SemidirectModel& model,
                                    const MatrixXd& S) {
  const int dg = model.dimG();
  if (S.rows() != dg || S.cols() != dg)
    throw ContractError("synthesizeControlled: S must be dim_g x dim_g");
  if (rcond(S) < 1e-10)
    throw ConstructionError("synthesizeControlled: S is numerically singular");

  // S must commute with the coadjoint and induced representations on g*
  double eq = 0.0;
  for (int i = 0; i < dg; ++i) {
    const MatrixXd adT = model.g().adBasis(i).transpose();
    eq = std::max(eq, (S * adT - adT * S).lpNorm<Eigen::Infinity>());
  }
  for (int a = 0; a < model.dimM(); ++a) {
    const MatrixXd rsT = -model.rep().basis(a).transpose();
    eq = std::max(eq, (S * rsT - rsT * S).lpNorm<Eigen::Infinity>());
  }
  if (eq > kEquivTol)
    throw ConstructionError("synthesizeControlled: S equivariance residual " +
                            std::to_string(eq) + " exceeds 1e-10");

  ControlledData cd;
  cd.phi_C = model.eMapMStar();
  cd.mu_C = cd.phi_C * model.kk().mu_M;
  cd.I_C = S * model.kk().I0;
  cd.A_C = model.kk().A0 + model.I0Inv() * model.C() * cd.phi_C * model.kk().mu_M;
  cd.S = S;

  const double asym = (cd.mu_C - cd.mu_C.transpose()).lpNorm<Eigen::Infinity>();
  if (asym > 1e-10)
    std::cerr << "warning: mu_C asymmetry " << asym
              << " exceeds 1e-10; using it unsymmetrized\n";
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(
      0.5 * (cd.mu_C + cd.mu_C.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConstructionError(
        "synthesizeControlled: mu_C is not positive definite");
  return cd;
}

double fKFactor(double I0, double lambda3, double k) {
  if (k == 1.0) throw ContractError("fKFactor: pole at k = 1");
  return (I0 - k * lambda3) / (I0 * (1.0 - k));
}

VectorXd residualForce(const SemidirectModel& model, const ControlledData& cd,
                       const VectorXd& u, const VectorXd& rt) {
  const VectorXd via_C = model.curvaturePairingWith(cd.A_C, u, rt);
  const VectorXd via_0 =
      model.curvaturePairing(u, cd.S.partialPivLu().solve(rt));
  return via_C - via_0;
}

ScalarSChoice chooseS(const SemidirectModel& model,
                      const ControlledData& cd_partial) {
  const int dm = model.dimM();
  const int dg = model.dimG();

  // residual_force with S = (1/t) Id is V - t W, linear in t; least squares
  // over all basis pairs picks the scalar, then the max norm reports quality.
  double num = 0.0, den = 0.0;
  std::vector<std::pair<VectorXd, VectorXd>> table;
  table.reserve(static_cast<size_t>(dm) * dg);
  for (int i = 0; i < dm; ++i) {
    const VectorXd u = VectorXd::Unit(dm, i);
    for (int j = 0; j < dg; ++j) {
      const VectorXd rt = VectorXd::Unit(dg, j);
      const VectorXd V = model.curvaturePairingWith(cd_partial.A_C, u, rt);
      const VectorXd W = model.curvaturePairing(u, rt);
      num += V.dot(W);
      den += W.dot(W);
      table.emplace_back(V, W);
    }
  }
  const double t = den > 0.0 ? num / den : 1.0;
  double res = 0.0;
  for (const auto& [V, W] : table)
    res = std::max(res, (V - t * W).lpNorm<Eigen::Infinity>());

  const double c = t != 0.0 ? 1.0 / t : 1.0;
  ScalarSChoice out;
  out.S = c * MatrixXd::Identity(dg, dg);
  out.residual_norm = res;
  return out;
}

MatchingReport matchControl(const SemidirectModel& model, double tolerance) {
  MatchingReport rep;
  rep.residual = matchingResidual(model);
  rep.satisfied = rep.residual <= tolerance;
  ControlledData partial =
      synthesizeControlled(model, MatrixXd::Identity(model.dimG(), model.dimG()));
  ScalarSChoice sc = chooseS(model, partial);
  rep.data = synthesizeControlled(model, sc.S);
  rep.residual_force_norm = sc.residual_norm;
  return rep;
}

}  // namespace symact
