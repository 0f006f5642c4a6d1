#include "symact/satellite.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace symact {

namespace {

void validate(const SatelliteParams& p) {
  auto fail = [](const std::string& ineq) {
    throw ConstructionError("satellite parameters: violated " + ineq);
  };
  if (!(p.I1 > 0.0 && p.I2 > 0.0 && p.I3 > 0.0)) fail("I_j > 0");
  if (!(p.i1 > 0.0 && p.i3 > 0.0)) fail("i_j > 0");
  if (p.i1 != p.i2) fail("i1 == i2 (symmetric rotor)");
  if (!(p.lambda1() > p.lambda2())) fail("lambda1 > lambda2");
  if (!(p.lambda2() > p.lambda3())) fail("lambda2 > lambda3");
  if (p.k == 1.0) fail("k != 1");
}

}  // namespace

SemidirectModel buildSatellite(const SatelliteParams& p) {
  validate(p);
  LieAlgebra m = LieAlgebra::so3();
  LieAlgebra g = LieAlgebra::abelianAlgebra(1);
  Representation rep = Representation::trivialRep(m, g);

  KKData kk;
  kk.mu_M = Eigen::Vector3d(p.lambda1(), p.lambda2(), p.I3).asDiagonal();
  kk.I0 = MatrixXd::Constant(1, 1, p.i3);
  kk.A0 = (MatrixXd(1, 3) << 0.0, 0.0, 1.0).finished();

  ControlGain gain;
  gain.C = (MatrixXd(1, 3) << 0.0, 0.0, -p.k).finished();

  return SemidirectModel(std::move(m), std::move(g), std::move(rep),
                         std::move(kk), std::move(gain));
}

StabilityWindow stabilityWindow(const SatelliteParams& p) {
  validate(p);
  return StabilityWindow{1.0 - p.I3 / p.lambda2(), 1.0};
}

MiddleAxisSpectrum linearizeMiddleAxis(const SatelliteParams& p,
                                       double omega_bar) {
  SemidirectModel model = buildSatellite(p);
  ForcedField field(model);

  const Eigen::Vector3d nu_e(0.0, p.lambda2() * omega_bar, 0.0);
  const double h = 1e-6 * std::max(1.0, nu_e.lpNorm<Eigen::Infinity>());

  auto f = [&](const Eigen::Vector3d& nu) -> Eigen::Vector3d {
    ReducedState s;
    s.nu = nu;
    s.qt = VectorXd::Zero(1);
    return field.eval(s).dnu;
  };

  Eigen::Matrix3d J;
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[j] = h;
    J.col(j) = (f(nu_e + e) - f(nu_e - e)) / (2.0 * h);
  }

  Eigen::EigenSolver<Eigen::Matrix3d> es(J);
  MiddleAxisSpectrum out;
  out.spectral_abscissa = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    out.eigenvalues.push_back(es.eigenvalues()[i]);
    out.spectral_abscissa = std::max(out.spectral_abscissa,
                                     es.eigenvalues()[i].real());
  }
  return out;
}

DemoResult stabilizationDemo(const SatelliteParams& p, double omega_bar,
                             double perturbation, double t_end, double dt,
                             std::uint64_t seed) {
  SemidirectModel model = buildSatellite(p);
  ForcedField field(model);

  const Eigen::Vector3d nu_e(0.0, p.lambda2() * omega_bar, 0.0);
  require(perturbation > 0.0 && perturbation <= 0.05 * nu_e.norm(),
          "stabilizationDemo: perturbation must be in (0, 0.05 |nu_e|]");

  std::mt19937_64 gen(seed);
  Eigen::Vector3d dir;
  double norm = 0.0;
  do {
    for (int i = 0; i < 3; ++i) {
      // Box-Muller on two uniforms, cosine branch only
      const double u1 = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
      const double u2 = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
      dir[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    norm = dir.norm();
  } while (norm < 1e-12);
  dir /= norm;

  ReducedState s0;
  s0.nu = nu_e + perturbation * dir;
  s0.qt = VectorXd::Zero(1);

  DemoResult out;
  out.perturbation = perturbation;
  try {
    Trajectory traj = rk4Integrate(field, s0, dt, t_end);
    double worst = 0.0;
    for (const ReducedState& s : traj.states)
      worst = std::max(worst, (Eigen::Vector3d(s.nu) - nu_e).norm());
    out.max_excursion = worst;
    out.bounded = worst <= 10.0 * perturbation;
  } catch (const BlowUpError&) {
    out.max_excursion = std::numeric_limits<double>::infinity();
    out.bounded = false;
  }
  return out;
}

}  // namespace symact
