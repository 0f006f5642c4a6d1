#pragma once

#include <complex>

#include "symact/dynamics.hpp"

namespace symact {

/// Rigid carrier with a symmetric rotor on the third axis.  I are the carrier
/// moments, i the rotor moments (i1 = i2 required); the locked moments are
/// lambda_j = I_j + i_j.  k is the momentum feedback gain on the rotor.
///
/// Validation requires lambda1 > lambda2 > I3 + i3 and i3 > 0 and k != 1;
/// violations name the failing inequality.
struct SatelliteParams {
  double I1 = 3.0, I2 = 2.0, I3 = 1.0;
  double i1 = 0.3, i2 = 0.3, i3 = 0.2;
  double k = 0.0;

  double lambda1() const { return I1 + i1; }
  double lambda2() const { return I2 + i2; }
  double lambda3() const { return I3 + i3; }
};

/// Model on so(3) x R with mu_M = diag(lambda1, lambda2, I3), I0 = i3,
/// A0 = (0, 0, 1), C = (0, 0, -k).
SemidirectModel buildSatellite(const SatelliteParams& p);

struct StabilityWindow {
  double k_lo;
  double k_hi;
};

/// Gain window (1 - I3/lambda2, 1) in which the middle-axis relative
/// equilibrium becomes spectrally stable.
StabilityWindow stabilityWindow(const SatelliteParams& p);

struct MiddleAxisSpectrum {
  std::vector<std::complex<double>> eigenvalues;
  double spectral_abscissa;
};

/// Eigenvalues of the 3x3 Jacobian of the closed-loop nu-field at
/// nu_e = mu_M (0, omega_bar, 0), qt = 0, by central differences with step
/// 1e-6 times the state scale.
MiddleAxisSpectrum linearizeMiddleAxis(const SatelliteParams& p,
                                       double omega_bar);

struct DemoResult {
  bool bounded;
  double max_excursion;
  double perturbation;
};

/// Integrate the closed loop from nu_e plus a seeded random perturbation and
/// classify the run as bounded when the max excursion stays within
/// 10x the perturbation size.  Blow-up counts as unbounded.
DemoResult stabilizationDemo(const SatelliteParams& p, double omega_bar,
                             double perturbation, double t_end, double dt,
                             std::uint64_t seed);

}  // namespace symact
