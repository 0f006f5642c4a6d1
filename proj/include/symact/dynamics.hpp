#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "symact/matching.hpp"

namespace symact {

/// Reduced trajectory state (nu, qt) with an optionally tracked SO(3) group
/// element for the m-factor (needed for spatial reconstruction of monitors).
struct ReducedState {
  VectorXd nu;
  VectorXd qt;
  std::optional<Eigen::Matrix3d> R;
};

struct FieldEval {
  VectorXd dnu;
  VectorXd dqt;
};

/// Right-hand sides of the reduced equations of motion.  Both concrete fields
/// are autonomous in (nu, qt); the group element, when tracked, follows
/// dR/dt = hat(u(state)) R.
class ReducedField {
public:
  virtual ~ReducedField() = default;
  virtual FieldEval eval(const ReducedState& s) const = 0;
  virtual VectorXd velocityM(const ReducedState& s) const = 0;
  virtual double energy(const ReducedState& s) const = 0;
  virtual const SemidirectModel& model() const = 0;
};

/// Original system with the symmetry-actuating feedback force:
///   u  = mu_M^{-1} nu,  pt = qt - E C nu,  Y = -A0 u + I0^{-1} pt
///   dnu/dt = X2 + F2
///     X2 = -ad(u)* nu - <pt, Curv^{A0}(u)>
///     F2 = A0* (1 + C A0*) [ (ad(Y)* + rho_*^u)(E C nu) + E C X2 ]
///   dqt/dt = -(ad(Y)* + rho_*^u) qt
class ForcedField : public ReducedField {
public:
  explicit ForcedField(const SemidirectModel& model) : model_(model) {}
  FieldEval eval(const ReducedState& s) const override;
  VectorXd velocityM(const ReducedState& s) const override;
  double energy(const ReducedState& s) const override;
  const SemidirectModel& model() const override { return model_; }

  /// The force term alone (m*-valued), for force-free checks.
  VectorXd force(const ReducedState& s) const;

private:
  const SemidirectModel& model_;
};

/// Controlled system on the matched side, state (mu, rt):
///   u = mu_C^{-1} mu,  Y_C = -A_C u + I_C^{-1} rt
///   dmu/dt = -ad(u)* mu - <rt, Curv^{A_C}(u)> + residual_force(u, rt)
///   drt/dt = -(ad(Y_C)* + rho_*^u) rt
class ControlledField : public ReducedField {
public:
  ControlledField(const SemidirectModel& model, ControlledData cd);
  FieldEval eval(const ReducedState& s) const override;
  VectorXd velocityM(const ReducedState& s) const override;
  double energy(const ReducedState& s) const override;
  const SemidirectModel& model() const override { return model_; }
  const ControlledData& data() const { return cd_; }

private:
  const SemidirectModel& model_;
  ControlledData cd_;
  Eigen::PartialPivLU<MatrixXd> muC_solver_;
  Eigen::PartialPivLU<MatrixXd> IC_solver_;
  Eigen::PartialPivLU<MatrixXd> S_solver_;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<ReducedState> states;
  std::vector<VectorXd> conserved;
  std::vector<double> energy;
  std::vector<double> conserved_drift;
  std::vector<double> energy_drift;
};

/// Fixed-step classical RK4.  Samples every step including t = 0.  The group
/// factor, when tracked, is integrated inside the stages and renormalized by
/// polar projection after each step.  Non-finite state aborts with
/// BlowUpError carrying the last valid time.
Trajectory rk4Integrate(const ReducedField& field, const ReducedState& s0,
                        double dt, double t_end);

/// In-place variant: appends samples to traj as they are produced, so a
/// caller can keep the partial trajectory when BlowUpError is thrown.
/// Monitors are filled only on normal completion.
void rk4IntegrateInto(const ReducedField& field, const ReducedState& s0,
                      double dt, double t_end, Trajectory& traj);

/// Fill conserved/energy monitor columns of a trajectory generated by the
/// given field.  The conserved monitor is the spatial form of qt: qt itself
/// for trivial action with abelian g, R^T qt when the so(3) m-factor is
/// tracked; other group types are an error.
void fillMonitors(const ReducedField& field, Trajectory& traj);

/// Map a forced trajectory through (phi_C, S) per sample: mu = phi_C nu,
/// rt = S qt.  Group factor carried over unchanged.
Trajectory phiRelate(const SemidirectModel& model, const ControlledData& cd,
                     const Trajectory& forced);

/// Sup over samples of the max-norm gap between the (nu, qt) components.
double supGap(const Trajectory& a, const Trajectory& b);

/// splitmix64 finalizer; used to derive stream seeds from (seed, index)
/// pairs without correlations between nearby indices.
std::uint64_t mixSeed(std::uint64_t x);

/// Noise channels for the stochastic extension.  Channel k carries the
/// Hamiltonian eps_k H0, so its field is eps_k times the forced field.
/// Channel seeds must be pairwise distinct.
struct NoiseSpec {
  struct Channel {
    double epsilon;
    std::uint64_t seed;
  };
  explicit NoiseSpec(std::vector<Channel> channels);
  const std::vector<Channel>& channels() const { return channels_; }

private:
  std::vector<Channel> channels_;
};

/// Stratonovich predictor-corrector (Heun): full Euler predictor with
/// increment field(s) (dt + sum_k eps_k dW_k), then trapezoidal corrector
/// reusing the same increments.  Gaussian increments N(0, dt) come from a
/// per-path, per-channel counter-based generator seeded deterministically
/// from the channel seed and path index.
Trajectory stratonovichHeun(const ReducedField& field, const ReducedState& s0,
                            const NoiseSpec& noise, double dt, double t_end,
                            std::uint64_t path_index);

struct EnsembleSummary {
  double drift_mean;
  double drift_max;
};

/// Terminal conserved-monitor drift statistics over an ensemble of paths,
/// optionally multithreaded (results identical for any thread count).
EnsembleSummary ensembleConservedDrift(const ReducedField& field,
                                       const ReducedState& s0,
                                       const NoiseSpec& noise, double dt,
                                       double t_end, int n_paths, int threads);

}  // namespace symact
