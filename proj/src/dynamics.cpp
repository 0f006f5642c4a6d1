#include "symact/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

namespace symact {

namespace {

bool finiteState(const ReducedState& s) {
  if (!s.nu.allFinite() || !s.qt.allFinite()) return false;
  if (s.R && !s.R->allFinite()) return false;
  return true;
}

ReducedState axpy(const ReducedState& s, double a, const FieldEval& d,
                  const std::optional<Eigen::Matrix3d>& dR) {
  ReducedState out;
  out.nu = s.nu + a * d.dnu;
  out.qt = s.qt + a * d.dqt;
  if (s.R && dR) out.R = *s.R + a * (*dR);
  return out;
}

// Monitors need the spatial form of qt; when the model cannot shortcut to qt
// itself and the m-factor is so(3), start tracking the group element.
ReducedState withTrackingIfNeeded(const SemidirectModel& M, ReducedState s) {
  if (!s.R && !M.conservedIsQt() && M.mIsSo3())
    s.R = Eigen::Matrix3d::Identity();
  return s;
}

}  // namespace

FieldEval ForcedField::eval(const ReducedState& s) const {
  const SemidirectModel& M = model_;
  requireDim(s.nu, M.dimM(), "ForcedField: nu");
  requireDim(s.qt, M.dimG(), "ForcedField: qt");

  const VectorXd u = M.muMInv() * s.nu;
  const VectorXd ECnu = M.EC() * s.nu;
  const VectorXd pt = s.qt - ECnu;
  const VectorXd Y = -(M.kk().A0 * u) + M.I0Inv() * pt;

  const VectorXd X2 = -M.m().adStar(u, s.nu) - M.curvaturePairing(u, pt);
  const VectorXd trans_ECnu =
      M.g().adStar(Y, ECnu) + M.rep().rhoStar(u, ECnu);
  const VectorXd inner = trans_ECnu + M.EC() * X2;
  const VectorXd F2 = M.A0T() * (inner + M.C() * (M.A0T() * inner));

  FieldEval out;
  out.dnu = X2 + F2;
  out.dqt = transportRate(M.g(), M.rep(), u, Y, s.qt);
  return out;
}

VectorXd ForcedField::velocityM(const ReducedState& s) const {
  return model_.muMInv() * s.nu;
}

double ForcedField::energy(const ReducedState& s) const {
  return model_.reducedHamiltonian(s.nu, model_.phiJShift(s.nu, s.qt));
}

VectorXd ForcedField::force(const ReducedState& s) const {
  const SemidirectModel& M = model_;
  const VectorXd u = M.muMInv() * s.nu;
  const VectorXd ECnu = M.EC() * s.nu;
  const VectorXd pt = s.qt - ECnu;
  const VectorXd Y = -(M.kk().A0 * u) + M.I0Inv() * pt;
  const VectorXd X2 = -M.m().adStar(u, s.nu) - M.curvaturePairing(u, pt);
  const VectorXd inner =
      M.g().adStar(Y, ECnu) + M.rep().rhoStar(u, ECnu) + M.EC() * X2;
  return M.A0T() * (inner + M.C() * (M.A0T() * inner));
}

ControlledField::ControlledField(const SemidirectModel& model, ControlledData cd)
    : model_(model),
      cd_(std::move(cd)),
      muC_solver_(cd_.mu_C),
      IC_solver_(cd_.I_C),
      S_solver_(cd_.S) {}

FieldEval ControlledField::eval(const ReducedState& s) const {
  const SemidirectModel& M = model_;
  requireDim(s.nu, M.dimM(), "ControlledField: mu");
  requireDim(s.qt, M.dimG(), "ControlledField: rt");

  const VectorXd u = muC_solver_.solve(s.nu);
  const VectorXd Y = -(cd_.A_C * u) + IC_solver_.solve(s.qt);

  const VectorXd curv_C = M.curvaturePairingWith(cd_.A_C, u, s.qt);
  const VectorXd curv_0 = M.curvaturePairing(u, S_solver_.solve(s.qt));
  FieldEval out;
  out.dnu = -M.m().adStar(u, s.nu) - curv_C + (curv_C - curv_0);
  out.dqt = transportRate(M.g(), M.rep(), u, Y, s.qt);
  return out;
}

VectorXd ControlledField::velocityM(const ReducedState& s) const {
  return muC_solver_.solve(s.nu);
}

double ControlledField::energy(const ReducedState& s) const {
  return 0.5 * s.nu.dot(muC_solver_.solve(s.nu)) +
         0.5 * s.qt.dot(IC_solver_.solve(s.qt));
}

Trajectory rk4Integrate(const ReducedField& field, const ReducedState& s0,
                        double dt, double t_end) {
  Trajectory traj;
  rk4IntegrateInto(field, s0, dt, t_end, traj);
  return traj;
}

void rk4IntegrateInto(const ReducedField& field, const ReducedState& s0,
                      double dt, double t_end, Trajectory& traj) {
  require(dt > 0.0, "rk4Integrate: dt must be positive");
  require(t_end >= 0.0, "rk4Integrate: t_end must be nonnegative");

  const long n_steps = static_cast<long>(std::llround(t_end / dt));
  traj.t.reserve(static_cast<size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<size_t>(n_steps) + 1);

  ReducedState s = withTrackingIfNeeded(field.model(), s0);
  if (!finiteState(s)) throw BlowUpError("rk4Integrate: non-finite initial state", 0.0);
  traj.t.push_back(0.0);
  traj.states.push_back(s);

  auto stageR = [&](const ReducedState& at) -> std::optional<Eigen::Matrix3d> {
    if (!at.R) return std::nullopt;
    const Eigen::Vector3d u = field.velocityM(at);
    return hat(u) * (*at.R);
  };

  for (long n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const FieldEval k1 = field.eval(s);
    const auto r1 = stageR(s);
    const ReducedState s2 = axpy(s, 0.5 * dt, k1, r1);
    const FieldEval k2 = field.eval(s2);
    const auto r2 = stageR(s2);
    const ReducedState s3 = axpy(s, 0.5 * dt, k2, r2);
    const FieldEval k3 = field.eval(s3);
    const auto r3 = stageR(s3);
    const ReducedState s4 = axpy(s, dt, k3, r3);
    const FieldEval k4 = field.eval(s4);
    const auto r4 = stageR(s4);

    ReducedState next;
    next.nu = s.nu + (dt / 6.0) * (k1.dnu + 2.0 * k2.dnu + 2.0 * k3.dnu + k4.dnu);
    next.qt = s.qt + (dt / 6.0) * (k1.dqt + 2.0 * k2.dqt + 2.0 * k3.dqt + k4.dqt);
    if (s.R) {
      Eigen::Matrix3d R =
          *s.R + (dt / 6.0) * (*r1 + 2.0 * (*r2) + 2.0 * (*r3) + *r4);
      next.R = polarProject(R);
    }
    if (!finiteState(next))
      throw BlowUpError("rk4Integrate: state became non-finite", t);
    s = std::move(next);
    traj.t.push_back(static_cast<double>(n + 1) * dt);
    traj.states.push_back(s);
  }
  fillMonitors(field, traj);
}

void fillMonitors(const ReducedField& field, Trajectory& traj) {
  const SemidirectModel& M = field.model();
  const size_t n = traj.states.size();
  traj.conserved.resize(n);
  traj.energy.resize(n);
  traj.conserved_drift.resize(n);
  traj.energy_drift.resize(n);

  for (size_t i = 0; i < n; ++i) {
    const ReducedState& s = traj.states[i];
    if (M.conservedIsQt()) {
      traj.conserved[i] = s.qt;
    } else if (s.R) {
      // spatial reconstruction through the tracked so(3) factor
      traj.conserved[i] = s.R->transpose() * s.qt;
    } else {
      throw ContractError(
          "monitors: spatial reconstruction requires a tracked group element");
    }
    traj.energy[i] = field.energy(s);
  }
  const double c0 = traj.conserved[0].lpNorm<Eigen::Infinity>();
  const double e0 = std::abs(traj.energy[0]);
  for (size_t i = 0; i < n; ++i) {
    const double dc =
        (traj.conserved[i] - traj.conserved[0]).lpNorm<Eigen::Infinity>();
    traj.conserved_drift[i] = c0 > 0.0 ? dc / c0 : dc;
    const double de = std::abs(traj.energy[i] - traj.energy[0]);
    traj.energy_drift[i] = e0 > 0.0 ? de / e0 : de;
  }
}

Trajectory phiRelate(const SemidirectModel& model, const ControlledData& cd,
                     const Trajectory& forced) {
  Trajectory out;
  out.t = forced.t;
  out.states.reserve(forced.states.size());
  for (const ReducedState& s : forced.states) {
    ReducedState m;
    m.nu = cd.phi_C * s.nu;
    m.qt = cd.S * s.qt;
    m.R = s.R;
    out.states.push_back(std::move(m));
  }
  (void)model;
  return out;
}

double supGap(const Trajectory& a, const Trajectory& b) {
  require(a.states.size() == b.states.size(),
          "supGap: trajectories have different sample counts");
  double g = 0.0;
  for (size_t i = 0; i < a.states.size(); ++i) {
    g = std::max(g, (a.states[i].nu - b.states[i].nu).lpNorm<Eigen::Infinity>());
    g = std::max(g, (a.states[i].qt - b.states[i].qt).lpNorm<Eigen::Infinity>());
  }
  return g;
}

NoiseSpec::NoiseSpec(std::vector<Channel> channels)
    : channels_(std::move(channels)) {
  for (size_t i = 0; i < channels_.size(); ++i)
    for (size_t j = i + 1; j < channels_.size(); ++j)
      if (channels_[i].seed == channels_[j].seed)
        throw ConstructionError("NoiseSpec: channel seeds must be distinct");
}

std::uint64_t mixSeed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

// Deterministic standard normals: mt19937_64 uniforms through Box-Muller.
// std::normal_distribution is implementation-defined, which would break the
// byte-identical-output contract across standard libraries.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}
  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

private:
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }
  std::mt19937_64 gen_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace

Trajectory stratonovichHeun(const ReducedField& field, const ReducedState& s0,
                            const NoiseSpec& noise, double dt, double t_end,
                            std::uint64_t path_index) {
  require(dt > 0.0, "stratonovichHeun: dt must be positive");
  const long n_steps = static_cast<long>(std::llround(t_end / dt));
  const double sqdt = std::sqrt(dt);

  std::vector<GaussianStream> streams;
  streams.reserve(noise.channels().size());
  for (const auto& ch : noise.channels())
    streams.emplace_back(mixSeed(ch.seed ^ mixSeed(path_index)));

  Trajectory traj;
  traj.t.reserve(static_cast<size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<size_t>(n_steps) + 1);
  ReducedState s = withTrackingIfNeeded(field.model(), s0);
  if (!finiteState(s))
    throw BlowUpError("stratonovichHeun: non-finite initial state", 0.0);
  traj.t.push_back(0.0);
  traj.states.push_back(s);

  auto stageR = [&](const ReducedState& at) -> std::optional<Eigen::Matrix3d> {
    if (!at.R) return std::nullopt;
    return hat(Eigen::Vector3d(field.velocityM(at))) * (*at.R);
  };

  for (long n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    // channel-k field is eps_k times the drift field, so the combined
    // increment is the drift field scaled by dt + sum_k eps_k dW_k
    double dtheta = dt;
    for (size_t k = 0; k < streams.size(); ++k)
      dtheta += noise.channels()[k].epsilon * (sqdt * streams[k].next());

    const FieldEval f1 = field.eval(s);
    const auto r1 = stageR(s);
    const ReducedState pred = axpy(s, dtheta, f1, r1);
    if (!finiteState(pred))
      throw BlowUpError("stratonovichHeun: predictor became non-finite", t);
    const FieldEval f2 = field.eval(pred);
    const auto r2 = stageR(pred);

    ReducedState next;
    next.nu = s.nu + 0.5 * dtheta * (f1.dnu + f2.dnu);
    next.qt = s.qt + 0.5 * dtheta * (f1.dqt + f2.dqt);
    if (s.R) next.R = polarProject(*s.R + 0.5 * dtheta * (*r1 + *r2));
    if (!finiteState(next))
      throw BlowUpError("stratonovichHeun: state became non-finite", t);
    s = std::move(next);
    traj.t.push_back(static_cast<double>(n + 1) * dt);
    traj.states.push_back(s);
  }
  fillMonitors(field, traj);
  return traj;
}

EnsembleSummary ensembleConservedDrift(const ReducedField& field,
                                       const ReducedState& s0,
                                       const NoiseSpec& noise, double dt,
                                       double t_end, int n_paths, int threads) {
  require(n_paths > 0, "ensembleConservedDrift: n_paths must be positive");
  threads = std::max(1, threads);

  std::vector<double> drift(static_cast<size_t>(n_paths), 0.0);
  auto run_range = [&](int lo, int hi) {
    for (int p = lo; p < hi; ++p) {
      Trajectory tr = stratonovichHeun(field, s0, noise, dt, t_end,
                                       static_cast<std::uint64_t>(p));
      drift[static_cast<size_t>(p)] = tr.conserved_drift.back();
    }
  };

  if (threads == 1) {
    run_range(0, n_paths);
  } else {
    std::vector<std::future<void>> futs;
    const int chunk = (n_paths + threads - 1) / threads;
    for (int lo = 0; lo < n_paths; lo += chunk)
      futs.push_back(std::async(std::launch::async, run_range, lo,
                                std::min(lo + chunk, n_paths)));
    for (auto& f : futs) f.get();
  }

  EnsembleSummary out{0.0, 0.0};
  for (double d : drift) {
    out.drift_mean += d;
    out.drift_max = std::max(out.drift_max, d);
  }
  out.drift_mean /= static_cast<double>(n_paths);
  return out;
}

}  // namespace symact
