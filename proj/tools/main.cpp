#include "CLI11.hpp"

#include <cstdlib>
#include <future>
#include <iostream>

#include "symact/config.hpp"
#include "symact/io.hpp"

using namespace symact;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  double tolerance = 1e-10;
  int threads = 1;
};

RunConfig loadConfig(const CommonOpts& o) {
  RunConfig cfg = parseRunConfig(readFile(o.config_path));
  if (const char* env = std::getenv("SYMACT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw ConfigError("SYMACT_SEED: expected an unsigned integer, got '" +
                        std::string(env) + "'");
    cfg.seed = v;
  }
  return cfg;
}

void emit(const CommonOpts& o, const std::string& content) {
  if (o.out_path.empty())
    std::cout << content;
  else
    writeFile(o.out_path, content);
}

ReducedState initialState(const SemidirectModel& M, const RunConfig& cfg) {
  ReducedState s;
  s.nu = cfg.nu0 ? *cfg.nu0 : VectorXd::Zero(M.dimM());
  s.qt = cfg.qt0 ? *cfg.qt0 : VectorXd::Zero(M.dimG());
  if (s.nu.size() != M.dimM())
    throw ConfigError("config error at /nu0: expected dimension " +
                      std::to_string(M.dimM()));
  if (s.qt.size() != M.dimG())
    throw ConfigError("config error at /qt0: expected dimension " +
                      std::to_string(M.dimG()));
  return s;
}

// Channel seeds are folded with the config seed (and a per-cell shift for
// sweeps) so SYMACT_SEED reseeds every stream while distinct channels stay
// distinct.
NoiseSpec foldedNoise(const RunConfig& cfg, std::uint64_t shift) {
  std::vector<NoiseSpec::Channel> chans;
  chans.reserve(cfg.noise.size());
  for (const auto& c : cfg.noise)
    chans.push_back({c.epsilon, mixSeed(cfg.seed ^ shift ^ mixSeed(c.seed))});
  return NoiseSpec(std::move(chans));
}

int cmdSimulate(const CommonOpts& o) {
  const RunConfig cfg = loadConfig(o);
  const SemidirectModel model = modelFromJsonText(cfg.model_json);
  const ForcedField field(model);
  const ReducedState s0 = initialState(model, cfg);

  Trajectory traj;
  try {
    rk4IntegrateInto(field, s0, cfg.dt, cfg.t_end, traj);
  } catch (const BlowUpError& e) {
    if (!traj.states.empty()) {
      fillMonitors(field, traj);
      emit(o, trajectoryCsv(traj));
    }
    std::cerr << "blow-up: " << e.what() << " (last valid t = "
              << fmt17(e.lastValidTime()) << ")\n";
    return 2;
  }
  emit(o, trajectoryCsv(traj));
  return 0;
}

int cmdMatch(const CommonOpts& o) {
  const RunConfig cfg = loadConfig(o);
  const SemidirectModel model = modelFromJsonText(cfg.model_json);
  const MatchingReport rep = matchControl(model, o.tolerance);

  JsonWriter w;
  w.beginObject()
      .field("residual", rep.residual)
      .field("satisfied", rep.satisfied)
      .field("mu_C", rep.data.mu_C)
      .field("I_C", rep.data.I_C)
      .field("A_C", rep.data.A_C)
      .field("S", rep.data.S)
      .field("residual_force_norm", rep.residual_force_norm)
      .endObject();
  emit(o, w.str() + "\n");
  if (!rep.satisfied) {
    std::cerr << "matching residual " << fmt17(rep.residual)
              << " exceeds tolerance " << fmt17(o.tolerance) << "\n";
    return 3;
  }
  return 0;
}

int cmdStability(const CommonOpts& o) {
  const RunConfig cfg = loadConfig(o);
  const auto sp = satelliteFromModelJson(cfg.model_json);
  if (!sp)
    throw ConfigError(
        "config error at /model: stability needs the satellite preset");

  const StabilityWindow win = stabilityWindow(*sp);
  JsonWriter w;
  w.beginObject().field("k_lo", win.k_lo).field("k_hi", win.k_hi);
  w.beginArray("samples");
  for (size_t i = 0; i < cfg.k_samples.size(); ++i) {
    SatelliteParams p = *sp;
    p.k = cfg.k_samples[i];
    const MiddleAxisSpectrum spec = linearizeMiddleAxis(p, cfg.omega_bar);
    const DemoResult demo =
        stabilizationDemo(p, cfg.omega_bar, cfg.perturbation, cfg.demo_t_end,
                          cfg.demo_dt, mixSeed(cfg.seed ^ mixSeed(1000 + i)));
    w.elementObject()
        .field("k", p.k)
        .field("spectral_abscissa", spec.spectral_abscissa)
        .field("bounded", demo.bounded)
        .endObject();
  }
  w.endArray().endObject();
  emit(o, w.str() + "\n");
  return 0;
}

int cmdSweep(const CommonOpts& o) {
  const RunConfig cfg = loadConfig(o);
  if (!cfg.sweep)
    throw ConfigError("config error at /sweep: required for this subcommand");
  const SweepSpec& sw = *cfg.sweep;
  const bool stochastic = !cfg.noise.empty();

  // Each cell builds its own model and RNG streams and renders its complete
  // row into a slot; the merge is the index order, independent of scheduling.
  std::vector<std::string> rows(sw.values.size());
  auto runCell = [&](size_t i) {
    std::string row = std::to_string(i) + "," + fmt17(sw.values[i]);
    try {
      const std::string mj =
          overrideModelParameter(cfg.model_json, sw.parameter, sw.values[i]);
      const SemidirectModel model = modelFromJsonText(mj);
      const ForcedField field(model);
      const ReducedState s0 = initialState(model, cfg);
      if (stochastic) {
        const NoiseSpec noise = foldedNoise(cfg, mixSeed(0xce11 + i));
        const EnsembleSummary es = ensembleConservedDrift(
            field, s0, noise, cfg.dt, cfg.t_end, cfg.paths, 1);
        row += "," + fmt17(es.drift_mean) + "," + fmt17(es.drift_max) + ",ok";
      } else {
        const Trajectory tr = rk4Integrate(field, s0, cfg.dt, cfg.t_end);
        row += "," + fmt17(tr.conserved_drift.back()) + "," +
               fmt17(tr.energy_drift.back()) + ",ok";
      }
    } catch (const BlowUpError&) {
      row += ",nan,nan,blow_up";
    } catch (const SingularGainError&) {
      row += ",nan,nan,gain_singular";
    } catch (const ConstructionError&) {
      row += ",nan,nan,invalid";
    }
    rows[i] = row + "\n";
  };

  const int threads = std::max(1, o.threads);
  if (threads == 1 || rows.size() <= 1) {
    for (size_t i = 0; i < rows.size(); ++i) runCell(i);
  } else {
    std::vector<std::future<void>> futs;
    const size_t chunk = (rows.size() + threads - 1) / threads;
    for (size_t lo = 0; lo < rows.size(); lo += chunk)
      futs.push_back(std::async(std::launch::async, [&, lo] {
        for (size_t i = lo; i < std::min(lo + chunk, rows.size()); ++i)
          runCell(i);
      }));
    for (auto& f : futs) f.get();
  }

  std::string out = stochastic
                        ? "index,value,drift_mean,drift_max,status\n"
                        : "index,value,conserved_drift,energy_drift,status\n";
  for (const std::string& r : rows) out += r;
  emit(o, out);
  return 0;
}

int cmdStochastic(const CommonOpts& o) {
  const RunConfig cfg = loadConfig(o);
  if (cfg.noise.empty())
    throw ConfigError("config error at /noise: at least one channel required");
  const SemidirectModel model = modelFromJsonText(cfg.model_json);
  const ForcedField field(model);
  const ReducedState s0 = initialState(model, cfg);
  const NoiseSpec noise = foldedNoise(cfg, 0);

  const EnsembleSummary full = ensembleConservedDrift(
      field, s0, noise, cfg.dt, cfg.t_end, cfg.paths, o.threads);
  const EnsembleSummary half = ensembleConservedDrift(
      field, s0, noise, 0.5 * cfg.dt, cfg.t_end, cfg.paths, o.threads);
  const double ratio = full.drift_mean / half.drift_mean;

  JsonWriter w;
  w.beginObject()
      .field("paths", static_cast<double>(cfg.paths))
      .field("dt", cfg.dt)
      .field("drift_mean", full.drift_mean)
      .field("drift_max", full.drift_max);
  w.beginObject("halved")
      .field("dt", 0.5 * cfg.dt)
      .field("drift_mean", half.drift_mean)
      .field("drift_max", half.drift_max)
      .endObject();
  w.fieldOrNull("ratio_mean", ratio).endObject();
  emit(o, w.str() + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"controlled semidirect-product mechanics experiments"};
  app.require_subcommand(1);

  CommonOpts o;
  auto addCommon = [&](CLI::App* sub, bool out_required) {
    sub->add_option("--config", o.config_path, "JSON run configuration")
        ->required();
    auto* out = sub->add_option("--out", o.out_path,
                                "output path (stdout when omitted)");
    if (out_required) out->required();
    sub->add_option("--tolerance", o.tolerance, "matching tolerance");
    sub->add_option("--threads", o.threads, "worker threads");
  };

  auto* sim = app.add_subcommand(
      "simulate", "integrate the forced system and write a trajectory CSV");
  addCommon(sim, true);
  auto* mat = app.add_subcommand(
      "match", "matching residual and controlled-data report");
  addCommon(mat, false);
  auto* stab = app.add_subcommand(
      "stability", "satellite gain window, spectra and demo runs");
  addCommon(stab, false);
  auto* swp =
      app.add_subcommand("sweep", "grid of runs over k or gamma");
  addCommon(swp, true);
  auto* sto = app.add_subcommand(
      "stochastic", "ensemble conserved-drift summary with dt halving");
  addCommon(sto, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmdSimulate(o);
    if (mat->parsed()) return cmdMatch(o);
    if (stab->parsed()) return cmdStability(o);
    if (swp->parsed()) return cmdSweep(o);
    return cmdStochastic(o);
  } catch (const BlowUpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
