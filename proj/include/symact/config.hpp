#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symact/dynamics.hpp"
#include "symact/satellite.hpp"

namespace symact {

/// Thrown on schema violations; the message names the JSON path of the
/// offending field (e.g. "/model/mu_M/row 2").
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string parameter;  // "k" or "gamma"
  std::vector<double> values;
};

/// Parsed run configuration.  The model is kept as raw JSON text so sweep
/// cells can rebuild it with one parameter overridden.
struct RunConfig {
  std::string model_json;
  double dt = 1e-3;
  double t_end = 10.0;
  std::optional<VectorXd> nu0;  // defaults to zeros of the model dimension
  std::optional<VectorXd> qt0;
  std::uint64_t seed = 0;
  std::vector<NoiseSpec::Channel> noise;
  int paths = 64;
  std::optional<SweepSpec> sweep;

  // stability subcommand
  std::vector<double> k_samples;
  double omega_bar = 1.0;
  double perturbation = 1e-3;
  double demo_t_end = 50.0;
  double demo_dt = 2e-3;
};

RunConfig parseRunConfig(const std::string& json_text);

/// Build a model from the JSON text of a config "model" value.  Accepts
/// {"preset": "satellite"|"so3_r3", ...parameters} or the inline form
/// {"algebra": ..., "mu_M": ..., "I0": ..., "A0": ..., "C": ...} where "C" is
/// a matrix, {"gamma": x} or {"satellite_k": x}.
SemidirectModel modelFromJsonText(const std::string& json_text);

/// Re-serialize model JSON with the sweep parameter ("k" or "gamma")
/// replaced by the given value.  Throws ConfigError when the model form has
/// no such parameter.
std::string overrideModelParameter(const std::string& json_text,
                                   const std::string& parameter, double value);

/// Satellite parameters when the model JSON is the satellite preset.
std::optional<SatelliteParams> satelliteFromModelJson(
    const std::string& json_text);

}  // namespace symact
