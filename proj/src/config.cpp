#include "symact/config.hpp"

#include "json.hpp"

#include <set>

namespace symact {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

json parseText(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config error at " + path + ": " + e.what());
  }
}

double numberAt(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t seedAt(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<double>() < 0)
    fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

VectorXd vectorAt(const json& j, const std::string& path) {
  if (j.is_number()) {
    VectorXd v(1);
    v[0] = j.get<double>();
    return v;
  }
  if (!j.is_array()) fail(path, "expected an array of numbers");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      fail(path + "/" + std::to_string(i), "expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

MatrixXd matrixAt(const json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(path, "expected " + std::to_string(rows) + " rows");
  MatrixXd M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    const std::string rpath = path + "/row " + std::to_string(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(rpath, "expected " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      if (!row[static_cast<size_t>(c)].is_number())
        fail(rpath + "/" + std::to_string(c), "expected a number");
      M(r, c) = row[static_cast<size_t>(c)].get<double>();
    }
  }
  return M;
}

void rejectUnknownKeys(const json& j, const std::string& path,
                       std::set<std::string> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
  }
}

SatelliteParams satelliteParamsAt(const json& j, const std::string& path) {
  rejectUnknownKeys(j, path, {"preset", "I", "i", "k"});
  SatelliteParams p;
  if (j.contains("I")) {
    const VectorXd I = vectorAt(j["I"], path + "/I");
    if (I.size() != 3) fail(path + "/I", "expected 3 carrier moments");
    p.I1 = I[0];
    p.I2 = I[1];
    p.I3 = I[2];
  }
  if (j.contains("i")) {
    const VectorXd i = vectorAt(j["i"], path + "/i");
    if (i.size() != 3) fail(path + "/i", "expected 3 rotor moments");
    p.i1 = i[0];
    p.i2 = i[1];
    p.i3 = i[2];
  }
  if (j.contains("k")) p.k = numberAt(j["k"], path + "/k");
  return p;
}

SemidirectModel modelFromJson(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");

  if (j.contains("preset")) {
    if (!j["preset"].is_string()) fail(path + "/preset", "expected a string");
    const std::string name = j["preset"].get<std::string>();
    if (name == "satellite")
      return buildSatellite(satelliteParamsAt(j, path));
    if (name == "so3_r3") {
      rejectUnknownKeys(j, path, {"preset", "mu_M", "I0", "A0", "C", "gamma"});
      AlgebraPair p = algebraFromJson("\"so3_semidirect_r3\"");
      KKData kk;
      kk.mu_M = Eigen::Vector3d(3.3, 2.3, 1.2).asDiagonal();
      kk.I0 = 0.2 * MatrixXd::Identity(3, 3);
      kk.A0 = MatrixXd::Zero(3, 3);
      kk.A0(0, 2) = 1.0;
      if (j.contains("mu_M")) kk.mu_M = matrixAt(j["mu_M"], path + "/mu_M", 3, 3);
      if (j.contains("I0")) kk.I0 = matrixAt(j["I0"], path + "/I0", 3, 3);
      if (j.contains("A0")) kk.A0 = matrixAt(j["A0"], path + "/A0", 3, 3);
      if (j.contains("gamma") && j.contains("C"))
        fail(path, "'gamma' and 'C' are mutually exclusive");
      MatrixXd C = MatrixXd::Zero(3, 3);
      if (j.contains("gamma"))
        C = gammaFamilyC(kk, numberAt(j["gamma"], path + "/gamma"));
      else if (j.contains("C"))
        C = matrixAt(j["C"], path + "/C", 3, 3);
      return SemidirectModel(std::move(p.m), std::move(p.g), std::move(p.rep),
                             std::move(kk), ControlGain{std::move(C)});
    }
    fail(path + "/preset", "unknown preset '" + name + "'");
  }

  rejectUnknownKeys(j, path, {"algebra", "mu_M", "I0", "A0", "C"});
  for (const char* key : {"algebra", "mu_M", "I0", "A0"})
    if (!j.contains(key)) fail(path, std::string("missing key '") + key + "'");

  AlgebraPair p = [&] {
    try {
      return algebraFromJson(j["algebra"].dump());
    } catch (const ConstructionError& e) {
      fail(path + "/algebra", e.what());
    }
  }();
  const int dm = p.m.dim();
  const int dg = p.g.dim();

  KKData kk;
  kk.mu_M = matrixAt(j["mu_M"], path + "/mu_M", dm, dm);
  kk.I0 = matrixAt(j["I0"], path + "/I0", dg, dg);
  kk.A0 = matrixAt(j["A0"], path + "/A0", dg, dm);

  MatrixXd C = MatrixXd::Zero(dg, dm);
  if (j.contains("C")) {
    const json& cj = j["C"];
    if (cj.is_array()) {
      C = matrixAt(cj, path + "/C", dg, dm);
    } else if (cj.is_object() && cj.contains("gamma")) {
      rejectUnknownKeys(cj, path + "/C", {"gamma"});
      C = gammaFamilyC(kk, numberAt(cj["gamma"], path + "/C/gamma"));
    } else if (cj.is_object() && cj.contains("satellite_k")) {
      rejectUnknownKeys(cj, path + "/C", {"satellite_k"});
      if (dg != 1 || dm != 3)
        fail(path + "/C/satellite_k", "needs dim_m = 3 and dim_g = 1");
      C(0, 2) = -numberAt(cj["satellite_k"], path + "/C/satellite_k");
    } else {
      fail(path + "/C", "expected a matrix, {\"gamma\": x} or {\"satellite_k\": x}");
    }
  }
  return SemidirectModel(std::move(p.m), std::move(p.g), std::move(p.rep),
                         std::move(kk), ControlGain{std::move(C)});
}

}  // namespace

SemidirectModel modelFromJsonText(const std::string& json_text) {
  return modelFromJson(parseText(json_text, "/model"), "/model");
}

std::string overrideModelParameter(const std::string& json_text,
                                   const std::string& parameter, double value) {
  json j = parseText(json_text, "/model");
  if (!j.is_object()) fail("/model", "expected an object");

  if (j.contains("preset")) {
    const std::string name = j["preset"].get<std::string>();
    if (name == "satellite" && parameter == "k") {
      j["k"] = value;
      return j.dump();
    }
    if (name == "so3_r3" && parameter == "gamma") {
      j.erase("C");
      j["gamma"] = value;
      return j.dump();
    }
    fail("/model", "preset '" + name + "' has no sweep parameter '" +
                       parameter + "'");
  }
  if (parameter == "gamma") {
    j["C"] = json{{"gamma", value}};
    return j.dump();
  }
  if (parameter == "k") {
    j["C"] = json{{"satellite_k", value}};
    return j.dump();
  }
  fail("/sweep/parameter", "unknown parameter '" + parameter + "'");
}

std::optional<SatelliteParams> satelliteFromModelJson(
    const std::string& json_text) {
  json j = parseText(json_text, "/model");
  if (!j.is_object() || !j.contains("preset") || !j["preset"].is_string() ||
      j["preset"].get<std::string>() != "satellite")
    return std::nullopt;
  return satelliteParamsAt(j, "/model");
}

RunConfig parseRunConfig(const std::string& json_text) {
  json j = parseText(json_text, "/");
  if (!j.is_object()) fail("/", "expected a configuration object");
  rejectUnknownKeys(j, "/",
                    {"model", "dt", "t_end", "nu0", "qt0", "seed", "noise",
                     "paths", "sweep", "k_samples", "omega_bar", "perturbation",
                     "demo_t_end", "demo_dt"});
  if (!j.contains("model")) fail("/", "missing key 'model'");

  RunConfig cfg;
  cfg.model_json = j["model"].dump();
  if (j.contains("dt")) cfg.dt = numberAt(j["dt"], "/dt");
  if (!(cfg.dt > 0.0)) fail("/dt", "must be positive");
  if (j.contains("t_end")) cfg.t_end = numberAt(j["t_end"], "/t_end");
  if (cfg.t_end < 0.0) fail("/t_end", "must be nonnegative");
  if (j.contains("nu0")) cfg.nu0 = vectorAt(j["nu0"], "/nu0");
  if (j.contains("qt0")) cfg.qt0 = vectorAt(j["qt0"], "/qt0");
  if (j.contains("seed")) cfg.seed = seedAt(j["seed"], "/seed");

  if (j.contains("noise")) {
    if (!j["noise"].is_array()) fail("/noise", "expected an array of channels");
    for (size_t i = 0; i < j["noise"].size(); ++i) {
      const json& ch = j["noise"][i];
      const std::string cpath = "/noise/" + std::to_string(i);
      if (!ch.is_object() || !ch.contains("epsilon"))
        fail(cpath, "expected {\"epsilon\": x, \"seed\": n}");
      rejectUnknownKeys(ch, cpath, {"epsilon", "seed"});
      NoiseSpec::Channel c;
      c.epsilon = numberAt(ch["epsilon"], cpath + "/epsilon");
      c.seed = ch.contains("seed") ? seedAt(ch["seed"], cpath + "/seed")
                                   : static_cast<std::uint64_t>(i);
      cfg.noise.push_back(c);
    }
  }

  if (j.contains("paths")) {
    if (!j["paths"].is_number_integer() || j["paths"].get<int>() < 1)
      fail("/paths", "expected a positive integer");
    cfg.paths = j["paths"].get<int>();
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object() || !s.contains("parameter"))
      fail("/sweep", "expected {\"parameter\": ..., \"values\" | \"from\"/\"to\"/\"count\"}");
    rejectUnknownKeys(s, "/sweep", {"parameter", "values", "from", "to", "count"});
    SweepSpec sw;
    if (!s["parameter"].is_string())
      fail("/sweep/parameter", "expected a string");
    sw.parameter = s["parameter"].get<std::string>();
    if (sw.parameter != "k" && sw.parameter != "gamma")
      fail("/sweep/parameter", "expected \"k\" or \"gamma\"");
    if (s.contains("values")) {
      const VectorXd v = vectorAt(s["values"], "/sweep/values");
      for (Eigen::Index i = 0; i < v.size(); ++i) sw.values.push_back(v[i]);
    } else {
      for (const char* key : {"from", "to", "count"})
        if (!s.contains(key)) fail("/sweep", std::string("missing key '") + key + "'");
      const double lo = numberAt(s["from"], "/sweep/from");
      const double hi = numberAt(s["to"], "/sweep/to");
      if (!s["count"].is_number_integer() || s["count"].get<int>() < 2)
        fail("/sweep/count", "expected an integer >= 2");
      const int n = s["count"].get<int>();
      for (int i = 0; i < n; ++i)
        sw.values.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(n - 1));
    }
    if (sw.values.empty()) fail("/sweep/values", "must not be empty");
    cfg.sweep = std::move(sw);
  }

  cfg.k_samples = {0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9};
  if (j.contains("k_samples")) {
    const VectorXd v = vectorAt(j["k_samples"], "/k_samples");
    if (v.size() == 0) fail("/k_samples", "must not be empty");
    cfg.k_samples.assign(v.data(), v.data() + v.size());
  }
  if (j.contains("omega_bar")) cfg.omega_bar = numberAt(j["omega_bar"], "/omega_bar");
  if (j.contains("perturbation")) {
    cfg.perturbation = numberAt(j["perturbation"], "/perturbation");
    if (!(cfg.perturbation > 0.0)) fail("/perturbation", "must be positive");
  }
  if (j.contains("demo_t_end")) {
    cfg.demo_t_end = numberAt(j["demo_t_end"], "/demo_t_end");
    if (!(cfg.demo_t_end > 0.0)) fail("/demo_t_end", "must be positive");
  }
  if (j.contains("demo_dt")) {
    cfg.demo_dt = numberAt(j["demo_dt"], "/demo_dt");
    if (!(cfg.demo_dt > 0.0)) fail("/demo_dt", "must be positive");
  }
  return cfg;
}

}  // namespace symact
