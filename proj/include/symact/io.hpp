#pragma once

#include <string>
#include <vector>

#include "symact/dynamics.hpp"

namespace symact {

/// Shortest text form named by the output contract: %.17g round-trips any
/// double exactly.
std::string fmt17(double v);

/// Trajectory CSV with the mandatory header
///   t, nu_1.., qt_1.., conserved_1.., energy, conserved_drift, energy_drift
std::string trajectoryCsv(const Trajectory& traj);

void writeFile(const std::string& path, const std::string& content);
std::string readFile(const std::string& path);

/// Minimal deterministic JSON writer for reports: keys in insertion order,
/// numbers through fmt17.  nlohmann's emitter uses shortest-round-trip
/// formatting, which breaks the fixed 17-significant-digit contract.
class JsonWriter {
public:
  JsonWriter& beginObject();
  JsonWriter& beginObject(const std::string& key);
  JsonWriter& endObject();
  JsonWriter& beginArray(const std::string& key = "");
  JsonWriter& endArray();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& field(const std::string& key, const MatrixXd& v);
  JsonWriter& element(double v);
  JsonWriter& elementObject();
  /// Emits null for non-finite v (JSON has no literal for those).
  JsonWriter& fieldOrNull(const std::string& key, double v);
  std::string str() const { return out_; }

private:
  void comma();
  void key(const std::string& k);
  std::string out_;
  std::vector<bool> first_;
};

std::string matrixJson(const MatrixXd& M);

}  // namespace symact
