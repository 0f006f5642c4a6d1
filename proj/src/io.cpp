#include "symact/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace symact {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectoryCsv(const Trajectory& traj) {
  require(!traj.states.empty(), "trajectoryCsv: empty trajectory");
  require(traj.conserved.size() == traj.states.size(),
          "trajectoryCsv: monitors not filled");
  const Eigen::Index dm = traj.states[0].nu.size();
  const Eigen::Index dg = traj.states[0].qt.size();

  std::string out;
  out.reserve(traj.states.size() * 64);
  out += "t";
  for (Eigen::Index i = 1; i <= dm; ++i) out += ",nu_" + std::to_string(i);
  for (Eigen::Index i = 1; i <= dg; ++i) out += ",qt_" + std::to_string(i);
  for (Eigen::Index i = 1; i <= dg; ++i) out += ",conserved_" + std::to_string(i);
  out += ",energy,conserved_drift,energy_drift\n";

  for (size_t n = 0; n < traj.states.size(); ++n) {
    out += fmt17(traj.t[n]);
    const ReducedState& s = traj.states[n];
    for (Eigen::Index i = 0; i < dm; ++i) out += "," + fmt17(s.nu[i]);
    for (Eigen::Index i = 0; i < dg; ++i) out += "," + fmt17(s.qt[i]);
    for (Eigen::Index i = 0; i < dg; ++i) out += "," + fmt17(traj.conserved[n][i]);
    out += "," + fmt17(traj.energy[n]);
    out += "," + fmt17(traj.conserved_drift[n]);
    out += "," + fmt17(traj.energy_drift[n]);
    out += "\n";
  }
  return out;
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string matrixJson(const MatrixXd& M) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    if (r) out += ",";
    out += "[";
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) out += ",";
      out += fmt17(M(r, c));
    }
    out += "]";
  }
  out += "]";
  return out;
}

void JsonWriter::comma() {
  if (!first_.empty()) {
    if (!first_.back()) out_ += ",";
    first_.back() = false;
  }
}

void JsonWriter::key(const std::string& k) {
  comma();
  out_ += "\"" + k + "\":";
}

JsonWriter& JsonWriter::beginObject() {
  comma();
  out_ += "{";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::beginObject(const std::string& k) {
  key(k);
  out_ += "{";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::endObject() {
  out_ += "}";
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::beginArray(const std::string& k) {
  if (!k.empty())
    key(k);
  else
    comma();
  out_ += "[";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::endArray() {
  out_ += "]";
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, double v) {
  key(k);
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, bool v) {
  key(k);
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& v) {
  key(k);
  out_ += "\"" + v + "\"";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const MatrixXd& v) {
  key(k);
  out_ += matrixJson(v);
  return *this;
}

JsonWriter& JsonWriter::element(double v) {
  comma();
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::elementObject() {
  return beginObject();
}

JsonWriter& JsonWriter::fieldOrNull(const std::string& k, double v) {
  key(k);
  out_ += std::isfinite(v) ? fmt17(v) : "null";
  return *this;
}

}  // namespace symact
