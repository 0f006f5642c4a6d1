#pragma once

#include <random>
#include <string>

#include "symact/config.hpp"

namespace symact::testutil {

inline VectorXd randomVec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline SemidirectModel so3r3Model(const std::string& extra = "") {
  std::string json = "{\"preset\":\"so3_r3\"";
  if (!extra.empty()) json += "," + extra;
  json += "}";
  return modelFromJsonText(json);
}

/// Dense gain that breaks the matching condition on the so(3) |x R^3 preset.
inline std::string denseGainJson() {
  return "\"C\": [[0.11, -0.07, 0.05], [0.04, 0.09, -0.03], [-0.06, 0.02, 0.08]]";
}

}  // namespace symact::testutil
