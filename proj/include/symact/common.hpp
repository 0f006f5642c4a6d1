#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace symact {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Thrown when a caller violates an operation contract (dimension mismatch,
/// argument out of range, side confusion between vectors and covectors).
class ContractError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when structural data fails validation at construction
/// (bracket tables, metric blocks, representation tables, parameter ranges).
class ConstructionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a gain makes 1 + C A0* (or a related operator) numerically
/// singular.  Carries the reciprocal condition estimate in the message.
class SingularGainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown by integrators when the state leaves the finite range.
class BlowUpError : public std::runtime_error {
public:
  BlowUpError(const std::string& what, double t_last)
      : std::runtime_error(what), t_last_(t_last) {}
  double lastValidTime() const { return t_last_; }

private:
  double t_last_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

inline void requireDim(const VectorXd& v, Eigen::Index n, const char* name) {
  if (v.size() != n)
    throw ContractError(std::string(name) + ": expected dimension " +
                        std::to_string(n) + ", got " + std::to_string(v.size()));
}

}  // namespace symact
