#pragma once

#include "rsim/decomp.hpp"
#include "rsim/distlib.hpp"
#include "rsim/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rsim {

enum class RegenMode { Primary, Alternative };

std::string to_string(RegenMode mode);

struct ClassSpec {
  std::string name;
  int station = 0;                            // 0-based
  std::optional<DensityFamily> interarrival;  // absent: null exogenous class
  DensityFamily service;
  std::optional<LambdaChoice> decompose;
};

/// Multiclass open network with single-server FIFO stations. Exogenous
/// classes come first; classes without an interarrival law are null.
struct NetworkConfig {
  int stations = 0;
  std::vector<ClassSpec> classes;
  MatrixXd routing;  // K x K, P(k -> l) on service completion

  int num_classes() const { return static_cast<int>(classes.size()); }
  /// Number of non-null exogenous classes.
  int num_exogenous() const;
  /// Classes served at `station`.
  std::vector<int> constituency(int station) const;

  VectorXd exogenous_rates() const;  // alpha_k, zero for null classes
  VectorXd service_rates() const;    // mu_k

  /// Structural checks: station indices, routing shape and row sums,
  /// exogenous classes listed first. Throws ConfigInvalid.
  void check() const;
};

struct TrafficSolution {
  VectorXd sigma;  // effective arrival rate per class
  VectorXd rho;    // nominal load per station
  double residual = 0.0;

  bool stable() const { return (rho.array() < 1.0).all(); }
};

/// sigma = (I - P')^{-1} alpha and rho_i = sum over C_i of sigma_k / mu_k.
/// Throws SingularRouting when I - P' is singular or its inverse has negative
/// entries (closed network), Unstable when some rho_i >= 1 unless allowed.
TrafficSolution solve_traffic(const NetworkConfig& cfg, bool allow_unstable = false);

enum class CheckStatus { Pass, Fail, Unverified, Info };

std::string to_string(CheckStatus s);

struct AssumptionCheck {
  std::string id;  // "A2", "A3", ...
  int cls = -1;    // 0-based class, -1 for network-wide checks
  int station = -1;
  CheckStatus status = CheckStatus::Info;
  std::string detail;
  double value = 0.0;
};

struct ValidationReport {
  RegenMode mode = RegenMode::Primary;
  std::vector<AssumptionCheck> checks;

  bool ok() const;
  std::vector<AssumptionCheck> failures() const;
};

ValidationReport validate_assumptions(const NetworkConfig& cfg, RegenMode mode);

}  // namespace rsim
