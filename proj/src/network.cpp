#include "rsim/network.hpp"

#include "rsim/error.hpp"

#include <cmath>
#include <sstream>

namespace rsim {

std::string to_string(RegenMode mode) {
  return mode == RegenMode::Primary ? "primary" : "alternative";
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Unverified: return "unverified";
    case CheckStatus::Info: return "info";
  }
  return "?";
}

int NetworkConfig::num_exogenous() const {
  int n = 0;
  for (const auto& c : classes) n += c.interarrival.has_value() ? 1 : 0;
  return n;
}

std::vector<int> NetworkConfig::constituency(int station) const {
  std::vector<int> out;
  for (int k = 0; k < num_classes(); ++k) {
    if (classes[k].station == station) out.push_back(k);
  }
  return out;
}

VectorXd NetworkConfig::exogenous_rates() const {
  VectorXd alpha = VectorXd::Zero(num_classes());
  for (int k = 0; k < num_classes(); ++k) {
    if (classes[k].interarrival) alpha(k) = 1.0 / classes[k].interarrival->mean();
  }
  return alpha;
}

VectorXd NetworkConfig::service_rates() const {
  VectorXd mu(num_classes());
  for (int k = 0; k < num_classes(); ++k) mu(k) = 1.0 / classes[k].service.mean();
  return mu;
}

void NetworkConfig::check() const {
  const int K = num_classes();
  if (stations <= 0) throw Error(ErrorCode::ConfigInvalid, "need at least one station");
  if (K == 0) throw Error(ErrorCode::ConfigInvalid, "need at least one class");
  if (routing.rows() != K || routing.cols() != K) {
    throw Error(ErrorCode::ConfigInvalid, "routing matrix must be K x K");
  }
  if ((routing.array() < 0.0).any()) {
    throw Error(ErrorCode::ConfigInvalid, "routing probabilities must be non-negative");
  }
  for (int k = 0; k < K; ++k) {
    if (routing.row(k).sum() > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "routing row " << k + 1 << " sums above 1";
      throw Error(ErrorCode::ConfigInvalid, os.str());
    }
    if (classes[k].station < 0 || classes[k].station >= stations) {
      throw Error(ErrorCode::ConfigInvalid, "class station index out of range");
    }
  }
  const int L = num_exogenous();
  if (L == 0) throw Error(ErrorCode::ConfigInvalid, "need at least one exogenous class");
  for (int k = 0; k < L; ++k) {
    if (!classes[k].interarrival) {
      throw Error(ErrorCode::ConfigInvalid, "exogenous classes must be listed first");
    }
  }
}

TrafficSolution solve_traffic(const NetworkConfig& cfg, bool allow_unstable) {
  cfg.check();
  const int K = cfg.num_classes();
  const MatrixXd A = MatrixXd::Identity(K, K) - cfg.routing.transpose();
  Eigen::FullPivLU<MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::SingularRouting, "I - P' is singular");
  }
  // (I - P')^{-1} = sum of (P')^n must be entrywise non-negative for an open network.
  if ((lu.inverse().array() < -1e-12).any()) {
    throw Error(ErrorCode::SingularRouting, "routing does not describe an open network");
  }

  const VectorXd alpha = cfg.exogenous_rates();
  TrafficSolution sol;
  sol.sigma = lu.solve(alpha);
  sol.residual = (sol.sigma - alpha - cfg.routing.transpose() * sol.sigma).lpNorm<Eigen::Infinity>();

  const VectorXd mu = cfg.service_rates();
  sol.rho = VectorXd::Zero(cfg.stations);
  for (int k = 0; k < K; ++k) sol.rho(cfg.classes[k].station) += sol.sigma(k) / mu(k);

  if (!allow_unstable && !sol.stable()) {
    std::ostringstream os;
    os << "nominal load >= 1 at some station (rho = " << sol.rho.transpose() << ")";
    throw Error(ErrorCode::Unstable, os.str());
  }
  return sol;
}

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return false;
  }
  return true;
}

std::vector<AssumptionCheck> ValidationReport::failures() const {
  std::vector<AssumptionCheck> out;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) out.push_back(c);
  }
  return out;
}

ValidationReport validate_assumptions(const NetworkConfig& cfg, RegenMode mode) {
  ValidationReport rep;
  rep.mode = mode;
  auto add = [&](AssumptionCheck c) { rep.checks.push_back(std::move(c)); };

  try {
    cfg.check();
  } catch (const Error& e) {
    add({"structure", -1, -1, CheckStatus::Fail, e.what()});
    return rep;
  }
  const int K = cfg.num_classes();
  const int L = cfg.num_exogenous();

  // A2: largest finite moment order over all primitives
  double p = kInf;
  for (int k = 0; k < K; ++k) {
    const auto& c = cfg.classes[k];
    double pk = moment_order(c.service);
    if (c.interarrival) pk = std::min(pk, moment_order(*c.interarrival));
    p = std::min(p, pk);
    std::ostringstream os;
    os << "moments of order < " << pk << " finite";
    add({"A2", k, -1, pk > 1.0 ? CheckStatus::Pass : CheckStatus::Fail, os.str(), pk});
  }

  // A3: decomposable interarrival laws
  const int first = mode == RegenMode::Primary ? 1 : 0;
  for (int k = 0; k < L; ++k) {
    const auto& fam = *cfg.classes[k].interarrival;
    AssumptionCheck c{"A3", k, -1, CheckStatus::Pass, ""};
    try {
      const Decomposition dec =
          build_decomposition(fam, cfg.classes[k].decompose.value_or(LambdaChoice::minimal()));
      std::ostringstream os;
      os << fam.describe() << ": lambda_f = " << dec.lambda_f << ", lambda = " << dec.lambda
         << ", q_bar = " << dec.q_bar;
      c.detail = os.str();
      c.value = dec.lambda_f;
      if (k < first) c.status = CheckStatus::Info;
    } catch (const Error& e) {
      c.detail = fam.describe() + ": " + e.what();
      c.value = kInf;
      c.status = k < first ? CheckStatus::Info : CheckStatus::Fail;
    }
    add(c);
  }

  // A4: every built-in continuous law is spread out
  add({"A4", 0, -1, CheckStatus::Pass, cfg.classes[0].interarrival->describe() + " has a density"});

  // A5: class-1 interarrivals unbounded, or every service law reaches 0
  {
    const bool unbounded = !std::isfinite(cfg.classes[0].interarrival->support_right());
    bool services_at_zero = true;
    for (const auto& c : cfg.classes) services_at_zero &= c.service.support_edge() <= 0.0;
    const bool ok = unbounded || services_at_zero;
    add({"A5", 0, -1, ok ? CheckStatus::Pass : CheckStatus::Unverified,
         unbounded ? "class-1 interarrival unbounded"
                   : (services_at_zero ? "all service laws have support reaching 0"
                                       : "sufficient conditions do not apply")});
  }

  // routing and nominal load
  try {
    const TrafficSolution sol = solve_traffic(cfg, /*allow_unstable=*/true);
    add({"routing", -1, -1, CheckStatus::Pass, "(I - P')^{-1} exists and is non-negative",
         sol.residual});
    for (int i = 0; i < cfg.stations; ++i) {
      std::ostringstream os;
      os << "rho = " << sol.rho(i);
      add({"stability", -1, i, sol.rho(i) < 1.0 ? CheckStatus::Pass : CheckStatus::Fail, os.str(),
           sol.rho(i)});
    }
  } catch (const Error& e) {
    add({"routing", -1, -1, CheckStatus::Fail, e.what()});
  }
  return rep;
}

}  // namespace rsim
