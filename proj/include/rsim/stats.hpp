#pragma once

// Regenerative estimators over completed cycles (R_i, tau_i).
//
//   beta = sum R / sum tau,   W_i = R_i - beta tau_i
//   s^2  = sum W^2 / sum tau, b = 2 sum W tau / sum tau
//   K    = sum (W^2 - s^2 tau - b W)^2 / (4 s^2 sum tau)

#include "rsim/regen.hpp"
#include "rsim/types.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace rsim {

/// Sufficient statistics: S(i, j) = sum R^i tau^j for i + j <= 4.
class EstimatorAccumulator {
 public:
  using Sums = Eigen::Matrix<long double, 5, 5>;

  EstimatorAccumulator() : sums_(Sums::Zero()) {}

  void add(double R, double tau);
  void add(const CycleRecord& c) { add(c.R, c.tau); }
  void merge(const EstimatorAccumulator& other);

  std::uint64_t count() const { return n_; }
  long double sum(int i, int j) const { return sums_(i, j); }
  const Sums& sums() const { return sums_; }
  double horizon_used() const { return static_cast<double>(sums_(0, 1)); }

 private:
  Sums sums_;
  std::uint64_t n_ = 0;
};

EstimatorAccumulator accumulate(std::span<const CycleRecord> cycles);

double beta_hat(const EstimatorAccumulator& acc);
double s_hat(const EstimatorAccumulator& acc);
double b_hat(const EstimatorAccumulator& acc);
/// Moment form of K from the stored sums.
double avsde_hat(const EstimatorAccumulator& acc);

/// Two-pass forms over explicit cycle lists.
double s_two_pass(std::span<const CycleRecord> cycles);
double b_two_pass(std::span<const CycleRecord> cycles);
double avsde_two_pass(std::span<const CycleRecord> cycles);

/// Standard normal quantile, Wichura's AS241 (PPND16), |relative error| < 1e-15.
double normal_quantile(double p);
/// z with P(-z <= N(0,1) <= z) = level.
double two_sided_z(double level);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double halfwidth() const { return 0.5 * (hi - lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// beta +- z s / sqrt(t), t = sum of completed tau.
Interval confidence_interval(const EstimatorAccumulator& acc, double level);

/// (1/t) times the integral of h over the whole horizon, fragments included.
double time_average(const RunResult& run);

struct Report {
  std::uint64_t n_cycles = 0;
  double t_cycles = 0.0;
  double beta = 0.0;
  std::optional<double> s;
  std::optional<double> tavc;
  std::optional<double> b;
  std::optional<double> avsde;
  std::optional<Interval> ci;
  double level = 0.95;
  double z = 0.0;
  std::optional<double> r_time_average;
  std::string note;  // reason for any missing field
};

/// Fills every estimator the cycle count allows; never throws for N >= 1.
Report make_report(const EstimatorAccumulator& acc, double level);

}  // namespace rsim
