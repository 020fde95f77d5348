#pragma once

// Independent references for verification. Nothing here calls the distlib
// densities or samplers; CDFs and quantiles are rebuilt from Boost.Math
// special functions so that agreement means something.

#include "rsim/decomp.hpp"
#include "rsim/distlib.hpp"
#include "rsim/random.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rsim::oracle {

/// rho / (1 - rho) for M/M/1. Throws Unstable for lambda >= mu.
double mm1_mean_number(double lambda, double mu);

/// Mean of the M/M/1 birth-death chain truncated at `cap` customers,
/// summed directly from the unnormalised geometric weights.
double birth_death_mean(double lambda, double mu, int cap);

/// Pollaczek-Khinchine: rho + lambda^2 E[S^2] / (2 (1 - rho)).
/// Throws Unstable or InfiniteSecondMoment.
double mg1_mean_number(double lambda, const DensityFamily& service);

/// E[S] and E[S^2] from closed forms written out here.
double first_moment(const DensityFamily& fam);
double second_moment(const DensityFamily& fam);

double reference_cdf(const DensityFamily& fam, double x);
double reference_quantile(const DensityFamily& fam, double p);
double reference_sample(const DensityFamily& fam, Stream& rng);

struct KSReport {
  double statistic = 0.0;
  double critical = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  bool pass = false;
};

/// Asymptotic Kolmogorov critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2);
/// 1.9495 at alpha = 0.001.
double ks_coefficient(double alpha);

KSReport ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf,
                       double alpha = 0.001);
KSReport ks_two_sample(std::vector<double> xs, std::vector<double> ys, double alpha = 0.001);

/// n draws of the decomposed sampler against n independent reference draws.
KSReport decomposition_law_check(const DensityFamily& fam, const Decomposition& dec,
                                 std::size_t n, std::uint64_t seed, double alpha = 0.001);

}  // namespace rsim::oracle
