#pragma once

// Distribution families used for interarrival and service times.
//
// Every family exposes its density f, distribution function F, survival
// function, the score -f'/f in closed form, and a sampler. The score is what
// decides whether an exponential component can be split off: its supremum
// over the support interior is lambda_f.
//
// Parameterisations follow the queueing literature this library targets:
//   Pareto     P(X > x) = (1 + scale*x)^(-shape)           (Lomax form)
//   Weibull    P(X > x) = exp(-(scale*x)^shape)            (scale is a rate)
//   Gamma      density rate^shape x^(shape-1) e^(-rate x) / Gamma(shape)
//   HyperExp2  density p1 r1 e^(-r1 x) + (1-p1) r2 e^(-r2 x), stored with r1 >= r2

#include "rsim/random.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace rsim {

class DensityFamily;

namespace family {

struct Exponential {
  double rate;
};
struct Gamma {
  double shape;
  double rate;
};
struct Lognormal {
  double mu;
  double sigma2;
};
struct Pareto {
  double shape;
  double scale;
};
struct HyperExp2 {
  double p1;
  double rate1;
  double rate2;
};
struct Weibull {
  double shape;
  double scale;
};
struct Uniform {
  double lo;
  double hi;
};
/// Law of X conditioned on X >= cut.
struct TruncatedTail {
  std::shared_ptr<const DensityFamily> parent;
  double cut;
};
/// Law of X conditioned on X < cut.
struct TruncatedHead {
  std::shared_ptr<const DensityFamily> parent;
  double cut;
};
/// E + W with E ~ Exp(rate) and W ~ Weibull(shape, scale), shape >= 1.
/// The exponential component is known by construction.
struct ExpPlusWeibull {
  double rate;
  double shape;
  double scale;
};

}  // namespace family

enum class FamilyKind {
  Exponential,
  Gamma,
  Lognormal,
  ParetoLomax,
  HyperExp2,
  Weibull,
  Uniform,
  TruncatedTail,
  TruncatedHead,
  ExpPlusWeibull,
};

class DensityFamily {
 public:
  using Params = std::variant<family::Exponential, family::Gamma, family::Lognormal,
                              family::Pareto, family::HyperExp2, family::Weibull,
                              family::Uniform, family::TruncatedTail,
                              family::TruncatedHead, family::ExpPlusWeibull>;

  static DensityFamily exponential(double rate);
  static DensityFamily gamma(double shape, double rate);
  static DensityFamily lognormal(double mu, double sigma2);
  static DensityFamily pareto(double shape, double scale);
  static DensityFamily hyperexp2(double p1, double rate1, double rate2);
  static DensityFamily weibull(double shape, double scale);
  static DensityFamily uniform(double lo, double hi);
  static DensityFamily truncated_tail(const DensityFamily& parent, double cut);
  static DensityFamily truncated_head(const DensityFamily& parent, double cut);
  static DensityFamily exp_plus_weibull(double rate, double shape, double scale);

  FamilyKind kind() const;
  const Params& params() const { return params_; }

  /// Left edge a of the support.
  double support_edge() const;
  /// Right edge of the support (infinite for all but Uniform / TruncatedHead).
  double support_right() const;

  double mean() const;
  std::string describe() const;

 private:
  explicit DensityFamily(Params p) : params_(std::move(p)) {}
  Params params_;
};

double pdf(const DensityFamily& fam, double x);
double cdf(const DensityFamily& fam, double x);
/// P(X > x), computed without cancellation where a closed form allows.
double survival(const DensityFamily& fam, double x);
/// -f'(x)/f(x) on the support interior, from the closed-form derivative.
/// Infinite at points where the density vanishes from the right.
double score(const DensityFamily& fam, double x);
/// Smallest x with F(x) >= p.
double quantile(const DensityFamily& fam, double p);

double sample(const DensityFamily& fam, Stream& rng);

/// Result of the lambda_f functional. `in_family` is false when the supremum
/// is infinite (the density has no extractable exponential component).
struct LambdaF {
  double value;
  bool in_family;
  bool approximate = false;
};

/// sup over (a, inf) of -f'/f. Closed form for every built-in family.
LambdaF lambda_f(const DensityFamily& fam);

/// Grid diagnostic for sup(-f'/f): log-spaced grid of `points` nodes over
/// (a, a + 50 mean], golden-section refinement around the best node, and
/// probes far into the tail for suprema approached only as x -> inf.
/// Always a lower bound on the true supremum; flagged approximate.
LambdaF lambda_f_numeric(const DensityFamily& fam, int points = 10000);

/// Truncation point for Weibull(shape < 1, scale) that makes the tail part a
/// member of the decomposable family: (1/(scale shape^shape)) (1-shape)^(1/(2 shape)).
double weibull_truncation_point(double shape, double scale);

/// Largest finite moment order: moments of order < p are finite (p = inf for
/// light-tailed families). For Pareto this is the shape.
double moment_order(const DensityFamily& fam);

}  // namespace rsim
