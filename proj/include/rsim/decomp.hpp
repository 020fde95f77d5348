#pragma once

// Exponential-component extraction.
//
// A law with density component q f, f decomposable, is written as
//   xi  =d  (1 - B) xi~ + B (E + Z),
// with B ~ Bernoulli(q), E ~ Exp(lambda), lambda >= lambda_f, and
// Z ~ G(x) = F(x) + f(x)/lambda, which has an atom f(a)/lambda at the
// support edge a. All four pieces are independent.

#include "rsim/distlib.hpp"
#include "rsim/random.hpp"

#include <array>
#include <optional>
#include <vector>

namespace rsim {

struct LambdaChoice {
  enum class Kind { Minimal, Scaled, Explicit };
  Kind kind = Kind::Minimal;
  double value = 1.0;

  static LambdaChoice minimal() { return {Kind::Minimal, 1.0}; }
  static LambdaChoice scaled(double factor) { return {Kind::Scaled, factor}; }
  static LambdaChoice explicit_rate(double rate) { return {Kind::Explicit, rate}; }
};

struct Decomposition {
  DensityFamily source;  // law of xi
  DensityFamily base;    // f
  double q_bar = 1.0;
  double lambda = 1.0;
  double lambda_f = 1.0;
  std::optional<DensityFamily> residual_mix;  // law of xi~ when q_bar < 1
  double atom_mass = 0.0;

  double edge() const { return base.support_edge(); }
  /// Mean of the extracted exponential component, weighted by q_bar.
  double extracted_mean() const { return q_bar / lambda; }
};

Decomposition build_decomposition(const DensityFamily& fam,
                                  LambdaChoice choice = LambdaChoice::minimal());

/// Same construction without the lambda >= lambda_f check. G is clamped to
/// [0, 1] when it stops being a distribution function. Only meaningful as a
/// negative control for the law-preservation oracle.
Decomposition build_decomposition_unchecked(const DensityFamily& fam, double lambda);

/// G(x) = F(x) + f(x)/lambda for the base density (0 left of the edge).
double g_cdf(const Decomposition& dec, double x);

/// One draw of Z ~ G by inversion: the atom at a, otherwise bisection on G.
double sample_G(const Decomposition& dec, Stream& rng);

struct DecompStreams {
  Stream mixture;
  Stream exponential;
  Stream residual;  // draws of Z
  Stream tilde;     // draws of xi~
  Stream ladder;    // splits between nested exponential rates
};

struct SplitDraw {
  bool is_exp_phase_reachable;
  double non_exp_part;
  double exp_part;

  double total() const { return non_exp_part + exp_part; }
};

SplitDraw sample_interarrival(const Decomposition& dec, DecompStreams& rng);

/// A decomposition viewed at several exponential rates at once,
/// lambda_1 < lambda_2 < ... < lambda_m, all >= lambda_f. One draw produces
/// a single interarrival time together with its exponential part under every
/// rate: E_m ~ Exp(lambda_m) and E_j = E_{j+1} + Z'_j, where Z'_j has an atom
/// lambda_j/lambda_{j+1} at zero and is Exp(lambda_j) otherwise. Each E_j is
/// then Exp(lambda_j) and independent of the non-exponential remainder, so
/// every view is an exact decomposition of the same path.
class ExtractionLadder {
 public:
  static constexpr int kMaxViews = 8;

  ExtractionLadder(const DensityFamily& fam, std::vector<double> factors);
  explicit ExtractionLadder(Decomposition dec);

  const Decomposition& base() const { return base_; }
  int views() const { return static_cast<int>(rates_.size()); }
  double rate(int view) const { return rates_[view]; }

  struct Draw {
    bool reachable = false;
    double total = 0.0;
    std::array<double, kMaxViews> exp_part{};
  };

  Draw sample(DecompStreams& rng) const;
  /// Only the nested exponential parts (an arrival clock that is already in
  /// exponential phase under every view); total = exp_part[0].
  Draw sample_exp_phase(DecompStreams& rng) const;

 private:
  Decomposition base_;
  std::vector<double> rates_;
};

}  // namespace rsim
