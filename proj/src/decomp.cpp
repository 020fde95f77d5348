#include "rsim/decomp.hpp"

#include "rsim/error.hpp"
#include "rsim/types.hpp"

#include <algorithm>
#include <cmath>

namespace rsim {

namespace {

// Splits a Weibull law with shape < 1 at the truncation point: the tail part
// is decomposable, the head part becomes the residual mixture component.
struct TailSplit {
  DensityFamily tail;
  DensityFamily head;
  double q_bar;
};

std::optional<TailSplit> auto_truncate(const DensityFamily& fam) {
  const auto* w = std::get_if<family::Weibull>(&fam.params());
  if (w == nullptr || w->shape >= 1.0) return std::nullopt;
  const double cut = weibull_truncation_point(w->shape, w->scale);
  return TailSplit{DensityFamily::truncated_tail(fam, cut),
                   DensityFamily::truncated_head(fam, cut), survival(fam, cut)};
}

double choose_lambda(double lam_f, LambdaChoice choice) {
  switch (choice.kind) {
    case LambdaChoice::Kind::Minimal:
      return lam_f;
    case LambdaChoice::Kind::Scaled:
      if (!(choice.value >= 1.0)) {
        throw Error(ErrorCode::LambdaTooSmall, "scale factor must be >= 1");
      }
      return choice.value * lam_f;
    case LambdaChoice::Kind::Explicit:
      if (!(choice.value >= lam_f)) {
        throw Error(ErrorCode::LambdaTooSmall, "explicit rate below lambda_f");
      }
      return choice.value;
  }
  return lam_f;
}

Decomposition assemble(const DensityFamily& fam, double lambda) {
  Decomposition dec{fam, fam, 1.0, 1.0, 1.0, std::nullopt, 0.0};
  if (auto split = auto_truncate(fam)) {
    dec.base = split->tail;
    dec.q_bar = split->q_bar;
    dec.residual_mix = split->head;
  }
  dec.lambda = lambda;
  dec.lambda_f = lambda_f(dec.base).value;
  dec.atom_mass = pdf(dec.base, dec.base.support_edge()) / lambda;
  return dec;
}

}  // namespace

Decomposition build_decomposition(const DensityFamily& fam, LambdaChoice choice) {
  DensityFamily base = fam;
  if (auto split = auto_truncate(fam)) base = split->tail;
  const LambdaF lf = lambda_f(base);
  if (!lf.in_family) {
    throw Error(ErrorCode::NotDecomposable,
                fam.describe() + " has no exponential component (lambda_f infinite)");
  }
  return assemble(fam, choose_lambda(lf.value, choice));
}

Decomposition build_decomposition_unchecked(const DensityFamily& fam, double lambda) {
  Decomposition dec = assemble(fam, lambda);
  dec.atom_mass = std::clamp(dec.atom_mass, 0.0, 1.0);
  return dec;
}

double g_cdf(const Decomposition& dec, double x) {
  const double a = dec.edge();
  if (x < a) return 0.0;
  return std::clamp(cdf(dec.base, x) + pdf(dec.base, x) / dec.lambda, 0.0, 1.0);
}

double sample_G(const Decomposition& dec, Stream& rng) {
  if (const auto* p = std::get_if<family::ExpPlusWeibull>(&dec.base.params())) {
    // G for E + W at rate lambda >= rate is the Weibull law convolved with
    // the exponential split Exp(rate) = Exp(lambda) + Z'.
    const double w = std::pow(-std::log(rng.uniform()), 1.0 / p->shape) / p->scale;
    if (rng.uniform() < p->rate / dec.lambda) return w;
    return w + rng.exponential(p->rate);
  }

  const double a = dec.edge();
  const double u = rng.uniform();
  if (u <= dec.atom_mass) return a;

  double scale = dec.base.mean() - a;
  if (!std::isfinite(scale) || scale <= 0.0) scale = 1.0;
  const double tol = 1e-12 * scale;

  double lo = a;
  double width = scale;
  double hi = a + width;
  while (g_cdf(dec, hi) < u) {
    lo = hi;
    width *= 2.0;
    hi = a + width;
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g_cdf(dec, mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SplitDraw sample_interarrival(const Decomposition& dec, DecompStreams& rng) {
  if (rng.mixture.uniform() >= dec.q_bar) {
    return {false, sample(*dec.residual_mix, rng.tilde), 0.0};
  }
  const double z = sample_G(dec, rng.residual);
  const double e = rng.exponential.exponential(dec.lambda);
  return {true, z, e};
}

// ---------------------------------------------------------------------------

namespace {
std::vector<double> checked_factors(std::vector<double> factors) {
  if (factors.empty() || static_cast<int>(factors.size()) > ExtractionLadder::kMaxViews) {
    throw Error(ErrorCode::InvalidParameter, "ladder needs between 1 and 8 rate factors");
  }
  if (!std::is_sorted(factors.begin(), factors.end()) ||
      std::adjacent_find(factors.begin(), factors.end()) != factors.end()) {
    throw Error(ErrorCode::InvalidParameter, "ladder factors must be strictly increasing");
  }
  return factors;
}
}  // namespace

ExtractionLadder::ExtractionLadder(const DensityFamily& fam, std::vector<double> factors)
    : base_(build_decomposition(fam, LambdaChoice::scaled(checked_factors(factors).front()))) {
  for (double f : factors) rates_.push_back(f * base_.lambda_f);
  rates_.front() = base_.lambda;
}

ExtractionLadder::ExtractionLadder(Decomposition dec)
    : base_(std::move(dec)), rates_{base_.lambda} {}

ExtractionLadder::Draw ExtractionLadder::sample(DecompStreams& rng) const {
  if (rng.mixture.uniform() >= base_.q_bar) {
    Draw d;
    d.reachable = false;
    d.total = rsim::sample(*base_.residual_mix, rng.tilde);
    return d;
  }
  const double z = sample_G(base_, rng.residual);
  Draw d = sample_exp_phase(rng);
  d.total = z + d.exp_part[0];
  return d;
}

ExtractionLadder::Draw ExtractionLadder::sample_exp_phase(DecompStreams& rng) const {
  Draw d;
  const int m = views();
  d.reachable = true;
  d.exp_part[m - 1] = rng.exponential.exponential(rates_[m - 1]);
  for (int j = m - 2; j >= 0; --j) {
    double extra = 0.0;
    if (rng.ladder.uniform() >= rates_[j] / rates_[j + 1]) {
      extra = rng.ladder.exponential(rates_[j]);
    }
    d.exp_part[j] = d.exp_part[j + 1] + extra;
  }
  d.total = d.exp_part[0];
  return d;
}

}  // namespace rsim
