#include "rsim/distlib.hpp"

#include "rsim/error.hpp"
#include "rsim/types.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double weibull_density(double shape, double scale, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (shape < 1.0) return kInf;
    return shape == 1.0 ? scale : 0.0;
  }
  const double z = std::pow(scale * x, shape);
  return shape * z / x * std::exp(-z);
}

// Solves F(x) = p by bisection over the support; used where no closed-form
// inverse exists.
double bisect_quantile(const DensityFamily& fam, double p) {
  double lo = fam.support_edge();
  double hi = fam.support_right();
  if (!std::isfinite(hi)) {
    double step = std::max(fam.mean(), 1.0);
    if (!std::isfinite(step)) step = 1.0;
    hi = lo + step;
    while (cdf(fam, hi) < p) {
      lo = hi;
      step *= 2.0;
      hi += step;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(fam, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Inverse of the survival function: x with P(X > x) = s.
double survival_inverse(const DensityFamily& fam, double s) {
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return -std::log(s) / e.rate; },
          [&](const family::Pareto& p) { return (std::pow(s, -1.0 / p.shape) - 1.0) / p.scale; },
          [&](const family::Weibull& w) { return std::pow(-std::log(s), 1.0 / w.shape) / w.scale; },
          [&](const family::Gamma& g) {
            return boost::math::gamma_q_inv(g.shape, s) / g.rate;
          },
          [&](const auto&) { return quantile(fam, 1.0 - s); },
      },
      fam.params());
}

// pdf of E + W by quadrature of the convolution integral.
double exp_plus_weibull_pdf(const family::ExpPlusWeibull& p, double x) {
  if (x <= 0.0) return 0.0;
  auto integrand = [&](double w) {
    return p.rate * std::exp(-p.rate * (x - w)) * weibull_density(p.shape, p.scale, w);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, x, 15,
                                                                       1e-12);
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

DensityFamily DensityFamily::exponential(double rate) {
  require(rate > 0.0, "exponential rate must be positive");
  return DensityFamily(family::Exponential{rate});
}

DensityFamily DensityFamily::gamma(double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "gamma shape and rate must be positive");
  return DensityFamily(family::Gamma{shape, rate});
}

DensityFamily DensityFamily::lognormal(double mu, double sigma2) {
  require(std::isfinite(mu) && sigma2 > 0.0, "lognormal sigma2 must be positive");
  return DensityFamily(family::Lognormal{mu, sigma2});
}

DensityFamily DensityFamily::pareto(double shape, double scale) {
  require(shape > 0.0 && scale > 0.0, "pareto shape and scale must be positive");
  return DensityFamily(family::Pareto{shape, scale});
}

DensityFamily DensityFamily::hyperexp2(double p1, double rate1, double rate2) {
  require(p1 > 0.0 && p1 < 1.0, "hyperexp2 requires p1 in (0,1)");
  require(rate1 > 0.0 && rate2 > 0.0, "hyperexp2 rates must be positive");
  // stored with the faster branch first
  if (rate1 < rate2) return DensityFamily(family::HyperExp2{1.0 - p1, rate2, rate1});
  return DensityFamily(family::HyperExp2{p1, rate1, rate2});
}

DensityFamily DensityFamily::weibull(double shape, double scale) {
  require(shape > 0.0 && scale > 0.0, "weibull shape and scale must be positive");
  return DensityFamily(family::Weibull{shape, scale});
}

DensityFamily DensityFamily::uniform(double lo, double hi) {
  require(std::isfinite(lo) && hi > lo, "uniform requires lo < hi");
  return DensityFamily(family::Uniform{lo, hi});
}

DensityFamily DensityFamily::truncated_tail(const DensityFamily& parent, double cut) {
  require(cut > parent.support_edge() && cut < parent.support_right(),
          "truncation point must lie strictly inside the parent support");
  return DensityFamily(family::TruncatedTail{std::make_shared<const DensityFamily>(parent), cut});
}

DensityFamily DensityFamily::truncated_head(const DensityFamily& parent, double cut) {
  require(cut > parent.support_edge() && cut < parent.support_right(),
          "truncation point must lie strictly inside the parent support");
  return DensityFamily(family::TruncatedHead{std::make_shared<const DensityFamily>(parent), cut});
}

DensityFamily DensityFamily::exp_plus_weibull(double rate, double shape, double scale) {
  require(rate > 0.0 && scale > 0.0, "exp_plus_weibull rate and scale must be positive");
  require(shape > 1.0, "exp_plus_weibull needs a superexponential Weibull part (shape > 1)");
  return DensityFamily(family::ExpPlusWeibull{rate, shape, scale});
}

FamilyKind DensityFamily::kind() const {
  return std::visit(overloaded{
                        [](const family::Exponential&) { return FamilyKind::Exponential; },
                        [](const family::Gamma&) { return FamilyKind::Gamma; },
                        [](const family::Lognormal&) { return FamilyKind::Lognormal; },
                        [](const family::Pareto&) { return FamilyKind::ParetoLomax; },
                        [](const family::HyperExp2&) { return FamilyKind::HyperExp2; },
                        [](const family::Weibull&) { return FamilyKind::Weibull; },
                        [](const family::Uniform&) { return FamilyKind::Uniform; },
                        [](const family::TruncatedTail&) { return FamilyKind::TruncatedTail; },
                        [](const family::TruncatedHead&) { return FamilyKind::TruncatedHead; },
                        [](const family::ExpPlusWeibull&) { return FamilyKind::ExpPlusWeibull; },
                    },
                    params_);
}

double DensityFamily::support_edge() const {
  return std::visit(overloaded{
                        [](const family::Uniform& u) { return u.lo; },
                        [](const family::TruncatedTail& t) { return t.cut; },
                        [](const family::TruncatedHead& t) { return t.parent->support_edge(); },
                        [](const auto&) { return 0.0; },
                    },
                    params_);
}

double DensityFamily::support_right() const {
  return std::visit(overloaded{
                        [](const family::Uniform& u) { return u.hi; },
                        [](const family::TruncatedHead& t) { return t.cut; },
                        [](const auto&) { return kInf; },
                    },
                    params_);
}

double DensityFamily::mean() const {
  return std::visit(
      overloaded{
          [](const family::Exponential& e) { return 1.0 / e.rate; },
          [](const family::Gamma& g) { return g.shape / g.rate; },
          [](const family::Lognormal& l) { return std::exp(l.mu + 0.5 * l.sigma2); },
          [](const family::Pareto& p) {
            return p.shape > 1.0 ? 1.0 / ((p.shape - 1.0) * p.scale) : kInf;
          },
          [](const family::HyperExp2& h) {
            return h.p1 / h.rate1 + (1.0 - h.p1) / h.rate2;
          },
          [](const family::Weibull& w) { return std::tgamma(1.0 + 1.0 / w.shape) / w.scale; },
          [](const family::Uniform& u) { return 0.5 * (u.lo + u.hi); },
          [](const family::TruncatedTail& t) {
            const DensityFamily& par = *t.parent;
            const double tail = survival(par, t.cut);
            if (const auto* w = std::get_if<family::Weibull>(&par.params())) {
              // E[X; X >= c] = Gamma(1 + 1/k, (s c)^k) / s
              const double z = std::pow(w->scale * t.cut, w->shape);
              return boost::math::tgamma(1.0 + 1.0 / w->shape, z) / (w->scale * tail);
            }
            boost::math::quadrature::exp_sinh<double> integrator;
            const double excess = integrator.integrate(
                [&](double u) { return survival(par, t.cut + u); });
            return t.cut + excess / tail;
          },
          [](const family::TruncatedHead& t) {
            const DensityFamily& par = *t.parent;
            const double a = par.support_edge();
            const double head = cdf(par, t.cut);
            const double area = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double x) { return head - cdf(par, x); }, a, t.cut, 15, 1e-12);
            return a + area / head;
          },
          [](const family::ExpPlusWeibull& p) {
            return 1.0 / p.rate + std::tgamma(1.0 + 1.0 / p.shape) / p.scale;
          },
      },
      params_);
}

std::string DensityFamily::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(overloaded{
                 [&](const family::Exponential& e) { os << "Exp(" << e.rate << ")"; },
                 [&](const family::Gamma& g) { os << "Gamma(" << g.shape << "," << g.rate << ")"; },
                 [&](const family::Lognormal& l) {
                   os << "Lognormal(" << l.mu << "," << l.sigma2 << ")";
                 },
                 [&](const family::Pareto& p) { os << "Pareto(" << p.shape << "," << p.scale << ")"; },
                 [&](const family::HyperExp2& h) {
                   os << "HyperExp2(" << h.p1 << "," << h.rate1 << "," << h.rate2 << ")";
                 },
                 [&](const family::Weibull& w) {
                   os << "Weibull(" << w.shape << "," << w.scale << ")";
                 },
                 [&](const family::Uniform& u) { os << "Uniform(" << u.lo << "," << u.hi << ")"; },
                 [&](const family::TruncatedTail& t) {
                   os << t.parent->describe() << "|>=" << t.cut;
                 },
                 [&](const family::TruncatedHead& t) {
                   os << t.parent->describe() << "|<" << t.cut;
                 },
                 [&](const family::ExpPlusWeibull& p) {
                   os << "Exp(" << p.rate << ")+Weibull(" << p.shape << "," << p.scale << ")";
                 },
             },
             params_);
  return os.str();
}

// ---------------------------------------------------------------------------
// density, distribution, score

double pdf(const DensityFamily& fam, double x) {
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); },
          [&](const family::Gamma& g) {
            if (x < 0.0) return 0.0;
            if (x == 0.0) {
              if (g.shape < 1.0) return kInf;
              return g.shape == 1.0 ? g.rate : 0.0;
            }
            return std::exp(g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(x) -
                            g.rate * x - std::lgamma(g.shape));
          },
          [&](const family::Lognormal& l) {
            if (x <= 0.0) return 0.0;
            const double z = std::log(x) - l.mu;
            return std::exp(-z * z / (2.0 * l.sigma2) - kLogSqrt2Pi - 0.5 * std::log(l.sigma2)) / x;
          },
          [&](const family::Pareto& p) {
            if (x < 0.0) return 0.0;
            return p.shape * p.scale * std::pow(1.0 + p.scale * x, -(p.shape + 1.0));
          },
          [&](const family::HyperExp2& h) {
            if (x < 0.0) return 0.0;
            return h.p1 * h.rate1 * std::exp(-h.rate1 * x) +
                   (1.0 - h.p1) * h.rate2 * std::exp(-h.rate2 * x);
          },
          [&](const family::Weibull& w) { return weibull_density(w.shape, w.scale, x); },
          [&](const family::Uniform& u) {
            return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo);
          },
          [&](const family::TruncatedTail& t) {
            return x < t.cut ? 0.0 : pdf(*t.parent, x) / survival(*t.parent, t.cut);
          },
          [&](const family::TruncatedHead& t) {
            return x >= t.cut ? 0.0 : pdf(*t.parent, x) / cdf(*t.parent, t.cut);
          },
          [&](const family::ExpPlusWeibull& p) { return exp_plus_weibull_pdf(p, x); },
      },
      fam.params());
}

double cdf(const DensityFamily& fam, double x) {
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
          [&](const family::Gamma& g) {
            return x <= 0.0 ? 0.0 : boost::math::gamma_p(g.shape, g.rate * x);
          },
          [&](const family::Lognormal& l) {
            if (x <= 0.0) return 0.0;
            return 0.5 * std::erfc(-(std::log(x) - l.mu) / (std::sqrt(l.sigma2) * kSqrt2));
          },
          [&](const family::Pareto& p) {
            return x <= 0.0 ? 0.0 : -std::expm1(-p.shape * std::log1p(p.scale * x));
          },
          [&](const family::HyperExp2& h) {
            if (x <= 0.0) return 0.0;
            return -h.p1 * std::expm1(-h.rate1 * x) - (1.0 - h.p1) * std::expm1(-h.rate2 * x);
          },
          [&](const family::Weibull& w) {
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(w.scale * x, w.shape));
          },
          [&](const family::Uniform& u) {
            return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0);
          },
          [&](const family::TruncatedTail& t) {
            if (x <= t.cut) return 0.0;
            return 1.0 - survival(*t.parent, x) / survival(*t.parent, t.cut);
          },
          [&](const family::TruncatedHead& t) {
            if (x >= t.cut) return 1.0;
            return cdf(*t.parent, x) / cdf(*t.parent, t.cut);
          },
          [&](const family::ExpPlusWeibull& p) {
            // G = F + f/rate is the Weibull law, so F = F_W - f/rate.
            if (x <= 0.0) return 0.0;
            const double fw = -std::expm1(-std::pow(p.scale * x, p.shape));
            return std::max(0.0, fw - exp_plus_weibull_pdf(p, x) / p.rate);
          },
      },
      fam.params());
}

double survival(const DensityFamily& fam, double x) {
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.rate * x); },
          [&](const family::Gamma& g) {
            return x <= 0.0 ? 1.0 : boost::math::gamma_q(g.shape, g.rate * x);
          },
          [&](const family::Lognormal& l) {
            if (x <= 0.0) return 1.0;
            return 0.5 * std::erfc((std::log(x) - l.mu) / (std::sqrt(l.sigma2) * kSqrt2));
          },
          [&](const family::Pareto& p) {
            return x <= 0.0 ? 1.0 : std::pow(1.0 + p.scale * x, -p.shape);
          },
          [&](const family::HyperExp2& h) {
            if (x <= 0.0) return 1.0;
            return h.p1 * std::exp(-h.rate1 * x) + (1.0 - h.p1) * std::exp(-h.rate2 * x);
          },
          [&](const family::Weibull& w) {
            return x <= 0.0 ? 1.0 : std::exp(-std::pow(w.scale * x, w.shape));
          },
          [&](const family::TruncatedTail& t) {
            if (x <= t.cut) return 1.0;
            return survival(*t.parent, x) / survival(*t.parent, t.cut);
          },
          [&](const auto&) { return 1.0 - cdf(fam, x); },
      },
      fam.params());
}

double score(const DensityFamily& fam, double x) {
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return e.rate; },
          [&](const family::Gamma& g) { return g.rate - (g.shape - 1.0) / x; },
          [&](const family::Lognormal& l) { return (1.0 + (std::log(x) - l.mu) / l.sigma2) / x; },
          [&](const family::Pareto& p) { return (p.shape + 1.0) * p.scale / (1.0 + p.scale * x); },
          [&](const family::HyperExp2& h) {
            // Factor out exp(-rate2 x) so large x stays finite.
            const double w1 = h.p1 * std::exp(-(h.rate1 - h.rate2) * x);
            const double w2 = 1.0 - h.p1;
            return (w1 * h.rate1 * h.rate1 + w2 * h.rate2 * h.rate2) /
                   (w1 * h.rate1 + w2 * h.rate2);
          },
          [&](const family::Weibull& w) {
            return (1.0 - w.shape) / x + w.shape * std::pow(w.scale, w.shape) *
                                             std::pow(x, w.shape - 1.0);
          },
          [&](const family::Uniform&) { return 0.0; },
          [&](const family::TruncatedTail& t) { return score(*t.parent, x); },
          [&](const family::TruncatedHead& t) { return score(*t.parent, x); },
          [&](const family::ExpPlusWeibull& p) {
            // f' = rate (g_W - f)
            const double f = exp_plus_weibull_pdf(p, x);
            return p.rate * (1.0 - weibull_density(p.shape, p.scale, x) / f);
          },
      },
      fam.params());
}

double quantile(const DensityFamily& fam, double p) {
  require(p >= 0.0 && p <= 1.0, "quantile level must lie in [0,1]");
  if (p == 0.0) return fam.support_edge();
  if (p == 1.0) return fam.support_right();
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return -std::log1p(-p) / e.rate; },
          [&](const family::Gamma& g) { return boost::math::gamma_p_inv(g.shape, p) / g.rate; },
          [&](const family::Lognormal& l) {
            const double z = -kSqrt2 * boost::math::erfc_inv(2.0 * p);
            return std::exp(l.mu + std::sqrt(l.sigma2) * z);
          },
          [&](const family::Pareto& par) {
            return (std::pow(1.0 - p, -1.0 / par.shape) - 1.0) / par.scale;
          },
          [&](const family::Weibull& w) {
            return std::pow(-std::log1p(-p), 1.0 / w.shape) / w.scale;
          },
          [&](const family::Uniform& u) { return u.lo + p * (u.hi - u.lo); },
          [&](const family::TruncatedTail& t) {
            return survival_inverse(*t.parent, (1.0 - p) * survival(*t.parent, t.cut));
          },
          [&](const family::TruncatedHead& t) {
            return quantile(*t.parent, p * cdf(*t.parent, t.cut));
          },
          [&](const auto&) { return bisect_quantile(fam, p); },
      },
      fam.params());
}

double sample(const DensityFamily& fam, Stream& rng) {
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return rng.exponential(e.rate); },
          [&](const family::Gamma& g) {
            std::gamma_distribution<double> dist(g.shape, 1.0 / g.rate);
            return dist(rng.engine());
          },
          [&](const family::Lognormal& l) {
            std::normal_distribution<double> dist(l.mu, std::sqrt(l.sigma2));
            return std::exp(dist(rng.engine()));
          },
          [&](const family::Pareto& p) {
            return (std::pow(rng.uniform(), -1.0 / p.shape) - 1.0) / p.scale;
          },
          [&](const family::HyperExp2& h) {
            const double rate = rng.uniform() < h.p1 ? h.rate1 : h.rate2;
            return rng.exponential(rate);
          },
          [&](const family::Weibull& w) {
            return std::pow(-std::log(rng.uniform()), 1.0 / w.shape) / w.scale;
          },
          [&](const family::Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform(); },
          [&](const family::TruncatedTail& t) {
            return std::max(t.cut, survival_inverse(*t.parent,
                                                    rng.uniform() * survival(*t.parent, t.cut)));
          },
          [&](const family::TruncatedHead& t) {
            return std::min(t.cut, quantile(*t.parent, rng.uniform() * cdf(*t.parent, t.cut)));
          },
          [&](const family::ExpPlusWeibull& p) {
            const double e = rng.exponential(p.rate);
            return e + std::pow(-std::log(rng.uniform()), 1.0 / p.shape) / p.scale;
          },
      },
      fam.params());
}

// ---------------------------------------------------------------------------
// lambda_f

LambdaF lambda_f(const DensityFamily& fam) {
  const LambdaF none{kInf, false};
  return std::visit(
      overloaded{
          [&](const family::Exponential& e) { return LambdaF{e.rate, true}; },
          [&](const family::Gamma& g) {
            return g.shape >= 1.0 ? LambdaF{g.rate, true} : none;
          },
          [&](const family::Lognormal& l) {
            return LambdaF{std::exp(l.sigma2 - (l.mu + 1.0)) / l.sigma2, true};
          },
          [&](const family::Pareto& p) { return LambdaF{(p.shape + 1.0) * p.scale, true}; },
          [&](const family::HyperExp2& h) {
            const double p2 = 1.0 - h.p1;
            return LambdaF{(h.p1 * h.rate1 * h.rate1 + p2 * h.rate2 * h.rate2) /
                               (h.p1 * h.rate1 + p2 * h.rate2),
                           true};
          },
          [&](const family::Weibull& w) {
            // Score decreases from +inf for shape < 1 and grows without bound
            // for shape > 1; only the exponential case is decomposable.
            return w.shape == 1.0 ? LambdaF{w.scale, true} : none;
          },
          [&](const family::Uniform&) { return none; },
          [&](const family::TruncatedTail& t) {
            const DensityFamily& par = *t.parent;
            switch (par.kind()) {
              case FamilyKind::Weibull:
                if (std::get<family::Weibull>(par.params()).shape > 1.0) return none;
                [[fallthrough]];
              case FamilyKind::Exponential:
              case FamilyKind::ParetoLomax:
              case FamilyKind::HyperExp2:
                // non-increasing score: supremum at the cut
                return LambdaF{score(par, t.cut), true};
              case FamilyKind::Gamma: {
                const auto& g = std::get<family::Gamma>(par.params());
                return g.shape >= 1.0 ? LambdaF{g.rate, true} : LambdaF{score(par, t.cut), true};
              }
              case FamilyKind::Lognormal: {
                const auto& l = std::get<family::Lognormal>(par.params());
                const double peak = std::exp(l.mu + 1.0 - l.sigma2);
                return t.cut <= peak ? lambda_f(par) : LambdaF{score(par, t.cut), true};
              }
              default:
                throw Error(ErrorCode::UnsupportedFamily,
                            "no closed-form lambda_f for " + fam.describe());
            }
          },
          [&](const family::TruncatedHead&) { return none; },
          [&](const family::ExpPlusWeibull& p) { return LambdaF{p.rate, true}; },
      },
      fam.params());
}

LambdaF lambda_f_numeric(const DensityFamily& fam, int points) {
  require(points >= 3, "lambda_f_numeric needs at least 3 grid points");
  const double a = fam.support_edge();
  if (std::isfinite(fam.support_right())) return LambdaF{kInf, false, true};
  double scale = fam.mean();
  if (!std::isfinite(scale)) scale = 1.0;
  const double span = 50.0 * scale;

  auto eval = [&](double x) {
    const double s = score(fam, x);
    return std::isnan(s) ? -kInf : s;
  };

  // log-spaced offsets from 1e-12 span to span
  std::vector<double> xs(points);
  std::vector<double> ys(points);
  const double lo_exp = -12.0;
  for (int i = 0; i < points; ++i) {
    const double e = lo_exp * (1.0 - static_cast<double>(i) / (points - 1));
    xs[i] = a + span * std::pow(10.0, e);
    ys[i] = eval(xs[i]);
  }
  const auto best = std::max_element(ys.begin(), ys.end()) - ys.begin();
  double sup = ys[best];
  if (std::isinf(sup) && sup > 0) return LambdaF{kInf, false, true};

  // golden-section refinement on the bracketing cell pair
  double lo = xs[std::max<std::ptrdiff_t>(best - 1, 0)];
  double hi = xs[std::min<std::ptrdiff_t>(best + 1, points - 1)];
  constexpr double kPhi = 0.61803398874989484820;
  double x1 = hi - kPhi * (hi - lo);
  double x2 = lo + kPhi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kPhi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kPhi * (hi - lo);
      f1 = eval(x1);
    }
  }
  sup = std::max({sup, f1, f2});

  // suprema reached only in the limit x -> inf
  for (int k = 2; k <= 15; ++k) sup = std::max(sup, eval(a + scale * std::pow(10.0, k)));
  return LambdaF{sup, std::isfinite(sup) && sup > 0.0, true};
}

double weibull_truncation_point(double shape, double scale) {
  if (!(shape > 0.0 && shape < 1.0)) {
    throw Error(ErrorCode::InvalidShape, "weibull truncation requires 0 < shape < 1");
  }
  require(scale > 0.0, "weibull scale must be positive");
  return std::pow(1.0 - shape, 1.0 / (2.0 * shape)) / (scale * std::pow(shape, shape));
}

double moment_order(const DensityFamily& fam) {
  return std::visit(overloaded{
                        [](const family::Pareto& p) { return p.shape; },
                        [](const family::TruncatedTail& t) { return moment_order(*t.parent); },
                        [](const auto&) { return kInf; },
                    },
                    fam.params());
}

}  // namespace rsim
