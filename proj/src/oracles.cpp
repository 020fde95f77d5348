#include "rsim/oracles.hpp"

#include "rsim/error.hpp"
#include "rsim/types.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

namespace rsim::oracle {

namespace bm = boost::math;

double mm1_mean_number(double lambda, double mu) {
  if (!(lambda >= 0.0 && lambda < mu)) throw Error(ErrorCode::Unstable, "M/M/1 needs lambda < mu");
  const double rho = lambda / mu;
  return rho / (1.0 - rho);
}

double birth_death_mean(double lambda, double mu, int cap) {
  const double r = lambda / mu;
  double w = 1.0, z = 0.0, m = 0.0;
  for (int n = 0; n <= cap; ++n) {
    z += w;
    m += n * w;
    w *= r;
  }
  return m / z;
}

double first_moment(const DensityFamily& fam) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, family::Exponential>) {
          return 1.0 / p.rate;
        } else if constexpr (std::is_same_v<T, family::Gamma>) {
          return p.shape / p.rate;
        } else if constexpr (std::is_same_v<T, family::Lognormal>) {
          return std::exp(p.mu + 0.5 * p.sigma2);
        } else if constexpr (std::is_same_v<T, family::Pareto>) {
          return p.shape > 1.0 ? 1.0 / (p.scale * (p.shape - 1.0)) : kInf;
        } else if constexpr (std::is_same_v<T, family::HyperExp2>) {
          return p.p1 / p.rate1 + (1.0 - p.p1) / p.rate2;
        } else if constexpr (std::is_same_v<T, family::Weibull>) {
          return bm::tgamma(1.0 + 1.0 / p.shape) / p.scale;
        } else if constexpr (std::is_same_v<T, family::Uniform>) {
          return 0.5 * (p.lo + p.hi);
        } else if constexpr (std::is_same_v<T, family::ExpPlusWeibull>) {
          return 1.0 / p.rate + bm::tgamma(1.0 + 1.0 / p.shape) / p.scale;
        } else {
          // truncations: integrate the reference survival function
          const double a = fam.support_edge();
          auto tail = [&](double x) { return 1.0 - reference_cdf(fam, x); };
          return a + bm::quadrature::gauss_kronrod<double, 61>::integrate(
                         tail, a, std::numeric_limits<double>::infinity(), 15, 1e-12);
        }
      },
      fam.params());
}

double second_moment(const DensityFamily& fam) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, family::Exponential>) {
          return 2.0 / (p.rate * p.rate);
        } else if constexpr (std::is_same_v<T, family::Gamma>) {
          return p.shape * (p.shape + 1.0) / (p.rate * p.rate);
        } else if constexpr (std::is_same_v<T, family::Lognormal>) {
          return std::exp(2.0 * p.mu + 2.0 * p.sigma2);
        } else if constexpr (std::is_same_v<T, family::Pareto>) {
          return p.shape > 2.0
                     ? 2.0 / (p.scale * p.scale * (p.shape - 1.0) * (p.shape - 2.0))
                     : kInf;
        } else if constexpr (std::is_same_v<T, family::HyperExp2>) {
          return 2.0 * (p.p1 / (p.rate1 * p.rate1) + (1.0 - p.p1) / (p.rate2 * p.rate2));
        } else if constexpr (std::is_same_v<T, family::Weibull>) {
          return bm::tgamma(1.0 + 2.0 / p.shape) / (p.scale * p.scale);
        } else if constexpr (std::is_same_v<T, family::Uniform>) {
          return (p.lo * p.lo + p.lo * p.hi + p.hi * p.hi) / 3.0;
        } else if constexpr (std::is_same_v<T, family::ExpPlusWeibull>) {
          const double m1 = bm::tgamma(1.0 + 1.0 / p.shape) / p.scale;
          const double m2 = bm::tgamma(1.0 + 2.0 / p.shape) / (p.scale * p.scale);
          return 2.0 / (p.rate * p.rate) + 2.0 * m1 / p.rate + m2;
        } else {
          const double a = fam.support_edge();
          auto tail = [&](double x) { return 2.0 * x * (1.0 - reference_cdf(fam, x)); };
          return a * a + bm::quadrature::gauss_kronrod<double, 61>::integrate(
                             tail, a, std::numeric_limits<double>::infinity(), 15, 1e-12);
        }
      },
      fam.params());
}

double mg1_mean_number(double lambda, const DensityFamily& service) {
  const double rho = lambda * first_moment(service);
  if (!(rho < 1.0)) throw Error(ErrorCode::Unstable, "M/G/1 needs rho < 1");
  const double m2 = second_moment(service);
  if (!std::isfinite(m2)) throw Error(ErrorCode::InfiniteSecondMoment, "E[S^2] is infinite");
  return rho + lambda * lambda * m2 / (2.0 * (1.0 - rho));
}

// ---------------------------------------------------------------------------

double reference_cdf(const DensityFamily& fam, double x) {
  if (x <= fam.support_edge()) return 0.0;
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, family::Exponential>) {
          return -std::expm1(-p.rate * x);
        } else if constexpr (std::is_same_v<T, family::Gamma>) {
          return bm::gamma_p(p.shape, p.rate * x);
        } else if constexpr (std::is_same_v<T, family::Lognormal>) {
          return 0.5 * bm::erfc(-(std::log(x) - p.mu) / std::sqrt(2.0 * p.sigma2));
        } else if constexpr (std::is_same_v<T, family::Pareto>) {
          return 1.0 - std::pow(1.0 + p.scale * x, -p.shape);
        } else if constexpr (std::is_same_v<T, family::HyperExp2>) {
          return 1.0 - p.p1 * std::exp(-p.rate1 * x) - (1.0 - p.p1) * std::exp(-p.rate2 * x);
        } else if constexpr (std::is_same_v<T, family::Weibull>) {
          return -std::expm1(-std::pow(p.scale * x, p.shape));
        } else if constexpr (std::is_same_v<T, family::Uniform>) {
          return std::min(1.0, (x - p.lo) / (p.hi - p.lo));
        } else if constexpr (std::is_same_v<T, family::TruncatedTail>) {
          const double fc = reference_cdf(*p.parent, p.cut);
          return (reference_cdf(*p.parent, x) - fc) / (1.0 - fc);
        } else if constexpr (std::is_same_v<T, family::TruncatedHead>) {
          if (x >= p.cut) return 1.0;
          return reference_cdf(*p.parent, x) / reference_cdf(*p.parent, p.cut);
        } else {
          // P(E + W <= x) = int_0^x P(W in dw) (1 - e^{-rate (x - w)})
          auto integrand = [&](double w) {
            const double sw = std::pow(p.scale * w, p.shape);
            const double fw = p.shape * sw / w * std::exp(-sw);
            return fw * -std::expm1(-p.rate * (x - w));
          };
          return bm::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, x, 15, 1e-13);
        }
      },
      fam.params());
}

double reference_quantile(const DensityFamily& fam, double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::InvalidParameter, "quantile needs u in (0, 1)");
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, family::Exponential>) {
          return -std::log1p(-u) / p.rate;
        } else if constexpr (std::is_same_v<T, family::Gamma>) {
          return bm::gamma_p_inv(p.shape, u) / p.rate;
        } else if constexpr (std::is_same_v<T, family::Lognormal>) {
          return std::exp(p.mu - std::sqrt(2.0 * p.sigma2) * bm::erfc_inv(2.0 * u));
        } else if constexpr (std::is_same_v<T, family::Pareto>) {
          return (std::pow(1.0 - u, -1.0 / p.shape) - 1.0) / p.scale;
        } else if constexpr (std::is_same_v<T, family::Weibull>) {
          return std::pow(-std::log1p(-u), 1.0 / p.shape) / p.scale;
        } else if constexpr (std::is_same_v<T, family::Uniform>) {
          return p.lo + u * (p.hi - p.lo);
        } else {
          // bracketed root of the reference cdf
          const double a = fam.support_edge();
          double hi = a + 1.0;
          while (reference_cdf(fam, hi) < u) hi = a + 2.0 * (hi - a);
          auto f = [&](double x) { return reference_cdf(fam, x) - u; };
          std::uintmax_t iters = 200;
          const auto r = bm::tools::toms748_solve(f, a, hi, f(a), f(hi),
                                                  bm::tools::eps_tolerance<double>(50), iters);
          return 0.5 * (r.first + r.second);
        }
      },
      fam.params());
}

double reference_sample(const DensityFamily& fam, Stream& rng) {
  if (const auto* p = std::get_if<family::ExpPlusWeibull>(&fam.params())) {
    const double w = std::pow(-std::log(rng.uniform()), 1.0 / p->shape) / p->scale;
    return w - std::log(rng.uniform()) / p->rate;
  }
  return reference_quantile(fam, rng.uniform());
}

// ---------------------------------------------------------------------------

double ks_coefficient(double alpha) { return std::sqrt(-0.5 * std::log(0.5 * alpha)); }

KSReport ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf,
                       double alpha) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  KSReport r;
  r.statistic = d;
  r.n = xs.size();
  r.critical = ks_coefficient(alpha) / std::sqrt(n);
  r.pass = d < r.critical;
  return r;
}

KSReport ks_two_sample(std::vector<double> xs, std::vector<double> ys, double alpha) {
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double n = static_cast<double>(xs.size());
  const double m = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    d = std::max(d, std::fabs(i / n - j / m));
  }
  KSReport r;
  r.statistic = d;
  r.n = xs.size();
  r.m = ys.size();
  r.critical = ks_coefficient(alpha) * std::sqrt((n + m) / (n * m));
  r.pass = d < r.critical;
  return r;
}

KSReport decomposition_law_check(const DensityFamily& fam, const Decomposition& dec,
                                 std::size_t n, std::uint64_t seed, double alpha) {
  DecompStreams ds{Stream(derive_seed(seed, 0, 0, 1)), Stream(derive_seed(seed, 0, 0, 2)),
                   Stream(derive_seed(seed, 0, 0, 3)), Stream(derive_seed(seed, 0, 0, 4)),
                   Stream(derive_seed(seed, 0, 0, 5))};
  Stream ref(derive_seed(seed, 0, 1, 99));
  std::vector<double> mix(n), direct(n);
  for (std::size_t i = 0; i < n; ++i) {
    mix[i] = sample_interarrival(dec, ds).total();
    direct[i] = reference_sample(fam, ref);
  }
  return ks_two_sample(std::move(mix), std::move(direct), alpha);
}

}  // namespace rsim::oracle
