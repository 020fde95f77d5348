#include "rsim/stats.hpp"

#include "rsim/error.hpp"

#include <cmath>

namespace rsim {

void EstimatorAccumulator::add(double R, double tau) {
  long double rp = 1.0L;
  for (int i = 0; i <= 4; ++i) {
    long double tp = 1.0L;
    for (int j = 0; i + j <= 4; ++j) {
      sums_(i, j) += rp * tp;
      tp *= tau;
    }
    rp *= R;
  }
  ++n_;
}

void EstimatorAccumulator::merge(const EstimatorAccumulator& other) {
  sums_ += other.sums_;
  n_ += other.n_;
}

EstimatorAccumulator accumulate(std::span<const CycleRecord> cycles) {
  EstimatorAccumulator acc;
  for (const auto& c : cycles) acc.add(c);
  return acc;
}

namespace {

void need(const EstimatorAccumulator& acc, std::uint64_t n) {
  if (acc.count() == 0) throw Error(ErrorCode::NoCycles, "no completed cycles");
  if (acc.count() < n) throw Error(ErrorCode::TooFewCycles, "need at least two cycles");
}

long double beta_l(const EstimatorAccumulator& acc) { return acc.sum(1, 0) / acc.sum(0, 1); }

// sum W^2 with W = R - beta tau
long double sum_w2(const EstimatorAccumulator& acc, long double beta) {
  const long double v = acc.sum(2, 0) - 2 * beta * acc.sum(1, 1) + beta * beta * acc.sum(0, 2);
  return v > 0 ? v : 0.0L;
}

}  // namespace

double beta_hat(const EstimatorAccumulator& acc) {
  need(acc, 1);
  return static_cast<double>(beta_l(acc));
}

double s_hat(const EstimatorAccumulator& acc) {
  need(acc, 2);
  return static_cast<double>(std::sqrt(sum_w2(acc, beta_l(acc)) / acc.sum(0, 1)));
}

double b_hat(const EstimatorAccumulator& acc) {
  need(acc, 2);
  const long double beta = beta_l(acc);
  return static_cast<double>(2 * (acc.sum(1, 1) - beta * acc.sum(0, 2)) / acc.sum(0, 1));
}

double avsde_hat(const EstimatorAccumulator& acc) {
  need(acc, 2);
  using Poly = Eigen::Matrix<long double, 3, 3>;
  const long double t = acc.sum(0, 1);
  const long double beta = beta_l(acc);
  const long double s2 = sum_w2(acc, beta) / t;
  if (!(s2 > 0)) throw Error(ErrorCode::DegenerateVariance, "s(t) = 0");
  const long double b = 2 * (acc.sum(1, 1) - beta * acc.sum(0, 2)) / t;

  // A = W^2 - b W - s^2 tau as a polynomial a(i, j) R^i tau^j
  Poly a = Poly::Zero();
  a(2, 0) = 1;
  a(1, 1) = -2 * beta;
  a(0, 2) = beta * beta;
  a(1, 0) = -b;
  a(0, 1) = b * beta - s2;

  long double total = 0;
  for (int i1 = 0; i1 < 3; ++i1)
    for (int j1 = 0; i1 + j1 < 3; ++j1)
      for (int i2 = 0; i2 < 3; ++i2)
        for (int j2 = 0; i2 + j2 < 3; ++j2) {
          total += a(i1, j1) * a(i2, j2) * acc.sum(i1 + i2, j1 + j2);
        }
  if (total < 0) total = 0;
  return static_cast<double>(total / (4 * s2 * t));
}

double s_two_pass(std::span<const CycleRecord> cycles) {
  const EstimatorAccumulator acc = accumulate(cycles);
  need(acc, 2);
  const double beta = beta_hat(acc);
  double w2 = 0.0, t = 0.0;
  for (const auto& c : cycles) {
    const double w = c.R - beta * c.tau;
    w2 += w * w;
    t += c.tau;
  }
  return std::sqrt(w2 / t);
}

double b_two_pass(std::span<const CycleRecord> cycles) {
  const EstimatorAccumulator acc = accumulate(cycles);
  need(acc, 2);
  const double beta = beta_hat(acc);
  double wt = 0.0, t = 0.0;
  for (const auto& c : cycles) {
    wt += (c.R - beta * c.tau) * c.tau;
    t += c.tau;
  }
  return 2.0 * wt / t;
}

double avsde_two_pass(std::span<const CycleRecord> cycles) {
  const double s = s_two_pass(cycles);
  if (!(s > 0.0)) throw Error(ErrorCode::DegenerateVariance, "s(t) = 0");
  const double b = b_two_pass(cycles);
  const double beta = beta_hat(accumulate(cycles));
  const double s2 = s * s;
  double sum = 0.0, t = 0.0;
  for (const auto& c : cycles) {
    const double w = c.R - beta * c.tau;
    const double a = w * w - s2 * c.tau - b * w;
    sum += a * a;
    t += c.tau;
  }
  return sum / (4.0 * s2 * t);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw Error(ErrorCode::InvalidParameter, "normal_quantile needs p in [0, 1]");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "confidence level must lie in (0, 1)");
  }
  return normal_quantile(0.5 + 0.5 * level);
}

Interval confidence_interval(const EstimatorAccumulator& acc, double level) {
  const double beta = beta_hat(acc);
  const double s = s_hat(acc);
  const double hw = two_sided_z(level) * s / std::sqrt(acc.horizon_used());
  return {beta - hw, beta + hw};
}

double time_average(const RunResult& run) { return run.time_average(); }

Report make_report(const EstimatorAccumulator& acc, double level) {
  Report r;
  r.level = level;
  r.z = two_sided_z(level);
  r.n_cycles = acc.count();
  r.t_cycles = acc.horizon_used();
  if (acc.count() == 0) {
    r.note = "no completed cycles";
    return r;
  }
  r.beta = beta_hat(acc);
  if (acc.count() < 2) {
    r.note = "fewer than two cycles";
    return r;
  }
  r.s = s_hat(acc);
  r.tavc = *r.s * *r.s;
  r.b = b_hat(acc);
  r.ci = confidence_interval(acc, level);
  if (*r.s > 0.0) {
    r.avsde = avsde_hat(acc);
  } else {
    r.note = "degenerate variance";
  }
  return r;
}

}  // namespace rsim
