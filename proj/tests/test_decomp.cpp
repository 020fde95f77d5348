#include <doctest.h>

#include "rsim/decomp.hpp"
#include "rsim/error.hpp"
#include "rsim/oracles.hpp"

#include <cmath>
#include <vector>

using namespace rsim;

namespace {

DecompStreams streams(std::uint64_t seed) {
  return {Stream(derive_seed(seed, 0, 0, 1)), Stream(derive_seed(seed, 0, 0, 2)),
          Stream(derive_seed(seed, 0, 0, 3)), Stream(derive_seed(seed, 0, 0, 4)),
          Stream(derive_seed(seed, 0, 0, 5))};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidParameter;
}

}  // namespace

TEST_CASE("minimal decompositions") {
  const Decomposition g = build_decomposition(DensityFamily::gamma(2, 3));
  CHECK(g.lambda == 3.0);
  CHECK(g.q_bar == 1.0);
  CHECK(g.atom_mass == 0.0);

  const Decomposition p = build_decomposition(DensityFamily::pareto(10, 1.0 / 9));
  CHECK(p.lambda == doctest::Approx(11.0 / 9).epsilon(1e-15));
  CHECK(p.q_bar == 1.0);
  CHECK(p.atom_mass == doctest::Approx(10.0 / 11).epsilon(1e-14));

  CHECK(code_of([] { build_decomposition(DensityFamily::uniform(0, 40)); }) ==
        ErrorCode::NotDecomposable);
  CHECK(code_of([] {
          build_decomposition(DensityFamily::gamma(2, 3), LambdaChoice::explicit_rate(2.9));
        }) == ErrorCode::LambdaTooSmall);
  CHECK(code_of([] {
          build_decomposition(DensityFamily::gamma(2, 3), LambdaChoice::scaled(0.5));
        }) == ErrorCode::LambdaTooSmall);
}

TEST_CASE("weibull auto-truncation") {
  const Decomposition w = build_decomposition(DensityFamily::weibull(0.5, 1));
  const double a_hat = std::sqrt(2.0) / 2;
  CHECK(w.edge() == doctest::Approx(a_hat).epsilon(1e-14));
  CHECK(w.q_bar == doctest::Approx(std::exp(-std::sqrt(a_hat))).epsilon(1e-13));
  CHECK(w.lambda == doctest::Approx(0.5 / a_hat + 0.5 / std::sqrt(a_hat)).epsilon(1e-12));
  REQUIRE(w.residual_mix.has_value());
  CHECK(w.residual_mix->support_right() == doctest::Approx(a_hat));
}

TEST_CASE("G examples") {
  SUBCASE("exponential base is degenerate at zero") {
    const Decomposition d = build_decomposition(DensityFamily::gamma(1, 2.5));
    CHECK(d.atom_mass == doctest::Approx(1.0));
    Stream rng(3);
    for (int i = 0; i < 1000; ++i) CHECK(sample_G(d, rng) == 0.0);
  }
  SUBCASE("Gamma(2,3) at lambda 3 is Exp(3)") {
    const Decomposition d = build_decomposition(DensityFamily::gamma(2, 3));
    Stream rng(4);
    std::vector<double> z(100000);
    for (auto& v : z) v = sample_G(d, rng);
    const auto ks = oracle::ks_one_sample(z, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-3 * x); });
    CHECK(ks.pass);
  }
  SUBCASE("Pareto atom frequency") {
    const Decomposition d = build_decomposition(DensityFamily::pareto(10, 1.0 / 9));
    Stream rng(5);
    int zeros = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) zeros += sample_G(d, rng) == 0.0;
    CHECK(std::fabs(zeros / double(n) - 10.0 / 11) < 0.01);
  }
}

TEST_CASE("G is a distribution function") {
  const DensityFamily w = DensityFamily::weibull(0.5, 1);
  for (const auto& f : {DensityFamily::gamma(2, 3), DensityFamily::pareto(10, 1.0 / 18),
                        DensityFamily::hyperexp2(0.5, 2.0 / 3, 2), DensityFamily::lognormal(0, 2.0 / 3),
                        w}) {
    for (double factor : {1.0, 1.5, 2.0}) {
      CAPTURE(f.describe());
      CAPTURE(factor);
      const Decomposition d = build_decomposition(f, LambdaChoice::scaled(factor));
      const double a = d.edge();
      CHECK(g_cdf(d, a) == doctest::Approx(d.atom_mass).epsilon(1e-12));
      double prev = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double x = a + 60.0 * d.base.mean() * i / 999.0;
        const double g = g_cdf(d, x);
        CHECK(g >= prev - 1e-14);
        CHECK(g <= 1.0 + 1e-14);
        prev = g;
      }
      CHECK(g_cdf(d, a + 1e4 * d.base.mean()) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("split draws") {
  SUBCASE("q_bar = 1 is always reachable") {
    const Decomposition d = build_decomposition(DensityFamily::gamma(2, 3));
    auto rng = streams(1);
    for (int i = 0; i < 1000; ++i) CHECK(sample_interarrival(d, rng).is_exp_phase_reachable);
  }
  SUBCASE("Pareto totals keep the mean") {
    const Decomposition d = build_decomposition(DensityFamily::pareto(10, 1.0 / 18));
    auto rng = streams(2);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_interarrival(d, rng).total();
    CHECK(sum / n == doctest::Approx(2.0).epsilon(0.01));
  }
  SUBCASE("truncated Weibull fraction reachable") {
    const Decomposition d = build_decomposition(DensityFamily::weibull(0.5, 1));
    auto rng = streams(3);
    int hits = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const SplitDraw s = sample_interarrival(d, rng);
      hits += s.is_exp_phase_reachable;
      if (s.is_exp_phase_reachable) {
        CHECK(s.non_exp_part >= d.edge());
      } else {
        CHECK(s.exp_part == 0.0);
        CHECK(s.non_exp_part < d.edge());
      }
    }
    CHECK(std::fabs(hits / double(n) - d.q_bar) < 0.005);
  }
}

TEST_CASE("law preservation across rates") {
  std::uint64_t seed = 100;
  for (const auto& f :
       {DensityFamily::gamma(2, 3), DensityFamily::gamma(5.5, 0.4), DensityFamily::pareto(10, 1.0 / 18),
        DensityFamily::pareto(10, 1.0 / 9), DensityFamily::hyperexp2(0.5, 2.0 / 3, 2),
        DensityFamily::hyperexp2(0.75, 0.15, 0.05), DensityFamily::lognormal(0, 2.0 / 3),
        DensityFamily::weibull(0.5, 1), DensityFamily::exponential(0.05),
        DensityFamily::exp_plus_weibull(0.5, 2, std::tgamma(1.5) / 18)}) {
    for (double factor : {1.0, 1.5, 2.0}) {
      CAPTURE(f.describe());
      CAPTURE(factor);
      const Decomposition d = build_decomposition(f, LambdaChoice::scaled(factor));
      const auto ks = oracle::decomposition_law_check(f, d, 100000, seed++);
      CHECK(ks.pass);
    }
  }
}

TEST_CASE("extracted exponential mean is largest at lambda_f") {
  const DensityFamily f = DensityFamily::pareto(10, 1.0 / 18);
  const double lf = lambda_f(f).value;
  double prev = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 7;
  for (double factor = 1.0; factor <= 3.0; factor += 0.25) {
    const Decomposition d = build_decomposition(f, LambdaChoice::scaled(factor));
    CHECK(d.lambda == doctest::Approx(factor * lf));
    auto rng = streams(seed++);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += sample_interarrival(d, rng).exp_part;
    const double m = sum / n;
    CHECK(m == doctest::Approx(d.extracted_mean()).epsilon(0.02));
    CHECK(d.extracted_mean() < prev);
    prev = d.extracted_mean();
  }
}

TEST_CASE("extraction ladder views") {
  const DensityFamily f = DensityFamily::pareto(10, 1.0 / 18);
  const ExtractionLadder ladder(f, {1.0, 1.5, 2.0});
  REQUIRE(ladder.views() == 3);
  const double lf = lambda_f(f).value;
  for (int v = 0; v < 3; ++v) CHECK(ladder.rate(v) == doctest::Approx(lf * (1.0 + 0.5 * v)));

  auto rng = streams(9);
  const int n = 100000;
  std::vector<std::vector<double>> exp_parts(3);
  std::vector<double> totals;
  for (int i = 0; i < n; ++i) {
    const auto d = ladder.sample(rng);
    REQUIRE(d.reachable);
    totals.push_back(d.total);
    for (int v = 0; v < 3; ++v) {
      exp_parts[v].push_back(d.exp_part[v]);
      if (v > 0) CHECK(d.exp_part[v] <= d.exp_part[v - 1]);
    }
    CHECK(d.exp_part[0] <= d.total);
  }
  for (int v = 0; v < 3; ++v) {
    const double r = ladder.rate(v);
    const auto ks =
        oracle::ks_one_sample(exp_parts[v], [r](double x) { return x <= 0 ? 0.0 : -std::expm1(-r * x); });
    CHECK(ks.pass);
  }
  CHECK(oracle::ks_one_sample(totals, [&](double x) { return oracle::reference_cdf(f, x); }).pass);

  CHECK_THROWS_AS(ExtractionLadder(f, {1.0, 0.8}), Error);
  CHECK_THROWS_AS(ExtractionLadder(f, {0.9, 1.0}), Error);
}

TEST_CASE("exp-phase draws are exponential") {
  const ExtractionLadder ladder(DensityFamily::pareto(10, 1.0 / 18), {1.0, 2.0});
  auto rng = streams(10);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) {
    const auto d = ladder.sample_exp_phase(rng);
    CHECK(d.total == d.exp_part[0]);
    xs.push_back(d.total);
  }
  const double r = ladder.rate(0);
  CHECK(oracle::ks_one_sample(xs, [r](double x) { return x <= 0 ? 0.0 : -std::expm1(-r * x); }).pass);
}
