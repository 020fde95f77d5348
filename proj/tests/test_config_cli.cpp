#include <doctest.h>

#include "rsim/config.hpp"
#include "rsim/error.hpp"
#include "rsim/experiment.hpp"
#include "rsim/report_io.hpp"

using namespace rsim;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidParameter;
}

RunSpec spec_for(const std::string& file, double horizon, int reps, std::uint64_t seed = 1) {
  const LoadedConfig cfg = load_config(std::string(RSIM_SOURCE_DIR "/configs/") + file);
  RunSpec s;
  s.name = cfg.name;
  s.net = cfg.net;
  s.horizon = horizon;
  s.reps = reps;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("every shipped config round-trips") {
  for (const char* f : {"table1_surrogate.json", "table3_exp.json", "table4_expweibull.json",
                        "table5_expweibull.json", "mm1.json", "mg1_gamma.json", "two_stream_toy.json"}) {
    CAPTURE(f);
    const LoadedConfig a = load_config(std::string(RSIM_SOURCE_DIR "/configs/") + f);
    const json j = config_to_json(a);
    const LoadedConfig b = config_from_json(j);
    CHECK(config_to_json(b) == j);
    CHECK(b.net.num_classes() == a.net.num_classes());
    CHECK((b.net.routing - a.net.routing).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("family literals") {
  const json j = json::parse(R"({"kind": "truncated_tail", "cut": 0.5,
                                 "parent": {"family": "weibull", "shape": 0.5, "scale": 1}})");
  const DensityFamily f = family_from_json(j);
  CHECK(f.kind() == FamilyKind::TruncatedTail);
  CHECK(f.support_edge() == 0.5);
  CHECK(family_to_json(f)["parent"]["kind"] == "weibull");

  CHECK(code_of([] { family_from_json(json::parse(R"({"kind": "cauchy"})")); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of([] { family_from_json(json::parse(R"({"kind": "gamma", "shape": 2})")); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of([] { family_from_json(json::parse(R"({"kind": "gamma", "shape": -2, "rate": 1})")); }) ==
        ErrorCode::ConfigInvalid);
}

TEST_CASE("lambda directives") {
  CHECK(lambda_choice_from_json("minimal").kind == LambdaChoice::Kind::Minimal);
  const LambdaChoice s = lambda_choice_from_json(json::parse(R"({"lambda": {"scale": 1.5}})"));
  CHECK(s.kind == LambdaChoice::Kind::Scaled);
  CHECK(s.value == 1.5);
  const LambdaChoice e = lambda_choice_from_json(json::parse(R"({"explicit": 0.7})"));
  CHECK(e.kind == LambdaChoice::Kind::Explicit);
  CHECK(lambda_choice_from_json(lambda_choice_to_json(e)).value == 0.7);
  CHECK(code_of([] { lambda_choice_from_json("maximal"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("malformed configs") {
  CHECK(code_of([] { config_from_json(json::array()); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { config_from_json(json::parse(R"({"stations": 1})")); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of([] {
          config_from_json(json::parse(R"({"stations": 1, "classes": [
            {"station": 1, "interarrival": {"kind": "exponential", "rate": 1},
             "service": {"kind": "exponential", "rate": 2}}], "routing": [[0, 0]]})"));
        }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] {
          config_from_json(json::parse(R"({"stations": 1, "classes": [
            {"station": 2, "interarrival": {"kind": "exponential", "rate": 1},
             "service": {"kind": "exponential", "rate": 2}}]})"));
        }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { load_config("/nonexistent/file.json"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("state functional parsing") {
  CHECK(parse_functional("total").kind == StateFunctional::Kind::TotalQueue);
  const StateFunctional c = parse_functional("class:2");
  CHECK(c.kind == StateFunctional::Kind::PerClassQueue);
  CHECK(c.cls == 1);
  const StateFunctional i = parse_functional("indicator:10");
  CHECK(i.kind == StateFunctional::Kind::Indicator);
  CHECK(i.threshold == 10.0);
  CHECK(describe(c) == "class:2");
  for (const char* bad : {"", "class:0", "class:x", "indicator:", "mean"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_functional(bad); }) == ErrorCode::ConfigInvalid);
  }
}

TEST_CASE("mode and stability preflight") {
  RunSpec s = spec_for("table1_surrogate.json", 1e3, 1);
  s.mode = RegenMode::Alternative;
  try {
    run(s);
    FAIL("expected ModeUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ModeUnavailable);
    CHECK(std::string(e.what()).find("alternative regenerations are not possible") != std::string::npos);
  }
  CHECK(code_of([&] { compare_modes(spec_for("table1_surrogate.json", 1e3, 1)); }) ==
        ErrorCode::ModeUnavailable);

  RunSpec hot = spec_for("mm1.json", 1e3, 1);
  hot.net.classes[0].service = DensityFamily::exponential(0.4);
  CHECK(code_of([&] { run(hot); }) == ErrorCode::Unstable);
  hot.allow_unstable = true;
  const ExperimentResult r = run(hot);
  CHECK_FALSE(r.traffic.stable());
  CHECK(to_json(r, hot)["run"].contains("warning"));

  CHECK(code_of([] { sweep_lambda(spec_for("table1_surrogate.json", 1e3, 1), {0.5, 1.0}); }) ==
        ErrorCode::LambdaTooSmall);
}

TEST_CASE("results do not depend on the worker count") {
  RunSpec s = spec_for("table1_surrogate.json", 2e4, 4, 99);
  s.workers = 1;
  const ExperimentResult one = run(s);
  s.workers = 4;
  const ExperimentResult four = run(s);
  s.workers = 2;
  const ExperimentResult again = run(s);
  CHECK(to_json(one, s)["series"] == to_json(four, s)["series"]);
  CHECK(to_json(one, s)["series"] == to_json(again, s)["series"]);
  CHECK(one.series[0].merged.n_cycles > 0);
}

TEST_CASE("report JSON carries the table columns") {
  const RunSpec s = spec_for("table1_surrogate.json", 2e4, 2, 5);
  const ExperimentResult res = sweep_lambda(s, {1.0, 1.5, 2.0});
  const json j = to_json(res, s);
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["command"] == "sweep-lambda");
  REQUIRE(j["series"].size() == 3);
  CHECK(j["series"][1]["label"] == "x1.5");
  for (const auto& series : j["series"]) {
    const auto& m = series["merged"];
    for (const char* key : {"n_cycles", "beta", "ci", "tavc", "avsde", "s", "b"}) {
      CAPTURE(key);
      CHECK(m.contains(key));
    }
    CHECK(series["mode"] == "primary");
    CHECK(series["replications"].size() == 2);
  }
  REQUIRE(j["decompositions"].size() >= 2);
  CHECK(j["decompositions"][0]["lambda"].size() == 3);
  CHECK(j["traffic"].contains("rho"));
  CHECK(j["validation"]["ok"] == true);
}

TEST_CASE("compare-modes shares one path per replication") {
  const RunSpec s = spec_for("two_stream_toy.json", 2e4, 2, 3);
  const ExperimentResult res = compare_modes(s);
  REQUIRE(res.series.size() == 2);
  CHECK(res.at("primary").detector.mode == RegenMode::Primary);
  CHECK(res.at("alternative").detector.mode == RegenMode::Alternative);
  for (int r = 0; r < 2; ++r) {
    CHECK(res.at("primary").reps[r].events == res.at("alternative").reps[r].events);
    CHECK(res.at("primary").reps[r].time_average == res.at("alternative").reps[r].time_average);
  }
  CHECK(res.at("alternative").merged.n_cycles > res.at("primary").merged.n_cycles);
}
