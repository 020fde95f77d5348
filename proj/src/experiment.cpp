#include "rsim/experiment.hpp"

#include "rsim/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace rsim {

const DetectorSeries& ExperimentResult::at(const std::string& label) const {
  for (const auto& s : series) {
    if (s.label == label) return s;
  }
  throw Error(ErrorCode::InvalidParameter, "no series '" + label + "'");
}

ValidationReport preflight(const RunSpec& spec, RegenMode mode) {
  if (!(spec.horizon > 0.0)) throw Error(ErrorCode::ConfigInvalid, "horizon must be positive");
  if (spec.reps < 1) throw Error(ErrorCode::ConfigInvalid, "need at least one replication");
  solve_traffic(spec.net, spec.allow_unstable);
  ValidationReport rep = validate_assumptions(spec.net, mode);
  for (const auto& c : rep.checks) {
    if (c.status != CheckStatus::Fail) continue;
    if (c.id == "A3") {
      if (mode == RegenMode::Alternative && c.cls == 0) {
        throw Error(ErrorCode::ModeUnavailable,
                    "class 1 is not decomposable; alternative regenerations are not possible (" +
                        c.detail + ")");
      }
      throw Error(ErrorCode::ModeUnavailable,
                  "class " + std::to_string(c.cls + 1) + " is not decomposable: " + c.detail);
    }
    if (c.id == "stability" && spec.allow_unstable) continue;
    throw Error(ErrorCode::ConfigInvalid, c.id + ": " + c.detail);
  }
  return rep;
}

namespace {

std::vector<ClassDecomposition> describe_model(const SimModel& model) {
  std::vector<ClassDecomposition> out;
  for (int k = 0; k < model.net.num_classes(); ++k) {
    if (!model.decomposed(k)) continue;
    const ExtractionLadder& lad = *model.ladders[k];
    ClassDecomposition d;
    d.cls = k;
    d.family = lad.base().source.describe();
    d.lambda_f = lad.base().lambda_f;
    d.q_bar = lad.base().q_bar;
    for (int j = 0; j < lad.views(); ++j) d.lambda.push_back(lad.rate(j));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

ExperimentResult run_detectors(const RunSpec& spec, const SimModel& model,
                               const std::vector<Detector>& detectors,
                               const std::vector<std::string>& labels) {
  const int R = spec.reps;
  const std::size_t D = detectors.size();
  std::vector<std::vector<ReplicationSummary>> per_rep(R);
  std::vector<long double> integrals(R, 0.0L);

  auto one = [&](int r) {
    RunConfig rc;
    rc.horizon = spec.horizon;
    rc.seed = spec.seed;
    rc.replication = static_cast<std::uint64_t>(r);
    rc.h = spec.h;
    rc.detectors = detectors;
    const RunResult run = simulate(model, rc);
    integrals[r] = run.integral;
    auto& out = per_rep[r];
    out.resize(D);
    for (std::size_t d = 0; d < D; ++d) {
      const DetectorResult& dr = run.detectors[d];
      ReplicationSummary& s = out[d];
      s.replication = r;
      if (dr.has_cycles) {
        s.acc = accumulate(dr.segmentation.cycles);
        s.delay_prefix = dr.segmentation.delay_prefix;
        if (spec.keep_cycles) s.cycles = dr.segmentation.cycles;
      }
      s.report = make_report(s.acc, spec.level);
      s.report.r_time_average = run.time_average();
      s.time_average = run.time_average();
      s.events = run.events;
      s.d_tilde_violations = dr.d_tilde_violations;
      s.fifo_ok = run.fifo_ok;
      s.conservation_ok = run.conservation_ok;
      s.busy_fraction = run.busy_fraction;
    }
  };

  int workers = spec.workers > 0 ? spec.workers
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, R);
  if (workers <= 1) {
    for (int r = 0; r < R; ++r) one(r);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r; (r = next.fetch_add(1)) < R;) {
          try {
            one(r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  ExperimentResult res;
  res.traffic = solve_traffic(spec.net, /*allow_unstable=*/true);
  res.decompositions = describe_model(model);
  long double total_integral = 0.0L;
  for (int r = 0; r < R; ++r) total_integral += integrals[r];
  for (std::size_t d = 0; d < D; ++d) {
    DetectorSeries s;
    s.label = labels.at(d);
    s.detector = detectors[d];
    EstimatorAccumulator acc;
    for (int r = 0; r < R; ++r) {
      acc.merge(per_rep[r][d].acc);
      s.reps.push_back(std::move(per_rep[r][d]));
    }
    s.merged = make_report(acc, spec.level);
    s.merged.r_time_average = static_cast<double>(total_integral / (spec.horizon * R));
    res.series.push_back(std::move(s));
  }
  return res;
}

ExperimentResult run(const RunSpec& spec) {
  ValidationReport v = preflight(spec, spec.mode);
  const SimModel model = make_model(spec.net);
  ExperimentResult res = run_detectors(spec, model, {Detector{spec.mode, 0}}, {to_string(spec.mode)});
  res.command = "run";
  res.validation = std::move(v);
  return res;
}

ExperimentResult sweep_lambda(const RunSpec& spec, const std::vector<double>& factors) {
  for (double f : factors) {
    if (!(f >= 1.0)) throw Error(ErrorCode::LambdaTooSmall, "sweep factors must be >= 1");
  }
  ValidationReport v = preflight(spec, spec.mode);
  const SimModel model = make_model(spec.net, factors);
  std::vector<Detector> dets;
  std::vector<std::string> labels;
  for (int j = 0; j < static_cast<int>(factors.size()); ++j) {
    dets.push_back({spec.mode, j});
    std::ostringstream os;
    os << "x" << factors[j];
    labels.push_back(os.str());
  }
  ExperimentResult res = run_detectors(spec, model, dets, labels);
  res.command = "sweep-lambda";
  res.factors = factors;
  res.validation = std::move(v);
  return res;
}

ExperimentResult compare_modes(const RunSpec& spec) {
  preflight(spec, RegenMode::Primary);
  ValidationReport v = preflight(spec, RegenMode::Alternative);
  const SimModel model = make_model(spec.net);
  ExperimentResult res =
      run_detectors(spec, model, {Detector{RegenMode::Primary, 0}, Detector{RegenMode::Alternative, 0}},
                    {"primary", "alternative"});
  res.command = "compare-modes";
  res.validation = std::move(v);
  return res;
}

}  // namespace rsim
