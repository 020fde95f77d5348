#pragma once

// Seeded replications, lambda sweeps and mode comparisons on top of the
// simulator. Replications run on a small worker pool and are merged in
// replication order, so results do not depend on the number of workers.

#include "rsim/network.hpp"
#include "rsim/regen.hpp"
#include "rsim/stats.hpp"

#include <string>
#include <vector>

namespace rsim {

struct RunSpec {
  std::string name = "network";
  NetworkConfig net;
  double horizon = 1e5;
  std::uint64_t seed = 1;
  int reps = 1;
  RegenMode mode = RegenMode::Primary;
  StateFunctional h;
  double level = 0.95;
  bool allow_unstable = false;
  int workers = 0;  // 0: hardware concurrency
  bool keep_cycles = false;
};

struct ReplicationSummary {
  int replication = 0;
  Report report;
  EstimatorAccumulator acc;
  double delay_prefix = 0.0;
  double time_average = 0.0;
  std::uint64_t events = 0;
  std::size_t d_tilde_violations = 0;
  bool fifo_ok = true;
  bool conservation_ok = true;
  std::vector<double> busy_fraction;
  std::vector<CycleRecord> cycles;  // only with keep_cycles
};

struct DetectorSeries {
  std::string label;
  Detector detector;
  std::vector<ReplicationSummary> reps;
  Report merged;
};

struct ClassDecomposition {
  int cls = 0;
  std::string family;
  double lambda_f = 0.0;
  double q_bar = 1.0;
  std::vector<double> lambda;  // one per view
};

struct ExperimentResult {
  std::string command;
  TrafficSolution traffic;
  ValidationReport validation;
  std::vector<ClassDecomposition> decompositions;
  std::vector<double> factors;
  std::vector<DetectorSeries> series;

  const DetectorSeries& at(const std::string& label) const;
};

/// Checks stability and mode availability; throws Unstable / ModeUnavailable.
ValidationReport preflight(const RunSpec& spec, RegenMode mode);

/// Runs `detectors` on a common path per replication.
ExperimentResult run_detectors(const RunSpec& spec, const SimModel& model,
                               const std::vector<Detector>& detectors,
                               const std::vector<std::string>& labels);

ExperimentResult run(const RunSpec& spec);

/// Classes 2..L at each factor times lambda_f, one coupled path per
/// replication, one series per factor (factors strictly increasing, >= 1).
ExperimentResult sweep_lambda(const RunSpec& spec, const std::vector<double>& factors);

/// Primary and alternative detectors on the same paths.
ExperimentResult compare_modes(const RunSpec& spec);

}  // namespace rsim
