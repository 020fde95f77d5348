#pragma once

// Regeneration detection and cycle segmentation.
//
// Primary: a class-1 arrival that finds the network empty while classes
// 2..L are all in exponential phase. Alternative: a departure that empties
// the network while every class 1..L is in exponential phase marks S^; the
// regeneration is the next arrival, S^ + min_k U_k^(e)(S^).

#include "rsim/engine.hpp"
#include "rsim/network.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

namespace rsim {

struct CycleRecord {
  std::size_t index = 0;
  double start = 0.0;  // T_{i-1}
  double tau = 0.0;
  double R = 0.0;
};

/// State in D: empty network, classes 2..L in exponential phase, and the
/// next event is a class-1 arrival.
bool is_in_D(const SimState& s, const SimModel& model, int view = 0);

/// `prev` is the left limit at the event instant (event not yet applied).
bool detect_primary(const SimState& prev, const SimModel& model, const EventOutcome& ev,
                    int view = 0);

/// Departure-side view of the alternative structure: if `after` (state right
/// after a departure) is empty with classes 1..L in exponential phase, the
/// regeneration is the next arrival, at S + min_k U_k^(e).
std::optional<double> detect_alternative(const SimState& after, const SimModel& model,
                                         const EventOutcome& ev, int view = 0);

/// Post-event state of a primary regeneration lies in D~.
bool in_D_tilde(const SimState& after, const SimModel& model, int view = 0);

struct RegenerationMark {
  double time = 0.0;
  long double integral = 0.0;  // integral of h over [0, time]
};

struct Segmentation {
  std::vector<CycleRecord> cycles;
  double delay_prefix = 0.0;  // time before the first regeneration
  double first_regeneration = 0.0;
  double last_regeneration = 0.0;
};

/// Cycles between consecutive marks up to `horizon`; the tail after the last
/// mark is dropped. Throws NoRegenerationsFound with fewer than one cycle.
Segmentation segment(const std::vector<RegenerationMark>& marks, double horizon);

struct Detector {
  RegenMode mode = RegenMode::Primary;
  int view = 0;
};

struct RunConfig {
  double horizon = 1e5;
  std::uint64_t seed = 1;
  std::uint64_t replication = 0;
  StateFunctional h;
  std::vector<Detector> detectors{Detector{}};
  std::ostream* trace = nullptr;
};

struct DetectorResult {
  Detector detector;
  std::vector<RegenerationMark> marks;
  Segmentation segmentation;
  bool has_cycles = false;
  std::size_t d_tilde_violations = 0;
};

struct RunResult {
  double horizon = 0.0;
  long double integral = 0.0;
  std::uint64_t events = 0;
  std::uint64_t exogenous_arrivals = 0;
  std::uint64_t exits = 0;
  int final_total = 0;
  double sojourn_sum = 0.0;
  std::vector<double> busy_fraction;
  bool fifo_ok = true;
  bool conservation_ok = true;
  std::vector<DetectorResult> detectors;

  double time_average() const { return static_cast<double>(integral / horizon); }
};

/// One run from the regeneration measure phi. Primary detectors at view 0
/// start non-delayed (a mark at t = 0); all others are delayed.
RunResult simulate(const SimModel& model, const RunConfig& cfg);

/// Per-cycle CSV: index, T_n, tau_n, R_n.
void write_cycles_csv(std::ostream& os, const std::vector<CycleRecord>& cycles);

}  // namespace rsim
