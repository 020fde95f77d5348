#pragma once

// Discrete-event core for the Markov state Y(t) = (Q(t), U(t), V(t)).
//
// Each exogenous class keeps a single pending arrival at an absolute time.
// For decomposed classes the clock also remembers, per extraction view, the
// instant at which the non-exponential part runs out (phase entry); the
// residual clocks U^(ne), U^(e) are derived from those two timestamps.
// Stations are single-server FIFO; the head of the queue is in service.

#include "rsim/decomp.hpp"
#include "rsim/network.hpp"
#include "rsim/random.hpp"
#include "rsim/types.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <vector>

namespace rsim {

/// Network plus the interarrival decompositions actually used to drive the
/// clocks. `ladders[k]` is empty for undecomposed or null classes.
struct SimModel {
  NetworkConfig net;
  std::vector<std::optional<ExtractionLadder>> ladders;
  int views = 1;

  bool decomposed(int cls) const { return ladders[cls].has_value(); }
};

/// Decomposes every exogenous class whose law allows it, using the class's
/// own lambda directive (minimal by default). With non-empty `sweep_factors`
/// the classes 2..L are instead decomposed at every factor times lambda_f,
/// one view per factor (factors strictly increasing).
SimModel make_model(const NetworkConfig& net, const std::vector<double>& sweep_factors = {});

struct Customer {
  int cls;
  std::uint64_t seq;
  double entered;  // time the customer entered the network
};

struct StationState {
  std::deque<Customer> queue;  // front is in service
  double departure_time = kInf;
  double service_start = 0.0;
};

struct ArrivalClock {
  bool active = false;
  bool decomposed = false;
  double draw_time = 0.0;
  double next_time = kInf;
  std::array<double, ExtractionLadder::kMaxViews> phase_entry{};

  bool in_exp_phase(double t, int view) const { return decomposed && phase_entry[view] <= t; }
  double residual(double t) const { return next_time - t; }
  double residual_non_exp(double t, int view) const;
  double residual_exp(double t, int view) const;
};

struct SimStreams {
  std::vector<DecompStreams> arrival;
  std::vector<Stream> direct;
  std::vector<Stream> service;
  Stream routing;
};

enum class StreamPurpose : std::uint64_t {
  Mixture = 1,
  Exponential,
  Residual,
  Tilde,
  Ladder,
  Direct,
  Service,
  Routing,
};

SimStreams make_streams(int num_classes, std::uint64_t seed, std::uint64_t replication);

struct SimState {
  double t_now = 0.0;
  std::vector<StationState> stations;
  std::vector<int> class_count;
  int total = 0;
  std::vector<ArrivalClock> clocks;
  SimStreams rng;

  std::uint64_t next_seq = 0;
  std::uint64_t exogenous_arrivals = 0;
  std::uint64_t exits = 0;
  double sojourn_sum = 0.0;  // over exited customers
  std::vector<double> busy_time;

  std::vector<std::uint64_t> last_started_seq;  // per station, FIFO audit
  bool fifo_ok = true;
};

/// Empty network with no pending events; callers fill in clocks.
SimState empty_state(const SimModel& model, std::uint64_t seed, std::uint64_t replication = 0);

/// Initial state drawn from the regeneration measure: one class-1 customer in
/// service, class-1 clock ~ F_1, classes 2..L in exponential phase with
/// Exp(lambda_k) clocks. Throws ModeUnavailable if a class 2..L is not
/// decomposed.
SimState init_from_phi(const SimModel& model, std::uint64_t seed, std::uint64_t replication = 0);

struct EventOutcome {
  enum class Kind { Arrival, Departure };
  Kind kind = Kind::Arrival;
  int cls = -1;
  int station = -1;
  int routed_to = -1;  // departures: next class or -1 for exit
  double t_event = kInf;

  bool is_arrival() const { return kind == Kind::Arrival; }
  bool is_departure() const { return kind == Kind::Departure; }
};

/// Next pending event without changing the state. Ties: departures before
/// arrivals, then lower class index first.
EventOutcome peek_event(const SimState& state);

/// Moves the clock to `t` (no event may be pending before `t`).
void advance_to(SimState& state, double t);

/// Applies a pending event at the current time (state.t_now == ev.t_event).
/// Fills in the routing outcome for departures.
EventOutcome apply_event(SimState& state, const SimModel& model, EventOutcome ev);

/// peek + advance + apply.
EventOutcome step(SimState& state, const SimModel& model);

/// Draws a fresh interarrival for class `cls` starting at the current time.
void redraw_arrival(SimState& state, const SimModel& model, int cls);

/// Starts service for the head of `station` if the server is idle.
void start_service_if_idle(SimState& state, const SimModel& model, int station);

/// Adds a customer to its class's station queue at the current time.
void enqueue(SimState& state, const SimModel& model, int cls, double entered);

// ---------------------------------------------------------------------------
// state functionals

struct StateFunctional {
  enum class Kind { TotalQueue, PerClassQueue, Indicator };
  Kind kind = Kind::TotalQueue;
  int cls = 0;
  double threshold = 0.0;

  static StateFunctional total_queue() { return {}; }
  static StateFunctional per_class(int k) { return {Kind::PerClassQueue, k, 0.0}; }
  static StateFunctional indicator(double c) { return {Kind::Indicator, 0, c}; }

  double operator()(const SimState& s) const;
};

/// Exact integral of h over [from, to]; h is constant between events.
/// Throws IntervalContainsEvent if an event is pending strictly inside.
double integrate_h(const SimState& state, const StateFunctional& h, double from, double to);

/// CSV event trace: t,event,class,station,total.
void write_trace_header(std::ostream& os);
void write_trace_row(std::ostream& os, const EventOutcome& ev, const SimState& after);

}  // namespace rsim
