#include "rsim/engine.hpp"

#include "rsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace rsim {

SimModel make_model(const NetworkConfig& net, const std::vector<double>& sweep_factors) {
  net.check();
  SimModel m;
  m.net = net;
  m.ladders.resize(net.num_classes());
  m.views = sweep_factors.empty() ? 1 : static_cast<int>(sweep_factors.size());

  for (int k = 0; k < net.num_classes(); ++k) {
    const auto& c = net.classes[k];
    if (!c.interarrival) continue;
    if (!sweep_factors.empty() && k > 0) {
      m.ladders[k].emplace(*c.interarrival, sweep_factors);
      continue;
    }
    try {
      m.ladders[k].emplace(build_decomposition(*c.interarrival,
                                               c.decompose.value_or(LambdaChoice::minimal())));
    } catch (const Error& e) {
      // an explicit directive on a law that cannot be decomposed is a config error
      if (e.code() != ErrorCode::NotDecomposable || c.decompose.has_value()) throw;
    }
  }
  return m;
}

double ArrivalClock::residual_non_exp(double t, int view) const {
  if (!decomposed) return next_time - t;
  return std::min(next_time - t, std::max(0.0, phase_entry[view] - t));
}

double ArrivalClock::residual_exp(double t, int view) const {
  if (!decomposed || !(phase_entry[view] < kInf)) return 0.0;
  return next_time - std::max(t, phase_entry[view]);
}

SimStreams make_streams(int num_classes, std::uint64_t seed, std::uint64_t replication) {
  auto mk = [&](int cls, StreamPurpose p) {
    return Stream(derive_seed(seed, replication, static_cast<std::uint64_t>(cls),
                              static_cast<std::uint64_t>(p)));
  };
  SimStreams s{{}, {}, {}, mk(0xFFFF, StreamPurpose::Routing)};
  for (int k = 0; k < num_classes; ++k) {
    s.arrival.push_back(DecompStreams{mk(k, StreamPurpose::Mixture), mk(k, StreamPurpose::Exponential),
                                      mk(k, StreamPurpose::Residual), mk(k, StreamPurpose::Tilde),
                                      mk(k, StreamPurpose::Ladder)});
    s.direct.push_back(mk(k, StreamPurpose::Direct));
    s.service.push_back(mk(k, StreamPurpose::Service));
  }
  return s;
}

SimState empty_state(const SimModel& model, std::uint64_t seed, std::uint64_t replication) {
  const int K = model.net.num_classes();
  const int d = model.net.stations;
  SimState s;
  s.rng = make_streams(K, seed, replication);
  s.stations.resize(d);
  s.class_count.assign(K, 0);
  s.clocks.resize(K);
  s.busy_time.assign(d, 0.0);
  s.last_started_seq.assign(d, 0);
  for (int k = 0; k < K; ++k) {
    s.clocks[k].active = model.net.classes[k].interarrival.has_value();
    s.clocks[k].decomposed = model.decomposed(k);
    s.clocks[k].phase_entry.fill(kInf);
  }
  return s;
}

namespace {

const ExtractionLadder::Draw& clamp_views(ExtractionLadder::Draw& d, int have, int want) {
  for (int j = have; j < want; ++j) d.exp_part[j] = d.exp_part[have - 1];
  return d;
}

void set_clock(ArrivalClock& c, double t, const ExtractionLadder::Draw& d, int views) {
  c.draw_time = t;
  c.next_time = t + d.total;
  for (int j = 0; j < views; ++j) {
    c.phase_entry[j] = d.reachable ? std::min(t + (d.total - d.exp_part[j]), c.next_time) : kInf;
  }
}

}  // namespace

void redraw_arrival(SimState& state, const SimModel& model, int cls) {
  ArrivalClock& c = state.clocks[cls];
  if (!c.active) return;
  const double t = state.t_now;
  if (!model.decomposed(cls)) {
    c.draw_time = t;
    c.next_time = t + sample(*model.net.classes[cls].interarrival, state.rng.direct[cls]);
    return;
  }
  const ExtractionLadder& lad = *model.ladders[cls];
  ExtractionLadder::Draw d = lad.sample(state.rng.arrival[cls]);
  set_clock(c, t, clamp_views(d, lad.views(), model.views), model.views);
}

SimState init_from_phi(const SimModel& model, std::uint64_t seed, std::uint64_t replication) {
  SimState s = empty_state(model, seed, replication);
  const int L = model.net.num_exogenous();
  for (int k = 1; k < L; ++k) {
    if (!model.decomposed(k)) {
      throw Error(ErrorCode::ModeUnavailable,
                  "class " + std::to_string(k + 1) + " is not decomposed; no regeneration measure");
    }
  }
  redraw_arrival(s, model, 0);
  for (int k = 1; k < L; ++k) {
    const ExtractionLadder& lad = *model.ladders[k];
    ExtractionLadder::Draw d = lad.sample_exp_phase(s.rng.arrival[k]);
    set_clock(s.clocks[k], 0.0, clamp_views(d, lad.views(), model.views), model.views);
  }
  // the class-1 customer whose arrival defines the regeneration
  ++s.exogenous_arrivals;
  enqueue(s, model, 0, 0.0);
  return s;
}

EventOutcome peek_event(const SimState& state) {
  EventOutcome best;
  auto key = [](const EventOutcome& e) {
    return std::make_tuple(e.t_event, e.is_arrival() ? 1 : 0, e.cls);
  };
  for (int i = 0; i < static_cast<int>(state.stations.size()); ++i) {
    const StationState& st = state.stations[i];
    if (st.queue.empty()) continue;
    EventOutcome e{EventOutcome::Kind::Departure, st.queue.front().cls, i, -1, st.departure_time};
    if (key(e) < key(best)) best = e;
  }
  for (int k = 0; k < static_cast<int>(state.clocks.size()); ++k) {
    const ArrivalClock& c = state.clocks[k];
    if (!c.active) continue;
    EventOutcome e{EventOutcome::Kind::Arrival, k, -1, -1, c.next_time};
    if (key(e) < key(best)) best = e;
  }
  return best;
}

void advance_to(SimState& state, double t) {
  const double dt = t - state.t_now;
  if (dt > 0.0) {
    for (std::size_t i = 0; i < state.stations.size(); ++i) {
      if (!state.stations[i].queue.empty()) state.busy_time[i] += dt;
    }
  }
  state.t_now = t;
}

void start_service_if_idle(SimState& state, const SimModel& model, int station) {
  StationState& st = state.stations[station];
  if (st.queue.empty() || st.departure_time < kInf) return;
  const Customer& head = st.queue.front();
  if (state.last_started_seq[station] > head.seq + 1) state.fifo_ok = false;
  state.last_started_seq[station] = head.seq + 1;
  st.service_start = state.t_now;
  st.departure_time =
      state.t_now + sample(model.net.classes[head.cls].service, state.rng.service[head.cls]);
}

void enqueue(SimState& state, const SimModel& model, int cls, double entered) {
  const int station = model.net.classes[cls].station;
  state.stations[station].queue.push_back(Customer{cls, state.next_seq++, entered});
  ++state.class_count[cls];
  ++state.total;
  start_service_if_idle(state, model, station);
}

EventOutcome apply_event(SimState& state, const SimModel& model, EventOutcome ev) {
  if (ev.is_arrival()) {
    ev.station = model.net.classes[ev.cls].station;
    ++state.exogenous_arrivals;
    enqueue(state, model, ev.cls, state.t_now);
    redraw_arrival(state, model, ev.cls);
    return ev;
  }

  StationState& st = state.stations[ev.station];
  const Customer c = st.queue.front();
  st.queue.pop_front();
  st.departure_time = kInf;
  --state.class_count[c.cls];
  --state.total;

  const auto row = model.net.routing.row(c.cls);
  const double u = state.rng.routing.uniform();
  double cum = 0.0;
  ev.routed_to = -1;
  for (int l = 0; l < row.size(); ++l) {
    cum += row(l);
    if (u < cum) {
      ev.routed_to = l;
      break;
    }
  }
  if (ev.routed_to < 0) {
    ++state.exits;
    state.sojourn_sum += state.t_now - c.entered;
  }
  start_service_if_idle(state, model, ev.station);
  if (ev.routed_to >= 0) enqueue(state, model, ev.routed_to, c.entered);
  return ev;
}

EventOutcome step(SimState& state, const SimModel& model) {
  const EventOutcome ev = peek_event(state);
  if (!(ev.t_event < kInf)) throw Error(ErrorCode::InvalidParameter, "no pending events");
  advance_to(state, ev.t_event);
  return apply_event(state, model, ev);
}

double StateFunctional::operator()(const SimState& s) const {
  switch (kind) {
    case Kind::TotalQueue: return s.total;
    case Kind::PerClassQueue: return s.class_count[cls];
    case Kind::Indicator: return s.total > threshold ? 1.0 : 0.0;
  }
  return 0.0;
}

double integrate_h(const SimState& state, const StateFunctional& h, double from, double to) {
  const double next = peek_event(state).t_event;
  if (next > from && next < to) {
    throw Error(ErrorCode::IntervalContainsEvent, "integration interval straddles an event");
  }
  return h(state) * (to - from);
}

void write_trace_header(std::ostream& os) { os << "t,event,class,station,total\n"; }

void write_trace_row(std::ostream& os, const EventOutcome& ev, const SimState& after) {
  os << ev.t_event << ',' << (ev.is_arrival() ? "arrival" : "departure") << ',' << ev.cls + 1 << ','
     << ev.station + 1 << ',' << after.total << '\n';
}

}  // namespace rsim
