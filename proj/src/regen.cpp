#include "rsim/regen.hpp"

#include "rsim/error.hpp"

#include <algorithm>
#include <iomanip>

namespace rsim {

namespace {

bool classes_in_exp_phase(const SimState& s, const SimModel& model, int from, double t,
                          int view) {
  const int L = model.net.num_exogenous();
  for (int k = from; k < L; ++k) {
    if (!s.clocks[k].in_exp_phase(t, view)) return false;
  }
  return true;
}

}  // namespace

bool is_in_D(const SimState& s, const SimModel& model, int view) {
  if (s.total != 0) return false;
  const double t = s.t_now;
  if (!classes_in_exp_phase(s, model, 1, t, view)) return false;
  const double u1 = s.clocks[0].residual(t);
  for (int k = 1; k < model.net.num_exogenous(); ++k) {
    if (!(u1 < s.clocks[k].residual_exp(t, view))) return false;
  }
  return true;
}

bool detect_primary(const SimState& prev, const SimModel& model, const EventOutcome& ev,
                    int view) {
  if (!ev.is_arrival() || ev.cls != 0 || prev.total != 0) return false;
  return classes_in_exp_phase(prev, model, 1, ev.t_event, view);
}

std::optional<double> detect_alternative(const SimState& after, const SimModel& model,
                                         const EventOutcome& ev, int view) {
  if (!ev.is_departure() || after.total != 0) return std::nullopt;
  const double t = ev.t_event;
  if (!classes_in_exp_phase(after, model, 0, t, view)) return std::nullopt;
  double m = kInf;
  for (int k = 0; k < model.net.num_exogenous(); ++k) {
    m = std::min(m, after.clocks[k].residual_exp(t, view));
  }
  return t + m;
}

bool in_D_tilde(const SimState& after, const SimModel& model, int view) {
  if (after.total != 1 || after.class_count[0] != 1) return false;
  return classes_in_exp_phase(after, model, 1, after.t_now, view);
}

Segmentation segment(const std::vector<RegenerationMark>& marks, double horizon) {
  Segmentation seg;
  std::size_t n = 0;
  while (n < marks.size() && marks[n].time <= horizon) ++n;
  if (n < 2) throw Error(ErrorCode::NoRegenerationsFound, "no complete regeneration cycle");
  seg.delay_prefix = marks[0].time;
  seg.first_regeneration = marks[0].time;
  seg.last_regeneration = marks[n - 1].time;
  seg.cycles.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    seg.cycles.push_back(CycleRecord{i, marks[i - 1].time, marks[i].time - marks[i - 1].time,
                                     static_cast<double>(marks[i].integral - marks[i - 1].integral)});
  }
  return seg;
}

RunResult simulate(const SimModel& model, const RunConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw Error(ErrorCode::InvalidParameter, "horizon must be positive");
  for (const auto& d : cfg.detectors) {
    if (d.view < 0 || d.view >= model.views) {
      throw Error(ErrorCode::InvalidParameter, "detector view out of range");
    }
    if (d.mode == RegenMode::Alternative && !model.decomposed(0)) {
      throw Error(ErrorCode::ModeUnavailable,
                  "class 1 is not decomposable; alternative regenerations are not possible");
    }
  }

  SimState s = init_from_phi(model, cfg.seed, cfg.replication);
  RunResult out;
  out.horizon = cfg.horizon;
  for (const auto& d : cfg.detectors) {
    DetectorResult r;
    r.detector = d;
    if (d.mode == RegenMode::Primary && d.view == 0) r.marks.push_back({0.0, 0.0L});
    out.detectors.push_back(std::move(r));
  }
  if (cfg.trace) write_trace_header(*cfg.trace);

  long double integral = 0.0L;
  std::vector<bool> fired(cfg.detectors.size());
  // alternative detectors: set by a qualifying departure, consumed by the next arrival
  std::vector<bool> armed(cfg.detectors.size(), false);
  for (;;) {
    const EventOutcome ev = peek_event(s);
    if (!(ev.t_event <= cfg.horizon)) {
      integral += static_cast<long double>(cfg.h(s)) * (cfg.horizon - s.t_now);
      advance_to(s, cfg.horizon);
      break;
    }
    integral += static_cast<long double>(cfg.h(s)) * (ev.t_event - s.t_now);

    for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
      const Detector& d = cfg.detectors[i];
      if (d.mode == RegenMode::Primary) {
        fired[i] = detect_primary(s, model, ev, d.view);
      } else {
        fired[i] = armed[i] && ev.is_arrival();
        if (ev.is_arrival()) armed[i] = false;
      }
    }

    advance_to(s, ev.t_event);
    const EventOutcome done = apply_event(s, model, ev);
    ++out.events;

    if (done.is_departure() && s.total == 0) {
      for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
        const Detector& d = cfg.detectors[i];
        if (d.mode == RegenMode::Alternative) {
          armed[i] = detect_alternative(s, model, done, d.view).has_value();
        }
      }
    }

    for (std::size_t i = 0; i < fired.size(); ++i) {
      if (!fired[i]) continue;
      DetectorResult& r = out.detectors[i];
      r.marks.push_back({ev.t_event, integral});
      if (r.detector.mode == RegenMode::Primary && !in_D_tilde(s, model, r.detector.view)) {
        ++r.d_tilde_violations;
      }
    }
    if (s.exogenous_arrivals != s.exits + static_cast<std::uint64_t>(s.total)) {
      out.conservation_ok = false;
    }
    if (cfg.trace) write_trace_row(*cfg.trace, done, s);
  }

  out.integral = integral;
  out.exogenous_arrivals = s.exogenous_arrivals;
  out.exits = s.exits;
  out.final_total = s.total;
  out.sojourn_sum = s.sojourn_sum;
  out.fifo_ok = s.fifo_ok;
  for (double b : s.busy_time) out.busy_fraction.push_back(b / cfg.horizon);
  for (auto& r : out.detectors) {
    try {
      r.segmentation = segment(r.marks, cfg.horizon);
      r.has_cycles = true;
    } catch (const Error&) {
      r.has_cycles = false;
    }
  }
  return out;
}

void write_cycles_csv(std::ostream& os, const std::vector<CycleRecord>& cycles) {
  os << "index,T_n,tau_n,R_n\n" << std::setprecision(17);
  for (const auto& c : cycles) {
    os << c.index << ',' << c.start + c.tau << ',' << c.tau << ',' << c.R << '\n';
  }
}

}  // namespace rsim
