#include "rsim/report_io.hpp"

#include "rsim/error.hpp"

#include <cmath>
#include <sstream>

namespace rsim {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

json to_json(const Report& r) {
  json j{{"n_cycles", r.n_cycles},
         {"t_cycles", r.t_cycles},
         {"beta", r.n_cycles > 0 ? json(r.beta) : json(nullptr)},
         {"s", opt(r.s)},
         {"tavc", opt(r.tavc)},
         {"b", opt(r.b)},
         {"avsde", opt(r.avsde)},
         {"level", r.level},
         {"z", r.z},
         {"r_time_average", opt(r.r_time_average)}};
  if (r.ci) {
    j["ci"] = {{"lo", r.ci->lo}, {"hi", r.ci->hi}, {"halfwidth", r.ci->halfwidth()}};
  } else {
    j["ci"] = nullptr;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const ValidationReport& v) {
  json checks = json::array();
  for (const auto& c : v.checks) {
    json cj{{"id", c.id}, {"status", to_string(c.status)}, {"detail", c.detail},
            {"value", finite_or_null(c.value)}};
    if (c.cls >= 0) cj["class"] = c.cls + 1;
    if (c.station >= 0) cj["station"] = c.station + 1;
    checks.push_back(cj);
  }
  return {{"mode", to_string(v.mode)}, {"ok", v.ok()}, {"checks", checks}};
}

json to_json(const TrafficSolution& t) {
  return {{"sigma", vec(t.sigma)}, {"rho", vec(t.rho)}, {"residual", t.residual}, {"stable", t.stable()}};
}

json to_json(const oracle::KSReport& ks) {
  return {{"statistic", ks.statistic}, {"critical", ks.critical}, {"n", ks.n}, {"m", ks.m},
          {"pass", ks.pass}};
}

std::string describe(const StateFunctional& h) {
  std::ostringstream os;
  switch (h.kind) {
    case StateFunctional::Kind::TotalQueue: os << "total"; break;
    case StateFunctional::Kind::PerClassQueue: os << "class:" << h.cls + 1; break;
    case StateFunctional::Kind::Indicator: os << "indicator:" << h.threshold; break;
  }
  return os.str();
}

StateFunctional parse_functional(const std::string& text) {
  if (text == "total") return StateFunctional::total_queue();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    try {
      std::size_t used = 0;
      if (head == "class") {
        const int k = std::stoi(arg, &used);
        if (used == arg.size() && k >= 1) return StateFunctional::per_class(k - 1);
      } else if (head == "indicator") {
        const double c = std::stod(arg, &used);
        if (used == arg.size()) return StateFunctional::indicator(c);
      }
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown functional '" + text + "'");
}

json to_json(const ExperimentResult& res, const RunSpec& spec) {
  json j;
  j["schema"] = kReportSchema;
  j["command"] = res.command;
  j["config"] = spec.name;
  j["run"] = {{"horizon", spec.horizon}, {"seed", spec.seed},   {"reps", spec.reps},
              {"mode", to_string(spec.mode)}, {"h", describe(spec.h)}, {"level", spec.level},
              {"allow_unstable", spec.allow_unstable}};
  if (spec.allow_unstable && !res.traffic.stable()) {
    j["run"]["warning"] = "nominal load >= 1; estimators carry no validity claim";
  }
  j["traffic"] = to_json(res.traffic);
  j["validation"] = to_json(res.validation);

  json decs = json::array();
  for (const auto& d : res.decompositions) {
    decs.push_back({{"class", d.cls + 1}, {"family", d.family}, {"lambda_f", d.lambda_f},
                    {"q_bar", d.q_bar}, {"lambda", d.lambda}});
  }
  j["decompositions"] = decs;
  if (!res.factors.empty()) j["factors"] = res.factors;

  json series = json::array();
  for (const auto& s : res.series) {
    json reps = json::array();
    for (const auto& r : s.reps) {
      json rj = to_json(r.report);
      rj["replication"] = r.replication;
      rj["delay_prefix"] = r.delay_prefix;
      rj["events"] = r.events;
      rj["d_tilde_violations"] = r.d_tilde_violations;
      rj["fifo_ok"] = r.fifo_ok;
      rj["conservation_ok"] = r.conservation_ok;
      rj["busy_fraction"] = r.busy_fraction;
      reps.push_back(rj);
    }
    series.push_back({{"label", s.label},
                      {"mode", to_string(s.detector.mode)},
                      {"view", s.detector.view},
                      {"merged", to_json(s.merged)},
                      {"replications", reps}});
  }
  j["series"] = series;
  return j;
}

}  // namespace rsim
