#include "rsim/config.hpp"

#include "rsim/error.hpp"

#include <fstream>

namespace rsim {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

double num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) bad(where + ": missing number '" + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

DensityFamily family_from_json(const json& j) {
  const char* key = j.is_object() && j.contains("kind") ? "kind" : "family";
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
    bad("distribution literal needs a 'kind' string");
  }
  const std::string f = j.at(key).get<std::string>();
  try {
    if (f == "exponential") return DensityFamily::exponential(num(j, "rate", f));
    if (f == "gamma") return DensityFamily::gamma(num(j, "shape", f), num(j, "rate", f));
    if (f == "lognormal") return DensityFamily::lognormal(num(j, "mu", f), num(j, "sigma2", f));
    if (f == "pareto") return DensityFamily::pareto(num(j, "shape", f), num(j, "scale", f));
    if (f == "hyperexp2") {
      return DensityFamily::hyperexp2(num(j, "p1", f), num(j, "rate1", f), num(j, "rate2", f));
    }
    if (f == "weibull") return DensityFamily::weibull(num(j, "shape", f), num(j, "scale", f));
    if (f == "uniform") return DensityFamily::uniform(num(j, "lo", f), num(j, "hi", f));
    if (f == "exp_plus_weibull") {
      return DensityFamily::exp_plus_weibull(num(j, "rate", f), num(j, "shape", f),
                                             num(j, "scale", f));
    }
    if (f == "truncated_tail" || f == "truncated_head") {
      if (!j.contains("parent")) bad(f + ": missing 'parent'");
      const DensityFamily parent = family_from_json(j.at("parent"));
      const double cut = num(j, "cut", f);
      return f == "truncated_tail" ? DensityFamily::truncated_tail(parent, cut)
                                   : DensityFamily::truncated_head(parent, cut);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    bad(f + ": " + e.what());
  }
  bad("unknown family '" + f + "'");
}

json family_to_json(const DensityFamily& fam) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, family::Exponential>) {
          return {{"kind", "exponential"}, {"rate", p.rate}};
        } else if constexpr (std::is_same_v<T, family::Gamma>) {
          return {{"kind", "gamma"}, {"shape", p.shape}, {"rate", p.rate}};
        } else if constexpr (std::is_same_v<T, family::Lognormal>) {
          return {{"kind", "lognormal"}, {"mu", p.mu}, {"sigma2", p.sigma2}};
        } else if constexpr (std::is_same_v<T, family::Pareto>) {
          return {{"kind", "pareto"}, {"shape", p.shape}, {"scale", p.scale}};
        } else if constexpr (std::is_same_v<T, family::HyperExp2>) {
          return {{"kind", "hyperexp2"}, {"p1", p.p1}, {"rate1", p.rate1}, {"rate2", p.rate2}};
        } else if constexpr (std::is_same_v<T, family::Weibull>) {
          return {{"kind", "weibull"}, {"shape", p.shape}, {"scale", p.scale}};
        } else if constexpr (std::is_same_v<T, family::Uniform>) {
          return {{"kind", "uniform"}, {"lo", p.lo}, {"hi", p.hi}};
        } else if constexpr (std::is_same_v<T, family::TruncatedTail>) {
          return {{"kind", "truncated_tail"}, {"parent", family_to_json(*p.parent)}, {"cut", p.cut}};
        } else if constexpr (std::is_same_v<T, family::TruncatedHead>) {
          return {{"kind", "truncated_head"}, {"parent", family_to_json(*p.parent)}, {"cut", p.cut}};
        } else {
          return {{"kind", "exp_plus_weibull"}, {"rate", p.rate}, {"shape", p.shape}, {"scale", p.scale}};
        }
      },
      fam.params());
}

LambdaChoice lambda_choice_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "minimal") return LambdaChoice::minimal();
    bad("decompose: unknown directive '" + j.get<std::string>() + "'");
  }
  if (!j.is_object()) bad("decompose must be an object or \"minimal\"");
  if (j.contains("lambda")) return lambda_choice_from_json(j.at("lambda"));
  if (j.contains("scale")) return LambdaChoice::scaled(num(j, "scale", "decompose"));
  if (j.contains("explicit")) return LambdaChoice::explicit_rate(num(j, "explicit", "decompose"));
  if (j.contains("rate")) return LambdaChoice::explicit_rate(num(j, "rate", "decompose"));
  bad("decompose: expected minimal, scale or explicit");
}

json lambda_choice_to_json(const LambdaChoice& c) {
  switch (c.kind) {
    case LambdaChoice::Kind::Minimal: return {{"lambda", "minimal"}};
    case LambdaChoice::Kind::Scaled: return {{"lambda", {{"scale", c.value}}}};
    case LambdaChoice::Kind::Explicit: return {{"lambda", {{"explicit", c.value}}}};
  }
  return {};
}

LoadedConfig config_from_json(const json& j) {
  LoadedConfig out;
  out.source = j;
  if (!j.is_object()) bad("config must be a JSON object");
  out.name = j.value("name", std::string("network"));
  if (!j.contains("stations") || !j.at("stations").is_number_integer()) {
    bad("'stations' must be an integer");
  }
  out.net.stations = j.at("stations").get<int>();
  if (!j.contains("classes") || !j.at("classes").is_array()) bad("'classes' must be an array");

  const auto& cls = j.at("classes");
  for (std::size_t k = 0; k < cls.size(); ++k) {
    const auto& c = cls[k];
    const std::string where = "classes[" + std::to_string(k) + "]";
    ClassSpec spec{c.value("name", std::to_string(k + 1)), 0, std::nullopt,
                   DensityFamily::exponential(1.0), std::nullopt};
    if (!c.contains("station") || !c.at("station").is_number_integer()) {
      bad(where + ": 'station' must be an integer");
    }
    spec.station = c.at("station").get<int>() - 1;
    if (c.contains("interarrival") && !c.at("interarrival").is_null()) {
      spec.interarrival = family_from_json(c.at("interarrival"));
    }
    if (!c.contains("service")) bad(where + ": missing 'service'");
    spec.service = family_from_json(c.at("service"));
    if (c.contains("decompose") && !c.at("decompose").is_null()) {
      spec.decompose = lambda_choice_from_json(c.at("decompose"));
    }
    out.net.classes.push_back(std::move(spec));
  }

  const int K = out.net.num_classes();
  out.net.routing = MatrixXd::Zero(K, K);
  if (j.contains("routing")) {
    const auto& r = j.at("routing");
    if (!r.is_array() || static_cast<int>(r.size()) != K) bad("'routing' must be K x K");
    for (int a = 0; a < K; ++a) {
      if (!r[a].is_array() || static_cast<int>(r[a].size()) != K) bad("'routing' must be K x K");
      for (int b = 0; b < K; ++b) out.net.routing(a, b) = r[a][b].get<double>();
    }
  }
  out.net.check();
  return out;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const LoadedConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["stations"] = cfg.net.stations;
  json classes = json::array();
  for (const auto& c : cfg.net.classes) {
    json cj{{"name", c.name}, {"station", c.station + 1}, {"service", family_to_json(c.service)}};
    cj["interarrival"] = c.interarrival ? family_to_json(*c.interarrival) : json(nullptr);
    if (c.decompose) cj["decompose"] = lambda_choice_to_json(*c.decompose);
    classes.push_back(cj);
  }
  j["classes"] = classes;
  json routing = json::array();
  for (int a = 0; a < cfg.net.routing.rows(); ++a) {
    json row = json::array();
    for (int b = 0; b < cfg.net.routing.cols(); ++b) row.push_back(cfg.net.routing(a, b));
    routing.push_back(row);
  }
  j["routing"] = routing;
  return j;
}

}  // namespace rsim
