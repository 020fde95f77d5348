// rsim command-line front end.

#include "rsim/config.hpp"
#include "rsim/decomp.hpp"
#include "rsim/error.hpp"
#include "rsim/experiment.hpp"
#include "rsim/oracles.hpp"
#include "rsim/report_io.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace rsim;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  double horizon = 1e5;
  std::uint64_t seed = 1;
  int reps = 1;
  std::string mode = "primary";
  std::string h = "total";
  double level = 0.95;
  std::string out;
  std::string cycles_csv;
  std::string trace;
  bool allow_unstable = false;
  int workers = 0;
  std::vector<double> factors{1.0, 1.5, 2.0};
  std::size_t samples = 100000;
};

RegenMode parse_mode(const std::string& m) {
  if (m == "primary") return RegenMode::Primary;
  if (m == "alternative") return RegenMode::Alternative;
  throw Error(ErrorCode::ConfigInvalid, "mode must be primary or alternative");
}

RunSpec make_spec(const Options& o) {
  if (o.config.empty()) throw Error(ErrorCode::ConfigInvalid, "--config is required");
  const LoadedConfig cfg = load_config(o.config);
  RunSpec s;
  s.name = cfg.name;
  s.net = cfg.net;
  s.horizon = o.horizon;
  s.seed = o.seed;
  s.reps = o.reps;
  s.mode = parse_mode(o.mode);
  s.h = parse_functional(o.h);
  s.level = o.level;
  s.allow_unstable = o.allow_unstable;
  s.workers = o.workers;
  s.keep_cycles = !o.cycles_csv.empty();
  return s;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream os;
  os << std::setprecision(5) << *v;
  return os.str();
}

void print_table(const ExperimentResult& res) {
  std::cout << std::left << std::setw(14) << "series" << std::setw(10) << "N" << std::setw(14)
            << "beta" << std::setw(26) << "CI" << std::setw(14) << "s^2" << "K\n";
  for (const auto& s : res.series) {
    const Report& r = s.merged;
    std::ostringstream ci;
    if (r.ci) ci << "[" << fmt(r.ci->lo) << ", " << fmt(r.ci->hi) << "]";
    std::cout << std::left << std::setw(14) << s.label << std::setw(10) << r.n_cycles
              << std::setw(14) << fmt(r.n_cycles ? std::optional(r.beta) : std::nullopt)
              << std::setw(26) << (r.ci ? ci.str() : "-") << std::setw(14) << fmt(r.tavc)
              << fmt(r.avsde) << '\n';
  }
}

void write_cycles(const ExperimentResult& res, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write '" + path + "'");
  f << "series,replication,index,T_n,tau_n,R_n\n" << std::setprecision(17);
  for (const auto& s : res.series) {
    for (const auto& r : s.reps) {
      for (const auto& c : r.cycles) {
        f << s.label << ',' << r.replication << ',' << c.index << ',' << c.start + c.tau << ','
          << c.tau << ',' << c.R << '\n';
      }
    }
  }
}

void write_trace(const RunSpec& spec, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write '" + path + "'");
  RunConfig rc;
  rc.horizon = spec.horizon;
  rc.seed = spec.seed;
  rc.h = spec.h;
  rc.detectors = {Detector{spec.mode, 0}};
  rc.trace = &f;
  f << std::setprecision(17);
  simulate(make_model(spec.net), rc);
}

int finish(const ExperimentResult& res, const RunSpec& spec, const Options& o) {
  if (!o.cycles_csv.empty()) write_cycles(res, o.cycles_csv);
  emit(to_json(res, spec), o.out);
  if (!o.out.empty()) print_table(res);
  return 0;
}

// -- verify ------------------------------------------------------------------

json check(const std::string& name, bool pass, json detail) {
  return {{"name", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

json verify(const Options& o) {
  json checks = json::array();

  // decomposition law preservation
  const std::vector<std::pair<std::string, DensityFamily>> fams = {
      {"gamma(2,3)", DensityFamily::gamma(2, 3)},
      {"pareto(10,1/18)", DensityFamily::pareto(10, 1.0 / 18)},
      {"pareto(10,1/9)", DensityFamily::pareto(10, 1.0 / 9)},
      {"hyperexp2(1/2,2/3,2)", DensityFamily::hyperexp2(0.5, 2.0 / 3, 2)},
      {"lognormal(0,2/3)", DensityFamily::lognormal(0, 2.0 / 3)},
      {"weibull(0.5,1)", DensityFamily::weibull(0.5, 1)},
  };
  std::uint64_t salt = 0;
  for (const auto& [name, fam] : fams) {
    for (double factor : {1.0, 2.0}) {
      const Decomposition dec = build_decomposition(fam, LambdaChoice::scaled(factor));
      const auto ks = oracle::decomposition_law_check(fam, dec, o.samples, o.seed + salt++);
      checks.push_back(check("law " + name + " at " + std::to_string(factor).substr(0, 3) +
                                 " lambda_f",
                             ks.pass, to_json(ks)));
    }
  }

  // closed-form lambda_f against the grid diagnostic
  for (const auto& [name, fam] : fams) {
    const LambdaF closed = lambda_f(fam.kind() == FamilyKind::Weibull
                                        ? build_decomposition(fam).base
                                        : fam);
    const LambdaF grid = lambda_f_numeric(fam.kind() == FamilyKind::Weibull
                                              ? build_decomposition(fam).base
                                              : fam);
    const double rel = std::fabs(grid.value - closed.value) / closed.value;
    checks.push_back(check("lambda_f " + name, rel < 1e-6,
                           {{"closed", closed.value}, {"grid", grid.value}, {"relative", rel}}));
  }

  // Gamma(2,3) at lambda = 3: G equals the Exp(3) law
  {
    const Decomposition dec = build_decomposition(DensityFamily::gamma(2, 3));
    double sup = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = 5.0 * i / 999.0;
      sup = std::max(sup, std::fabs(g_cdf(dec, x) - oracle::reference_cdf(DensityFamily::exponential(3), x)));
    }
    checks.push_back(check("gamma identity", sup < 1e-9, {{"sup_norm", sup}}));
  }

  // short queueing runs against closed forms
  auto queue_check = [&](const std::string& name, const DensityFamily& service, double analytic) {
    RunSpec s;
    s.name = name;
    s.net.stations = 1;
    s.net.classes = {ClassSpec{"1", 0, DensityFamily::exponential(0.5), service, std::nullopt}};
    s.net.routing = MatrixXd::Zero(1, 1);
    s.horizon = o.horizon;
    s.seed = o.seed;
    s.reps = 1;
    const ExperimentResult r = run(s);
    const Report& rep = r.series.front().merged;
    const bool ok = rep.ci && rep.ci->contains(analytic);
    checks.push_back(check(name, ok, {{"analytic", analytic}, {"report", to_json(rep)}}));
  };
  queue_check("mm1", DensityFamily::exponential(1.0), oracle::mm1_mean_number(0.5, 1.0));
  queue_check("mg1 gamma(2,4)", DensityFamily::gamma(2, 4),
              oracle::mg1_mean_number(0.5, DensityFamily::gamma(2, 4)));

  // decomposable classes of a user network
  if (!o.config.empty()) {
    const LoadedConfig cfg = load_config(o.config);
    for (int k = 0; k < cfg.net.num_exogenous(); ++k) {
      const auto& c = cfg.net.classes[k];
      try {
        const Decomposition dec =
            build_decomposition(*c.interarrival, c.decompose.value_or(LambdaChoice::minimal()));
        const auto ks = oracle::decomposition_law_check(*c.interarrival, dec, o.samples, o.seed + 100 + k);
        checks.push_back(check("config class " + std::to_string(k + 1) + " law", ks.pass, to_json(ks)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotDecomposable) throw;
      }
    }
  }

  bool ok = true;
  for (const auto& c : checks) ok &= c["pass"].get<bool>();
  return {{"schema", kReportSchema}, {"command", "verify"}, {"ok", ok}, {"checks", checks}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerative simulation of multiclass open queueing networks"};
  app.require_subcommand(1);
  Options o;

  app.set_help_flag("--help", "print help");
  auto common = [&](CLI::App* sub, bool full) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", o.config, "network JSON")->check(CLI::ExistingFile);
    sub->add_option("--horizon", o.horizon, "simulated time per replication")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "write the JSON report here instead of stdout");
    if (!full) return;
    sub->add_option("--reps", o.reps, "replications")->check(CLI::Range(1, 1 << 20));
    sub->add_option("--mode", o.mode, "primary|alternative")
        ->check(CLI::IsMember({"primary", "alternative"}));
    sub->add_option("--h", o.h, "total | class:k | indicator:c");
    sub->add_option("--level", o.level, "confidence level")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--cycles-csv", o.cycles_csv, "per-cycle CSV output");
    sub->add_flag("--allow-unstable", o.allow_unstable, "run even if some nominal load >= 1");
    sub->add_option("--workers", o.workers, "worker threads (0: all cores)");
  };

  auto* run_cmd = app.add_subcommand("run", "replicated run with one regeneration mode");
  common(run_cmd, true);
  run_cmd->add_option("--trace", o.trace, "event trace CSV of replication 0");
  auto* sweep_cmd = app.add_subcommand("sweep-lambda", "classes 2..L at several multiples of lambda_f");
  common(sweep_cmd, true);
  sweep_cmd->add_option("--factors", o.factors, "strictly increasing factors >= 1")->delimiter(',');
  auto* cmp_cmd = app.add_subcommand("compare-modes", "primary vs alternative on common paths");
  common(cmp_cmd, true);
  auto* verify_cmd = app.add_subcommand("verify", "oracle checks");
  common(verify_cmd, false);
  verify_cmd->add_option("--samples", o.samples, "draws per KS sample");
  auto* validate_cmd = app.add_subcommand("validate", "assumption checks for a network");
  common(validate_cmd, false);
  validate_cmd->add_option("--mode", o.mode, "primary|alternative")
      ->check(CLI::IsMember({"primary", "alternative"}));
  validate_cmd->add_flag("--allow-unstable", o.allow_unstable, "report instability without failing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const RunSpec spec = make_spec(o);
      const ExperimentResult res = run(spec);
      if (!o.trace.empty()) write_trace(spec, o.trace);
      return finish(res, spec, o);
    }
    if (sweep_cmd->parsed()) {
      const RunSpec spec = make_spec(o);
      return finish(sweep_lambda(spec, o.factors), spec, o);
    }
    if (cmp_cmd->parsed()) {
      const RunSpec spec = make_spec(o);
      return finish(compare_modes(spec), spec, o);
    }
    if (verify_cmd->parsed()) {
      const json j = verify(o);
      emit(j, o.out);
      return j["ok"].get<bool>() ? 0 : 1;
    }
    if (validate_cmd->parsed()) {
      if (o.config.empty()) throw Error(ErrorCode::ConfigInvalid, "--config is required");
      const LoadedConfig cfg = load_config(o.config);
      const ValidationReport v = validate_assumptions(cfg.net, parse_mode(o.mode));
      json j = {{"schema", kReportSchema}, {"command", "validate"}, {"config", cfg.name},
                {"validation", to_json(v)}};
      try {
        j["traffic"] = to_json(solve_traffic(cfg.net, true));
      } catch (const Error& e) {
        j["traffic"] = {{"error", e.what()}};
      }
      emit(j, o.out);
      bool ok = true;
      for (const auto& c : v.checks) {
        if (c.status == CheckStatus::Fail && !(o.allow_unstable && c.id == "stability")) ok = false;
      }
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
