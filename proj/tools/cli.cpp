#include "cli.hpp"

#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sepscope/cert.hpp"
#include "sepscope/io.hpp"
#include "sepscope/one_sided.hpp"
#include "sepscope/witness.hpp"
#include "sepscope/wopt.hpp"

namespace sepscope::cli {

namespace {

struct RunConfig {
  std::string inputPath;
  std::string certPath;
  double delta = 0.01;
  double epsilon = 1e-6;
  std::string observables;
  std::uint64_t seed = 0;
  int budget = 64;
  int presearchIters = 200;
  int maxIters = 10000;
  double tol = 1e-10;
  double epsPrime = 1e-4;
  double deltaPrime = 1e-4;
  long hardCap = 20'000'000;
  bool heuristicOnly = false;
  bool heuristicFirst = false;
  bool staticStops = false;
  bool forceNet = false;
  bool diagnostics = false;
};

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InvalidInput("--observables: '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw InvalidInput("--observables: empty list");
  return out;
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json outcome_json(const TestOutcome& o) {
  Json j = Json::object();
  j["name"] = o.testName;
  j["verdict"] = to_string(o.verdict);
  j["witnessValue"] = optional_number(o.witnessValue);
  j["conclusive"] = o.conclusive;
  return j;
}

Json state_json(const PureProductState& s) {
  Json j = Json::object();
  j["alpha"] = complex_vector_json(s.alpha);
  j["beta"] = complex_vector_json(s.beta);
  return j;
}

Json geometry_json(const GeometryParams& g) {
  Json j = Json::object();
  j["n"] = g.n;
  j["delta"] = g.delta;
  j["deltaPrime"] = g.deltaPrime;
  j["epsilonOracle"] = g.epsilonOracle;
  j["deltaTilde"] = g.deltaTilde;
  j["r"] = g.r;
  j["R"] = g.R;
  j["rS"] = g.rS;
  j["RStar"] = g.RStar;
  j["u"] = g.u;
  return j;
}

Json cmd_test(const RunConfig& cfg) {
  const DensityMatrix rho = parse_state(read_json_file(cfg.inputPath));
  const BatteryReport rep = run_battery(rho);
  Json j = Json::object();
  j["command"] = "test";
  j["dims"] = Json::array({rho.dims().m, rho.dims().n});
  Json tests = Json::array();
  for (const auto& o : rep.outcomes) tests.push_back(outcome_json(o));
  j["tests"] = std::move(tests);
  j["combined"] = to_string(rep.combined);
  j["decidedBy"] = rep.decidedBy.empty() ? Json(nullptr) : Json(rep.decidedBy);
  return j;
}

Json cmd_witness(const RunConfig& cfg, std::ostream& err) {
  const DensityMatrix rho = parse_state(read_json_file(cfg.inputPath));
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidInput("--delta must lie in (0, 1)");
  std::vector<int> t;
  if (!cfg.observables.empty()) t = parse_index_list(cfg.observables);
  WitnessOptions opts;
  opts.heuristicOnly = cfg.heuristicOnly;
  opts.heuristicFirst = cfg.heuristicFirst;
  opts.presearchIters = cfg.presearchIters;
  opts.dynamicStops = !cfg.staticStops;
  opts.oracleBudget = cfg.budget;
  opts.seed = cfg.seed;
  if (cfg.diagnostics)
    opts.onIteration = [&err](const IterationRecord& r) {
      Json line = Json::object();
      line["iter"] = r.iter;
      line["case"] = r.kase;
      line["h"] = r.h;
      line["lambda"] = r.lambda;
      line["minSlack"] = r.minSlack;
      line["oracleCalls"] = r.oracleCalls;
      err << dump_json(line, -1) << '\n';
    };
  const WitnessVerdict v = find_witness(rho, cfg.delta, t, opts);

  Json j = Json::object();
  j["command"] = "witness";
  j["verdict"] = to_string(v.kind);
  j["delta"] = cfg.delta;
  j["indexSet"] = v.indexSet;
  j["witnessMatrix"] = v.witness ? complex_matrix_json(v.witness->matrix()) : Json(nullptr);
  j["witnessBloch"] = v.witnessBloch ? real_vector_json(*v.witnessBloch) : Json(nullptr);
  j["bStar"] = optional_number(v.bStarEstimate);
  j["margin"] = optional_number(v.margin);
  j["expectation"] = optional_number(v.expectation);
  const SolveDiagnostics& d = v.diagnostics;
  Json diag = Json::object();
  diag["oracleCalls"] = d.oracleCalls;
  diag["planesAdded"] = d.planesAdded;
  diag["planesDiscarded"] = d.planesDiscarded;
  diag["kappaResets"] = d.kappaResets;
  diag["newtonIterationsTotal"] = d.newtonIterationsTotal;
  diag["iterations"] = d.iterations;
  diag["reverifications"] = d.reverifications;
  diag["stopReason"] = to_string(d.stopReason);
  diag["viaPresearch"] = v.viaPresearch;
  diag["presearchIterations"] = v.presearchIterations;
  j["diagnostics"] = std::move(diag);
  j["geometry"] = geometry_json(v.geometry);
  return j;
}

Json cmd_oracle(const RunConfig& cfg) {
  const HermitianOp a = parse_operator(read_json_file(cfg.inputPath));
  const OracleResult r = cfg.forceNet ? eps_net_b_star(a, cfg.epsilon, cfg.hardCap)
                                      : b_star(a, cfg.epsilon, cfg.budget, cfg.seed);
  Json j = Json::object();
  j["command"] = "oracle";
  j["lowerBound"] = r.lowerBound;
  j["upperBound"] = r.upperBound;
  j["epsilon"] = r.epsilon;
  j["terminatedEarly"] = r.terminatedEarly;
  j["evaluations"] = r.evaluations;
  j["regime"] = to_string(r.regime);
  j["maximizer"] = state_json(r.maximizer);
  return j;
}

Json cmd_distance(const RunConfig& cfg) {
  const DensityMatrix rho = parse_state(read_json_file(cfg.inputPath));
  const GilbertResult g = gilbert_distance(rho, cfg.maxIters, cfg.tol, cfg.budget, cfg.seed);
  Json j = Json::object();
  j["command"] = "distance";
  j["distance"] = g.distance;
  j["lowerBound"] = g.lowerBound;
  j["iterations"] = g.iterations;
  j["gap"] = g.gap;
  j["nearestPoint"] = real_vector_json(g.nearestPoint.coords);
  return j;
}

Json cmd_verify_cert(const RunConfig& cfg) {
  const DensityMatrix rho = parse_state(read_json_file(cfg.inputPath));
  const SeparableCertificate cert = parse_certificate(read_json_file(cfg.certPath));
  const QsepCheck q = verify_qsep_certificate(rho, cert, cfg.epsPrime, cfg.deltaPrime);
  Json j = Json::object();
  j["command"] = "verify-cert";
  j["accepted"] = q.accepted;
  j["normalizationOk"] = q.normalizationOk;
  j["distanceOk"] = q.distanceOk;
  j["normCheckMax"] = q.normCheckMax;
  j["distance"] = q.distance;
  j["normalizedBound"] = q.normalizedBound;
  return j;
}

void error_json(std::ostream& err, const char* kind, const std::string& msg) {
  Json j = Json::object();
  j["error"] = kind;
  j["message"] = msg;
  err << dump_json(j, -1) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Bipartite separability toolkit: one-sided tests, witness search, "
               "product-state optimisation and certificate checks."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto add_seed = [&](CLI::App* sc) {
    sc->add_option("--seed", cfg.seed,
                   "Seed of the restart stream (SEPSCOPE_SEED overrides it)")
        ->capture_default_str();
  };
  auto add_input = [&](CLI::App* sc, const char* what) {
    sc->add_option("--input", cfg.inputPath, what)->required();
  };

  CLI::App* test = app.add_subcommand("test", "Run the one-sided test battery on a state");
  add_input(test, "State JSON file");

  CLI::App* wit = app.add_subcommand("witness", "Search for an entanglement witness");
  add_input(wit, "State JSON file");
  wit->add_option("--delta", cfg.delta, "Weak-separation accuracy, in (0,1)")
      ->capture_default_str();
  wit->add_option("--observables", cfg.observables,
                  "Comma-separated basis indices spanning the witness (default: all "
                  "traceless elements)");
  wit->add_flag("--heuristic-only", cfg.heuristicOnly,
                "Run only the fixed-point pre-search; report Inconclusive on failure");
  wit->add_flag("--heuristic-first", cfg.heuristicFirst,
                "Run the pre-search before the cutting-plane solver");
  wit->add_option("--presearch-iters", cfg.presearchIters, "Pre-search iteration limit")
      ->capture_default_str();
  wit->add_flag("--static-stops", cfg.staticStops,
                "Use the worst-case stopping conditions instead of the dynamic ones");
  wit->add_option("--budget", cfg.budget, "See-saw restarts per oracle call")
      ->capture_default_str();
  wit->add_flag("--diagnostics", cfg.diagnostics,
                "Write one JSON line per solver iteration to stderr");
  add_seed(wit);

  CLI::App* orc = app.add_subcommand("oracle", "Maximise an observable over product states");
  add_input(orc, "Operator JSON file");
  orc->add_option("--epsilon", cfg.epsilon, "Requested accuracy")->capture_default_str();
  orc->add_option("--restarts", cfg.budget, "See-saw restarts")->capture_default_str();
  orc->add_flag("--net", cfg.forceNet, "Use the certified enumeration (M*N <= 6)");
  orc->add_option("--hard-cap", cfg.hardCap, "Evaluation cap for --net")
      ->capture_default_str();
  add_seed(orc);

  CLI::App* dist = app.add_subcommand("distance", "Euclidean distance to the separable set");
  add_input(dist, "State JSON file");
  dist->add_option("--max-iters", cfg.maxIters, "Iteration limit")->capture_default_str();
  dist->add_option("--tol", cfg.tol, "Stop once the duality gap is below this")
      ->capture_default_str();
  dist->add_option("--restarts", cfg.budget, "See-saw restarts per oracle call")
      ->capture_default_str();
  add_seed(dist);

  CLI::App* vc = app.add_subcommand("verify-cert", "Check a finite-precision separable certificate");
  add_input(vc, "State JSON file");
  vc->add_option("--cert", cfg.certPath, "Certificate JSON file")->required();
  vc->add_option("--eps-prime", cfg.epsPrime, "Normalisation tolerance")
      ->capture_default_str();
  vc->add_option("--delta-prime", cfg.deltaPrime, "Distance tolerance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "invalid-input", e.what());
    return kExitInvalid;
  }

  try {
    if (const char* env = std::getenv("SEPSCOPE_SEED")) {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw InvalidInput("SEPSCOPE_SEED is not a nonnegative integer");
      }
    }
    if (cfg.budget < 1) throw InvalidInput("restart budget must be positive");
    Json result;
    if (test->parsed()) result = cmd_test(cfg);
    else if (wit->parsed()) result = cmd_witness(cfg, err);
    else if (orc->parsed()) result = cmd_oracle(cfg);
    else if (dist->parsed()) result = cmd_distance(cfg);
    else result = cmd_verify_cert(cfg);
    out << dump_json(result) << '\n';
    return kExitOk;
  } catch (const InvalidInput& e) {
    error_json(err, "invalid-input", e.what());
    return kExitInvalid;
  } catch (const NumericalFailure& e) {
    error_json(err, "numerical-failure", e.what());
    return kExitNumerical;
  } catch (const BudgetExceeded& e) {
    error_json(err, "budget-exceeded", e.what());
    return kExitNumerical;
  } catch (const BoundaryError& e) {
    error_json(err, "numerical-failure", e.what());
    return kExitNumerical;
  }
}

}  // namespace sepscope::cli
