// pvmech: generate instances, solve them, verify mechanisms, compare
// solvers against brute force, and benchmark.
//
// Exit codes: 0 ok, 2 usage/validation, 3 infinite optimum, 4 untruthful,
// 5 enumeration budget exceeded, 6 internal self-check failure.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pvmech/pvmech.hpp"

namespace {

using namespace pvmech;

enum Exit : int { ok = 0, usage = 2, infinite = 3, untruthful = 4, budget = 5, self_check = 6 };

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

std::string digest(const Json& doc) {
  // FNV-1a over the canonical dump; identifies an instance in reports.
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long micros() const {
    return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  }
};

struct Loaded {
  Json doc;
  Instance instance;
};

Loaded load_instance(const std::string& path) {
  Loaded l;
  l.doc = read_json(path);
  l.instance = instance_from_json(l.doc);
  const auto violations = validate(l.instance);
  if (!violations.empty()) {
    throw InvalidArgument("invalid instance: " + violations.front().invariant + " (" + violations.front().location + ")");
  }
  return l;
}

bool has_custom_oracle(const Json& doc) {
  return doc.contains("oracle") && doc.at("oracle").value("kind", std::string("additive")) != "additive";
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string kind;
  std::string out;
  std::string cnf;
  std::uint64_t seed = 0;
  std::size_t types = 4;
  std::size_t outcomes = 3;
  double density = 0.3;
  long long max_cost = 20;
  double inf_rate = 0.0;
  bool close = false;
  bool convex = false;
  std::string c0 = "1";
  std::string n1, n2;
};

CnfFormula read_cnf(const std::string& path) {
  if (path.empty()) throw InvalidArgument("--cnf is required for this kind");
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return parse_dimacs(in);
}

Json random_params_json(const GenerateArgs& a) {
  Json p;
  p["seed"] = a.seed;
  p["types"] = a.types;
  p["outcomes"] = a.outcomes;
  p["density"] = a.density;
  if (a.convex) {
    p["max_slope"] = a.max_cost;
  } else {
    p["max_cost"] = a.max_cost;
    p["infinity_rate"] = a.inf_rate;
  }
  p["close"] = a.close;
  return p;
}

Instance random_from_args(const GenerateArgs& a) {
  if (a.convex) return random_convex_instance({a.seed, a.types, a.outcomes, a.density, a.max_cost, a.close});
  return random_instance({a.seed, a.types, a.outcomes, a.density, a.max_cost, a.inf_rate, a.close});
}

int cmd_generate(const GenerateArgs& a) {
  Json doc;
  if (a.kind == "gap") {
    doc = with_meta(gap_instance(), "gap", Json::object());
  } else if (a.kind == "minsat1") {
    const CnfFormula f = read_cnf(a.cnf);
    Json params;
    params["cnf"] = a.cnf;
    doc = with_meta(minsat_reduction_nontransitive(f), "minsat_nontransitive", params);
  } else if (a.kind == "minsat2") {
    const CnfFormula f = read_cnf(a.cnf);
    ReductionParams rp = ReductionParams::defaults(f);
    if (!a.n1.empty()) rp.large = parse_rational(a.n1);
    if (!a.n2.empty()) rp.small = parse_rational(a.n2);
    const auto red = minsat_reduction_single_peaked(f, rp);
    Json params;
    params["cnf"] = a.cnf;
    params["N1"] = to_json(rp.large);
    params["N2"] = to_json(rp.small);
    doc = with_meta(red.instance, "minsat_single_peaked", params);
    doc["utilities"] = to_json(red.utilities);
  } else if (a.kind == "random") {
    doc = with_meta(random_from_args(a), a.convex ? "random_convex" : "random", random_params_json(a));
  } else if (a.kind == "overhead") {
    const Rational c0 = parse_rational(a.c0);
    if (c0 <= 0) throw InvalidArgument("--c0 must be positive");
    Json params = random_params_json(a);
    params["c0"] = to_json(c0);
    doc = with_meta(random_from_args(a), "overhead", params);
    Json oracle;
    oracle["kind"] = "additive_plus_overhead";
    oracle["c0"] = to_json(c0);
    doc["oracle"] = oracle;
  } else {
    throw InvalidArgument("unknown kind '" + a.kind + "'");
  }
  write_text(a.out, doc.dump(2) + "\n");
  return ok;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string instance;
  std::string algo;
  std::string out;
  std::string dot;
  double eps = 1e-3;
  std::string backend = "lovasz";
  std::string convex_backend = "cutting-plane";
  bool no_close = false;
};

ConvexOptions convex_options(double eps, const std::string& backend) {
  ConvexOptions o;
  o.epsilon = eps;
  if (backend == "cutting-plane") {
    o.backend = ConvexBackend::cutting_plane;
  } else if (backend == "subgradient") {
    o.backend = ConvexBackend::subgradient;
  } else {
    throw InvalidArgument("unknown convex backend '" + backend + "'");
  }
  return o;
}

int cmd_solve(const SolveArgs& a, const std::string& echo) {
  const Clock clock;
  const Loaded l = load_instance(a.instance);
  const Instance& inst = l.instance;
  if (l.doc.contains("utilities")) {
    throw InvalidArgument("instance has per-type utilities; only the oracle subcommand can search it");
  }
  Json report;
  report["command"] = echo;
  report["instance_digest"] = digest(to_json(inst));
  report["solver"] = a.algo;
  Json solution;
  Json verification;
  int code = ok;

  if (a.algo == "det" || a.algo == "rand") {
    if (has_custom_oracle(l.doc)) throw InvalidArgument("algo " + a.algo + " needs additive costs; use sub-det or sub-rand");
    MinCutOptions options{!a.no_close};
    if (!a.dot.empty()) {
      const FlowNetwork net = clamp_capacities(build_network(inst, options.close_relation));
      const CutResult cut = min_cut(net);
      write_text(a.dot, to_dot(net, &cut));
    }
    Cost cost;
    if (a.algo == "det") {
      const DeterministicSolution s = solve_deterministic(inst, options);
      cost = s.cost;
      if (s.mechanism) {
        const bool truthful = is_truthful(*s.mechanism, inst).truthful;
        const bool same = cost_deterministic(*s.mechanism, inst, CostMode::truthful_assumed) == s.cost;
        verification["truthful"] = truthful;
        verification["cost_recomputed"] = same;
        if (!truthful || !same) code = self_check;
        solution = to_json(*s.mechanism);
      }
    } else {
      const RandomizedSolution s = solve_randomized(inst, options);
      cost = s.cost;
      if (s.mechanism) {
        const bool valid = validate(*s.mechanism, inst).empty();
        const bool truthful = is_truthful(*s.mechanism, inst).truthful;
        const bool same = cost_randomized(*s.mechanism, inst) == s.cost;
        verification["valid"] = valid;
        verification["truthful"] = truthful;
        verification["cost_recomputed"] = same;
        if (!valid || !truthful || !same) code = self_check;
        solution = to_json(*s.mechanism);
        Json support = Json::array();
        for (TypeIndex i = 0; i < s.support.size(); ++i) {
          Json entry;
          entry["type"] = i;
          entry["lower"] = s.support[i].lower;
          entry["upper"] = s.support[i].upper;
          entry["alpha"] = to_json(s.support[i].alpha);
          support.push_back(std::move(entry));
        }
        solution["support"] = std::move(support);
      }
    }
    report["cost"] = cost.to_string();
    report["exact"] = true;
    if (cost.is_infinite()) {
      verification["truthful"] = nullptr;
      code = infinite;
    } else {
      solution["cost"] = cost.to_string();
    }
  } else if (a.algo == "sub-det" || a.algo == "sub-rand") {
    const CostOracle oracle = oracle_from_json(l.doc, inst);
    double cost = std::numeric_limits<double>::infinity();
    if (a.algo == "sub-det") {
      LatticeBackend backend;
      if (a.backend == "brute") {
        backend = LatticeBackend::brute;
      } else if (a.backend == "lovasz") {
        backend = LatticeBackend::lovasz;
      } else {
        throw InvalidArgument("unknown backend '" + a.backend + "'");
      }
      const auto s = solve_deterministic_submodular(oracle, inst.relation, backend);
      if (s.point) {
        const DeterministicMechanism mech{*s.point};
        const bool truthful = is_truthful(mech, inst).truthful;
        const bool same = oracle(*s.point) == s.cost;
        verification["truthful"] = truthful;
        verification["cost_recomputed"] = same;
        if (!truthful || !same) code = self_check;
        solution = to_json(mech);
        cost = s.cost.to_double();
        report["cost"] = s.cost.to_string();
        report["exact"] = true;
      }
    } else {
      const auto s = solve_randomized_submodular(oracle, inst.outcomes, inst.relation, convex_options(a.eps, a.convex_backend));
      cost = s.cost;
      if (std::isfinite(s.cost)) {
        const auto marg = marginals_of(s.chain, inst.type_count(), inst.outcome_count());
        const bool truthful = is_truthful_marginals(marg, inst.outcomes, inst.relation);
        const bool chain = is_chain(s.chain);
        const bool same = std::abs(chain_cost(s.chain, oracle) - s.cost) <= 1e-9 * std::max(1.0, s.cost);
        verification["truthful"] = truthful;
        verification["non_crossing"] = chain;
        verification["cost_recomputed"] = same;
        if (!truthful || !chain || !same) code = self_check;
        solution = to_json(s.chain);
        report["cost"] = format_double(s.cost);
        report["exact"] = false;
        report["converged"] = s.converged;
        if (s.lower_bound) report["lower_bound"] = format_double(*s.lower_bound);
      }
    }
    if (!std::isfinite(cost)) {
      report["cost"] = "inf";
      verification["truthful"] = nullptr;
      code = infinite;
    } else {
      solution["cost"] = report["cost"];
    }
  } else {
    throw InvalidArgument("unknown algo '" + a.algo + "'");
  }
  report["wall_micros"] = clock.micros();
  report["verification"] = verification;
  if (code != infinite && code != self_check && !solution.is_null()) write_text(a.out, solution.dump(2) + "\n");
  std::cout << report.dump() << "\n";
  if (code == self_check) std::cerr << "error: solution failed its self-check\n";
  return code;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& instance_path, const std::string& mechanism_path, const std::string& echo) {
  const Loaded l = load_instance(instance_path);
  const Instance& inst = l.instance;
  const Json mdoc = read_json(mechanism_path);
  const std::string kind = mdoc.value("kind", std::string(mdoc.contains("assignment") ? "deterministic" : "randomized"));
  Json report;
  report["command"] = echo;
  report["instance_digest"] = digest(to_json(inst));
  report["mechanism_kind"] = kind;
  TruthfulnessReport truth;
  Json utilities = Json::array();
  if (kind == "deterministic") {
    const DeterministicMechanism mech = deterministic_from_json(mdoc);
    const auto problems = validate(mech, inst);
    if (!problems.empty()) throw InvalidArgument("invalid mechanism: " + problems.front().invariant);
    truth = is_truthful(mech, inst);
    report["cost_truthful"] = cost_deterministic(mech, inst, CostMode::truthful_assumed).to_string();
    report["cost_best_response"] = cost_deterministic(mech, inst, CostMode::best_response).to_string();
    for (TypeIndex i = 0; i < inst.type_count(); ++i) utilities.push_back(to_json(inst.outcomes[mech.assignment[i]]));
  } else if (kind == "randomized") {
    const RandomizedMechanism mech = randomized_from_json(mdoc);
    const auto problems = validate(mech, inst);
    if (!problems.empty()) throw InvalidArgument("invalid mechanism: " + problems.front().invariant);
    truth = is_truthful(mech, inst);
    report["cost_truthful"] = cost_randomized(mech, inst).to_string();
    for (TypeIndex i = 0; i < inst.type_count(); ++i) utilities.push_back(to_json(expected_utility(mech, inst.outcomes, i)));
  } else if (kind == "chain") {
    const ChainDistribution dist = chain_from_json(mdoc);
    const auto marg = marginals_of(dist, inst.type_count(), inst.outcome_count());
    truth.truthful = is_truthful_marginals(marg, inst.outcomes, inst.relation);
    report["non_crossing"] = is_chain(dist);
    report["cost_truthful"] = format_double(chain_cost(dist, oracle_from_json(l.doc, inst)));
    for (TypeIndex i = 0; i < inst.type_count(); ++i) {
      double u = 0;
      for (OutcomeIndex j = 0; j < inst.outcome_count(); ++j) u += marg.rows[i][j] * to_double(inst.outcomes[j]);
      utilities.push_back(format_double(u));
    }
  } else {
    throw InvalidArgument("unknown mechanism kind '" + kind + "'");
  }
  report["truthful"] = truth.truthful;
  Json violations = Json::array();
  for (const auto& [x, y] : truth.violations) violations.push_back(Json::array({x, y}));
  report["violations"] = violations;
  report["utilities"] = utilities;
  std::cout << report.dump() << "\n";
  return truth.truthful ? ok : untruthful;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(const std::string& path, const std::string& which, double eps, std::size_t max_states,
               const std::string& echo) {
  const Loaded l = load_instance(path);
  const Instance& inst = l.instance;
  const EnumerationBudget budget{max_states};
  Json report;
  report["command"] = echo;
  report["instance_digest"] = digest(to_json(inst));
  report["solver"] = which;
  bool match = false;
  if (l.doc.contains("utilities")) {
    if (which != "best-response" && which != "truthful") {
      throw InvalidArgument("per-type utility instances support --which best-response or truthful");
    }
    const UtilityTable u = utility_table_from_json(l.doc.at("utilities"));
    const BruteForceResult r =
        which == "best-response" ? brute_force_best_response_opt(inst, u, budget) : brute_force_truthful_opt(inst, u, budget);
    report["oracle_cost"] = r.cost.to_string();
    if (r.argmin) report["argmin"] = *r.argmin;
    std::cout << report.dump() << "\n";
    return ok;
  }
  if (which == "det" || which == "rand") {
    if (has_custom_oracle(l.doc)) throw InvalidArgument("algo " + which + " needs additive costs");
    const Cost solver = which == "det" ? solve_deterministic(inst).cost : solve_randomized(inst).cost;
    const Cost brute = which == "det" ? brute_force_deterministic_opt(inst, budget).cost : brute_force_envelope_opt(inst, budget);
    report["solver_cost"] = solver.to_string();
    report["oracle_cost"] = brute.to_string();
    report["tolerance"] = "0";
    match = solver == brute;
  } else if (which == "best-response") {
    const BruteForceResult r = brute_force_best_response_opt(inst, budget);
    report["oracle_cost"] = r.cost.to_string();
    if (r.argmin) report["argmin"] = *r.argmin;
    std::cout << report.dump() << "\n";
    return ok;
  } else if (which == "sub-det") {
    const CostOracle oracle = oracle_from_json(l.doc, inst);
    const Cost brute = brute_force_deterministic_opt(oracle, inst.relation, budget).cost;
    const Cost solver = solve_deterministic_submodular(oracle, inst.relation, LatticeBackend::lovasz, budget).cost;
    report["solver_cost"] = solver.is_infinite() ? "inf" : format_double(solver.to_double());
    report["oracle_cost"] = brute.to_string();
    report["tolerance"] = "1e-6";
    match = (solver.is_infinite() && brute.is_infinite()) ||
            (solver.is_finite() && brute.is_finite() && std::abs(solver.to_double() - brute.to_double()) <= 1e-6);
  } else if (which == "sub-rand") {
    const CostOracle oracle = oracle_from_json(l.doc, inst);
    Cost brute;
    if (!has_custom_oracle(l.doc)) {
      brute = brute_force_envelope_opt(inst, budget);
    } else if (inst.outcome_count() == 2) {
      // With two outcomes the randomized and deterministic optima coincide.
      brute = brute_force_deterministic_opt(oracle, inst.relation, budget).cost;
    } else {
      throw InvalidArgument("no exact oracle for sub-rand with a non-additive cost and m > 2");
    }
    const auto s = solve_randomized_submodular(oracle, inst.outcomes, inst.relation, convex_options(eps, "cutting-plane"));
    report["solver_cost"] = format_double(s.cost);
    report["oracle_cost"] = brute.to_string();
    report["tolerance"] = format_double(eps);
    match = brute.is_infinite() ? !std::isfinite(s.cost) : std::abs(s.cost - brute.to_double()) <= eps;
  } else {
    throw InvalidArgument("unknown --which '" + which + "'");
  }
  report["match"] = match;
  std::cout << report.dump() << "\n";
  return match ? ok : self_check;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string family = "random";
  std::vector<std::size_t> sizes{10, 100};
  std::size_t outcomes = 3;
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> algos{"det"};
  double degree = 0.5;
  long long max_cost = 20;
  double inf_rate = 0.0;
  std::size_t threads = 1;
  std::string out;
};

struct BenchRow {
  std::string family;
  std::size_t n = 0, m = 0;
  std::uint64_t seed = 0;
  std::string algo;
  std::string cost;
  long long micros = 0;
};

int cmd_bench(const BenchArgs& a) {
  if (a.family != "random" && a.family != "convex") throw InvalidArgument("family must be random or convex");
  for (const auto& algo : a.algos)
    if (algo != "det" && algo != "rand") throw InvalidArgument("bench supports algos det and rand");
  struct Job {
    std::size_t n;
    std::uint64_t seed;
    std::string algo;
  };
  std::vector<Job> jobs;
  for (std::size_t n : a.sizes)
    for (std::size_t r = 0; r < a.reps; ++r)
      for (const auto& algo : a.algos) jobs.push_back({n, a.seed + r, algo});
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        const Job& job = jobs[k];
        // Expected out-degree `degree` keeps the relation's closure sparse.
        const double density = job.n > 1 ? std::min(1.0, a.degree / static_cast<double>(job.n - 1)) : 0.0;
        const Instance inst = a.family == "convex"
                                  ? random_convex_instance({job.seed, job.n, a.outcomes, density, a.max_cost, false})
                                  : random_instance({job.seed, job.n, a.outcomes, density, a.max_cost, a.inf_rate, false});
        const Clock clock;
        const Cost cost = job.algo == "det" ? solve_deterministic(inst).cost : solve_randomized(inst).cost;
        rows[k] = {a.family, job.n, a.outcomes, job.seed, job.algo, cost.to_string(), clock.micros()};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::max<std::size_t>(a.threads, 1); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  std::ostringstream csv;
  csv << "family,n,m,seed,algo,cost,micros\n";
  for (const auto& r : rows)
    csv << r.family << ',' << r.n << ',' << r.m << ',' << r.seed << ',' << r.algo << ',' << r.cost << ',' << r.micros << '\n';
  write_text(a.out, csv.str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal truthful mechanisms under partial verification"};
  app.require_subcommand(1);
  std::string echo;
  for (int k = 0; k < argc; ++k) echo += (k ? " " : "") + std::string(argv[k]);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write an instance as JSON");
  generate->add_option("kind", gen.kind, "gap | minsat1 | minsat2 | random | overhead")
      ->required()
      ->check(CLI::IsMember({"gap", "minsat1", "minsat2", "random", "overhead"}));
  generate->add_option("-o,--out", gen.out, "Output path (default stdout)");
  generate->add_option("--cnf", gen.cnf, "DIMACS formula for the minsat kinds");
  generate->add_option("--seed", gen.seed);
  generate->add_option("-n,--types", gen.types)->check(CLI::PositiveNumber);
  generate->add_option("-m,--outcomes", gen.outcomes)->check(CLI::PositiveNumber);
  generate->add_option("--density", gen.density, "Probability of each off-diagonal report")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--max-cost", gen.max_cost, "Largest cost (or slope with --convex)")->check(CLI::NonNegativeNumber);
  generate->add_option("--inf-rate", gen.inf_rate, "Probability that a cost entry is infinite")->check(CLI::Range(0.0, 1.0));
  generate->add_flag("--close", gen.close, "Store the transitive closure of the relation");
  generate->add_flag("--convex", gen.convex, "Convex cost rows");
  generate->add_option("--c0", gen.c0, "Overhead cost for kind overhead");
  generate->add_option("--n1", gen.n1, "Large constant for minsat2");
  generate->add_option("--n2", gen.n2, "Small constant for minsat2");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an optimal truthful mechanism");
  solve_cmd->add_option("instance", solve.instance)->required();
  solve_cmd->add_option("-a,--algo", solve.algo, "det | rand | sub-det | sub-rand")
      ->required()
      ->check(CLI::IsMember({"det", "rand", "sub-det", "sub-rand"}));
  solve_cmd->add_option("-o,--out", solve.out, "Mechanism output path (default stdout)");
  solve_cmd->add_option("--dot", solve.dot, "Write the flow network with its minimum cut as Graphviz");
  solve_cmd->add_option("--eps", solve.eps, "Additive accuracy for sub-rand")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--backend", solve.backend, "brute | lovasz for sub-det");
  solve_cmd->add_option("--convex-backend", solve.convex_backend, "cutting-plane | subgradient for sub-rand");
  solve_cmd->add_flag("--no-close", solve.no_close, "Build the network on R itself instead of its closure");

  std::string verify_instance, verify_mechanism;
  auto* verify = app.add_subcommand("verify", "Check a mechanism for truthfulness and report its cost");
  verify->add_option("instance", verify_instance)->required();
  verify->add_option("mechanism", verify_mechanism)->required();

  std::string oracle_instance, which = "det";
  double oracle_eps = 1e-3;
  std::size_t max_states = 10'000'000;
  auto* oracle = app.add_subcommand("oracle", "Compare a solver against exhaustive search");
  oracle->add_option("instance", oracle_instance)->required();
  oracle->add_option("-w,--which", which, "det | rand | sub-det | sub-rand | best-response | truthful");
  oracle->add_option("--eps", oracle_eps)->check(CLI::PositiveNumber);
  oracle->add_option("--budget", max_states, "Largest enumeration size")->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the exact solvers on random instances; writes CSV");
  bench_cmd->add_option("--family", bench.family, "random | convex");
  bench_cmd->add_option("--sizes", bench.sizes, "Type counts")->delimiter(',');
  bench_cmd->add_option("-m,--outcomes", bench.outcomes)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", bench.reps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--algos", bench.algos, "det, rand")->delimiter(',');
  bench_cmd->add_option("--degree", bench.degree, "Expected reports per type")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--max-cost", bench.max_cost)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--inf-rate", bench.inf_rate)->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--threads", bench.threads)->check(CLI::PositiveNumber);
  bench_cmd->add_option("-o,--out", bench.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve_cmd) return cmd_solve(solve, echo);
    if (*verify) return cmd_verify(verify_instance, verify_mechanism, echo);
    if (*oracle) return cmd_oracle(oracle_instance, which, oracle_eps, max_states, echo);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return budget;
  } catch (const InfiniteOptimum& e) {
    std::cerr << "error: " << e.what() << "\n";
    return infinite;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return self_check;
  }
  return usage;
}
