// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//   acceptance [--csv PATH]   (PATH receives the scaling benchmark rows)

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace pvmech;
using namespace pvmech::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string cost_str(const Cost& c) { return c.to_string(); }

// 1 ------------------------------------------------------------------------

Outcome gap_example() {
  Outcome out;
  const Instance gap = gap_instance();
  // Best of several runs; the first call pays for page faults and allocation.
  double best = 1e9;
  RandomizedSolution rand;
  DeterministicSolution det;
  for (int k = 0; k < 5; ++k) {
    const auto start = Clock::now();
    rand = solve_randomized(gap);
    det = solve_deterministic(gap);
    best = std::min(best, seconds_since(start));
  }
  out.require(rand.cost == Cost(0), "randomized cost " + cost_str(rand.cost));
  out.require(rand.mechanism.has_value(), "no randomized mechanism");
  if (rand.mechanism) {
    const auto& rows = rand.mechanism->rows;
    out.require(rows[0] == std::vector<Rational>{0, 1, 0}, "type 1 is not a point mass on o_2");
    out.require(rows[1] == std::vector<Rational>{Rational(1, 2), 0, Rational(1, 2)}, "type 2 is not {o_1: 1/2, o_3: 1/2}");
    out.require(is_truthful(*rand.mechanism, gap).truthful, "randomized mechanism untruthful");
  }
  out.require(det.cost.is_infinite() && !det.mechanism, "deterministic optimum is finite");
  out.require(best < 1e-3, "took " + std::to_string(best * 1e3) + " ms");
  if (out.pass) out.detail = "rand cost 0, det inf, " + std::to_string(best * 1e6) + " us";
  return out;
}

// 2 ------------------------------------------------------------------------

Outcome three_type_cut() {
  Outcome out;
  const Instance fig = three_type_instance();
  const CutResult cut = min_cut(clamp_capacities(build_network(fig)));
  const DeterministicMechanism m = extract_mechanism(cut);
  const Cost expected = fig.costs(0, 1) + fig.costs(1, 2) + fig.costs(2, 2);
  out.require(m == DeterministicMechanism{{1, 2, 2}}, "extracted mechanism differs");
  out.require(Cost(cut.value) == expected, "cut value " + Rational(cut.value).str());
  // Optimality, and uniqueness, by exhaustive search.
  const BruteForceResult brute = brute_force_deterministic_opt(fig);
  out.require(brute.cost == expected, "oracle optimum " + cost_str(brute.cost));
  std::size_t optimal = 0;
  for_each_truthful(fig.relation, 3, [&](const LatticePoint& p) {
    if (cost_deterministic(DeterministicMechanism{p}, fig, CostMode::truthful_assumed) == expected) ++optimal;
  });
  out.require(optimal == 1, "optimum not unique");
  for (TypeIndex i = 0; i < 3; ++i)
    for (OutcomeIndex j = 0; j < 3; ++j) out.require(fig.costs(i, j) > Cost(0), "non-positive cost");
  if (out.pass) out.detail = "M = (o_2, o_3, o_3), cut = " + cost_str(expected);
  return out;
}

// 3, 4 ---------------------------------------------------------------------

RandomInstanceParams family_params(std::uint64_t k) {
  return {k, 1 + k % 6, 1 + (k / 6) % 4, 0.3, 20, k % 2 ? 0.1 : 0.0, (k / 2) % 2 == 1};
}

Outcome mincut_vs_oracle() {
  Outcome out;
  const auto start = Clock::now();
  std::size_t infinite = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    const Instance inst = random_instance(family_params(k));
    const Cost brute = brute_force_deterministic_opt(inst).cost;
    const Cost closed = solve_deterministic(inst, {true}).cost;
    const Cost raw = solve_deterministic(inst, {false}).cost;
    out.require(closed == brute && raw == brute, "seed " + std::to_string(k) + ": " + cost_str(closed) + " vs oracle " +
                                                     cost_str(brute));
    infinite += brute.is_infinite();
  }
  const double t = seconds_since(start);
  out.require(t < 10.0, "took " + std::to_string(t) + " s");
  if (out.pass) out.detail = "500 instances (" + std::to_string(infinite) + " infinite), " + std::to_string(t) + " s";
  return out;
}

Outcome envelope_vs_oracle() {
  Outcome out;
  const auto start = Clock::now();
  for (std::uint64_t k = 0; k < 500; ++k) {
    const Instance inst = random_instance(family_params(k));
    const Cost solver = solve_randomized(inst).cost;
    const Cost brute = brute_force_envelope_opt(inst);
    out.require(solver == brute, "seed " + std::to_string(k) + ": " + cost_str(solver) + " vs " + cost_str(brute));
  }
  const double t = seconds_since(start);
  out.require(t < 10.0, "took " + std::to_string(t) + " s");
  if (out.pass) out.detail = "500 instances, " + std::to_string(t) + " s";
  return out;
}

// 5 ------------------------------------------------------------------------

Outcome convex_costs() {
  Outcome out;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Instance inst = random_convex_instance({k, 1 + k % 6, 1 + (k / 6) % 4, 0.3, 10, k % 2 == 0});
    const RandomizedSolution rand = solve_randomized(inst);
    const Cost det = solve_deterministic(inst).cost;
    const std::string tag = "seed " + std::to_string(k);
    out.require(rand.cost == det, tag + ": rand " + cost_str(rand.cost) + " det " + cost_str(det));
    if (!rand.mechanism) continue;
    const RandomizedMechanism mech = consolidate_two_consecutive(*rand.mechanism, inst);
    Cost weighted;
    Cost cheapest = Cost::infinite();
    Rational total = 0;
    for (const auto& r : threshold_round(mech, inst)) {
      const Cost c = cost_deterministic(r.mechanism, inst, CostMode::truthful_assumed);
      weighted += r.weight * c;
      cheapest = std::min(cheapest, c);
      total += r.weight;
      out.require(is_truthful(r.mechanism, inst).truthful, tag + ": untruthful threshold mechanism");
    }
    out.require(total == Rational(1), tag + ": weights do not sum to 1");
    out.require(weighted == cost_randomized(mech, inst), tag + ": weighted cost identity fails");
    out.require(cheapest <= rand.cost, tag + ": cheapest threshold above randomized cost");
  }
  if (out.pass) out.detail = "200 convex instances";
  return out;
}

// 6, 7 ---------------------------------------------------------------------

// Every multiset of 1..max_clauses non-empty clauses over `vars` variables.
std::vector<CnfFormula> small_formulas(std::size_t vars, std::size_t max_clauses) {
  std::vector<std::vector<int>> pool;
  std::size_t combos = 1;
  for (std::size_t v = 0; v < vars; ++v) combos *= 4;
  for (std::size_t code = 1; code < combos; ++code) {
    std::vector<int> clause;
    std::size_t rest = code;
    for (std::size_t v = 0; v < vars; ++v, rest /= 4) {
      if (rest & 1U) clause.push_back(static_cast<int>(v + 1));
      if (rest & 2U) clause.push_back(-static_cast<int>(v + 1));
    }
    pool.push_back(clause);
  }
  std::vector<CnfFormula> out;
  std::vector<std::size_t> pick;
  auto extend = [&](auto&& self, std::size_t start) -> void {
    if (!pick.empty()) {
      CnfFormula f{vars, {}};
      for (std::size_t k : pick) f.clauses.push_back(pool[k]);
      out.push_back(f);
    }
    if (pick.size() == max_clauses) return;
    for (std::size_t k = start; k < pool.size(); ++k) {
      pick.push_back(k);
      self(self, k);
      pick.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

std::vector<CnfFormula> cnf_family() {
  auto out = small_formulas(1, 3);
  const auto two = small_formulas(2, 3);
  out.insert(out.end(), two.begin(), two.end());
  return out;
}

Outcome reduction_nontransitive() {
  Outcome out;
  const auto family = cnf_family();
  for (const auto& f : family) {
    const Cost got = brute_force_best_response_opt(minsat_reduction_nontransitive(f)).cost;
    const std::size_t want = minsat_brute(f);
    out.require(got == Cost(static_cast<long long>(want)), "formula with " + std::to_string(f.clauses.size()) +
                                                               " clauses: " + cost_str(got) + " vs " + std::to_string(want));
  }
  if (out.pass) out.detail = std::to_string(family.size()) + " formulas";
  return out;
}

Outcome reduction_single_peaked() {
  Outcome out;
  const auto start = Clock::now();
  const auto family = cnf_family();
  for (const auto& f : family) {
    const ReductionParams params = ReductionParams::defaults(f);
    const auto red = minsat_reduction_single_peaked(f, params);
    const Cost got = brute_force_truthful_opt(red.instance, red.utilities).cost;
    const Rational want =
        Rational(static_cast<long long>(f.var_count)) * params.small + Rational(static_cast<long long>(minsat_brute(f)));
    out.require(got == Cost(want), "formula with " + std::to_string(f.clauses.size()) + " clauses: " + cost_str(got) +
                                       " vs " + want.str());
  }
  if (out.pass) out.detail = std::to_string(family.size()) + " formulas, " + std::to_string(seconds_since(start)) + " s";
  return out;
}

// 8 ------------------------------------------------------------------------

Outcome interpret_properties() {
  Outcome out;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 5, m = 1 + rng() % 4;
    const MarginalProfile p = random_profile(rng, n, m, trial % 2 == 0);
    const ChainDistribution d = interpret_marginals(p);
    const std::string tag = "trial " + std::to_string(trial);
    out.require(max_marginal_gap(marginals_of(d, n, m), p) <= 1e-12, tag + ": marginals not reproduced");
    out.require(is_chain(d), tag + ": support crosses");
    out.require(d.support.size() <= n * m, tag + ": support larger than mn");
    const ChainDistribution un = uncross(scrambled_coupling(p, rng)).chain;
    bool same = un.support.size() == d.support.size();
    for (std::size_t k = 0; same && k < d.support.size(); ++k)
      same = un.support[k].point == d.support[k].point && std::abs(un.support[k].prob - d.support[k].prob) <= 1e-12;
    out.require(same, tag + ": uncrossing gave a different chain");
  }
  const double t = seconds_since(start);
  out.require(t < 5.0, "took " + std::to_string(t) + " s");
  if (out.pass) out.detail = "1000 profiles, " + std::to_string(t) + " s";
  return out;
}

// 9 ------------------------------------------------------------------------

Outcome submodular_deterministic() {
  Outcome out;
  std::size_t tables = 0;
  for (std::uint64_t seed = 0; tables < 200; ++seed) {
    const std::size_t n = 1 + seed % 4, m = 1 + (seed / 4) % 3;
    const CostOracle c = random_submodular_table(seed, n, m);
    if (!is_submodular_exhaustive(c).submodular) continue;
    ++tables;
    const Instance skeleton = random_instance({seed, n, m, 0.35, 1, 0.0, seed % 2 == 0});
    const auto brute = solve_deterministic_submodular(c, skeleton.relation, LatticeBackend::brute);
    const auto lov = solve_deterministic_submodular(c, skeleton.relation, LatticeBackend::lovasz);
    out.require(lov.point && std::abs(lov.cost.to_double() - brute.cost.to_double()) <= 1e-6,
                "table " + std::to_string(seed) + ": " + cost_str(lov.cost) + " vs " + cost_str(brute.cost));
  }
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Instance inst = random_instance({k, 1 + k % 4, 1 + (k / 4) % 3, 0.3, 20, k % 2 ? 0.1 : 0.0, false});
    const Cost lov = solve_deterministic_submodular(additive_oracle(inst.costs), inst.relation).cost;
    const Cost cut = solve_deterministic(inst).cost;
    out.require(lov == cut, "additive seed " + std::to_string(k) + ": " + cost_str(lov) + " vs " + cost_str(cut));
  }
  if (out.pass) out.detail = "200 tables, 200 additive instances";
  return out;
}

// 10 -----------------------------------------------------------------------

Outcome submodular_randomized() {
  Outcome out;
  const auto start = Clock::now();
  double worst = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Instance inst = random_instance({k, 1 + k % 5, 1 + (k / 5) % 3, 0.3, 20, 0.0, k % 2 == 0});
    const auto sub = solve_randomized_submodular(additive_oracle(inst.costs), inst.outcomes, inst.relation);
    const double exact = solve_randomized(inst).cost.to_double();
    worst = std::max(worst, std::abs(sub.cost - exact));
    out.require(std::abs(sub.cost - exact) <= 1e-3,
                "seed " + std::to_string(k) + ": " + std::to_string(sub.cost) + " vs " + std::to_string(exact));
    out.require(is_truthful_marginals(sub.marginals, inst.outcomes, inst.relation), "untruthful marginals");
  }
  // Central differences along the simplex at interior points.
  std::mt19937_64 rng(77);
  const Instance base = random_instance({17, 3, 3, 0.0, 10, 0.0, false});
  const CostOracle overhead = overhead_cost_oracle(base, Rational(5));
  const double h = 1e-6;
  double fd_worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    MarginalProfile p = random_profile(rng, 3, 3, false);
    for (auto& row : p.rows)
      for (auto& v : row) v = 0.05 + 0.85 * v;
    const auto g = objective_subgradient(p, overhead);
    for (TypeIndex i = 0; i < 3; ++i) {
      for (OutcomeIndex j = 1; j < 3; ++j) {
        MarginalProfile plus = p, minus = p;
        plus.rows[i][j] += h;
        plus.rows[i][0] -= h;
        minus.rows[i][j] -= h;
        minus.rows[i][0] += h;
        const double fd = (chain_cost(interpret_marginals(plus), overhead) -
                           chain_cost(interpret_marginals(minus), overhead)) /
                          (2 * h);
        fd_worst = std::max(fd_worst, std::abs(fd - (g[i][j] - g[i][0])));
      }
    }
  }
  out.require(fd_worst <= 1e-4, "finite-difference gap " + std::to_string(fd_worst));
  const double t = seconds_since(start);
  out.require(t < 60.0, "took " + std::to_string(t) + " s");
  if (out.pass) {
    std::ostringstream s;
    s << "200 instances, worst gap " << worst << ", fd gap " << fd_worst << ", " << t << " s";
    out.detail = s.str();
  }
  return out;
}

// 11 -----------------------------------------------------------------------

Outcome binary_determinization() {
  Outcome out;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 5;
    const Instance skeleton = random_instance({seed, n, 2, 0.4, 1, 0.0, seed % 2 == 0});
    const CostOracle c = random_submodular_table(seed + 5000, n, 2);
    const auto rand = solve_randomized_submodular(c, skeleton.outcomes, skeleton.relation);
    const auto det = determinize_binary(rand.chain, skeleton.relation, c);
    const auto sub_det = solve_deterministic_submodular(c, skeleton.relation);
    const std::string tag = "seed " + std::to_string(seed);
    out.require(det.cost.to_double() <= rand.cost + 1e-3, tag + ": rounding raised the cost");
    out.require(std::abs(det.cost.to_double() - sub_det.cost.to_double()) <= 1e-6,
                tag + ": " + cost_str(det.cost) + " vs " + cost_str(sub_det.cost));
  }
  if (out.pass) out.detail = "100 binary tables";
  return out;
}

// 12 -----------------------------------------------------------------------

Outcome scaling(const std::string& csv_path) {
  Outcome out;
  const std::size_t n = 2000, m = 5;
  // Expected out-degree 0.5, as in the bench subcommand's default.
  const double density = 0.5 / static_cast<double>(n - 1);
  std::ostringstream csv;
  csv << "family,n,m,seed,algo,cost,micros\n";
  double slowest = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = random_instance({seed, n, m, density, 20, 0.0, false});
    const auto start = Clock::now();
    const DeterministicSolution s = solve_deterministic(inst);
    const double t = seconds_since(start);
    slowest = std::max(slowest, t);
    out.require(s.mechanism && is_truthful(*s.mechanism, inst).truthful, "untruthful or missing mechanism");
    out.require(t < 10.0, "seed " + std::to_string(seed) + " took " + std::to_string(t) + " s");
    csv << "random," << n << ',' << m << ',' << seed << ",det," << s.cost.to_string() << ','
        << static_cast<long long>(t * 1e6) << '\n';
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    f << csv.str();
    out.require(static_cast<bool>(f), "cannot write " + csv_path);
  }
  if (out.pass) out.detail = "n=2000 m=5, slowest " + std::to_string(slowest) + " s";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string csv_path;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--csv" && k + 1 < argc) {
      csv_path = argv[++k];
    } else {
      std::cerr << "usage: acceptance [--csv PATH]\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gap example", gap_example},
      {"three-type cut", three_type_cut},
      {"min-cut vs oracle", mincut_vs_oracle},
      {"envelope vs oracle", envelope_vs_oracle},
      {"convex costs", convex_costs},
      {"nontransitive reduction", reduction_nontransitive},
      {"single-peaked reduction", reduction_single_peaked},
      {"marginal interpretation", interpret_properties},
      {"submodular deterministic", submodular_deterministic},
      {"submodular randomized", submodular_randomized},
      {"binary determinization", binary_determinization},
      {"scaling", [&] { return scaling(csv_path); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double t = seconds_since(start);
    std::printf("criterion %2zu %-26s %s  %8.3f s  %s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL", t,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
