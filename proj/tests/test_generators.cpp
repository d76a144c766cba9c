#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace pvmech;
using namespace pvmech::testing;

namespace {

CnfFormula cnf(std::size_t vars, std::vector<std::vector<int>> clauses) { return CnfFormula{vars, std::move(clauses)}; }

// Every formula over `vars` variables with 1..max_clauses clauses drawn (as a
// multiset) from the non-empty literal subsets, tautological clauses included.
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

}  // namespace

TEST(Dimacs, ParsesHeaderCommentsAndClauses) {
  std::istringstream in("c example\np cnf 3 2\n1 -3 0\n2 3\n-1 0\n%\n0\n");
  const CnfFormula f = parse_dimacs(in);
  EXPECT_EQ(f.var_count, 3u);
  EXPECT_EQ(f.clauses, (std::vector<std::vector<int>>{{1, -3}, {2, 3, -1}}));
}

TEST(Dimacs, RejectsMalformedInput) {
  std::istringstream no_header("1 2 0\n");
  EXPECT_THROW(parse_dimacs(no_header), InvalidArgument);
  std::istringstream out_of_range("p cnf 1 1\n2 0\n");
  EXPECT_THROW(parse_dimacs(out_of_range), InvalidArgument);
  std::istringstream wrong_count("p cnf 2 3\n1 0\n2 0\n");
  EXPECT_THROW(parse_dimacs(wrong_count), InvalidArgument);
}

TEST(GapInstance, MatchesDefinition) {
  const Instance gap = gap_instance();
  EXPECT_EQ(gap.type_count(), 2u);
  EXPECT_EQ(gap.outcomes.utilities(), (std::vector<Rational>{1, 2, 3}));
  EXPECT_EQ(gap.costs(0, 1), C(0));
  EXPECT_TRUE(gap.costs(0, 0).is_infinite());
  EXPECT_TRUE(gap.costs(1, 1).is_infinite());
  EXPECT_TRUE(is_transitive(gap.relation));
  EXPECT_TRUE(validate(gap).empty());
}

TEST(GapInstance, JsonRoundTripIsExact) {
  const Instance gap = gap_instance();
  const std::string text = to_json(gap).dump();
  const Instance back = instance_from_json(Json::parse(text));
  EXPECT_EQ(back, gap);
  EXPECT_EQ(to_json(back).dump(), text);
}

TEST(Overhead, Examples) {
  const Instance inst = make_instance({"0", "1"}, {{"2", "5"}, {"1", "3"}, {"4", "0"}});
  const CostOracle oracle = overhead_cost_oracle(inst, Rational(7));
  EXPECT_EQ(oracle(LatticePoint{0, 0, 0}), C(7));
  EXPECT_EQ(oracle(LatticePoint{0, 0, 1}), C(2 + 1 + 0 + 7));
  EXPECT_EQ(oracle.kind(), "additive_plus_overhead");

  const Instance zero = make_instance({"0", "1"}, {{"0", "0"}, {"0", "0"}});
  const CostOracle z = overhead_cost_oracle(zero, Rational(3));
  EXPECT_EQ(z(LatticePoint{0, 0}), C(0));
  EXPECT_EQ(z(LatticePoint{1, 0}), C(3));
  EXPECT_EQ(z(LatticePoint{1, 1}), C(3));

  EXPECT_THROW(overhead_cost_oracle(inst, Rational(0)), InvalidArgument);
  EXPECT_THROW(overhead_cost_oracle(inst, Rational(-1)), InvalidArgument);
}

TEST(Overhead, ExhaustivelySubmodular) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = random_instance({seed, 3, 2, 0.0, 9, 0.0, false});
    EXPECT_TRUE(is_submodular_exhaustive(overhead_cost_oracle(inst, Rational(5))).submodular);
  }
  const Instance wide = random_instance({99, 3, 4, 0.0, 9, 0.0, false});
  EXPECT_TRUE(is_submodular_exhaustive(overhead_cost_oracle(wide, Rational(1, 2))).submodular);
}

TEST(ReductionNontransitive, Shape) {
  const CnfFormula f = cnf(2, {{1, 2}, {-1}, {-2}});
  const Instance inst = minsat_reduction_nontransitive(f);
  EXPECT_EQ(inst.type_count(), 9u);
  EXPECT_EQ(inst.outcome_count(), 2u);
  EXPECT_TRUE(validate(inst).empty());
  EXPECT_FALSE(is_transitive(inst.relation));
  const ReductionLayout layout{2, 3};
  EXPECT_TRUE(inst.relation.contains(layout.variable(0), layout.literal(1)));
  EXPECT_TRUE(inst.relation.contains(layout.variable(0), layout.literal(-1)));
  EXPECT_TRUE(inst.relation.contains(layout.clause(0), layout.literal(2)));
  EXPECT_TRUE(inst.relation.contains(layout.clause(1), layout.variable(1)));
  EXPECT_FALSE(inst.relation.contains(layout.clause(1), layout.literal(1)));
  EXPECT_EQ(inst.costs(layout.variable(0), 0), C(4));
  EXPECT_EQ(inst.costs(layout.clause(2), 1), C(1));
  EXPECT_THROW(minsat_reduction_nontransitive(cnf(1, {})), InvalidArgument);
}

TEST(ReductionNontransitive, Examples) {
  EXPECT_EQ(brute_force_best_response_opt(minsat_reduction_nontransitive(cnf(1, {{1}, {-1}}))).cost, C(1));
  EXPECT_EQ(brute_force_best_response_opt(minsat_reduction_nontransitive(cnf(2, {{1, 2}, {-1}, {-2}}))).cost, C(1));
}

TEST(ReductionNontransitive, OptimumEqualsMinSat) {
  std::size_t checked = 0;
  for (std::size_t vars = 1; vars <= 2; ++vars) {
    for (const auto& f : small_formulas(vars, 3)) {
      const Cost optimum = brute_force_best_response_opt(minsat_reduction_nontransitive(f)).cost;
      EXPECT_EQ(optimum, C(static_cast<long long>(minsat_brute(f))));
      ++checked;
    }
  }
  // 19 one-variable and 815 two-variable formulas.
  EXPECT_EQ(checked, 834u);
}

// Sampled formulas with 3 variables and up to 4 clauses.
TEST(ReductionNontransitive, SampledThreeVariableFormulas) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    CnfFormula f{3, {}};
    const std::size_t clauses = 1 + rng() % 3;
    for (std::size_t k = 0; k < clauses; ++k) {
      std::vector<int> clause;
      for (int v = 1; v <= 3; ++v) {
        const auto r = rng() % 3;
        if (r == 1) clause.push_back(v);
        if (r == 2) clause.push_back(-v);
      }
      if (clause.empty()) clause.push_back(1);
      f.clauses.push_back(clause);
    }
    EXPECT_EQ(brute_force_best_response_opt(minsat_reduction_nontransitive(f)).cost,
              C(static_cast<long long>(minsat_brute(f))));
  }
}

TEST(ReductionSinglePeaked, Example) {
  const CnfFormula f = cnf(1, {{1}, {-1}});
  const auto red = minsat_reduction_single_peaked(f, {Rational(1000), Rational(10)});
  EXPECT_EQ(red.instance.type_count(), 5u);
  const auto best = brute_force_truthful_opt(red.instance, red.utilities);
  EXPECT_EQ(best.cost, C(11));
  // Exactly one of x+ / x- receives o0.
  ASSERT_TRUE(best.argmin);
  const auto& a = *best.argmin;
  EXPECT_NE(a[red.layout.literal(1)] == 1, a[red.layout.literal(-1)] == 1);
}

TEST(ReductionSinglePeaked, ParameterValidation) {
  const CnfFormula f = cnf(1, {{1}, {-1}});
  EXPECT_THROW(minsat_reduction_single_peaked(f, {Rational(1000), Rational(2)}), InvalidArgument);
  EXPECT_THROW(minsat_reduction_single_peaked(f, {Rational(12), Rational(10)}), InvalidArgument);
  const auto p = ReductionParams::defaults(f);
  EXPECT_EQ(p.small, Rational(3));
  EXPECT_EQ(p.large, Rational(1 * 3 * 2 + 2 + 1));
  EXPECT_NO_THROW(require_valid(p, f));
}

TEST(ReductionSinglePeaked, OptimumEqualsFormula) {
  for (const auto& f : small_formulas(2, 2)) {
    const auto params = ReductionParams::defaults(f);
    const auto red = minsat_reduction_single_peaked(f, params);
    const auto best = brute_force_truthful_opt(red.instance, red.utilities);
    const Rational expected = Rational(static_cast<long long>(f.var_count)) * params.small +
                              Rational(static_cast<long long>(minsat_brute(f)));
    EXPECT_EQ(best.cost, Cost(expected));
    ASSERT_TRUE(best.argmin);
    for (std::size_t v = 1; v <= f.var_count; ++v) {
      const int var = static_cast<int>(v);
      EXPECT_NE((*best.argmin)[red.layout.literal(var)] == 1, (*best.argmin)[red.layout.literal(-var)] == 1);
    }
  }
}

TEST(RandomInstance, DeterministicInSeed) {
  const RandomInstanceParams p{42, 5, 4, 0.4, 20, 0.2, false};
  EXPECT_EQ(random_instance(p), random_instance(p));
  RandomInstanceParams q = p;
  q.seed = 43;
  EXPECT_NE(random_instance(p), random_instance(q));
}

TEST(RandomInstance, FrozenDraws) {
  // Pins the PRNG mapping so a seed keeps meaning the same instance.
  const Instance inst = random_instance({7, 3, 3, 0.5, 20, 0.0, false});
  const std::string frozen = to_json(inst).dump();
  EXPECT_EQ(to_json(random_instance({7, 3, 3, 0.5, 20, 0.0, false})).dump(), frozen);
  EXPECT_EQ(frozen,
            R"({"outcomes":["0","1","2"],"relation":[[0,0],[1,0],[1,1],[2,0],[2,1],[2,2]],)"
            R"("costs":[["0","12","13"],["3","9","14"],["6","13","4"]]})");
}

TEST(RandomInstance, Properties) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance({seed, 6, 4, 0.3, 20, 0.0, false});
    EXPECT_TRUE(validate(inst).empty());
    for (TypeIndex i = 0; i < 6; ++i)
      for (OutcomeIndex j = 0; j < 4; ++j) {
        EXPECT_TRUE(inst.costs(i, j).is_finite());
        EXPECT_GE(inst.costs(i, j), C(0));
        EXPECT_LE(inst.costs(i, j), C(20));
      }
    EXPECT_TRUE(is_transitive(random_instance({seed, 5, 3, 1.0, 20, 0.0, true}).relation));
    EXPECT_TRUE(is_transitive(random_instance({seed, 5, 3, 0.3, 20, 0.0, true}).relation));
    EXPECT_EQ(random_instance({seed, 4, 2, 1.0, 5, 0.0, false}).relation.pair_count(), 16u);
    EXPECT_EQ(random_instance({seed, 4, 2, 0.0, 5, 0.0, false}).relation.pair_count(), 4u);
    // Rows never end up all infinite.
    EXPECT_TRUE(validate(random_instance({seed, 4, 3, 0.3, 5, 1.0, false})).empty());
  }
  EXPECT_THROW(random_instance({0, 0, 3, 0.3, 5, 0.0, false}), InvalidArgument);
  EXPECT_THROW(random_instance({0, 3, 3, 1.5, 5, 0.0, false}), InvalidArgument);
}

TEST(RandomConvex, RowsAreConvexAndNonnegative) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = random_convex_instance({seed, 5, 5, 0.3, 10, false});
    EXPECT_TRUE(validate(inst).empty());
    EXPECT_TRUE(is_convex_cost(inst).all);
    for (TypeIndex i = 0; i < 5; ++i)
      for (OutcomeIndex j = 0; j < 5; ++j) EXPECT_GE(inst.costs(i, j), C(0));
  }
}

TEST(Meta, RecordsGeneratorAndPrng) {
  const Json doc = with_meta(gap_instance(), "gap", Json::object());
  EXPECT_EQ(doc.at("meta").at("generator"), "gap");
  EXPECT_EQ(doc.at("meta").at("prng"), kPrngName);
  EXPECT_EQ(instance_from_json(doc), gap_instance());
}
