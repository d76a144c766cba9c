#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace pvmech;
using namespace pvmech::testing;

TEST(Enumerate, Examples) {
  const ReportingRelation one_way(2, {{0, 0}, {1, 1}, {1, 0}});
  const auto members = enumerate_truthful_deterministic(one_way, 2);
  EXPECT_EQ(members, (std::vector<LatticePoint>{{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(enumerate_truthful_deterministic(ReportingRelation::identity(3), 4).size(), 64u);
  EXPECT_EQ(enumerate_truthful_deterministic(ReportingRelation::full(4), 3).size(), 3u);
  EXPECT_THROW(enumerate_truthful_deterministic(ReportingRelation::identity(10), 10, {1000}), BudgetExceeded);
}

TEST(Enumerate, EachMemberOnceAndCountsAgree) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + seed % 5, m = 1 + seed % 4;
    const Instance inst = random_instance({seed, n, m, 0.3, 1, 0.0, false});
    const auto members = enumerate_truthful_deterministic(inst.relation, m);
    std::set<LatticePoint> distinct(members.begin(), members.end());
    EXPECT_EQ(distinct.size(), members.size());
    for (const auto& p : members) EXPECT_TRUE(in_truthful_lattice(p, inst.relation));
    EXPECT_EQ(members.size(), count_truthful_by_filter(inst.relation, m));
  }
}

TEST(BruteDeterministic, Examples) {
  EXPECT_TRUE(brute_force_deterministic_opt(gap_instance()).cost.is_infinite());
  EXPECT_FALSE(brute_force_deterministic_opt(gap_instance()).argmin);

  const Instance two = make_instance({"0", "1"}, {{"0", "5"}, {"4", "0"}}, {{1, 0}});
  const auto r = brute_force_deterministic_opt(two);
  EXPECT_EQ(r.cost, C(0));
  EXPECT_EQ(*r.argmin, (LatticePoint{0, 1}));
  EXPECT_EQ(r.visited, 3u);

  const Instance identity = make_instance({"0", "1", "2"}, {{"3", "1", "2"}, {"0", "4", "4"}});
  EXPECT_EQ(brute_force_deterministic_opt(identity).cost, C(1));
}

TEST(BruteDeterministic, ThreeTypeOptimumIsUnique) {
  const Instance fig = three_type_instance();
  std::size_t optimal = 0;
  for_each_truthful(fig.relation, 3, [&](const LatticePoint& p) {
    if (cost_deterministic(DeterministicMechanism{p}, fig, CostMode::truthful_assumed) == C(4)) ++optimal;
  });
  EXPECT_EQ(optimal, 1u);
  EXPECT_EQ(*brute_force_deterministic_opt(fig).argmin, (LatticePoint{1, 2, 2}));
}

TEST(BruteDeterministic, OracleOverloadMatchesMatrix) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance({seed, 4, 3, 0.3, 10, 0.1, false});
    EXPECT_EQ(brute_force_deterministic_opt(additive_oracle(inst.costs), inst.relation).cost,
              brute_force_deterministic_opt(inst).cost);
  }
}

TEST(BruteEnvelope, Examples) {
  EXPECT_EQ(brute_force_envelope_opt(gap_instance()), C(0));
  const Instance identity = make_instance({"0", "1", "2"}, {{"3", "1", "2"}, {"0", "4", "4"}});
  EXPECT_EQ(brute_force_envelope_opt(identity), C(1));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance convex = random_convex_instance({seed, 4, 3, 0.4, 10, false});
    EXPECT_EQ(brute_force_envelope_opt(convex), brute_force_deterministic_opt(convex).cost);
  }
}

TEST(BruteEnvelope, RowOracleExamples) {
  const OutcomeSpace o({Rational(0), Rational(1), Rational(2)});
  const std::vector<Cost> row{C(0), C(5), C(2)};
  EXPECT_EQ(brute_force_envelope_row(row, o), (std::vector<Cost>{C(0), C(1), C(2)}));
}

TEST(BestResponse, Examples) {
  const Instance single = make_instance({"0", "1", "2"}, {{"4", "2", "7"}});
  EXPECT_EQ(brute_force_best_response_opt(single).cost, C(2));
  // Over all mechanisms, including untruthful ones, the minimum can only be lower.
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = random_instance({seed, 4, 3, 0.4, 10, 0.1, false});
    EXPECT_LE(brute_force_best_response_opt(inst).cost, brute_force_deterministic_opt(inst).cost);
  }
}

// Under common utilities the revelation principle applies: the best-response
// optimum over all mechanisms equals the truthful optimum when R is transitive.
TEST(BestResponse, EqualsTruthfulOptimumForTransitiveRelations) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = random_instance({seed, 4, 3, 0.4, 10, 0.0, true});
    EXPECT_EQ(brute_force_best_response_opt(inst).cost, brute_force_deterministic_opt(inst).cost) << seed;
  }
}

TEST(BestResponse, ReductionExample) {
  const CnfFormula f{1, {{1}, {-1}}};
  EXPECT_EQ(brute_force_best_response_opt(minsat_reduction_nontransitive(f)).cost, C(1));
}

TEST(TruthfulOpt, CommonUtilitiesMatchLatticeSearch) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = random_instance({seed, 4, 3, 0.4, 10, 0.1, false});
    EXPECT_EQ(brute_force_truthful_opt(inst, UtilityTable::common(inst)).cost,
              brute_force_deterministic_opt(inst).cost);
  }
}

TEST(TruthfulOpt, RejectsMismatchedTables) {
  const Instance inst = three_type_instance();
  EXPECT_THROW(brute_force_truthful_opt(inst, UtilityTable(2, 3)), InvalidArgument);
}

TEST(MinSat, Examples) {
  EXPECT_EQ(minsat_brute({1, {{1}, {-1}}}), 1u);
  EXPECT_EQ(minsat_brute({2, {{1, 2}, {-1}, {-2}}}), 1u);
  EXPECT_EQ(minsat_brute({1, {{1}}}), 0u);
  EXPECT_EQ(minsat_brute({1, {{1, -1}}}), 1u);
  EXPECT_THROW(minsat_brute({21, {{1}}}), BudgetExceeded);
}
