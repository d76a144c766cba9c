#pragma once

// Naive exhaustive searches used as ground truth for every solver.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pvmech/generators.hpp"
#include "pvmech/instance.hpp"
#include "pvmech/lattice.hpp"

namespace pvmech {

struct EnumerationBudget {
  std::size_t max_states = 10'000'000;
};

namespace detail {

inline void require_budget(std::size_t types, std::size_t outcomes, const EnumerationBudget& budget) {
  if (budget.max_states == 0) throw InvalidArgument("enumeration budget must be positive");
  checked_power(outcomes, types, budget.max_states);
}

}  // namespace detail

/// Calls visit(point) once for every member of the truthful lattice, by a
/// depth-first search that bounds each coordinate by the ones already fixed.
template <class Visit>
void for_each_truthful(const ReportingRelation& relation, std::size_t outcomes, Visit&& visit,
                       const EnumerationBudget& budget = {}) {
  const std::size_t n = relation.type_count();
  detail::require_budget(n, outcomes, budget);
  if (outcomes == 0) return;
  LatticePoint point(n, 0);
  // Coordinate k must be >= point[t] for every earlier t that k reports, and
  // <= point[t] for every earlier t reporting k.
  std::vector<std::vector<TypeIndex>> above(n), below(n);
  for (const auto& [a, b] : relation.pairs()) {
    if (a == b) continue;
    if (b < a) above[a].push_back(b);
    if (a < b) below[b].push_back(a);
  }
  auto descend = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      visit(static_cast<const LatticePoint&>(point));
      return;
    }
    OutcomeIndex lo = 0, hi = outcomes - 1;
    for (TypeIndex t : above[k]) lo = std::max(lo, point[t]);
    for (TypeIndex t : below[k]) hi = std::min(hi, point[t]);
    for (OutcomeIndex j = lo; j <= hi && lo <= hi; ++j) {
      point[k] = j;
      self(self, k + 1);
    }
  };
  descend(descend, 0);
}

inline std::vector<LatticePoint> enumerate_truthful_deterministic(const ReportingRelation& relation,
                                                                  std::size_t outcomes,
                                                                  const EnumerationBudget& budget = {}) {
  std::vector<LatticePoint> out;
  for_each_truthful(relation, outcomes, [&](const LatticePoint& p) { out.push_back(p); }, budget);
  return out;
}

/// Second, independent count: filter all m^n vectors by membership.
inline std::size_t count_truthful_by_filter(const ReportingRelation& relation, std::size_t outcomes,
                                            const EnumerationBudget& budget = {}) {
  const std::size_t n = relation.type_count();
  detail::require_budget(n, outcomes, budget);
  const std::size_t total = checked_power(outcomes, n, budget.max_states);
  std::size_t count = 0;
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (in_truthful_lattice(table_point(pos, n, outcomes), relation)) ++count;
  }
  return count;
}

struct BruteForceResult {
  Cost cost = Cost::infinite();
  /// A minimizer; empty when every candidate costs infinity.
  std::optional<LatticePoint> argmin;
  std::size_t visited = 0;
};

/// min over the truthful lattice of sum_i c_i(M(i)).
inline BruteForceResult brute_force_deterministic_opt(const Instance& inst, const EnumerationBudget& budget = {}) {
  require_valid(inst);
  BruteForceResult best;
  for_each_truthful(
      inst.relation, inst.outcome_count(),
      [&](const LatticePoint& p) {
        ++best.visited;
        Cost total;
        for (TypeIndex i = 0; i < p.size() && total.is_finite(); ++i) total += inst.costs(i, p[i]);
        if (total.is_finite() && (!best.argmin || total < best.cost)) {
          best.cost = total;
          best.argmin = p;
        }
      },
      budget);
  return best;
}

/// min over the truthful lattice of an arbitrary cost oracle.
inline BruteForceResult brute_force_deterministic_opt(const CostOracle& oracle, const ReportingRelation& relation,
                                                      const EnumerationBudget& budget = {}) {
  if (relation.type_count() != oracle.type_count()) throw InvalidArgument("relation and oracle disagree on n");
  BruteForceResult best;
  for_each_truthful(
      relation, oracle.outcome_count(),
      [&](const LatticePoint& p) {
        ++best.visited;
        const Cost total = oracle(p);
        if (total.is_finite() && (!best.argmin || total < best.cost)) {
          best.cost = total;
          best.argmin = p;
        }
      },
      budget);
  return best;
}

/// Cheapest lottery over the outcomes with mean utility o_j, found by trying
/// every pair a <= j <= b (two-point lotteries suffice on a line).
inline std::vector<Cost> brute_force_envelope_row(std::span<const Cost> row, const OutcomeSpace& outcomes) {
  const std::size_t m = row.size();
  std::vector<Cost> out(m, Cost::infinite());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t a = 0; a <= j; ++a) {
      for (std::size_t b = j; b < m; ++b) {
        if (row[a].is_infinite() || row[b].is_infinite()) continue;
        Cost c;
        if (a == b) {
          c = row[a];
        } else {
          const Rational alpha = (outcomes[b] - outcomes[j]) / (outcomes[b] - outcomes[a]);
          c = alpha * row[a] + Rational(1 - alpha) * row[b];
        }
        if (c < out[j]) out[j] = c;
      }
    }
  }
  return out;
}

/// min over the truthful lattice of sum_i chat_i(M(i)).
inline Cost brute_force_envelope_opt(const Instance& inst, const EnumerationBudget& budget = {}) {
  require_valid(inst);
  Instance hat = inst;
  for (TypeIndex i = 0; i < inst.type_count(); ++i) {
    const auto row = inst.costs.row(i);
    const auto env = brute_force_envelope_row(row, inst.outcomes);
    for (OutcomeIndex j = 0; j < inst.outcome_count(); ++j) hat.costs(i, j) = env[j];
  }
  return brute_force_deterministic_opt(hat, budget).cost;
}

namespace detail {

// Per-type utility ranks: rank[i][j] < rank[i][k] iff type i prefers o_k.
inline std::vector<std::vector<int>> utility_ranks(const UtilityTable& u) {
  std::vector<std::vector<int>> ranks(u.type_count(), std::vector<int>(u.outcome_count(), 0));
  for (TypeIndex i = 0; i < u.type_count(); ++i)
    for (OutcomeIndex j = 0; j < u.outcome_count(); ++j)
      for (OutcomeIndex k = 0; k < u.outcome_count(); ++k)
        if (u(i, k) < u(i, j)) ++ranks[i][j];
  return ranks;
}

/// Report chosen by `type`: highest utility, ties to the truth and then to
/// the lowest index.
inline TypeIndex best_report(std::span<const OutcomeIndex> mech, const ReportingRelation& relation,
                             const std::vector<std::vector<int>>& rank, TypeIndex type) {
  TypeIndex best = type;
  for (TypeIndex k : relation.reports_of(type)) {
    if (rank[type][mech[best]] < rank[type][mech[k]]) best = k;
  }
  return best;
}

inline void require_shape(const Instance& inst, const UtilityTable& utilities) {
  if (utilities.type_count() != inst.type_count() || utilities.outcome_count() != inst.outcome_count()) {
    throw InvalidArgument("utility table dimensions differ from the instance");
  }
}

}  // namespace detail

/// min over ALL deterministic mechanisms of sum_i c_i(M(r_i)), where r_i is
/// type i's best response under its own utilities.
inline BruteForceResult brute_force_best_response_opt(const Instance& inst, const UtilityTable& utilities,
                                                      const EnumerationBudget& budget = {}) {
  const std::size_t n = inst.type_count();
  const std::size_t m = inst.outcome_count();
  detail::require_shape(inst, utilities);
  const auto rank = detail::utility_ranks(utilities);
  const std::size_t total = checked_power(m, n, budget.max_states);
  BruteForceResult best;
  for (std::size_t pos = 0; pos < total; ++pos) {
    const LatticePoint mech = table_point(pos, n, m);
    ++best.visited;
    Cost cost;
    for (TypeIndex i = 0; i < n && cost.is_finite(); ++i) {
      cost += inst.costs(i, mech[detail::best_report(mech, inst.relation, rank, i)]);
    }
    if (cost.is_finite() && (!best.argmin || cost < best.cost)) {
      best.cost = cost;
      best.argmin = mech;
    }
  }
  return best;
}

inline BruteForceResult brute_force_best_response_opt(const Instance& inst, const EnumerationBudget& budget = {}) {
  return brute_force_best_response_opt(inst, UtilityTable::common(inst), budget);
}

/// min over deterministic mechanisms that are truthful under per-type
/// utilities: u_{i1}(M(i1)) >= u_{i1}(M(i2)) for every (i1, i2) in R.
inline BruteForceResult brute_force_truthful_opt(const Instance& inst, const UtilityTable& utilities,
                                                 const EnumerationBudget& budget = {}) {
  const std::size_t n = inst.type_count();
  const std::size_t m = inst.outcome_count();
  detail::require_shape(inst, utilities);
  const auto rank = detail::utility_ranks(utilities);
  const std::size_t total = checked_power(m, n, budget.max_states);
  const auto pairs = inst.relation.pairs();
  BruteForceResult best;
  for (std::size_t pos = 0; pos < total; ++pos) {
    const LatticePoint mech = table_point(pos, n, m);
    ++best.visited;
    bool truthful = true;
    for (const auto& [a, b] : pairs) {
      if (rank[a][mech[a]] < rank[a][mech[b]]) {
        truthful = false;
        break;
      }
    }
    if (!truthful) continue;
    Cost cost;
    for (TypeIndex i = 0; i < n && cost.is_finite(); ++i) cost += inst.costs(i, mech[i]);
    if (cost.is_finite() && (!best.argmin || cost < best.cost)) {
      best.cost = cost;
      best.argmin = mech;
    }
  }
  return best;
}

/// Fewest clauses satisfied by any assignment.
inline std::size_t minsat_brute(const CnfFormula& formula) {
  require_valid(formula);
  if (formula.var_count > 20) throw BudgetExceeded("minsat_brute supports at most 20 variables");
  std::size_t best = formula.clauses.size();
  for (std::uint32_t bits = 0; bits < (std::uint32_t(1) << formula.var_count); ++bits) {
    std::size_t satisfied = 0;
    for (const auto& clause : formula.clauses) {
      for (int lit : clause) {
        const bool value = (bits >> (std::abs(lit) - 1)) & 1U;
        if (value == (lit > 0)) {
          ++satisfied;
          break;
        }
      }
    }
    best = std::min(best, satisfied);
  }
  return best;
}

}  // namespace pvmech
