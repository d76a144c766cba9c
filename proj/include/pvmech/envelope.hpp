#pragma once

// Optimal randomized truthful mechanisms via convex envelopes of the cost rows.
//
// Only the envelope of each cost row matters for randomized mechanisms, so
// the problem is solved as a deterministic one on the envelope costs, after
// which each assigned utility is realized by the cheapest two-point lottery.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pvmech/instance.hpp"
#include "pvmech/mincut.hpp"

namespace pvmech {

/// Piecewise-linear interpolation of a cost row at utility x in [o_1, o_m].
/// Infinite entries propagate to every point strictly between their neighbours.
inline Cost pl_extension_value(std::span<const Cost> row, const OutcomeSpace& outcomes, const Rational& x) {
  const std::size_t m = outcomes.size();
  if (row.size() != m) throw InvalidArgument("cost row length differs from outcome count");
  if (x < outcomes[0] || outcomes[m - 1] < x) throw InvalidArgument("utility " + to_string(x) + " outside [o_1, o_m]");
  std::size_t j = 0;
  while (j + 1 < m && !(x < outcomes[j + 1])) ++j;
  if (x == outcomes[j]) return row[j];
  if (row[j].is_infinite() || row[j + 1].is_infinite()) return Cost::infinite();
  const Rational span = outcomes[j + 1] - outcomes[j];
  const Rational value = (outcomes[j + 1] - x) / span * row[j].value() + (x - outcomes[j]) / span * row[j + 1].value();
  return Cost(value);
}

struct ConvexityReport {
  std::vector<bool> per_type;
  bool all = true;
};

/// A row is convex when its finite entries form one contiguous block on which
/// successive slopes never decrease. Infinite entries outside that block act
/// as the value +inf of an extended convex function.
inline bool is_convex_row(std::span<const Cost> row, const OutcomeSpace& outcomes) {
  std::size_t first = row.size();
  std::size_t last = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j].is_finite()) {
      first = std::min(first, j);
      last = j;
    }
  }
  if (first == row.size()) return false;
  for (std::size_t j = first; j <= last; ++j)
    if (row[j].is_infinite()) return false;
  std::optional<Rational> previous;
  for (std::size_t j = first; j < last; ++j) {
    Rational slope = (row[j + 1].value() - row[j].value()) / (outcomes[j + 1] - outcomes[j]);
    if (previous && slope < *previous) return false;
    previous = std::move(slope);
  }
  return true;
}

inline ConvexityReport is_convex_cost(const Instance& inst) {
  ConvexityReport report;
  for (TypeIndex i = 0; i < inst.type_count(); ++i) {
    const auto row = inst.costs.row(i);
    report.per_type.push_back(is_convex_row(row, inst.outcomes));
    report.all = report.all && report.per_type.back();
  }
  return report;
}

/// Lower convex hull of a row's finite points plus the hull evaluated at every
/// outcome (infinite outside the hull's utility range).
struct EnvelopeRow {
  /// Hull vertices in increasing order; collinear points are not vertices.
  std::vector<OutcomeIndex> hull;
  std::vector<Cost> values;
};

using EnvelopeTable = std::vector<EnvelopeRow>;

/// Left-to-right stack scan (Andrew's monotone chain, lower half only).
inline EnvelopeRow convex_envelope(std::span<const Cost> row, const OutcomeSpace& outcomes) {
  const std::size_t m = outcomes.size();
  if (row.size() != m) throw InvalidArgument("cost row length differs from outcome count");
  EnvelopeRow env;
  auto& hull = env.hull;
  for (OutcomeIndex j = 0; j < m; ++j) {
    if (row[j].is_infinite()) continue;
    while (hull.size() >= 2) {
      const OutcomeIndex a = hull[hull.size() - 2];
      const OutcomeIndex b = hull.back();
      const Rational cross = (outcomes[b] - outcomes[a]) * (row[j].value() - row[a].value()) -
                             (row[b].value() - row[a].value()) * (outcomes[j] - outcomes[a]);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(j);
  }
  if (hull.empty()) throw InvalidArgument("cost row has no finite entry");

  env.values.assign(m, Cost::infinite());
  std::size_t segment = 0;
  for (OutcomeIndex j = hull.front(); j <= hull.back(); ++j) {
    while (hull[segment] < j && hull[segment + 1] <= j) ++segment;
    if (hull[segment] == j) {
      env.values[j] = row[j];
      continue;
    }
    const OutcomeIndex lo = hull[segment];
    const OutcomeIndex hi = hull[segment + 1];
    const Rational weight = (outcomes[hi] - outcomes[j]) / (outcomes[hi] - outcomes[lo]);
    env.values[j] = Cost(Rational(weight * row[lo].value() + (1 - weight) * row[hi].value()));
  }
  return env;
}

inline EnvelopeTable envelope_table(const Instance& inst) {
  EnvelopeTable table;
  table.reserve(inst.type_count());
  for (TypeIndex i = 0; i < inst.type_count(); ++i) table.push_back(convex_envelope(inst.costs.row(i), inst.outcomes));
  return table;
}

/// Two-point lottery on hull vertices: o_lower w.p. alpha, o_upper w.p. 1 - alpha.
struct MixturePair {
  OutcomeIndex lower = 0;
  OutcomeIndex upper = 0;
  Rational alpha{1};

  friend bool operator==(const MixturePair&, const MixturePair&) = default;
};

/// Cheapest lottery with mean utility u: randomize between the hull vertices
/// bracketing u.
inline MixturePair recover_mixture(const EnvelopeRow& env, const OutcomeSpace& outcomes, const Rational& u) {
  if (env.hull.empty()) throw InvalidArgument("empty envelope");
  if (u < outcomes[env.hull.front()] || outcomes[env.hull.back()] < u) {
    throw InvalidArgument("target utility " + to_string(u) + " outside the envelope's finite range");
  }
  MixturePair pair;
  pair.lower = env.hull.front();
  for (OutcomeIndex v : env.hull)
    if (!(u < outcomes[v])) pair.lower = v;
  pair.upper = env.hull.back();
  for (auto it = env.hull.rbegin(); it != env.hull.rend(); ++it)
    if (!(outcomes[*it] < u)) pair.upper = *it;
  if (pair.lower == pair.upper) {
    pair.alpha = 1;
  } else {
    pair.alpha = (outcomes[pair.upper] - u) / (outcomes[pair.upper] - outcomes[pair.lower]);
  }
  return pair;
}

/// alpha * c(o_lower) + (1 - alpha) * c(o_upper).
inline Cost mixture_cost(const MixturePair& pair, std::span<const Cost> row) {
  return pair.alpha * row[pair.lower] + Rational(1 - pair.alpha) * row[pair.upper];
}

struct RandomizedSolution {
  /// Empty when even the envelope costs admit no finite truthful mechanism.
  std::optional<RandomizedMechanism> mechanism;
  std::vector<MixturePair> support;
  Cost cost;
  EnvelopeTable envelope;
  /// Optimal deterministic assignment for the envelope costs.
  std::optional<DeterministicMechanism> envelope_assignment;
};

/// Instance with each cost row replaced by its envelope restricted to the outcomes.
inline Instance envelope_instance(const Instance& inst, const EnvelopeTable& table) {
  Instance hat = inst;
  for (TypeIndex i = 0; i < inst.type_count(); ++i)
    for (OutcomeIndex j = 0; j < inst.outcome_count(); ++j) hat.costs(i, j) = table[i].values[j];
  return hat;
}

inline RandomizedSolution solve_randomized(const Instance& inst, const MinCutOptions& options = {}) {
  require_valid(inst);
  const std::size_t n = inst.type_count();
  const std::size_t m = inst.outcome_count();
  RandomizedSolution solution;
  solution.envelope = envelope_table(inst);

  DeterministicSolution hat_solution;
  if (m == 1) {
    hat_solution.mechanism = DeterministicMechanism{std::vector<OutcomeIndex>(n, 0)};
    hat_solution.cost = cost_deterministic(*hat_solution.mechanism, inst, CostMode::truthful_assumed);
  } else {
    hat_solution = solve_deterministic(envelope_instance(inst, solution.envelope), options);
  }
  if (!hat_solution.mechanism) {
    solution.cost = Cost::infinite();
    return solution;
  }
  solution.envelope_assignment = hat_solution.mechanism;

  RandomizedMechanism mech;
  mech.rows.assign(n, std::vector<Rational>(m, Rational(0)));
  for (TypeIndex i = 0; i < n; ++i) {
    const OutcomeIndex j = hat_solution.mechanism->assignment[i];
    // An outcome whose cost already lies on the envelope is used as is, so
    // collinear hull points still yield point masses.
    const MixturePair pair = inst.costs(i, j) == solution.envelope[i].values[j]
                                 ? MixturePair{j, j, Rational(1)}
                                 : recover_mixture(solution.envelope[i], inst.outcomes, inst.outcomes[j]);
    mech.rows[i][pair.lower] += pair.alpha;
    mech.rows[i][pair.upper] += 1 - pair.alpha;
    solution.support.push_back(pair);
  }
  solution.cost = cost_randomized(mech, inst);
  if (solution.cost != hat_solution.cost) {
    throw Error("internal: recovered lottery cost " + solution.cost.to_string() + " differs from envelope optimum " +
                hat_solution.cost.to_string());
  }
  solution.mechanism = std::move(mech);
  return solution;
}

// ---------------------------------------------------------------------------
// Derandomization for convex costs

/// Moves mass from the outermost support points of each row onto the outcome
/// just above the lower one, keeping expected utility fixed, until each row is
/// supported on at most two consecutive outcomes. Never increases cost when
/// costs are convex.
inline RandomizedMechanism consolidate_two_consecutive(const RandomizedMechanism& mech, const Instance& inst) {
  if (!is_convex_cost(inst).all) throw InvalidArgument("consolidation requires convex costs");
  const auto& o = inst.outcomes;
  RandomizedMechanism out = mech;
  for (auto& p : out.rows) {
    auto support_bounds = [&] {
      std::size_t lo = p.size(), hi = 0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0) {
          lo = std::min(lo, j);
          hi = j;
        }
      }
      return std::pair{lo, hi};
    };
    for (auto [lo, hi] = support_bounds(); lo < hi && hi - lo > 1; std::tie(lo, hi) = support_bounds()) {
      const std::size_t mid = lo + 1;
      // o_mid = alpha * o_lo + (1 - alpha) * o_hi
      const Rational alpha = (o[hi] - o[mid]) / (o[hi] - o[lo]);
      const Rational beta = 1 - alpha;
      if (p[lo] * beta <= p[hi] * alpha) {
        const Rational moved = p[lo];
        p[lo] = 0;
        p[hi] -= beta * moved / alpha;
        p[mid] += moved / alpha;
      } else {
        const Rational moved = p[hi];
        p[hi] = 0;
        p[lo] -= alpha * moved / beta;
        p[mid] += moved / beta;
      }
    }
  }
  for (TypeIndex i = 0; i < out.rows.size(); ++i) {
    if (expected_utility(out, o, i) != expected_utility(mech, o, i)) {
      throw Error("internal: consolidation changed the expected utility of type " + std::to_string(i));
    }
  }
  return out;
}

struct WeightedMechanism {
  DeterministicMechanism mechanism;
  Rational weight;
};

/// For r uniform on [0, 1], M_r gives type i its upper outcome iff r <= alpha_i.
/// Returns the distinct M_r with the measure of r producing each.
inline std::vector<WeightedMechanism> threshold_round(const RandomizedMechanism& mech, const Instance& inst) {
  const std::size_t m = inst.outcome_count();
  std::vector<OutcomeIndex> base(mech.rows.size());
  std::vector<Rational> upper_mass(mech.rows.size());
  for (TypeIndex i = 0; i < mech.rows.size(); ++i) {
    const auto& p = mech.rows[i];
    std::size_t lo = m, hi = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0) {
        lo = std::min(lo, j);
        hi = j;
      }
    }
    if (lo == m) throw InvalidArgument("empty row for type " + std::to_string(i));
    if (hi - lo > 1) throw InvalidArgument("row of type " + std::to_string(i) + " is not on two consecutive outcomes");
    base[i] = lo;
    upper_mass[i] = lo + 1 < m ? p[lo + 1] : Rational(0);
  }
  std::vector<Rational> breaks;
  for (const auto& a : upper_mass)
    if (a > 0) breaks.push_back(a);
  breaks.push_back(1);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<WeightedMechanism> out;
  Rational previous = 0;
  for (const auto& b : breaks) {
    WeightedMechanism w;
    w.weight = b - previous;
    w.mechanism.assignment.resize(base.size());
    for (TypeIndex i = 0; i < base.size(); ++i) {
      w.mechanism.assignment[i] = upper_mass[i] >= b ? base[i] + 1 : base[i];
    }
    out.push_back(std::move(w));
    previous = b;
  }
  return out;
}

}  // namespace pvmech
