#pragma once

// Truthful mechanisms for combinatorial (submodular) costs accessed by value
// queries. Randomized mechanisms are parametrized by their marginals p_{i,j};
// interpret_marginals turns marginals into the unique non-crossing (chain)
// distribution, whose cost is a convex piecewise-linear function of p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pvmech/instance.hpp"
#include "pvmech/lattice.hpp"
#include "pvmech/oracle.hpp"
#include "pvmech/simplex.hpp"

namespace pvmech {

inline constexpr double kPositivity = 1e-12;

/// rows[i][j] = probability that type i receives o_j.
struct MarginalProfile {
  std::vector<std::vector<double>> rows;

  std::size_t type_count() const { return rows.size(); }
  std::size_t outcome_count() const { return rows.empty() ? 0 : rows.front().size(); }
  double operator()(TypeIndex i, OutcomeIndex j) const { return rows[i][j]; }
  double& operator()(TypeIndex i, OutcomeIndex j) { return rows[i][j]; }

  static MarginalProfile uniform(std::size_t types, std::size_t outcomes) {
    return {std::vector<std::vector<double>>(types, std::vector<double>(outcomes, 1.0 / static_cast<double>(outcomes)))};
  }
};

inline void require_valid(const MarginalProfile& profile, double tol = 1e-12) {
  if (profile.rows.empty() || profile.outcome_count() == 0) throw InvalidArgument("empty marginal profile");
  for (TypeIndex i = 0; i < profile.rows.size(); ++i) {
    const auto& row = profile.rows[i];
    if (row.size() != profile.outcome_count()) throw InvalidArgument("ragged marginal profile");
    double sum = 0;
    for (double v : row) {
      if (!(v >= 0) || !std::isfinite(v)) throw InvalidArgument("negative or non-finite marginal in row " + std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw InvalidArgument("marginal row " + std::to_string(i) + " does not sum to 1");
  }
}

inline MarginalProfile marginals_of(const RandomizedMechanism& mech) {
  MarginalProfile out;
  for (const auto& row : mech.rows) {
    out.rows.emplace_back();
    for (const auto& p : row) out.rows.back().push_back(to_double(p));
  }
  return out;
}

struct ChainEntry {
  LatticePoint point;
  double prob = 0;
};

/// Distribution over outcome vectors, listed from the top of the chain down.
struct ChainDistribution {
  std::vector<ChainEntry> support;
};

inline MarginalProfile marginals_of(const ChainDistribution& dist, std::size_t types, std::size_t outcomes) {
  MarginalProfile out{std::vector<std::vector<double>>(types, std::vector<double>(outcomes, 0.0))};
  for (const auto& e : dist.support)
    for (TypeIndex i = 0; i < types; ++i) out.rows[i][e.point.at(i)] += e.prob;
  return out;
}

/// Consecutive support points are comparable, and hence so are all pairs.
inline bool is_chain(const ChainDistribution& dist) {
  for (std::size_t k = 0; k + 1 < dist.support.size(); ++k)
    if (!dominated_by(dist.support[k + 1].point, dist.support[k].point)) return false;
  return true;
}

namespace detail {

struct GreedyStep {
  LatticePoint point;
  double delta = 0;
  TypeIndex argmin = 0;
};

// The greedy loop on a row-normalized copy: repeatedly take the topmost
// positive level of every row and peel off the smallest of those masses.
inline std::vector<GreedyStep> greedy_chain(const MarginalProfile& profile) {
  const std::size_t n = profile.type_count();
  const std::size_t m = profile.outcome_count();
  MarginalProfile p = profile;
  for (auto& row : p.rows) {
    double sum = 0;
    for (double& v : row) {
      if (v <= kPositivity) v = 0;
      sum += v;
    }
    if (sum <= 0) throw InvalidArgument("marginal row with no positive entry");
    for (double& v : row) v /= sum;
  }
  std::vector<GreedyStep> steps;
  std::vector<OutcomeIndex> top(n, m);
  while (true) {
    bool exhausted = false;
    for (TypeIndex i = 0; i < n; ++i) {
      std::size_t j = std::min(top[i], m);
      while (j > 0 && p.rows[i][j - 1] <= kPositivity) --j;
      if (j == 0) {
        exhausted = true;
        break;
      }
      top[i] = j;
    }
    if (exhausted) break;
    GreedyStep step;
    step.point.resize(n);
    step.delta = std::numeric_limits<double>::infinity();
    for (TypeIndex i = 0; i < n; ++i) {
      step.point[i] = top[i] - 1;
      if (p.rows[i][top[i] - 1] < step.delta) {
        step.delta = p.rows[i][top[i] - 1];
        step.argmin = i;
      }
    }
    for (TypeIndex i = 0; i < n; ++i) p.rows[i][top[i] - 1] -= step.delta;
    p.rows[step.argmin][step.point[step.argmin]] = 0;
    steps.push_back(std::move(step));
    if (steps.size() > n * m) throw Error("internal: marginal interpretation exceeded mn steps");
  }
  return steps;
}

// Same walk, but every row visits every cell, empty ones included, as a
// zero-mass step. The resulting linear pieces are limits of interior ones,
// so they stay valid at the boundary of the simplex product. Cells flagged in
// `skip` (empty forbidden cells) are left out, which keeps the piece valid on
// the face where they vanish. A row on its last cell is exhausted only in the
// final step.
inline std::vector<GreedyStep> greedy_pieces(const MarginalProfile& profile,
                                             const std::vector<std::uint8_t>& skip) {
  const std::size_t n = profile.type_count();
  const std::size_t m = profile.outcome_count();
  MarginalProfile p = profile;
  for (auto& row : p.rows) {
    double sum = 0;
    for (double& v : row) {
      if (v <= kPositivity) v = 0;
      sum += v;
    }
    if (sum <= 0) throw InvalidArgument("marginal row with no positive entry");
    for (double& v : row) v /= sum;
  }
  const auto usable = [&](TypeIndex i, OutcomeIndex j) { return skip.empty() || !skip[i * m + j]; };
  // Cells of row i in walking order, top first.
  std::vector<std::vector<OutcomeIndex>> cells(n);
  for (TypeIndex i = 0; i < n; ++i) {
    for (OutcomeIndex j = m; j-- > 0;)
      if (usable(i, j)) cells[i].push_back(j);
    if (cells[i].empty()) throw InvalidArgument("marginal row with no usable cell");
  }
  std::vector<std::size_t> pos(n, 0);
  std::vector<GreedyStep> steps;
  while (true) {
    bool open = false;
    for (TypeIndex i = 0; i < n; ++i) open = open || pos[i] + 1 < cells[i].size();
    GreedyStep step;
    step.point.resize(n);
    for (TypeIndex i = 0; i < n; ++i) step.point[i] = cells[i][pos[i]];
    step.delta = std::numeric_limits<double>::infinity();
    for (TypeIndex i = 0; i < n; ++i) {
      if (open && pos[i] + 1 == cells[i].size()) continue;
      if (p.rows[i][step.point[i]] < step.delta) {
        step.delta = p.rows[i][step.point[i]];
        step.argmin = i;
      }
    }
    for (TypeIndex i = 0; i < n; ++i) {
      double& v = p.rows[i][step.point[i]];
      v = std::max(0.0, v - step.delta);
    }
    p.rows[step.argmin][step.point[step.argmin]] = 0;
    steps.push_back(step);
    if (!open) break;
    ++pos[step.argmin];
  }
  return steps;
}

}  // namespace detail

/// The unique distribution with the given marginals whose support is a chain.
/// Residues below the positivity threshold are dropped and the emitted
/// probabilities renormalized.
inline ChainDistribution interpret_marginals(const MarginalProfile& profile) {
  require_valid(profile, 1e-9);
  ChainDistribution dist;
  double total = 0;
  for (auto& step : detail::greedy_chain(profile)) {
    total += step.delta;
    dist.support.push_back({std::move(step.point), step.delta});
  }
  for (auto& e : dist.support) e.prob /= total;
  return dist;
}

/// Expected cost; +inf when any support point has infinite cost.
inline double chain_cost(const ChainDistribution& dist, const CostOracle& oracle) {
  double total = 0;
  for (const auto& e : dist.support) {
    if (e.prob <= 0) continue;
    const Cost c = oracle(e.point);
    if (c.is_infinite()) return std::numeric_limits<double>::infinity();
    total += e.prob * c.to_double();
  }
  return total;
}

struct ObjectiveValue {
  double value = 0;
  /// Gradient of the linear piece selected at this point (ties broken by the
  /// lowest type index); entries indexed [i][j].
  std::vector<std::vector<double>> gradient;
};

/// Value and subgradient of p -> chain_cost(interpret_marginals(p)). Every
/// step mass delta_k is linear in p: its gradient is the unit vector of the
/// exhausted cell minus the gradients of earlier steps that drew from the same
/// cell. Infinite oracle values are replaced by `infinite_value`.
inline ObjectiveValue evaluate_objective(const MarginalProfile& profile, const CostOracle& oracle,
                                         double infinite_value = std::numeric_limits<double>::infinity()) {
  const std::size_t n = profile.type_count();
  const std::size_t m = profile.outcome_count();
  // Forbidden cells without mass are dropped from the walk.
  std::vector<std::uint8_t> skip(n * m, 0);
  for (TypeIndex i = 0; i < n; ++i)
    for (OutcomeIndex j = 0; j < m; ++j) skip[i * m + j] = oracle.forbidden(i, j) && profile.rows[i][j] <= kPositivity;
  const auto steps = detail::greedy_pieces(profile, skip);
  ObjectiveValue out;
  out.gradient.assign(n, std::vector<double>(m, 0.0));
  // grads[k] is the gradient of delta_k, flattened.
  std::vector<std::vector<double>> grads;
  grads.reserve(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const TypeIndex a = steps[k].argmin;
    const OutcomeIndex cell = steps[k].point[a];
    std::vector<double> g(n * m, 0.0);
    g[a * m + cell] = 1.0;
    for (std::size_t q = 0; q < k; ++q) {
      if (steps[q].point[a] != cell) continue;
      for (std::size_t x = 0; x < g.size(); ++x) g[x] -= grads[q][x];
    }
    const Cost c = oracle(steps[k].point);
    const double value = c.is_infinite() ? infinite_value : c.to_double();
    if (steps[k].delta > 0) out.value += steps[k].delta * value;
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (g[x] != 0.0) out.gradient[x / m][x % m] += value * g[x];
    }
    grads.push_back(std::move(g));
  }
  return out;
}

inline std::vector<std::vector<double>> objective_subgradient(const MarginalProfile& profile, const CostOracle& oracle) {
  return evaluate_objective(profile, oracle).gradient;
}

// ---------------------------------------------------------------------------
// Uncrossing

struct UncrossResult {
  ChainDistribution chain;
  std::size_t steps = 0;
  /// Set when an oracle was supplied.
  std::optional<double> cost_before;
  std::optional<double> cost_after;
};

namespace detail {

inline double chain_potential(const std::map<LatticePoint, double>& mass) {
  double w = 0;
  for (const auto& [point, prob] : mass) {
    double s = 0;
    for (OutcomeIndex j : point) s += static_cast<double>(j);
    w += prob * s * s;
  }
  return w;
}

}  // namespace detail

/// Moves mass from crossing pairs onto their meet and join until the support
/// is a chain. Marginals are preserved; each step strictly raises the
/// potential sum_O p(O) * (sum_i index(O^i))^2.
inline UncrossResult uncross(const std::vector<ChainEntry>& dist, const CostOracle* oracle = nullptr) {
  std::map<LatticePoint, double> mass;
  for (const auto& e : dist) {
    if (e.prob < 0) throw InvalidArgument("negative probability");
    if (e.prob > 0) mass[e.point] += e.prob;
  }
  UncrossResult result;
  if (oracle) result.cost_before = chain_cost(ChainDistribution{dist}, *oracle);
  double potential = detail::chain_potential(mass);
  while (true) {
    bool changed = false;
    for (auto x = mass.begin(); x != mass.end() && !changed; ++x) {
      for (auto y = std::next(x); y != mass.end(); ++y) {
        if (!crosses(x->first, y->first)) continue;
        const LatticePoint lo = meet(x->first, y->first);
        const LatticePoint hi = join(x->first, y->first);
        const double q = std::min(x->second, y->second);
        // Residues at the positivity threshold are rounding noise.
        x->second -= q;
        y->second -= q;
        if (x->second <= kPositivity) x->second = 0;
        if (y->second <= kPositivity) y->second = 0;
        mass[lo] += q;
        mass[hi] += q;
        std::erase_if(mass, [](const auto& kv) { return kv.second <= 0; });
        changed = true;
        break;
      }
    }
    if (!changed) break;
    ++result.steps;
    const double next = detail::chain_potential(mass);
    if (!(next > potential - 1e-12)) throw Error("internal: uncrossing potential decreased");
    potential = next;
  }
  for (auto it = mass.rbegin(); it != mass.rend(); ++it) result.chain.support.push_back({it->first, it->second});
  // Lexicographic order on a chain is the chain order.
  if (!is_chain(result.chain)) throw Error("internal: uncrossing left a crossing pair");
  if (oracle) result.cost_after = chain_cost(result.chain, *oracle);
  return result;
}

// ---------------------------------------------------------------------------
// Binary outcomes

struct BinaryDeterminization {
  DeterministicMechanism mechanism;
  Cost cost;
  /// sum over thresholds of (interval length) * c(M_r); equals chain_cost.
  double expected_cost = 0;
  std::vector<std::pair<LatticePoint, double>> thresholds;
};

/// For r uniform on (0, 1], M_r gives o_2 to every type whose probability of
/// o_2 is at least r. Returns the cheapest M_r.
inline BinaryDeterminization determinize_binary(const ChainDistribution& dist, const ReportingRelation& relation,
                                                const CostOracle& oracle) {
  if (oracle.outcome_count() != 2) throw InvalidArgument("determinize_binary requires m = 2");
  const std::size_t n = oracle.type_count();
  if (relation.type_count() != n) throw InvalidArgument("relation and oracle disagree on n");
  const MarginalProfile marg = marginals_of(dist, n, 2);
  std::vector<double> u(n);
  for (TypeIndex i = 0; i < n; ++i) u[i] = marg.rows[i][1];
  // Merge values closer than the positivity threshold so rounding noise
  // cannot split types the distribution treats alike.
  std::vector<double> levels(u);
  levels.push_back(1.0);
  std::sort(levels.begin(), levels.end());
  std::vector<double> breaks;
  for (double v : levels) {
    if (v <= kPositivity) continue;
    if (!breaks.empty() && v - breaks.back() <= kPositivity) {
      breaks.back() = v;
    } else {
      breaks.push_back(v);
    }
  }
  breaks.back() = std::max(breaks.back(), 1.0);
  BinaryDeterminization out;
  double previous = 0;
  bool have = false;
  for (double b : breaks) {
    LatticePoint point(n);
    for (TypeIndex i = 0; i < n; ++i) point[i] = u[i] >= b - kPositivity ? 1 : 0;
    if (!in_truthful_lattice(point, relation)) throw InvalidArgument("distribution is not truthful");
    const Cost c = oracle(point);
    out.expected_cost += (b - previous) * c.to_double();
    out.thresholds.emplace_back(point, b - previous);
    if (!have || c < out.cost) {
      out.cost = c;
      out.mechanism.assignment = point;
      have = true;
    }
    previous = b;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feasible regions and the convex program

/// Profiles with rows on the simplex, zero on forbidden cells, and a.p <= 0
/// for every homogeneous constraint a (flattened [i * m + j]).
struct ProfilePolytope {
  std::size_t types = 0;
  std::size_t outcomes = 0;
  std::vector<std::uint8_t> forbidden;
  std::vector<std::vector<double>> halfspaces;

  bool allowed(TypeIndex i, OutcomeIndex j) const { return forbidden.empty() || !forbidden[i * outcomes + j]; }
};

namespace detail {

inline std::vector<std::uint8_t> forbidden_mask(const CostOracle& oracle) {
  const std::size_t n = oracle.type_count(), m = oracle.outcome_count();
  std::vector<std::uint8_t> mask(n * m);
  for (TypeIndex i = 0; i < n; ++i)
    for (OutcomeIndex j = 0; j < m; ++j) mask[i * m + j] = oracle.forbidden(i, j);
  return mask;
}

}  // namespace detail

/// Expected-utility monotonicity along R: the randomized truthful profiles.
inline ProfilePolytope utility_polytope(const CostOracle& oracle, const OutcomeSpace& outcomes,
                                        const ReportingRelation& relation) {
  const std::size_t n = oracle.type_count(), m = oracle.outcome_count();
  ProfilePolytope poly{n, m, detail::forbidden_mask(oracle), {}};
  for (const auto& [a, b] : relation.pairs()) {
    if (a == b) continue;
    std::vector<double> h(n * m, 0.0);
    for (OutcomeIndex j = 0; j < m; ++j) {
      h[b * m + j] += to_double(outcomes[j]);
      h[a * m + j] -= to_double(outcomes[j]);
    }
    poly.halfspaces.push_back(std::move(h));
  }
  return poly;
}

/// First-order stochastic dominance along R: the convex hull of the truthful
/// lattice, on which the chain objective has an integral minimizer.
inline ProfilePolytope dominance_polytope(const CostOracle& oracle, const ReportingRelation& relation) {
  const std::size_t n = oracle.type_count(), m = oracle.outcome_count();
  ProfilePolytope poly{n, m, detail::forbidden_mask(oracle), {}};
  for (const auto& [a, b] : relation.pairs()) {
    if (a == b) continue;
    for (OutcomeIndex k = 1; k < m; ++k) {
      std::vector<double> h(n * m, 0.0);
      for (OutcomeIndex j = k; j < m; ++j) {
        h[b * m + j] = 1.0;
        h[a * m + j] = -1.0;
      }
      poly.halfspaces.push_back(std::move(h));
    }
  }
  return poly;
}

namespace detail {

// Euclidean projection of the allowed cells of a row onto the simplex.
inline void project_row_to_simplex(std::vector<double>& row, const ProfilePolytope& poly, TypeIndex i) {
  std::vector<double> v;
  for (OutcomeIndex j = 0; j < row.size(); ++j)
    if (poly.allowed(i, j)) v.push_back(row[j]);
  std::sort(v.begin(), v.end(), std::greater<>());
  double cumulative = 0, theta = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    cumulative += v[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (v[k] - t > 0) theta = t;
  }
  for (OutcomeIndex j = 0; j < row.size(); ++j) row[j] = poly.allowed(i, j) ? std::max(row[j] - theta, 0.0) : 0.0;
}

inline std::vector<double> flatten(const MarginalProfile& p) {
  std::vector<double> out;
  for (const auto& row : p.rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

inline MarginalProfile unflatten(const std::vector<double>& x, std::size_t n, std::size_t m) {
  MarginalProfile p{std::vector<std::vector<double>>(n, std::vector<double>(m))};
  for (std::size_t k = 0; k < x.size(); ++k) p.rows[k / m][k % m] = x[k];
  return p;
}

}  // namespace detail

/// Dykstra's alternating projections onto (row simplices) and each halfspace;
/// unlike plain alternation it converges to the nearest feasible point.
inline MarginalProfile project(const MarginalProfile& start, const ProfilePolytope& poly, double tol = 1e-10,
                               std::size_t max_sweeps = 10'000) {
  const std::size_t n = poly.types, m = poly.outcomes;
  const std::size_t sets = poly.halfspaces.size() + 1;
  std::vector<double> x = detail::flatten(start);
  std::vector<std::vector<double>> correction(sets, std::vector<double>(n * m, 0.0));
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0;
    for (std::size_t s = 0; s < sets; ++s) {
      std::vector<double> y(n * m);
      for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] + correction[s][k];
      std::vector<double> z = y;
      if (s == 0) {
        for (TypeIndex i = 0; i < n; ++i) {
          std::vector<double> row(z.begin() + i * m, z.begin() + (i + 1) * m);
          detail::project_row_to_simplex(row, poly, i);
          std::copy(row.begin(), row.end(), z.begin() + i * m);
        }
      } else {
        const auto& a = poly.halfspaces[s - 1];
        double dot = 0, norm = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
          dot += a[k] * z[k];
          norm += a[k] * a[k];
        }
        if (dot > 0 && norm > 0)
          for (std::size_t k = 0; k < a.size(); ++k) z[k] -= dot / norm * a[k];
      }
      for (std::size_t k = 0; k < z.size(); ++k) {
        correction[s][k] = y[k] - z[k];
        moved = std::max(moved, std::abs(z[k] - x[k]));
      }
      x = std::move(z);
    }
    if (moved <= tol) break;
  }
  return detail::unflatten(x, n, m);
}

/// Largest violation of the row-sum, sign, forbidden-cell and halfspace constraints.
inline double infeasibility(const MarginalProfile& p, const ProfilePolytope& poly) {
  double worst = 0;
  for (TypeIndex i = 0; i < poly.types; ++i) {
    double sum = 0;
    for (OutcomeIndex j = 0; j < poly.outcomes; ++j) {
      sum += p.rows[i][j];
      worst = std::max(worst, -p.rows[i][j]);
      if (!poly.allowed(i, j)) worst = std::max(worst, std::abs(p.rows[i][j]));
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  const auto x = detail::flatten(p);
  for (const auto& a : poly.halfspaces) {
    double dot = 0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * x[k];
    worst = std::max(worst, dot);
  }
  return worst;
}

enum class ConvexBackend { cutting_plane, subgradient };

struct ConvexOptions {
  ConvexBackend backend = ConvexBackend::cutting_plane;
  double epsilon = 1e-3;
  std::size_t max_iterations = 100'000;
  /// Cutting-plane rounds before giving up.
  std::size_t max_cuts = 5'000;
};

struct ConvexResult {
  MarginalProfile profile;
  /// Objective at `profile` (infinite values replaced by the penalty).
  double value = std::numeric_limits<double>::infinity();
  /// Certified lower bound on the optimum, when the backend provides one.
  std::optional<double> lower_bound;
  bool converged = false;
  bool feasible = true;
  std::size_t iterations = 0;
};

namespace detail {

inline double penalty_for(const CostOracle& oracle) { return 10.0 * (to_double(oracle.bound()) + 1.0); }

inline MarginalProfile clean_profile(MarginalProfile p, const ProfilePolytope& poly) {
  for (TypeIndex i = 0; i < poly.types; ++i) {
    double sum = 0;
    for (OutcomeIndex j = 0; j < poly.outcomes; ++j) {
      double& v = p.rows[i][j];
      if (v < kPositivity || !poly.allowed(i, j)) v = 0;
      sum += v;
    }
    for (double& v : p.rows[i]) v /= sum;
  }
  return p;
}

// Kelley's method. The objective equals g.p on each linear piece and has
// finitely many pieces, so the cut model is exact after finitely many rounds
// and the LP value is a certified lower bound throughout.
inline ConvexResult minimize_cutting_plane(const CostOracle& oracle, const ProfilePolytope& poly,
                                           const ConvexOptions& options) {
  const std::size_t n = poly.types, m = poly.outcomes;
  const double penalty = penalty_for(oracle);
  // Variables: allowed cells, then t.
  std::vector<std::size_t> column(n * m, n * m);
  std::size_t vars = 0;
  for (std::size_t k = 0; k < n * m; ++k)
    if (poly.allowed(k / m, k % m)) column[k] = vars++;
  const std::size_t t_col = vars++;
  LinearProgram lp(vars);
  std::vector<double> objective(vars, 0.0);
  objective[t_col] = 1.0;
  lp.set_objective(objective);
  for (TypeIndex i = 0; i < n; ++i) {
    std::vector<double> a(vars, 0.0);
    for (OutcomeIndex j = 0; j < m; ++j)
      if (column[i * m + j] < vars) a[column[i * m + j]] = 1.0;
    lp.add_eq(std::move(a), 1.0);
  }
  for (const auto& h : poly.halfspaces) {
    std::vector<double> a(vars, 0.0);
    bool any = false;
    for (std::size_t k = 0; k < n * m; ++k) {
      if (column[k] < vars && h[k] != 0.0) {
        a[column[k]] = h[k];
        any = true;
      }
    }
    if (any) lp.add_le(std::move(a), 0.0);
  }

  ConvexResult best;
  double scale = 1.0;
  for (std::size_t round = 0; round < options.max_cuts; ++round) {
    const LpResult sol = lp.solve();
    if (sol.status == LpResult::Status::infeasible) {
      best.feasible = false;
      return best;
    }
    if (sol.status != LpResult::Status::optimal) throw NonConvergence("cutting-plane LP failed");
    MarginalProfile p{std::vector<std::vector<double>>(n, std::vector<double>(m, 0.0))};
    for (std::size_t k = 0; k < n * m; ++k)
      if (column[k] < vars) p.rows[k / m][k % m] = std::max(sol.x[column[k]], 0.0);
    p = clean_profile(std::move(p), poly);
    const ObjectiveValue f = evaluate_objective(p, oracle, penalty);
    best.iterations = round + 1;
    best.lower_bound = std::max(best.lower_bound.value_or(0.0), sol.value);
    if (f.value < best.value) {
      best.value = f.value;
      best.profile = p;
    }
    scale = std::max({scale, std::abs(f.value)});
    if (best.value - *best.lower_bound <= options.epsilon) {
      best.converged = true;
      return best;
    }
    std::vector<double> cut(vars, 0.0);
    for (std::size_t k = 0; k < n * m; ++k)
      if (column[k] < vars) cut[column[k]] = f.gradient[k / m][k % m];
    cut[t_col] = -1.0;
    lp.add_le(std::move(cut), 0.0);
  }
  return best;
}

// Projected subgradient with normalized steps gamma_k = D / sqrt(k + 1),
// keeping the best iterate. Gives no optimality certificate.
inline ConvexResult minimize_subgradient(const CostOracle& oracle, const ProfilePolytope& poly,
                                         const ConvexOptions& options) {
  const std::size_t n = poly.types, m = poly.outcomes;
  const double penalty = penalty_for(oracle);
  MarginalProfile p = project(MarginalProfile::uniform(n, m), poly);
  ConvexResult best;
  if (infeasibility(p, poly) > 1e-7) {
    best.feasible = false;
    return best;
  }
  const double diameter = std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t k = 0; k < options.max_iterations; ++k) {
    p = clean_profile(std::move(p), poly);
    const ObjectiveValue f = evaluate_objective(p, oracle, penalty);
    best.iterations = k + 1;
    if (f.value < best.value) {
      best.value = f.value;
      best.profile = p;
    }
    double norm = 0;
    for (const auto& row : f.gradient)
      for (double g : row) norm += g * g;
    norm = std::sqrt(norm);
    if (norm == 0) {
      best.converged = true;
      break;
    }
    const double step = 0.5 * diameter / std::sqrt(static_cast<double>(k + 1)) / norm;
    for (TypeIndex i = 0; i < n; ++i)
      for (OutcomeIndex j = 0; j < m; ++j) p.rows[i][j] -= step * f.gradient[i][j];
    p = project(p, poly, 1e-12, 200);
  }
  return best;
}

}  // namespace detail

inline ConvexResult minimize_chain_objective(const CostOracle& oracle, const ProfilePolytope& poly,
                                             const ConvexOptions& options = {}) {
  if (options.epsilon <= 0) throw InvalidArgument("epsilon must be positive");
  return options.backend == ConvexBackend::cutting_plane ? detail::minimize_cutting_plane(oracle, poly, options)
                                                         : detail::minimize_subgradient(oracle, poly, options);
}

struct SubmodularRandomizedSolution {
  ChainDistribution chain;
  MarginalProfile marginals;
  /// True chain cost of the returned distribution (+inf if any support point
  /// is infinite or the program is infeasible).
  double cost = std::numeric_limits<double>::infinity();
  std::optional<double> lower_bound;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Marginal-view truthfulness: u_{i1} >= u_{i2} - tol for every (i1, i2) in R.
inline bool is_truthful_marginals(const MarginalProfile& p, const OutcomeSpace& outcomes,
                                  const ReportingRelation& relation, double tol = 1e-9) {
  std::vector<double> u(p.type_count(), 0.0);
  double scale = 1.0;
  for (OutcomeIndex j = 0; j < outcomes.size(); ++j) scale = std::max(scale, std::abs(to_double(outcomes[j])));
  for (TypeIndex i = 0; i < p.type_count(); ++i)
    for (OutcomeIndex j = 0; j < p.outcome_count(); ++j) u[i] += p.rows[i][j] * to_double(outcomes[j]);
  for (const auto& [a, b] : relation.pairs())
    if (u[a] < u[b] - tol * scale) return false;
  return true;
}

/// epsilon-optimal randomized truthful mechanism for a submodular cost.
inline SubmodularRandomizedSolution solve_randomized_submodular(const CostOracle& oracle, const OutcomeSpace& outcomes,
                                                                const ReportingRelation& relation,
                                                                const ConvexOptions& options = {}) {
  if (outcomes.size() != oracle.outcome_count() || relation.type_count() != oracle.type_count()) {
    throw InvalidArgument("skeleton and oracle dimensions differ");
  }
  const ProfilePolytope poly = utility_polytope(oracle, outcomes, relation);
  const ConvexResult r = minimize_chain_objective(oracle, poly, options);
  SubmodularRandomizedSolution out;
  out.iterations = r.iterations;
  if (!r.feasible || r.profile.rows.empty()) return out;
  out.marginals = r.profile;
  out.chain = interpret_marginals(r.profile);
  out.cost = chain_cost(out.chain, oracle);
  out.lower_bound = r.lower_bound;
  out.converged = r.converged && std::isfinite(out.cost);
  if (!is_truthful_marginals(marginals_of(out.chain, oracle.type_count(), oracle.outcome_count()), outcomes, relation)) {
    throw Error("internal: convex-program solution is not truthful");
  }
  return out;
}

enum class LatticeBackend { brute, lovasz };

struct SubmodularDeterministicSolution {
  /// Empty when no finite-cost truthful point was found.
  std::optional<LatticePoint> point;
  Cost cost = Cost::infinite();
};

/// Minimum of the oracle over the truthful lattice. The lovasz backend
/// minimizes the chain extension over the dominance polytope and returns the
/// cheapest support point of the resulting chain; each such point is a
/// threshold of the fractional solution.
inline SubmodularDeterministicSolution solve_deterministic_submodular(const CostOracle& oracle,
                                                                      const ReportingRelation& relation,
                                                                      LatticeBackend backend = LatticeBackend::lovasz,
                                                                      const EnumerationBudget& budget = {}) {
  if (relation.type_count() != oracle.type_count()) throw InvalidArgument("relation and oracle disagree on n");
  SubmodularDeterministicSolution out;
  if (backend == LatticeBackend::brute) {
    const BruteForceResult r = brute_force_deterministic_opt(oracle, relation, budget);
    out.point = r.argmin;
    out.cost = r.cost;
    return out;
  }
  ConvexOptions options;
  options.epsilon = 1e-9 * std::max(1.0, to_double(oracle.bound()));
  const ConvexResult r = minimize_chain_objective(oracle, dominance_polytope(oracle, relation), options);
  if (!r.feasible || r.profile.rows.empty()) return out;
  if (!r.converged) throw NonConvergence("lattice minimization did not converge");
  for (const auto& e : interpret_marginals(r.profile).support) {
    if (!in_truthful_lattice(e.point, relation)) continue;
    const Cost c = oracle(e.point);
    if (c.is_finite() && (!out.point || c < out.cost)) {
      out.point = e.point;
      out.cost = c;
    }
  }
  return out;
}

}  // namespace pvmech
