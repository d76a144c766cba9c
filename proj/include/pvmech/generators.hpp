#pragma once

// Instance constructors: the deterministic/randomized gap instance, the
// overhead-cost oracle, two MinSAT reductions, and seeded random families.

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pvmech/instance.hpp"
#include "pvmech/json_io.hpp"
#include "pvmech/lattice.hpp"

namespace pvmech {

// ---------------------------------------------------------------------------
// CNF formulas

/// Literals are signed, 1-based variable numbers as in DIMACS (-3 is "not x3").
struct CnfFormula {
  std::size_t var_count = 0;
  std::vector<std::vector<int>> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

inline void require_valid(const CnfFormula& f) {
  for (std::size_t k = 0; k < f.clauses.size(); ++k) {
    if (f.clauses[k].empty()) throw InvalidArgument("clause " + std::to_string(k) + " is empty");
    for (int lit : f.clauses[k]) {
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > f.var_count) {
        throw InvalidArgument("literal " + std::to_string(lit) + " out of range in clause " + std::to_string(k));
      }
    }
  }
}

/// Reads "p cnf V C" followed by zero-terminated clauses; 'c' lines are comments.
inline CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::vector<int> current;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      std::string format;
      if (!(tokens >> format >> f.var_count >> declared_clauses) || format != "cnf") {
        throw InvalidArgument("bad DIMACS header: " + line);
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw InvalidArgument("DIMACS clause before 'p cnf' header");
    std::istringstream clause_tokens(line);
    long long lit = 0;
    while (clause_tokens >> lit) {
      if (lit == 0) {
        if (current.empty()) throw InvalidArgument("empty clause in DIMACS input");
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!clause_tokens.eof()) throw InvalidArgument("bad token in DIMACS line: " + line);
  }
  if (!have_header) throw InvalidArgument("missing DIMACS header");
  if (!current.empty()) f.clauses.push_back(std::move(current));
  if (f.clauses.size() != declared_clauses) {
    throw InvalidArgument("DIMACS header declares " + std::to_string(declared_clauses) + " clauses, found " +
                          std::to_string(f.clauses.size()));
  }
  require_valid(f);
  return f;
}

// ---------------------------------------------------------------------------
// Named instances

/// Two types, o = (1, 2, 3), full reporting. The only finite-cost truthful
/// mechanisms are randomized: deterministic cost is infinite, randomized is 0.
inline Instance gap_instance() {
  Instance inst;
  inst.outcomes = OutcomeSpace({Rational(1), Rational(2), Rational(3)});
  inst.relation = ReportingRelation::full(2);
  inst.costs = AdditiveCostMatrix({{Cost::infinite(), Cost(0), Cost::infinite()},
                                   {Cost(0), Cost::infinite(), Cost(0)}});
  return inst;
}

/// Additive costs plus c0 whenever some type receives an outcome above o_1.
inline CostOracle overhead_cost_oracle(const Instance& inst, const Rational& c0) {
  if (c0 <= 0) throw InvalidArgument("overhead c0 must be positive");
  const CostOracle additive = additive_oracle(inst.costs);
  CostOracle oracle(
      inst.type_count(), inst.outcome_count(),
      [additive, c0](std::span<const OutcomeIndex> point) {
        Cost total = additive(point);
        for (OutcomeIndex j : point) {
          if (j != 0) return total + Cost(c0);
        }
        return total;
      },
      Rational(additive.bound() + c0), "additive_plus_overhead");
  std::vector<std::uint8_t> mask(inst.type_count() * inst.outcome_count());
  for (TypeIndex i = 0; i < inst.type_count(); ++i)
    for (OutcomeIndex j = 0; j < inst.outcome_count(); ++j) mask[i * inst.outcome_count() + j] = additive.forbidden(i, j);
  oracle.set_forbidden(std::move(mask));
  return oracle;
}

// ---------------------------------------------------------------------------
// MinSAT reductions

/// Type numbering shared by both reductions: for variable v (0-based) the
/// types 3v, 3v+1, 3v+2 are x_v, x_v^+, x_v^-; clause k is type 3V + k.
struct ReductionLayout {
  std::size_t var_count = 0;
  std::size_t clause_count = 0;

  std::size_t type_count() const { return 3 * var_count + clause_count; }
  TypeIndex variable(std::size_t v) const { return 3 * v; }
  TypeIndex literal(int lit) const {
    const std::size_t v = static_cast<std::size_t>(std::abs(lit)) - 1;
    return lit > 0 ? 3 * v + 1 : 3 * v + 2;
  }
  TypeIndex clause(std::size_t k) const { return 3 * var_count + k; }
};

/// Two outcomes o- (index 0, utility 0) and o+ (index 1, utility 1) shared by
/// all types; the reporting relation is deliberately not transitive, so the
/// best-response optimum encodes the MinSAT value.
inline Instance minsat_reduction_nontransitive(const CnfFormula& formula) {
  require_valid(formula);
  if (formula.var_count == 0 || formula.clauses.empty()) throw InvalidArgument("empty formula");
  const ReductionLayout layout{formula.var_count, formula.clauses.size()};
  const std::size_t n = layout.type_count();
  const long long clause_count = static_cast<long long>(formula.clauses.size());

  Instance inst;
  inst.outcomes = OutcomeSpace({Rational(0), Rational(1)});
  inst.relation = ReportingRelation::identity(n);
  inst.costs = AdditiveCostMatrix(n, 2);
  for (std::size_t v = 0; v < formula.var_count; ++v) {
    // Variables never want o-; literals are free.
    inst.costs(layout.variable(v), 0) = Cost(clause_count + 1);
    inst.costs(layout.variable(v), 1) = Cost(0);
    inst.relation.add(layout.variable(v), layout.literal(static_cast<int>(v + 1)));
    inst.relation.add(layout.variable(v), layout.literal(-static_cast<int>(v + 1)));
  }
  for (std::size_t k = 0; k < formula.clauses.size(); ++k) {
    const TypeIndex c = layout.clause(k);
    inst.costs(c, 0) = Cost(0);
    inst.costs(c, 1) = Cost(1);
    for (std::size_t v = 0; v < formula.var_count; ++v) inst.relation.add(c, layout.variable(v));
    for (int lit : formula.clauses[k]) inst.relation.add(c, layout.literal(lit));
  }
  return inst;
}

/// Per-type utilities for instances where types rank outcomes differently.
class UtilityTable {
 public:
  UtilityTable() = default;
  UtilityTable(std::size_t types, std::size_t outcomes) : m_(outcomes), values_(types * outcomes) {}

  /// Every type ranks outcomes by the common utility.
  static UtilityTable common(const Instance& inst) {
    UtilityTable t(inst.type_count(), inst.outcome_count());
    for (TypeIndex i = 0; i < inst.type_count(); ++i)
      for (OutcomeIndex j = 0; j < inst.outcome_count(); ++j) t(i, j) = inst.outcomes[j];
    return t;
  }

  std::size_t type_count() const { return m_ == 0 ? 0 : values_.size() / m_; }
  std::size_t outcome_count() const { return m_; }
  const Rational& operator()(TypeIndex i, OutcomeIndex j) const { return values_.at(i * m_ + j); }
  Rational& operator()(TypeIndex i, OutcomeIndex j) { return values_.at(i * m_ + j); }

 private:
  std::size_t m_ = 0;
  std::vector<Rational> values_;
};

struct ReductionParams {
  Rational large;  // N1
  Rational small;  // N2

  /// N2 = clauses + 1 and N1 = vars * N2 * clauses + clauses + 1.
  static ReductionParams defaults(const CnfFormula& f) {
    const Rational clauses(static_cast<long long>(f.clauses.size()));
    const Rational vars(static_cast<long long>(f.var_count));
    ReductionParams p;
    p.small = clauses + 1;
    p.large = vars * p.small * clauses + clauses + 1;
    return p;
  }
};

inline void require_valid(const ReductionParams& p, const CnfFormula& f) {
  const Rational clauses(static_cast<long long>(f.clauses.size()));
  const Rational vars(static_cast<long long>(f.var_count));
  if (!(p.small > clauses)) throw InvalidArgument("N2 must exceed the clause count");
  if (!(p.large > vars * p.small + clauses)) throw InvalidArgument("N1 must exceed vars * N2 + clauses");
}

/// Instance whose outcome labels are o- (0), o0 (1), o+ (2) together with the
/// per-type utilities that make it meaningful. The common-utility solvers do
/// not apply; only the exhaustive oracles consume it.
struct SinglePeakedReduction {
  Instance instance;
  UtilityTable utilities;
  ReductionLayout layout;
};

inline SinglePeakedReduction minsat_reduction_single_peaked(const CnfFormula& formula, const ReductionParams& params) {
  require_valid(formula);
  if (formula.var_count == 0 || formula.clauses.empty()) throw InvalidArgument("empty formula");
  require_valid(params, formula);
  constexpr OutcomeIndex minus = 0, zero = 1, plus = 2;
  const ReductionLayout layout{formula.var_count, formula.clauses.size()};
  const std::size_t n = layout.type_count();

  SinglePeakedReduction out;
  out.layout = layout;
  auto& inst = out.instance;
  inst.outcomes = OutcomeSpace({Rational(0), Rational(1), Rational(2)});
  inst.relation = ReportingRelation::identity(n);
  inst.costs = AdditiveCostMatrix(n, 3);
  out.utilities = UtilityTable(n, 3);
  auto set_row = [&](TypeIndex t, const Cost& c_minus, const Cost& c_zero, const Cost& c_plus, int u_minus, int u_zero,
                     int u_plus) {
    inst.costs(t, minus) = c_minus;
    inst.costs(t, zero) = c_zero;
    inst.costs(t, plus) = c_plus;
    out.utilities(t, minus) = u_minus;
    out.utilities(t, zero) = u_zero;
    out.utilities(t, plus) = u_plus;
  };
  const Cost n1(params.large), n2(params.small);
  for (std::size_t v = 0; v < formula.var_count; ++v) {
    const int var = static_cast<int>(v + 1);
    set_row(layout.variable(v), Cost(0), n1, Cost(0), 0, 0, 0);
    set_row(layout.literal(var), n1, Cost(0), n2, 0, 1, 2);
    set_row(layout.literal(-var), n2, Cost(0), n1, 2, 1, 0);
    inst.relation.add(layout.literal(var), layout.variable(v));
    inst.relation.add(layout.literal(-var), layout.variable(v));
  }
  for (std::size_t k = 0; k < formula.clauses.size(); ++k) {
    const TypeIndex c = layout.clause(k);
    set_row(c, Cost(0), Cost(1), Cost(0), 0, 1, 0);
    for (int lit : formula.clauses[k]) {
      inst.relation.add(c, layout.literal(lit));
      inst.relation.add(c, layout.variable(static_cast<std::size_t>(std::abs(lit)) - 1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random families
//
// All draws come from std::mt19937_64 (its output sequence is fixed by the
// standard) through the helpers below, so a seed reproduces an instance on
// every platform.

inline constexpr const char* kPrngName = "mt19937_64/v1";

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

inline long long uniform_int(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

inline double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(std::mt19937_64& rng, double p) { return uniform_unit(rng) < p; }

}  // namespace detail

struct RandomInstanceParams {
  std::uint64_t seed = 0;
  std::size_t types = 4;
  std::size_t outcomes = 3;
  double edge_density = 0.3;
  long long max_cost = 20;
  double infinity_rate = 0.0;
  bool close_relation = false;
};

/// Outcomes 0..m-1; each off-diagonal report allowed with probability
/// edge_density; integer costs uniform on [0, max_cost], each infinite with
/// probability infinity_rate. A row that comes out entirely infinite gets one
/// finite entry back so the instance stays non-degenerate.
inline Instance random_instance(const RandomInstanceParams& p) {
  if (p.types == 0 || p.outcomes == 0) throw InvalidArgument("random_instance needs n, m >= 1");
  if (p.edge_density < 0 || p.edge_density > 1 || p.infinity_rate < 0 || p.infinity_rate > 1) {
    throw InvalidArgument("densities must lie in [0, 1]");
  }
  if (p.max_cost < 0) throw InvalidArgument("max_cost must be nonnegative");
  std::mt19937_64 rng(p.seed);
  Instance inst;
  std::vector<Rational> utilities;
  for (std::size_t j = 0; j < p.outcomes; ++j) utilities.emplace_back(static_cast<long long>(j));
  inst.outcomes = OutcomeSpace(std::move(utilities));
  inst.relation = ReportingRelation::identity(p.types);
  for (TypeIndex a = 0; a < p.types; ++a)
    for (TypeIndex b = 0; b < p.types; ++b)
      if (a != b && detail::bernoulli(rng, p.edge_density)) inst.relation.add(a, b);
  inst.costs = AdditiveCostMatrix(p.types, p.outcomes);
  for (TypeIndex i = 0; i < p.types; ++i) {
    bool any_finite = false;
    std::vector<Rational> drawn(p.outcomes);
    for (OutcomeIndex j = 0; j < p.outcomes; ++j) {
      drawn[j] = detail::uniform_int(rng, 0, p.max_cost);
      if (detail::bernoulli(rng, p.infinity_rate)) {
        inst.costs(i, j) = Cost::infinite();
      } else {
        inst.costs(i, j) = Cost(drawn[j]);
        any_finite = true;
      }
    }
    if (!any_finite) {
      const auto keep = static_cast<OutcomeIndex>(detail::uniform_below(rng, p.outcomes));
      inst.costs(i, keep) = Cost(drawn[keep]);
    }
  }
  if (p.close_relation) inst.relation = transitive_closure(inst.relation);
  return inst;
}

struct RandomConvexParams {
  std::uint64_t seed = 0;
  std::size_t types = 4;
  std::size_t outcomes = 3;
  double edge_density = 0.3;
  long long max_slope = 10;
  bool close_relation = false;
};

/// Convex rows built by sorting random slope increments. Outcome gaps are
/// random integers in [1, 3], so slopes are taken per unit of utility.
inline Instance random_convex_instance(const RandomConvexParams& p) {
  if (p.types == 0 || p.outcomes == 0) throw InvalidArgument("random_convex_instance needs n, m >= 1");
  std::mt19937_64 rng(p.seed);
  Instance inst;
  std::vector<Rational> utilities{Rational(0)};
  for (std::size_t j = 1; j < p.outcomes; ++j) utilities.push_back(utilities.back() + detail::uniform_int(rng, 1, 3));
  inst.outcomes = OutcomeSpace(std::move(utilities));
  inst.relation = ReportingRelation::identity(p.types);
  for (TypeIndex a = 0; a < p.types; ++a)
    for (TypeIndex b = 0; b < p.types; ++b)
      if (a != b && detail::bernoulli(rng, p.edge_density)) inst.relation.add(a, b);
  inst.costs = AdditiveCostMatrix(p.types, p.outcomes);
  for (TypeIndex i = 0; i < p.types; ++i) {
    std::vector<long long> slopes(p.outcomes > 0 ? p.outcomes - 1 : 0);
    for (auto& s : slopes) s = detail::uniform_int(rng, -p.max_slope, p.max_slope);
    std::sort(slopes.begin(), slopes.end());
    std::vector<Rational> row{Rational(0)};
    for (std::size_t j = 1; j < p.outcomes; ++j) {
      row.push_back(row.back() + slopes[j - 1] * (inst.outcomes[j] - inst.outcomes[j - 1]));
    }
    const Rational lowest = *std::min_element(row.begin(), row.end());
    const Rational lift = detail::uniform_int(rng, 0, p.max_slope);
    for (OutcomeIndex j = 0; j < p.outcomes; ++j) inst.costs(i, j) = Cost(Rational(row[j] - lowest + lift));
  }
  if (p.close_relation) inst.relation = transitive_closure(inst.relation);
  return inst;
}

/// Instance JSON plus a "meta" block naming the generator and its parameters.
inline Json with_meta(const Instance& inst, const std::string& generator, Json params) {
  Json doc = to_json(inst);
  Json meta;
  meta["generator"] = generator;
  meta["prng"] = kPrngName;
  meta["params"] = std::move(params);
  doc["meta"] = std::move(meta);
  return doc;
}

}  // namespace pvmech
