#pragma once

// Combinatorial costs over outcome vectors and the lattice of truthful
// deterministic assignments.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "pvmech/instance.hpp"

namespace pvmech {

/// One outcome index per type.
using LatticePoint = std::vector<OutcomeIndex>;

inline LatticePoint meet(std::span<const OutcomeIndex> a, std::span<const OutcomeIndex> b) {
  if (a.size() != b.size()) throw InvalidArgument("meet of points with different lengths");
  LatticePoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

inline LatticePoint join(std::span<const OutcomeIndex> a, std::span<const OutcomeIndex> b) {
  if (a.size() != b.size()) throw InvalidArgument("join of points with different lengths");
  LatticePoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

/// Coordinatewise a <= b.
inline bool dominated_by(std::span<const OutcomeIndex> a, std::span<const OutcomeIndex> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// Neither point dominates the other.
inline bool crosses(std::span<const OutcomeIndex> a, std::span<const OutcomeIndex> b) {
  return !dominated_by(a, b) && !dominated_by(b, a);
}

/// O^{i1} >= O^{i2} for every (i1, i2) in R.
inline bool in_truthful_lattice(std::span<const OutcomeIndex> point, const ReportingRelation& relation) {
  if (point.size() != relation.type_count()) throw InvalidArgument("point length differs from type count");
  for (TypeIndex a = 0; a < point.size(); ++a)
    for (TypeIndex b : relation.reports_of(a))
      if (point[a] < point[b]) return false;
  return true;
}

/// Value-query access to a combinatorial cost c : O^Theta -> R+ u {inf}.
/// Queries must be re-entrant and deterministic.
class CostOracle {
 public:
  using Query = std::function<Cost(std::span<const OutcomeIndex>)>;

  CostOracle(std::size_t types, std::size_t outcomes, Query query, Rational bound, std::string kind = "function")
      : types_(types), outcomes_(outcomes), query_(std::move(query)), bound_(std::move(bound)), kind_(std::move(kind)) {}

  std::size_t type_count() const { return types_; }
  std::size_t outcome_count() const { return outcomes_; }
  /// Declared upper bound on every finite value.
  const Rational& bound() const { return bound_; }
  const std::string& kind() const { return kind_; }

  Cost operator()(std::span<const OutcomeIndex> point) const {
    if (point.size() != types_) throw InvalidArgument("query point length differs from type count");
    return query_(point);
  }

  /// Floating view of a query; infinite values map to +inf.
  double value(std::span<const OutcomeIndex> point) const { return (*this)(point).to_double(); }

  /// forbidden(i, j): every point with O^i = j has infinite cost. Optional;
  /// oracles that cannot tell return false everywhere.
  bool forbidden(TypeIndex i, OutcomeIndex j) const {
    return !forbidden_.empty() && forbidden_.at(i * outcomes_ + j) != 0;
  }
  void set_forbidden(std::vector<std::uint8_t> mask) { forbidden_ = std::move(mask); }

  /// Per-type additive costs when the oracle is modular, else empty.
  const std::optional<AdditiveCostMatrix>& additive_part() const { return additive_; }
  void set_additive(AdditiveCostMatrix costs) { additive_ = std::move(costs); }

 private:
  std::size_t types_;
  std::size_t outcomes_;
  Query query_;
  Rational bound_;
  std::string kind_;
  std::vector<std::uint8_t> forbidden_;
  std::optional<AdditiveCostMatrix> additive_;
};

namespace detail {
inline Rational largest_finite_row_sum(const AdditiveCostMatrix& costs) {
  Rational total = 0;
  for (TypeIndex i = 0; i < costs.type_count(); ++i) {
    Rational best = 0;
    for (OutcomeIndex j = 0; j < costs.outcome_count(); ++j)
      if (costs(i, j).is_finite()) best = std::max(best, costs(i, j).value());
    total += best;
  }
  return total;
}
}  // namespace detail

/// c(O) = sum_i c_i(O^i).
inline CostOracle additive_oracle(const AdditiveCostMatrix& costs) {
  auto shared = std::make_shared<const AdditiveCostMatrix>(costs);
  CostOracle oracle(
      costs.type_count(), costs.outcome_count(),
      [shared](std::span<const OutcomeIndex> point) {
        Cost total;
        for (TypeIndex i = 0; i < point.size(); ++i) total += (*shared)(i, point[i]);
        return total;
      },
      detail::largest_finite_row_sum(costs), "additive");
  std::vector<std::uint8_t> mask(costs.type_count() * costs.outcome_count());
  for (TypeIndex i = 0; i < costs.type_count(); ++i)
    for (OutcomeIndex j = 0; j < costs.outcome_count(); ++j) mask[i * costs.outcome_count() + j] = costs(i, j).is_infinite();
  oracle.set_forbidden(std::move(mask));
  oracle.set_additive(costs);
  return oracle;
}

/// Row-major position of a point in an m^n table, type 0 most significant.
inline std::size_t table_position(std::span<const OutcomeIndex> point, std::size_t outcomes) {
  std::size_t pos = 0;
  for (OutcomeIndex j : point) pos = pos * outcomes + j;
  return pos;
}

/// Inverse of table_position.
inline LatticePoint table_point(std::size_t pos, std::size_t types, std::size_t outcomes) {
  LatticePoint point(types);
  for (std::size_t i = types; i-- > 0;) {
    point[i] = pos % outcomes;
    pos /= outcomes;
  }
  return point;
}

inline std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && out > limit / base) throw BudgetExceeded("m^n exceeds " + std::to_string(limit));
    out *= base;
  }
  return out;
}

/// Explicit value table with m^n entries, indexed by table_position.
inline CostOracle table_oracle(std::size_t types, std::size_t outcomes, std::vector<Cost> values) {
  const std::size_t size = checked_power(outcomes, types, std::size_t(1) << 26);
  if (values.size() != size) {
    throw InvalidArgument("table has " + std::to_string(values.size()) + " values, expected " + std::to_string(size));
  }
  Rational bound = 0;
  for (const auto& v : values)
    if (v.is_finite()) bound = std::max(bound, v.value());
  auto shared = std::make_shared<const std::vector<Cost>>(std::move(values));
  return CostOracle(
      types, outcomes,
      [shared, outcomes](std::span<const OutcomeIndex> point) { return (*shared)[table_position(point, outcomes)]; },
      bound, "table");
}

/// Pointwise sum of two oracles over the same space.
inline CostOracle sum_oracle(const CostOracle& a, const CostOracle& b, std::string kind) {
  if (a.type_count() != b.type_count() || a.outcome_count() != b.outcome_count()) {
    throw InvalidArgument("summing oracles over different spaces");
  }
  return CostOracle(
      a.type_count(), a.outcome_count(), [a, b](std::span<const OutcomeIndex> p) { return a(p) + b(p); },
      Rational(a.bound() + b.bound()), std::move(kind));
}

struct SubmodularityVerdict {
  bool submodular = true;
  /// A pair violating c(a) + c(b) >= c(a ^ b) + c(a v b), when found.
  std::optional<std::pair<LatticePoint, LatticePoint>> witness;
  std::size_t pairs_checked = 0;
};

namespace detail {
inline bool submodular_pair(const CostOracle& c, const LatticePoint& a, const LatticePoint& b) {
  return c(a) + c(b) >= c(meet(a, b)) + c(join(a, b));
}
}  // namespace detail

/// Checks every unordered pair; throws BudgetExceeded when there are more
/// than `max_pairs` of them.
inline SubmodularityVerdict is_submodular_exhaustive(const CostOracle& c, std::size_t max_pairs = 1'000'000) {
  const std::size_t points = checked_power(c.outcome_count(), c.type_count(), std::size_t(1) << 31);
  if (points * (points - 1) / 2 > max_pairs) {
    throw BudgetExceeded("exhaustive submodularity check needs more than " + std::to_string(max_pairs) + " pairs");
  }
  SubmodularityVerdict verdict;
  std::vector<LatticePoint> all;
  all.reserve(points);
  for (std::size_t p = 0; p < points; ++p) all.push_back(table_point(p, c.type_count(), c.outcome_count()));
  for (std::size_t x = 0; x < points; ++x) {
    for (std::size_t y = x + 1; y < points; ++y) {
      if (!crosses(all[x], all[y])) continue;  // comparable pairs hold with equality
      ++verdict.pairs_checked;
      if (!detail::submodular_pair(c, all[x], all[y])) {
        verdict.submodular = false;
        verdict.witness = std::pair{all[x], all[y]};
        return verdict;
      }
    }
  }
  return verdict;
}

/// One-sided random check: can refute submodularity, never certify it.
inline SubmodularityVerdict is_submodular_sampled(const CostOracle& c, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SubmodularityVerdict verdict;
  LatticePoint a(c.type_count()), b(c.type_count());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < c.type_count(); ++i) {
      a[i] = rng() % c.outcome_count();
      b[i] = rng() % c.outcome_count();
    }
    ++verdict.pairs_checked;
    if (!detail::submodular_pair(c, a, b)) {
      verdict.submodular = false;
      verdict.witness = std::pair{a, b};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace pvmech
