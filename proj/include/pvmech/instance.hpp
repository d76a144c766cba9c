#pragma once

// Instance model: outcomes with a common utility, the reporting relation,
// additive costs, and the mechanisms evaluated against them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "pvmech/cost.hpp"
#include "pvmech/error.hpp"
#include "pvmech/rational.hpp"

namespace pvmech {

using TypeIndex = std::size_t;
using OutcomeIndex = std::size_t;

/// Outcomes o_1 < ... < o_m, encoded by the common utility of each outcome.
class OutcomeSpace {
 public:
  OutcomeSpace() = default;
  explicit OutcomeSpace(std::vector<Rational> utilities) : utilities_(std::move(utilities)) {}

  std::size_t size() const { return utilities_.size(); }
  const Rational& operator[](OutcomeIndex j) const { return utilities_.at(j); }
  const std::vector<Rational>& utilities() const { return utilities_; }

  friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;

 private:
  std::vector<Rational> utilities_;
};

/// R as a dense membership matrix plus sorted adjacency lists.
/// (i, k) in R means type i may report k.
class ReportingRelation {
 public:
  ReportingRelation() = default;
  explicit ReportingRelation(std::size_t n) : n_(n), member_(n * n, 0), targets_(n) {}

  ReportingRelation(std::size_t n, const std::vector<std::pair<TypeIndex, TypeIndex>>& pairs)
      : ReportingRelation(n) {
    for (const auto& [from, to] : pairs) add(from, to);
  }

  /// Reflexive relation containing only (i, i).
  static ReportingRelation identity(std::size_t n) {
    ReportingRelation r(n);
    for (TypeIndex i = 0; i < n; ++i) r.add(i, i);
    return r;
  }

  /// Every type may report every other type.
  static ReportingRelation full(std::size_t n) {
    ReportingRelation r(n);
    for (TypeIndex i = 0; i < n; ++i)
      for (TypeIndex k = 0; k < n; ++k) r.add(i, k);
    return r;
  }

  void add(TypeIndex from, TypeIndex to) {
    if (from >= n_ || to >= n_) {
      throw InvalidArgument("relation pair (" + std::to_string(from) + "," + std::to_string(to) +
                            ") out of range for " + std::to_string(n_) + " types");
    }
    auto& cell = member_[from * n_ + to];
    if (cell) return;
    cell = 1;
    auto& list = targets_[from];
    list.insert(std::lower_bound(list.begin(), list.end(), to), to);
  }

  std::size_t type_count() const { return n_; }
  bool contains(TypeIndex from, TypeIndex to) const { return member_.at(from * n_ + to) != 0; }
  /// Types that `from` may report, ascending.
  const std::vector<TypeIndex>& reports_of(TypeIndex from) const { return targets_.at(from); }

  std::size_t pair_count() const {
    std::size_t total = 0;
    for (const auto& list : targets_) total += list.size();
    return total;
  }

  std::vector<std::pair<TypeIndex, TypeIndex>> pairs() const {
    std::vector<std::pair<TypeIndex, TypeIndex>> out;
    out.reserve(pair_count());
    for (TypeIndex i = 0; i < n_; ++i)
      for (TypeIndex k : targets_[i]) out.emplace_back(i, k);
    return out;
  }

  friend bool operator==(const ReportingRelation& a, const ReportingRelation& b) {
    return a.n_ == b.n_ && a.member_ == b.member_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> member_;
  std::vector<std::vector<TypeIndex>> targets_;
};

/// Row i holds c_i(o_1..o_m).
class AdditiveCostMatrix {
 public:
  AdditiveCostMatrix() = default;
  AdditiveCostMatrix(std::size_t n, std::size_t m) : n_(n), m_(m), entries_(n * m) {}
  explicit AdditiveCostMatrix(const std::vector<std::vector<Cost>>& rows)
      : n_(rows.size()), m_(rows.empty() ? 0 : rows.front().size()) {
    entries_.reserve(n_ * m_);
    for (const auto& row : rows) {
      if (row.size() != m_) throw InvalidArgument("ragged cost matrix");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  std::size_t type_count() const { return n_; }
  std::size_t outcome_count() const { return m_; }

  const Cost& operator()(TypeIndex i, OutcomeIndex j) const { return entries_.at(i * m_ + j); }
  Cost& operator()(TypeIndex i, OutcomeIndex j) { return entries_.at(i * m_ + j); }

  std::vector<Cost> row(TypeIndex i) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(i * m_),
            entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_)};
  }

  friend bool operator==(const AdditiveCostMatrix&, const AdditiveCostMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<Cost> entries_;
};

struct Instance {
  OutcomeSpace outcomes;
  ReportingRelation relation;
  AdditiveCostMatrix costs;

  std::size_t type_count() const { return relation.type_count(); }
  std::size_t outcome_count() const { return outcomes.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct DeterministicMechanism {
  std::vector<OutcomeIndex> assignment;

  friend bool operator==(const DeterministicMechanism&, const DeterministicMechanism&) = default;
};

/// Independent per-type lotteries; rows[i][j] = Pr[type i receives o_j].
struct RandomizedMechanism {
  std::vector<std::vector<Rational>> rows;

  static RandomizedMechanism point_mass(const DeterministicMechanism& mech, std::size_t m) {
    RandomizedMechanism out;
    out.rows.assign(mech.assignment.size(), std::vector<Rational>(m, Rational(0)));
    for (TypeIndex i = 0; i < mech.assignment.size(); ++i) out.rows[i].at(mech.assignment[i]) = 1;
    return out;
  }

  friend bool operator==(const RandomizedMechanism&, const RandomizedMechanism&) = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string invariant;
  std::string location;
};

namespace detail {
inline void check_relation(const ReportingRelation& relation, std::vector<Violation>& out) {
  for (TypeIndex i = 0; i < relation.type_count(); ++i) {
    if (!relation.contains(i, i)) {
      out.push_back({"relation not reflexive", "type " + std::to_string(i)});
    }
  }
}
}  // namespace detail

/// Lists every violated invariant; an empty result means the instance is valid.
inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  const auto& u = inst.outcomes;
  if (u.size() == 0) out.push_back({"no outcomes", "outcomes"});
  for (OutcomeIndex j = 0; j < u.size(); ++j) {
    if (u[j] < 0) out.push_back({"negative utility", "outcome " + std::to_string(j)});
    if (j + 1 < u.size() && !(u[j] < u[j + 1])) {
      out.push_back({"outcomes not strictly increasing", "outcomes " + std::to_string(j) + "," + std::to_string(j + 1)});
    }
  }
  if (inst.type_count() == 0) out.push_back({"no types", "relation"});
  detail::check_relation(inst.relation, out);
  if (inst.costs.type_count() != inst.type_count() || inst.costs.outcome_count() != u.size()) {
    out.push_back({"cost matrix dimensions mismatch",
                   "costs " + std::to_string(inst.costs.type_count()) + "x" +
                       std::to_string(inst.costs.outcome_count()) + " vs " + std::to_string(inst.type_count()) +
                       "x" + std::to_string(u.size())});
    return out;
  }
  for (TypeIndex i = 0; i < inst.type_count(); ++i) {
    bool any_finite = false;
    for (OutcomeIndex j = 0; j < u.size(); ++j) any_finite = any_finite || inst.costs(i, j).is_finite();
    if (!any_finite) out.push_back({"cost row has no finite entry (degenerate)", "type " + std::to_string(i)});
  }
  return out;
}

inline void require_valid(const Instance& inst) {
  const auto report = validate(inst);
  if (!report.empty()) {
    throw InvalidArgument("invalid instance: " + report.front().invariant + " at " + report.front().location);
  }
}

inline std::vector<Violation> validate(const DeterministicMechanism& mech, const Instance& inst) {
  std::vector<Violation> out;
  if (mech.assignment.size() != inst.type_count()) out.push_back({"mechanism length mismatch", "assignment"});
  for (TypeIndex i = 0; i < mech.assignment.size(); ++i) {
    if (mech.assignment[i] >= inst.outcome_count()) {
      out.push_back({"outcome index out of range", "type " + std::to_string(i)});
    }
  }
  return out;
}

inline std::vector<Violation> validate(const RandomizedMechanism& mech, const Instance& inst) {
  std::vector<Violation> out;
  if (mech.rows.size() != inst.type_count()) out.push_back({"mechanism length mismatch", "rows"});
  const Rational tolerance(1, 1'000'000'000'000LL);
  for (TypeIndex i = 0; i < mech.rows.size(); ++i) {
    const auto& row = mech.rows[i];
    if (row.size() != inst.outcome_count()) {
      out.push_back({"row length mismatch", "type " + std::to_string(i)});
      continue;
    }
    Rational total = 0;
    for (const auto& p : row) {
      if (p < 0) out.push_back({"negative probability", "type " + std::to_string(i)});
      total += p;
    }
    if (abs(total - 1) > tolerance) out.push_back({"row does not sum to 1", "type " + std::to_string(i)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relation structure

inline bool is_transitive(const ReportingRelation& relation) {
  const std::size_t n = relation.type_count();
  for (TypeIndex a = 0; a < n; ++a)
    for (TypeIndex b : relation.reports_of(a))
      for (TypeIndex c : relation.reports_of(b))
        if (!relation.contains(a, c)) return false;
  return true;
}

/// Smallest transitive superset, by a breadth-first search from every type.
inline ReportingRelation transitive_closure(const ReportingRelation& relation) {
  const std::size_t n = relation.type_count();
  ReportingRelation out(n);
  std::vector<std::uint8_t> seen(n);
  std::vector<TypeIndex> frontier;
  for (TypeIndex start = 0; start < n; ++start) {
    std::fill(seen.begin(), seen.end(), 0);
    frontier.assign(relation.reports_of(start).begin(), relation.reports_of(start).end());
    for (TypeIndex k : frontier) seen[k] = 1;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      for (TypeIndex next : relation.reports_of(frontier[head])) {
        if (!seen[next]) {
          seen[next] = 1;
          frontier.push_back(next);
        }
      }
    }
    for (TypeIndex k = 0; k < n; ++k)
      if (seen[k]) out.add(start, k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Utilities, truthfulness and cost

inline Rational expected_utility(const RandomizedMechanism& mech, const OutcomeSpace& outcomes, TypeIndex type) {
  Rational total = 0;
  const auto& row = mech.rows.at(type);
  for (OutcomeIndex j = 0; j < row.size(); ++j) {
    if (row[j] != 0) total += row[j] * outcomes[j];
  }
  return total;
}

struct TruthfulnessReport {
  bool truthful = true;
  /// (i1, i2) pairs in R where type i1 strictly prefers reporting i2.
  std::vector<std::pair<TypeIndex, TypeIndex>> violations;
};

inline TruthfulnessReport is_truthful(const RandomizedMechanism& mech, const Instance& inst) {
  std::vector<Rational> utility(inst.type_count());
  for (TypeIndex i = 0; i < inst.type_count(); ++i) utility[i] = expected_utility(mech, inst.outcomes, i);
  TruthfulnessReport report;
  for (const auto& [a, b] : inst.relation.pairs()) {
    if (utility[a] < utility[b]) {
      report.truthful = false;
      report.violations.emplace_back(a, b);
    }
  }
  return report;
}

/// For a deterministic mechanism under a common utility, truthfulness is
/// M(i1) >= M(i2) for every (i1, i2) in R.
inline TruthfulnessReport is_truthful(const DeterministicMechanism& mech, const Instance& inst) {
  TruthfulnessReport report;
  for (const auto& [a, b] : inst.relation.pairs()) {
    if (inst.outcomes[mech.assignment.at(a)] < inst.outcomes[mech.assignment.at(b)]) {
      report.truthful = false;
      report.violations.emplace_back(a, b);
    }
  }
  return report;
}

/// Utility-maximizing feasible report; ties go to the truth, then to the
/// lowest index.
inline TypeIndex best_response(const DeterministicMechanism& mech, const Instance& inst, TypeIndex type) {
  TypeIndex best = type;
  const Rational* best_utility = &inst.outcomes[mech.assignment.at(type)];
  for (TypeIndex k : inst.relation.reports_of(type)) {
    const Rational& u = inst.outcomes[mech.assignment.at(k)];
    if (*best_utility < u) {
      best = k;
      best_utility = &u;
    }
  }
  return best;
}

enum class CostMode { truthful_assumed, best_response };

inline Cost cost_deterministic(const DeterministicMechanism& mech, const Instance& inst, CostMode mode) {
  Cost total;
  for (TypeIndex i = 0; i < inst.type_count(); ++i) {
    const TypeIndex report = mode == CostMode::truthful_assumed ? i : best_response(mech, inst, i);
    total += inst.costs(i, mech.assignment.at(report));
    if (total.is_infinite()) break;
  }
  return total;
}

/// Expected cost assuming truthful reports (the caller checks truthfulness).
inline Cost cost_randomized(const RandomizedMechanism& mech, const Instance& inst) {
  Cost total;
  for (TypeIndex i = 0; i < inst.type_count(); ++i) {
    const auto& row = mech.rows.at(i);
    for (OutcomeIndex j = 0; j < row.size(); ++j) total += row[j] * inst.costs(i, j);
  }
  return total;
}

}  // namespace pvmech
