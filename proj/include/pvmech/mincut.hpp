#pragma once

// Optimal deterministic truthful mechanisms via an s-t minimum cut.
//
// Each type i owns a vertical chain s -> (i,o_1) -> ... -> (i,o_m) -> t whose
// arc leaving (i,o_j) costs c_i(o_j). For every (i1, i2) in the closed
// relation an infinite arc (i2,o_j) -> (i1,o_j) forces M(i1) >= M(i2).
// Finite downward-closed cuts correspond one-to-one with truthful mechanisms,
// with cut value equal to mechanism cost.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pvmech/instance.hpp"
#include "pvmech/maxflow.hpp"

namespace pvmech {

/// No truthful mechanism of finite cost exists.
class InfiniteOptimum : public Error {
 public:
  using Error::Error;
};

enum class ArcKind { source, vertical, sink, horizontal };

struct NetworkArc {
  std::size_t from = 0;
  std::size_t to = 0;
  Cost capacity;
  ArcKind kind = ArcKind::vertical;
  /// Set by clamp_capacities when an infinite capacity was replaced.
  bool clamped = false;
};

class FlowNetwork {
 public:
  static constexpr std::size_t source = 0;
  static constexpr std::size_t sink = 1;

  FlowNetwork() = default;
  FlowNetwork(std::size_t types, std::size_t outcomes) : types_(types), outcomes_(outcomes) {}

  std::size_t type_count() const { return types_; }
  std::size_t outcome_count() const { return outcomes_; }
  std::size_t node_count() const { return types_ * outcomes_ + 2; }
  std::size_t grid(TypeIndex i, OutcomeIndex j) const { return 2 + i * outcomes_ + j; }

  const std::vector<NetworkArc>& arcs() const { return arcs_; }
  std::vector<NetworkArc>& arcs() { return arcs_; }

  /// Finite budget B, present once capacities have been clamped. A cut worth
  /// more than B certifies that no finite-cost truthful mechanism exists.
  const std::optional<Rational>& budget() const { return budget_; }
  void set_budget(Rational b) { budget_ = std::move(b); }

 private:
  std::size_t types_ = 0;
  std::size_t outcomes_ = 0;
  std::vector<NetworkArc> arcs_;
  std::optional<Rational> budget_;
};

struct CutResult {
  std::size_t types = 0;
  std::size_t outcomes = 0;
  /// Indexed by network node id; source is node 0.
  std::vector<bool> source_side;
  Rational value;
  Rational budget;
  /// Common denominator used to run the max-flow on integers.
  BigInt scale = 1;

  bool finite() const { return value <= budget; }
  bool contains(TypeIndex i, OutcomeIndex j) const { return source_side.at(2 + i * outcomes + j); }
};

/// Builds the layered network on the transitive closure of R (or on R itself
/// when `close_relation` is false; both give the same optimum while structural
/// arcs stay infinite).
inline FlowNetwork build_network(const Instance& inst, bool close_relation = true) {
  const std::size_t n = inst.type_count();
  const std::size_t m = inst.outcome_count();
  FlowNetwork net(n, m);
  auto& arcs = net.arcs();
  const ReportingRelation relation = close_relation ? transitive_closure(inst.relation) : inst.relation;
  arcs.reserve((m + 1) * n + m * relation.pair_count());
  for (TypeIndex i = 0; i < n; ++i) {
    arcs.push_back({FlowNetwork::source, net.grid(i, 0), Cost::infinite(), ArcKind::source});
    for (OutcomeIndex j = 0; j + 1 < m; ++j) {
      arcs.push_back({net.grid(i, j), net.grid(i, j + 1), inst.costs(i, j), ArcKind::vertical});
    }
    arcs.push_back({net.grid(i, m - 1), FlowNetwork::sink, inst.costs(i, m - 1), ArcKind::sink});
  }
  for (TypeIndex low = 0; low < n; ++low) {
    for (TypeIndex high : relation.reports_of(low)) {
      if (high == low) continue;
      // `low` may report `high`: whatever `high` gets, `low` must get too.
      for (OutcomeIndex j = 0; j < m; ++j) {
        arcs.push_back({net.grid(high, j), net.grid(low, j), Cost::infinite(), ArcKind::horizontal});
      }
    }
  }
  return net;
}

/// Replaces every infinite capacity by B + 1, where B is the sum of all finite
/// cost entries plus n times the largest one.
inline FlowNetwork clamp_capacities(const FlowNetwork& network) {
  FlowNetwork out = network;
  Rational sum = 0;
  Rational largest = 0;
  for (const auto& arc : network.arcs()) {
    if ((arc.kind == ArcKind::vertical || arc.kind == ArcKind::sink) && arc.capacity.is_finite()) {
      sum += arc.capacity.value();
      largest = std::max(largest, arc.capacity.value());
    }
  }
  const Rational budget = sum + Rational(static_cast<long long>(network.type_count())) * largest;
  const Cost clamp(Rational(budget + 1));
  for (auto& arc : out.arcs()) {
    if (arc.capacity.is_infinite()) {
      arc.capacity = clamp;
      arc.clamped = true;
    }
  }
  out.set_budget(budget);
  return out;
}

namespace detail {

template <class Capacity, class Convert>
std::vector<bool> run_cut(const FlowNetwork& net, Convert convert) {
  MaxFlow<Capacity> flow(net.node_count());
  for (const auto& arc : net.arcs()) flow.add_arc(arc.from, arc.to, convert(arc.capacity.value()));
  flow.run(FlowNetwork::source, FlowNetwork::sink);
  return flow.residual_reachable(FlowNetwork::source);
}

}  // namespace detail

/// Exact minimum cut. The source side is the set of nodes reachable from s in
/// the residual graph of a maximum flow, i.e. the inclusion-minimal min cut.
inline CutResult min_cut(const FlowNetwork& network) {
  if (!network.budget()) throw InvalidArgument("min_cut needs a network from clamp_capacities");
  BigInt scale = 1;
  for (const auto& arc : network.arcs()) {
    if (arc.capacity.is_infinite()) throw InvalidArgument("min_cut needs finite capacities");
    const BigInt den = denominator_of(arc.capacity.value());
    scale = scale / boost::multiprecision::gcd(scale, den) * den;
  }
  BigInt total = 0;
  std::vector<BigInt> scaled;
  scaled.reserve(network.arcs().size());
  for (const auto& arc : network.arcs()) {
    const Rational& c = arc.capacity.value();
    scaled.push_back(numerator_of(c) * (scale / denominator_of(c)));
    total += scaled.back();
  }

  CutResult cut;
  cut.types = network.type_count();
  cut.outcomes = network.outcome_count();
  cut.budget = *network.budget();
  cut.scale = scale;
  std::size_t k = 0;
  if (total < (BigInt(1) << 62)) {
    cut.source_side = detail::run_cut<std::int64_t>(network, [&](const Rational&) {
      return scaled[k++].convert_to<std::int64_t>();
    });
  } else {
    cut.source_side = detail::run_cut<BigInt>(network, [&](const Rational&) { return scaled[k++]; });
  }
  cut.value = 0;
  for (const auto& arc : network.arcs()) {
    if (cut.source_side[arc.from] && !cut.source_side[arc.to]) cut.value += arc.capacity.value();
  }
  return cut;
}

/// M(i) = topmost outcome j with (i, o_j) on the source side.
inline DeterministicMechanism extract_mechanism(const CutResult& cut) {
  if (!cut.finite()) {
    throw InfiniteOptimum("cut value " + to_string(cut.value) + " exceeds budget " + to_string(cut.budget) +
                          ": no finite-cost truthful mechanism");
  }
  DeterministicMechanism mech;
  mech.assignment.resize(cut.types, 0);
  for (TypeIndex i = 0; i < cut.types; ++i) {
    for (OutcomeIndex j = 0; j < cut.outcomes; ++j) {
      if (cut.contains(i, j)) mech.assignment[i] = j;
    }
  }
  return mech;
}

/// True when (i, o_j) on the source side implies (i, o_{j-1}) is too.
inline bool is_downward_closed(const CutResult& cut) {
  for (TypeIndex i = 0; i < cut.types; ++i) {
    for (OutcomeIndex j = 1; j < cut.outcomes; ++j) {
      if (cut.contains(i, j) && !cut.contains(i, j - 1)) return false;
    }
  }
  return true;
}

struct DeterministicSolution {
  /// Empty when the optimum is infinite.
  std::optional<DeterministicMechanism> mechanism;
  Cost cost;
};

struct MinCutOptions {
  bool close_relation = true;
};

inline DeterministicSolution solve_deterministic(const Instance& inst, const MinCutOptions& options = {}) {
  require_valid(inst);
  const FlowNetwork network = clamp_capacities(build_network(inst, options.close_relation));
  const CutResult cut = min_cut(network);
  DeterministicSolution solution;
  if (!cut.finite()) {
    solution.cost = Cost::infinite();
    return solution;
  }
  if (!is_downward_closed(cut)) throw Error("internal: canonical minimum cut is not downward-closed");
  solution.mechanism = extract_mechanism(cut);
  solution.cost = Cost(cut.value);
  return solution;
}

/// Graphviz rendering; source-side nodes are filled when a cut is given.
inline std::string to_dot(const FlowNetwork& network, const CutResult* cut = nullptr) {
  std::ostringstream os;
  os << "digraph network {\n  rankdir=BT;\n";
  auto name = [&](std::size_t node) -> std::string {
    if (node == FlowNetwork::source) return "s";
    if (node == FlowNetwork::sink) return "t";
    const std::size_t k = node - 2;
    return "\"" + std::to_string(k / network.outcome_count()) + "," + std::to_string(k % network.outcome_count()) + "\"";
  };
  for (std::size_t node = 0; node < network.node_count(); ++node) {
    os << "  " << name(node);
    if (cut && cut->source_side.at(node)) os << " [style=filled, fillcolor=lightblue]";
    os << ";\n";
  }
  for (const auto& arc : network.arcs()) {
    os << "  " << name(arc.from) << " -> " << name(arc.to) << " [label=\"" << arc.capacity.to_string()
       << (arc.clamped ? "*" : "") << "\"";
    if (arc.kind == ArcKind::horizontal) os << ", style=dashed";
    if (cut && cut->source_side.at(arc.from) && !cut->source_side.at(arc.to)) os << ", color=red";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace pvmech
