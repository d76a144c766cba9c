#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pvmech/pvmech.hpp"

namespace pvmech::testing {

/// Costs given as strings so rows can mix integers, fractions and "inf".
inline Instance make_instance(std::vector<std::string> outcomes, std::vector<std::vector<std::string>> costs,
                              std::vector<std::pair<TypeIndex, TypeIndex>> pairs = {}) {
  Instance inst;
  std::vector<Rational> u;
  for (const auto& s : outcomes) u.push_back(parse_rational(s));
  inst.outcomes = OutcomeSpace(std::move(u));
  std::vector<std::vector<Cost>> rows;
  for (const auto& row : costs) {
    rows.emplace_back();
    for (const auto& s : row) rows.back().push_back(parse_cost(s));
  }
  inst.costs = AdditiveCostMatrix(rows);
  inst.relation = ReportingRelation::identity(rows.size());
  for (const auto& [a, b] : pairs) inst.relation.add(a, b);
  return inst;
}

/// Three types and three outcomes where type 2 may report type 1 (0-based:
/// (1, 0) in R). The costs make M = (o_2, o_3, o_3) the unique optimum while
/// the unconstrained per-type optimum (o_2, o_1, o_3) is not truthful.
inline Instance three_type_instance() {
  return make_instance({"0", "1", "2"}, {{"10", "1", "9"}, {"1", "8", "2"}, {"4", "4", "1"}}, {{1, 0}});
}

inline Cost C(long long v) { return Cost(v); }

/// Integer-valued submodular table: random additive part plus a few concave
/// functions of nonnegative weighted sums of the coordinates, shifted so the
/// minimum is zero.
inline CostOracle random_submodular_table(std::uint64_t seed, std::size_t n, std::size_t m) {
  std::mt19937_64 rng(seed);
  auto draw = [&](long long lo, long long hi) { return lo + static_cast<long long>(rng() % (hi - lo + 1)); };
  std::vector<std::vector<long long>> additive(n, std::vector<long long>(m));
  for (auto& row : additive)
    for (auto& v : row) v = draw(0, 12);
  struct Term {
    std::vector<long long> weight;
    std::vector<long long> g;
  };
  std::vector<Term> terms(static_cast<std::size_t>(draw(1, 3)));
  for (auto& t : terms) {
    long long span = 0;
    for (std::size_t i = 0; i < n; ++i) {
      t.weight.push_back(draw(0, 2));
      span += t.weight.back() * static_cast<long long>(m - 1);
    }
    std::vector<long long> steps(static_cast<std::size_t>(span));
    for (auto& d : steps) d = draw(-4, 9);
    std::sort(steps.begin(), steps.end(), std::greater<>());
    t.g.push_back(0);
    for (long long d : steps) t.g.push_back(t.g.back() + d);
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  std::vector<long long> raw(total);
  for (std::size_t pos = 0; pos < total; ++pos) {
    const LatticePoint p = table_point(pos, n, m);
    long long v = 0;
    for (std::size_t i = 0; i < n; ++i) v += additive[i][p[i]];
    for (const auto& t : terms) {
      long long s = 0;
      for (std::size_t i = 0; i < n; ++i) s += t.weight[i] * static_cast<long long>(p[i]);
      v += t.g[static_cast<std::size_t>(s)];
    }
    raw[pos] = v;
  }
  const long long lowest = *std::min_element(raw.begin(), raw.end());
  std::vector<Cost> values;
  for (long long v : raw) values.emplace_back(v - lowest);
  return table_oracle(n, m, std::move(values));
}

inline MarginalProfile random_profile(std::mt19937_64& rng, std::size_t n, std::size_t m, bool sparse) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MarginalProfile p{std::vector<std::vector<double>>(n, std::vector<double>(m))};
  for (auto& row : p.rows) {
    double sum = 0;
    for (auto& v : row) {
      v = sparse && rng() % 3 == 0 ? 0.0 : unit(rng);
      sum += v;
    }
    if (sum == 0) {
      row[rng() % m] = 1.0;
      sum = 1.0;
    }
    for (auto& v : row) v /= sum;
  }
  return p;
}

// Quantile coupling after permuting each type's outcome order: the same
// marginals on at most mn points, typically crossing.
inline std::vector<ChainEntry> scrambled_coupling(const MarginalProfile& p, std::mt19937_64& rng) {
  const std::size_t n = p.type_count(), m = p.outcome_count();
  std::vector<std::vector<OutcomeIndex>> order(n, std::vector<OutcomeIndex>(m));
  std::vector<double> cuts{1.0};
  for (TypeIndex i = 0; i < n; ++i) {
    std::iota(order[i].begin(), order[i].end(), 0);
    std::shuffle(order[i].begin(), order[i].end(), rng);
    double acc = 0;
    for (OutcomeIndex j : order[i]) {
      acc += p.rows[i][j];
      cuts.push_back(std::min(acc, 1.0));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<ChainEntry> out;
  double previous = 0;
  for (double c : cuts) {
    if (c - previous <= 1e-15) continue;
    const double mid = 0.5 * (previous + c);
    LatticePoint point(n);
    for (TypeIndex i = 0; i < n; ++i) {
      double acc = 0;
      point[i] = order[i].back();
      for (OutcomeIndex j : order[i]) {
        acc += p.rows[i][j];
        if (mid < acc) {
          point[i] = j;
          break;
        }
      }
    }
    out.push_back({point, c - previous});
    previous = c;
  }
  return out;
}


inline double max_marginal_gap(const MarginalProfile& a, const MarginalProfile& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.rows[i].size(); ++j) worst = std::max(worst, std::abs(a.rows[i][j] - b.rows[i][j]));
  return worst;
}

}  // namespace pvmech::testing
