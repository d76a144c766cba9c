#pragma once

// JSON for combinatorial cost oracles, chain distributions and per-type
// utility tables.
//
// An instance may carry an "oracle" block:
//   {"kind": "additive"}                          costs come from "costs"
//   {"kind": "additive_plus_overhead", "c0": c}   plus c whenever any type gets above o_1
//   {"kind": "table", "values": [...]}            m^n values, type 0 most significant
// Chain solution: {"support": [{"vector": [j, ...], "prob": p}, ...]}

#include <string>
#include <vector>

#include "pvmech/generators.hpp"
#include "pvmech/json_io.hpp"
#include "pvmech/lattice.hpp"
#include "pvmech/submodular.hpp"

namespace pvmech {

/// Builds the oracle described by doc["oracle"], or the additive oracle of
/// the instance costs when the block is absent.
inline CostOracle oracle_from_json(const Json& doc, const Instance& inst) {
  if (!doc.contains("oracle")) return additive_oracle(inst.costs);
  const Json& block = doc.at("oracle");
  if (!block.is_object() || !block.contains("kind") || !block.at("kind").is_string()) {
    throw InvalidArgument("oracle block needs a string 'kind'");
  }
  const std::string kind = block.at("kind").get<std::string>();
  if (kind == "additive") return additive_oracle(inst.costs);
  if (kind == "additive_plus_overhead") {
    if (!block.contains("c0")) throw InvalidArgument("additive_plus_overhead oracle needs 'c0'");
    return overhead_cost_oracle(inst, rational_from_json(block.at("c0")));
  }
  if (kind == "table") {
    if (!block.contains("values") || !block.at("values").is_array()) {
      throw InvalidArgument("table oracle needs a 'values' array");
    }
    std::vector<Cost> values;
    for (const auto& v : block.at("values")) values.push_back(cost_from_json(v));
    return table_oracle(inst.type_count(), inst.outcome_count(), std::move(values));
  }
  throw InvalidArgument("unknown oracle kind '" + kind + "'");
}

inline Json table_oracle_json(const CostOracle& oracle) {
  const std::size_t size = checked_power(oracle.outcome_count(), oracle.type_count(), std::size_t(1) << 26);
  Json values = Json::array();
  for (std::size_t pos = 0; pos < size; ++pos) {
    values.push_back(to_json(oracle(table_point(pos, oracle.type_count(), oracle.outcome_count()))));
  }
  Json block;
  block["kind"] = "table";
  block["values"] = std::move(values);
  return block;
}

inline Json to_json(const ChainDistribution& dist) {
  Json support = Json::array();
  for (const auto& e : dist.support) {
    Json entry;
    entry["vector"] = e.point;
    entry["prob"] = e.prob;
    support.push_back(std::move(entry));
  }
  Json out;
  out["kind"] = "chain";
  out["support"] = std::move(support);
  return out;
}

inline ChainDistribution chain_from_json(const Json& doc) {
  if (!doc.contains("support") || !doc.at("support").is_array()) {
    throw InvalidArgument("chain distribution needs a 'support' array");
  }
  ChainDistribution dist;
  for (const auto& entry : doc.at("support")) {
    if (!entry.contains("vector") || !entry.contains("prob")) {
      throw InvalidArgument("support entries need 'vector' and 'prob'");
    }
    ChainEntry e;
    for (const auto& j : entry.at("vector")) e.point.push_back(j.get<std::size_t>());
    e.prob = to_double(rational_from_json(entry.at("prob")));
    dist.support.push_back(std::move(e));
  }
  return dist;
}

inline Json to_json(const UtilityTable& table) {
  Json rows = Json::array();
  for (TypeIndex i = 0; i < table.type_count(); ++i) {
    Json row = Json::array();
    for (OutcomeIndex j = 0; j < table.outcome_count(); ++j) row.push_back(to_json(table(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline UtilityTable utility_table_from_json(const Json& rows) {
  if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
    throw InvalidArgument("utility table must be a non-empty array of rows");
  }
  UtilityTable table(rows.size(), rows.front().size());
  for (TypeIndex i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != table.outcome_count()) throw InvalidArgument("ragged utility table");
    for (OutcomeIndex j = 0; j < table.outcome_count(); ++j) table(i, j) = rational_from_json(rows[i][j]);
  }
  return table;
}

}  // namespace pvmech
