#pragma once

// JSON encoding of instances and mechanisms.
//
// Instance:  {"outcomes": [...], "relation": [[i, k], ...], "costs": [[...], ...]}
// Mechanism: {"kind": "deterministic", "assignment": [j, ...]}
//            {"kind": "randomized", "rows": [[p, ...], ...]}
// Numbers may be JSON numbers or strings ("3", "1/2", "0.25"); costs also accept "inf".
// Rationals are always written as strings so files round-trip exactly.

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvmech/instance.hpp"

namespace pvmech {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (value.is_number_unsigned()) return Rational(BigInt(value.get<unsigned long long>()));
  if (value.is_number_float()) return rational_from_double(value.get<double>());
  throw InvalidArgument("expected a number or rational string, got " + value.dump());
}

inline Cost cost_from_json(const Json& value) {
  if (value.is_string()) return parse_cost(value.get<std::string>());
  if (value.is_number_float() && std::isinf(value.get<double>())) return Cost::infinite();
  return Cost(rational_from_json(value));
}

inline Json to_json(const Rational& r) { return to_string(r); }
inline Json to_json(const Cost& c) { return c.to_string(); }

inline Json to_json(const Instance& inst) {
  Json out;
  Json outcomes = Json::array();
  for (const auto& u : inst.outcomes.utilities()) outcomes.push_back(to_json(u));
  out["outcomes"] = std::move(outcomes);
  Json relation = Json::array();
  for (const auto& [a, b] : inst.relation.pairs()) relation.push_back(Json::array({a, b}));
  out["relation"] = std::move(relation);
  Json costs = Json::array();
  for (TypeIndex i = 0; i < inst.costs.type_count(); ++i) {
    Json row = Json::array();
    for (OutcomeIndex j = 0; j < inst.costs.outcome_count(); ++j) row.push_back(to_json(inst.costs(i, j)));
    costs.push_back(std::move(row));
  }
  out["costs"] = std::move(costs);
  return out;
}

inline Instance instance_from_json(const Json& doc) {
  if (!doc.is_object()) throw InvalidArgument("instance must be a JSON object");
  for (const char* key : {"outcomes", "relation", "costs"}) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
      throw InvalidArgument(std::string("instance is missing array '") + key + "'");
    }
  }
  std::vector<Rational> utilities;
  for (const auto& v : doc.at("outcomes")) utilities.push_back(rational_from_json(v));

  std::vector<std::vector<Cost>> rows;
  for (const auto& row : doc.at("costs")) {
    if (!row.is_array()) throw InvalidArgument("cost rows must be arrays");
    std::vector<Cost> parsed;
    for (const auto& entry : row) parsed.push_back(cost_from_json(entry));
    rows.push_back(std::move(parsed));
  }
  const std::size_t n = rows.size();
  // Truthful reporting is always possible, so the diagonal is implied.
  ReportingRelation relation = ReportingRelation::identity(n);
  for (const auto& pair : doc.at("relation")) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() || !pair[1].is_number_unsigned()) {
      throw InvalidArgument("relation entries must be [i, k] pairs of nonnegative integers");
    }
    relation.add(pair[0].get<std::size_t>(), pair[1].get<std::size_t>());
  }
  Instance inst;
  inst.outcomes = OutcomeSpace(std::move(utilities));
  inst.relation = std::move(relation);
  inst.costs = AdditiveCostMatrix(rows);
  if (n > 0 && inst.costs.outcome_count() != inst.outcomes.size()) {
    throw InvalidArgument("cost rows have " + std::to_string(inst.costs.outcome_count()) + " entries but there are " +
                          std::to_string(inst.outcomes.size()) + " outcomes");
  }
  return inst;
}

inline Json to_json(const DeterministicMechanism& mech) {
  Json out;
  out["kind"] = "deterministic";
  out["assignment"] = mech.assignment;
  return out;
}

inline Json to_json(const RandomizedMechanism& mech) {
  Json out;
  out["kind"] = "randomized";
  Json rows = Json::array();
  for (const auto& row : mech.rows) {
    Json r = Json::array();
    for (const auto& p : row) r.push_back(to_json(p));
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out;
}

inline DeterministicMechanism deterministic_from_json(const Json& doc) {
  if (!doc.contains("assignment") || !doc.at("assignment").is_array()) {
    throw InvalidArgument("deterministic mechanism needs an 'assignment' array");
  }
  DeterministicMechanism mech;
  for (const auto& j : doc.at("assignment")) {
    if (!j.is_number_unsigned()) throw InvalidArgument("assignment entries must be nonnegative integers");
    mech.assignment.push_back(j.get<std::size_t>());
  }
  return mech;
}

inline RandomizedMechanism randomized_from_json(const Json& doc) {
  if (!doc.contains("rows") || !doc.at("rows").is_array()) {
    throw InvalidArgument("randomized mechanism needs a 'rows' array");
  }
  RandomizedMechanism mech;
  for (const auto& row : doc.at("rows")) {
    if (!row.is_array()) throw InvalidArgument("mechanism rows must be arrays");
    std::vector<Rational> parsed;
    for (const auto& p : row) parsed.push_back(rational_from_json(p));
    mech.rows.push_back(std::move(parsed));
  }
  return mech;
}

}  // namespace pvmech
