/**
 * @file json_io.hpp
 * @brief JSON documents for pooled runs, netlists, state dumps and beam dumps.
 *
 * Every document carries "schema_version": 1. Keys are emitted in sorted
 * order so dumps are byte-for-byte deterministic.
 */
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bsb/circuit.hpp"
#include "bsb/errors.hpp"
#include "bsb/jones.hpp"
#include "bsb/pooling.hpp"
#include "bsb/statevector.hpp"

namespace bsb {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void check_schema(const Json& j) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
    throw DomainError("unsupported or missing schema_version");
  }
}

inline Json complex_pair(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Pooling
// ---------------------------------------------------------------------------

inline Json plan_to_json(const PoolingPlan& plan) {
  return Json{{"schema_version", kSchemaVersion},
              {"N", plan.population},
              {"d_assumed", plan.assumed_defects},
              {"S", plan.stages()},
              {"pool_sizes", plan.pool_sizes},
              {"groups_per_stage", plan.groups_per_stage()}};
}

inline Json run_to_json(const PoolingPlan& plan, const RunResult& run, Accounting accounting) {
  Json stages = Json::array();
  for (const auto& st : run.stages) {
    Json queries = Json::array();
    for (const auto& q : st.queries) queries.push_back({{"x", q.query.str()}, {"f", q.reading}});
    stages.push_back({{"pool_size", st.pool_size},
                      {"queries", std::move(queries)},
                      {"positive_groups", st.positive_groups},
                      {"deduced_groups", st.deduced_groups}});
  }
  return Json{{"schema_version", kSchemaVersion},
              {"N", plan.population},
              {"d_assumed", plan.assumed_defects},
              {"S", plan.stages()},
              {"pool_sizes", plan.pool_sizes},
              {"accounting", std::string(to_string(accounting))},
              {"stages", std::move(stages)},
              {"defects", run.defects},
              {"total_queries", run.total_queries}};
}

struct RunDocument {
  PoolingPlan plan;
  RunResult run;
  Accounting accounting = Accounting::strict;
};

inline RunDocument run_from_json(const Json& j) {
  detail::check_schema(j);
  RunDocument doc;
  doc.plan.population = j.at("N").get<std::size_t>();
  doc.plan.assumed_defects = j.value("d_assumed", std::size_t{1});
  doc.plan.pool_sizes = j.at("pool_sizes").get<std::vector<std::size_t>>();
  doc.plan.validate();
  if (j.at("S").get<std::size_t>() != doc.plan.stages()) throw DomainError("S disagrees with pool_sizes");
  doc.accounting = parse_accounting(j.value("accounting", std::string("strict")));
  for (const auto& js : j.at("stages")) {
    StageTrace st;
    st.pool_size = js.value("pool_size", std::size_t{0});
    st.positive_groups = js.value("positive_groups", std::size_t{0});
    st.deduced_groups = js.value("deduced_groups", std::size_t{0});
    for (const auto& q : js.at("queries")) {
      st.queries.push_back({QueryString::parse(q.at("x").get<std::string>()), q.at("f").get<std::size_t>()});
    }
    doc.run.stages.push_back(std::move(st));
  }
  doc.run.defects = j.at("defects").get<std::vector<std::size_t>>();
  doc.run.total_queries = j.at("total_queries").get<std::size_t>();
  std::size_t counted = 0;
  for (const auto& st : doc.run.stages) counted += st.queries.size();
  if (counted != doc.run.total_queries) throw DomainError("total_queries disagrees with the stage log");
  return doc;
}

// ---------------------------------------------------------------------------
// Netlist
// ---------------------------------------------------------------------------

inline Json netlist_to_json(const Netlist& net) {
  Json gates = Json::array();
  for (const auto& g : net.gates()) {
    gates.push_back({{"id", g.id}, {"kind", std::string(to_string(g.kind))}, {"in", g.inputs}, {"out", g.outputs}});
  }
  return Json{{"schema_version", kSchemaVersion}, {"n", net.inputs()}, {"gates", std::move(gates)}, {"output_bus", net.output_bus()}};
}

inline std::string export_netlist(const Netlist& net) { return netlist_to_json(net).dump(2); }

inline Netlist import_netlist(const Json& j) {
  detail::check_schema(j);
  std::vector<Gate> gates;
  for (const auto& jg : j.at("gates")) {
    gates.push_back(Gate{jg.at("id").get<std::size_t>(), parse_gate_kind(jg.at("kind").get<std::string>()),
                         jg.at("in").get<std::vector<std::size_t>>(), jg.at("out").get<std::vector<std::size_t>>()});
  }
  return Netlist(j.at("n").get<std::size_t>(), std::move(gates), j.at("output_bus").get<std::vector<std::size_t>>());
}

inline Netlist import_netlist(const std::string& text) { return import_netlist(Json::parse(text)); }

// ---------------------------------------------------------------------------
// State and beam dumps
// ---------------------------------------------------------------------------

inline Json state_to_json(const StateVector& psi) {
  Json amps = Json::array();
  for (const auto& a : psi.amplitudes()) amps.push_back(detail::complex_pair(a));
  return Json{{"schema_version", kSchemaVersion}, {"qubits", psi.qubits()}, {"amplitudes", std::move(amps)}};
}

inline StateVector state_from_json(const Json& j) {
  detail::check_schema(j);
  std::vector<Amplitude> amps;
  for (const auto& p : j.at("amplitudes")) amps.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return StateVector(j.at("qubits").get<std::size_t>(), std::move(amps));
}

/// Angles are written in degrees.
inline Json beams_to_json(const OpticalPipeline& pipeline, const std::vector<BeamOutput>& outputs) {
  if (outputs.size() != pipeline.size()) throw DimensionError("beam output count differs from pipeline");
  Json beams = Json::array();
  for (std::size_t b = 0; b < pipeline.size(); ++b) {
    Json elements = Json::array();
    for (const auto& el : pipeline.beams[b]) {
      elements.push_back({{"tag", std::string(to_string(el.kind))},
                          {"eta", radians_to_degrees(el.eta)},
                          {"phi", radians_to_degrees(el.phi)},
                          {"theta", radians_to_degrees(el.theta)}});
    }
    beams.push_back({{"index", b + 1},
                     {"elements", std::move(elements)},
                     {"output", Json::array({detail::complex_pair(outputs[b].state.h), detail::complex_pair(outputs[b].state.v)})},
                     {"attenuation", outputs[b].attenuation}});
  }
  return Json{{"schema_version", kSchemaVersion}, {"beams", std::move(beams)}};
}

}  // namespace bsb
