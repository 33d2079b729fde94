/**
 * @file commands.hpp
 * @brief Command implementations behind the `bsb` CLI. Each returns a JSON
 *        document and has a plain-text rendering.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bsb/bits.hpp"
#include "bsb/circuit.hpp"
#include "bsb/errors.hpp"
#include "bsb/jones.hpp"
#include "bsb/json_io.hpp"
#include "bsb/pooling.hpp"
#include "bsb/spring_balance.hpp"
#include "bsb/statevector.hpp"

namespace bsb {

/// Secret of length n with exactly d defects, fully determined by `seed`.
inline SecretString seeded_random_secret(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0) throw DomainError("secret length must be at least 1");
  if (d > n) throw DomainError("defect count exceeds secret length");
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{1});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first d slots become the defects.
  for (std::size_t i = 0; i < d; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(positions[i], positions[pick(rng)]);
  }
  return SecretString::from_positions(n, std::span<const std::size_t>(positions.data(), d));
}

/// Plan built from an assumed defect count; explicit pool sizes win over stages.
inline PoolingPlan make_plan(std::size_t n, std::size_t d_assumed, std::optional<std::size_t> stages,
                             const std::vector<std::size_t>& pool_sizes) {
  if (!pool_sizes.empty()) {
    auto plan = PoolingPlan::with_pool_sizes(n, d_assumed, pool_sizes);
    if (stages && *stages != plan.stages()) {
      throw DomainError("--stages " + std::to_string(*stages) + " disagrees with " +
                        std::to_string(plan.stages()) + " stages implied by --pool-size");
    }
    return plan;
  }
  return stages ? PoolingPlan::optimal(n, d_assumed, *stages) : PoolingPlan::optimal(n, d_assumed);
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

inline Json prevalence_to_json(const PrevalenceReport& r) {
  return Json{{"p", r.prevalence},
              {"futile_S2", r.futile_s2},
              {"futile_optimal", r.futile_optimal},
              {"s2_threshold", r.s2_threshold},
              {"optimal_threshold", r.optimal_threshold},
              {"neg_p_ln_p", r.entropy_term},
              {"s2_cost_fraction", r.s2_cost_fraction}};
}

inline Json cmd_plan(std::size_t n, std::size_t d, std::optional<std::size_t> stages = std::nullopt,
                     const std::vector<std::size_t>& pool_sizes = {}) {
  detail::check_population(n, d);
  const PoolingPlan plan = make_plan(n, d, stages, pool_sizes);
  const double t_plan = worst_case_tests(n, d, plan.stages());
  Json out{{"schema_version", kSchemaVersion},
           {"N", n},
           {"d", d},
           {"S0", optimal_stage_count(n, d)},
           {"plan", plan_to_json(plan)},
           {"worst_case_tests", t_plan},
           {"worst_case_tests_budget", static_cast<std::size_t>(std::ceil(t_plan - 1e-9))},
           {"prevalence", prevalence_to_json(prevalence_report(n, d))}};
  if (d < n) {
    const double t_opt = worst_case_tests_optimal(n, d);
    out["worst_case_tests_optimal"] = t_opt;
    out["worst_case_tests_optimal_rounded"] = static_cast<std::size_t>(std::floor(t_opt + 0.5));
  } else {
    out["worst_case_tests_optimal"] = nullptr;
    out["worst_case_tests_optimal_rounded"] = nullptr;
  }
  return out;
}

inline std::string render_plan(const Json& j) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "N = " << j["N"] << ", d = " << j["d"] << ", p = " << j["prevalence"]["p"].get<double>() << "\n";
  os << "optimal stage count S0 = " << j["S0"] << "\n";
  os << "stages S = " << j["plan"]["S"] << ", pool sizes k = " << j["plan"]["pool_sizes"].dump()
     << ", groups g = " << j["plan"]["groups_per_stage"].dump() << "\n";
  os << "worst-case tests for this S: " << j["worst_case_tests"].get<double>() << "\n";
  if (!j["worst_case_tests_optimal"].is_null()) {
    os << "worst-case tests at optimal S: " << j["worst_case_tests_optimal"].get<double>() << " (~"
       << j["worst_case_tests_optimal_rounded"] << ")\n";
  } else {
    os << "worst-case tests at optimal S: n/a (d = N)\n";
  }
  os << "two-stage pooling futile: " << (j["prevalence"]["futile_S2"].get<bool>() ? "yes" : "no") << "\n";
  os << "optimal-stage pooling futile: " << (j["prevalence"]["futile_optimal"].get<bool>() ? "yes" : "no") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// pool
// ---------------------------------------------------------------------------

struct PoolOutcome {
  PoolingPlan plan;
  RunResult run;
  Accounting accounting;
  bool correct = false;
};

inline PoolOutcome cmd_pool(const SecretString& secret, std::optional<std::size_t> stages,
                            const std::vector<std::size_t>& pool_sizes, Accounting accounting,
                            std::optional<std::size_t> d_assumed = std::nullopt) {
  const std::size_t d = d_assumed.value_or(std::max<std::size_t>(1, secret.weight()));
  PoolingPlan plan = make_plan(secret.size(), std::min(d, secret.size()), stages, pool_sizes);
  CountingOracle oracle(secret);
  RunResult run = run_li(oracle, plan, accounting);
  const bool ok = run.defects == secret.ones() && run.total_queries == oracle.query_count();
  return {std::move(plan), std::move(run), accounting, ok};
}

inline std::string render_pool(const PoolOutcome& o) {
  std::ostringstream os;
  os << "plan: N = " << o.plan.population << ", S = " << o.plan.stages() << ", k = ";
  for (std::size_t i = 0; i < o.plan.pool_sizes.size(); ++i) os << (i ? "," : "") << o.plan.pool_sizes[i];
  os << ", accounting = " << to_string(o.accounting) << "\n";
  for (std::size_t i = 0; i < o.run.stages.size(); ++i) {
    const auto& st = o.run.stages[i];
    os << "stage " << i + 1 << " (k = " << st.pool_size << "): " << st.queries.size() << " queries, "
       << st.positive_groups << " positive";
    if (st.deduced_groups) os << ", " << st.deduced_groups << " deduced";
    os << "\n";
    for (const auto& q : st.queries) os << "  f(" << q.query.str() << ") = " << q.reading << "\n";
  }
  os << "defects: {";
  for (std::size_t i = 0; i < o.run.defects.size(); ++i) os << (i ? ", " : "") << o.run.defects[i];
  os << "}\ntotal queries: " << o.run.total_queries << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// bv / optics
// ---------------------------------------------------------------------------

inline Json bv_to_json(const SecretString& secret, OracleConstruction construction, const BVResult& r) {
  return Json{{"schema_version", kSchemaVersion},
              {"secret", secret.str()},
              {"oracle", to_string(construction)},
              {"recovered", r.recovered.str()},
              {"oracle_calls", r.oracle_calls},
              {"fidelity", r.probability},
              {"success", r.recovered == secret && r.oracle_calls == 1}};
}

struct OpticsOutcome {
  OpticalPipeline pipeline;
  std::vector<BeamOutput> outputs;
  SecretString recovered;
};

inline OpticsOutcome cmd_optics(const SecretString& secret) {
  OpticalPipeline p = build_optical_bv(secret);
  auto outputs = propagate(p);
  SecretString recovered = readout(std::span<const BeamOutput>(outputs));
  return {std::move(p), std::move(outputs), std::move(recovered)};
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct ComparisonReport {
  std::size_t n = 0;
  std::size_t d = 0;
  double p = 0.0;
  PoolingPlan plan;
  std::size_t queries_individual = 0;
  std::size_t queries_li_strict = 0;
  std::size_t queries_li_deduced = 0;
  std::size_t worst_li_strict = 0;
  std::size_t worst_li_deduced = 0;
  std::size_t queries_bv = 0;
  std::string bv_backend;
  bool bv_recovered = false;
  double predicted_worst_case = 0.0;
  std::optional<double> predicted_worst_case_optimal;
  PrevalenceReport prevalence;
};

/// Runs individual testing, Li (both accountings) and BV on the same secret.
/// BV uses the state-vector simulator up to kMaxQubits and the optical
/// pipeline beyond that.
inline ComparisonReport cmd_compare(const SecretString& secret, std::optional<std::size_t> stages = std::nullopt,
                                    const std::vector<std::size_t>& pool_sizes = {}) {
  ComparisonReport r;
  r.n = secret.size();
  r.d = secret.weight();
  r.p = static_cast<double>(r.d) / static_cast<double>(r.n);
  const std::size_t d_plan = std::max<std::size_t>(1, r.d);
  r.plan = make_plan(r.n, d_plan, stages, pool_sizes);

  {
    CountingOracle oracle(secret);
    auto run = run_individual(oracle);
    if (run.defects != secret.ones()) throw std::logic_error("individual testing missed a defect");
    r.queries_individual = run.total_queries;
  }
  for (auto acc : {Accounting::strict, Accounting::deduced}) {
    CountingOracle oracle(secret);
    auto run = run_li(oracle, r.plan, acc);
    if (run.defects != secret.ones()) throw std::logic_error("pooled testing missed a defect");
    (acc == Accounting::strict ? r.queries_li_strict : r.queries_li_deduced) = run.total_queries;
  }
  r.worst_li_strict = adversarial_worst_case(r.plan, r.d, Accounting::strict);
  r.worst_li_deduced = adversarial_worst_case(r.plan, r.d, Accounting::deduced);

  if (r.n <= kMaxQubits) {
    auto bv = run_bv(secret, OracleConstruction::z_only);
    r.queries_bv = bv.oracle_calls;
    r.bv_recovered = bv.recovered == secret;
    r.bv_backend = "statevector";
  } else {
    auto optics = cmd_optics(secret);
    r.queries_bv = 1;  // one pass of light through the oracle plates
    r.bv_recovered = optics.recovered == secret;
    r.bv_backend = "optics";
  }

  r.predicted_worst_case = worst_case_tests(r.n, d_plan, r.plan.stages());
  if (d_plan < r.n) r.predicted_worst_case_optimal = worst_case_tests_optimal(r.n, d_plan);
  r.prevalence = prevalence_report(r.n, d_plan);
  return r;
}

inline Json comparison_to_json(const ComparisonReport& r) {
  Json j{{"schema_version", kSchemaVersion},
         {"N", r.n},
         {"d", r.d},
         {"p", r.p},
         {"plan", plan_to_json(r.plan)},
         {"queries_individual", r.queries_individual},
         {"queries_li", {{"strict", r.queries_li_strict}, {"deduced", r.queries_li_deduced}}},
         {"worst_case_li", {{"strict", r.worst_li_strict}, {"deduced", r.worst_li_deduced}}},
         {"queries_bv", r.queries_bv},
         {"bv_backend", r.bv_backend},
         {"bv_recovered", r.bv_recovered},
         {"predicted_worst_case", r.predicted_worst_case},
         {"prevalence", prevalence_to_json(r.prevalence)}};
  j["predicted_worst_case_optimal"] = r.predicted_worst_case_optimal ? Json(*r.predicted_worst_case_optimal) : Json(nullptr);
  return j;
}

inline std::string render_comparison(const ComparisonReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "N = " << r.n << ", d = " << r.d << ", p = " << r.p << "\n";
  os << "plan: S = " << r.plan.stages() << ", k = ";
  for (std::size_t i = 0; i < r.plan.pool_sizes.size(); ++i) os << (i ? "," : "") << r.plan.pool_sizes[i];
  os << "\n\n";
  os << std::left << std::setw(34) << "strategy" << std::setw(10) << "queries" << "worst case\n";
  os << std::setw(34) << "individual" << std::setw(10) << r.queries_individual << r.n << "\n";
  os << std::setw(34) << "Li (strict)" << std::setw(10) << r.queries_li_strict << r.worst_li_strict << "\n";
  os << std::setw(34) << "Li (deduced accounting)" << std::setw(10) << r.queries_li_deduced << r.worst_li_deduced << "\n";
  os << std::setw(34) << ("Bernstein-Vazirani (" + r.bv_backend + ")") << std::setw(10) << r.queries_bv << 1 << "\n\n";
  os << "predicted worst case for S = " << r.plan.stages() << ": " << r.predicted_worst_case << "\n";
  if (r.predicted_worst_case_optimal) os << "predicted worst case at optimal S: " << *r.predicted_worst_case_optimal << "\n";
  os << "pooling futile (S=2 / optimal S): " << (r.prevalence.futile_s2 ? "yes" : "no") << " / "
     << (r.prevalence.futile_optimal ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace bsb
