/**
 * @file pooling.hpp
 * @brief Individual, Dorfman and Li S-stage group testing against a
 *        CountingOracle, plus the closed-form worst-case analytics.
 *
 * Stage i splits the surviving candidates into contiguous groups of k_i
 * positions (the last one may be short), weighs each group once, and keeps
 * the members of groups with a non-zero reading. The final stage has k_S = 1.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsb/bits.hpp"
#include "bsb/errors.hpp"
#include "bsb/spring_balance.hpp"

namespace bsb {

/// How queries inside a positive group are counted.
///
/// `strict` weighs every member of every surviving group. `deduced` never
/// weighs the last subgroup of a positive parent group: its reading is the
/// parent's reading minus the readings of its siblings.
enum class Accounting { strict, deduced };

inline std::string_view to_string(Accounting a) { return a == Accounting::strict ? "strict" : "deduced"; }

inline Accounting parse_accounting(std::string_view text) {
  if (text == "strict") return Accounting::strict;
  if (text == "deduced") return Accounting::deduced;
  throw DomainError("accounting must be 'strict' or 'deduced', got '" + std::string(text) + "'");
}

namespace detail {

inline void check_population(std::size_t n, std::size_t d) {
  if (n == 0) throw DomainError("population size must be at least 1");
  if (d < 1 || d > n) {
    throw DomainError("defect count d=" + std::to_string(d) + " must satisfy 1 <= d <= N=" +
                      std::to_string(n));
  }
}

// Round half up, clamped to >= 1.
inline std::size_t round_positive(double value) {
  double r = std::floor(value + 0.5);
  return r < 1.0 ? 1 : static_cast<std::size_t>(r);
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form analytics
// ---------------------------------------------------------------------------

/// S0 = ln(N/d), rounded half up and clamped to at least one stage.
inline std::size_t optimal_stage_count(std::size_t n, std::size_t d) {
  detail::check_population(n, d);
  return detail::round_positive(std::log(static_cast<double>(n) / static_cast<double>(d)));
}

/// k_i = (N/d)^((S-i)/S), rounded half up and clamped to >= 1; stage S is always 1.
inline std::size_t optimal_pool_size(std::size_t n, std::size_t d, std::size_t stages, std::size_t stage) {
  detail::check_population(n, d);
  if (stages < 1) throw DomainError("stage count must be at least 1");
  if (stage < 1 || stage > stages) {
    throw DomainError("stage index " + std::to_string(stage) + " outside 1.." + std::to_string(stages));
  }
  if (stage == stages) return 1;
  double ratio = static_cast<double>(n) / static_cast<double>(d);
  double exponent = static_cast<double>(stages - stage) / static_cast<double>(stages);
  return detail::round_positive(std::pow(ratio, exponent));
}

/// Worst-case test count t = S d (N/d)^(1/S). S = 1 gives N exactly.
inline double worst_case_tests(std::size_t n, std::size_t d, std::size_t stages) {
  detail::check_population(n, d);
  if (stages < 1) throw DomainError("stage count must be at least 1");
  if (stages == 1) return static_cast<double>(n);
  double ratio = static_cast<double>(n) / static_cast<double>(d);
  return static_cast<double>(stages) * static_cast<double>(d) *
         std::pow(ratio, 1.0 / static_cast<double>(stages));
}

/// Worst-case test count at the optimal stage count: t = e d ln(N/d). Requires d < N.
inline double worst_case_tests_optimal(std::size_t n, std::size_t d) {
  detail::check_population(n, d);
  if (d == n) throw DomainError("d = N leaves nothing to pool; use individual testing");
  return std::numbers::e * static_cast<double>(d) *
         std::log(static_cast<double>(n) / static_cast<double>(d));
}

struct PrevalenceReport {
  double prevalence = 0.0;
  /// Two-stage pooling cannot beat N tests in the worst case.
  bool futile_s2 = false;
  /// Pooling at the optimal stage count cannot beat N tests in the worst case.
  bool futile_optimal = false;
  double s2_threshold = 0.25;
  double optimal_threshold = 1.0 / std::numbers::e;
  /// -p ln p, compared against 1/e.
  double entropy_term = 0.0;
  /// 2 sqrt(p), the two-stage worst case as a fraction of N.
  double s2_cost_fraction = 0.0;
};

/// Futility of pooling for a real prevalence p in (0, 1].
///
/// The optimal-stage test is -p ln p >= 1/e, evaluated with a 1e-9 relative
/// tolerance. For p > 1/e the optimal stage count ln(1/p) is below one stage,
/// so pooling collapses to individual testing and is flagged futile as well.
inline PrevalenceReport prevalence_report(double p) {
  if (!(p > 0.0) || p > 1.0) throw DomainError("prevalence must lie in (0, 1]");
  PrevalenceReport r;
  r.prevalence = p;
  r.entropy_term = -p * std::log(p);
  r.s2_cost_fraction = 2.0 * std::sqrt(p);
  r.futile_s2 = p >= r.s2_threshold;
  constexpr double rel_tol = 1e-9;
  r.futile_optimal = r.entropy_term >= r.optimal_threshold * (1.0 - rel_tol) || p >= r.optimal_threshold;
  return r;
}

inline PrevalenceReport prevalence_report(std::size_t n, std::size_t d) {
  detail::check_population(n, d);
  return prevalence_report(static_cast<double>(d) / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

struct PoolingPlan {
  std::size_t population = 0;
  std::size_t assumed_defects = 1;
  /// k_1..k_S, non-increasing, ending in 1.
  std::vector<std::size_t> pool_sizes;

  std::size_t stages() const noexcept { return pool_sizes.size(); }

  /// g_i = ceil(N / k_i); a short last group still counts as a full group.
  std::vector<std::size_t> groups_per_stage() const {
    std::vector<std::size_t> g;
    g.reserve(pool_sizes.size());
    for (auto k : pool_sizes) g.push_back(detail::ceil_div(population, k));
    return g;
  }

  void validate() const {
    if (population == 0) throw DomainError("plan population must be at least 1");
    if (pool_sizes.empty()) throw DomainError("plan needs at least one stage");
    for (std::size_t i = 0; i < pool_sizes.size(); ++i) {
      if (pool_sizes[i] == 0) throw DomainError("pool sizes must be positive");
      if (i > 0 && pool_sizes[i] > pool_sizes[i - 1]) {
        throw DomainError("pool sizes must be non-increasing");
      }
    }
    if (pool_sizes.back() != 1) throw DomainError("last stage must test individually (k_S = 1)");
  }

  /// Plan with k_i from the closed form for the given stage count.
  static PoolingPlan optimal(std::size_t n, std::size_t d, std::size_t stages) {
    detail::check_population(n, d);
    if (stages < 1) throw DomainError("stage count must be at least 1");
    PoolingPlan plan{n, d, {}};
    for (std::size_t i = 1; i <= stages; ++i) plan.pool_sizes.push_back(optimal_pool_size(n, d, stages, i));
    plan.validate();
    return plan;
  }

  /// Plan at the optimal stage count S0.
  static PoolingPlan optimal(std::size_t n, std::size_t d) { return optimal(n, d, optimal_stage_count(n, d)); }

  /// Explicit pool sizes for the pooled stages; a final k = 1 stage is appended if missing.
  static PoolingPlan with_pool_sizes(std::size_t n, std::size_t d, std::vector<std::size_t> sizes) {
    if (sizes.empty() || sizes.back() != 1) sizes.push_back(1);
    PoolingPlan plan{n, d, std::move(sizes)};
    plan.validate();
    return plan;
  }

  static PoolingPlan individual(std::size_t n) { return PoolingPlan{n, 1, {1}}; }
};

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct QueryRecord {
  QueryString query;
  std::size_t reading;
};

struct StageTrace {
  std::size_t pool_size = 0;
  std::vector<QueryRecord> queries;
  /// m_i: groups with a non-zero reading (weighed or deduced).
  std::size_t positive_groups = 0;
  /// Groups whose reading was deduced instead of weighed (deduced accounting).
  std::size_t deduced_groups = 0;
};

struct RunResult {
  std::vector<std::size_t> defects;  // ascending, 1-based
  std::size_t total_queries = 0;
  std::vector<StageTrace> stages;

  std::vector<std::size_t> per_stage_queries() const {
    std::vector<std::size_t> out;
    for (const auto& s : stages) out.push_back(s.queries.size());
    return out;
  }

  std::vector<std::size_t> per_stage_positive_groups() const {
    std::vector<std::size_t> out;
    for (const auto& s : stages) out.push_back(s.positive_groups);
    return out;
  }

  std::vector<QueryRecord> query_log() const {
    std::vector<QueryRecord> out;
    for (const auto& s : stages) out.insert(out.end(), s.queries.begin(), s.queries.end());
    return out;
  }
};

/// Weighs every position on its own: exactly N queries.
inline RunResult run_individual(CountingOracle& oracle) {
  const std::size_t n = oracle.size();
  RunResult result;
  StageTrace stage;
  stage.pool_size = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    QueryString x(n);
    x.set(i, true);
    std::size_t f = oracle.weigh(x);
    stage.queries.push_back({x, f});
    if (f > 0) {
      result.defects.push_back(i);
      ++stage.positive_groups;
    }
  }
  result.total_queries = stage.queries.size();
  result.stages.push_back(std::move(stage));
  return result;
}

namespace detail {

struct Group {
  std::vector<std::size_t> members;
  std::optional<std::size_t> reading;
};

inline QueryString group_query(std::size_t n, const std::vector<std::size_t>& members) {
  return QueryString::from_positions(n, members);
}

inline std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& items, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < items.size(); i += k) {
    out.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(i),
                     items.begin() + static_cast<std::ptrdiff_t>(std::min(items.size(), i + k)));
  }
  return out;
}

}  // namespace detail

/// Li's S-stage procedure. Never consumes the plan's assumed defect count;
/// only spring-balance readings drive the adaptation.
inline RunResult run_li(CountingOracle& oracle, const PoolingPlan& plan,
                        Accounting accounting = Accounting::strict) {
  plan.validate();
  const std::size_t n = oracle.size();
  if (plan.population != n) {
    throw DimensionError("plan population " + std::to_string(plan.population) + " != secret length " +
                         std::to_string(n));
  }

  RunResult result;
  std::vector<detail::Group> parents;
  {
    detail::Group all;
    for (std::size_t i = 1; i <= n; ++i) all.members.push_back(i);
    parents.push_back(std::move(all));
  }
  bool resolved = false;

  for (std::size_t k : plan.pool_sizes) {
    StageTrace stage;
    stage.pool_size = k;
    if (resolved || parents.empty()) {
      result.stages.push_back(std::move(stage));
      continue;
    }

    // Each entry: groups carved out of one parent. Strict accounting regroups
    // all survivors together, so it always has a single parent of unknown reading.
    std::vector<detail::Group> families;
    if (accounting == Accounting::strict) {
      detail::Group merged;
      for (const auto& p : parents) merged.members.insert(merged.members.end(), p.members.begin(), p.members.end());
      std::sort(merged.members.begin(), merged.members.end());
      families.push_back(std::move(merged));
    } else {
      families = std::move(parents);
    }

    std::vector<detail::Group> next;
    for (const auto& family : families) {
      auto pieces = detail::chunk(family.members, k);
      std::size_t sibling_sum = 0;
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        detail::Group g{std::move(pieces[j]), std::nullopt};
        const bool last = j + 1 == pieces.size();
        if (last && family.reading) {
          g.reading = *family.reading - sibling_sum;
          ++stage.deduced_groups;
        } else {
          QueryString x = detail::group_query(n, g.members);
          g.reading = oracle.weigh(x);
          stage.queries.push_back({std::move(x), *g.reading});
        }
        sibling_sum += *g.reading;
        if (*g.reading > 0) {
          ++stage.positive_groups;
          next.push_back(std::move(g));
        }
      }
    }

    if (k == 1) {
      for (const auto& g : next) result.defects.push_back(g.members.front());
      std::sort(result.defects.begin(), result.defects.end());
      resolved = true;
    }
    parents = std::move(next);
    result.stages.push_back(std::move(stage));
  }

  for (const auto& s : result.stages) result.total_queries += s.queries.size();
  return result;
}

// ---------------------------------------------------------------------------
// Worst case over defect placements
// ---------------------------------------------------------------------------

/// Secret with d defects spread round-robin over the stage-1 groups of size k1,
/// filling each group from its last member backwards.
inline SecretString even_spread_secret(std::size_t n, std::size_t d, std::size_t k1) {
  if (n == 0 || k1 == 0) throw DomainError("population and pool size must be positive");
  if (d > n) throw DomainError("more defects than positions");
  const std::size_t groups = detail::ceil_div(n, k1);
  SecretString s(n);
  std::size_t placed = 0;
  for (std::size_t round = 0; placed < d; ++round) {
    for (std::size_t g = 0; g < groups && placed < d; ++g) {
      std::size_t first = g * k1 + 1;
      std::size_t last = std::min(n, (g + 1) * k1);
      if (last - first + 1 <= round) continue;
      s.set(last - round, true);
      ++placed;
    }
  }
  return s;
}

/// C(n, r) saturated at `cap + 1`.
inline std::uint64_t binomial_capped(std::size_t n, std::size_t r, std::uint64_t cap) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c = c * (n - r + i) / i;
    if (c > cap) return cap + 1;
  }
  return c;
}

inline constexpr std::uint64_t kExhaustivePlacementLimit = 100'000;

/// Calls fn(secret) for every placement of d defects among n positions.
template <class Fn>
void for_each_placement(std::size_t n, std::size_t d, Fn&& fn) {
  std::vector<std::uint8_t> selector(n, 0);
  std::fill(selector.end() - static_cast<std::ptrdiff_t>(d), selector.end(), std::uint8_t{1});
  do {
    fn(SecretString(selector));
  } while (std::next_permutation(selector.begin(), selector.end()));
}

/// Maximum run_li query count over defect placements: exhaustive when
/// C(N, d) <= 1e5, otherwise the even-spread placement.
inline std::size_t adversarial_worst_case(const PoolingPlan& plan, std::size_t d,
                                          Accounting accounting = Accounting::strict) {
  plan.validate();
  if (d > plan.population) throw DomainError("more defects than positions");
  auto cost = [&](const SecretString& s) {
    CountingOracle oracle(s);
    return run_li(oracle, plan, accounting).total_queries;
  };
  if (binomial_capped(plan.population, d, kExhaustivePlacementLimit) <= kExhaustivePlacementLimit) {
    std::size_t worst = 0;
    for_each_placement(plan.population, d, [&](const SecretString& s) { worst = std::max(worst, cost(s)); });
    return worst;
  }
  return cost(even_spread_secret(plan.population, d, plan.pool_sizes.front()));
}

}  // namespace bsb
