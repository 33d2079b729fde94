// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bsb/bsb.hpp"

namespace {

using namespace bsb;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  std::function<void(Outcome&)> body;
};

bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

std::uint64_t low_mask(std::size_t n) { return (std::uint64_t{1} << n) - 1; }

std::size_t li_total(const SecretString& s, const PoolingPlan& plan, Accounting acc) {
  CountingOracle oracle(s);
  return run_li(oracle, plan, acc).total_queries;
}

void spring_balance_example(Outcome& o) {
  auto s = SecretString::parse("0011");
  auto a = spring_balance(s, QueryString::parse("1011"));
  auto b = spring_balance(s, QueryString::parse("1100"));
  o.check(a == 2, "f(1011) = " + std::to_string(a));
  o.check(b == 0, "f(1100) = " + std::to_string(b));
}

void li_twelve(Outcome& o) {
  auto t0 = Clock::now();
  CountingOracle oracle(SecretString::parse("100000000000"));
  auto plan = PoolingPlan::with_pool_sizes(12, 1, {3, 1});
  auto run = run_li(oracle, plan, Accounting::strict);
  double dt = seconds_since(t0);
  o.check(run.per_stage_queries() == std::vector<std::size_t>{4, 3}, "stage counts differ from (4,3)");
  o.check(run.total_queries == 7, "total " + std::to_string(run.total_queries));
  o.check(run.defects == std::vector<std::size_t>{12}, "defect set differs from {12}");
  o.check(dt < 1e-3, "took " + std::to_string(dt) + " s");
  o.detail << (o.pass ? "stages (4,3), total 7, defects {12}" : "");
}

void li_eighteen(Outcome& o) {
  auto t0 = Clock::now();
  auto plan = PoolingPlan::with_pool_sizes(18, 2, {6, 1});
  auto spread = even_spread_secret(18, 2, 6);
  auto spread_deduced = li_total(spread, plan, Accounting::deduced);
  auto same_pool = SecretString::from_positions(18, std::vector<std::size_t>{5, 6});
  auto same_strict = li_total(same_pool, plan, Accounting::strict);
  double dt = seconds_since(t0);
  o.check(spread_deduced == 13, "even spread (deduced) = " + std::to_string(spread_deduced));
  o.check(same_strict == 9, "same pool (strict) = " + std::to_string(same_strict));
  o.check(dt < 1e-3, "took " + std::to_string(dt) + " s");
  if (o.pass) {
    o.detail << "even spread 13 (deduced accounting), same pool 9 (strict accounting; deduced accounting gives "
             << li_total(same_pool, plan, Accounting::deduced) << ")";
  }
}

void formula_pins(Outcome& o) {
  constexpr double rel = 1e-9;
  o.check(optimal_pool_size(12, 1, 2, 1) == 3, "k1(12,1,2) = " + std::to_string(optimal_pool_size(12, 1, 2, 1)));
  o.check(optimal_stage_count(12, 1) == 2, "S0(12,1) = " + std::to_string(optimal_stage_count(12, 1)));
  double t = worst_case_tests_optimal(12, 1);
  o.check(t >= 6.7 && t <= 7.0, "t_opt(12,1) = " + std::to_string(t));
  o.check(std::lround(t) == 7, "t_opt(12,1) does not round to 7");
  o.check(rel_close(t, std::numbers::e * std::log(12.0), rel), "t_opt(12,1) off the closed form");

  // Two-stage boundary at p = 1/4, evaluated just either side.
  o.check(prevalence_report(0.25).futile_s2, "p = 0.25 not futile for S = 2");
  o.check(!prevalence_report(0.25 * (1 - 1e-6)).futile_s2, "p just below 0.25 futile for S = 2");
  o.check(prevalence_report(0.25 * (1 + 1e-6)).futile_s2, "p just above 0.25 not futile for S = 2");
  o.check(rel_close(worst_case_tests(100, 25, 2), 100.0, rel), "2 d sqrt(N/d) != N at p = 0.25");

  // Optimal-stage boundary: the p with -p ln p = 1/e is p = 1/e itself.
  const double pstar = 1.0 / std::numbers::e;
  auto at = prevalence_report(pstar);
  o.check(rel_close(at.entropy_term, at.optimal_threshold, rel), "-p ln p at 1/e differs from 1/e");
  o.check(at.futile_optimal, "p = 1/e not futile at optimal S");
  o.check(!prevalence_report(pstar * 0.9).futile_optimal, "p = 0.9/e futile at optimal S");
  o.check(!prevalence_report(1.0 / 12).futile_optimal && !prevalence_report(1.0 / 12).futile_s2, "p = 1/12 flagged futile");
  if (o.pass) o.detail << "k1 = 3, S0 = 2, t_opt = " << t << " -> 7";
}

void circuit_pin(Outcome& o) {
  auto net = build_bsb_circuit(12);
  auto c = component_counts(net);
  o.check(c.and_gates == 12, "AND = " + std::to_string(c.and_gates));
  o.check(c.full_adders == 8, "FA = " + std::to_string(c.full_adders));
  o.check(c.half_adders == 4, "HA = " + std::to_string(c.half_adders) + " (expected 4)");

  auto t0 = Clock::now();
  std::size_t bad = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    auto small = build_bsb_circuit(n);
    for (std::uint64_t sm = 0; sm <= low_mask(n); ++sm)
      for (std::uint64_t xm = 0; xm <= low_mask(n); ++xm) {
        auto s = SecretString::from_mask(sm, n);
        auto x = QueryString::from_mask(xm, n);
        bad += simulate(small, s, x) != spring_balance(s, x);
      }
  }
  double dt_small = seconds_since(t0);
  o.check(bad == 0, std::to_string(bad) + " mismatches for N <= 8");
  o.check(dt_small < 5.0, "N <= 8 sweep took " + std::to_string(dt_small) + " s");

  t0 = Clock::now();
  std::mt19937_64 rng(12);
  bad = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = SecretString::from_mask(rng() & low_mask(12), 12);
    for (std::uint64_t xm = 0; xm <= low_mask(12); ++xm) {
      auto x = QueryString::from_mask(xm, 12);
      bad += simulate(net, s, x) != spring_balance(s, x);
    }
  }
  double dt_twelve = seconds_since(t0);
  o.check(bad == 0, std::to_string(bad) + " mismatches for N = 12");
  o.check(dt_twelve < 30.0, "N = 12 sweep took " + std::to_string(dt_twelve) + " s");
  o.detail << " | functional equivalence " << (bad == 0 ? "holds" : "broken") << " (N<=8 in " << dt_small
           << " s, N=12 in " << dt_twelve << " s)";
  if (c.half_adders != 4) {
    o.detail << " | a 12-bit 3:2 compressor tree must use 8 FA (each removes one of the 12 wires down to a"
                " 4-bit bus) and then needs 2 or 3 HA; 8 FA with 4 HA is not realizable";
  }
}

void bv_determinism(Outcome& o) {
  auto t0 = Clock::now();
  std::size_t bad = 0;
  double worst = 1.0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::uint64_t m = 0; m <= low_mask(n); ++m) {
      auto s = SecretString::from_mask(m, n);
      PhaseOracle oracle({s, OracleConstruction::z_only});
      auto r = run_bv(oracle);
      bad += r.recovered != s || oracle.calls() != 1 || r.probability < 1 - 1e-10;
      worst = std::min(worst, r.probability);
    }
  double dt_small = seconds_since(t0);
  o.check(bad == 0, std::to_string(bad) + " failures for N <= 8");
  o.check(dt_small < 10.0, "N <= 8 took " + std::to_string(dt_small) + " s");

  t0 = Clock::now();
  std::mt19937_64 rng(1212);
  bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto s = SecretString::from_mask(rng() & low_mask(12), 12);
    PhaseOracle oracle({s, OracleConstruction::cnot_ancilla});
    auto r = run_bv(oracle);
    bad += r.recovered != s || oracle.calls() != 1 || r.probability < 1 - 1e-10;
    worst = std::min(worst, r.probability);
  }
  double dt_twelve = seconds_since(t0);
  o.check(bad == 0, std::to_string(bad) + " failures for N = 12");
  o.check(dt_twelve < 30.0, "N = 12 took " + std::to_string(dt_twelve) + " s");
  if (o.pass) o.detail << "one call each, min probability " << worst;
}

void oracle_equivalence(Outcome& o) {
  double worst = 0.0;
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector minus(1, {r, -r});
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::uint64_t m = 0; m <= low_mask(n); ++m) {
      auto s = SecretString::from_mask(m, n);
      auto z = apply_oracle(prepare_query_register(n, false), {s, OracleConstruction::z_only});
      auto c = apply_oracle(prepare_query_register(n, true), {s, OracleConstruction::cnot_ancilla});
      auto expected = tensor(z, minus);
      for (std::uint64_t i = 0; i < c.dimension(); ++i) worst = std::max(worst, std::abs(c[i] - expected[i]));
    }
  o.check(worst <= 1e-10, "max amplitude difference " + std::to_string(worst));

  // Every pair of 16-bit strings; shorter lengths are the zero-padded subsets.
  std::uint64_t mismatches = 0;
  for (std::uint64_t s = 0; s < (1u << 16); ++s)
    for (std::uint64_t x = 0; x < (1u << 16); ++x) mismatches += spring_balance_phase(s, x) != parity_phase(s, x);
  o.check(mismatches == 0, std::to_string(mismatches) + " phase mismatches");
  if (o.pass) o.detail << "max amplitude difference " << worst << ", 2^32 phase pairs agree";
}

void optics_pins(Outcome& o) {
  constexpr double pi = std::numbers::pi;
  const double r = 1.0 / std::sqrt(2.0);
  const JonesMatrix hadamard{r, r, r, -r};
  const JonesMatrix pauli_z{1.0, 0.0, 0.0, -1.0};
  o.check(equal_up_to_global_phase(bf_matrix(pi, 0.0, degrees_to_radians(22.5)), hadamard, 1e-12),
          "BF(pi,0,22.5) is not H up to phase");
  o.check(equal_up_to_global_phase(bf_matrix(pi, 0.0, 0.0), pauli_z, 1e-12), "BF(pi,0,0) is not Z up to phase");

  auto read = cmd_optics(SecretString::parse("10110")).recovered.str();
  o.check(read == "10110", "pipeline read " + read);

  std::size_t bad = 0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::uint64_t m = 0; m <= low_mask(n); ++m) {
      auto s = SecretString::from_mask(m, n);
      auto out = propagate(build_optical_bv(s));
      for (std::size_t i = 1; i <= n; ++i) {
        auto gate = hadamard * ((s.at(i) ? pauli_z : JonesMatrix::identity()) * (hadamard * JonesVector::horizontal()));
        bad += !equal_up_to_global_phase(out[i - 1].state, gate, 1e-10);
      }
    }
  o.check(bad == 0, std::to_string(bad) + " beams differ from H Z^s H |0>");

  bad = 0;
  for (int k = 0; k < 36; ++k) {
    double theta = pi * k / 36;
    auto q = bf_matrix(pi / 2, 0.0, theta);
    bad += !equal_up_to_global_phase(q * q, bf_matrix(pi, 0.0, theta), 1e-10);
  }
  o.check(bad == 0, std::to_string(bad) + " angles where QWP^2 != HWP");
  if (o.pass) o.detail << "plates match H and Z, 10110 read back, N <= 8 beams agree, QWP^2 = HWP";
}

void property_suite(Outcome& o) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  double worst_norm = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 10;
    std::vector<Amplitude> amps(std::size_t{1} << n);
    double total = 0.0;
    for (auto& a : amps) {
      a = {g(rng), g(rng)};
      total += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(total);
    StateVector psi(n, std::move(amps));
    for (int step = 0; step < 10; ++step) {
      std::size_t q = rng() % n;
      switch (rng() % 4) {
        case 0: psi.apply_h(q); break;
        case 1: psi.apply_z(q); break;
        case 2: psi.apply_x(q); break;
        default:
          if (n > 1) psi.apply_cnot(q, (q + 1) % n);
          break;
      }
    }
    auto s = SecretString::from_mask(rng() & low_mask(n), n);
    psi = apply_oracle(psi, {s, OracleConstruction::z_only});
    worst_norm = std::max(worst_norm, std::abs(psi.norm() - 1.0));
  }
  o.check(worst_norm <= 1e-10, "norm drift " + std::to_string(worst_norm));

  for (std::size_t n = 1; n <= 64; ++n) {
    try {
      auto net = build_bsb_circuit(n);
      Netlist copy(net.inputs(), net.gates(), net.output_bus());  // revalidates, including acyclicity
      if (copy.evaluation_order().size() != net.gates().size()) o.check(false, "incomplete order at N = " + std::to_string(n));
    } catch (const NetlistError& e) {
      o.check(false, e.what());
    }
  }

  double lp_worst = 0.0;
  for (int k = 0; k < 360; ++k) {
    auto p = lp_matrix(std::numbers::pi * k / 360);
    lp_worst = std::max(lp_worst, (p * p).max_abs_diff(p));
  }
  o.check(lp_worst <= 1e-12, "LP idempotence error " + std::to_string(lp_worst));

  std::size_t runs = 0, wrong = 0;
  for (std::size_t n = 1; n <= 24; ++n)
    for (std::size_t d = 0; d <= n; ++d) {
      if (binomial_capped(n, d, kExhaustivePlacementLimit) > kExhaustivePlacementLimit) continue;
      auto plan = PoolingPlan::optimal(n, std::max<std::size_t>(1, d));
      for_each_placement(n, d, [&](const SecretString& s) {
        for (auto acc : {Accounting::strict, Accounting::deduced}) {
          CountingOracle oracle(s);
          auto run = run_li(oracle, plan, acc);
          wrong += run.defects != s.ones() || run.total_queries != oracle.query_count();
          ++runs;
        }
      });
    }
  o.check(wrong == 0, std::to_string(wrong) + " of " + std::to_string(runs) + " pooled runs wrong");
  if (o.pass) {
    o.detail << "norm drift " << worst_norm << ", netlists N<=64 acyclic, LP idempotent, " << runs
             << " pooled runs correct";
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "spring-balance worked example", spring_balance_example},
      {2, "Li N=12 trace", li_twelve},
      {3, "Li N=18 even spread / same pool", li_eighteen},
      {4, "formula pins and futility boundaries", formula_pins},
      {5, "circuit component pin and equivalence", circuit_pin},
      {6, "BV determinism", bv_determinism},
      {7, "oracle equivalence and phase identity", oracle_equivalence},
      {8, "optics pins", optics_pins},
      {9, "property suite", property_suite},
  };
  int failures = 0;
  auto start = Clock::now();
  for (const auto& c : criteria) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    double dt = seconds_since(t0);
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << dt << " s): "
              << o.detail.str() << std::endl;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << "/" << criteria.size() << " failing, "
            << seconds_since(start) << " s total" << std::endl;
  return failures ? 1 : 0;
}
