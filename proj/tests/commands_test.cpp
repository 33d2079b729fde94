#include <cmath>
#include <string>

#include "bsb/commands.hpp"
#include "gtest/gtest.h"

namespace bsb {
namespace {

TEST(SeededSecretTest, DeterministicWithExactWeight) {
  EXPECT_EQ(seeded_random_secret(5, 5, 123).str(), "11111");
  EXPECT_EQ(seeded_random_secret(5, 0, 123).str(), "00000");
  auto a = seeded_random_secret(8, 2, 7);
  EXPECT_EQ(a.weight(), 2u);
  EXPECT_EQ(a, seeded_random_secret(8, 2, 7));
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(seeded_random_secret(30, 4, seed).weight(), 4u);
  EXPECT_THROW(seeded_random_secret(3, 4, 0), DomainError);
}

TEST(PlanCommandTest, TwelveWithOneDefect) {
  auto j = cmd_plan(12, 1);
  EXPECT_EQ(j["S0"], 2);
  EXPECT_EQ(j["plan"]["S"], 2);
  EXPECT_EQ(j["plan"]["pool_sizes"], Json::array({3, 1}));
  EXPECT_EQ(j["plan"]["groups_per_stage"], Json::array({4, 12}));
  EXPECT_NEAR(j["worst_case_tests"].get<double>(), 2.0 * std::sqrt(12.0), 1e-12);
  EXPECT_NEAR(j["worst_case_tests_optimal"].get<double>(), 6.754676591535766, 1e-12);
  EXPECT_EQ(j["worst_case_tests_optimal_rounded"], 7);
  EXPECT_FALSE(j["prevalence"]["futile_S2"].get<bool>());
}

TEST(PlanCommandTest, LowPrevalenceIsNotFutile) {
  auto j = cmd_plan(100, 5);
  EXPECT_EQ(j["S0"], 3);
  EXPECT_FALSE(j["prevalence"]["futile_S2"].get<bool>());
  EXPECT_FALSE(j["prevalence"]["futile_optimal"].get<bool>());
}

TEST(PlanCommandTest, FullPrevalenceHasNoOptimalEstimate) {
  auto j = cmd_plan(4, 4);
  EXPECT_TRUE(j["worst_case_tests_optimal"].is_null());
  EXPECT_TRUE(j["prevalence"]["futile_S2"].get<bool>());
  EXPECT_TRUE(j["prevalence"]["futile_optimal"].get<bool>());
}

TEST(PlanCommandTest, RejectsBadArguments) {
  EXPECT_THROW(cmd_plan(12, 0), DomainError);
  EXPECT_THROW(cmd_plan(0, 0), DomainError);
  EXPECT_THROW(cmd_plan(12, 13), DomainError);
  EXPECT_THROW(cmd_plan(12, 1, 3, {3, 1}), DomainError);
  EXPECT_THROW(cmd_plan(12, 1, std::nullopt, {2, 3, 1}), DomainError);
}

TEST(PlanCommandTest, RenderMentionsKeyNumbers) {
  auto text = render_plan(cmd_plan(12, 1));
  EXPECT_NE(text.find("S0 = 2"), std::string::npos);
  EXPECT_NE(text.find("[3,1]"), std::string::npos);
}

TEST(PoolCommandTest, TwelveBitSecret) {
  auto o = cmd_pool(SecretString::parse("100000000000"), std::nullopt, {}, Accounting::strict);
  EXPECT_TRUE(o.correct);
  EXPECT_EQ(o.run.total_queries, 7u);
  EXPECT_EQ(o.run.defects, (std::vector<std::size_t>{12}));
  auto text = render_pool(o);
  EXPECT_NE(text.find("total queries: 7"), std::string::npos);
  EXPECT_NE(text.find("f(111000000000) = 1"), std::string::npos);
}

TEST(PoolCommandTest, JsonRunRoundTrips) {
  auto o = cmd_pool(seeded_random_secret(40, 3, 9), std::nullopt, {}, Accounting::deduced);
  auto j = run_to_json(o.plan, o.run, o.accounting);
  auto doc = run_from_json(j);
  EXPECT_EQ(doc.plan.pool_sizes, o.plan.pool_sizes);
  EXPECT_EQ(doc.accounting, Accounting::deduced);
  EXPECT_EQ(doc.run.defects, o.run.defects);
  EXPECT_EQ(doc.run.total_queries, o.run.total_queries);
  EXPECT_EQ(doc.run.query_log().size(), o.run.query_log().size());
  EXPECT_EQ(run_to_json(doc.plan, doc.run, doc.accounting), j);

  j["total_queries"] = j["total_queries"].get<std::size_t>() + 1;
  EXPECT_THROW(run_from_json(j), DomainError);
}

TEST(CompareCommandTest, TwelveBitSecret) {
  auto r = cmd_compare(SecretString::parse("100000000000"));
  EXPECT_EQ(r.queries_individual, 12u);
  EXPECT_EQ(r.queries_li_strict, 7u);
  EXPECT_EQ(r.queries_li_deduced, 6u);  // third member of the positive group is deduced
  EXPECT_EQ(r.queries_bv, 1u);
  EXPECT_TRUE(r.bv_recovered);
  EXPECT_EQ(r.bv_backend, "statevector");
  EXPECT_EQ(r.worst_li_strict, 7u);
  EXPECT_LE(static_cast<double>(r.worst_li_strict), r.predicted_worst_case + 1);
  auto j = comparison_to_json(r);
  EXPECT_EQ(j["queries_li"]["strict"], 7);
  EXPECT_NE(render_comparison(r).find("individual"), std::string::npos);
}

TEST(CompareCommandTest, ZeroSecretWithFixedPool) {
  auto r = cmd_compare(SecretString(9), std::nullopt, {3, 1});
  EXPECT_EQ(r.queries_li_strict, 3u);
  EXPECT_EQ(r.queries_li_deduced, 3u);
  EXPECT_EQ(r.queries_individual, 9u);
  EXPECT_TRUE(r.bv_recovered);
}

TEST(CompareCommandTest, HighPrevalenceFlagsFutility) {
  auto r = cmd_compare(SecretString::parse("1101001101"));
  EXPECT_TRUE(r.prevalence.futile_s2);
  EXPECT_GE(r.worst_li_strict, r.n);
  EXPECT_EQ(r.queries_bv, 1u);
}

TEST(CompareCommandTest, LongSecretUsesOptics) {
  auto s = seeded_random_secret(40, 4, 2);
  auto r = cmd_compare(s);
  EXPECT_EQ(r.bv_backend, "optics");
  EXPECT_TRUE(r.bv_recovered);
  EXPECT_EQ(r.queries_bv, 1u);
  EXPECT_EQ(r.queries_individual, 40u);
}

TEST(OpticsCommandTest, RecoversSecret) {
  auto o = cmd_optics(SecretString::parse("10110"));
  EXPECT_EQ(o.recovered.str(), "10110");
  EXPECT_EQ(o.outputs.size(), 5u);
}

TEST(BVCommandTest, JsonReportsSuccess) {
  auto s = SecretString::parse("0110");
  auto j = bv_to_json(s, OracleConstruction::cnot_ancilla, run_bv(s, OracleConstruction::cnot_ancilla));
  EXPECT_TRUE(j["success"].get<bool>());
  EXPECT_EQ(j["oracle"], "cnot");
  EXPECT_EQ(j["oracle_calls"], 1);
}

}  // namespace
}  // namespace bsb
