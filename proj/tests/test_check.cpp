#include <gtest/gtest.h>

#include "sumfree/check.hpp"

using namespace sumfree;

class Suites : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(Suites, AllPropertiesPass) {
  auto results = check::run_suites("all", Seed{GetParam()});
  EXPECT_EQ(results.size(), 24u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed()) << r.suite << "/" << r.name << " trial " << r.first_failed_trial.value_or(0) << ": "
                            << r.first_failure;
    EXPECT_GT(r.trials, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, Suites, ::testing::Values(1, 7, 2024));

TEST(Runner, SingleSuiteAndUnknown) {
  auto r = check::run_suites("structure", Seed{3});
  ASSERT_FALSE(r.empty());
  for (const auto& p : r) EXPECT_EQ(p.suite, "structure");
  EXPECT_THROW(check::run_suites("nope", Seed{3}), Error);
}

TEST(Runner, FailuresAreLocalized) {
  check::Property prop{"odd_trials_fail", 6, [](Rng& rng) {
                         (void)rng;
                         static int calls = 0;
                         return (calls++ % 2 == 1) ? std::string("bad") : std::string();
                       }};
  auto r = check::run_property("demo", prop, Seed{0});
  EXPECT_EQ(r.trials, 6u);
  EXPECT_EQ(r.failures, 3u);
  EXPECT_EQ(r.first_failed_trial, 1u);
  EXPECT_EQ(r.first_failure, "bad");
  check::Property thrower{"throws", 2, [](Rng&) -> std::string { throw std::runtime_error("x"); }};
  EXPECT_EQ(check::run_property("demo", thrower, Seed{0}).failures, 2u);
}

TEST(Runner, SameSeedSameOutcome) {
  auto a = check::run_suites("solver", Seed{5}), b = check::run_suites("solver", Seed{5});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].failures, b[i].failures);
}
