#include <gtest/gtest.h>

#include <cmath>

#include "cgrp/error.hpp"
#include "cgrp/exact.hpp"
#include "cgrp/rng.hpp"
#include "test_util.hpp"

using namespace cgrp;
using cgrp::testing::make_area;
using cgrp::testing::make_instance;

TEST(Exact, SingleTaskClosedForms) {
  const Problem pt(make_instance({0, 0}, {{0.5, 0.5}}));
  EXPECT_NEAR(exact::solve_bruteforce(pt).objective, 1.414214, 1e-6);
  EXPECT_NEAR(exact::solve_dp(pt).objective, 2.0 * std::sqrt(0.5), 1e-12);

  const Problem ln(make_instance({0, 0}, {}, {{{0, 1}, {1, 1}}}));
  EXPECT_NEAR(exact::solve_bruteforce(ln).objective, 3.414214, 1e-6);
  EXPECT_NEAR(exact::solve_dp(ln).objective, 2.0 + std::sqrt(2.0), 1e-12);
  // Both directions tie; the smaller candidate index wins.
  EXPECT_EQ(exact::solve_dp(ln).tour.order, (std::vector<int>{0, 1}));
  EXPECT_EQ(exact::solve_bruteforce(ln).tour.order, (std::vector<int>{0, 1}));

  // Area (0.3..0.7) × (0.425..0.575), even sweeps: best entry is the corner
  // nearest the depot, exiting on the same short edge.
  const Problem ar(make_instance({0, 0}, {}, {}, {make_area({0.5, 0.5}, 0.4, 0.15, 0.0)}));
  const double expect = std::hypot(0.3, 0.425) + 1.6 + std::hypot(0.3, 0.575);
  EXPECT_NEAR(exact::solve_dp(ar).objective, expect, 1e-12);
  EXPECT_NEAR(exact::solve_bruteforce(ar).objective, expect, 1e-12);
}

TEST(Exact, AgreesWithNaiveEnumeration) {
  const InstanceSpec spec = cgrp::testing::small_spec(1, 6);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Problem p(generate_instance(spec, seed));
    const double naive = cgrp::testing::naive_optimum(p.candidates());
    const auto dp = exact::solve_dp(p);
    const auto bf = exact::solve_bruteforce(p);
    EXPECT_NEAR(dp.objective, naive, 1e-9) << seed;
    EXPECT_NEAR(bf.objective, naive, 1e-9) << seed;
    EXPECT_EQ(dp.tour, bf.tour) << seed;
    EXPECT_NEAR(dp.objective, p.evaluate(dp.tour), 1e-12);
    if (p.num_tasks() > 1) {
      EXPECT_GT(dp.nodes_expanded, 0u);
    }
  }
}

TEST(Exact, DpEqualsBruteforceAtSevenTasks) {
  const InstanceSpec spec = cgrp::testing::small_spec(6, 8);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const Problem p(generate_instance(spec, seed));
    EXPECT_NEAR(exact::solve_dp(p).objective, exact::solve_bruteforce(p).objective, 1e-9);
  }
}

TEST(Exact, TwelveTaskDpCompletes) {
  InstanceSpec spec = cgrp::testing::small_spec(12, 13);
  const Problem p(generate_instance(spec, 12));
  ASSERT_EQ(p.num_tasks(), 12);
  const auto r = exact::solve_dp(p);
  EXPECT_TRUE(validate_tour(r.tour, p.candidates()).ok());
  EXPECT_NEAR(r.objective, p.evaluate(r.tour), 1e-12);
}

TEST(Exact, Guards) {
  const Problem eight(generate_instance(cgrp::testing::small_spec(8, 9), 1));
  try {
    (void)exact::solve_bruteforce(eight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
  InstanceSpec big;
  big.size_range = {17, 18};
  big.area_range = {0, 1};
  big.line_range = {0, 1};
  EXPECT_THROW((void)exact::solve_dp(Problem(generate_instance(big, 1))), Error);

  // Sixteen areas sit exactly on both limits and still solve.
  InstanceSpec areas;
  areas.size_range = {16, 17};
  areas.area_range = {16, 17};
  areas.line_range = {0, 1};
  areas.min_anchor_separation = 0.1;
  const Problem edge(generate_instance(areas, 2));
  ASSERT_EQ(edge.candidates().size(), 65u);
  EXPECT_TRUE(validate_tour(exact::solve_dp(edge).tour, edge.candidates()).ok());
}

TEST(Exact, InvariantUnderRigidTransform) {
  Rng rng(1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Problem p(generate_instance(cgrp::testing::small_spec(4, 8), seed));
    const double base = exact::solve_dp(p).objective;
    for (int k = 0; k < 3; ++k) {
      const Problem q(rotate_reflect(p.instance(), rng.uniform()));
      EXPECT_NEAR(exact::solve_dp(q).objective, base, 1e-9);
    }
  }
}

TEST(Exact, Deterministic) {
  const Problem p(generate_instance(cgrp::testing::small_spec(7, 8), 77));
  const auto a = exact::solve_dp(p);
  const auto b = exact::solve_dp(p);
  EXPECT_EQ(a.tour, b.tour);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.nodes_expanded, b.nodes_expanded);
}
