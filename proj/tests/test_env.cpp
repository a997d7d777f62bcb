#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cgrp/env.hpp"
#include "cgrp/error.hpp"
#include "test_util.hpp"

using namespace cgrp;
using cgrp::testing::make_area;
using cgrp::testing::make_instance;

namespace {

void enumerate(const EnvState& s, std::set<std::vector<int>>& out, bool& masks_ok) {
  if (s.terminal()) {
    out.insert(s.partial.order);
    return;
  }
  const auto& cs = s.problem->candidates();
  for (int a : s.feasible_actions()) {
    const EnvState next = step(s, a);
    for (int sib : cs.siblings(cs.task_of(a))) masks_ok = masks_ok && next.masked[static_cast<std::size_t>(sib)];
    enumerate(next, out, masks_ok);
  }
}

}  // namespace

TEST(Env, ResetFeasibleCounts) {
  const Problem three(make_instance({0, 0}, {{0.5, 0.5}}, {{{0, 1}, {1, 1}}},
                                    {make_area({0.5, 0.5}, 0.4, 0.15, 0.0)}));
  EnvState s = reset(three);
  EXPECT_EQ(s.num_feasible(), static_cast<int>(three.candidates().size()) - 1);
  EXPECT_TRUE(s.masked[0]);
  EXPECT_EQ(s.partial.order, std::vector<int>{0});
  EXPECT_EQ(s.step, 0);

  const Problem one(make_instance({0, 0}, {{0.5, 0.5}}));
  EXPECT_EQ(reset(one).num_feasible(), 1);

  const Problem area(make_instance({0, 0}, {}, {}, {make_area({0.5, 0.5}, 0.4, 0.15, 0.0)}));
  EXPECT_EQ(reset(area).feasible_actions(), (std::vector<int>{1, 2, 3, 4}));
}

TEST(Env, StepMasksSiblingsAndTerminates) {
  const Problem p(make_instance({0, 0}, {{0.9, 0.1}}, {}, {make_area({0.5, 0.5}, 0.4, 0.15, 0.0)}));
  EnvState s = step(reset(p), 2);
  for (int c = 1; c <= 4; ++c) EXPECT_TRUE(s.masked[static_cast<std::size_t>(c)]);
  EXPECT_EQ(s.feasible_actions(), std::vector<int>{5});
  EXPECT_FALSE(s.terminal());
  EXPECT_EQ(s.step, 1);
  s = step(s, 5);
  EXPECT_TRUE(s.terminal());
  EXPECT_EQ(s.num_feasible(), 0);
  EXPECT_FALSE(s.masked[0]);
}

TEST(Env, IllegalActions) {
  const Problem p(make_instance({0, 0}, {{0.9, 0.1}, {0.1, 0.9}}));
  const EnvState s = step(reset(p), 1);
  for (int bad : {0, 1, 7, -1}) {
    try {
      (void)step(s, bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIllegalAction);
    }
  }
  EXPECT_THROW((void)step(step(s, 2), 0), Error);
}

TEST(Env, Reward) {
  const Problem p(make_instance({0, 0}, {{0.5, 0.5}}));
  const EnvState s = reset(p);
  try {
    (void)terminal_reward(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotTerminal);
  }
  const EnvState t = step(s, 1);
  EXPECT_NEAR(terminal_reward(t), -1.414214, 1e-6);
  EXPECT_EQ(terminal_reward(t), -p.evaluate(t.partial));
}

TEST(Env, ExhaustiveReachabilityEqualsValidTours) {
  InstanceSpec spec = cgrp::testing::small_spec(1, 5);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Problem p(generate_instance(spec, seed));
    std::set<std::vector<int>> reached;
    bool masks_ok = true;
    enumerate(reset(p), reached, masks_ok);
    const auto valid = cgrp::testing::all_valid_tours(p.candidates());
    EXPECT_EQ(reached, std::set<std::vector<int>>(valid.begin(), valid.end())) << seed;
    EXPECT_TRUE(masks_ok);
  }
}

TEST(Rollout, NearestEntryPicksShorterOrdering) {
  // Two points on a ray from the depot: near then far is the shorter tour.
  const Problem p(make_instance({0, 0}, {{0.8, 0.0}, {0.2, 0.0}}));
  NearestEntryPolicy policy;
  const auto r = rollout(p, policy, 0);
  EXPECT_EQ(r.tour.order, (std::vector<int>{0, 2, 1}));
  EXPECT_NEAR(r.objective, 1.6, 1e-12);
  EXPECT_EQ(r.total_log_prob(), 0.0);
  EXPECT_LE(r.objective, p.evaluate({{0, 1, 2}}) + 1e-12);
}

TEST(Rollout, RandomIsDeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p(generate_instance(cgrp::testing::mixed_spec(), seed));
    UniformRandomPolicy policy;
    const auto a = rollout(p, policy, seed);
    const auto b = rollout(p, policy, seed);
    EXPECT_EQ(a.tour, b.tour);
    EXPECT_TRUE(validate_tour(a.tour, p.candidates()).ok());
    EXPECT_EQ(a.log_probs.size(), static_cast<std::size_t>(p.num_tasks()));
    EXPECT_EQ(a.objective, p.evaluate(a.tour));
    EXPECT_LT(a.total_log_prob(), 0.0);
  }
}

TEST(Rollout, RandomLogProbIsUniform) {
  const Problem p(make_instance({0, 0}, {{0.5, 0.5}}, {{{0, 1}, {1, 1}}}));
  UniformRandomPolicy policy;
  const auto r = rollout(p, policy, 3);
  EXPECT_NEAR(r.log_probs[0], -std::log(3.0), 1e-15);
  EXPECT_NEAR(r.log_probs[1], r.tour.order[1] == 3 ? -std::log(2.0) : 0.0, 1e-15);
}

TEST(Rollout, StepsEqualTaskCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p(generate_instance(cgrp::testing::mixed_spec(), seed));
    EnvState s = reset(p);
    int steps = 0;
    while (!s.terminal()) {
      ASSERT_GT(s.num_feasible(), 0);
      ASSERT_TRUE(s.masked[0]);
      s = step(s, s.feasible_actions().back());
      ++steps;
      ASSERT_EQ(s.step, static_cast<int>(s.partial.order.size()) - 1);
    }
    EXPECT_EQ(steps, p.num_tasks());
  }
}
