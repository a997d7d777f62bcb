#include <gtest/gtest.h>

#include <algorithm>

#include "cgrp/alns.hpp"
#include "cgrp/altopt.hpp"
#include "cgrp/error.hpp"
#include "cgrp/exact.hpp"
#include "test_util.hpp"

using namespace cgrp;
using namespace cgrp::altopt;
using cgrp::testing::make_instance;

namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Construct, RestartZeroIsGreedy) {
  AltOptConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p(generate_instance(cgrp::testing::mixed_spec(), seed));
    Rng a(1);
    Rng b(2);
    const auto c0 = construct_route(p.candidates(), p.costs(), cfg, 0, a);
    EXPECT_EQ(c0.tour, alns::initial_solution(p.candidates(), p.costs()));
    EXPECT_EQ(c0.noise_amplitude, 0.0);
    EXPECT_EQ(construct_route(p.candidates(), p.costs(), cfg, 0, b).tour, c0.tour);
  }
}

TEST(Construct, NoiseGrowsLinearly) {
  AltOptConfig cfg;
  cfg.restarts = 20;
  cfg.randomization_scale = 0.5;
  for (int r = 0; r < cfg.restarts; ++r) {
    EXPECT_DOUBLE_EQ(restart_noise_amplitude(cfg, r), r * 0.5 / 20);
  }
  const Problem p(generate_instance(cgrp::testing::mixed_spec(), 3));
  Rng rng(4);
  const auto c = construct_route(p.candidates(), p.costs(), cfg, 10, rng);
  EXPECT_DOUBLE_EQ(c.noise_amplitude, 0.25);
  EXPECT_TRUE(validate_tour(c.tour, p.candidates()).ok());
}

TEST(Improve, OptimalTourUnchanged) {
  const Problem p(make_instance({0, 0}, {{1, 0}, {1, 1}, {0, 1}}));
  const Tour t{{0, 1, 2, 3}};
  ImproveStats stats;
  EXPECT_EQ(improve_route_asymmetric(t, p.costs(), stats), t);
  EXPECT_EQ(stats.or_opt_moves + stats.three_opt_moves, 0);
}

TEST(Improve, RepairsMisplacedPoint) {
  // Square corners with one corner visited out of turn.
  const Problem p(make_instance({0, 0}, {{1, 0}, {1, 1}, {0, 1}, {0.5, 0}}));
  const Tour t{{0, 1, 2, 3, 4}};  // (0.5,0) visited last
  ImproveStats stats;
  const Tour out = improve_route_asymmetric(t, p.costs(), stats);
  EXPECT_LT(p.evaluate(out), p.evaluate(t) - 1e-9);
  EXPECT_NEAR(p.evaluate(out), 4.0, 1e-12);
  EXPECT_GT(stats.or_opt_moves, 0);
}

TEST(Improve, SegmentExchangeWitness) {
  // Two blocks of a line-free route in swapped order; no single relocation
  // of up to three nodes is needed when the blocks swap as a whole.
  const Problem p(make_instance({0, 0}, {{0.1, 0.9}, {0.2, 0.9}, {0.3, 0.9}, {0.9, 0.1},
                                         {0.9, 0.2}, {0.9, 0.3}, {0.9, 0.9}}));
  const Tour t{{0, 4, 5, 6, 7, 1, 2, 3}};
  const Tour out = improve_route_asymmetric(t, p.costs());
  EXPECT_LT(p.evaluate(out), p.evaluate(t) - 1e-9);
}

TEST(Improve, NeverWorseAndKeepsCandidates) {
  Rng rng(6);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Problem p(generate_instance(cgrp::testing::mixed_spec(), seed));
    const auto& cs = p.candidates();
    Tour t{{0}};
    for (int k = 0; k < cs.num_tasks(); ++k) {
      const auto sib = cs.siblings(k);
      t.order.push_back(sib[rng.below(sib.size())]);
    }
    std::shuffle(t.order.begin() + 1, t.order.end(), std::mt19937_64(seed));
    const Tour out = improve_route_asymmetric(t, p.costs());
    EXPECT_LE(p.evaluate(out), p.evaluate(t) + 1e-12);
    EXPECT_EQ(out.order.front(), 0);
    EXPECT_EQ(sorted(out.order), sorted(t.order));
    // Local optimum: a second call changes nothing.
    EXPECT_EQ(improve_route_asymmetric(out, p.costs()), out);
  }
}

TEST(Refine, DelegatesToNodeChoice) {
  const Problem p(make_instance({0, 0}, {{1, 0}}, {{{0, 1}, {1, 1}}}));
  EXPECT_EQ(refine_node_choices({{0, 2, 3}}, p.candidates(), p.costs(), 5).order,
            (std::vector<int>{0, 1, 3}));
}

TEST(Run, Contracts) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Problem p(generate_instance(cgrp::testing::mixed_spec(), seed));
    AltOptConfig cfg;
    cfg.seed = seed;
    const auto rep = run(p, cfg);
    EXPECT_EQ(rep.objective, p.evaluate(rep.tour));
    EXPECT_EQ(rep.trace.size(), 20u);
    EXPECT_EQ(rep.objective, *std::min_element(rep.trace.begin(), rep.trace.end()));
    EXPECT_LE(rep.objective, rep.initial_objective + 1e-12);
    EXPECT_EQ(rep.iterations, 60);

    AltOptConfig one = cfg;
    one.restarts = 1;
    EXPECT_GE(run(p, one).objective, rep.objective - 1e-12);

    EXPECT_EQ(to_json(run(p, cfg), false), to_json(rep, false));
    AltOptConfig threaded = cfg;
    threaded.workers = 3;
    auto tj = to_json(run(p, threaded), false);
    auto bj = to_json(rep, false);
    tj.erase("config");
    bj.erase("config");
    EXPECT_EQ(tj, bj);
  }
}

TEST(Run, AlternationNeverWorsens) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p(generate_instance(cgrp::testing::mixed_spec(), seed));
    AltOptConfig cfg;
    Rng rng(derive_seed(seed, 1));
    Tour t = construct_route(p.candidates(), p.costs(), cfg, 1, rng).tour;
    double prev = p.evaluate(t);
    for (int a = 0; a < 3; ++a) {
      t = improve_route_asymmetric(t, p.costs());
      const double mid = p.evaluate(t);
      EXPECT_LE(mid, prev + 1e-12);
      t = refine_node_choices(t, p.candidates(), p.costs(), 5);
      prev = p.evaluate(t);
      EXPECT_LE(prev, mid + 1e-12);
    }
  }
}

TEST(Run, DominatedByExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Problem p(generate_instance(cgrp::testing::small_spec(5, 10), seed));
    AltOptConfig cfg;
    cfg.seed = seed;
    EXPECT_GE(run(p, cfg).objective, exact::solve_dp(p).objective - 1e-9);
  }
}

TEST(Config, Json) {
  AltOptConfig c;
  c.restarts = 4;
  EXPECT_EQ(config_from_json(to_json(c)).restarts, 4);
  EXPECT_THROW((void)config_from_json({{"restarts", 0}}), Error);
  EXPECT_THROW((void)config_from_json({{"nope", 0}}), Error);
  EXPECT_THROW((void)config_from_json({{"randomization_scale", 1.5}}), Error);
}
