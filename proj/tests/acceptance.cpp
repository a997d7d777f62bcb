// Reproduction checks, one numbered line each. Hard checks decide the exit
// status; the distribution-level check is reported but never fails the run.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "cgrp/alns.hpp"
#include "cgrp/altopt.hpp"
#include "cgrp/env.hpp"
#include "cgrp/exact.hpp"
#include "cgrp/harness.hpp"
#include "cgrp/instance_io.hpp"
#include "cgrp/neuralmath.hpp"
#include "nn_oracle.hpp"
#include "test_util.hpp"

using namespace cgrp;

namespace {

// Tolerances and suite sizes.
constexpr double kExactTol = 1e-9;
constexpr double kAttentionTol = 1e-12;
constexpr double kLossTol = 1e-9;
constexpr double kAlnsBand = 0.02;
constexpr int kAlnsRequired = 95;
constexpr double kAltOptBand = 0.05;
constexpr int kAltOptRequired = 90;
constexpr int kSuite = 100;
constexpr int kAlphas = 10;
constexpr int kZigzagAreas = 1000;
constexpr int kAttentionShapes = 100;
constexpr int kSoftInstances = 200;
constexpr std::uint64_t kSoftSeed = 2024;
constexpr double kSoftTarget = 6.127;
constexpr double kSoftBand = 0.10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int hard_failures = 0;

void report(int id, const char* name, bool soft, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const char* verdict = o.pass ? "PASS" : (soft ? "SOFT-FAIL" : "FAIL");
  std::printf("[%2d] %-9s %s: %s\n", id, verdict, name, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass && !soft) ++hard_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

InstanceSpec mixed_small(int max_tasks) {
  InstanceSpec s;
  s.size_range = {1, max_tasks + 1};
  s.area_range = {0, 3};
  s.line_range = {0, 4};
  return s;
}

// Suite shared by the heuristic quality checks: N in [5, 9].
std::vector<Problem> quality_suite() {
  InstanceSpec s = mixed_small(9);
  s.size_range = {5, 10};
  std::vector<Problem> out;
  for (int k = 0; k < kSuite; ++k) out.emplace_back(generate_instance(s, 9000 + k));
  return out;
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  for (int k = 0; k < kSuite; ++k) {
    const Problem p(generate_instance(mixed_small(7), 1000 + k));
    worst = std::max(worst, std::abs(exact::solve_dp(p).objective - exact::solve_bruteforce(p).objective));
  }
  return {worst <= kExactTol, fmt("max |dp - bf| = %.3g over 100 instances", worst)};
}

Outcome heuristic_quality(const std::vector<Problem>& suite, const std::vector<double>& optimum,
                          const std::function<double(const Problem&, std::uint64_t)>& solver,
                          double band, int required) {
  int within = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const double gap = (solver(suite[i], i) - optimum[i]) / optimum[i];
    worst = std::max(worst, gap);
    if (gap <= band + kExactTol) ++within;
  }
  return {within >= required,
          fmt("%.0f/100 within %.0f%% of optimum (need %.0f)", within, band * 100, required) +
              fmt(", worst gap %.3f%%", worst * 100)};
}

Outcome zigzag_formula() {
  Rng rng(4);
  int checked = 0;
  int bad = 0;
  for (std::uint64_t seed = 0; checked < kZigzagAreas; ++seed) {
    InstanceSpec s;
    s.size_range = {5, 20};
    s.area_range = {1, 5};
    s.detection_range = rng.uniform(0.01, 0.05);
    s.min_anchor_separation = 2.0 * s.detection_range;
    const Instance inst = generate_instance(s, seed);
    for (const auto& a : inst.areas) {
      if (checked == kZigzagAreas) break;
      ++checked;
      // Count passes by stepping across the width one detection range at a time.
      int n = 0;
      while (n * a.detection_range <= a.width + 1e-9) ++n;
      const auto z = zigzag_params(a);
      if (z.n_sweep != n || z.path_length != n * a.length) ++bad;
    }
  }
  return {bad == 0, fmt("%.0f mismatches over %.0f generated areas", bad, checked)};
}

Outcome rigid_invariance() {
  Rng rng(5);
  double worst_tour = 0.0;
  double worst_dp = 0.0;
  for (int k = 0; k < kSuite; ++k) {
    const Problem p(generate_instance(mixed_small(8), 5000 + k));
    const Tour fixed = alns::initial_solution(p.candidates(), p.costs());
    const double tour_base = p.evaluate(fixed);
    const double dp_base = exact::solve_dp(p).objective;
    for (int a = 0; a < kAlphas; ++a) {
      const double alpha = rng.uniform();
      const CandidateSet moved = rotate_reflect(p.candidates(), alpha);
      worst_tour = std::max(worst_tour, std::abs(evaluate_tour(fixed, moved, CostMatrix(moved)) - tour_base));
      const Problem q(rotate_reflect(p.instance(), alpha));
      worst_dp = std::max(worst_dp, std::abs(exact::solve_dp(q).objective - dp_base));
    }
  }
  return {worst_tour <= kExactTol && worst_dp <= kExactTol,
          fmt("max drift: fixed tour %.3g, dp optimum %.3g", worst_tour, worst_dp)};
}

std::vector<std::vector<bool>> mask_bits(const nn::Matrix& m) {
  std::vector<std::vector<bool>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(std::isinf(m(i, j)));
  return out;
}

Outcome differential_attention() {
  using testing::random_matrix;
  Rng rng(6);
  double lam0 = 0.0;
  double cancel = 0.0;
  double oracle = 0.0;
  bool masked_zero = true;
  for (int t = 0; t < kAttentionShapes; ++t) {
    const int nq = 1 + static_cast<int>(rng.below(8));
    const int nk = 1 + static_cast<int>(rng.below(12));
    const int dh = 1 + static_cast<int>(rng.below(8));
    const int dv = 1 + static_cast<int>(rng.below(8));
    nn::Matrix mask = nn::Matrix::Zero(nq, nk);
    for (int i = 0; i < nq; ++i)
      for (int j = 1; j < nk; ++j)
        if (rng.uniform() < 0.3) mask(i, j) = nn::kMasked;
    nn::AttentionHead h{random_matrix(rng, nq, dh), random_matrix(rng, nq, dh), random_matrix(rng, nk, dh),
                        random_matrix(rng, nk, dh), random_matrix(rng, nk, dv), 0.0};
    const auto zero = nn::differential_attention({{h}, mask});
    lam0 = std::max(lam0, (zero.head_outputs[0] - nn::masked_attention(h.q1, h.k1, h.v, mask)).cwiseAbs().maxCoeff());

    h.lambda = rng.uniform();
    const auto out = nn::differential_attention({{h}, mask});
    const auto ref = testing::naive_differential(h, mask_bits(mask));
    for (int i = 0; i < nq; ++i) {
      for (int d = 0; d < dv; ++d)
        oracle = std::max(oracle, std::abs(out.head_outputs[0](i, d) - ref[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)]));
      for (int j = 0; j < nk; ++j)
        if (std::isinf(mask(i, j))) masked_zero = masked_zero && out.weights1[0](i, j) == 0.0 && out.weights2[0](i, j) == 0.0;
    }

    nn::AttentionHead same = h;
    same.q2 = same.q1;
    same.k2 = same.k1;
    same.lambda = 1.0;
    cancel = std::max(cancel, nn::differential_attention({{same}, mask}).head_outputs[0].cwiseAbs().maxCoeff());
  }
  const bool ok = lam0 <= kAttentionTol && cancel == 0.0 && masked_zero && oracle <= kAttentionTol;
  return {ok, fmt("lambda=0 diff %.3g, identical-branch max %.3g, oracle diff %.3g", lam0, cancel, oracle) +
                  (masked_zero ? ", masked weights exactly 0" : ", masked weight nonzero")};
}

Outcome cl_losses() {
  Rng rng(7);
  const nn::TaskLayout mixed{2, 3, 4, 4};
  nn::ViewEmbeddings same;
  same.layout = mixed;
  const nn::Matrix m = testing::random_matrix(rng, mixed.num_rows(), 6);
  for (int v = 0; v < 4; ++v) {
    same.q.push_back(m);
    same.z.push_back(m);
  }
  const double identical = nn::instance_cl_loss(same);
  const auto points = testing::random_views(rng, nn::TaskLayout{0, 0, 5, 4}, 4, 6);
  const double point_only = nn::intra_task_cl_loss(points, nn::QuerySelection::sample(points.layout, rng));

  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const nn::TaskLayout lay{static_cast<int>(rng.below(4)), static_cast<int>(rng.below(5)),
                             static_cast<int>(rng.below(5)), 4};
    const auto v = testing::random_views(rng, lay, 2 + static_cast<int>(rng.below(4)), 8);
    const auto sel = nn::QuerySelection::sample(lay, rng);
    worst = std::max(worst, std::abs(nn::instance_cl_loss(v) - testing::naive_instance_cl(v)));
    worst = std::max(worst, std::abs(nn::intra_task_cl_loss(v, sel) - testing::naive_intra_cl(v, sel)));
    worst = std::max(worst, std::abs(nn::inter_task_cl_loss(v) - testing::naive_inter_cl(v)));
  }
  const bool ok = std::abs(identical + 1.0) <= kLossTol && point_only == 0.0 && worst <= kLossTol;
  return {ok, fmt("identical views %.12f, point-only intra %.3g, max oracle diff %.3g", identical, point_only, worst)};
}

Outcome reinforce() {
  Rng rng(8);
  double adv = 0.0;
  double oracle = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int r = 1 + static_cast<int>(rng.below(8));
    const int c = 1 + static_cast<int>(rng.below(16));
    const nn::Matrix rewards = testing::random_matrix(rng, r, c, 20.0);
    const nn::Matrix lp = -testing::random_matrix(rng, r, c, 10.0).cwiseAbs();
    const auto out = nn::reinforce_loss({rewards, lp});
    adv = std::max(adv, std::abs(out.advantages.sum()));
    oracle = std::max(oracle, std::abs(out.loss - testing::naive_reinforce(rewards, lp)));
  }
  const double flat = nn::reinforce_loss({nn::Matrix::Constant(3, 5, -6.5), -nn::Matrix::Ones(3, 5)}).loss;
  return {adv <= kLossTol && flat == 0.0 && oracle <= kLossTol,
          fmt("max |sum advantages| %.3g, equal-reward loss %.3g, oracle diff %.3g", adv, flat, oracle)};
}

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

Outcome environment() {
  int mismatched = 0;
  bool masks_ok = true;
  std::size_t tours = 0;
  for (int k = 0; k < kSuite; ++k) {
    const Problem p(generate_instance(mixed_small(4), 7000 + k));
    std::set<std::vector<int>> reached;
    enumerate(reset(p), reached, masks_ok);
    const auto valid = testing::all_valid_tours(p.candidates());
    if (reached != std::set<std::vector<int>>(valid.begin(), valid.end())) ++mismatched;
    tours += reached.size();
  }
  return {mismatched == 0 && masks_ok,
          fmt("%.0f instances, %.0f terminal tours, %.0f set mismatches", kSuite, static_cast<double>(tours), mismatched) +
              (masks_ok ? ", siblings always masked" : ", sibling left unmasked")};
}

Outcome soft_reproduction() {
  const auto recs = harness::generate_dataset(harness::preset_spec("cgrp20"), kSoftInstances, kSoftSeed, "cgrp20");
  const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto summary = harness::run_benchmark(recs, {"alns"}, "greedy", {}, jobs);
  double greedy = 0.0;
  double alns = 0.0;
  for (const auto& s : summary.solvers) {
    if (s.solver == "greedy") greedy = s.mean_objective;
    if (s.solver == "alns") alns = s.mean_objective;
  }
  const double rel = (alns - kSoftTarget) / kSoftTarget;
  const bool ok = std::abs(rel) <= kSoftBand && greedy > alns;
  return {ok, fmt("alns mean %.4f vs 6.127 (%+.1f%%), greedy mean %.4f", alns, rel * 100, greedy) +
                  (ok ? "" : "; distribution-level check, see README")};
}

Outcome determinism() {
  std::vector<std::string> diffs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Problem small(generate_instance(mixed_small(7), 300 + seed));
    const Problem mid(generate_instance(harness::preset_spec("cgrp20"), 400 + seed));
    harness::SolveOptions o;
    o.seed = seed;
    for (const std::string algo : {"exact-dp", "exact-bf", "alns", "altopt", "greedy"}) {
      const Problem& p = algo.rfind("exact", 0) == 0 ? small : mid;
      if (to_json(harness::solve(p, algo, o), false) != to_json(harness::solve(p, algo, o), false)) diffs.push_back(algo);
    }
    UniformRandomPolicy policy;
    if (rollout(mid, policy, seed).tour != rollout(mid, policy, seed).tour) diffs.push_back("rollout");
  }
  std::ostringstream a;
  std::ostringstream b;
  write_jsonl(a, harness::generate_dataset(harness::preset_spec("cgrp50"), 20, 77, "d"));
  write_jsonl(b, harness::generate_dataset(harness::preset_spec("cgrp50"), 20, 77, "d"));
  if (a.str() != b.str()) diffs.push_back("gen");
  std::string what;
  for (const auto& d : diffs) what += " " + d;
  return {diffs.empty(), diffs.empty() ? "5 solvers x 5 seeds, rollouts and a 20-instance dataset repeat bit-identically"
                                       : "differences in:" + what};
}

}  // namespace

int main() {
  report(1, "dp equals brute force (N<=7)", false, oracle_equivalence);

  const auto suite = quality_suite();
  std::vector<double> optimum;
  for (const auto& p : suite) optimum.push_back(exact::solve_dp(p).objective);
  report(2, "alns near optimum (N<=9)", false, [&] {
    return heuristic_quality(suite, optimum, [](const Problem& p, std::uint64_t s) {
      alns::AlnsConfig c;
      c.seed = s;
      return alns::run(p, c).objective;
    }, kAlnsBand, kAlnsRequired);
  });
  report(3, "altopt near optimum (N<=9)", false, [&] {
    return heuristic_quality(suite, optimum, [](const Problem& p, std::uint64_t s) {
      altopt::AltOptConfig c;
      c.seed = s;
      return altopt::run(p, c).objective;
    }, kAltOptBand, kAltOptRequired);
  });
  report(4, "zigzag sweep formula", false, zigzag_formula);
  report(5, "rigid transform invariance", false, rigid_invariance);
  report(6, "differential attention", false, differential_attention);
  report(7, "contrastive losses", false, cl_losses);
  report(8, "reinforce kernel", false, reinforce);
  report(9, "environment reachability", false, environment);
  report(10, "cgrp20 distribution level", true, soft_reproduction);
  report(11, "determinism", false, determinism);

  std::printf("%s: %d hard failure(s)\n", hard_failures == 0 ? "PASS" : "FAIL", hard_failures);
  return hard_failures == 0 ? 0 : 1;
}
