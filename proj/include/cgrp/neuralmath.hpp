#pragma once

// Forward-only numeric kernels for attention-based construction policies and
// their auxiliary contrastive objectives. Nothing here computes gradients;
// where a training loop would detach an argument, the doc comment says so.

#include <array>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cgrp/costmodel.hpp"
#include "cgrp/rng.hpp"

namespace cgrp::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kMasked = -std::numeric_limits<double>::infinity();
inline constexpr double kDefaultClip = 10.0;
inline constexpr double kInitialLambda = 0.5;
inline constexpr double kDefaultInstanceWeight = 0.1;
inline constexpr double kDefaultIntraWeight = 0.02;

/// Raw per-candidate inputs of the unified encoding. The depot row carries
/// only its (duplicated) location; anchor and type are zero for it.
struct FeatureRow {
  std::array<double, 4> coord_pair{};  ///< entry x, entry y, exit x, exit y
  std::array<double, 2> anchor{};
  int type_indicator = 0;  ///< 0 area, 1 line, 2 point
  bool is_depot = false;
};

[[nodiscard]] std::vector<FeatureRow> raw_features(const CandidateSet& cs);

/// Rows of raw_features as a |V|×7 matrix: [L (4) | G (2) | I (1)].
[[nodiscard]] Matrix feature_matrix(const std::vector<FeatureRow>& rows);

/// Softmax of logits + mask, where mask entries are 0 or kMasked. Masked
/// entries come out exactly 0. Throws Error{kInvalidArgument} if every
/// entry is masked and Error{kShapeMismatch} on length mismatch.
[[nodiscard]] Vector masked_softmax(const Vector& logits, const Vector& mask);

/// Row-wise masked_softmax.
[[nodiscard]] Matrix masked_softmax_rows(const Matrix& logits, const Matrix& mask);

/// λ is stored unconstrained and clamped at use.
[[nodiscard]] inline double effective_lambda(double raw) noexcept { return raw > 0.0 ? raw : 0.0; }

/// One head: two query/key branches sharing values.
struct AttentionHead {
  Matrix q1, q2;  ///< n_queries × head_dim
  Matrix k1, k2;  ///< n_keys × head_dim
  Matrix v;       ///< n_keys × value_dim
  double lambda = kInitialLambda;  ///< raw; clamped with effective_lambda
};

struct AttentionBatch {
  std::vector<AttentionHead> heads;
  Matrix mask;  ///< n_queries × n_keys, entries 0 or kMasked, applied to both branches
};

struct AttentionOutput {
  std::vector<Matrix> weights1;      ///< A¹ per head
  std::vector<Matrix> weights2;      ///< A² per head
  std::vector<Matrix> head_outputs;  ///< s = (A¹ − λA²)V per head
  Matrix concatenated;               ///< [s_1 | … | s_M]
};

/// A^b = softmax(Q^b K^bᵀ / √head_dim + mask) for b = 1, 2; s = (A¹ − λ⁺A²)V.
[[nodiscard]] AttentionOutput differential_attention(const AttentionBatch& batch);

/// softmax(QKᵀ/√head_dim + mask)V.
[[nodiscard]] Matrix masked_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                      const Matrix& mask);

/// h_c = [s_1 | … | s_M] W_O.
[[nodiscard]] Matrix context_embedding(const AttentionOutput& out, const Matrix& w_o);

/// α_i = C·tanh(contextᵀ W_K h_i / √d) for unmasked i, kMasked otherwise.
/// `embeddings` is n × d, `w_k` is d × d.
[[nodiscard]] Vector compatibility_logits(const Vector& context, const Matrix& embeddings,
                                          const Matrix& w_k, const Vector& mask,
                                          double clip = kDefaultClip);

/// Cosine of the angle between q and z. In training z is the stop-gradient side.
[[nodiscard]] double cosine_sim(const Vector& q, const Vector& z);

struct TaskLayout {
  int n_areas = 0;
  int n_lines = 0;
  int n_points = 0;
  int omega = kAreaPairs;

  [[nodiscard]] static TaskLayout of(const CandidateSet& cs) noexcept;
  [[nodiscard]] int num_rows() const noexcept { return 1 + omega * n_areas + 2 * n_lines + n_points; }
  [[nodiscard]] int area_row(int task, int k) const noexcept { return 1 + omega * task + k; }
  [[nodiscard]] int line_row(int line, int direction) const noexcept {
    return 1 + omega * n_areas + 2 * line + direction;
  }
  [[nodiscard]] int point_row(int point) const noexcept {
    return 1 + omega * n_areas + 2 * n_lines + point;
  }
};

/// Projector outputs z and predictor outputs q for each augmented view; each
/// matrix has one row per candidate (depot first).
struct ViewEmbeddings {
  std::vector<Matrix> z;
  std::vector<Matrix> q;
  TaskLayout layout;

  [[nodiscard]] int num_views() const noexcept { return static_cast<int>(q.size()); }
};

enum class ViewReduction {
  kMeanPool,  ///< normalize rows, mean-pool per view, compare pooled vectors
  kRowWise,   ///< compare matching rows and average over rows
};

/// −1/(𝔸(𝔸−1)) Σ_ξ Σ_{τ≠ξ} 𝒟(q^ξ, z^τ). Zero for a single view.
[[nodiscard]] double instance_cl_loss(const ViewEmbeddings& views,
                                      ViewReduction reduction = ViewReduction::kMeanPool);

/// Which candidate of each area/line task acts as the query.
struct QuerySelection {
  std::vector<int> area_offsets;  ///< in [0, ω)
  std::vector<int> line_offsets;  ///< 0 (p1→p2) or 1 (p2→p1)

  [[nodiscard]] static QuerySelection sample(const TaskLayout& layout, Rng& rng);
  [[nodiscard]] static QuerySelection first(const TaskLayout& layout);
};

/// For every ordered view pair, the chosen area query is compared with its
/// ω − 1 siblings in the other view and the chosen line query with its
/// reversed twin; the sum of both averages is negated and scaled by
/// 1/(2𝔸(𝔸−1)). Zero without area and line tasks.
[[nodiscard]] double intra_task_cl_loss(const ViewEmbeddings& views, const QuerySelection& selection);

/// Same-type candidates across views as positives: for each ordered view
/// pair, the mean cosine over all same-type row pairs, averaged over the
/// types present, negated and averaged over view pairs.
[[nodiscard]] double inter_task_cl_loss(const ViewEmbeddings& views);

[[nodiscard]] inline double triplet_loss(double rl, double ins, double intra,
                                         double ins_weight = kDefaultInstanceWeight,
                                         double intra_weight = kDefaultIntraWeight) noexcept {
  return rl + ins_weight * ins + intra_weight * intra;
}

/// Rewards and summed log-probabilities, one row per view, one column per sample.
struct RolloutBatch {
  Matrix rewards;
  Matrix log_probs;
};

struct ReinforceResult {
  double loss = 0.0;
  double baseline = 0.0;
  Matrix advantages;
};

/// Shared-baseline REINFORCE surrogate: baseline = mean reward,
/// loss = −mean((R − baseline)·log p). The advantages are constants in training.
[[nodiscard]] ReinforceResult reinforce_loss(const RolloutBatch& batch);

}  // namespace cgrp::nn
