#include "cgrp/neuralmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgrp/error.hpp"

namespace cgrp::nn {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw Error(ErrorCode::kShapeMismatch, what);
  }
}

Matrix normalized_rows(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double n = out.row(r).norm();
    if (n > 0.0) {
      out.row(r) /= n;
    }
  }
  return out;
}

Vector pooled(const Matrix& m) { return normalized_rows(m).colwise().mean().transpose(); }

void check_views(const ViewEmbeddings& views) {
  require(views.z.size() == views.q.size(), "view count differs between z and q");
  const auto rows = static_cast<Eigen::Index>(views.layout.num_rows());
  for (std::size_t v = 0; v < views.q.size(); ++v) {
    require(views.z[v].rows() == rows && views.q[v].rows() == rows,
            "view rows must match the task layout");
    require(views.z[v].cols() == views.q[v].cols() && views.z[v].cols() == views.z[0].cols(),
            "embedding dimensions differ across views");
  }
}

double row_cos(const Matrix& q, Eigen::Index i, const Matrix& z, Eigen::Index j) {
  return cosine_sim(q.row(i).transpose(), z.row(j).transpose());
}

}  // namespace

std::vector<FeatureRow> raw_features(const CandidateSet& cs) {
  std::vector<FeatureRow> rows;
  rows.reserve(cs.size());
  for (const auto& c : cs.candidates()) {
    FeatureRow row;
    row.coord_pair = {c.entry.x, c.entry.y, c.exit.x, c.exit.y};
    if (c.type == TaskType::kDepot) {
      row.is_depot = true;
    } else {
      row.anchor = {c.anchor.x, c.anchor.y};
      row.type_indicator = static_cast<int>(c.type);
    }
    rows.push_back(row);
  }
  return rows;
}

Matrix feature_matrix(const std::vector<FeatureRow>& rows) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), 7);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (int k = 0; k < 4; ++k) m(i, k) = rows[r].coord_pair[static_cast<std::size_t>(k)];
    m(i, 4) = rows[r].anchor[0];
    m(i, 5) = rows[r].anchor[1];
    m(i, 6) = rows[r].type_indicator;
  }
  return m;
}

Vector masked_softmax(const Vector& logits, const Vector& mask) {
  require(logits.size() == mask.size(), "logits and mask lengths differ");
  double hi = kMasked;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    if (mask[i] != kMasked) {
      hi = std::max(hi, logits[i] + mask[i]);
    }
  }
  if (hi == kMasked) {
    throw Error(ErrorCode::kInvalidArgument, "softmax over a fully masked row");
  }
  Vector out = Vector::Zero(logits.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    if (mask[i] != kMasked) {
      out[i] = std::exp(logits[i] + mask[i] - hi);
      total += out[i];
    }
  }
  return out / total;
}

Matrix masked_softmax_rows(const Matrix& logits, const Matrix& mask) {
  require(logits.rows() == mask.rows() && logits.cols() == mask.cols(),
          "logits and mask shapes differ");
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    out.row(r) = masked_softmax(logits.row(r).transpose(), mask.row(r).transpose()).transpose();
  }
  return out;
}

Matrix masked_attention(const Matrix& q, const Matrix& k, const Matrix& v, const Matrix& mask) {
  require(q.cols() == k.cols(), "query and key dimensions differ");
  require(k.rows() == v.rows(), "key and value counts differ");
  require(mask.rows() == q.rows() && mask.cols() == k.rows(), "mask shape mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  return masked_softmax_rows(q * k.transpose() * scale, mask) * v;
}

AttentionOutput differential_attention(const AttentionBatch& batch) {
  require(!batch.heads.empty(), "attention needs at least one head");
  const auto& h0 = batch.heads.front();
  const Eigen::Index nq = h0.q1.rows();
  const Eigen::Index nk = h0.k1.rows();
  const Eigen::Index dim = h0.q1.cols();
  const Eigen::Index vdim = h0.v.cols();
  require(batch.mask.rows() == nq && batch.mask.cols() == nk, "mask shape mismatch");

  AttentionOutput out;
  out.concatenated.resize(nq, vdim * static_cast<Eigen::Index>(batch.heads.size()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t m = 0; m < batch.heads.size(); ++m) {
    const auto& h = batch.heads[m];
    require(h.q1.rows() == nq && h.q2.rows() == nq && h.q1.cols() == dim && h.q2.cols() == dim,
            "query shapes differ across branches or heads");
    require(h.k1.rows() == nk && h.k2.rows() == nk && h.k1.cols() == dim && h.k2.cols() == dim,
            "key shapes differ across branches or heads");
    require(h.v.rows() == nk && h.v.cols() == vdim, "value shape mismatch");
    Matrix a1 = masked_softmax_rows(h.q1 * h.k1.transpose() * scale, batch.mask);
    Matrix a2 = masked_softmax_rows(h.q2 * h.k2.transpose() * scale, batch.mask);
    Matrix s = (a1 - effective_lambda(h.lambda) * a2) * h.v;
    out.concatenated.middleCols(static_cast<Eigen::Index>(m) * vdim, vdim) = s;
    out.weights1.push_back(std::move(a1));
    out.weights2.push_back(std::move(a2));
    out.head_outputs.push_back(std::move(s));
  }
  return out;
}

Matrix context_embedding(const AttentionOutput& out, const Matrix& w_o) {
  require(out.concatenated.cols() == w_o.rows(), "output projection shape mismatch");
  return out.concatenated * w_o;
}

Vector compatibility_logits(const Vector& context, const Matrix& embeddings, const Matrix& w_k,
                            const Vector& mask, double clip) {
  require(w_k.rows() == context.size() && w_k.cols() == embeddings.cols(),
          "key projection shape mismatch");
  require(mask.size() == embeddings.rows(), "mask length mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(context.size()));
  const Vector keyed = embeddings * (w_k.transpose() * context);
  Vector out(embeddings.rows());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = mask[i] == kMasked ? kMasked : clip * std::tanh(keyed[i] * scale);
  }
  return out;
}

double cosine_sim(const Vector& q, const Vector& z) {
  require(q.size() == z.size(), "cosine of vectors with different lengths");
  const double denom = q.norm() * z.norm();
  if (denom == 0.0) {
    return 0.0;
  }
  return std::clamp(q.dot(z) / denom, -1.0, 1.0);
}

TaskLayout TaskLayout::of(const CandidateSet& cs) noexcept {
  return {cs.num_areas(), cs.num_lines(), cs.num_points(), cs.omega()};
}

double instance_cl_loss(const ViewEmbeddings& views, ViewReduction reduction) {
  check_views(views);
  const int a = views.num_views();
  if (a < 2) {
    return 0.0;
  }
  double total = 0.0;
  if (reduction == ViewReduction::kMeanPool) {
    std::vector<Vector> pq;
    std::vector<Vector> pz;
    for (int v = 0; v < a; ++v) {
      pq.push_back(pooled(views.q[static_cast<std::size_t>(v)]));
      pz.push_back(pooled(views.z[static_cast<std::size_t>(v)]));
    }
    for (int xi = 0; xi < a; ++xi) {
      for (int tau = 0; tau < a; ++tau) {
        if (tau != xi) {
          total += cosine_sim(pq[static_cast<std::size_t>(xi)], pz[static_cast<std::size_t>(tau)]);
        }
      }
    }
  } else {
    const Eigen::Index rows = views.q.front().rows();
    for (int xi = 0; xi < a; ++xi) {
      for (int tau = 0; tau < a; ++tau) {
        if (tau == xi) continue;
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) {
          sum += row_cos(views.q[static_cast<std::size_t>(xi)], i,
                         views.z[static_cast<std::size_t>(tau)], i);
        }
        total += sum / static_cast<double>(rows);
      }
    }
  }
  return -total / (a * (a - 1.0));
}

QuerySelection QuerySelection::sample(const TaskLayout& layout, Rng& rng) {
  QuerySelection sel;
  for (int i = 0; i < layout.n_areas; ++i) {
    sel.area_offsets.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(layout.omega))));
  }
  for (int i = 0; i < layout.n_lines; ++i) {
    sel.line_offsets.push_back(static_cast<int>(rng.below(2)));
  }
  return sel;
}

QuerySelection QuerySelection::first(const TaskLayout& layout) {
  return {std::vector<int>(static_cast<std::size_t>(layout.n_areas), 0),
          std::vector<int>(static_cast<std::size_t>(layout.n_lines), 0)};
}

double intra_task_cl_loss(const ViewEmbeddings& views, const QuerySelection& selection) {
  check_views(views);
  const auto& lay = views.layout;
  require(static_cast<int>(selection.area_offsets.size()) == lay.n_areas &&
              static_cast<int>(selection.line_offsets.size()) == lay.n_lines,
          "query selection does not match the task layout");
  const int a = views.num_views();
  if (a < 2 || (lay.n_areas == 0 && lay.n_lines == 0)) {
    return 0.0;
  }
  double total = 0.0;
  for (int xi = 0; xi < a; ++xi) {
    for (int tau = 0; tau < a; ++tau) {
      if (tau == xi) continue;
      const Matrix& q = views.q[static_cast<std::size_t>(xi)];
      const Matrix& z = views.z[static_cast<std::size_t>(tau)];
      if (lay.n_areas > 0 && lay.omega > 1) {
        double area = 0.0;
        for (int i = 0; i < lay.n_areas; ++i) {
          const int k = selection.area_offsets[static_cast<std::size_t>(i)];
          for (int j = 0; j < lay.omega; ++j) {
            if (j != k) area += row_cos(q, lay.area_row(i, k), z, lay.area_row(i, j));
          }
        }
        total += area / ((lay.omega - 1.0) * lay.n_areas);
      }
      if (lay.n_lines > 0) {
        double line = 0.0;
        for (int i = 0; i < lay.n_lines; ++i) {
          const int d = selection.line_offsets[static_cast<std::size_t>(i)];
          line += row_cos(q, lay.line_row(i, d), z, lay.line_row(i, 1 - d));
        }
        total += line / lay.n_lines;
      }
    }
  }
  return -total / (2.0 * a * (a - 1.0));
}

double inter_task_cl_loss(const ViewEmbeddings& views) {
  check_views(views);
  const auto& lay = views.layout;
  const int a = views.num_views();
  std::vector<std::vector<Eigen::Index>> groups(3);
  for (int i = 0; i < lay.n_areas; ++i)
    for (int k = 0; k < lay.omega; ++k) groups[0].push_back(lay.area_row(i, k));
  for (int i = 0; i < lay.n_lines; ++i)
    for (int d = 0; d < 2; ++d) groups[1].push_back(lay.line_row(i, d));
  for (int i = 0; i < lay.n_points; ++i) groups[2].push_back(lay.point_row(i));
  int present = 0;
  for (const auto& g : groups) present += g.empty() ? 0 : 1;
  if (a < 2 || present == 0) {
    return 0.0;
  }
  double total = 0.0;
  for (int xi = 0; xi < a; ++xi) {
    for (int tau = 0; tau < a; ++tau) {
      if (tau == xi) continue;
      const Matrix q = normalized_rows(views.q[static_cast<std::size_t>(xi)]);
      const Matrix z = normalized_rows(views.z[static_cast<std::size_t>(tau)]);
      double pair = 0.0;
      for (const auto& g : groups) {
        if (g.empty()) continue;
        double sum = 0.0;
        for (auto i : g)
          for (auto j : g) sum += q.row(i).dot(z.row(j));
        pair += sum / static_cast<double>(g.size() * g.size());
      }
      total += pair / present;
    }
  }
  return -total / (a * (a - 1.0));
}

ReinforceResult reinforce_loss(const RolloutBatch& batch) {
  require(batch.rewards.rows() == batch.log_probs.rows() &&
              batch.rewards.cols() == batch.log_probs.cols(),
          "rewards and log-probabilities shapes differ");
  require(batch.rewards.size() > 0, "empty rollout batch");
  ReinforceResult out;
  out.baseline = batch.rewards.mean();
  out.advantages = batch.rewards.array() - out.baseline;
  out.loss = -(out.advantages.array() * batch.log_probs.array()).mean();
  return out;
}

}  // namespace cgrp::nn
