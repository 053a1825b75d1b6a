#include "minen/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "minen/error.hpp"

namespace minen {

Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(raw.rows(), raw.cols());
  if (raw.rows() == 0) {
    return out;
  }
  const double n = static_cast<double>(raw.rows());
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    const double mean = raw.col(c).sum() / n;
    const double var = (raw.col(c).array() - mean).square().sum() / n;
    if (var > 0.0) {
      out.col(c) = (raw.col(c).array() - mean) / std::sqrt(var);
    }
  }
  return out;
}

FeatureSet extract_features(std::span<const NodeState> nodes, Position bs) {
  FeatureSet fs;
  for (const auto& n : nodes) {
    if (n.active()) {
      fs.ids.push_back(n.id);
    }
  }
  std::sort(fs.ids.begin(), fs.ids.end());

  std::map<NodeId, const NodeState*> by_id;
  for (const auto& n : nodes) {
    by_id.emplace(n.id, &n);
  }
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(fs.ids.size()), 3);
  for (std::size_t i = 0; i < fs.ids.size(); ++i) {
    const NodeState& n = *by_id.at(fs.ids[i]);
    const auto row = static_cast<Eigen::Index>(i);
    raw(row, FeatureSet::kDistToBs) = distance(n.pos, bs);
    raw(row, FeatureSet::kMsgLen) = static_cast<double>(n.msg_len);
    raw(row, FeatureSet::kSensedData) = static_cast<double>(n.sensed_data);
  }
  fs.points = zscore_columns(raw);
  return fs;
}

namespace {

void require_cluster_count(std::size_t k, Eigen::Index n, const char* who) {
  if (k == 0) {
    throw ConfigError(std::string(who) + ": cluster count must be at least 1");
  }
  if (k > static_cast<std::size_t>(n)) {
    throw ConfigError(std::string(who) + ": cluster count " + std::to_string(k) +
                      " exceeds population " + std::to_string(n));
  }
}

Eigen::MatrixXd rows_at(const Eigen::MatrixXd& points, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), points.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

}  // namespace

double inertia(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
               std::span<const std::size_t> labels) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    sum += (points.row(i) - centroids.row(static_cast<Eigen::Index>(labels[i]))).squaredNorm();
  }
  return sum;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, RngStream& rng,
                    const KMeansOptions& options) {
  const Eigen::Index n = points.rows();
  require_cluster_count(k, n, "kmeans");
  const auto kk = static_cast<Eigen::Index>(k);

  KMeansResult result;
  result.centroids = rows_at(points, sample_distinct(rng, static_cast<std::size_t>(n), k));
  result.labels.assign(static_cast<std::size_t>(n), k);

  std::vector<std::size_t> sizes(k);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;

    bool changed = false;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < kk; ++c) {
        const double d = (points.row(i) - result.centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = static_cast<std::size_t>(c);
        }
      }
      auto& label = result.labels[static_cast<std::size_t>(i)];
      changed |= label != best;
      label = best;
      ++sizes[best];
    }
    if (!changed) {
      result.converged = true;
      break;
    }

    // Reseed empty clusters with the point farthest from its own centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) {
        continue;
      }
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t l = result.labels[static_cast<std::size_t>(i)];
        if (sizes[l] < 2) {
          continue;
        }
        const double d = (points.row(i) - result.centroids.row(static_cast<Eigen::Index>(l)))
                             .squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far < 0) {
        throw InternalError("kmeans: no point available to reseed an empty cluster");
      }
      --sizes[result.labels[static_cast<std::size_t>(far)]];
      result.labels[static_cast<std::size_t>(far)] = c;
      sizes[c] = 1;
      result.centroids.row(static_cast<Eigen::Index>(c)) = points.row(far);
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(result.labels[static_cast<std::size_t>(i)])) +=
          points.row(i);
    }
    for (Eigen::Index c = 0; c < kk; ++c) {
      result.centroids.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    }
    result.inertia_history.push_back(inertia(points, result.centroids, result.labels));
  }
  return result;
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

// Projects a symmetric matrix onto {eigenvalues >= floor}. This is the
// maximizer of the Gaussian likelihood under that constraint, so EM keeps
// its monotone ascent.
Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& cov, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.eigenvalues().minCoeff() >= floor) {
    return cov;
  }
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(floor);
  Eigen::MatrixXd out = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// E-step: fills row-major responsibilities from log(pi_k) + log N(x_i | mu_k,
// cov) via row-wise log-sum-exp and returns the mean log-likelihood.
template <int Dims>
double e_step(const GmmModel& model, const Eigen::MatrixXd& points, RowMat& resp) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = Dims == Eigen::Dynamic ? points.cols() : Dims;
  const Eigen::Index k = model.means.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(model.covariance);
  if (llt.info() != Eigen::Success) {
    throw InternalError("gmm: covariance is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  const double log_det = 2.0 * lower.diagonal().array().log().sum();
  const double norm = -0.5 * (static_cast<double>(d) * kLog2Pi + log_det);

  // Whitening: y = L^{-1} x, so the Mahalanobis distance is Euclidean in y.
  const RowMat wx = lower.triangularView<Eigen::Lower>().solve(points.transpose()).transpose();
  const RowMat wm =
      lower.triangularView<Eigen::Lower>().solve(model.means.transpose()).transpose();
  std::vector<double> offset(static_cast<std::size_t>(k));
  for (Eigen::Index c = 0; c < k; ++c) {
    const double w = model.weights(c);
    offset[static_cast<std::size_t>(c)] =
        (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) + norm;
  }

  resp.resize(n, k);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double* r = resp.data() + i * k;
    const double* y = wx.data() + i * d;
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
      const double* m = wm.data() + c * d;
      double q = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double t = y[j] - m[j];
        q += t * t;
      }
      r[c] = offset[static_cast<std::size_t>(c)] - 0.5 * q;
      mx = std::max(mx, r[c]);
    }
    double sum = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      r[c] = std::exp(r[c] - mx);
      sum += r[c];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      r[c] /= sum;
    }
    total += mx + std::log(sum);
  }
  return total / static_cast<double>(n);
}

std::vector<std::size_t> argmax_rows(const Eigen::MatrixXd& m) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::Index best = 0;
    m.row(i).maxCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return labels;
}

}  // namespace

namespace {

// Dims fixes the feature dimension at compile time for the common case.
template <int Dims>
GmmResult gmm_impl(const Eigen::MatrixXd& points, std::size_t n_components, RngStream& rng,
                   const GmmOptions& options) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = Dims == Eigen::Dynamic ? points.cols() : Dims;
  const auto k = static_cast<Eigen::Index>(n_components);
  const double nd = static_cast<double>(n);

  GmmResult result;
  GmmModel& model = result.model;
  // Start from a k-means partition: its centroids, cluster shares and
  // pooled within-cluster covariance.
  const KMeansResult km = kmeans(points, n_components, rng);
  model.means = km.centroids;
  model.weights = Eigen::VectorXd::Zero(k);
  {
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = static_cast<Eigen::Index>(km.labels[static_cast<std::size_t>(i)]);
      model.weights(c) += 1.0 / nd;
      const Eigen::RowVectorXd diff = points.row(i) - km.centroids.row(c);
      pooled.noalias() += diff.transpose() * diff;
    }
    model.covariance = floor_eigenvalues(pooled / nd, options.covariance_floor);
  }

  const RowMat x = points;
  RowMat resp;
  RowMat means(k, d);
  Eigen::VectorXd nk(k);
  Eigen::MatrixXd cov(d, d);
  std::vector<double> v(static_cast<std::size_t>(d));
  for (int iter = 0;; ++iter) {
    const double ll = e_step<Dims>(model, points, resp);
    const bool improved_little = !result.log_likelihood_history.empty() &&
                                 ll - result.log_likelihood_history.back() < options.tolerance;
    result.log_likelihood_history.push_back(ll);
    if (improved_little) {
      result.converged = true;
      break;
    }
    if (iter == options.max_iterations) {
      break;
    }
    result.iterations = iter + 1;

    // M-step.
    nk.setZero();
    means.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* r = resp.data() + i * k;
      const double* xi = x.data() + i * d;
      for (Eigen::Index c = 0; c < k; ++c) {
        nk(c) += r[c];
        double* mc = means.data() + c * d;
        for (Eigen::Index j = 0; j < d; ++j) {
          mc[j] += r[c] * xi[j];
        }
      }
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      model.weights(c) = nk(c) / nd;
      if (nk(c) > 0.0) {
        model.means.row(c) = means.row(c) / nk(c);
      }
    }
    cov.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* r = resp.data() + i * k;
      for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index j = 0; j < d; ++j) {
          v[static_cast<std::size_t>(j)] = x(i, j) - model.means(c, j);
        }
        for (Eigen::Index a = 0; a < d; ++a) {
          const double ra = r[c] * v[static_cast<std::size_t>(a)];
          for (Eigen::Index b = 0; b <= a; ++b) {
            cov(a, b) += ra * v[static_cast<std::size_t>(b)];
          }
        }
      }
    }
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < a; ++b) {
        cov(b, a) = cov(a, b);
      }
    }
    model.weights /= model.weights.sum();
    cov /= nd;
    model.covariance = floor_eigenvalues(cov, options.covariance_floor);
  }

  result.responsibilities = resp;
  result.labels = argmax_rows(result.responsibilities);
  return result;
}

}  // namespace

double mean_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& points) {
  RowMat resp;
  return e_step<Eigen::Dynamic>(model, points, resp);
}

GmmResult gmm_fit(const Eigen::MatrixXd& points, std::size_t n_components, RngStream& rng,
                  const GmmOptions& options) {
  require_cluster_count(n_components, points.rows(), "gmm_fit");
  if (points.cols() == 3) {
    return gmm_impl<3>(points, n_components, rng, options);
  }
  return gmm_impl<Eigen::Dynamic>(points, n_components, rng, options);
}

std::size_t compact_labels(std::vector<std::size_t>& labels) {
  std::vector<std::size_t> used(labels);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (auto& l : labels) {
    l = static_cast<std::size_t>(std::lower_bound(used.begin(), used.end(), l) - used.begin());
  }
  return used.size();
}

std::size_t ClusterAssignment::cluster_of(NodeId id) const {
  const auto it = std::lower_bound(members.begin(), members.end(), id);
  if (it == members.end() || *it != id) {
    return cluster_count;
  }
  return labels[static_cast<std::size_t>(it - members.begin())];
}

bool ClusterAssignment::is_head(NodeId id) const {
  return std::find(heads.begin(), heads.end(), id) != heads.end();
}

namespace {

std::vector<std::vector<NodeId>> group_members(std::span<const NodeId> members,
                                               std::span<const std::size_t> labels,
                                               std::size_t cluster_count) {
  if (members.size() != labels.size()) {
    throw ContractError("elect_heads: members and labels differ in length");
  }
  std::vector<std::vector<NodeId>> groups(cluster_count);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (labels[i] >= cluster_count) {
      throw ContractError("elect_heads: label out of range");
    }
    groups[labels[i]].push_back(members[i]);
  }
  for (std::size_t c = 0; c < cluster_count; ++c) {
    if (groups[c].empty()) {
      throw InternalError("elect_heads: cluster " + std::to_string(c) + " is empty");
    }
  }
  return groups;
}

NodeId max_energy_member(std::span<const NodeState> nodes, const std::vector<NodeId>& group) {
  NodeId best = group.front();
  for (NodeId id : group) {
    const double e = nodes[id].energy;
    const double be = nodes[best].energy;
    if (e > be || (e == be && id < best)) {
      best = id;
    }
  }
  return best;
}

}  // namespace

std::vector<NodeId> elect_heads(std::span<const NodeState> nodes, std::span<const NodeId> members,
                                std::span<const std::size_t> labels, std::size_t cluster_count) {
  const auto groups = group_members(members, labels, cluster_count);
  std::vector<NodeId> heads;
  heads.reserve(cluster_count);
  for (const auto& g : groups) {
    heads.push_back(max_energy_member(nodes, g));
  }
  return heads;
}

std::vector<NodeId> elect_heads(std::span<const NodeState> nodes, std::span<const NodeId> members,
                                std::span<const std::size_t> labels, std::size_t cluster_count,
                                RngStream& rng) {
  const auto groups = group_members(members, labels, cluster_count);
  std::vector<NodeId> heads;
  heads.reserve(cluster_count);
  for (const auto& g : groups) {
    const double e0 = nodes[g.front()].energy;
    const bool all_equal =
        std::all_of(g.begin(), g.end(), [&](NodeId id) { return nodes[id].energy == e0; });
    if (all_equal && g.size() > 1) {
      std::vector<NodeId> sorted(g);
      std::sort(sorted.begin(), sorted.end());
      heads.push_back(sorted[rng.index(sorted.size())]);
    } else {
      heads.push_back(max_energy_member(nodes, g));
    }
  }
  return heads;
}

}  // namespace minen
