#include "minen/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minen/error.hpp"

namespace minen {

void LeachConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("leach.p must lie strictly between 0 and 1");
  }
}

std::uint64_t leach_epoch_length(double p) {
  // 1/p is not exact for most decimal p; absorb the representation error.
  return static_cast<std::uint64_t>(std::ceil(1.0 / p - 1e-9));
}

double leach_threshold(double p, std::uint64_t round) {
  const auto phase = static_cast<double>(round % leach_epoch_length(p));
  return p / (1.0 - p * phase);
}

ClusterAssignment leach_clusters(std::span<const NodeState> nodes, LeachState& state,
                                 const LeachConfig& cfg, Position bs, RngStream& rng) {
  const std::uint64_t round = state.round++;
  if (state.served.size() != nodes.size() || round % leach_epoch_length(cfg.p) == 0) {
    state.served.assign(nodes.size(), 0);
  }

  ClusterAssignment a;
  for (const auto& n : nodes) {
    if (n.active()) {
      a.members.push_back(n.id);
    }
  }
  if (a.members.empty()) {
    return a;
  }

  const double t = leach_threshold(cfg.p, round);
  std::vector<NodeId> heads;
  for (NodeId id : a.members) {
    if (!state.served[id] && rng.uniform() < t) {
      heads.push_back(id);
    }
  }
  if (heads.empty()) {
    NodeId forced = a.members.front();
    double best = std::numeric_limits<double>::infinity();
    bool best_fresh = false;
    for (NodeId id : a.members) {
      const bool fresh = state.served[id] == 0;
      const double d = distance(nodes[id].pos, bs);
      if ((fresh && !best_fresh) || (fresh == best_fresh && d < best)) {
        forced = id;
        best = d;
        best_fresh = fresh;
      }
    }
    heads.push_back(forced);
  }
  for (NodeId h : heads) {
    state.served[h] = 1;
  }

  a.heads = heads;
  a.cluster_count = heads.size();
  a.labels.resize(a.members.size());
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    const Position p = nodes[a.members[i]].pos;
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < heads.size(); ++c) {
      if (heads[c] == a.members[i]) {
        nearest = c;
        break;
      }
      const double d = distance(p, nodes[heads[c]].pos);
      if (d < nearest_d) {
        nearest_d = d;
        nearest = c;
      }
    }
    a.labels[i] = nearest;
  }
  return a;
}

RoundOutcome leach_round(std::span<NodeState> nodes, LeachState& state, const LeachConfig& cfg,
                         const EnergyParams& params, Position bs, double aggregated_bits,
                         RngStream& rng) {
  const ClusterAssignment a = leach_clusters(nodes, state, cfg, bs, rng);
  RoutePlan plan = direct_routes(a.heads, nodes, bs, params, aggregated_bits);
  return execute_round(nodes, a, std::move(plan), bs, params, aggregated_bits);
}

void FcmConfig::validate() const {
  if (c && *c == 0) {
    throw ConfigError("fcm.c must be at least 1");
  }
  if (!(m > 1.0)) {
    throw ConfigError("fcm.m must exceed 1");
  }
  if (!(tol > 0.0)) {
    throw ConfigError("fcm.tol must be positive");
  }
  if (max_iter < 1) {
    throw ConfigError("fcm.max_iter must be at least 1");
  }
}

Eigen::MatrixXd fcm_memberships(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                                double m) {
  const Eigen::Index n = points.rows();
  const Eigen::Index c = centroids.rows();
  const double exponent = -1.0 / (m - 1.0);
  Eigen::MatrixXd u(n, c);
  Eigen::VectorXd w(c);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index coincident = -1;
    for (Eigen::Index k = 0; k < c; ++k) {
      const double d2 = (points.row(i) - centroids.row(k)).squaredNorm();
      if (d2 == 0.0) {
        coincident = k;
        break;
      }
      w(k) = m == 2.0 ? 1.0 / d2 : std::pow(d2, exponent);
    }
    if (coincident >= 0) {
      u.row(i).setZero();
      u(i, coincident) = 1.0;
    } else {
      u.row(i) = w.transpose() / w.sum();
    }
  }
  return u;
}

double fcm_objective(const Eigen::MatrixXd& points, const Eigen::MatrixXd& memberships,
                     const Eigen::MatrixXd& centroids, double m) {
  double j = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
      j += std::pow(memberships(i, k), m) * (points.row(i) - centroids.row(k)).squaredNorm();
    }
  }
  return j;
}

namespace {

// Dims is the point dimension when known at compile time (positions are 2-D),
// Eigen::Dynamic otherwise.
template <int Dims>
FcmResult fcm_impl(const Eigen::MatrixXd& points, std::size_t c, const FcmConfig& cfg,
                   RngStream& rng, bool track_objective) {
  const Eigen::Index n = points.rows();
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto kc = static_cast<Eigen::Index>(c);
  const Eigen::Index dims = Dims == Eigen::Dynamic ? points.cols() : Dims;
  const RowMajor x = points;
  RowMajor centers(kc, dims);
  const auto start = sample_distinct(rng, static_cast<std::size_t>(n), c);
  for (Eigen::Index k = 0; k < kc; ++k) {
    centers.row(k) = x.row(static_cast<Eigen::Index>(start[static_cast<std::size_t>(k)]));
  }

  const bool square = cfg.m == 2.0;
  const double exponent = -1.0 / (cfg.m - 1.0);
  auto dist2 = [&](const RowMajor& cs, Eigen::Index i, Eigen::Index k) {
    const double* p = x.data() + i * dims;
    const double* q = cs.data() + k * dims;
    double s = 0.0;
    for (Eigen::Index d = 0; d < dims; ++d) {
      const double t = p[d] - q[d];
      s += t * t;
    }
    return s;
  };
  auto weight = [&](double u) { return square ? u * u : std::pow(u, cfg.m); };

  FcmResult r;
  RowMajor u(n, kc);
  RowMajor next(kc, dims);
  std::vector<double> mass(static_cast<std::size_t>(kc));
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    r.iterations = iter;
    for (Eigen::Index i = 0; i < n; ++i) {
      double* row = u.data() + i * kc;
      Eigen::Index coincident = -1;
      double total = 0.0;
      for (Eigen::Index k = 0; k < kc; ++k) {
        const double d2 = dist2(centers, i, k);
        if (d2 == 0.0) {
          coincident = k;
          break;
        }
        row[k] = square ? 1.0 / d2 : std::pow(d2, exponent);
        total += row[k];
      }
      if (coincident >= 0) {
        std::fill(row, row + kc, 0.0);
        row[coincident] = 1.0;
      } else {
        for (Eigen::Index k = 0; k < kc; ++k) {
          row[k] /= total;
        }
      }
    }

    next.setZero();
    std::fill(mass.begin(), mass.end(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* xi = x.data() + i * dims;
      const double* ui = u.data() + i * kc;
      for (Eigen::Index k = 0; k < kc; ++k) {
        const double w = weight(ui[k]);
        mass[static_cast<std::size_t>(k)] += w;
        double* nk = next.data() + k * dims;
        for (Eigen::Index d = 0; d < dims; ++d) {
          nk[d] += w * xi[d];
        }
      }
    }
    double shift = 0.0;
    for (Eigen::Index k = 0; k < kc; ++k) {
      const double mk = mass[static_cast<std::size_t>(k)];
      if (mk > 0.0) {
        next.row(k) /= mk;
      } else {
        next.row(k) = centers.row(k);
      }
      shift = std::max(shift, (next.row(k) - centers.row(k)).norm());
    }
    centers.swap(next);

    if (track_objective) {
      double j = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < kc; ++k) {
          j += weight(u(i, k)) * dist2(centers, i, k);
        }
      }
      r.objective_history.push_back(j);
    }
    if (shift < cfg.tol) {
      r.converged = true;
      break;
    }
  }

  r.memberships = u;
  r.centroids = centers;
  r.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    u.row(i).maxCoeff(&best);
    r.labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return r;
}

}  // namespace

FcmResult fuzzy_cmeans(const Eigen::MatrixXd& points, std::size_t c, const FcmConfig& cfg,
                       RngStream& rng, bool track_objective) {
  cfg.validate();
  const Eigen::Index n = points.rows();
  if (c == 0 || c > static_cast<std::size_t>(n)) {
    throw ConfigError("fuzzy_cmeans: cluster count " + std::to_string(c) +
                      " invalid for population " + std::to_string(n));
  }
  if (points.cols() == 2) {
    return fcm_impl<2>(points, c, cfg, rng, track_objective);
  }
  return fcm_impl<Eigen::Dynamic>(points, c, cfg, rng, track_objective);
}

RoundOutcome fcm_round(std::span<NodeState> nodes, const FcmConfig& cfg, std::size_t clusters,
                       const EnergyParams& params, Position bs, double aggregated_bits,
                       RngStream& rng) {
  ClusterAssignment a;
  for (const auto& n : nodes) {
    if (n.active()) {
      a.members.push_back(n.id);
    }
  }
  if (a.members.empty()) {
    return {};
  }
  Eigen::MatrixXd positions(static_cast<Eigen::Index>(a.members.size()), 2);
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    const Position p = nodes[a.members[i]].pos;
    positions(static_cast<Eigen::Index>(i), 0) = p.x;
    positions(static_cast<Eigen::Index>(i), 1) = p.y;
  }
  const std::size_t c = std::clamp<std::size_t>(clusters, 1, a.members.size());
  FcmResult fcm = fuzzy_cmeans(positions, c, cfg, rng, false);
  a.labels = std::move(fcm.labels);
  a.cluster_count = compact_labels(a.labels);
  a.heads = elect_heads(nodes, a.members, a.labels, a.cluster_count, rng);

  RoutePlan plan = direct_routes(a.heads, nodes, bs, params, aggregated_bits);
  return execute_round(nodes, a, std::move(plan), bs, params, aggregated_bits);
}

}  // namespace minen
