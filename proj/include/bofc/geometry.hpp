#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "bofc/errors.hpp"
#include "bofc/graph.hpp"

namespace bofc {

/// Distances below this are treated as agent coincidence.
inline constexpr double kEpsDist = 1e-9;
/// Threshold on the normalized triangle area (area over the product of the
/// two incident side lengths, i.e. the sine of the angle at the follower).
inline constexpr double kEpsCollinear = 1e-9;

/// Stacked agent positions. Column i holds agent i+1, so the Eigen
/// column-major layout of `positions` is exactly the stacked configuration
/// vector [p_1; ...; p_n].
struct Configuration {
  Eigen::MatrixXd positions;  // d x n

  int dim() const { return static_cast<int>(positions.rows()); }
  int agents() const { return static_cast<int>(positions.cols()); }
  Eigen::Map<const Eigen::VectorXd> stacked() const {
    return {positions.data(), positions.size()};
  }
};

/// One unit vector per edge, aligned with the graph's edge order.
struct BearingSet {
  Eigen::MatrixXd vectors;  // d x |E|

  int dim() const { return static_cast<int>(vectors.rows()); }
  int count() const { return static_cast<int>(vectors.cols()); }
  Eigen::Map<const Eigen::VectorXd> stacked() const {
    return {vectors.data(), vectors.size()};
  }
};

/// A sensing graph paired with desired unit bearings per edge, optionally
/// with a configuration known to realize them.
struct TargetFormation {
  DirectedSensingGraph graph;
  BearingSet targets;
  std::optional<Configuration> witness;
};

/// Unit vector pointing from `from` toward `to`. Throws CoincidentAgents
/// when the points are closer than kEpsDist.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, DA::RowsAtCompileTime, 1> bearing(
    const Eigen::MatrixBase<DA>& from, const Eigen::MatrixBase<DB>& to) {
  auto diff = (to.derived() - from.derived()).eval();
  const auto dist = diff.norm();
  if (dist <= kEpsDist) throw CoincidentAgents("coincident agents in bearing computation");
  return diff / dist;
}

/// Orthogonal projector I - x x^T / |x|^2 onto the complement of span{x}.
/// Symmetric, idempotent, positive semi-definite, annihilates x.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::RowsAtCompileTime>
projection(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto norm = x.norm();
  if (norm <= kEpsDist) throw ZeroVector("projection of a (near-)zero vector");
  auto unit = (x.derived() / norm).eval();
  const auto d = x.rows();
  return Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::RowsAtCompileTime>::Identity(d, d) -
         unit * unit.transpose();
}

/// Deterministic orthonormal basis of the complement of span{g}, as a
/// d x (d-1) matrix with orthonormal columns. d = 2 rotates g by +90 deg;
/// d = 3 orthonormalizes the axis least aligned with g and completes with a
/// cross product.
Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& g);

/// Bearings of every edge at the given configuration; vector k points from
/// the tail of edge k toward its head. Throws CoincidentAgents (with the
/// offending edge index) when an edge connects coincident agents.
BearingSet bearing_function(const DirectedSensingGraph& graph, const Configuration& config);

/// diag(P_{g_k} / d_k) * signed_incidence, a d|E| x dn matrix. Translations
/// and the scaling direction lie in its kernel.
Eigen::MatrixXd bearing_rigidity_matrix(const DirectedSensingGraph& graph,
                                        const Configuration& config);

/// Numerical rank with the threshold max(rows, cols) * eps * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m);

struct CollinearityReport {
  bool ok = true;
  /// Triples (i, j, k): follower i and out-neighbors j, k near one line.
  std::vector<std::array<int, 3>> violations;
};

/// Checks, for every vertex with at least two out-neighbors, that the vertex
/// and each pair of its out-neighbors are not collinear.
CollinearityReport check_noncollinearity(const DirectedSensingGraph& graph,
                                         const Configuration& config);

/// Point reflection of every agent through c: q_i = 2c - p_i.
Configuration symmetric_configuration(const Configuration& config, const Eigen::VectorXd& c);

/// Euclidean norm of the stacked difference between two bearing sets.
double bearing_error(const BearingSet& measured, const BearingSet& target);

/// Validating constructor: targets unit within 1e-9 and, when a witness is
/// given, realizing the targets within 1e-6 per component.
TargetFormation make_target_formation(DirectedSensingGraph graph, BearingSet targets,
                                      std::optional<Configuration> witness = std::nullopt);

}  // namespace bofc
