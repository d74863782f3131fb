#include "bofc/geometry.hpp"

#include <string>
#include <utility>

namespace bofc {

Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& g) {
  const int d = static_cast<int>(g.size());
  if (g.norm() <= kEpsDist) throw ZeroVector("orthonormal complement of a zero vector");
  const Eigen::VectorXd unit = g / g.norm();
  if (d == 2) {
    Eigen::MatrixXd c(2, 1);
    c << -unit(1), unit(0);
    return c;
  }
  if (d == 3) {
    int axis = 0;
    unit.cwiseAbs().minCoeff(&axis);
    Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
    Eigen::Vector3d v1 = e - unit * unit.dot(e);
    v1.normalize();
    const Eigen::Vector3d v2 = Eigen::Vector3d(unit).cross(v1);
    Eigen::MatrixXd c(3, 2);
    c.col(0) = v1;
    c.col(1) = v2;
    return c;
  }
  throw ValidationError("dimension must be 2 or 3");
}

BearingSet bearing_function(const DirectedSensingGraph& graph, const Configuration& config) {
  if (config.agents() != graph.vertex_count())
    throw DimensionMismatch("configuration has " + std::to_string(config.agents()) +
                            " agents, graph has " + std::to_string(graph.vertex_count()) +
                            " vertices");
  const int d = config.dim();
  BearingSet g;
  g.vectors.resize(d, graph.edge_count());
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edges()[k];
    try {
      g.vectors.col(k) =
          bearing(config.positions.col(e.tail - 1), config.positions.col(e.head - 1));
    } catch (const CoincidentAgents&) {
      throw CoincidentAgents("coincident agents on edge " + std::to_string(k) + " (" +
                                 std::to_string(e.tail) + "," + std::to_string(e.head) + ")",
                             k, e.tail);
    }
  }
  return g;
}

Eigen::MatrixXd bearing_rigidity_matrix(const DirectedSensingGraph& graph,
                                        const Configuration& config) {
  const int d = config.dim();
  const BearingSet g = bearing_function(graph, config);
  Eigen::MatrixXd rb = signed_incidence(graph, d);
  for (int k = 0; k < graph.edge_count(); ++k) {
    const Edge& e = graph.edges()[k];
    const double dist =
        (config.positions.col(e.head - 1) - config.positions.col(e.tail - 1)).norm();
    rb.middleRows(d * k, d) = (projection(g.vectors.col(k)) / dist) * rb.middleRows(d * k, d);
  }
  return rb;
}

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double thresh = std::max(m.rows(), m.cols()) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += (sv(i) > thresh);
  return rank;
}

CollinearityReport check_noncollinearity(const DirectedSensingGraph& graph,
                                         const Configuration& config) {
  CollinearityReport report;
  const int d = config.dim();
  for (int i = 1; i <= graph.vertex_count(); ++i) {
    const auto heads = graph.out_neighbors(i);
    for (std::size_t a = 0; a < heads.size(); ++a) {
      for (std::size_t b = a + 1; b < heads.size(); ++b) {
        const Eigen::VectorXd u = config.positions.col(heads[a] - 1) - config.positions.col(i - 1);
        const Eigen::VectorXd v = config.positions.col(heads[b] - 1) - config.positions.col(i - 1);
        double area;  // |u x v|, the parallelogram area
        if (d == 2)
          area = std::abs(u(0) * v(1) - u(1) * v(0));
        else
          area = Eigen::Vector3d(u).cross(Eigen::Vector3d(v)).norm();
        const double scale = u.norm() * v.norm();
        if (scale <= kEpsDist * kEpsDist || area / scale <= kEpsCollinear) {
          report.ok = false;
          report.violations.push_back({i, heads[a], heads[b]});
        }
      }
    }
  }
  return report;
}

Configuration symmetric_configuration(const Configuration& config, const Eigen::VectorXd& c) {
  if (c.size() != config.dim())
    throw DimensionMismatch("reflection center dimension does not match configuration");
  Configuration q;
  q.positions = (2.0 * c).replicate(1, config.agents()) - config.positions;
  return q;
}

double bearing_error(const BearingSet& measured, const BearingSet& target) {
  if (measured.dim() != target.dim() || measured.count() != target.count())
    throw DimensionMismatch("bearing sets differ in dimension or edge count");
  return (measured.vectors - target.vectors).norm();
}

TargetFormation make_target_formation(DirectedSensingGraph graph, BearingSet targets,
                                      std::optional<Configuration> witness) {
  if (targets.count() != graph.edge_count())
    throw ValidationError("target bearing count does not match edge count");
  for (int k = 0; k < targets.count(); ++k)
    if (std::abs(targets.vectors.col(k).norm() - 1.0) > 1e-9)
      throw ValidationError("target bearing " + std::to_string(k) + " is not unit norm");
  if (witness) {
    const BearingSet derived = bearing_function(graph, *witness);
    if (((derived.vectors - targets.vectors).cwiseAbs().maxCoeff()) > 1e-6)
      throw ValidationError("witness configuration does not realize the target bearings");
  }
  return TargetFormation{std::move(graph), std::move(targets), std::move(witness)};
}

}  // namespace bofc
