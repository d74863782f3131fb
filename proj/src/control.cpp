#include "bofc/control.hpp"

#include <string>

namespace bofc {

Eigen::VectorXd agent_control(int agent, const Configuration& config,
                              const TargetFormation& target) {
  const int d = config.dim();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  for (int k : target.graph.out_edge_indices(agent)) {
    const Edge& e = target.graph.edges()[k];
    Eigen::VectorXd g;
    try {
      g = bearing(config.positions.col(e.tail - 1), config.positions.col(e.head - 1));
    } catch (const CoincidentAgents&) {
      throw CoincidentAgents("agent " + std::to_string(agent) +
                                 " coincides with its neighbor " + std::to_string(e.head),
                             k, agent);
    }
    u -= projection(g) * target.targets.vectors.col(k);
  }
  return u;
}

ControlVector stacked_control(const Configuration& config, const TargetFormation& target) {
  const int d = config.dim();
  const int n = config.agents();
  const int m = target.graph.edge_count();
  if (target.targets.count() != m || target.targets.dim() != d)
    throw DimensionMismatch("target bearings do not match graph and configuration");

  const BearingSet g = bearing_function(target.graph, config);

  // Projected targets, one d-block per edge.
  Eigen::MatrixXd w(d, m);
  for (int k = 0; k < m; ++k)
    w.col(k) = projection(g.vectors.col(k)) * target.targets.vectors.col(k);

  // Per-agent assembly: scatter each edge's contribution onto its tail.
  ControlVector u;
  u.velocities = Eigen::MatrixXd::Zero(d, n);
  for (int k = 0; k < m; ++k) u.velocities.col(target.graph.edges()[k].tail - 1) -= w.col(k);

  // Aggregated matrix form; must agree with the scatter route.
  const Eigen::VectorXd stacked =
      -(out_incidence(target.graph, d).transpose() * Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()));
  const Eigen::Map<const Eigen::MatrixXd> matrix_form(stacked.data(), d, n);
  if ((u.velocities - matrix_form).cwiseAbs().maxCoeff() > 1e-12)
    throw Error("per-agent and matrix-form control assemblies disagree");

  return u;
}

}  // namespace bofc
