#pragma once

#include <Eigen/Dense>

#include "bofc/geometry.hpp"
#include "bofc/graph.hpp"

namespace bofc {

/// Per-agent velocity commands. Agents without out-edges (in particular the
/// leader of an LFF/ordered-LFF graph) get an exactly zero column.
struct ControlVector {
  Eigen::MatrixXd velocities;  // d x n

  int dim() const { return static_cast<int>(velocities.rows()); }
  int agents() const { return static_cast<int>(velocities.cols()); }
};

/// u_i = -sum over out-edges ij of P_{g_ij} g*_ij, with g_ij measured at the
/// current configuration. Agents with no out-edges return the zero vector.
Eigen::VectorXd agent_control(int agent, const Configuration& config,
                              const TargetFormation& target);

/// Assembles all agent controls. The same vector is computed a second time
/// through the aggregated matrix form -Hout^T diag(P_{g_k}) g* and the two
/// routes are required to agree within 1e-12 (the per-agent form fixes the
/// sign of the matrix form).
ControlVector stacked_control(const Configuration& config, const TargetFormation& target);

}  // namespace bofc
