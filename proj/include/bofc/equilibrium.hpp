#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "bofc/geometry.hpp"
#include "bofc/graph.hpp"

namespace bofc {

/// Decomposition of the equilibrium bearing set of a one-to-many system with
/// K = n-1 leaders. `projection_stack` is the d x dK horizontal stack of the
/// per-edge projectors; the kernel of that stack is spanned by the columns of
/// [bearing_diag | complement_diag * mixing], of count d(n-2).
struct NullSpaceBasis {
  Eigen::MatrixXd projection_stack;  // d x dK           (P tilde)
  Eigen::MatrixXd bearing_diag;      // dK x K           (block diagonal of bearings)
  Eigen::MatrixXd complement_diag;   // dK x (d-1)K      (block diagonal of complements)
  Eigen::MatrixXd mixing;            // (d-1)K x m       (kernel of projection_stack * complement_diag)
  double residual_bearing = 0.0;     // max |projection_stack * bearing_diag|
  double residual_mixing = 0.0;      // max |projection_stack * complement_diag * mixing|
  int dim = 0;                       // d
  int leaders = 0;                   // K = n - 1
  int free_count = 0;                // m = d(n-2) - n + 1

  int kernel_dimension() const { return leaders + free_count; }  // d(n-2)
};

/// Candidate equilibrium bearing set y_i = a_i g_i + gperp_i (mixing_i b),
/// with a per-component flag for |y_i| = 1 (i.e. a_i^2 + |mixing_i b|^2 = 1).
struct BearingCandidate {
  Eigen::MatrixXd vectors;  // d x K
  std::vector<bool> unit_norm;
};

enum class StabilityTag { Stable, Unstable, LeaderFixed };

std::string to_string(StabilityTag t);

struct EquilibriumReport {
  Configuration positions;
  std::vector<StabilityTag> stability;  // one tag per agent
  std::optional<double> rate;           // smallest lambda_min(M) over the follower subsystems
};

/// Follower position (sum_j P_{g*_j})^{-1} (sum_j P_{g*_j} p_j) for fixed
/// leaders (columns of `leaders`) and unit target bearings (columns of
/// `targets`). Throws SingularProjectionSum when the projector sum is not
/// invertible (all targets parallel).
Eigen::VectorXd one_to_many_equilibrium(const Eigen::MatrixXd& leaders,
                                        const Eigen::MatrixXd& targets);

/// Unique target configuration of an LFF / ordered-LFF formation, built
/// iteratively: p1 fixed, p2 = p1 - d21 g*_21, and each later agent placed by
/// the one-to-many formula over its out-neighbors.
Configuration cascade_target_configuration(const TargetFormation& target,
                                           const Eigen::VectorXd& p1_init, double d21_init);

/// Basis of the equilibrium bearing set for measured bearings g_1..g_K given
/// as the columns of `bearings`. Throws DegenerateBearings when the stacked
/// projector loses rank (all bearings parallel).
NullSpaceBasis null_space_basis(const Eigen::MatrixXd& bearings);

/// Evaluates the solution form at coefficients a (size K) and b (size m).
BearingCandidate bearing_candidate(const NullSpaceBasis& basis, const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b);

/// Searches for a follower position whose bearings toward the fixed leaders
/// equal the candidate columns, by damped Gauss-Newton from the leader
/// centroid (at most 100 iterations). Returns the position iff the stacked
/// residual norm drops below 1e-6; absence signals a non-realizable
/// candidate.
std::optional<Eigen::VectorXd> realizable_position(const DirectedSensingGraph& graph,
                                                   const Eigen::MatrixXd& leaders,
                                                   const Eigen::MatrixXd& candidate);

/// Stable iff the bearings measured from the closed-form equilibrium to the
/// leaders equal the targets; unstable iff they equal the negated targets.
/// Throws InconsistentConfiguration when neither holds within 1e-6.
StabilityTag classify_stability(const Eigen::MatrixXd& leaders, const Eigen::MatrixXd& targets);

struct TrajectoryRecord;

/// min over samples of lambda_min(M(t)) with M(t) = sum_j P_{g_nj}/d_nj over
/// the follower's (fixed) neighbors. Lower-bounds the exponential decay rate
/// of V = 1/2 |p_n - p_n*|^2.
double lyapunov_rate(const TrajectoryRecord& trajectory, int follower,
                     const std::vector<int>& neighbors);

/// Equilibrium summary for a one-to-many or (ordered) LFF formation whose
/// leader geometry is taken from `initial`.
EquilibriumReport equilibrium_report(const TargetFormation& target, const Configuration& initial);

}  // namespace bofc
