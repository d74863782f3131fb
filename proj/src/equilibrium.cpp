#include "bofc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bofc/simulate.hpp"

namespace bofc {

namespace {

// Eigenvalue floor below which a PSD projector sum counts as singular.
constexpr double kSingularEig = 1e-10;

Eigen::MatrixXd projector_sum(const Eigen::MatrixXd& targets) {
  const int d = static_cast<int>(targets.rows());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < targets.cols(); ++j) s += projection(targets.col(j));
  return s;
}

}  // namespace

std::string to_string(StabilityTag t) {
  switch (t) {
    case StabilityTag::Stable: return "stable";
    case StabilityTag::Unstable: return "unstable";
    case StabilityTag::LeaderFixed: return "leader-fixed";
  }
  return "stable";
}

Eigen::VectorXd one_to_many_equilibrium(const Eigen::MatrixXd& leaders,
                                        const Eigen::MatrixXd& targets) {
  if (leaders.rows() != targets.rows() || leaders.cols() != targets.cols())
    throw DimensionMismatch("leader and target counts differ");
  if (leaders.cols() < 2) throw ValidationError("need at least two leaders");

  const Eigen::MatrixXd s = projector_sum(targets);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.eigenvalues().minCoeff() <= kSingularEig)
    throw SingularProjectionSum("projector sum is singular (parallel target bearings)");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(leaders.rows());
  for (int j = 0; j < leaders.cols(); ++j)
    rhs += projection(targets.col(j)) * leaders.col(j);
  return s.ldlt().solve(rhs);
}

Configuration cascade_target_configuration(const TargetFormation& target,
                                           const Eigen::VectorXd& p1_init, double d21_init) {
  const auto cls = classify(target.graph);
  if (cls.type != GraphClass::LFF && cls.type != GraphClass::OrderedLFF)
    throw NotOrderedLFF("graph is neither LFF nor ordered LFF");
  if (d21_init <= 0.0) throw ValidationError("leader/first-follower distance must be positive");
  const int n = target.graph.vertex_count();
  const int d = static_cast<int>(p1_init.size());
  if (d != target.targets.dim())
    throw DimensionMismatch("leader position dimension does not match targets");

  Configuration config;
  config.positions.resize(d, n);
  config.positions.col(0) = p1_init;
  if (n >= 2) {
    const int k21 = target.graph.out_edge_indices(2).front();
    config.positions.col(1) = p1_init - d21_init * target.targets.vectors.col(k21);
  }
  for (int i = 3; i <= n; ++i) {
    const auto edge_idx = target.graph.out_edge_indices(i);
    Eigen::MatrixXd leaders(d, edge_idx.size());
    Eigen::MatrixXd bearings(d, edge_idx.size());
    for (std::size_t j = 0; j < edge_idx.size(); ++j) {
      leaders.col(j) = config.positions.col(target.graph.edges()[edge_idx[j]].head - 1);
      bearings.col(j) = target.targets.vectors.col(edge_idx[j]);
    }
    config.positions.col(i - 1) = one_to_many_equilibrium(leaders, bearings);
  }
  return config;
}

NullSpaceBasis null_space_basis(const Eigen::MatrixXd& bearings) {
  const int d = static_cast<int>(bearings.rows());
  const int k = static_cast<int>(bearings.cols());
  if (d != 2 && d != 3) throw ValidationError("dimension must be 2 or 3");
  if (k < 2) throw ValidationError("need at least two bearings");

  NullSpaceBasis basis;
  basis.dim = d;
  basis.leaders = k;
  basis.free_count = d * (k - 1) - k;  // m = d(n-2) - (n-1) with K = n-1

  basis.projection_stack.resize(d, d * k);
  basis.bearing_diag = Eigen::MatrixXd::Zero(d * k, k);
  basis.complement_diag = Eigen::MatrixXd::Zero(d * k, (d - 1) * k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd g = bearings.col(i).normalized();
    basis.projection_stack.middleCols(d * i, d) = projection(g);
    basis.bearing_diag.block(d * i, i, d, 1) = g;
    basis.complement_diag.block(d * i, (d - 1) * i, d, d - 1) = orthonormal_complement(g);
  }

  if (numerical_rank(basis.projection_stack) < d)
    throw DegenerateBearings("stacked projector is rank deficient (parallel bearings)");

  // Kernel of projection_stack * complement_diag via SVD.
  const Eigen::MatrixXd pc = basis.projection_stack * basis.complement_diag;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pc, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = std::max(pc.rows(), pc.cols()) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += (sv(i) > thresh);
  const int kernel = static_cast<int>(pc.cols()) - rank;
  if (kernel != basis.free_count)
    throw DegenerateBearings("unexpected kernel dimension (near-parallel bearings)");
  basis.mixing = svd.matrixV().rightCols(kernel);

  basis.residual_bearing =
      (basis.projection_stack * basis.bearing_diag).cwiseAbs().maxCoeff();
  basis.residual_mixing =
      basis.free_count == 0
          ? 0.0
          : (basis.projection_stack * basis.complement_diag * basis.mixing).cwiseAbs().maxCoeff();
  return basis;
}

BearingCandidate bearing_candidate(const NullSpaceBasis& basis, const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b) {
  const int d = basis.dim;
  const int k = basis.leaders;
  if (a.size() != k) throw DimensionMismatch("coefficient a must have one entry per leader");
  if (b.size() != basis.free_count)
    throw DimensionMismatch("coefficient b must match the free basis count");

  BearingCandidate y;
  y.vectors.resize(d, k);
  y.unit_norm.resize(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd mix =
        basis.free_count == 0
            ? Eigen::VectorXd::Zero(d - 1)
            : Eigen::VectorXd(basis.mixing.middleRows((d - 1) * i, d - 1) * b);
    y.vectors.col(i) = a(i) * basis.bearing_diag.block(d * i, i, d, 1) +
                       basis.complement_diag.block(d * i, (d - 1) * i, d, d - 1) * mix;
    y.unit_norm[i] = std::abs(a(i) * a(i) + mix.squaredNorm() - 1.0) <= 1e-9;
  }
  return y;
}

std::optional<Eigen::VectorXd> realizable_position(const DirectedSensingGraph& graph,
                                                   const Eigen::MatrixXd& leaders,
                                                   const Eigen::MatrixXd& candidate) {
  const int d = static_cast<int>(leaders.rows());
  const int m = graph.edge_count();
  if (leaders.cols() != graph.vertex_count() - 1 || candidate.cols() != m ||
      candidate.rows() != d)
    throw DimensionMismatch("leaders/candidate do not match the one-to-many graph");

  constexpr double kResidualTol = 1e-6;
  constexpr int kMaxIterations = 100;

  // Stacked bearing residual r_k = g_k(x) - y_k; absent a solution with
  // |r| < tol the candidate is declared non-realizable.
  const auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) -> bool {
    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd diff = leaders.col(graph.edges()[k].head - 1) - x;
      const double dist = diff.norm();
      if (dist <= kEpsDist) return false;
      r.segment(d * k, d) = diff / dist - candidate.col(k);
    }
    return true;
  };

  Eigen::VectorXd x = leaders.rowwise().mean();
  Eigen::VectorXd r(d * m);
  if (!residual(x, r)) return std::nullopt;

  Eigen::MatrixXd jac(d * m, d);
  Eigen::VectorXd trial_r(d * m);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (r.norm() < kResidualTol) return x;

    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd diff = leaders.col(graph.edges()[k].head - 1) - x;
      const double dist = diff.norm();
      jac.middleRows(d * k, d) = -projection(diff) / dist;
    }
    const Eigen::MatrixXd jtj =
        jac.transpose() * jac + 1e-12 * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd step = jtj.ldlt().solve(-jac.transpose() * r);

    // Backtrack until the residual norm decreases.
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Eigen::VectorXd trial = x + step;
      if (residual(trial, trial_r) && trial_r.norm() < r.norm()) {
        x = trial;
        r = trial_r;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) return std::nullopt;
  }
  return r.norm() < kResidualTol ? std::optional<Eigen::VectorXd>(x) : std::nullopt;
}

StabilityTag classify_stability(const Eigen::MatrixXd& leaders, const Eigen::MatrixXd& targets) {
  const Eigen::VectorXd p = one_to_many_equilibrium(leaders, targets);
  double max_plus = 0.0, max_minus = 0.0;
  for (int j = 0; j < leaders.cols(); ++j) {
    const Eigen::VectorXd g = bearing(p, leaders.col(j));
    max_plus = std::max(max_plus, (g - targets.col(j)).norm());
    max_minus = std::max(max_minus, (g + targets.col(j)).norm());
  }
  if (max_plus <= 1e-6) return StabilityTag::Stable;
  if (max_minus <= 1e-6) return StabilityTag::Unstable;
  throw InconsistentConfiguration(
      "equilibrium bearings match neither the targets nor their negation");
}

double lyapunov_rate(const TrajectoryRecord& trajectory, int follower,
                     const std::vector<int>& neighbors) {
  if (trajectory.times.empty()) throw EmptyTrajectory("trajectory has no samples");
  double rate = std::numeric_limits<double>::infinity();
  for (const Configuration& config : trajectory.configs) {
    const int d = config.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int j : neighbors) {
      const Eigen::VectorXd diff = config.positions.col(j - 1) - config.positions.col(follower - 1);
      const double dist = diff.norm();
      if (dist <= kEpsDist)
        throw CoincidentAgents("follower coincides with a neighbor along the trajectory");
      m += projection(diff) / dist;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    rate = std::min(rate, eig.eigenvalues().minCoeff());
  }
  return rate;
}

namespace {

double lambda_min_at(const Eigen::MatrixXd& leaders, const Eigen::VectorXd& follower) {
  const int d = static_cast<int>(leaders.rows());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < leaders.cols(); ++j) {
    const Eigen::VectorXd diff = leaders.col(j) - follower;
    m += projection(diff) / diff.norm();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

EquilibriumReport equilibrium_report(const TargetFormation& target, const Configuration& initial) {
  const auto cls = classify(target.graph);
  const int n = target.graph.vertex_count();
  EquilibriumReport report;

  if (cls.type == GraphClass::OneToMany) {
    const Eigen::MatrixXd leaders = initial.positions.leftCols(n - 1);
    Eigen::MatrixXd bearings(initial.dim(), n - 1);
    for (int k = 0; k < target.graph.edge_count(); ++k)
      bearings.col(target.graph.edges()[k].head - 1) = target.targets.vectors.col(k);
    report.positions.positions = initial.positions;
    report.positions.positions.col(n - 1) = one_to_many_equilibrium(leaders, bearings);
    report.stability.assign(n - 1, StabilityTag::LeaderFixed);
    report.stability.push_back(classify_stability(leaders, bearings));
    report.rate = lambda_min_at(leaders, report.positions.positions.col(n - 1));
    return report;
  }

  if (cls.type == GraphClass::LFF || cls.type == GraphClass::OrderedLFF) {
    const double d21 = (initial.positions.col(1) - initial.positions.col(0)).norm();
    report.positions = cascade_target_configuration(target, initial.positions.col(0), d21);
    report.stability.assign(n, StabilityTag::Stable);
    report.stability[0] = StabilityTag::LeaderFixed;
    double rate = std::numeric_limits<double>::infinity();
    for (int i = 3; i <= n; ++i) {
      const auto heads = target.graph.out_neighbors(i);
      Eigen::MatrixXd leaders(initial.dim(), heads.size());
      for (std::size_t j = 0; j < heads.size(); ++j)
        leaders.col(j) = report.positions.positions.col(heads[j] - 1);
      rate = std::min(rate, lambda_min_at(leaders, report.positions.positions.col(i - 1)));
    }
    if (n >= 3) report.rate = rate;
    return report;
  }

  throw ValidationError("equilibrium report requires a one-to-many or (ordered) LFF graph");
}

}  // namespace bofc
