#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bofc/control.hpp"
#include "bofc/geometry.hpp"

namespace bofc {

struct IntegratorSettings {
  double step = 0.01;
  double t_max = 50.0;
  double convergence_tol = 1e-3;   // on the stacked bearing error
  double divergence_radius = 1e6;  // on any single agent position norm
  int record_every = 1;            // steps per recorded sample
  double gain = 1.0;               // global scalar gain on the control law
};

enum class Verdict { Converged, Diverged, TimedOut };

std::string to_string(Verdict v);

/// Time-sampled states of one closed-loop run. All per-sample vectors have
/// equal length and strictly increasing times; t = 0 and the final step are
/// always recorded.
struct TrajectoryRecord {
  int agents = 0;
  int dim = 0;
  std::vector<double> times;
  std::vector<Configuration> configs;
  std::vector<double> errors;                    // stacked bearing error
  std::vector<Eigen::VectorXd> control_norms;    // per-agent |u_i|, gain applied
  Verdict verdict = Verdict::TimedOut;
  std::optional<std::uint64_t> seed;             // metadata only
};

/// Classical fixed-step 4th-order integration of p' = gain * u(p). Stops
/// early with Converged when the bearing error falls below the tolerance, or
/// with Diverged when an agent leaves the divergence radius or two connected
/// agents coincide mid-run. Deterministic: identical inputs produce
/// bit-identical records. Throws CoincidentAgents only for a degenerate
/// initial configuration.
TrajectoryRecord integrate(const TargetFormation& target, const Configuration& initial,
                           const IntegratorSettings& settings);

/// Outcome of one built-in reproduction run (possibly a batch over seeds).
struct ScenarioReport {
  std::string name;
  bool passed = false;
  std::vector<std::string> lines;
  int seeds = 0;
  int converged = 0;
  double mean_final_error = 0.0;
  std::vector<Verdict> verdicts;  // one per seed
  TrajectoryRecord record;        // first seed's record
};

/// Runs a built-in scenario with its pinned settings and checks the
/// scenario's expected outcome. Throws UnknownScenario for unknown names.
ScenarioReport run_paper_scenario(const std::string& name);

struct ConvergenceComparison {
  std::vector<double> times;  // matched sample times (common prefix)
  std::vector<double> errors_a;
  std::vector<double> errors_b;
  Verdict verdict_a = Verdict::TimedOut;
  Verdict verdict_b = Verdict::TimedOut;
  std::optional<double> time_to_tol_a;
  std::optional<double> time_to_tol_b;
  bool b_no_slower = false;
};

/// Runs two ordered-LFF formations from the same initial configuration.
/// The graph of `a` must be a subgraph of `b`'s and shared edges must carry
/// equal target bearings.
ConvergenceComparison compare_convergence(const TargetFormation& a, const TargetFormation& b,
                                          const Configuration& shared_initial,
                                          const IntegratorSettings& settings);

}  // namespace bofc
