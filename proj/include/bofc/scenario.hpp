#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bofc/geometry.hpp"
#include "bofc/graph.hpp"
#include "bofc/simulate.hpp"

namespace bofc {

/// Seeded uniform initial conditions. Two modes:
///  - centroid: every agent drawn from one box around `center` (default: the
///    witness centroid) with `half_width` (default: twice the witness
///    diameter);
///  - witness: each agent drawn from a box of `half_width` around its own
///    witness position (a perturbation of the target formation).
struct RandomBoxSpec {
  enum class Mode { Centroid, Witness };
  std::uint64_t seed = 0;
  Mode mode = Mode::Centroid;
  std::optional<Eigen::VectorXd> center;  // centroid mode only
  std::optional<double> half_width;
};

enum class ExpectedOutcome { Converged, Diverged, TimedOut, NotConverged };

std::string to_string(ExpectedOutcome e);
bool outcome_matches(ExpectedOutcome expected, Verdict actual);

/// A complete simulation setup: formation, initial condition (fixed or
/// randomized), integrator settings, and an optional expected outcome.
struct Scenario {
  std::string name;
  int d = 2;
  DirectedSensingGraph graph{1, {}};
  BearingSet targets;  // derived from the witness when a file omits them
  std::optional<Configuration> witness;
  std::optional<Configuration> initial;
  std::optional<RandomBoxSpec> random_box;
  IntegratorSettings settings;
  std::optional<ExpectedOutcome> expected;
};

/// Loads a built-in scenario by name, or a JSON scenario file by path.
/// Throws ParseError for malformed files and ValidationError for violated
/// invariants (non-unit targets, duplicate edges, size mismatches, ...).
Scenario load_scenario(const std::string& path_or_builtin);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

const std::vector<std::string>& builtin_scenario_names();
bool is_builtin_scenario(const std::string& name);
Scenario builtin_scenario(const std::string& name);

TargetFormation target_formation(const Scenario& s);

/// Resolves the initial configuration, drawing from the random box when the
/// scenario has one. The draw is a pure function of the seed.
Configuration initial_configuration(const Scenario& s,
                                    std::optional<std::uint64_t> seed_override = std::nullopt);

/// Writes one row per sample: time, agent positions, bearing error, and
/// per-agent control norms, with 17 significant digits (bit-stable across
/// runs for identical records).
void export_trajectory(const TrajectoryRecord& record, const std::string& path);

/// Sidecar metadata: verdict, seed, sample count, final time and error.
void export_verdict(const TrajectoryRecord& record, const std::string& scenario_name,
                    const std::string& path);

/// Parses a trajectory CSV back; times, configurations, errors, and control
/// norms round-trip exactly. The verdict lives in the sidecar and is not
/// restored.
TrajectoryRecord import_trajectory(const std::string& path);

}  // namespace bofc
