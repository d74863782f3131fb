#include "bofc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bofc/equilibrium.hpp"
#include "bofc/scenario.hpp"

namespace bofc {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::Diverged: return "Diverged";
    case Verdict::TimedOut: return "TimedOut";
  }
  return "TimedOut";
}

namespace {

Eigen::MatrixXd control_field(const Eigen::MatrixXd& positions, const TargetFormation& target,
                              double gain) {
  Configuration c{positions};
  return gain * stacked_control(c, target).velocities;
}

void record_sample(TrajectoryRecord& record, double t, const Eigen::MatrixXd& positions,
                   double error, const TargetFormation& target, double gain) {
  Configuration c{positions};
  const ControlVector u = stacked_control(c, target);
  record.times.push_back(t);
  record.configs.push_back(std::move(c));
  record.errors.push_back(error);
  record.control_norms.push_back(gain * u.velocities.colwise().norm().transpose());
}

}  // namespace

TrajectoryRecord integrate(const TargetFormation& target, const Configuration& initial,
                           const IntegratorSettings& settings) {
  if (settings.step <= 0 || settings.t_max <= 0 || settings.step > settings.t_max)
    throw ValidationError("integrator requires 0 < step <= t_max");
  if (settings.record_every < 1) throw ValidationError("record_every must be >= 1");
  if (initial.agents() != target.graph.vertex_count())
    throw DimensionMismatch("initial configuration does not match the graph");

  const double h = settings.step;
  TrajectoryRecord record;
  record.agents = initial.agents();
  record.dim = initial.dim();

  Eigen::MatrixXd p = initial.positions;
  // Throws CoincidentAgents if the initial configuration is degenerate.
  double error = bearing_error(bearing_function(target.graph, Configuration{p}), target.targets);
  record_sample(record, 0.0, p, error, target, settings.gain);
  if (error < settings.convergence_tol) {
    record.verdict = Verdict::Converged;
    return record;
  }

  const long total_steps = static_cast<long>(std::floor(settings.t_max / h + 1e-9));
  record.verdict = Verdict::TimedOut;
  for (long k = 1; k <= total_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    bool coincided = false;
    try {
      const Eigen::MatrixXd k1 = control_field(p, target, settings.gain);
      const Eigen::MatrixXd k2 = control_field(p + (0.5 * h) * k1, target, settings.gain);
      const Eigen::MatrixXd k3 = control_field(p + (0.5 * h) * k2, target, settings.gain);
      const Eigen::MatrixXd k4 = control_field(p + h * k3, target, settings.gain);
      p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      error = bearing_error(bearing_function(target.graph, Configuration{p}), target.targets);
    } catch (const CoincidentAgents&) {
      coincided = true;
    }

    if (coincided) {
      record.verdict = Verdict::Diverged;
      break;
    }
    const bool diverged =
        !p.allFinite() || p.colwise().norm().maxCoeff() > settings.divergence_radius;
    const bool converged = error < settings.convergence_tol;
    if (diverged || converged || k == total_steps || k % settings.record_every == 0)
      record_sample(record, t, p, error, target, settings.gain);
    if (diverged) {
      record.verdict = Verdict::Diverged;
      break;
    }
    if (converged) {
      record.verdict = Verdict::Converged;
      break;
    }
  }
  return record;
}

namespace {

// R^2 of a least-squares line through (t, log e) over the mid-trajectory:
// samples with 5*tol <= e <= e0/2.
double log_error_fit_r2(const TrajectoryRecord& record, double tol) {
  const double upper = record.errors.front() / 2.0;
  const double lower = std::max(5.0 * tol, 1e-12);
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    if (record.errors[i] >= lower && record.errors[i] <= upper) {
      ts.push_back(record.times[i]);
      ys.push_back(std::log(record.errors[i]));
    }
  }
  if (ts.size() < 3) return 0.0;
  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double cov = sty - st * sy / n;
  const double var_t = stt - st * st / n;
  const double var_y = syy - sy * sy / n;
  if (var_t <= 0 || var_y <= 0) return 0.0;
  return (cov * cov) / (var_t * var_y);
}

struct BatchStats {
  int converged = 0;
  double mean_final_error = 0.0;
  std::vector<Verdict> verdicts;
  TrajectoryRecord first;
};

BatchStats run_batch(const Scenario& scenario, int seeds) {
  BatchStats stats;
  const TargetFormation target = target_formation(scenario);
  double error_sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    TrajectoryRecord record =
        integrate(target, initial_configuration(scenario, static_cast<std::uint64_t>(s)),
                  scenario.settings);
    record.seed = static_cast<std::uint64_t>(s);
    stats.converged += (record.verdict == Verdict::Converged);
    error_sum += record.errors.back();
    stats.verdicts.push_back(record.verdict);
    if (s == 0) stats.first = std::move(record);
  }
  stats.mean_final_error = error_sum / seeds;
  return stats;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

ScenarioReport run_paper_scenario(const std::string& name) {
  const Scenario scenario = builtin_scenario(name);
  ScenarioReport report;
  report.name = name;

  if (name == "one-to-many-5") {
    const TargetFormation target = target_formation(scenario);
    report.record = integrate(target, initial_configuration(scenario), scenario.settings);
    report.seeds = 1;
    report.converged = (report.record.verdict == Verdict::Converged);
    report.verdicts = {report.record.verdict};
    report.mean_final_error = report.record.errors.back();

    const Eigen::Vector2d expected(1.0, 1.0);
    const Eigen::VectorXd final_follower = report.record.configs.back().positions.col(5);
    const double position_error = (final_follower - expected).norm();
    const double r2 = log_error_fit_r2(report.record, scenario.settings.convergence_tol);
    const bool conv = report.record.verdict == Verdict::Converged;
    const bool close = position_error <= 1e-3;
    const bool exponential = r2 >= 0.99;
    report.passed = conv && close && exponential;
    report.lines.push_back("verdict " + to_string(report.record.verdict));
    report.lines.push_back("final follower distance to (1,1): " + format_double(position_error) +
                           (close ? " <= 1e-3" : " > 1e-3"));
    report.lines.push_back("log-error linear fit R^2 = " + format_double(r2) +
                           (exponential ? " >= 0.99" : " < 0.99"));
    return report;
  }

  if (name == "one-to-many-5-symmetric") {
    const TargetFormation target = target_formation(scenario);
    report.record = integrate(target, initial_configuration(scenario), scenario.settings);
    report.seeds = 1;
    report.converged = (report.record.verdict == Verdict::Converged);
    report.verdicts = {report.record.verdict};
    report.mean_final_error = report.record.errors.back();

    const Eigen::Vector2d equilibrium(1.0, 1.0);
    const double initial_dist =
        (report.record.configs.front().positions.col(5) - equilibrium).norm();
    double max_dist = 0.0;
    for (const Configuration& c : report.record.configs)
      max_dist = std::max(max_dist, (c.positions.col(5) - equilibrium).norm());
    const bool not_converged = report.record.verdict != Verdict::Converged;
    const bool grew = max_dist >= 10.0 * initial_dist;
    report.passed = not_converged && grew;
    report.lines.push_back("verdict " + to_string(report.record.verdict) +
                           (not_converged ? " (!= Converged)" : " (unexpectedly converged)"));
    report.lines.push_back("distance to (1,1) grew " + format_double(max_dist / initial_dist) +
                           "x" + (grew ? " >= 10x" : " < 10x"));
    return report;
  }

  if (name == "hexagon-good" || name == "hexagon-bad") {
    const int seeds = 50;
    BatchStats stats = run_batch(scenario, seeds);
    report.seeds = seeds;
    report.converged = stats.converged;
    report.mean_final_error = stats.mean_final_error;
    report.verdicts = std::move(stats.verdicts);
    report.record = std::move(stats.first);
    if (name == "hexagon-good") {
      report.passed = stats.converged >= 45;
      report.lines.push_back(std::to_string(report.converged) + "/" + std::to_string(seeds) +
                             " seeds converged (need >= 45)");
    } else {
      report.passed = stats.converged < seeds;
      report.lines.push_back(std::to_string(seeds - report.converged) + "/" +
                             std::to_string(seeds) + " seeds failed to converge (need >= 1)");
    }
    report.lines.push_back("mean final bearing error " + format_double(report.mean_final_error));
    return report;
  }

  if (name == "lff-8" || name == "olff-8") {
    const TargetFormation target = target_formation(scenario);
    report.record = integrate(target, initial_configuration(scenario), scenario.settings);
    report.seeds = 1;
    report.converged = (report.record.verdict == Verdict::Converged);
    report.verdicts = {report.record.verdict};
    report.mean_final_error = report.record.errors.back();
    report.passed = report.record.verdict == Verdict::Converged;
    report.lines.push_back("verdict " + to_string(report.record.verdict));
    report.lines.push_back("final bearing error " + format_double(report.mean_final_error));
    return report;
  }

  if (name == "unordered-8") {
    const int seeds = 20;
    BatchStats stats = run_batch(scenario, seeds);
    report.seeds = seeds;
    report.converged = stats.converged;
    report.mean_final_error = stats.mean_final_error;
    report.verdicts = std::move(stats.verdicts);
    report.record = std::move(stats.first);
    report.passed = stats.converged >= 18;
    report.lines.push_back(std::to_string(report.converged) + "/" + std::to_string(seeds) +
                           " seeds converged (need >= 18)");
    report.lines.push_back("mean final bearing error " + format_double(report.mean_final_error));
    return report;
  }

  throw UnknownScenario("no built-in scenario named '" + name + "'");
}

ConvergenceComparison compare_convergence(const TargetFormation& a, const TargetFormation& b,
                                          const Configuration& shared_initial,
                                          const IntegratorSettings& settings) {
  if (a.graph.vertex_count() != b.graph.vertex_count())
    throw NotSubgraph("vertex counts differ");
  for (std::size_t i = 0; i < a.graph.edges().size(); ++i) {
    const Edge& e = a.graph.edges()[i];
    const auto& bedges = b.graph.edges();
    const auto it = std::find(bedges.begin(), bedges.end(), e);
    if (it == bedges.end())
      throw NotSubgraph("edge (" + std::to_string(e.tail) + "," + std::to_string(e.head) +
                        ") of the first graph is missing from the second");
    const auto kb = static_cast<int>(it - bedges.begin());
    if ((a.targets.vectors.col(static_cast<int>(i)) - b.targets.vectors.col(kb)).norm() > 1e-9)
      throw MismatchedTargets("shared edge (" + std::to_string(e.tail) + "," +
                              std::to_string(e.head) + ") carries different target bearings");
  }
  for (const TargetFormation* t : {&a, &b}) {
    const auto cls = classify(t->graph);
    if (cls.type != GraphClass::LFF && cls.type != GraphClass::OrderedLFF)
      throw NotOrderedLFF("comparison requires (ordered) LFF graphs");
  }

  const TrajectoryRecord ra = integrate(a, shared_initial, settings);
  const TrajectoryRecord rb = integrate(b, shared_initial, settings);

  ConvergenceComparison cmp;
  cmp.verdict_a = ra.verdict;
  cmp.verdict_b = rb.verdict;
  // Both runs share the step grid, but an early stop records its (possibly
  // unaligned) crossing step; pair samples only while the times agree.
  const std::size_t upper = std::min(ra.times.size(), rb.times.size());
  for (std::size_t i = 0; i < upper && ra.times[i] == rb.times[i]; ++i) {
    cmp.times.push_back(ra.times[i]);
    cmp.errors_a.push_back(ra.errors[i]);
    cmp.errors_b.push_back(rb.errors[i]);
  }
  if (ra.verdict == Verdict::Converged) cmp.time_to_tol_a = ra.times.back();
  if (rb.verdict == Verdict::Converged) cmp.time_to_tol_b = rb.times.back();
  cmp.b_no_slower = cmp.time_to_tol_b.has_value() &&
                    (!cmp.time_to_tol_a.has_value() || *cmp.time_to_tol_b <= *cmp.time_to_tol_a);
  return cmp;
}

}  // namespace bofc
