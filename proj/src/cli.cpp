#include "bofc/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>

#include "bofc/equilibrium.hpp"
#include "bofc/scenario.hpp"
#include "bofc/simulate.hpp"

namespace bofc {

using nlohmann::json;

namespace {

struct SettingsOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  std::optional<double> t_max;
  std::optional<double> tol;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Override the random-box seed");
    cmd->add_option("--step", step, "Integrator step size");
    cmd->add_option("--t-max", t_max, "Integration horizon");
    cmd->add_option("--tol", tol, "Convergence tolerance on the bearing error");
  }

  void apply(Scenario& s) const {
    if (step) s.settings.step = *step;
    if (t_max) s.settings.t_max = *t_max;
    if (tol) s.settings.convergence_tol = *tol;
    if (s.settings.step <= 0 || s.settings.t_max < s.settings.step)
      throw ValidationError("overrides require 0 < step <= t_max");
    if (s.settings.convergence_tol <= 0)
      throw ValidationError("convergence tolerance must be positive");
  }
};

DirectedSensingGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid graph JSON: ") + e.what());
  }
  try {
    const json& jg = j.contains("graph") ? j.at("graph") : j;
    std::vector<Edge> edges;
    for (const auto& e : jg.at("edges")) edges.push_back({e[0].get<int>(), e[1].get<int>()});
    return {jg.at("n").get<int>(), std::move(edges)};
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph field error: ") + e.what());
  }
}

// Configuration fragment {"d": ..., "positions": [[...], ...]}
json configuration_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int c = 0; c < m.cols(); ++c) {
    json row = json::array();
    for (int r = 0; r < m.rows(); ++r) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return {{"d", m.rows()}, {"positions", std::move(rows)}};
}

int cmd_classify(const std::string& path, std::ostream& out) {
  const GraphClassification c = classify(load_graph_file(path));
  json j;
  j["class"] = to_string(c.type);
  if (c.leader) j["leader"] = *c.leader;
  if (c.first_follower) j["first_follower"] = *c.first_follower;
  if (c.type == GraphClass::LFF) j["also_ordered_lff"] = c.also_ordered_lff;
  j["violations"] = c.violations;
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_equilibrium(const std::string& name, const SettingsOverrides& overrides,
                    std::ostream& out) {
  Scenario s = load_scenario(name);
  overrides.apply(s);
  const EquilibriumReport report =
      equilibrium_report(target_formation(s), initial_configuration(s, overrides.seed));
  json j;
  j["scenario"] = s.name;
  j["positions"] = configuration_json(report.positions.positions);
  json tags = json::array();
  for (const auto t : report.stability) tags.push_back(to_string(t));
  j["stability"] = std::move(tags);
  if (report.rate) j["lambda_min"] = *report.rate;
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_nullspace(const std::string& name, const std::optional<std::string>& dump_dir,
                  std::ostream& out) {
  const Scenario s = load_scenario(name);
  const auto cls = classify(s.graph);
  if (cls.type != GraphClass::OneToMany)
    throw ValidationError("nullspace analysis requires a one-to-many scenario");

  const int n = s.graph.vertex_count();
  Eigen::MatrixXd bearings(s.d, n - 1);
  for (int k = 0; k < s.graph.edge_count(); ++k)
    bearings.col(s.graph.edges()[k].head - 1) = s.targets.vectors.col(k);
  const NullSpaceBasis basis = null_space_basis(bearings);

  json j;
  j["scenario"] = s.name;
  j["n"] = n;
  j["d"] = basis.dim;
  j["kernel_dimension"] = basis.kernel_dimension();
  j["free_coefficients"] = basis.free_count;
  j["residual_bearing"] = basis.residual_bearing;
  j["residual_mixing"] = basis.residual_mixing;
  out << j.dump(2) << "\n";

  if (dump_dir) {
    std::filesystem::create_directories(*dump_dir);
    const auto dump = [&](const char* file, const Eigen::MatrixXd& m) {
      std::ofstream f(*dump_dir + "/" + file);
      if (!f) throw IoError(std::string("cannot write ") + file);
      for (int c = 0; c < m.cols(); ++c) f << (c ? "," : "") << "col" << c;
      if (m.cols() == 0) f << "empty";
      f << "\n";
      for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
          f << (c ? "," : "") << buf;
        }
        f << "\n";
      }
    };
    dump("projection_stack.csv", basis.projection_stack);
    dump("bearing_diag.csv", basis.bearing_diag);
    dump("complement_diag.csv", basis.complement_diag);
    dump("mixing.csv", basis.mixing);
  }
  return 0;
}

int cmd_simulate(const std::string& name, const std::string& out_dir, int seeds,
                 const SettingsOverrides& overrides, std::ostream& out) {
  Scenario s = load_scenario(name);
  overrides.apply(s);
  const TargetFormation target = target_formation(s);
  std::filesystem::create_directories(out_dir);

  int mismatches = 0;
  json summary;
  summary["scenario"] = s.name;
  json runs = json::array();

  const int run_count = std::max(1, seeds);
  for (int k = 0; k < run_count; ++k) {
    std::optional<std::uint64_t> seed;
    if (seeds > 0)
      seed = static_cast<std::uint64_t>(k);
    else if (overrides.seed)
      seed = overrides.seed;
    TrajectoryRecord record = integrate(target, initial_configuration(s, seed), s.settings);
    record.seed = seed;

    const std::string dir = seeds > 0 ? out_dir + "/seed" + std::to_string(k) : out_dir;
    std::filesystem::create_directories(dir);
    export_trajectory(record, dir + "/trajectory.csv");
    export_verdict(record, s.name, dir + "/verdict.json");

    const bool ok = !s.expected || outcome_matches(*s.expected, record.verdict);
    mismatches += !ok;
    json r;
    r["verdict"] = to_string(record.verdict);
    if (seed) r["seed"] = *seed;
    r["final_error"] = record.errors.back();
    r["matches_expected"] = ok;
    runs.push_back(std::move(r));
  }
  summary["runs"] = std::move(runs);
  if (s.expected) summary["expected"] = to_string(*s.expected);
  out << summary.dump(2) << "\n";
  return mismatches == 0 ? 0 : 1;
}

int cmd_compare(const std::string& name_a, const std::string& name_b,
                const SettingsOverrides& overrides, std::ostream& out) {
  Scenario sa = load_scenario(name_a);
  Scenario sb = load_scenario(name_b);
  overrides.apply(sa);
  overrides.apply(sb);
  const Configuration initial = initial_configuration(sa, overrides.seed);
  const ConvergenceComparison cmp =
      compare_convergence(target_formation(sa), target_formation(sb), initial, sa.settings);

  json j;
  j["scenario_a"] = sa.name;
  j["scenario_b"] = sb.name;
  j["verdict_a"] = to_string(cmp.verdict_a);
  j["verdict_b"] = to_string(cmp.verdict_b);
  if (cmp.time_to_tol_a) j["time_to_tol_a"] = *cmp.time_to_tol_a;
  if (cmp.time_to_tol_b) j["time_to_tol_b"] = *cmp.time_to_tol_b;
  j["b_no_slower"] = cmp.b_no_slower;
  json matched = json::array();
  for (std::size_t i = 0; i < cmp.times.size(); ++i)
    matched.push_back({{"t", cmp.times[i]}, {"error_a", cmp.errors_a[i]}, {"error_b", cmp.errors_b[i]}});
  j["matched_errors"] = std::move(matched);
  out << j.dump(2) << "\n";
  return cmp.b_no_slower ? 0 : 1;
}

int cmd_paper(const std::string& name, std::ostream& out) {
  const ScenarioReport report = run_paper_scenario(name);
  out << (report.passed ? "PASS" : "FAIL") << " " << report.name << "\n";
  for (const auto& line : report.lines) out << "  " << line << "\n";
  return report.passed ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bearing-only formation control over directed sensing graphs"};
  app.require_subcommand(1);

  std::string graph_path;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a sensing graph JSON file");
  classify_cmd->add_option("graph", graph_path, "Path to a graph JSON file")->required();

  std::string eq_scenario;
  SettingsOverrides eq_overrides;
  auto* eq_cmd = app.add_subcommand("equilibrium", "Closed-form equilibrium of a scenario");
  eq_cmd->add_option("scenario", eq_scenario, "Scenario file or built-in name")->required();
  eq_overrides.add_flags(eq_cmd);

  std::string ns_scenario;
  std::optional<std::string> ns_dump;
  auto* ns_cmd = app.add_subcommand("nullspace", "Equilibrium-set basis of a one-to-many scenario");
  ns_cmd->add_option("scenario", ns_scenario, "Scenario file or built-in name")->required();
  ns_cmd->add_option("--dump", ns_dump, "Directory for the basis matrices as CSV");

  std::string sim_scenario, sim_out = "out";
  int sim_seeds = 0;
  SettingsOverrides sim_overrides;
  auto* sim_cmd = app.add_subcommand("simulate", "Integrate a scenario and export the trajectory");
  sim_cmd->add_option("scenario", sim_scenario, "Scenario file or built-in name")->required();
  sim_cmd->add_option("--out", sim_out, "Output directory");
  sim_cmd->add_option("--seeds", sim_seeds, "Run seeds 0..N-1 instead of a single run");
  sim_overrides.add_flags(sim_cmd);

  std::string cmp_a, cmp_b;
  SettingsOverrides cmp_overrides;
  auto* cmp_cmd = app.add_subcommand("compare", "Convergence comparison of nested formations");
  cmp_cmd->add_option("scenario-a", cmp_a, "Scenario file or built-in name")->required();
  cmp_cmd->add_option("scenario-b", cmp_b, "Scenario file or built-in name")->required();
  cmp_overrides.add_flags(cmp_cmd);

  std::string paper_name;
  bool paper_list = false;
  auto* paper_cmd = app.add_subcommand("paper", "Run a built-in reproduction and report pass/fail");
  paper_cmd->add_option("name", paper_name, "Built-in scenario name");
  paper_cmd->add_flag("--list", paper_list, "List built-in scenario names");

  std::vector<std::string> argv_like = args;
  std::reverse(argv_like.begin(), argv_like.end());
  try {
    app.parse(argv_like);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(graph_path, out);
    if (eq_cmd->parsed()) return cmd_equilibrium(eq_scenario, eq_overrides, out);
    if (ns_cmd->parsed()) return cmd_nullspace(ns_scenario, ns_dump, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim_scenario, sim_out, sim_seeds, sim_overrides, out);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_overrides, out);
    if (paper_cmd->parsed()) {
      if (paper_list) {
        for (const auto& n : builtin_scenario_names()) out << n << "\n";
        return 0;
      }
      if (paper_name.empty()) {
        err << "paper: missing scenario name\n";
        return 2;
      }
      return cmd_paper(paper_name, out);
    }
  } catch (const UnknownScenario& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace bofc
