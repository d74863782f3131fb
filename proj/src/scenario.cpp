#include "bofc/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace bofc {

using nlohmann::json;

std::string to_string(ExpectedOutcome e) {
  switch (e) {
    case ExpectedOutcome::Converged: return "Converged";
    case ExpectedOutcome::Diverged: return "Diverged";
    case ExpectedOutcome::TimedOut: return "TimedOut";
    case ExpectedOutcome::NotConverged: return "NotConverged";
  }
  return "Converged";
}

bool outcome_matches(ExpectedOutcome expected, Verdict actual) {
  switch (expected) {
    case ExpectedOutcome::Converged: return actual == Verdict::Converged;
    case ExpectedOutcome::Diverged: return actual == Verdict::Diverged;
    case ExpectedOutcome::TimedOut: return actual == Verdict::TimedOut;
    case ExpectedOutcome::NotConverged: return actual != Verdict::Converged;
  }
  return false;
}

namespace {

ExpectedOutcome outcome_from_string(const std::string& s) {
  if (s == "Converged") return ExpectedOutcome::Converged;
  if (s == "Diverged") return ExpectedOutcome::Diverged;
  if (s == "TimedOut") return ExpectedOutcome::TimedOut;
  if (s == "NotConverged") return ExpectedOutcome::NotConverged;
  throw ValidationError("unknown expected outcome '" + s + "'");
}

json matrix_to_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int c = 0; c < m.cols(); ++c) {
    json row = json::array();
    for (int r = 0; r < m.rows(); ++r) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Canonical configuration fragment: {"d": 2, "positions": [[x,y], ...]}.
json config_to_json(const Eigen::MatrixXd& m) {
  return {{"d", m.rows()}, {"positions", matrix_to_rows(m)}};
}

// Accepts both the canonical fragment and a bare array of points.
Eigen::MatrixXd rows_to_matrix(const json& node, int d, const char* what) {
  const json* rows = &node;
  if (node.is_object()) {
    if (node.at("d").get<int>() != d)
      throw ValidationError(std::string(what) + " declares a dimension other than " +
                            std::to_string(d));
    rows = &node.at("positions");
  }
  if (!rows->is_array() || rows->empty())
    throw ParseError(std::string(what) + " must be a non-empty array of points");
  Eigen::MatrixXd m(d, rows->size());
  for (std::size_t c = 0; c < rows->size(); ++c) {
    const json& row = (*rows)[c];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ValidationError(std::string(what) + " entry " + std::to_string(c) +
                            " does not have dimension " + std::to_string(d));
    for (int r = 0; r < d; ++r) m(r, c) = row[r].get<double>();
  }
  return m;
}

// Deterministic uniform double in [lo, hi) from the raw generator output;
// std::uniform_real_distribution is implementation-defined.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  try {
    Scenario s;
    s.name = j.value("name", "");
    s.d = j.at("d").get<int>();
    if (s.d != 2 && s.d != 3) throw ValidationError("dimension must be 2 or 3");

    const json& jg = j.at("graph");
    std::vector<Edge> edges;
    for (const auto& e : jg.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edges must be [tail, head] pairs");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    s.graph = DirectedSensingGraph(jg.at("n").get<int>(), std::move(edges));

    if (j.contains("witness")) {
      Configuration w;
      w.positions = rows_to_matrix(j.at("witness"), s.d, "witness");
      if (w.agents() != s.graph.vertex_count())
        throw ValidationError("witness agent count does not match graph");
      s.witness = std::move(w);
    }
    if (j.contains("targets")) {
      s.targets.vectors = rows_to_matrix(j.at("targets"), s.d, "targets");
      if (s.targets.count() != s.graph.edge_count())
        throw ValidationError("target count does not match edge count");
      for (int k = 0; k < s.targets.count(); ++k)
        if (std::abs(s.targets.vectors.col(k).norm() - 1.0) > 1e-9)
          throw ValidationError("target norm: bearing " + std::to_string(k) + " is not unit");
    } else if (s.witness) {
      s.targets = bearing_function(s.graph, *s.witness);
    } else {
      throw ValidationError("scenario needs 'targets' or 'witness'");
    }
    if (s.witness) {
      const BearingSet derived = bearing_function(s.graph, *s.witness);
      if ((derived.vectors - s.targets.vectors).cwiseAbs().maxCoeff() > 1e-6)
        throw ValidationError("witness does not realize the target bearings");
    }

    const bool has_initial = j.contains("initial");
    const bool has_random = j.contains("initial_random");
    if (has_initial == has_random)
      throw ValidationError("scenario needs exactly one of 'initial' / 'initial_random'");
    if (has_initial) {
      Configuration c;
      c.positions = rows_to_matrix(j.at("initial"), s.d, "initial");
      if (c.agents() != s.graph.vertex_count())
        throw ValidationError("initial agent count does not match graph");
      s.initial = std::move(c);
    } else {
      const json& jr = j.at("initial_random");
      RandomBoxSpec box;
      box.seed = jr.value("seed", std::uint64_t{0});
      const std::string mode = jr.value("around", "centroid");
      if (mode == "witness")
        box.mode = RandomBoxSpec::Mode::Witness;
      else if (mode != "centroid")
        throw ValidationError("random box 'around' must be 'centroid' or 'witness'");
      if (jr.contains("center")) {
        Eigen::VectorXd c(s.d);
        if (!jr.at("center").is_array() || static_cast<int>(jr.at("center").size()) != s.d)
          throw ValidationError("random box center must have dimension " + std::to_string(s.d));
        for (int r = 0; r < s.d; ++r) c(r) = jr.at("center")[r].get<double>();
        box.center = std::move(c);
      }
      if (jr.contains("half_width")) {
        box.half_width = jr.at("half_width").get<double>();
        if (*box.half_width <= 0) throw ValidationError("random box half_width must be positive");
      }
      if (box.mode == RandomBoxSpec::Mode::Witness && (!s.witness || !box.half_width))
        throw ValidationError("witness-perturbation box needs a witness and a half_width");
      if (box.mode == RandomBoxSpec::Mode::Centroid && !s.witness &&
          (!box.center || !box.half_width))
        throw ValidationError("random box needs a witness or explicit center and half_width");
      s.random_box = std::move(box);
    }

    if (j.contains("settings")) {
      const json& js = j.at("settings");
      s.settings.step = js.value("step", s.settings.step);
      s.settings.t_max = js.value("t_max", s.settings.t_max);
      s.settings.convergence_tol = js.value("convergence_tol", s.settings.convergence_tol);
      s.settings.divergence_radius = js.value("divergence_radius", s.settings.divergence_radius);
      s.settings.record_every = js.value("record_every", s.settings.record_every);
      s.settings.gain = js.value("gain", s.settings.gain);
      if (s.settings.step <= 0 || s.settings.t_max < s.settings.step)
        throw ValidationError("settings require 0 < step <= t_max");
      if (s.settings.convergence_tol <= 0 || s.settings.divergence_radius <= 0)
        throw ValidationError("tolerances must be positive");
      if (s.settings.record_every < 1) throw ValidationError("record_every must be >= 1");
    }

    if (j.contains("expected")) s.expected = outcome_from_string(j.at("expected").get<std::string>());
    return s;
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario field error: ") + e.what());
  }
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["d"] = s.d;
  json edges = json::array();
  for (const Edge& e : s.graph.edges()) edges.push_back({e.tail, e.head});
  j["graph"] = {{"n", s.graph.vertex_count()}, {"edges", std::move(edges)}};
  j["targets"] = matrix_to_rows(s.targets.vectors);
  if (s.witness) j["witness"] = config_to_json(s.witness->positions);
  if (s.initial) j["initial"] = config_to_json(s.initial->positions);
  if (s.random_box) {
    json jr;
    jr["seed"] = s.random_box->seed;
    jr["around"] = s.random_box->mode == RandomBoxSpec::Mode::Witness ? "witness" : "centroid";
    if (s.random_box->center) {
      json c = json::array();
      for (int r = 0; r < s.random_box->center->size(); ++r)
        c.push_back((*s.random_box->center)(r));
      jr["center"] = std::move(c);
    }
    if (s.random_box->half_width) jr["half_width"] = *s.random_box->half_width;
    j["initial_random"] = std::move(jr);
  }
  j["settings"] = {{"step", s.settings.step},
                   {"t_max", s.settings.t_max},
                   {"convergence_tol", s.settings.convergence_tol},
                   {"divergence_radius", s.settings.divergence_radius},
                   {"record_every", s.settings.record_every},
                   {"gain", s.settings.gain}};
  if (s.expected) j["expected"] = to_string(*s.expected);
  return j;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << scenario_to_json(s).dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

Scenario load_scenario(const std::string& path_or_builtin) {
  if (is_builtin_scenario(path_or_builtin)) return builtin_scenario(path_or_builtin);
  std::ifstream in(path_or_builtin);
  if (!in) throw IoError("cannot open scenario '" + path_or_builtin + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid scenario JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

TargetFormation target_formation(const Scenario& s) {
  return make_target_formation(s.graph, s.targets, s.witness);
}

Configuration initial_configuration(const Scenario& s,
                                    std::optional<std::uint64_t> seed_override) {
  if (!s.random_box) {
    if (s.initial) return *s.initial;  // fixed initial; seeds are ignored
    throw ValidationError("scenario '" + s.name + "' has no initial condition");
  }

  std::mt19937_64 rng(seed_override.value_or(s.random_box->seed));
  Configuration c;
  c.positions.resize(s.d, s.graph.vertex_count());

  if (s.random_box->mode == RandomBoxSpec::Mode::Witness) {
    const double hw = *s.random_box->half_width;
    c.positions = s.witness->positions;
    for (int agent = 0; agent < c.agents(); ++agent)
      for (int r = 0; r < s.d; ++r) c.positions(r, agent) += uniform(rng, -hw, hw);
    return c;
  }

  Eigen::VectorXd center;
  double half_width = 0.0;
  if (s.random_box->center) {
    center = *s.random_box->center;
  } else {
    center = s.witness->positions.rowwise().mean();
  }
  if (s.random_box->half_width) {
    half_width = *s.random_box->half_width;
  } else {
    double diameter = 0.0;
    const auto& w = s.witness->positions;
    for (int i = 0; i < w.cols(); ++i)
      for (int j = i + 1; j < w.cols(); ++j)
        diameter = std::max(diameter, (w.col(i) - w.col(j)).norm());
    half_width = 2.0 * diameter;
  }
  for (int agent = 0; agent < c.agents(); ++agent)
    for (int r = 0; r < s.d; ++r)
      c.positions(r, agent) = uniform(rng, center(r) - half_width, center(r) + half_width);
  return c;
}

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void export_trajectory(const TrajectoryRecord& record, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  static const char* axes[3] = {"x", "y", "z"};
  out << "time";
  for (int i = 1; i <= record.agents; ++i)
    for (int r = 0; r < record.dim; ++r) out << ",agent" << i << "_" << axes[r];
  out << ",bearing_error";
  for (int i = 1; i <= record.agents; ++i) out << ",ctrl_norm_agent" << i;
  out << "\n";

  for (std::size_t k = 0; k < record.times.size(); ++k) {
    out << format17(record.times[k]);
    const auto& p = record.configs[k].positions;
    for (int i = 0; i < record.agents; ++i)
      for (int r = 0; r < record.dim; ++r) out << "," << format17(p(r, i));
    out << "," << format17(record.errors[k]);
    for (int i = 0; i < record.agents; ++i) out << "," << format17(record.control_norms[k](i));
    out << "\n";
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void export_verdict(const TrajectoryRecord& record, const std::string& scenario_name,
                    const std::string& path) {
  json j;
  j["scenario"] = scenario_name;
  j["verdict"] = to_string(record.verdict);
  if (record.seed) j["seed"] = *record.seed;
  j["samples"] = record.times.size();
  if (!record.times.empty()) {
    j["final_time"] = record.times.back();
    j["final_error"] = record.errors.back();
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

TrajectoryRecord import_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty trajectory file");
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) columns.push_back(col);
  }
  int agents = 0, dim = 0;
  for (const auto& col : columns) {
    if (col.rfind("agent", 0) == 0 && col.find('_') != std::string::npos) {
      const int idx = std::stoi(col.substr(5));
      agents = std::max(agents, idx);
      const char axis = col.back();
      dim = std::max(dim, axis == 'z' ? 3 : (axis == 'y' ? 2 : 1));
    }
  }
  if (agents == 0 || dim < 2) throw ParseError("trajectory header has no agent columns");

  TrajectoryRecord record;
  record.agents = agents;
  record.dim = dim;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(ss, field, ',')) values.push_back(std::strtod(field.c_str(), nullptr));
    const std::size_t expected = 1 + static_cast<std::size_t>(agents) * dim + 1 + agents;
    if (values.size() != expected)
      throw ParseError("trajectory row has " + std::to_string(values.size()) +
                       " fields, expected " + std::to_string(expected));
    record.times.push_back(values[0]);
    Configuration c;
    c.positions.resize(dim, agents);
    for (int i = 0; i < agents; ++i)
      for (int r = 0; r < dim; ++r) c.positions(r, i) = values[1 + i * dim + r];
    record.configs.push_back(std::move(c));
    record.errors.push_back(values[1 + agents * dim]);
    Eigen::VectorXd norms(agents);
    for (int i = 0; i < agents; ++i) norms(i) = values[2 + agents * dim + i];
    record.control_norms.push_back(std::move(norms));
  }
  return record;
}

}  // namespace bofc
