#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bofc/equilibrium.hpp"
#include "bofc/geometry.hpp"
#include "bofc/graph.hpp"

namespace testsup {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + static_cast<double>(rng() >> 11) * 0x1.0p-53 * (hi - lo);
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int d, double lo, double hi) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

inline Eigen::VectorXd random_unit(std::mt19937_64& rng, int d) {
  for (;;) {
    Eigen::VectorXd v = random_vector(rng, d, -1.0, 1.0);
    const double n = v.norm();
    if (n > 0.1 && n <= 1.0) return v / n;
  }
}

// The 8-vertex graphs used throughout: a strict LFF edge set, its ordered
// extension (three extra forward edges), and the unordered extension (5->8).
inline bofc::DirectedSensingGraph lff8_graph() {
  return {8, {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {5, 2}, {5, 3},
              {6, 2}, {6, 4}, {7, 5}, {7, 6}, {8, 6}, {8, 7}}};
}

inline bofc::DirectedSensingGraph olff8_graph() {
  auto edges = lff8_graph().edges();
  edges.insert(edges.end(), {{5, 4}, {6, 5}, {7, 4}});
  return {8, edges};
}

inline bofc::DirectedSensingGraph unordered8_graph() {
  auto edges = olff8_graph().edges();
  edges.push_back({5, 8});
  return {8, edges};
}

inline bofc::DirectedSensingGraph star_graph(int n) {
  std::vector<bofc::Edge> edges;
  for (int i = 1; i < n; ++i) edges.push_back({n, i});
  return {n, edges};
}

// Pentagon one-to-many instance: five leaders on rays from (1,1) along the
// fifth roots of unity, distances 2.0, 1.3, 1.6, 1.8, 1.5. The generating
// values are exact, so the follower equilibrium is (1,1) to machine
// precision.
struct PentagonInstance {
  Eigen::MatrixXd leaders;  // 2 x 5
  Eigen::MatrixXd targets;  // 2 x 5
  Eigen::Vector2d follower{1.0, 1.0};
};

inline PentagonInstance pentagon_instance() {
  PentagonInstance p;
  p.leaders.resize(2, 5);
  p.targets.resize(2, 5);
  const double angles[5] = {2 * std::numbers::pi / 5, 4 * std::numbers::pi / 5,
                            6 * std::numbers::pi / 5, 8 * std::numbers::pi / 5, 0.0};
  const double distances[5] = {2.0, 1.3, 1.6, 1.8, 1.5};
  for (int j = 0; j < 5; ++j) {
    const Eigen::Vector2d dir(std::cos(angles[j]), std::sin(angles[j]));
    p.targets.col(j) = dir;
    p.leaders.col(j) = p.follower + distances[j] * dir;
  }
  return p;
}

// Random strict-LFF graph: vertex 2 points at the leader, every later vertex
// picks two distinct smaller-labeled heads.
inline bofc::DirectedSensingGraph random_lff_graph(std::mt19937_64& rng, int n) {
  std::vector<bofc::Edge> edges = {{2, 1}};
  for (int i = 3; i <= n; ++i) {
    const int a = 1 + static_cast<int>(rng() % (i - 1));
    int b = 1 + static_cast<int>(rng() % (i - 2));
    if (b >= a) ++b;
    edges.push_back({i, a});
    edges.push_back({i, b});
  }
  return {n, edges};
}

// Coefficients (a, b) on the unit-norm constraint surface of the solution
// form, bounded away from (1, 0). Used as the statistical oracle for the
// realizability lemma.
struct FeasibleCoefficients {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

inline FeasibleCoefficients sample_feasible(const bofc::NullSpaceBasis& basis,
                                            std::mt19937_64& rng) {
  const int k = basis.leaders;
  const int m = basis.free_count;
  const int d = basis.dim;
  for (;;) {
    Eigen::VectorXd b = m == 0 ? Eigen::VectorXd(0) : random_vector(rng, m, -1.0, 1.0);
    // Scale b so every per-leader mixing contribution stays inside the unit
    // ball, then pick radial coefficients on the constraint surface.
    double max_mix = 0.0;
    std::vector<Eigen::VectorXd> mixes(k);
    for (int i = 0; i < k; ++i) {
      mixes[i] = m == 0 ? Eigen::VectorXd::Zero(d - 1)
                        : Eigen::VectorXd(basis.mixing.middleRows((d - 1) * i, d - 1) * b);
      max_mix = std::max(max_mix, mixes[i].norm());
    }
    if (max_mix > 0.0) {
      const double shrink = uniform(rng, 0.0, 0.999) / max_mix;
      b *= shrink;
      for (auto& mix : mixes) mix *= shrink;
    }
    Eigen::VectorXd a(k);
    for (int i = 0; i < k; ++i) {
      const double s = std::sqrt(std::max(0.0, 1.0 - mixes[i].squaredNorm()));
      a(i) = (rng() & 1) ? s : -s;
    }
    const bool near_identity =
        (a.array() - 1.0).abs().maxCoeff() < 1e-2 && (m == 0 || b.cwiseAbs().maxCoeff() < 1e-2);
    if (!near_identity) return {a, b};
  }
}

}  // namespace testsup
