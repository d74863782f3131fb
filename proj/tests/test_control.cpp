#include <doctest.h>

#include <random>

#include "bofc/control.hpp"
#include "bofc/scenario.hpp"
#include "support.hpp"

using namespace bofc;

namespace {

TargetFormation pentagon_formation() {
  const auto pent = testsup::pentagon_instance();
  Configuration w;
  w.positions.resize(2, 6);
  w.positions.leftCols(5) = pent.leaders;
  w.positions.col(5) = pent.follower;
  BearingSet targets;
  targets.vectors = pent.targets;
  return make_target_formation(testsup::star_graph(6), targets, w);
}

TargetFormation octagon_formation() {
  const Scenario s = builtin_scenario("olff-8");
  return target_formation(s);
}

}  // namespace

TEST_CASE("control vanishes at a witness configuration") {
  for (const TargetFormation& tf : {pentagon_formation(), octagon_formation()}) {
    const Configuration& w = *tf.witness;
    const ControlVector u = stacked_control(w, tf);
    CHECK(u.velocities.cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 1; i <= w.agents(); ++i)
      CHECK(agent_control(i, w, tf).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("agents without out-edges hold position exactly") {
  const TargetFormation tf = octagon_formation();
  std::mt19937_64 rng(1);
  Configuration p = *tf.witness;
  for (int i = 0; i < p.agents(); ++i)
    p.positions.col(i) += testsup::random_vector(rng, 2, -1, 1);
  CHECK(agent_control(1, p, tf).cwiseAbs().maxCoeff() == 0.0);
  CHECK(stacked_control(p, tf).velocities.col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-leader follower control matches a hand evaluation") {
  // leaders at (0,0) and (2,0), follower at (1, 0.5); the two projected
  // targets work out to (0.14142, -0.28284) and (-0.14142, -0.28284), so
  // u_3 = (0, 0.56568).
  const DirectedSensingGraph g(3, {{3, 1}, {3, 2}});
  Configuration p;
  p.positions.resize(2, 3);
  p.positions << 0, 2, 1, 0, 0, 0.5;
  BearingSet targets;
  targets.vectors.resize(2, 2);
  targets.vectors << -0.7071, 0.7071, -0.7071, -0.7071;
  TargetFormation tf{g, targets, std::nullopt};

  const Eigen::VectorXd u3 = agent_control(3, p, tf);
  CHECK(u3(0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(u3(1) == doctest::Approx(0.56568).epsilon(1e-9));
  CHECK((stacked_control(p, tf).velocities.col(2) - u3).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("negating the target bearings flips the control sign exactly") {
  const TargetFormation tf = octagon_formation();
  std::mt19937_64 rng(2);
  Configuration p = *tf.witness;
  for (int i = 0; i < p.agents(); ++i)
    p.positions.col(i) += testsup::random_vector(rng, 2, -1, 1);

  TargetFormation negated{tf.graph, BearingSet{-tf.targets.vectors}, std::nullopt};
  const Eigen::MatrixXd u = stacked_control(p, tf).velocities;
  const Eigen::MatrixXd v = stacked_control(p, negated).velocities;
  CHECK((u + v).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("control is linear in the target bearings") {
  const DirectedSensingGraph g = testsup::star_graph(5);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Configuration p;
    p.positions.resize(2, 5);
    for (int i = 0; i < 5; ++i) p.positions.col(i) = testsup::random_vector(rng, 2, -3, 3);

    BearingSet ga, gb, gc;
    ga.vectors.resize(2, 4);
    gb.vectors.resize(2, 4);
    for (int k = 0; k < 4; ++k) {
      ga.vectors.col(k) = testsup::random_unit(rng, 2);
      gb.vectors.col(k) = testsup::random_unit(rng, 2);
    }
    const double alpha = testsup::uniform(rng, -2, 2);
    const double beta = testsup::uniform(rng, -2, 2);
    gc.vectors = alpha * ga.vectors + beta * gb.vectors;

    const Eigen::MatrixXd ua = stacked_control(p, {g, ga, std::nullopt}).velocities;
    const Eigen::MatrixXd ub = stacked_control(p, {g, gb, std::nullopt}).velocities;
    const Eigen::MatrixXd uc = stacked_control(p, {g, gc, std::nullopt}).velocities;
    CHECK((uc - alpha * ua - beta * ub).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("per-agent assembly agrees with the stacked control") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testsup::random_lff_graph(rng, 6);
    Configuration p;
    p.positions.resize(2, 6);
    for (int i = 0; i < 6; ++i) p.positions.col(i) = testsup::random_vector(rng, 2, -3, 3);
    BearingSet targets;
    targets.vectors.resize(2, g.edge_count());
    for (int k = 0; k < g.edge_count(); ++k) targets.vectors.col(k) = testsup::random_unit(rng, 2);
    const TargetFormation tf{g, targets, std::nullopt};

    const ControlVector u = stacked_control(p, tf);
    for (int i = 1; i <= 6; ++i)
      CHECK((u.velocities.col(i - 1) - agent_control(i, p, tf)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("control vanishes whenever the targets equal the measured bearings") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testsup::random_lff_graph(rng, 6);
    Configuration p;
    p.positions.resize(2, 6);
    for (int i = 0; i < 6; ++i) p.positions.col(i) = testsup::random_vector(rng, 2, -3, 3);
    const TargetFormation tf{g, bearing_function(g, p), std::nullopt};
    CHECK(stacked_control(p, tf).velocities.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("first-follower velocity stays orthogonal to its bearing") {
  const TargetFormation tf = octagon_formation();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Configuration p = *tf.witness;
    for (int i = 0; i < p.agents(); ++i)
      p.positions.col(i) += testsup::random_vector(rng, 2, -2, 2);
    const Eigen::Vector2d g21 = bearing(p.positions.col(1), p.positions.col(0));
    CHECK(std::abs(agent_control(2, p, tf).dot(g21)) < 1e-12);
  }
}

TEST_CASE("coincident neighbors raise an error naming the sensing agent") {
  const DirectedSensingGraph g(2, {{2, 1}});
  Configuration p;
  p.positions.resize(2, 2);
  p.positions << 0, 0, 0, 0;
  BearingSet targets;
  targets.vectors.resize(2, 1);
  targets.vectors << 1, 0;
  const TargetFormation tf{g, targets, std::nullopt};
  CHECK_THROWS_AS(agent_control(2, p, tf), CoincidentAgents);
  try {
    stacked_control(p, tf);
    FAIL("expected CoincidentAgents");
  } catch (const CoincidentAgents& e) {
    CHECK(e.edge_index == 0);
    CHECK(e.agent_index == 2);
  }
}
