#include "bofc/graph.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace bofc {

DirectedSensingGraph::DirectedSensingGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw ValidationError("vertex count must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.tail < 1 || e.tail > n_ || e.head < 1 || e.head > n_)
      throw ValidationError("edge (" + std::to_string(e.tail) + "," + std::to_string(e.head) +
                            ") references a vertex outside 1.." + std::to_string(n_));
    if (e.tail == e.head)
      throw ValidationError("self-loop at vertex " + std::to_string(e.tail));
    if (!seen.insert({e.tail, e.head}).second)
      throw ValidationError("duplicate edge (" + std::to_string(e.tail) + "," +
                            std::to_string(e.head) + ")");
  }
}

int DirectedSensingGraph::out_degree(int vertex) const {
  int k = 0;
  for (const Edge& e : edges_) k += (e.tail == vertex);
  return k;
}

std::vector<int> DirectedSensingGraph::out_neighbors(int vertex) const {
  std::vector<int> heads;
  for (const Edge& e : edges_)
    if (e.tail == vertex) heads.push_back(e.head);
  return heads;
}

std::vector<int> DirectedSensingGraph::out_edge_indices(int vertex) const {
  std::vector<int> idx;
  for (int k = 0; k < edge_count(); ++k)
    if (edges_[k].tail == vertex) idx.push_back(k);
  return idx;
}

std::string to_string(GraphClass c) {
  switch (c) {
    case GraphClass::LFF: return "LFF";
    case GraphClass::OrderedLFF: return "OrderedLFF";
    case GraphClass::OneToMany: return "OneToMany";
    case GraphClass::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

namespace {

// Shared checks for the leader and first-follower conditions; `strict_two`
// selects between "exactly two" (LFF) and "at least two" (ordered LFF)
// out-edges for vertices >= 3.
std::vector<std::string> lff_like_violations(const DirectedSensingGraph& g, bool strict_two) {
  std::vector<std::string> v;
  const int n = g.vertex_count();
  if (g.out_degree(1) != 0)
    v.push_back("vertex 1 has " + std::to_string(g.out_degree(1)) +
                " outgoing edges (the leader must have none)");
  if (n >= 2) {
    auto heads = g.out_neighbors(2);
    if (heads.size() != 1 || heads[0] != 1)
      v.push_back("vertex 2 must have exactly one outgoing edge, pointing to vertex 1");
  } else {
    v.push_back("graph has no first follower (n < 2)");
  }
  for (int i = 3; i <= n; ++i) {
    const int deg = g.out_degree(i);
    if (strict_two ? (deg != 2) : (deg < 2))
      v.push_back("vertex " + std::to_string(i) + " has " + std::to_string(deg) +
                  " outgoing edges (expected " + (strict_two ? "exactly" : "at least") + " two)");
  }
  for (const Edge& e : g.edges())
    if (!is_forward_edge(e))
      v.push_back("edge (" + std::to_string(e.tail) + "," + std::to_string(e.head) +
                  ") is not a forward edge");
  return v;
}

}  // namespace

std::vector<std::string> lff_violations(const DirectedSensingGraph& g) {
  return lff_like_violations(g, true);
}

std::vector<std::string> ordered_lff_violations(const DirectedSensingGraph& g) {
  return lff_like_violations(g, false);
}

std::vector<std::string> one_to_many_violations(const DirectedSensingGraph& g) {
  std::vector<std::string> v;
  const int n = g.vertex_count();
  if (n < 3) v.push_back("one-to-many requires n >= 3");
  for (const Edge& e : g.edges())
    if (e.tail != n)
      v.push_back("edge (" + std::to_string(e.tail) + "," + std::to_string(e.head) +
                  ") does not originate at the follower vertex " + std::to_string(n));
  if (g.edge_count() != n - 1)
    v.push_back("expected " + std::to_string(n - 1) + " edges (one per leader), found " +
                std::to_string(g.edge_count()));
  return v;
}

GraphClassification classify(const DirectedSensingGraph& graph) {
  GraphClassification result;
  auto lff = lff_violations(graph);
  auto olff = ordered_lff_violations(graph);
  auto otm = one_to_many_violations(graph);

  if (lff.empty()) {
    result.type = GraphClass::LFF;
    result.leader = 1;
    result.first_follower = 2;
    result.also_ordered_lff = olff.empty();
    return result;
  }
  if (olff.empty()) {
    result.type = GraphClass::OrderedLFF;
    result.leader = 1;
    result.first_follower = 2;
    return result;
  }
  if (otm.empty()) {
    result.type = GraphClass::OneToMany;
    return result;
  }
  result.type = GraphClass::Unclassified;
  for (const auto& s : lff) result.violations.push_back("LFF: " + s);
  for (const auto& s : olff) result.violations.push_back("OrderedLFF: " + s);
  for (const auto& s : otm) result.violations.push_back("OneToMany: " + s);
  return result;
}

Eigen::MatrixXd out_incidence(const DirectedSensingGraph& graph, int d) {
  if (d != 2 && d != 3) throw ValidationError("dimension must be 2 or 3");
  const int m = graph.edge_count();
  const int n = graph.vertex_count();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d * m, d * n);
  for (int k = 0; k < m; ++k)
    H.block(d * k, d * (graph.edges()[k].tail - 1), d, d).setIdentity();
  return H;
}

Eigen::MatrixXd signed_incidence(const DirectedSensingGraph& graph, int d) {
  if (d != 2 && d != 3) throw ValidationError("dimension must be 2 or 3");
  const int m = graph.edge_count();
  const int n = graph.vertex_count();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d * m, d * n);
  for (int k = 0; k < m; ++k) {
    const Edge& e = graph.edges()[k];
    H.block(d * k, d * (e.tail - 1), d, d) = Eigen::MatrixXd::Identity(d, d);
    H.block(d * k, d * (e.head - 1), d, d) = -Eigen::MatrixXd::Identity(d, d);
  }
  return H;
}

}  // namespace bofc
