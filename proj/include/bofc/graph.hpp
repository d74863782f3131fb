#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bofc/errors.hpp"

namespace bofc {

/// Directed sensing edge. The tail is the sensing agent, the head the sensed
/// one. Vertex labels are 1-based everywhere in the public interface.
struct Edge {
  int tail = 0;
  int head = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A directed graph over vertices 1..n with an ordered edge list. The edge
/// order is significant: it fixes the row order of incidence matrices and the
/// ordering of bearing vectors.
class DirectedSensingGraph {
 public:
  /// Throws ValidationError on self-loops, duplicate edges, or out-of-range
  /// vertex labels.
  DirectedSensingGraph(int n, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  int out_degree(int vertex) const;
  /// Heads of the out-edges of `vertex`, in edge order.
  std::vector<int> out_neighbors(int vertex) const;
  /// Indices into edges() of the out-edges of `vertex`, in edge order.
  std::vector<int> out_edge_indices(int vertex) const;

 private:
  int n_;
  std::vector<Edge> edges_;
};

enum class GraphClass { LFF, OrderedLFF, OneToMany, Unclassified };

std::string to_string(GraphClass c);

struct GraphClassification {
  GraphClass type = GraphClass::Unclassified;
  std::optional<int> leader;
  std::optional<int> first_follower;
  /// Set for LFF graphs, which always satisfy the ordered-LFF conditions too.
  bool also_ordered_lff = false;
  std::vector<std::string> violations;
};

/// True iff the tail label exceeds the head label.
inline bool is_forward_edge(const Edge& e) { return e.tail > e.head; }

/// Rule violations of the (strict) leader-first-follower conditions:
/// vertex 1 has no out-edges, vertex 2 has exactly the out-edge 2->1, every
/// other vertex has exactly two out-edges, and all edges are forward.
std::vector<std::string> lff_violations(const DirectedSensingGraph& graph);

/// Rule violations of the ordered-LFF conditions: as above but vertices >= 3
/// need at least two out-edges, all forward.
std::vector<std::string> ordered_lff_violations(const DirectedSensingGraph& graph);

/// Rule violations of the one-to-many conditions: n >= 3 and the edge set is
/// exactly n -> i for i = 1..n-1.
std::vector<std::string> one_to_many_violations(const DirectedSensingGraph& graph);

/// Total and deterministic; permuting the edge list does not change the
/// result. LFF takes precedence over OrderedLFF when both sets of conditions
/// hold (the flag records the overlap).
GraphClassification classify(const DirectedSensingGraph& graph);

/// Block matrix of size d|E| x dn whose (k, i) block is I_d iff vertex i is
/// the tail of edge k.
Eigen::MatrixXd out_incidence(const DirectedSensingGraph& graph, int d);

/// Block matrix of size d|E| x dn with +I_d at the tail and -I_d at the head
/// of each edge (tail positive).
Eigen::MatrixXd signed_incidence(const DirectedSensingGraph& graph, int d);

}  // namespace bofc
