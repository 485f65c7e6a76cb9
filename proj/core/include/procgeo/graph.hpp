#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "procgeo/relational.hpp"

namespace procgeo {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

/// Simple undirected graph on nodes 0..n-1 with sorted adjacency lists.
class LinkGraph {
 public:
  explicit LinkGraph(std::size_t n = 0) : adjacency_(n) {}
  /// Edges given as unordered pairs; duplicates collapse, self-loops throw.
  LinkGraph(std::size_t n, const std::vector<Edge>& edges);

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  bool has_edge(NodeId a, NodeId b) const;

  /// Edges as (lo, hi) pairs in lexicographic order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

struct AbsoluteThreshold {
  double tau = 0.0;
};
struct QuantileThreshold {
  /// Fraction of unordered off-diagonal pairs, in (0, 1].
  double q = 1.0;
};
using ThresholdSpec = std::variant<AbsoluteThreshold, QuantileThreshold>;

LinkGraph extract_links(const RelationalMatrix& b, const ThresholdSpec& threshold);

/// A connected component. `nodes` holds sorted global ids and `subgraph` is
/// relabelled so local vertex k stands for nodes[k].
struct Gebit {
  std::vector<NodeId> nodes;
  LinkGraph subgraph;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Local index of a global id; throws ValidationError if absent.
  std::size_t local_index(NodeId global) const;
  bool contains(NodeId global) const;
};

/// Builds a gebit from a whole connected graph. Throws if disconnected or empty.
Gebit as_gebit(const LinkGraph& g);

/// Components sorted by descending size, then ascending smallest node id.
std::vector<Gebit> connected_components(const LinkGraph& g);

/// BFS shell counts D_1..D_L of a tree shape. D_0 == 1 is implicit.
struct ShellProfile {
  std::size_t total_n = 0;
  std::vector<std::size_t> shells;

  std::size_t depth() const noexcept { return shells.size(); }
  /// Throws unless depth >= 1, every D_k >= 1 and 1 + sum D_k == total_n.
  void validate() const;
  std::vector<double> as_reals() const { return {shells.begin(), shells.end()}; }

  /// total_n is derived as 1 + sum of shells.
  static ShellProfile from_shells(std::vector<std::size_t> shells);
  friend bool operator==(const ShellProfile&, const ShellProfile&) = default;
};

ShellProfile shell_profile(const Gebit& gebit, NodeId root);

/// BFS tree. `parent` is indexed like gebit.nodes; the root maps to itself.
struct SpanningTree {
  NodeId root = 0;
  std::vector<NodeId> nodes;
  std::vector<NodeId> parent;

  /// (child, parent) pairs normalized to (lo, hi), sorted.
  std::vector<Edge> edges() const;
  /// Number of nodes at each tree depth 1..L.
  std::vector<std::size_t> depth_histogram() const;
};

SpanningTree spanning_tree(const Gebit& gebit, NodeId root);

}  // namespace procgeo
