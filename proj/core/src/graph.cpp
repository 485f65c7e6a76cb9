#include "procgeo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "procgeo/error.hpp"

namespace procgeo {

LinkGraph::LinkGraph(std::size_t n, const std::vector<Edge>& edges) : adjacency_(n) {
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw ValidationError("edge endpoint out of range");
    if (a == b) throw ValidationError("self-loop on node " + std::to_string(a));
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    edge_count_ += nbrs.size();
  }
  edge_count_ /= 2;
}

bool LinkGraph::has_edge(NodeId a, NodeId b) const {
  const auto& nbrs = adjacency_.at(a);
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::vector<Edge> LinkGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId a = 0; a < adjacency_.size(); ++a) {
    for (NodeId b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

LinkGraph extract_links(const RelationalMatrix& b, const ThresholdSpec& threshold) {
  const auto n = static_cast<std::size_t>(b.size());
  double tau = 0.0;
  if (const auto* abs = std::get_if<AbsoluteThreshold>(&threshold)) {
    if (!(abs->tau >= 0.0)) throw ValidationError("absolute threshold must be >= 0");
    tau = abs->tau;
  } else {
    const double q = std::get<QuantileThreshold>(threshold).q;
    if (!(q > 0.0 && q <= 1.0)) throw ValidationError("quantile threshold must lie in (0, 1]");
    std::vector<double> mags;
    mags.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) mags.push_back(std::abs(b(i, j)));
    }
    const auto keep = static_cast<std::size_t>(std::ceil(q * static_cast<double>(mags.size())));
    const auto kth = mags.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(keep, 1) - 1);
    std::nth_element(mags.begin(), kth, mags.end(), std::greater<>());
    tau = *kth;
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(b(i, j)) >= tau) edges.emplace_back(i, j);
    }
  }
  return LinkGraph(n, edges);
}

std::size_t Gebit::local_index(NodeId global) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), global);
  if (it == nodes.end() || *it != global) {
    throw ValidationError("root " + std::to_string(global) + " is not in the gebit");
  }
  return static_cast<std::size_t>(it - nodes.begin());
}

bool Gebit::contains(NodeId global) const {
  return std::binary_search(nodes.begin(), nodes.end(), global);
}

namespace {

// Component label per node, labels assigned in order of smallest member.
std::vector<std::size_t> label_components(const LinkGraph& g, std::size_t& count) {
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(g.size(), kUnset);
  count = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.size(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : g.neighbors(v)) {
        if (label[u] == kUnset) {
          label[u] = count;
          stack.push_back(u);
        }
      }
    }
    ++count;
  }
  return label;
}

Gebit induced(const LinkGraph& g, std::vector<NodeId> nodes) {
  std::vector<Edge> local;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (NodeId nb : g.neighbors(nodes[a])) {
      const auto it = std::lower_bound(nodes.begin(), nodes.end(), nb);
      const auto b = static_cast<std::size_t>(it - nodes.begin());
      if (a < b) local.emplace_back(a, b);
    }
  }
  const std::size_t size = nodes.size();
  return Gebit{std::move(nodes), LinkGraph(size, local)};
}

}  // namespace

std::vector<Gebit> connected_components(const LinkGraph& g) {
  std::size_t count = 0;
  const auto label = label_components(g, count);
  std::vector<std::vector<NodeId>> members(count);
  for (NodeId v = 0; v < g.size(); ++v) members[label[v]].push_back(v);

  // Labels already follow ascending smallest id, so a stable sort on size
  // gives the required order.
  std::stable_sort(members.begin(), members.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<Gebit> out;
  out.reserve(count);
  for (auto& m : members) out.push_back(induced(g, std::move(m)));
  return out;
}

Gebit as_gebit(const LinkGraph& g) {
  if (g.size() == 0) throw ValidationError("gebit must have at least one node");
  auto parts = connected_components(g);
  if (parts.size() != 1) throw ValidationError("graph is not connected");
  return std::move(parts.front());
}

void ShellProfile::validate() const {
  if (shells.empty()) throw ValidationError("shell profile needs depth >= 1");
  std::size_t sum = 1;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    if (shells[k] < 1) {
      throw ValidationError("shell D_" + std::to_string(k + 1) + " must be >= 1");
    }
    sum += shells[k];
  }
  if (sum != total_n) {
    throw ValidationError("shell counts sum to " + std::to_string(sum) + " nodes, expected " +
                          std::to_string(total_n));
  }
}

ShellProfile ShellProfile::from_shells(std::vector<std::size_t> shells) {
  ShellProfile p;
  p.total_n = 1 + std::accumulate(shells.begin(), shells.end(), std::size_t{0});
  p.shells = std::move(shells);
  p.validate();
  return p;
}

namespace {

struct Bfs {
  std::vector<std::size_t> dist;
  std::vector<std::size_t> parent;
};

Bfs bfs(const LinkGraph& g, std::size_t root) {
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  Bfs r{std::vector<std::size_t>(g.size(), kUnset), std::vector<std::size_t>(g.size(), kUnset)};
  std::deque<std::size_t> queue{root};
  r.dist[root] = 0;
  r.parent[root] = root;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto u : g.neighbors(v)) {  // ascending ids
      if (r.dist[u] != kUnset) continue;
      r.dist[u] = r.dist[v] + 1;
      r.parent[u] = v;
      queue.push_back(u);
    }
  }
  return r;
}

}  // namespace

ShellProfile shell_profile(const Gebit& gebit, NodeId root) {
  const auto local_root = gebit.local_index(root);
  if (gebit.size() < 2) throw ValidationError("single-node gebit has no shells");
  const auto r = bfs(gebit.subgraph, local_root);
  std::vector<std::size_t> shells;
  for (auto d : r.dist) {
    if (d == std::numeric_limits<std::size_t>::max()) {
      throw ValidationError("gebit subgraph is not connected");
    }
    if (d == 0) continue;
    if (shells.size() < d) shells.resize(d, 0);
    ++shells[d - 1];
  }
  return ShellProfile::from_shells(std::move(shells));
}

SpanningTree spanning_tree(const Gebit& gebit, NodeId root) {
  const auto local_root = gebit.local_index(root);
  const auto r = bfs(gebit.subgraph, local_root);
  SpanningTree t;
  t.root = root;
  t.nodes = gebit.nodes;
  t.parent.resize(gebit.size());
  for (std::size_t v = 0; v < gebit.size(); ++v) {
    if (r.parent[v] == std::numeric_limits<std::size_t>::max()) {
      throw ValidationError("gebit subgraph is not connected");
    }
    t.parent[v] = gebit.nodes[r.parent[v]];
  }
  return t;
}

std::vector<Edge> SpanningTree::edges() const {
  std::vector<Edge> out;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v] == root) continue;
    out.emplace_back(std::min(nodes[v], parent[v]), std::max(nodes[v], parent[v]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> SpanningTree::depth_histogram() const {
  // Depth by walking parents; memoized through the sorted node list.
  std::vector<std::size_t> depth(nodes.size(), std::numeric_limits<std::size_t>::max());
  auto index_of = [&](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  std::vector<std::size_t> hist;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    std::vector<std::size_t> chain;
    std::size_t cur = v;
    while (depth[cur] == std::numeric_limits<std::size_t>::max()) {
      if (nodes[cur] == root) {
        depth[cur] = 0;
        break;
      }
      chain.push_back(cur);
      cur = index_of(parent[cur]);
      if (chain.size() > nodes.size()) throw ValidationError("spanning tree has a cycle");
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth[*it] = depth[cur] + 1;
      cur = *it;
    }
    if (depth[v] == 0) continue;
    if (hist.size() < depth[v]) hist.resize(depth[v], 0);
    ++hist[depth[v] - 1];
  }
  return hist;
}

}  // namespace procgeo
