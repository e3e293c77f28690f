#pragma once

#include <cstdint>
#include <vector>

namespace lnec::detail {

// Unit-capacity max-flow (Dinic) on a small directed multigraph. Arcs carry
// an optional caller label; everything is deterministic in insertion order.
class FlowGraph {
 public:
  explicit FlowGraph(int nodes) : adj_(nodes) {}

  int add_node() {
    adj_.emplace_back();
    return static_cast<int>(adj_.size()) - 1;
  }
  int node_count() const { return static_cast<int>(adj_.size()); }

  // label < 0 means internal plumbing; paths report only labeled arcs.
  void add_arc(int from, int to, int label = -1) {
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, to, label, 1, 0});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, from, -1, 0, 0});  // residual
  }

  // Augments up to `limit` units; returns the flow found. Callable once per
  // instance state; repeated calls continue augmenting.
  int max_flow(int s, int t, int limit = 1 << 30);

  // Decomposes the current flow into arc-disjoint source-to-sink paths,
  // each reported as the sequence of labels along it.
  std::vector<std::vector<int>> decompose(int s, int t) const;

 private:
  struct Arc {
    int from, to, label, cap, flow;
  };

  bool bfs(int s, int t);
  int dfs(int v, int t, int pushed);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_, ptr_;
};

}  // namespace lnec::detail
