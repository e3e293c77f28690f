#include "lnec/flowgraph.hpp"

#include <queue>
#include <stdexcept>

namespace lnec::detail {

bool FlowGraph::bfs(int s, int t) {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  q.push(s);
  level_[s] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int id : adj_[v]) {
      const Arc& a = arcs_[id];
      if (a.from != v) continue;
      if (a.cap - a.flow > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

int FlowGraph::dfs(int v, int t, int pushed) {
  if (v == t) return pushed;
  for (int& i = ptr_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
    int id = adj_[v][i];
    Arc& a = arcs_[id];
    if (a.from != v || a.cap - a.flow <= 0 || level_[a.to] != level_[v] + 1)
      continue;
    if (int got = dfs(a.to, t, std::min(pushed, a.cap - a.flow)); got > 0) {
      a.flow += got;
      arcs_[id ^ 1].flow -= got;
      return got;
    }
  }
  return 0;
}

int FlowGraph::max_flow(int s, int t, int limit) {
  if (s == t) throw std::invalid_argument("flow source equals sink");
  int total = 0;
  while (total < limit && bfs(s, t)) {
    ptr_.assign(adj_.size(), 0);
    while (total < limit) {
      int got = dfs(s, t, limit - total);
      if (!got) break;
      total += got;
    }
  }
  return total;
}

std::vector<std::vector<int>> FlowGraph::decompose(int s, int t) const {
  std::vector<Arc> arcs = arcs_;
  std::vector<std::vector<int>> paths;
  for (;;) {
    std::vector<int> labels;
    int v = s;
    bool moved = true;
    while (v != t && moved) {
      moved = false;
      for (int id : adj_[v]) {
        Arc& a = arcs[id];
        if (a.from == v && a.cap > 0 && a.flow > 0) {
          a.flow -= 1;
          if (a.label >= 0) labels.push_back(a.label);
          v = a.to;
          moved = true;
          break;
        }
      }
    }
    if (v != t) {
      if (v != s || !labels.empty())
        throw std::logic_error("flow decomposition stalled off the sink");
      break;  // no further unit of flow leaves s
    }
    paths.push_back(std::move(labels));
  }
  return paths;
}

}  // namespace lnec::detail
