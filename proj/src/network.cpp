#include "lnec/network.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lnec/flowgraph.hpp"

namespace lnec {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

Network Network::parse(std::string_view text) {
  Network net;
  std::map<std::string, int> node_idx;
  std::set<std::string> edge_ids;
  std::vector<EdgeSpec> edges;
  std::string source_name;
  bool have_source = false;
  std::set<std::string> referenced_nodes;

  auto check_id = [](const std::string& id, int line_no) {
    if (!id.empty() && id[0] == '@')
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": ids starting with '@' are reserved");
  };

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    const std::string& kw = tokens[0];
    if (kw == "source") {
      if (tokens.size() != 2)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected `source <node-id>`");
      if (have_source)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": duplicate source declaration");
      check_id(tokens[1], line_no);
      source_name = tokens[1];
      have_source = true;
    } else if (kw == "node") {
      if (tokens.size() != 2)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected `node <node-id>`");
      check_id(tokens[1], line_no);
      referenced_nodes.insert(tokens[1]);
      node_idx.emplace(tokens[1], 0);
    } else if (kw == "edge") {
      if (tokens.size() != 4)
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected `edge <id> <tail> <head>`");
      check_id(tokens[1], line_no);
      check_id(tokens[2], line_no);
      check_id(tokens[3], line_no);
      if (!edge_ids.insert(tokens[1]).second)
        throw std::invalid_argument("duplicate channel id: " + tokens[1]);
      referenced_nodes.insert(tokens[2]);
      referenced_nodes.insert(tokens[3]);
      node_idx.emplace(tokens[2], 0);
      node_idx.emplace(tokens[3], 0);
      edges.push_back({tokens[1], tokens[2], tokens[3]});
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": unknown directive `" + kw + "`");
    }
  }

  if (!have_source) throw std::invalid_argument("missing source declaration");
  if (!referenced_nodes.count(source_name))
    throw std::invalid_argument("unknown node reference: " + source_name);

  std::vector<std::string> extra;
  for (const auto& [name, unused] : node_idx) extra.push_back(name);
  return build(source_name, extra, edges);
}

Network Network::build(const std::string& source_id,
                       const std::vector<std::string>& extra_nodes,
                       const std::vector<EdgeSpec>& edges) {
  Network net;
  std::map<std::string, int> idx;
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = idx.emplace(name, static_cast<int>(net.node_names_.size()));
    if (fresh) net.node_names_.push_back(name);
    return it->second;
  };
  net.source_ = intern(source_id);
  for (const auto& n : extra_nodes) intern(n);
  std::set<std::string> edge_ids;
  for (const auto& e : edges) {
    if (!edge_ids.insert(e.id).second)
      throw std::invalid_argument("duplicate channel id: " + e.id);
    net.channels_.push_back({e.id, intern(e.tail), intern(e.head)});
  }
  net.finalize();
  return net;
}

void Network::finalize() {
  int n = node_count();
  for (const Channel& c : channels_)
    if (c.tail == c.head)
      throw std::invalid_argument("channel head equals tail: " + c.id);

  // Kahn's algorithm; ties broken by lexicographically smallest node name
  // so the order depends only on the graph, not the declaration order.
  std::vector<int> indeg(n, 0);
  for (const Channel& c : channels_) ++indeg[c.head];
  auto name_less = [&](int a, int b) { return node_names_[a] > node_names_[b]; };
  std::priority_queue<int, std::vector<int>, decltype(name_less)> ready(name_less);
  for (int v = 0; v < n; ++v)
    if (!indeg[v]) ready.push(v);
  topo_.clear();
  std::vector<std::vector<int>> out_nodes(n);
  for (const Channel& c : channels_) out_nodes[c.tail].push_back(c.head);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (int w : out_nodes[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if (static_cast<int>(topo_.size()) != n)
    throw std::invalid_argument("cycle detected");
  for (const Channel& c : channels_)
    if (c.head == source_)
      throw std::invalid_argument("source has an incoming channel: " + c.id);
  topo_pos_.assign(n, 0);
  for (int i = 0; i < n; ++i) topo_pos_[topo_[i]] = i;

  std::stable_sort(channels_.begin(), channels_.end(),
                   [&](const Channel& a, const Channel& b) {
                     if (topo_pos_[a.tail] != topo_pos_[b.tail])
                       return topo_pos_[a.tail] < topo_pos_[b.tail];
                     return a.id < b.id;
                   });

  in_.assign(n, {});
  out_.assign(n, {});
  for (int e = 0; e < channel_count(); ++e) {
    in_[channels_[e].head].push_back(e);
    out_[channels_[e].tail].push_back(e);
  }
}

int Network::node_index(std::string_view name) const {
  for (int v = 0; v < node_count(); ++v)
    if (node_names_[v] == name) return v;
  throw std::invalid_argument("unknown node: " + std::string(name));
}

int Network::channel_index(std::string_view id) const {
  for (int e = 0; e < channel_count(); ++e)
    if (channels_[e].id == id) return e;
  throw std::invalid_argument("unknown channel: " + std::string(id));
}

std::vector<int> Network::non_source_nodes() const {
  std::vector<int> v;
  for (int node : topo_)
    if (node != source_) v.push_back(node);
  return v;
}

std::string Network::to_text() const {
  std::ostringstream os;
  os << "source " << node_names_[source_] << "\n";
  for (int v : topo_) os << "node " << node_names_[v] << "\n";
  for (const Channel& c : channels_)
    os << "edge " << c.id << " " << node_names_[c.tail] << " "
       << node_names_[c.head] << "\n";
  return os.str();
}

void validate_collection(const Network& net, const NodeCollection& T) {
  if (T.nodes.empty()) throw std::invalid_argument("empty node collection");
  for (size_t i = 0; i < T.nodes.size(); ++i) {
    int v = T.nodes[i];
    if (v < 0 || v >= net.node_count())
      throw std::invalid_argument("node index out of range in collection");
    if (v == net.source())
      throw std::invalid_argument("collection contains the source");
    if (i && T.nodes[i - 1] >= v)
      throw std::invalid_argument("collection nodes must be sorted and unique");
  }
}

std::vector<int> in_of(const Network& net, const NodeCollection& T) {
  std::vector<int> channels;
  for (int t : T.nodes)
    for (int e : net.in(t)) channels.push_back(e);
  std::sort(channels.begin(), channels.end());
  return channels;
}

int min_cut(const Network& net, const NodeCollection& T) {
  validate_collection(net, T);
  detail::FlowGraph g(net.node_count() + 1);
  int t_aux = net.node_count();
  for (int e = 0; e < net.channel_count(); ++e)
    g.add_arc(net.channel(e).tail, net.channel(e).head, e);
  for (int t : T.nodes)
    for (size_t i = 0; i < net.in(t).size(); ++i) g.add_arc(t, t_aux);
  return g.max_flow(net.source(), t_aux);
}

std::vector<std::vector<int>> disjoint_paths(const Network& net,
                                             std::span<const int> sources,
                                             int t, int count) {
  if (count < 0) throw std::invalid_argument("negative path count");
  std::set<int> source_set(sources.begin(), sources.end());
  if (static_cast<int>(source_set.size()) != static_cast<int>(sources.size()))
    throw std::invalid_argument("duplicate channels in sources");

  // Split every channel e into tail -> mid_e -> head; flow entering at
  // mid_e is forced to traverse e as its first channel.
  detail::FlowGraph g(net.node_count());
  std::vector<int> mid(net.channel_count());
  for (int e = 0; e < net.channel_count(); ++e) {
    mid[e] = g.add_node();
    g.add_arc(net.channel(e).tail, mid[e]);
    g.add_arc(mid[e], net.channel(e).head, e);
  }
  int sigma = g.add_node();
  for (int e : sources) {
    if (e < 0 || e >= net.channel_count())
      throw std::invalid_argument("source channel index out of range");
    g.add_arc(sigma, mid[e]);
  }
  int flow = g.max_flow(sigma, t, count);
  if (flow < count)
    throw std::invalid_argument(
        "requested path count exceeds achievable flow (" +
        std::to_string(flow) + " < " + std::to_string(count) + ")");
  return g.decompose(sigma, t);
}

Network pattern_rank_network(const Network& net, std::span<const int> pattern) {
  std::set<int> pat(pattern.begin(), pattern.end());
  for (int e : pat)
    if (e < 0 || e >= net.channel_count())
      throw std::invalid_argument("pattern channel index out of range");

  std::vector<Network::EdgeSpec> edges;
  for (int e = 0; e < net.channel_count(); ++e) {
    const Channel& c = net.channel(e);
    if (pat.count(e)) continue;
    edges.push_back({c.id, net.node_name(c.tail), net.node_name(c.head)});
  }
  for (int e : pat) {
    const Channel& c = net.channel(e);
    edges.push_back({"@rho:" + c.id, "@rho", net.node_name(c.head)});
  }
  std::vector<std::string> nodes;
  for (int v = 0; v < net.node_count(); ++v) nodes.push_back(net.node_name(v));
  return Network::build("@rho", nodes, edges);
}

std::vector<NodeCollection> enumerate_collections(const Network& net,
                                                  int max_nodes) {
  if (max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
  std::vector<int> pool = net.non_source_nodes();
  int n = static_cast<int>(pool.size());
  std::vector<NodeCollection> result;
  std::set<std::vector<int>> seen_ins;

  std::vector<int> pick;
  auto emit = [&]() {
    NodeCollection T;
    T.nodes.reserve(pick.size());
    for (int i : pick) T.nodes.push_back(pool[i]);
    std::sort(T.nodes.begin(), T.nodes.end());
    std::vector<int> in_sig = in_of(net, T);
    if (in_sig.empty()) return;
    if (seen_ins.insert(std::move(in_sig)).second) result.push_back(std::move(T));
  };
  // by size, then lexicographically over topological positions
  for (int size = 1; size <= std::min(max_nodes, n); ++size) {
    pick.assign(size, 0);
    for (int i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      emit();
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return result;
}

}  // namespace lnec
