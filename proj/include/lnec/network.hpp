#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lnec {

// Channel of a single-source acyclic directed multigraph; unit capacity.
// `index` is the position in the ancestral order.
struct Channel {
  std::string id;
  int tail;
  int head;
};

// Nonempty set of non-source nodes treated as a joint receiver.
struct NodeCollection {
  std::vector<int> nodes;  // sorted, unique
};

// Immutable single-source acyclic directed multigraph. Channels are indexed
// by a deterministic ancestral order: nodes sorted topologically with
// lexicographically-smallest-name tie-break, channels by (tail position,
// channel id).
class Network {
 public:
  // Line-oriented text: `# comment`, `source <id>`, `node <id>`,
  // `edge <id> <tail> <head>`. Nodes may be declared implicitly by edges.
  // Ids must not start with '@' (reserved for derived objects).
  static Network parse(std::string_view text);

  struct EdgeSpec {
    std::string id, tail, head;
  };

  // Programmatic construction; ids starting with '@' are permitted here so
  // derived networks can reserve them.
  static Network build(const std::string& source_id,
                       const std::vector<std::string>& extra_nodes,
                       const std::vector<EdgeSpec>& edges);

  int node_count() const { return static_cast<int>(node_names_.size()); }
  int channel_count() const { return static_cast<int>(channels_.size()); }
  int source() const { return source_; }

  const std::string& node_name(int v) const { return node_names_[v]; }
  int node_index(std::string_view name) const;  // throws on unknown
  const Channel& channel(int e) const { return channels_[e]; }
  int channel_index(std::string_view id) const;  // throws on unknown

  std::span<const int> in(int v) const { return in_[v]; }
  std::span<const int> out(int v) const { return out_[v]; }
  // Node indices in topological order (source first among its component).
  const std::vector<int>& topo_nodes() const { return topo_; }
  int topo_pos(int v) const { return topo_pos_[v]; }
  // Non-source nodes in topological order.
  std::vector<int> non_source_nodes() const;

  std::string to_text() const;  // canonical listing, parse-stable

 private:
  Network() = default;
  void finalize();  // validates, computes topo + ancestral order

  std::vector<std::string> node_names_;
  int source_ = -1;
  std::vector<Channel> channels_;           // ancestral order
  std::vector<std::vector<int>> in_, out_;  // channel indices, ancestral order
  std::vector<int> topo_, topo_pos_;
};

// Validated view: T nonempty, source excluded, indices in range.
void validate_collection(const Network& net, const NodeCollection& T);

// Union of In(t) over t in T, in ancestral order.
std::vector<int> in_of(const Network& net, const NodeCollection& T);

// Minimum cut capacity between the source and T, via max-flow to an
// auxiliary node joined from every t in T by |In(t)| parallel unit channels.
int min_cut(const Network& net, const NodeCollection& T);

// `count` pairwise channel-disjoint paths, each a channel-index sequence
// starting with a distinct member of `sources` and ending at t. Throws if
// fewer than `count` such paths exist.
std::vector<std::vector<int>> disjoint_paths(const Network& net,
                                             std::span<const int> sources,
                                             int t, int count);

// The source-replacement transformation for an error pattern: a new source
// "@rho" replaces every pattern channel e by "@rho:<id>" into head(e).
// Min-cuts from the new source to T give the pattern's rank.
Network pattern_rank_network(const Network& net, std::span<const int> pattern);

// All nonempty collections of non-source nodes with |T| <= max_nodes and
// In(T) nonempty, deduplicated by In(T), enumerated by size then
// lexicographically over topological node positions.
std::vector<NodeCollection> enumerate_collections(const Network& net,
                                                  int max_nodes);

}  // namespace lnec
