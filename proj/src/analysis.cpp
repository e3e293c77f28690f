#include "lnec/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lnec/flowgraph.hpp"
#include "lnec/version.hpp"

namespace lnec {

namespace {

uint64_t comb64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<uint64_t>(r);
}

// idx-th k-subset of [0, n) in lexicographic order.
void unrank_comb(uint64_t idx, int n, int k, std::vector<int>& out) {
  out.clear();
  int x = 0;
  for (int i = 0; i < k; ++i) {
    for (;;) {
      uint64_t cnt = comb64(n - x - 1, k - i - 1);
      if (idx < cnt) break;
      idx -= cnt;
      ++x;
    }
    out.push_back(x);
    ++x;
  }
}

// Rank of a pattern via the source-replacement flow, without materializing
// the transformed network. Matches
// min_cut(pattern_rank_network(net, rho), T) by construction.
int pattern_rank_flow(const Network& net, std::span<const int> pattern,
                      const NodeCollection& T) {
  detail::FlowGraph g(net.node_count() + 2);
  int s_rho = net.node_count(), t_aux = s_rho + 1;
  std::vector<char> in_pat(net.channel_count(), 0);
  for (int e : pattern) in_pat[e] = 1;
  for (int e = 0; e < net.channel_count(); ++e) {
    const Channel& c = net.channel(e);
    g.add_arc(in_pat[e] ? s_rho : c.tail, c.head, e);
  }
  for (int t : T.nodes)
    for (size_t i = 0; i < net.in(t).size(); ++i) g.add_arc(t, t_aux);
  return g.max_flow(s_rho, t_aux);
}

// Nontrivial-intersection test for Delta(T, rho) against a prepared
// message-space eliminator: dim Delta + dim Phi > dim(Delta + Phi), i.e.
// some pattern row is independent of the others but falls inside the sum.
bool pattern_hits(const Field& f, const DecodingMatrix& dm,
                  const Eliminator& phi, std::span<const int> pattern) {
  Eliminator delta(f, dm.m.cols());
  Eliminator joint = phi;
  int grown = 0;
  for (int e : pattern) {
    Vec row = dm.row_channel(e);
    if (joint.add(row)) ++grown;
    delta.add(row);
  }
  return delta.rank() > grown;
}

struct DistanceContext {
  DecodingMatrix dm;
  Eliminator phi;
};

DistanceContext distance_context(const Code& code, const Mat& kernels,
                                 const NodeCollection& T) {
  DecodingMatrix dm = decoding_matrix(code, kernels, T);
  Eliminator phi(code.field(), dm.m.cols());
  for (int i = 0; i < code.omega(); ++i) phi.add(dm.row_msg(i));
  if (phi.rank() == 0)
    throw std::invalid_argument(
        "message space is trivial; minimum distance undefined");
  return {std::move(dm), std::move(phi)};
}

}  // namespace

int rank_of_pattern(const Network& net, std::span<const int> pattern,
                    const NodeCollection& T) {
  validate_collection(net, T);
  if (pattern.empty()) return 0;
  Network transformed = pattern_rank_network(net, pattern);
  NodeCollection mapped;
  for (int t : T.nodes)
    mapped.nodes.push_back(transformed.node_index(net.node_name(t)));
  std::sort(mapped.nodes.begin(), mapped.nodes.end());
  return min_cut(transformed, mapped);
}

bool dominates(const Code& code, const Mat& kernels, std::span<const int> rho1,
               std::span<const int> rho2, const NodeCollection& T) {
  RowSpace d2 = error_space(code, kernels, T, rho2);
  RowSpace d1 = error_space(code, kernels, T, rho1);
  return d2.contains(d1);
}

DistanceResult min_distance_serial(const Code& code, const Mat& kernels,
                                   const NodeCollection& T, int search_cap,
                                   const AnalysisOptions& opt) {
  if (search_cap < 1) throw std::invalid_argument("search cap must be >= 1");
  DistanceContext ctx = distance_context(code, kernels, T);
  int n = code.net().channel_count();
  int cap = std::min(search_cap, n);
  uint64_t examined = 0;
  std::vector<int> pattern;
  for (int w = 1; w <= cap; ++w) {
    uint64_t cnt = comb64(n, w);
    examined += cnt;
    if (examined > opt.pattern_budget)
      throw BudgetExceeded("minimum-distance search exceeds pattern budget");
    for (uint64_t idx = 0; idx < cnt; ++idx) {
      unrank_comb(idx, n, w, pattern);
      if (pattern_hits(code.field(), ctx.dm, ctx.phi, pattern))
        return {w, true};
    }
  }
  return {cap + 1, cap >= n};
}

DistanceResult min_distance(const Code& code, const Mat& kernels,
                            const NodeCollection& T, int search_cap,
                            const AnalysisOptions& opt) {
  if (!opt.parallel) return min_distance_serial(code, kernels, T, search_cap, opt);
  if (search_cap < 1) throw std::invalid_argument("search cap must be >= 1");
  DistanceContext ctx = distance_context(code, kernels, T);
  int n = code.net().channel_count();
  int cap = std::min(search_cap, n);
  uint64_t examined = 0;
  std::vector<int> pattern;
  for (int w = 1; w <= cap; ++w) {
    uint64_t cnt = comb64(n, w);
    examined += cnt;
    if (examined > opt.pattern_budget)
      throw BudgetExceeded("minimum-distance search exceeds pattern budget");
    int found = 0;
    if (cnt < 2048) {  // not worth a team; result identical either way
      for (uint64_t idx = 0; idx < cnt && !found; ++idx) {
        unrank_comb(idx, n, w, pattern);
        if (pattern_hits(code.field(), ctx.dm, ctx.phi, pattern)) found = 1;
      }
    } else {
#pragma omp parallel
      {
        std::vector<int> local_pattern;
#pragma omp for reduction(|| : found) schedule(static)
        for (int64_t idx = 0; idx < static_cast<int64_t>(cnt); ++idx) {
          unrank_comb(static_cast<uint64_t>(idx), n, w, local_pattern);
          if (pattern_hits(code.field(), ctx.dm, ctx.phi, local_pattern))
            found = 1;
        }
      }
    }
    if (found) return {w, true};
  }
  return {cap + 1, cap >= n};
}

std::vector<Pattern> enumerate_R_serial(const Network& net,
                                        const NodeCollection& T, int delta,
                                        const AnalysisOptions& opt) {
  validate_collection(net, T);
  if (delta < 0) throw std::invalid_argument("negative pattern size");
  if (delta == 0) return {Pattern{}};
  int n = net.channel_count();
  uint64_t cnt = comb64(n, delta);
  if (cnt > opt.pattern_budget)
    throw BudgetExceeded("R-set enumeration exceeds pattern budget");
  std::vector<Pattern> out;
  std::vector<int> pattern;
  for (uint64_t idx = 0; idx < cnt; ++idx) {
    unrank_comb(idx, n, delta, pattern);
    if (pattern_rank_flow(net, pattern, T) == delta) out.push_back(pattern);
  }
  return out;
}

std::vector<Pattern> enumerate_R(const Network& net, const NodeCollection& T,
                                 int delta, const AnalysisOptions& opt) {
  if (!opt.parallel) return enumerate_R_serial(net, T, delta, opt);
  validate_collection(net, T);
  if (delta < 0) throw std::invalid_argument("negative pattern size");
  if (delta == 0) return {Pattern{}};
  int n = net.channel_count();
  uint64_t cnt = comb64(n, delta);
  if (cnt > opt.pattern_budget)
    throw BudgetExceeded("R-set enumeration exceeds pattern budget");
  std::vector<char> hit(cnt, 0);
#pragma omp parallel
  {
    std::vector<int> pattern;
#pragma omp for schedule(static)
    for (int64_t idx = 0; idx < static_cast<int64_t>(cnt); ++idx) {
      unrank_comb(static_cast<uint64_t>(idx), n, delta, pattern);
      if (pattern_rank_flow(net, pattern, T) == delta) hit[idx] = 1;
    }
  }
  std::vector<Pattern> out;
  std::vector<int> pattern;
  for (uint64_t idx = 0; idx < cnt; ++idx) {
    if (!hit[idx]) continue;
    unrank_comb(idx, n, delta, pattern);
    out.push_back(pattern);
  }
  return out;
}

namespace {

struct CollectionScan {
  std::vector<NodeCollection> collections;  // deduplicated by In(T)
  uint64_t total = 0;                       // all nonempty subsets
  bool complete = true;
};

CollectionScan scan_collections(const Network& net, const AnalysisOptions& opt) {
  CollectionScan scan;
  int n = static_cast<int>(net.non_source_nodes().size());
  scan.total = n >= 64 ? UINT64_MAX : (uint64_t{1} << n) - 1;
  int max_nodes = n;
  if (scan.total > opt.collections_cap) {
    scan.complete = false;
    // largest prefix of sizes whose subset count fits the cap
    uint64_t running = 0;
    max_nodes = 0;
    for (int k = 1; k <= n; ++k) {
      running += comb64(n, k);
      if (running > opt.collections_cap) break;
      max_nodes = k;
    }
    if (max_nodes == 0) return scan;
  }
  if (n > 0) scan.collections = enumerate_collections(net, max_nodes);
  return scan;
}

std::string collection_label(const Network& net, const NodeCollection& T) {
  std::vector<int> by_topo = T.nodes;
  std::sort(by_topo.begin(), by_topo.end(),
            [&](int a, int b) { return net.topo_pos(a) < net.topo_pos(b); });
  std::string s = "{";
  for (size_t i = 0; i < by_topo.size(); ++i) {
    if (i) s += ",";
    s += net.node_name(by_topo[i]);
  }
  return s + "}";
}

}  // namespace

RegularityFlags regularity(const Code& code, const AnalysisOptions& opt) {
  const Network& net = code.net();
  Mat kernels = extended_kernels(code);
  RegularityFlags flags{true, true, true, true, true};

  for (int t : net.non_source_nodes()) {
    NodeCollection T{{t}};
    int cut = min_cut(net, T);
    int dim_phi =
        net.in(t).empty() ? 0 : message_space(code, kernels, T).dim();
    if (cut >= code.omega() && dim_phi != code.omega()) flags.regular = false;
    if (dim_phi != std::min(code.omega(), cut)) flags.strongly_regular = false;
  }

  CollectionScan scan = scan_collections(net, opt);
  flags.collections_complete = scan.complete;
  for (const NodeCollection& T : scan.collections) {
    int cut = min_cut(net, T);
    int dim_phi = message_space(code, kernels, T).dim();
    if (cut >= code.omega() && dim_phi != code.omega()) flags.sup_regular = false;
    if (dim_phi != std::min(code.omega(), cut))
      flags.strongly_sup_regular = false;
  }
  return flags;
}

FieldBounds field_bounds(const Network& net, int omega,
                         const AnalysisOptions& opt) {
  if (omega < 1) throw std::invalid_argument("dimension must be >= 1");
  FieldBounds out;
  int n_channels = net.channel_count();

  uint64_t v2 = 0;
  for (int t : net.non_source_nodes()) {
    NodeCollection T{{t}};
    int cut = min_cut(net, T);
    if (cut < omega) {
      ++v2;
      continue;
    }
    int r = cut - omega;
    out.multicast += BigUint(enumerate_R(net, T, r, opt).size());
    out.corollary_multicast += binomial(n_channels, r);
  }
  out.broadcast = out.multicast + BigUint(v2);
  out.corollary_broadcast = out.corollary_multicast + BigUint(v2);

  // Dispersion bound, literally as printed: the binomial's upper index adds
  // the sum of C_t over every member of every collection, and the outer sum
  // ranges over all collections with C_T >= omega. Collections that differ
  // only by in-degree-zero nodes share C_T, so they are grouped.
  std::vector<int> pool, zero_in;
  for (int t : net.non_source_nodes())
    (net.in(t).empty() ? zero_in : pool).push_back(t);
  int np = static_cast<int>(pool.size());
  int nz = static_cast<int>(zero_in.size());
  uint64_t total =
      (np + nz) >= 64 ? UINT64_MAX : (uint64_t{1} << (np + nz)) - 1;
  if (total > opt.collections_cap || np >= 63) {
    out.complete = false;
    return out;
  }

  uint64_t sum_cut = 0;
  std::vector<int> cut_of_node(net.node_count(), 0);
  for (int t : net.non_source_nodes()) {
    NodeCollection T{{t}};
    cut_of_node[t] = min_cut(net, T);
    sum_cut += static_cast<uint64_t>(cut_of_node[t]);
  }
  int n_all = np + nz;
  // The binomial's upper index fits u64 at desk scale (the cap keeps the
  // node count small); bail out flagged if it would not.
  uint64_t s_val = 0;
  {
    unsigned __int128 s = sum_cut;
    for (int i = 0; i + 1 < n_all; ++i) s *= 2;
    if (s > static_cast<unsigned __int128>(UINT64_MAX) - n_channels) {
      out.complete = false;
      return out;
    }
    s_val = static_cast<uint64_t>(s);
  }

  uint64_t pow_z = uint64_t{1} << nz;
  uint64_t v3 = pow_z - 1;  // collections of in-degree-zero nodes only
  for (uint64_t mask = 1; mask < (uint64_t{1} << np); ++mask) {
    NodeCollection T;
    for (int i = 0; i < np; ++i)
      if (mask & (uint64_t{1} << i)) T.nodes.push_back(pool[i]);
    std::sort(T.nodes.begin(), T.nodes.end());
    int cut = min_cut(net, T);
    if (cut < omega) {
      v3 += pow_z;
      continue;
    }
    BigUint term = binomial(n_channels + s_val, static_cast<uint64_t>(cut - omega));
    term.mul_small(pow_z);
    out.dispersion += term;
  }
  out.dispersion += BigUint(v3);
  return out;
}

CodeReport verdicts(const Code& code, const AnalysisOptions& opt) {
  const Network& net = code.net();
  Mat kernels = extended_kernels(code);

  CodeReport rep;
  rep.field_name = code.field().name();
  rep.modulus = code.field().modulus_string();
  rep.omega = code.omega();
  for (int v : net.topo_nodes()) rep.nodes.push_back(net.node_name(v));
  for (int e = 0; e < net.channel_count(); ++e)
    rep.channels.push_back(net.channel(e).id);

  RegularityFlags flags{true, true, true, true, true};
  int omega = code.omega();

  auto make_entry = [&](const std::string& label, const NodeCollection& T,
                        bool has_in) {
    ReceiverEntry ent;
    ent.label = label;
    ent.cut = min_cut(net, T);
    ent.dim_phi = has_in ? message_space(code, kernels, T).dim() : 0;
    ent.bound = ent.cut >= omega ? ent.cut - omega + 1 : 1;
    if (ent.dim_phi >= 1) {
      try {
        ent.dmin = min_distance(code, kernels, T,
                                static_cast<int>(in_of(net, T).size()), opt);
      } catch (const BudgetExceeded&) {
        ent.dmin.reset();
      }
    }
    ent.meets_bound = ent.dmin && ent.dmin->exact && ent.dmin->value == ent.bound;
    return ent;
  };

  bool multicast_dist = true, broadcast_dist = true;
  for (int t : net.non_source_nodes()) {
    NodeCollection T{{t}};
    ReceiverEntry ent = make_entry(net.node_name(t), T, !net.in(t).empty());
    if (ent.cut >= omega && ent.dim_phi != omega) flags.regular = false;
    if (ent.dim_phi != std::min(omega, ent.cut)) flags.strongly_regular = false;
    if (ent.cut >= omega) {
      if (!ent.meets_bound) {
        multicast_dist = false;
        broadcast_dist = false;
      }
    }
    // C_t < omega: the weakly extended bound pins dmin to 1 whenever the
    // distance is defined; nothing further to check here.
    rep.node_entries.push_back(std::move(ent));
  }

  CollectionScan scan = scan_collections(net, opt);
  flags.collections_complete = scan.complete;
  rep.collections_total = scan.total;
  rep.collections_examined = scan.collections.size();

  bool dispersion_dist = true;
  for (const NodeCollection& T : scan.collections) {
    ReceiverEntry ent = make_entry(collection_label(net, T), T, true);
    if (ent.cut >= omega && ent.dim_phi != omega) flags.sup_regular = false;
    if (ent.dim_phi != std::min(omega, ent.cut))
      flags.strongly_sup_regular = false;
    if (ent.cut >= omega && !ent.meets_bound) dispersion_dist = false;
    if (T.nodes.size() >= 2) rep.collection_entries.push_back(std::move(ent));
  }

  rep.flags = flags;
  rep.multicast_mds = flags.regular && multicast_dist;
  rep.broadcast_mds = flags.strongly_regular && broadcast_dist;
  rep.dispersion_mds =
      flags.strongly_sup_regular && dispersion_dist && scan.complete;
  rep.bounds = field_bounds(net, omega, opt);
  return rep;
}

std::string CodeReport::to_text() const {
  std::ostringstream os;
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  os << "report-format: 1\n";
  os << "tool: " << kToolVersion << "\n";
  os << "field: " << field_name << "\n";
  os << "modulus: " << modulus << "\n";
  os << "omega: " << omega << "\n";
  os << "nodes:";
  for (const auto& n : nodes) os << " " << n;
  os << "\nchannels:";
  for (const auto& c : channels) os << " " << c;
  os << "\n";
  os << "regular: " << yn(flags.regular) << "\n";
  os << "strongly-regular: " << yn(flags.strongly_regular) << "\n";
  os << "sup-regular: " << yn(flags.sup_regular) << "\n";
  os << "strongly-sup-regular: " << yn(flags.strongly_sup_regular) << "\n";
  os << "collections-examined: " << collections_examined << "\n";
  os << "collections-total: " << collections_total << "\n";
  auto entry_line = [&](const char* kind, const ReceiverEntry& e) {
    os << kind << " " << e.label << ": cut=" << e.cut
       << " dim-phi=" << e.dim_phi << " bound=" << e.bound;
    if (e.dmin) {
      os << " dmin=";
      if (!e.dmin->exact) os << ">=";
      os << e.dmin->value;
    } else {
      os << " dmin=-";
    }
    os << " tight=" << (e.dmin ? yn(e.meets_bound) : "-") << "\n";
  };
  for (const auto& e : node_entries) entry_line("node", e);
  for (const auto& e : collection_entries) entry_line("collection", e);
  os << "verdict-multicast-mds: " << yn(multicast_mds) << "\n";
  os << "verdict-broadcast-mds: " << yn(broadcast_mds) << "\n";
  os << "verdict-dispersion-mds: " << yn(dispersion_mds) << "\n";
  os << "bound-multicast: " << bounds.multicast.to_string() << "\n";
  os << "bound-broadcast: " << bounds.broadcast.to_string() << "\n";
  os << "bound-dispersion: " << bounds.dispersion.to_string() << "\n";
  os << "bound-corollary-multicast: " << bounds.corollary_multicast.to_string()
     << "\n";
  os << "bound-corollary-broadcast: " << bounds.corollary_broadcast.to_string()
     << "\n";
  os << "bounds-complete: " << yn(bounds.complete) << "\n";
  return os.str();
}

}  // namespace lnec
