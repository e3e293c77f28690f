#include "lnec/construct.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <sstream>

#include "lnec/flowgraph.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lnec {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct CutEntry {
  enum Kind { kMsg, kErr, kReal } kind;
  int index;  // message slot, or channel index
};

// State of one (receiver, pattern) pair: the chosen channel-disjoint paths,
// the dynamic cut (one entry per path), and per-channel predecessors.
struct Plan {
  int node;
  Pattern pattern;
  std::vector<char> in_rho;    // channel bitmap
  std::vector<char> on_path;   // channel bitmap: E_{t,rho}
  std::vector<int> path_slot;  // channel -> cut slot, -1 if off the paths
  std::vector<CutEntry> prev;  // channel -> predecessor entry (valid on paths)
  std::vector<CutEntry> cut;   // slot -> current entry
  std::string label;
};

// f^rho of a cut entry, as a full (omega+|E|)-length vector: message
// coordinates kept, channel coordinates kept only inside the pattern.
Vec restrict_entry(const Plan& plan, const CutEntry& entry, const Mat& kernels,
                   int omega) {
  int dim = kernels.rows();
  Vec v(dim, 0);
  switch (entry.kind) {
    case CutEntry::kMsg:
      v[entry.index] = 1;
      break;
    case CutEntry::kErr:
      if (plan.in_rho[entry.index]) v[omega + entry.index] = 1;
      break;
    case CutEntry::kReal:
      for (int i = 0; i < omega; ++i) v[i] = kernels.at(i, entry.index);
      for (int e : plan.pattern) v[omega + e] = kernels.at(omega + e, entry.index);
      break;
  }
  return v;
}

// f^{rho^c} of a full-length vector: message coordinates and pattern
// coordinates zeroed.
Vec complement_of(const Plan& plan, std::span<const uint16_t> v, int omega) {
  Vec out(v.begin(), v.end());
  for (int i = 0; i < omega; ++i) out[i] = 0;
  for (int e : plan.pattern) out[omega + e] = 0;
  return out;
}

Plan build_plan(const Network& net, int omega, int t, Pattern pattern) {
  int n = net.channel_count();
  Plan plan;
  plan.node = t;
  plan.pattern = std::move(pattern);
  plan.in_rho.assign(n, 0);
  for (int e : plan.pattern) plan.in_rho[e] = 1;
  plan.on_path.assign(n, 0);
  plan.path_slot.assign(n, -1);
  plan.prev.assign(n, CutEntry{CutEntry::kMsg, -1});

  {
    std::ostringstream label;
    label << "t=" << net.node_name(t) << " rho={";
    for (size_t i = 0; i < plan.pattern.size(); ++i) {
      if (i) label << ",";
      label << net.channel(plan.pattern[i]).id;
    }
    label << "}";
    plan.label = label.str();
  }

  // Flow view realizing both path conditions: message arcs feed the source,
  // pattern channels are spliced from the super source straight to their
  // heads (the imaginary error channel followed by the channel itself).
  detail::FlowGraph g(net.node_count() + 1);
  int sigma = net.node_count();
  // labels: [0,n) real channel, [n, n+omega) message slot, [n+omega, ...) err splice
  for (int e = 0; e < n; ++e) {
    const Channel& c = net.channel(e);
    if (plan.in_rho[e])
      g.add_arc(sigma, c.head, n + omega + e);
    else
      g.add_arc(c.tail, c.head, e);
  }
  for (int i = 0; i < omega; ++i) g.add_arc(sigma, net.source(), n + i);

  int want = omega + static_cast<int>(plan.pattern.size());
  int flow = g.max_flow(sigma, t, want);
  if (flow < want)
    throw ConstructError("path initialization found only " +
                             std::to_string(flow) + " of " +
                             std::to_string(want) + " disjoint paths",
                         "", {plan.label});

  auto raw_paths = g.decompose(sigma, t);
  if (static_cast<int>(raw_paths.size()) != want)
    throw std::logic_error("unexpected path decomposition size");

  for (int slot = 0; slot < want; ++slot) {
    const auto& labels = raw_paths[slot];
    std::vector<CutEntry> entries;
    for (size_t j = 0; j < labels.size(); ++j) {
      int label = labels[j];
      if (label >= n + omega) {  // err splice: e' then e itself
        entries.push_back({CutEntry::kErr, label - n - omega});
        entries.push_back({CutEntry::kReal, label - n - omega});
      } else if (label >= n) {
        entries.push_back({CutEntry::kMsg, label - n});
      } else {
        entries.push_back({CutEntry::kReal, label});
      }
    }
    if (entries.empty() || entries[0].kind == CutEntry::kReal)
      throw std::logic_error("path does not start at an imaginary channel");
    for (size_t j = 0; j < entries.size(); ++j) {
      if (entries[j].kind != CutEntry::kReal) continue;
      int e = entries[j].index;
      plan.on_path[e] = 1;
      plan.path_slot[e] = slot;
      plan.prev[e] = entries[j - 1];
    }
    plan.cut.push_back(entries[0]);
  }
  return plan;
}

Vec random_tuple(std::mt19937_64& rng, size_t n, uint32_t q) {
  Vec c(n);
  for (size_t i = 0; i < n; ++i) c[i] = static_cast<uint16_t>(rng() % q);
  return c;
}

}  // namespace

std::optional<AvoidResult> choose_avoiding(
    const std::vector<Vec>& generators,
    const std::vector<Eliminator>& forbidden, const Field& field,
    uint64_t budget, uint64_t seed) {
  if (generators.empty()) throw std::invalid_argument("no generators");
  size_t dim = generators[0].size();
  for (const Vec& g : generators)
    if (g.size() != dim) throw std::invalid_argument("generator length mismatch");
  uint32_t q = field.order();
  size_t n_g = generators.size();

  Vec combo(dim);
  auto try_tuple = [&](const Vec& c) -> bool {
    std::fill(combo.begin(), combo.end(), 0);
    bool nonzero = false;
    for (size_t j = 0; j < n_g; ++j) {
      if (!c[j]) continue;
      const Vec& g = generators[j];
      for (size_t x = 0; x < dim; ++x)
        if (g[x]) combo[x] = field.add(combo[x], field.mul(c[j], g[x]));
    }
    for (uint16_t x : combo)
      if (x) {
        nonzero = true;
        break;
      }
    if (!nonzero) return false;
    for (const Eliminator& f : forbidden)
      if (f.contains(combo)) return false;
    return true;
  };

  unsigned __int128 space = 1;
  for (size_t j = 0; j < n_g; ++j) {
    space *= q;
    if (space > budget) break;
  }

  if (space <= budget) {
    Vec c(n_g, 0);
    for (uint64_t idx = 1; idx < static_cast<uint64_t>(space); ++idx) {
      // increment base-q counter, least significant digit first
      for (size_t j = 0; j < n_g; ++j) {
        if (++c[j] < q) break;
        c[j] = 0;
      }
      if (try_tuple(c)) return AvoidResult{c, combo, idx};
    }
    return std::nullopt;
  }

  std::mt19937_64 rng(seed);
  for (uint64_t trial = 0; trial < budget; ++trial) {
    Vec c = random_tuple(rng, n_g, q);
    bool all_zero = std::all_of(c.begin(), c.end(), [](uint16_t v) { return !v; });
    if (all_zero) continue;
    if (try_tuple(c)) return AvoidResult{c, combo, trial + 1};
  }
  return std::nullopt;
}

Code construct_multicast_mds(const Network& net, int omega, const Field& field,
                             const ConstructOptions& opt) {
  if (omega < 1) throw std::invalid_argument("dimension must be >= 1");
  int n = net.channel_count();
  int dim = omega + n;

  AnalysisOptions aopt;
  aopt.pattern_budget = opt.pattern_budget;
  aopt.collections_cap = opt.collections_cap;
  aopt.parallel = opt.parallel;

  // One plan per (receiver with C_t >= omega, pattern in R_t(C_t - omega)).
  std::vector<Plan> plans;
  for (int t : net.non_source_nodes()) {
    NodeCollection T{{t}};
    int cut = min_cut(net, T);
    if (cut < omega) continue;
    int r = cut - omega;
    for (Pattern& rho : enumerate_R(net, T, r, aopt))
      plans.push_back(build_plan(net, omega, t, std::move(rho)));
  }
  if (opt.log)
    *opt.log << "init: " << plans.size() << " path plans\n";

  auto net_ptr = std::make_shared<Network>(net);
  Code code(net_ptr, field, omega);
  Mat kernels(field, dim, n);

  for (int e = 0; e < n; ++e) {
    const Channel& c = net.channel(e);
    std::vector<int> active;
    for (size_t p = 0; p < plans.size(); ++p)
      if (plans[p].on_path[e]) active.push_back(static_cast<int>(p));

    if (active.empty()) {
      kernels.set(omega + e, e, 1);  // all-zero coefficients
      if (opt.log) *opt.log << "channel " << c.id << ": off all paths\n";
      continue;
    }

    bool from_source = c.tail == net.source();
    std::vector<Vec> gens;
    std::vector<int> in_channels;
    if (from_source) {
      for (int i = 0; i < omega; ++i) {
        Vec unit(dim, 0);
        unit[i] = 1;
        gens.push_back(std::move(unit));
      }
    } else {
      for (int d : net.in(c.tail)) {
        in_channels.push_back(d);
        gens.push_back(kernels.col_vec(d));
      }
    }
    Vec unit_e(dim, 0);
    unit_e[omega + e] = 1;
    gens.push_back(unit_e);

    std::vector<Eliminator> forbidden;
    forbidden.reserve(active.size());
    for (int p : active) {
      const Plan& plan = plans[p];
      Eliminator forb(field, dim);
      int my_slot = plan.path_slot[e];
      for (size_t slot = 0; slot < plan.cut.size(); ++slot) {
        if (static_cast<int>(slot) == my_slot) continue;
        forb.add(restrict_entry(plan, plan.cut[slot], kernels, omega));
      }
      for (size_t j = 0; j + 1 < gens.size(); ++j)
        forb.add(complement_of(plan, gens[j], omega));
      forb.add(complement_of(plan, unit_e, omega));
      forbidden.push_back(std::move(forb));
    }

    auto pick = choose_avoiding(gens, forbidden, field, opt.candidate_budget,
                                splitmix64(opt.seed ^ (0x517cc1b7ull * (e + 1))));
    if (!pick) {
      std::vector<std::string> blocked;
      for (int p : active) blocked.push_back(plans[p].label);
      throw ConstructError(
          "no admissible kernel for channel " + c.id + " over GF(" +
              field.name() + "); " + std::to_string(active.size()) +
              " active plans (field may be below the multicast bound)",
          c.id, std::move(blocked));
    }

    uint16_t ce = pick->coefficients.back();
    Vec column = pick->vector;
    if (ce == 0) {
      column[omega + e] = field.add(column[omega + e], 1);
    } else {
      uint16_t scale = field.inv(ce);
      for (auto& v : column) v = field.mul(v, scale);
    }
    kernels.set_col(e, column);

    uint16_t scale = ce == 0 ? 1 : field.inv(ce);
    if (from_source) {
      for (int i = 0; i < omega; ++i)
        code.set_coef_msg(i, e, field.mul(scale, pick->coefficients[i]));
    } else {
      for (size_t j = 0; j < in_channels.size(); ++j)
        code.set_coef(in_channels[j], e,
                      field.mul(scale, pick->coefficients[j]));
    }

    for (int p : active) {
      Plan& plan = plans[p];
      plan.cut[plan.path_slot[e]] = CutEntry{CutEntry::kReal, e};
      if (opt.log)
        *opt.log << "  cut[" << plan.label << "] slot " << plan.path_slot[e]
                 << " <- " << c.id << "\n";
    }

    if (opt.check_invariants) {
      for (int p : active) {
        const Plan& plan = plans[p];
        Eliminator check(field, dim);
        for (const CutEntry& entry : plan.cut)
          check.add(restrict_entry(plan, entry, kernels, omega));
        if (check.rank() != static_cast<int>(plan.cut.size()))
          throw std::logic_error("cut kernels lost independence at channel " +
                                 c.id + " (" + plan.label + ")");
      }
    }

    if (opt.log)
      *opt.log << "channel " << c.id << ": " << active.size()
               << " active plans, " << pick->tried << " candidates tried\n";
  }

  // The recursion must reproduce the kernels assembled incrementally.
  if (!(extended_kernels(code) == kernels))
    throw std::logic_error("recovered coefficients do not reproduce kernels");
  return code;
}

namespace {

Code random_code(const std::shared_ptr<const Network>& net, const Field& field,
                 int omega, uint64_t seed) {
  std::mt19937_64 rng(seed);
  uint32_t q = field.order();
  Code code(net, field, omega);
  for (int e = 0; e < net->channel_count(); ++e) {
    const Channel& c = net->channel(e);
    if (c.tail == net->source()) {
      for (int i = 0; i < omega; ++i)
        code.set_coef_msg(i, e, static_cast<uint16_t>(rng() % q));
    } else {
      for (int d : net->in(c.tail))
        code.set_coef(d, e, static_cast<uint16_t>(rng() % q));
    }
  }
  return code;
}

// Short-circuit target check; on failure reports the first offending spot.
bool check_target(const Code& code, Target target, const AnalysisOptions& opt,
                  std::string* why) {
  const Network& net = code.net();
  Mat kernels = extended_kernels(code);
  int omega = code.omega();

  auto distance_tight = [&](const NodeCollection& T, int cut,
                            const std::string& label) {
    DistanceResult d =
        min_distance(code, kernels, T, static_cast<int>(in_of(net, T).size()), opt);
    if (!d.exact || d.value != cut - omega + 1) {
      *why = "distance@" + label;
      return false;
    }
    return true;
  };

  for (int t : net.non_source_nodes()) {
    NodeCollection T{{t}};
    int cut = min_cut(net, T);
    int dim_phi = net.in(t).empty() ? 0 : message_space(code, kernels, T).dim();
    bool needs_full = cut >= omega;
    if (target == Target::multicast) {
      if (needs_full && dim_phi != omega) {
        *why = "not-regular@" + net.node_name(t);
        return false;
      }
    } else {
      if (dim_phi != std::min(omega, cut)) {
        *why = "not-strongly-regular@" + net.node_name(t);
        return false;
      }
    }
    if (needs_full && !distance_tight(T, cut, net.node_name(t))) return false;
  }

  if (target == Target::dispersion) {
    int pool = static_cast<int>(net.non_source_nodes().size());
    uint64_t total = pool >= 64 ? UINT64_MAX : (uint64_t{1} << pool) - 1;
    if (total > opt.collections_cap)
      throw BudgetExceeded("dispersion verification exceeds collections cap");
    for (const NodeCollection& T : enumerate_collections(net, pool)) {
      if (T.nodes.size() < 2) continue;  // singletons handled above
      int cut = min_cut(net, T);
      int dim_phi = message_space(code, kernels, T).dim();
      if (dim_phi != std::min(omega, cut)) {
        *why = "not-strongly-sup-regular@" + std::to_string(T.nodes.size());
        return false;
      }
      if (cut >= omega && !distance_tight(T, cut, "collection")) return false;
    }
  }
  return true;
}

}  // namespace

RandomConstructResult construct_random_serial(const Network& net, int omega,
                                              const Field& field, Target target,
                                              int attempts, uint64_t seed,
                                              const ConstructOptions& opt) {
  if (attempts < 1) throw std::invalid_argument("attempts must be >= 1");
  AnalysisOptions aopt;
  aopt.pattern_budget = opt.pattern_budget;
  aopt.collections_cap = opt.collections_cap;
  aopt.parallel = false;  // fully serial reference
  auto net_ptr = std::make_shared<Network>(net);

  RandomConstructResult res;
  for (int a = 0; a < attempts; ++a) {
    Code code = random_code(net_ptr, field, omega, splitmix64(seed + a));
    std::string why;
    if (check_target(code, target, aopt, &why)) {
      res.code = std::move(code);
      res.attempts_used = a + 1;
      return res;
    }
    ++res.failures[why];
  }
  res.attempts_used = attempts;
  return res;
}

RandomConstructResult construct_random(const Network& net, int omega,
                                       const Field& field, Target target,
                                       int attempts, uint64_t seed,
                                       const ConstructOptions& opt) {
  if (!opt.parallel)
    return construct_random_serial(net, omega, field, target, attempts, seed, opt);
  if (attempts < 1) throw std::invalid_argument("attempts must be >= 1");
  AnalysisOptions aopt;
  aopt.pattern_budget = opt.pattern_budget;
  aopt.collections_cap = opt.collections_cap;
  aopt.parallel = false;  // attempts are the parallel axis
  auto net_ptr = std::make_shared<Network>(net);

  // geometrically growing blocks: little wasted work when an early attempt
  // succeeds, few parallel regions when the scan runs long; the result is
  // the global minimum success index regardless of the blocking
  int block = 1;
#ifdef _OPENMP
  block = std::max(1, omp_get_max_threads());
#endif

  RandomConstructResult res;
  std::vector<std::string> reasons(attempts);
  std::vector<char> ok(attempts, 0);
  for (int base = 0; base < attempts; base += block, block *= 4) {
    int hi = std::min(attempts, base + block);
    std::exception_ptr pending;
#pragma omp parallel for schedule(static)
    for (int a = base; a < hi; ++a) {
      try {
        Code code = random_code(net_ptr, field, omega, splitmix64(seed + a));
        std::string why;
        if (check_target(code, target, aopt, &why))
          ok[a] = 1;
        else
          reasons[a] = why;
      } catch (...) {
        // exceptions must not unwind out of the parallel region
#pragma omp critical
        if (!pending) pending = std::current_exception();
      }
    }
    if (pending) std::rethrow_exception(pending);
    for (int a = base; a < hi; ++a) {
      if (!ok[a]) continue;
      // rebuild deterministically from the winning attempt index
      res.code = random_code(net_ptr, field, omega, splitmix64(seed + a));
      res.attempts_used = a + 1;
      for (int b = 0; b < a; ++b) ++res.failures[reasons[b]];
      return res;
    }
  }
  res.attempts_used = attempts;
  for (int a = 0; a < attempts; ++a) ++res.failures[reasons[a]];
  return res;
}

}  // namespace lnec
