#pragma once

#include <map>
#include <optional>
#include <string>

#include "lnec/bigint.hpp"
#include "lnec/kernels.hpp"

namespace lnec {

using Pattern = std::vector<int>;  // sorted channel indices

// Thrown when an enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct AnalysisOptions {
  // Hard cap on the number of collections examined (2^k - 1 for k
  // non-source nodes when unlimited). 65535 covers 16 non-source nodes.
  uint64_t collections_cap = 65535;
  // Cap on patterns examined per distance / R-set enumeration.
  uint64_t pattern_budget = 2'000'000;
  bool parallel = true;
};

// rank_T(rho): min-cut from the replacement source of the transformed
// network to T. Code-independent.
int rank_of_pattern(const Network& net, std::span<const int> pattern,
                    const NodeCollection& T);

// Single-code witness for pattern domination: Delta(T, rho1) is contained
// in Delta(T, rho2) for THIS code. A necessary condition for the
// code-independent relation, not the relation itself.
bool dominates(const Code& code, const Mat& kernels, std::span<const int> rho1,
               std::span<const int> rho2, const NodeCollection& T);

// Minimum distance at T: the least |rho| whose error space meets the
// message space nontrivially. Exhaustive by increasing pattern size;
// `exact` is false when the search hit `search_cap` without a witness
// (value then holds search_cap + 1, a lower bound).
struct DistanceResult {
  int value = 0;
  bool exact = true;
};
DistanceResult min_distance(const Code& code, const Mat& kernels,
                            const NodeCollection& T, int search_cap,
                            const AnalysisOptions& opt = {});
DistanceResult min_distance_serial(const Code& code, const Mat& kernels,
                                   const NodeCollection& T, int search_cap,
                                   const AnalysisOptions& opt = {});

// All patterns with |rho| = rank_T(rho) = delta.
std::vector<Pattern> enumerate_R(const Network& net, const NodeCollection& T,
                                 int delta, const AnalysisOptions& opt = {});
std::vector<Pattern> enumerate_R_serial(const Network& net,
                                        const NodeCollection& T, int delta,
                                        const AnalysisOptions& opt = {});

struct RegularityFlags {
  bool regular = false;
  bool strongly_regular = false;
  bool sup_regular = false;
  bool strongly_sup_regular = false;
  bool collections_complete = true;  // false when the cap truncated the scan
};
RegularityFlags regularity(const Code& code, const AnalysisOptions& opt = {});

// Field-size thresholds (the code exists when |F| strictly exceeds the
// value). R-sets and binomials use the per-receiver redundancy C - omega.
struct FieldBounds {
  BigUint multicast;             // sum of |R_t| over nodes with C_t >= omega
  BigUint broadcast;             // multicast + |V2|
  BigUint dispersion;            // per printed formula; see README
  BigUint corollary_multicast;   // sum of C(|E|, r_t)
  BigUint corollary_broadcast;   // + |V2|
  bool complete = true;
};
FieldBounds field_bounds(const Network& net, int omega,
                         const AnalysisOptions& opt = {});

// Per-receiver entry of a code report. `bound` is the Singleton distance
// bound: C - omega + 1 when C >= omega, else 1.
struct ReceiverEntry {
  std::string label;
  int cut = 0;
  int dim_phi = 0;
  int bound = 0;
  std::optional<DistanceResult> dmin;  // absent when dim_phi = 0
  bool meets_bound = false;            // dmin == bound, exactly
};

struct CodeReport {
  std::string field_name;
  std::string modulus;
  int omega = 0;
  std::vector<std::string> channels;  // ancestral order
  std::vector<std::string> nodes;     // topological order
  RegularityFlags flags;
  std::vector<ReceiverEntry> node_entries;        // all non-source nodes
  std::vector<ReceiverEntry> collection_entries;  // |T| >= 2 only
  uint64_t collections_examined = 0;
  uint64_t collections_total = 0;
  bool multicast_mds = false;
  bool broadcast_mds = false;
  bool dispersion_mds = false;
  FieldBounds bounds;

  std::string to_text() const;  // stable key order
};

// Full report: regularity, per-node and per-collection distances, MDS
// verdicts per the three Singleton-equality definitions, field bounds.
CodeReport verdicts(const Code& code, const AnalysisOptions& opt = {});

}  // namespace lnec
