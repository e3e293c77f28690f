#pragma once

#include <iosfwd>
#include <map>
#include <optional>

#include "lnec/analysis.hpp"

namespace lnec {

struct ConstructOptions {
  uint64_t seed = 0;
  // Exhaustive candidate sweep up to this many combinations, then seeded
  // random sampling with the same count as a retry cap.
  uint64_t candidate_budget = uint64_t{1} << 20;
  uint64_t pattern_budget = 2'000'000;
  uint64_t collections_cap = 65535;
  bool check_invariants = true;   // verify cut independence at every step
  std::ostream* log = nullptr;    // step-by-step construction trace
  bool parallel = true;
};

// Construction failure with the offending step attached.
class ConstructError : public std::runtime_error {
 public:
  ConstructError(std::string what, std::string channel,
                 std::vector<std::string> blocked)
      : std::runtime_error(std::move(what)),
        channel_id(std::move(channel)),
        blocked_plans(std::move(blocked)) {}
  std::string channel_id;
  std::vector<std::string> blocked_plans;  // "t=<node> rho={...}" per plan
};

// Deterministic multicast MDS construction: per qualifying (receiver,
// pattern) pair, channel-disjoint path plans seed dynamic cut sets whose
// restricted kernels are kept linearly independent by choosing each new
// kernel outside the union of the plans' forbidden subspaces.
Code construct_multicast_mds(const Network& net, int omega, const Field& field,
                             const ConstructOptions& opt = {});

// A vector of the span of `generators` lying in none of the forbidden
// subspaces, together with the combination that produced it. Deterministic:
// lexicographic sweep over combination tuples while the space is within
// budget, then seeded random sampling.
struct AvoidResult {
  Vec coefficients;  // over generators
  Vec vector;
  uint64_t tried = 0;  // candidates examined before acceptance
};
std::optional<AvoidResult> choose_avoiding(
    const std::vector<Vec>& generators,
    const std::vector<Eliminator>& forbidden, const Field& field,
    uint64_t budget, uint64_t seed);

enum class Target { multicast, broadcast, dispersion };

struct RandomConstructResult {
  std::optional<Code> code;
  int attempts_used = 0;                  // index of the first success + 1
  std::map<std::string, int> failures;    // reason -> count, attempts before success
};

// Uniform random local coefficients, verified exactly against the target
// verdict; the first succeeding attempt (by index) is returned. Bit
// reproducible for a fixed seed regardless of thread count.
RandomConstructResult construct_random(const Network& net, int omega,
                                       const Field& field, Target target,
                                       int attempts, uint64_t seed,
                                       const ConstructOptions& opt = {});
RandomConstructResult construct_random_serial(const Network& net, int omega,
                                              const Field& field, Target target,
                                              int attempts, uint64_t seed,
                                              const ConstructOptions& opt = {});

}  // namespace lnec
