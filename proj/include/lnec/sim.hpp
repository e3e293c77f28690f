#pragma once

#include <optional>

#include "lnec/analysis.hpp"

namespace lnec {

// Channel-by-channel transmission state: intended symbol, injected error,
// actual output.
struct ChannelOutputs {
  Vec intended;  // U_e, per channel in ancestral order
  Vec actual;    // U_e + Z_e
};

struct DecodeResult {
  enum class Status { unique, ambiguous, no_solution };
  Status status = Status::no_solution;
  Vec message;  // valid when unique
  Vec error;    // minimal-weight error vector, valid when unique
  int weight = 0;  // tied weight for ambiguous, error weight for unique
};

struct Counterexample {
  Vec message, error;
};

struct SweepReport {
  uint64_t cases = 0;
  uint64_t correct = 0;
  std::optional<Counterexample> first_failure;
};

// End-to-end transmission machinery for one code. The transfer matrix is
// computed once and every encode cross-checks the channel recursion against
// the algebraic form.
class Simulator {
 public:
  explicit Simulator(const Code& code);

  const Code& code() const { return code_; }
  const Mat& kernels() const { return kernels_; }

  // Runs the channel recursion with message X and error vector Z and
  // asserts it matches (X Z) * Mtilde.
  ChannelOutputs encode(std::span<const uint16_t> message,
                        std::span<const uint16_t> error) const;

  // Received word at T: the actual outputs on In(T), decoding-matrix order.
  Vec observe(const ChannelOutputs& outputs, const NodeCollection& T) const;

  // Exhaustive minimum-weight decoding up to error weight tau. Requires
  // dim Phi(T) = omega. Ambiguity (several messages tied at the minimal
  // feasible weight) is reported, never silently resolved.
  DecodeResult decode(const NodeCollection& T, std::span<const uint16_t> received,
                      int tau) const;

  // Decodes every (message, error) pair with wt(error) <= tau and counts
  // exact recoveries. Throws BudgetExceeded if the case count exceeds
  // `budget`. Deterministic regardless of thread count.
  SweepReport capability_sweep(const NodeCollection& T, int tau,
                               uint64_t budget = 1'000'000,
                               bool parallel = true) const;
  SweepReport capability_sweep_serial(const NodeCollection& T, int tau,
                                      uint64_t budget = 1'000'000) const;

 private:
  SweepReport sweep_impl(const NodeCollection& T, int tau, uint64_t budget,
                         bool parallel) const;

  Code code_;
  Mat kernels_;
};

}  // namespace lnec
