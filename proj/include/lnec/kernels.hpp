#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "lnec/matrix.hpp"
#include "lnec/network.hpp"

namespace lnec {

// A linear network error correction code: the local encoding coefficients
// k_{d,e} over adjacent channel pairs, plus the rate omega. Kernel vectors
// live in the (omega + |E|)-dimensional coordinate space indexed by the
// imaginary message channels followed by the channels in ancestral order;
// the per-channel imaginary error coefficient is structurally 1 and never
// stored.
class Code {
 public:
  Code(std::shared_ptr<const Network> net, Field field, int omega);

  const Network& net() const { return *net_; }
  std::shared_ptr<const Network> net_ptr() const { return net_; }
  const Field& field() const { return f_; }
  int omega() const { return omega_; }
  int space_dim() const { return omega_ + net_->channel_count(); }

  // Coefficient from the i-th imaginary message channel into e; e must
  // leave the source.
  uint16_t coef_msg(int i, int e) const;
  void set_coef_msg(int i, int e, uint16_t v);

  // Coefficient from channel d into channel e; requires head(d) = tail(e).
  uint16_t coef(int d, int e) const;
  void set_coef(int d, int e, uint16_t v);

  // Raw per-channel coefficient row, aligned with In(tail(e)) (message
  // slots 0..omega-1 for channels leaving the source).
  std::span<const uint16_t> coef_row(int e) const { return k_[e]; }

  // Deterministic text form with the network inlined.
  std::string to_text() const;

  // Parses a code file. `loader` resolves `network file <path>` references;
  // omit it to accept only inline networks.
  static Code parse(std::string_view text,
                    const std::function<std::string(const std::string&)>& loader = {});

  bool operator==(const Code& o) const;

 private:
  int slot_of(int d, int e) const;

  std::shared_ptr<const Network> net_;
  Field f_;
  int omega_;
  std::vector<Vec> k_;
};

// Extended global encoding kernels, computed by the recursion
// f_e = sum_{d in In(tail(e))} k_{d,e} f_d + 1_e in ancestral order.
// Column e of the result is f_e; rows 0..omega-1 are the message
// coordinates, row omega+d is the coordinate of channel d.
Mat extended_kernels(const Code& code);

// One-hop transfer matrices and the closed form Mtilde = Btilde (I-K)^{-1}.
// K is strictly upper triangular in the ancestral order, so I-K is always
// invertible with determinant 1.
struct TransferMatrices {
  Mat btilde;  // (omega+|E|) x |E|
  Mat k;       // |E| x |E|
  Mat mtilde;  // (omega+|E|) x |E|
};
TransferMatrices transfer_matrices(const Code& code);

// Columns f_e for e in In(T), ancestral order.
struct DecodingMatrix {
  Mat m;                     // (omega+|E|) x |In(T)|
  std::vector<int> columns;  // channel index per column
  int omega;

  Vec row_msg(int i) const { return m.row_vec(i); }
  Vec row_channel(int d) const { return m.row_vec(omega + d); }
};
DecodingMatrix decoding_matrix(const Code& code, const Mat& kernels,
                               const NodeCollection& T);

// Rho-restrictions of a kernel-space vector (Definition-style): the short
// form keeps message coordinates plus pattern coordinates; the kept form
// zeroes everything off In(s) and the pattern; complement = v - kept.
struct RhoParts {
  Vec short_form;  // length omega + |pattern|
  Vec kept;        // length omega + |E|
  Vec complement;  // length omega + |E|
};
RhoParts pattern_restrict(std::span<const uint16_t> v,
                          std::span<const int> pattern, int omega);

// Message space Phi(T): span of the message rows of the decoding matrix.
RowSpace message_space(const Code& code, const Mat& kernels,
                       const NodeCollection& T);
// Error space Delta(T, rho): span of the pattern channels' rows.
RowSpace error_space(const Code& code, const Mat& kernels,
                     const NodeCollection& T, std::span<const int> pattern);

}  // namespace lnec
