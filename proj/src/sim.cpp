#include "lnec/sim.hpp"

#include <algorithm>

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

struct DecodeContext {
  DecodingMatrix dm;
  Mat msg_rows;  // omega x |In(T)|
};

DecodeContext make_context(const Code& code, const Mat& kernels,
                           const NodeCollection& T) {
  DecodingMatrix dm = decoding_matrix(code, kernels, T);
  Mat msg(code.field(), code.omega(), dm.m.cols());
  for (int i = 0; i < code.omega(); ++i) msg.set_row(i, dm.m.row(i));
  if (msg.rank() != code.omega())
    throw std::invalid_argument(
        "message space has rank below omega; unique decoding impossible");
  return {std::move(dm), std::move(msg)};
}

// Per-thread scratch for the augmented eliminations the decoder runs per
// pattern; reused across patterns and cases to keep the hot loop free of
// allocation.
struct DecodeScratch {
  std::vector<uint16_t> aug;  // m x (omega + w + 1), row-major
  std::vector<int> pattern, pivot_col;
  std::vector<char> is_pivot;
};

// Reduced elimination of y * A = received with A's rows given by the
// message rows plus the pattern rows. Returns false when inconsistent;
// otherwise fills `particular` and reports whether any free column touches
// the message block.
bool solve_pattern(const Field& f, const DecodeContext& ctx,
                   std::span<const uint16_t> received, int omega,
                   const std::vector<int>& pattern, DecodeScratch& s,
                   Vec& particular, bool* x_free) {
  int w = static_cast<int>(pattern.size());
  int m = ctx.dm.m.cols();
  int cols = omega + w + 1;
  s.aug.assign(static_cast<size_t>(m) * cols, 0);
  for (int r = 0; r < m; ++r) {
    uint16_t* row = s.aug.data() + static_cast<size_t>(r) * cols;
    for (int i = 0; i < omega; ++i) row[i] = ctx.msg_rows.at(i, r);
    for (int j = 0; j < w; ++j) row[omega + j] = ctx.dm.m.at(omega + pattern[j], r);
    row[cols - 1] = received[r];
  }

  auto at = [&](int r, int c) -> uint16_t& {
    return s.aug[static_cast<size_t>(r) * cols + c];
  };
  int lead = 0;
  s.pivot_col.assign(m, -1);
  s.is_pivot.assign(cols - 1, 0);
  for (int col = 0; col < cols && lead < m; ++col) {
    int pivot = -1;
    for (int r = lead; r < m; ++r)
      if (at(r, col)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != lead)
      for (int c = col; c < cols; ++c) std::swap(at(pivot, c), at(lead, c));
    uint16_t inv = f.inv(at(lead, col));
    for (int c = col; c < cols; ++c) at(lead, c) = f.mul(at(lead, c), inv);
    for (int r = 0; r < m; ++r) {
      if (r == lead) continue;
      uint16_t factor = at(r, col);
      if (!factor) continue;
      for (int c = col; c < cols; ++c)
        at(r, c) = f.sub(at(r, c), f.mul(factor, at(lead, c)));
    }
    if (col == cols - 1) return false;  // pivot in the constant column
    s.pivot_col[lead] = col;
    s.is_pivot[col] = 1;
    ++lead;
  }

  particular.assign(cols - 1, 0);
  for (int r = 0; r < lead; ++r) particular[s.pivot_col[r]] = at(r, cols - 1);
  // the message part is pinned only if no nullspace direction touches the
  // first omega coordinates: no free message column, and no message-pivot
  // row with a nonzero entry in a free column
  *x_free = false;
  for (int c = 0; c < omega; ++c)
    if (!s.is_pivot[c]) *x_free = true;
  for (int r = 0; r < lead && !*x_free; ++r) {
    if (s.pivot_col[r] >= omega) continue;
    for (int c = 0; c < cols - 1; ++c)
      if (!s.is_pivot[c] && at(r, c)) {
        *x_free = true;
        break;
      }
  }
  return true;
}

DecodeResult decode_impl(const Code& code, const DecodeContext& ctx,
                         std::span<const uint16_t> received, int tau,
                         DecodeScratch& scratch) {
  const Field& f = code.field();
  int omega = code.omega();
  int n = code.net().channel_count();
  int m = ctx.dm.m.cols();
  if (static_cast<int>(received.size()) != m)
    throw std::invalid_argument("received word length mismatch");
  if (tau < 0) throw std::invalid_argument("negative decoding radius");

  Vec particular;
  for (int w = 0; w <= std::min(tau, n); ++w) {
    bool feasible = false, ambiguous = false;
    Vec best_x, best_z;
    uint64_t cnt = comb64(n, w);
    for (uint64_t idx = 0; idx < cnt && !ambiguous; ++idx) {
      unrank_comb(idx, n, w, scratch.pattern);
      bool x_free = false;
      if (!solve_pattern(f, ctx, received, omega, scratch.pattern, scratch,
                         particular, &x_free))
        continue;
      // a free variable in the message block means a second message fits
      if (x_free) {
        ambiguous = true;
        break;
      }
      Vec x(particular.begin(), particular.begin() + omega);
      if (!feasible) {
        feasible = true;
        best_x = x;
        best_z.assign(n, 0);
        for (int j = 0; j < w; ++j)
          best_z[scratch.pattern[j]] = particular[omega + j];
      } else if (x != best_x) {
        ambiguous = true;
      }
    }
    if (ambiguous) {
      DecodeResult res;
      res.status = DecodeResult::Status::ambiguous;
      res.weight = w;
      return res;
    }
    if (feasible) {
      DecodeResult res;
      res.status = DecodeResult::Status::unique;
      res.message = std::move(best_x);
      res.error = std::move(best_z);
      res.weight = w;
      return res;
    }
  }
  return {};
}

}  // namespace

Simulator::Simulator(const Code& code)
    : code_(code), kernels_(extended_kernels(code)) {}

ChannelOutputs Simulator::encode(std::span<const uint16_t> message,
                                 std::span<const uint16_t> error) const {
  const Network& net = code_.net();
  const Field& f = code_.field();
  int omega = code_.omega();
  int n = net.channel_count();
  if (static_cast<int>(message.size()) != omega)
    throw std::invalid_argument("message length mismatch");
  if (static_cast<int>(error.size()) != n)
    throw std::invalid_argument("error vector length mismatch");

  ChannelOutputs out;
  out.intended.assign(n, 0);
  out.actual.assign(n, 0);
  for (int e = 0; e < n; ++e) {
    const Channel& c = net.channel(e);
    auto row = code_.coef_row(e);
    uint16_t u = 0;
    if (c.tail == net.source()) {
      for (int i = 0; i < omega; ++i)
        if (row[i]) u = f.add(u, f.mul(row[i], message[i]));
    } else {
      auto in = net.in(c.tail);
      for (size_t j = 0; j < in.size(); ++j)
        if (row[j]) u = f.add(u, f.mul(row[j], out.actual[in[j]]));
    }
    out.intended[e] = u;
    out.actual[e] = f.add(u, error[e]);
  }

  // (X Z) * Mtilde must reproduce the recursion outputs.
  for (int e = 0; e < n; ++e) {
    uint16_t v = 0;
    for (int i = 0; i < omega; ++i)
      if (kernels_.at(i, e)) v = f.add(v, f.mul(message[i], kernels_.at(i, e)));
    for (int d = 0; d < n; ++d)
      if (error[d] && kernels_.at(omega + d, e))
        v = f.add(v, f.mul(error[d], kernels_.at(omega + d, e)));
    if (v != out.actual[e])
      throw std::logic_error("channel recursion disagrees with transfer matrix");
  }
  return out;
}

Vec Simulator::observe(const ChannelOutputs& outputs,
                       const NodeCollection& T) const {
  std::vector<int> cols = in_of(code_.net(), T);
  Vec received;
  received.reserve(cols.size());
  for (int e : cols) received.push_back(outputs.actual[e]);
  return received;
}

DecodeResult Simulator::decode(const NodeCollection& T,
                               std::span<const uint16_t> received,
                               int tau) const {
  DecodeContext ctx = make_context(code_, kernels_, T);
  DecodeScratch scratch;
  return decode_impl(code_, ctx, received, tau, scratch);
}

SweepReport Simulator::sweep_impl(const NodeCollection& T, int tau,
                                  uint64_t budget, bool parallel) const {
  const Field& f = code_.field();
  int omega = code_.omega();
  int n = code_.net().channel_count();
  uint32_t q = f.order();
  DecodeContext ctx = make_context(code_, kernels_, T);

  // error vectors grouped by weight: C(n, w) patterns, (q-1)^w value tuples
  int max_w = std::min(tau, n);
  std::vector<uint64_t> values_per_pattern(max_w + 1, 1);
  std::vector<uint64_t> block(max_w + 1, 0);
  for (int w = 0; w <= max_w; ++w) {
    unsigned __int128 vals = 1;
    for (int i = 0; i < w; ++i) vals *= (q - 1);
    if (vals > static_cast<unsigned __int128>(UINT64_MAX))
      throw BudgetExceeded("capability sweep exceeds case budget");
    values_per_pattern[w] = static_cast<uint64_t>(vals);
    block[w] = comb64(n, w) * values_per_pattern[w];
  }
  unsigned __int128 z_total = 0;
  for (int w = 0; w <= max_w; ++w) z_total += block[w];
  unsigned __int128 x_total = 1;
  for (int i = 0; i < omega; ++i) x_total *= q;
  unsigned __int128 cases = x_total * z_total;
  if (cases > budget) throw BudgetExceeded("capability sweep exceeds case budget");
  uint64_t total = static_cast<uint64_t>(cases);
  uint64_t z_count = static_cast<uint64_t>(z_total);

  auto run_case = [&](uint64_t flat, DecodeScratch& scratch) -> bool {
    uint64_t x_idx = flat / z_count;
    uint64_t z_idx = flat % z_count;
    Vec x(omega);
    for (int i = 0; i < omega; ++i) {
      x[i] = static_cast<uint16_t>(x_idx % q);
      x_idx /= q;
    }
    int w = 0;
    while (z_idx >= block[w]) {
      z_idx -= block[w];
      ++w;
    }
    uint64_t pat_rank = z_idx / values_per_pattern[w];
    uint64_t val_rank = z_idx % values_per_pattern[w];
    std::vector<int> pattern;
    unrank_comb(pat_rank, n, w, pattern);
    Vec z(n, 0);
    for (int j = 0; j < w; ++j) {
      z[pattern[j]] = static_cast<uint16_t>(1 + val_rank % (q - 1));
      val_rank /= (q - 1);
    }
    ChannelOutputs out = encode(x, z);
    Vec received = observe(out, T);
    DecodeResult dr = decode_impl(code_, ctx, received, tau, scratch);
    return dr.status == DecodeResult::Status::unique && dr.message == x;
  };

  uint64_t correct = 0;
  uint64_t first_fail = UINT64_MAX;
  if (parallel) {
    std::exception_ptr pending;
#pragma omp parallel reduction(+ : correct) reduction(min : first_fail)
    {
      DecodeScratch scratch;
#pragma omp for schedule(static)
      for (int64_t flat = 0; flat < static_cast<int64_t>(total); ++flat) {
        try {
          if (run_case(static_cast<uint64_t>(flat), scratch))
            ++correct;
          else
            first_fail = std::min(first_fail, static_cast<uint64_t>(flat));
        } catch (...) {
#pragma omp critical
          if (!pending) pending = std::current_exception();
        }
      }
    }
    if (pending) std::rethrow_exception(pending);
  } else {
    DecodeScratch scratch;
    for (uint64_t flat = 0; flat < total; ++flat) {
      if (run_case(flat, scratch))
        ++correct;
      else if (first_fail == UINT64_MAX)
        first_fail = flat;
    }
  }

  SweepReport rep;
  rep.cases = total;
  rep.correct = correct;
  if (first_fail != UINT64_MAX) {
    uint64_t x_idx = first_fail / z_count;
    uint64_t z_idx = first_fail % z_count;
    Counterexample ce;
    ce.message.assign(omega, 0);
    for (int i = 0; i < omega; ++i) {
      ce.message[i] = static_cast<uint16_t>(x_idx % q);
      x_idx /= q;
    }
    int w = 0;
    while (z_idx >= block[w]) {
      z_idx -= block[w];
      ++w;
    }
    uint64_t pat_rank = z_idx / values_per_pattern[w];
    uint64_t val_rank = z_idx % values_per_pattern[w];
    std::vector<int> pattern;
    unrank_comb(pat_rank, n, w, pattern);
    ce.error.assign(n, 0);
    for (int j = 0; j < w; ++j) {
      ce.error[pattern[j]] = static_cast<uint16_t>(1 + val_rank % (q - 1));
      val_rank /= (q - 1);
    }
    rep.first_failure = std::move(ce);
  }
  return rep;
}

SweepReport Simulator::capability_sweep(const NodeCollection& T, int tau,
                                        uint64_t budget, bool parallel) const {
  return sweep_impl(T, tau, budget, parallel);
}

SweepReport Simulator::capability_sweep_serial(const NodeCollection& T, int tau,
                                               uint64_t budget) const {
  return sweep_impl(T, tau, budget, false);
}

}  // namespace lnec
