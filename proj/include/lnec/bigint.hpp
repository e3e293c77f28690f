#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnec {

// Minimal unsigned big integer: just enough for binomial sums whose values
// exceed 64 bits. Limbs are base 2^32, little-endian.
class BigUint {
 public:
  BigUint() = default;
  BigUint(uint64_t v) {  // NOLINT: implicit by design
    if (v) limbs_.push_back(static_cast<uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
  }

  bool is_zero() const { return limbs_.empty(); }

  BigUint& operator+=(const BigUint& o) {
    uint64_t carry = 0;
    size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    for (size_t i = 0; i < n; ++i) {
      uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = static_cast<uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
  }

  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }

  BigUint& mul_small(uint64_t m) {
    if (m == 0 || is_zero()) {
      limbs_.clear();
      return *this;
    }
    uint64_t lo = m & 0xffffffffu, hi = m >> 32;
    BigUint r;
    r.limbs_.assign(limbs_.size() + 2, 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      uint64_t cur = static_cast<uint64_t>(limbs_[i]) * lo;
      add_at(r.limbs_, i, cur);
      if (hi) add_at(r.limbs_, i + 1, static_cast<uint64_t>(limbs_[i]) * hi);
    }
    r.trim();
    *this = std::move(r);
    return *this;
  }

  // Exact division by a small divisor; throws if a remainder is left.
  BigUint& div_small_exact(uint64_t d) {
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    if (rem) throw std::logic_error("inexact big integer division");
    trim();
    return *this;
  }

  int compare(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (size_t i = limbs_.size(); i-- > 0;)
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    return 0;
  }
  bool operator<(const BigUint& o) const { return compare(o) < 0; }
  bool operator==(const BigUint& o) const { return compare(o) == 0; }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> tmp = limbs_;
    std::string s;
    while (!tmp.empty()) {
      uint64_t rem = 0;
      for (size_t i = tmp.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | tmp[i];
        tmp[i] = static_cast<uint32_t>(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      while (!tmp.empty() && tmp.back() == 0) tmp.pop_back();
      std::string chunk = std::to_string(rem);
      if (tmp.empty()) {
        s.insert(0, chunk);
      } else {
        s.insert(0, std::string(9 - chunk.size(), '0') + chunk);
      }
    }
    return s;
  }

 private:
  static void add_at(std::vector<uint32_t>& limbs, size_t pos, uint64_t v) {
    while (v) {
      uint64_t s = limbs[pos] + (v & 0xffffffffu);
      limbs[pos] = static_cast<uint32_t>(s);
      v = (v >> 32) + (s >> 32);
      ++pos;
      if (pos == limbs.size() && v) limbs.push_back(0);
    }
  }
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<uint32_t> limbs_;
};

// C(n, k) computed exactly; numerator factors applied one at a time so each
// intermediate division is exact.
inline BigUint binomial(uint64_t n, uint64_t k) {
  if (k > n) return BigUint(0);
  if (k > n - k) k = n - k;
  BigUint r(1);
  for (uint64_t i = 1; i <= k; ++i) {
    r.mul_small(n - k + i);
    r.div_small_exact(i);
  }
  return r;
}

}  // namespace lnec
