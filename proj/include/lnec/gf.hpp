#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lnec {

// Exact arithmetic in GF(p^m), p prime, p^m <= 2^16.
//
// Elements are canonical integers in [0, q): the base-p positional encoding
// of the polynomial coefficient vector (constant term = least significant
// digit). Extension fields use a deterministic modulus polynomial: among all
// monic irreducibles of degree m over GF(p), the one with the fewest nonzero
// coefficients, ties broken by smallest integer encoding. Equality of
// elements is equality of representations.
class Field {
 public:
  static constexpr uint32_t kMaxOrder = 1u << 16;

  // Throws std::invalid_argument on non-prime p, m < 1, or p^m > 2^16.
  static Field make(uint32_t p, uint32_t m);

  // Accepts "p^m" or, for prime fields, plain "p".
  static Field parse(std::string_view name);

  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return m_; }
  uint32_t order() const { return q_; }

  // Integer encoding of the modulus polynomial, leading term included
  // (e.g. x^2+x+1 over GF(2) -> 7). Zero for prime fields.
  uint32_t modulus() const { return mod_; }

  std::string name() const;            // "7" or "2^8"
  std::string modulus_string() const;  // "x^2+x+1", "-" for prime fields

  uint16_t add(uint16_t a, uint16_t b) const;
  uint16_t sub(uint16_t a, uint16_t b) const;
  uint16_t neg(uint16_t a) const;
  uint16_t mul(uint16_t a, uint16_t b) const;
  uint16_t inv(uint16_t a) const;  // throws std::domain_error on 0
  uint16_t div(uint16_t a, uint16_t b) const { return mul(a, inv(b)); }
  uint16_t pow(uint16_t a, uint64_t e) const;

  bool operator==(const Field& o) const {
    return p_ == o.p_ && m_ == o.m_ && mod_ == o.mod_;
  }
  bool operator!=(const Field& o) const { return !(*this == o); }

 private:
  Field() = default;

  struct Tables {
    std::vector<uint16_t> mul;                // q*q, only when q <= 256
    std::vector<uint16_t> inv;                // q, only when q <= 256
    std::vector<std::vector<uint16_t>> xred;  // x^(m+k) mod modulus, k = 0..m-2
  };

  uint16_t mul_slow(uint16_t a, uint16_t b) const;
  uint16_t inv_slow(uint16_t a) const;

  uint32_t p_ = 0, m_ = 0, q_ = 0, mod_ = 0;
  // Interned per (p, m) in a process-lifetime registry, so copying a Field
  // is trivial and arithmetic stays free of shared mutable state.
  const Tables* t_ = nullptr;
};

// Typed element carrying its field identity. Mixing elements of different
// fields in one operation throws std::invalid_argument.
class FieldElement {
 public:
  FieldElement(Field f, uint32_t value);

  uint16_t value() const { return v_; }
  const Field& field() const { return f_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;

  bool operator==(const FieldElement& o) const {
    return f_ == o.f_ && v_ == o.v_;
  }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  Field f_;
  uint16_t v_;
};

FieldElement inv(const FieldElement& a);

}  // namespace lnec
