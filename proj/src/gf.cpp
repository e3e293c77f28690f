#include "lnec/gf.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace lnec {

namespace {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Little-endian base-p digits of n, padded/trimmed to no fixed length.
std::vector<uint16_t> digits(uint32_t n, uint32_t p) {
  std::vector<uint16_t> d;
  while (n) {
    d.push_back(static_cast<uint16_t>(n % p));
    n /= p;
  }
  return d;
}

int degree_of(const std::vector<uint16_t>& a) {
  for (size_t i = a.size(); i-- > 0;)
    if (a[i]) return static_cast<int>(i);
  return -1;
}

// Remainder of a mod b over GF(p), b monic-ish (leading coefficient
// inverted explicitly). Coefficients little-endian.
std::vector<uint16_t> poly_mod(std::vector<uint16_t> a,
                               const std::vector<uint16_t>& b, uint32_t p) {
  int db = degree_of(b);
  // inverse of leading coefficient of b (integers mod p)
  uint32_t lead = b[db];
  uint32_t lead_inv = 1;
  for (uint32_t x = 1; x < p; ++x)
    if (lead * x % p == 1) {
      lead_inv = x;
      break;
    }
  for (int da = degree_of(a); da >= db; da = degree_of(a)) {
    uint32_t c = a[da] * lead_inv % p;
    for (int i = 0; i <= db; ++i) {
      uint32_t sub = c * b[i] % p;
      a[da - db + i] = static_cast<uint16_t>((a[da - db + i] + p - sub) % p);
    }
  }
  return a;
}

bool poly_is_zero(const std::vector<uint16_t>& a) { return degree_of(a) < 0; }

// Trial division by every monic polynomial of degree 1..m/2.
bool is_irreducible(uint32_t enc, uint32_t p, uint32_t m) {
  std::vector<uint16_t> f = digits(enc, p);
  f.resize(m + 1, 0);
  if (f[0] == 0) return false;  // divisible by x
  uint64_t pd = p;
  for (uint32_t d = 1; 2 * d <= m; ++d, pd *= p) {
    for (uint64_t r = 0; r < pd; ++r) {
      uint32_t div_enc = static_cast<uint32_t>(pd + r);
      std::vector<uint16_t> g = digits(div_enc, p);
      if (poly_is_zero(poly_mod(f, g, p))) return false;
    }
  }
  return true;
}

int weight_of(uint32_t enc, uint32_t p) {
  int w = 0;
  while (enc) {
    if (enc % p) ++w;
    enc /= p;
  }
  return w;
}

}  // namespace

Field Field::make(uint32_t p, uint32_t m) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (m < 1) throw std::invalid_argument("field extension degree must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxOrder) throw std::invalid_argument("field size cap exceeded (p^m > 2^16)");
  }

  struct Interned {
    uint32_t mod;
    std::unique_ptr<Tables> tables;
  };
  static std::mutex registry_mutex;
  static std::map<std::pair<uint32_t, uint32_t>, Interned> registry;

  std::lock_guard<std::mutex> lock(registry_mutex);
  auto it = registry.find({p, m});
  if (it == registry.end()) {
    Interned entry{0, std::make_unique<Tables>()};
    if (m > 1) {
      // Monic degree-m candidates are the encodings [p^m, 2*p^m); pick the
      // irreducible one minimizing (weight, encoding).
      uint32_t base = static_cast<uint32_t>(q);
      std::vector<std::pair<int, uint32_t>> cand;
      cand.reserve(base);
      for (uint32_t r = 0; r < base; ++r)
        cand.emplace_back(weight_of(base + r, p), base + r);
      std::sort(cand.begin(), cand.end());
      for (auto& [w, enc] : cand) {
        if (is_irreducible(enc, p, m)) {
          entry.mod = enc;
          break;
        }
      }
      if (!entry.mod)
        throw std::runtime_error("internal error: no irreducible modulus found");

      // x^(m+k) mod modulus for k = 0..m-2, used for product reduction.
      std::vector<uint16_t> mod_poly = digits(entry.mod, p);
      mod_poly.resize(m + 1, 0);
      entry.tables->xred.resize(m - 1);
      for (uint32_t k = 0; k + 1 < m; ++k) {
        std::vector<uint16_t> xk(m + k + 1, 0);
        xk[m + k] = 1;
        auto r = poly_mod(xk, mod_poly, p);
        r.resize(m, 0);
        entry.tables->xred[k] = std::move(r);
      }
    }
    if (q <= 256) {
      Field tmp;
      tmp.p_ = p;
      tmp.m_ = m;
      tmp.q_ = static_cast<uint32_t>(q);
      tmp.mod_ = entry.mod;
      tmp.t_ = entry.tables.get();
      entry.tables->mul.assign(q * q, 0);
      entry.tables->inv.assign(q, 0);
      for (uint32_t a = 0; a < q; ++a)
        for (uint32_t b = 0; b < q; ++b) {
          uint16_t prod =
              tmp.mul_slow(static_cast<uint16_t>(a), static_cast<uint16_t>(b));
          entry.tables->mul[a * q + b] = prod;
          if (prod == 1) entry.tables->inv[a] = static_cast<uint16_t>(b);
        }
    }
    it = registry.emplace(std::pair{p, m}, std::move(entry)).first;
  }

  Field f;
  f.p_ = p;
  f.m_ = m;
  f.q_ = static_cast<uint32_t>(q);
  f.mod_ = it->second.mod;
  f.t_ = it->second.tables.get();
  return f;
}

Field Field::parse(std::string_view name) {
  size_t caret = name.find('^');
  auto to_u32 = [](std::string_view s) -> uint32_t {
    if (s.empty()) throw std::invalid_argument("bad field string");
    uint64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad field string");
      v = v * 10 + static_cast<uint64_t>(c - '0');
      if (v > kMaxOrder) throw std::invalid_argument("field size cap exceeded (p^m > 2^16)");
    }
    return static_cast<uint32_t>(v);
  };
  if (caret == std::string_view::npos) return make(to_u32(name), 1);
  return make(to_u32(name.substr(0, caret)), to_u32(name.substr(caret + 1)));
}

std::string Field::name() const {
  if (m_ == 1) return std::to_string(p_);
  return std::to_string(p_) + "^" + std::to_string(m_);
}

std::string Field::modulus_string() const {
  if (m_ == 1) return "-";
  std::string s;
  auto d = digits(mod_, p_);
  for (size_t i = d.size(); i-- > 0;) {
    if (!d[i]) continue;
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += std::to_string(d[i]);
    } else {
      if (d[i] != 1) s += std::to_string(d[i]) + "*";
      s += "x";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

uint16_t Field::add(uint16_t a, uint16_t b) const {
  if (m_ == 1) return static_cast<uint16_t>((static_cast<uint32_t>(a) + b) % p_);
  if (p_ == 2) return a ^ b;
  uint32_t res = 0, mult = 1;
  uint32_t x = a, y = b;
  for (uint32_t i = 0; i < m_; ++i) {
    res += (x % p_ + y % p_) % p_ * mult;
    x /= p_;
    y /= p_;
    mult *= p_;
  }
  return static_cast<uint16_t>(res);
}

uint16_t Field::sub(uint16_t a, uint16_t b) const { return add(a, neg(b)); }

uint16_t Field::neg(uint16_t a) const {
  if (m_ == 1) return a ? static_cast<uint16_t>(p_ - a) : 0;
  if (p_ == 2) return a;
  uint32_t res = 0, mult = 1;
  uint32_t x = a;
  for (uint32_t i = 0; i < m_; ++i) {
    uint32_t d = x % p_;
    res += (d ? p_ - d : 0) * mult;
    x /= p_;
    mult *= p_;
  }
  return static_cast<uint16_t>(res);
}

uint16_t Field::mul(uint16_t a, uint16_t b) const {
  if (!t_->mul.empty()) return t_->mul[static_cast<size_t>(a) * q_ + b];
  return mul_slow(a, b);
}

uint16_t Field::mul_slow(uint16_t a, uint16_t b) const {
  if (m_ == 1) return static_cast<uint16_t>(static_cast<uint64_t>(a) * b % p_);
  // coefficient convolution, then fold degrees >= m via xred
  std::vector<uint32_t> conv(2 * m_ - 1, 0);
  uint32_t x = a;
  for (uint32_t i = 0; i < m_; ++i, x /= p_) {
    uint32_t ai = x % p_;
    if (!ai) continue;
    uint32_t y = b;
    for (uint32_t j = 0; j < m_; ++j, y /= p_) {
      uint32_t bj = y % p_;
      if (bj) conv[i + j] = (conv[i + j] + ai * bj) % p_;
    }
  }
  std::vector<uint32_t> res(conv.begin(), conv.begin() + m_);
  for (uint32_t k = 0; k + 1 < m_; ++k) {
    uint32_t c = conv[m_ + k];
    if (!c) continue;
    const auto& red = t_->xred[k];
    for (uint32_t i = 0; i < m_; ++i)
      res[i] = (res[i] + c * red[i]) % p_;
  }
  uint32_t enc = 0, mult = 1;
  for (uint32_t i = 0; i < m_; ++i) {
    enc += res[i] * mult;
    mult *= p_;
  }
  return static_cast<uint16_t>(enc);
}

uint16_t Field::inv(uint16_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (!t_->inv.empty()) return t_->inv[a];
  return inv_slow(a);
}

uint16_t Field::inv_slow(uint16_t a) const {
  if (m_ == 1) {
    // extended Euclid over the integers
    int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      int64_t qq = r / new_r;
      std::swap(t -= qq * new_t, new_t);
      std::swap(r -= qq * new_r, new_r);
    }
    if (t < 0) t += p_;
    return static_cast<uint16_t>(t);
  }
  return pow(a, q_ - 2);
}

uint16_t Field::pow(uint16_t a, uint64_t e) const {
  uint16_t result = 1, base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FieldElement::FieldElement(Field f, uint32_t value) : f_(std::move(f)), v_(0) {
  if (value >= f_.order()) throw std::invalid_argument("element value out of range");
  v_ = static_cast<uint16_t>(value);
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
  if (a.field() != b.field())
    throw std::invalid_argument("elements from different fields");
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return {a.field(), a.field().add(a.value(), b.value())};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return {a.field(), a.field().sub(a.value(), b.value())};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return {a.field(), a.field().mul(a.value(), b.value())};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return {a.field(), a.field().div(a.value(), b.value())};
}

FieldElement FieldElement::operator-() const { return {f_, f_.neg(v_)}; }

FieldElement inv(const FieldElement& a) {
  return {a.field(), a.field().inv(a.value())};
}

}  // namespace lnec
