#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpsig/error.hpp"

namespace tpsig {

// Elements of GF(p^m) are coefficient vectors of length m over GF(p),
// constant term first.
using Elem = std::vector<std::uint32_t>;

namespace detail {

inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t e, std::uint64_t mod) {
  std::uint64_t r = 1 % mod;
  base %= mod;
  while (e) {
    if (e & 1) r = r * base % mod;
    base = base * base % mod;
    e >>= 1;
  }
  return r;
}

// Smallest generator of (Z/p)^*; returns 1 for p = 2.
inline std::uint32_t smallest_primitive_root(std::uint32_t p) {
  if (p == 2) return 1;
  auto fs = prime_factors(p - 1);
  for (std::uint32_t g = 2;; ++g) {
    bool ok = true;
    for (auto f : fs) {
      if (mod_pow(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

// --- dense polynomials over GF(p), coefficient vectors, constant first ---

using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a * b reduced by the monic modulus f (degree m = f.size()-1); result has
// exactly m coefficients.
inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  std::size_t m = f.size() - 1;
  std::vector<std::uint64_t> acc(2 * m, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    std::uint64_t ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j)
      acc[i + j] = (acc[i + j] + ai * b[j]) % p;
  }
  for (std::size_t d = 2 * m; d-- > m;) {
    std::uint64_t c = acc[d];
    if (!c) continue;
    acc[d] = 0;
    for (std::size_t j = 0; j < m; ++j)
      acc[d - m + j] = (acc[d - m + j] + c * (p - f[j])) % p;
  }
  Poly r(m);
  for (std::size_t j = 0; j < m; ++j) r[j] = static_cast<std::uint32_t>(acc[j]);
  return r;
}

// x^e mod f, f monic.
inline Poly poly_powmod_x(std::uint64_t e, const Poly& f, std::uint64_t p) {
  std::size_t m = f.size() - 1;
  Poly result(m, 0), base(m, 0);
  result[0] = 1;
  if (m == 1)
    base[0] = static_cast<std::uint32_t>((p - f[0]) % p);
  else
    base[1] = 1;
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    e >>= 1;
    if (e) base = poly_mulmod(base, base, f, p);
  }
  return result;
}

// a mod b; b nonempty with nonzero leading coefficient.
inline Poly poly_mod(Poly a, const Poly& b, std::uint64_t p) {
  poly_trim(a);
  std::uint64_t lead_inv = mod_pow(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    std::uint64_t c = a.back() * lead_inv % p;
    if (c) {
      std::size_t off = a.size() - b.size();
      for (std::size_t j = 0; j < b.size(); ++j)
        a[off + j] = static_cast<std::uint32_t>((a[off + j] + c * (p - b[j])) % p);
    }
    a.pop_back();
    poly_trim(a);
  }
  return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Derivative-free irreducibility test for a monic degree-m polynomial:
// x^{p^m} == x (mod f), and gcd(x^{p^{m/r}} - x, f) is constant for every
// prime divisor r of m.
inline bool is_irreducible(const Poly& f, std::uint32_t p, std::uint32_t m) {
  if (m == 1) return true;
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) q *= p;
  Poly x(m, 0);
  x[1] = 1;
  if (poly_powmod_x(q, f, p) != x) return false;
  for (auto r : prime_factors(m)) {
    std::uint64_t sub = 1;
    for (std::uint32_t i = 0; i < m / r; ++i) sub *= p;
    Poly h = poly_powmod_x(sub, f, p);
    h[1] = static_cast<std::uint32_t>((h[1] + p - 1) % p);  // subtract x
    Poly g = poly_gcd(h, f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

// Is x a generator of the multiplicative group of GF(p)[x]/f? f must be
// irreducible of degree m with p^m = q.
inline bool x_is_primitive(const Poly& f, std::uint32_t p, std::uint64_t q,
                           const std::vector<std::uint64_t>& qm1_factors) {
  std::size_t m = f.size() - 1;
  Poly one(m, 0);
  one[0] = 1;
  if (poly_powmod_x(q - 1, f, p) != one) return false;
  for (auto r : qm1_factors)
    if (poly_powmod_x((q - 1) / r, f, p) == one) return false;
  return true;
}

}  // namespace detail

// GF(p^m) with a fixed modulus and a fixed generator gamma of the
// multiplicative group. Power and discrete-log tables are built once at
// construction; character and construction code evaluates against them.
//
// Canonical form (make): for m = 1 the modulus is x - g with g the smallest
// primitive root mod p and gamma = g; for m >= 2 the modulus is the
// lexicographically smallest monic irreducible of degree m whose residue x
// generates the multiplicative group (coefficient tuples compared constant
// term first), and gamma = x.
class Field {
 public:
  static Field make(std::uint32_t p, std::uint32_t m) {
    validate_pm(p, m);
    std::uint64_t q = checked_q(p, m);
    Field f;
    f.p_ = p;
    f.m_ = m;
    f.q_ = q;
    f.qm1_factors_ = q >= 3 ? detail::prime_factors(q - 1)
                            : std::vector<std::uint64_t>{};
    if (m == 1) {
      std::uint32_t g = detail::smallest_primitive_root(p);
      f.modulus_ = {(p - g) % p, 1};
      f.gamma_ = {g};
    } else {
      bool found = false;
      for (std::uint64_t code = 0; code < q && !found; ++code) {
        std::vector<std::uint32_t> mod(m + 1, 0);
        mod[m] = 1;
        // decode `code` with the constant coefficient as the most significant digit
        for (std::uint32_t j = 0; j < m; ++j) {
          std::uint64_t place = 1;
          for (std::uint32_t i = 0; i < m - 1 - j; ++i) place *= p;
          mod[j] = static_cast<std::uint32_t>((code / place) % p);
        }
        if (!detail::is_irreducible(mod, p, m)) continue;
        if (!detail::x_is_primitive(mod, p, q, f.qm1_factors_)) continue;
        f.modulus_ = std::move(mod);
        found = true;
      }
      if (!found)
        throw BadModulusError("no primitive modulus found");  // unreachable: primitive polynomials exist for every p, m
      f.gamma_ = Elem(m, 0);
      f.gamma_[1] = 1;
    }
    f.build_tables();
    return f;
  }

  // Builds the field from a caller-supplied modulus (and optionally a
  // generator). The modulus must be monic of degree m with coefficients in
  // [0, p); gamma, when given, must generate the multiplicative group. When
  // gamma is absent it defaults to the residue of x if that is primitive,
  // otherwise to the lexicographically smallest primitive element (constant
  // term most significant, matching the modulus ordering).
  static Field from_parts(std::uint32_t p, std::uint32_t m,
                          std::vector<std::uint32_t> modulus,
                          std::optional<Elem> gamma = std::nullopt) {
    validate_pm(p, m);
    std::uint64_t q = checked_q(p, m);
    if (modulus.size() != static_cast<std::size_t>(m) + 1)
      throw BadModulusError("modulus must have m+1 coefficients");
    for (auto c : modulus)
      if (c >= p) throw BadModulusError("modulus coefficient out of range");
    if (modulus.back() != 1) throw BadModulusError("modulus must be monic");
    if (!detail::is_irreducible(modulus, p, m))
      throw BadModulusError("modulus is reducible");
    Field f;
    f.p_ = p;
    f.m_ = m;
    f.q_ = q;
    f.qm1_factors_ = q >= 3 ? detail::prime_factors(q - 1)
                            : std::vector<std::uint64_t>{};
    f.modulus_ = std::move(modulus);
    if (gamma) {
      if (gamma->size() != m)
        throw BadModulusError("gamma must have m coefficients");
      for (auto c : *gamma)
        if (c >= p) throw BadModulusError("gamma coefficient out of range");
      f.gamma_ = std::move(*gamma);
      if (f.is_zero(f.gamma_) || f.order_of(f.gamma_) != q - 1)
        throw BadModulusError("gamma does not generate the multiplicative group");
    } else {
      Elem x(m, 0);
      if (m == 1)
        x[0] = (p - f.modulus_[0]) % p;
      else
        x[1] = 1;
      if (!f.is_zero(x) && f.order_of(x) == q - 1) {
        f.gamma_ = std::move(x);
      } else {
        bool found = false;
        for (std::uint64_t code = 1; code < q && !found; ++code) {
          Elem cand(m, 0);
          for (std::uint32_t j = 0; j < m; ++j) {
            std::uint64_t place = 1;
            for (std::uint32_t i = 0; i < m - 1 - j; ++i) place *= p;
            cand[j] = static_cast<std::uint32_t>((code / place) % p);
          }
          if (f.is_zero(cand)) continue;
          if (f.order_of(cand) == q - 1) {
            f.gamma_ = std::move(cand);
            found = true;
          }
        }
        if (!found)
          throw BadModulusError("no primitive element found");  // unreachable for a true field
      }
    }
    f.build_tables();
    return f;
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t m() const { return m_; }
  std::uint64_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  const Elem& gamma() const { return gamma_; }

  Elem zero() const { return Elem(m_, 0); }
  Elem one() const {
    Elem e(m_, 0);
    e[0] = 1;
    return e;
  }
  bool is_zero(const Elem& a) const {
    for (auto c : a)
      if (c) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (std::uint32_t i = 0; i < m_; ++i) r[i] = (a[i] + b[i]) % p_;
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(m_);
    for (std::uint32_t i = 0; i < m_; ++i) r[i] = (p_ - a[i]) % p_;
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (std::uint32_t i = 0; i < m_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    return detail::poly_mulmod(a, b, modulus_, p_);
  }
  Elem pow(Elem base, std::uint64_t e) const {
    Elem r = one();
    while (e) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return r;
  }

  // Index of an element in the tables: sum_i c_i p^i.
  std::uint64_t rank(const Elem& a) const {
    std::uint64_t r = 0, place = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
      r += a[i] * place;
      place *= p_;
    }
    return r;
  }
  Elem unrank(std::uint64_t r) const {
    Elem a(m_);
    for (std::uint32_t i = 0; i < m_; ++i) {
      a[i] = static_cast<std::uint32_t>(r % p_);
      r /= p_;
    }
    return a;
  }

  // gamma^(i mod (q-1)) from the power table.
  Elem pow_gamma(std::uint64_t i) const {
    i %= q_ - 1;
    Elem a(m_);
    const std::uint32_t* row = pow_flat_.data() + i * m_;
    for (std::uint32_t j = 0; j < m_; ++j) a[j] = row[j];
    return a;
  }

  // Discrete log base gamma; zero has none.
  std::uint64_t dlog(const Elem& a) const {
    if (is_zero(a)) throw ZeroArgumentError("discrete log of zero");
    return dlog_[rank(a)];
  }

  // Absolute trace into GF(p), computed by linearity from the basis traces.
  std::uint32_t trace(const Elem& a) const {
    std::uint64_t t = 0;
    for (std::uint32_t j = 0; j < m_; ++j) t += static_cast<std::uint64_t>(a[j]) * basis_trace_[j];
    return static_cast<std::uint32_t>(t % p_);
  }
  std::uint32_t trace_power(std::uint64_t i) const { return trace(pow_gamma(i)); }

  std::uint64_t element_order(const Elem& a) const {
    if (is_zero(a)) throw ZeroArgumentError("order of zero");
    return order_of(a);
  }

 private:
  Field() = default;

  static void validate_pm(std::uint32_t p, std::uint32_t m) {
    if (!detail::is_prime(p)) throw NonPrimeError("p = " + std::to_string(p) + " is not prime");
    if (m < 1) throw Error("field degree m must be at least 1");
  }

  static std::uint64_t checked_q(std::uint32_t p, std::uint32_t m) {
    std::uint64_t q = 1;
    const std::uint64_t limit = std::uint64_t(1) << 31;
    for (std::uint32_t i = 0; i < m; ++i) {
      q *= p;
      if (q > limit)
        throw FieldTooLargeError("p^m exceeds 2^31");
    }
    return q;
  }

  std::uint64_t order_of(const Elem& a) const {
    std::uint64_t ord = q_ - 1;
    if (ord == 0) return 1;
    for (auto r : qm1_factors_) {
      while (ord % r == 0 && pow(a, ord / r) == one()) ord /= r;
    }
    return ord;
  }

  void build_tables() {
    std::uint64_t order = q_ - 1;
    pow_flat_.assign(order * m_, 0);
    dlog_.assign(q_, kNoLog);
    Elem cur = one();
    for (std::uint64_t i = 0; i < order; ++i) {
      std::copy(cur.begin(), cur.end(), pow_flat_.begin() + i * m_);
      std::uint64_t r = rank(cur);
      if (dlog_[r] != kNoLog)
        throw BadModulusError("gamma does not generate the multiplicative group");
      dlog_[r] = static_cast<std::uint32_t>(i);
      cur = mul(cur, gamma_);
    }
    if (cur != one())
      throw BadModulusError("generator order does not divide q-1");
    basis_trace_.assign(m_, 0);
    for (std::uint32_t j = 0; j < m_; ++j) {
      Elem b(m_, 0);
      b[j] = 1;
      Elem acc = zero();
      Elem frob = b;
      for (std::uint32_t i = 0; i < m_; ++i) {
        acc = add(acc, frob);
        frob = pow(frob, p_);
      }
      for (std::uint32_t i = 1; i < m_; ++i) {
        if (acc[i] != 0)
          throw VerificationFailedError("trace of basis element left the prime subfield");
      }
      basis_trace_[j] = acc[0];
    }
  }

  static constexpr std::uint32_t kNoLog = 0xFFFFFFFFu;

  std::uint32_t p_ = 0, m_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  Elem gamma_;
  std::vector<std::uint64_t> qm1_factors_;
  std::vector<std::uint32_t> pow_flat_;
  std::vector<std::uint32_t> dlog_;
  std::vector<std::uint32_t> basis_trace_;
};

}  // namespace tpsig
