#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "tpsig/error.hpp"
#include "tpsig/field.hpp"
#include "tpsig/roots.hpp"

namespace tpsig {

// Additive character psi_b(x) = zeta_p^{T(b x)}; psi_0 is trivial.
class AdditiveCharacter {
 public:
  AdditiveCharacter(const Field& f, Elem b) : field_(&f), b_(std::move(b)) {}

  std::complex<double> operator()(const Elem& x) const {
    return unit_root(field_->trace(field_->mul(b_, x)), field_->p());
  }
  bool trivial() const { return field_->is_zero(b_); }
  const Elem& b() const { return b_; }
  const Field& field() const { return *field_; }

 private:
  const Field* field_;
  Elem b_;
};

// Multiplicative character omega^j with omega(gamma^i) = zeta_{q-1}^i, so
// omega^j(gamma^i) = zeta_{q-1}^{j i}; omega^0 is trivial. Undefined at zero.
class MultiplicativeCharacter {
 public:
  MultiplicativeCharacter(const Field& f, std::uint64_t index)
      : field_(&f), index_(f.q() > 2 ? index % (f.q() - 1) : 0) {}

  std::complex<double> operator()(const Elem& x) const {
    std::uint64_t i = field_->dlog(x);  // ZeroArgumentError at zero
    std::uint64_t order = field_->q() - 1;
    return unit_root(static_cast<std::int64_t>(index_ * i % order), order);
  }
  bool trivial() const { return index_ == 0; }
  std::uint64_t index() const { return index_; }
  const Field& field() const { return *field_; }

 private:
  const Field* field_;
  std::uint64_t index_;
};

// G(psi, chi) = sum over nonzero x of psi(x) chi(x). Degenerate values:
// q-1 when both characters are trivial, -1 for nontrivial psi with trivial
// chi, 0 for trivial psi with nontrivial chi; magnitude sqrt(q) otherwise.
inline std::complex<double> gauss_sum(const AdditiveCharacter& psi,
                                      const MultiplicativeCharacter& chi) {
  const Field& f = psi.field();
  std::uint64_t order = f.q() - 1;
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t i = 0; i < order; ++i) {
    Elem x = f.pow_gamma(i);
    std::complex<double> m =
        order > 1 ? unit_root(static_cast<std::int64_t>(chi.index() * i % order), order)
                  : std::complex<double>{1.0, 0.0};
    acc += psi(x) * m;
  }
  return acc;
}

struct GaussCheckReport {
  std::uint64_t pairs_checked = 0;
  double max_magnitude_error = 0.0;  // worst | |G| - sqrt(q) |
  double max_twist_error = 0.0;      // worst |G(psi_b, chi) - conj(chi(b)) G(psi_1, chi)|
};

// Exhaustively verifies, for every nontrivial pair (psi_b, chi), that
// |G(psi_b, chi)| = sqrt(q) and that G(psi_b, chi) = conj(chi(b)) G(psi_1, chi),
// both within tol * sqrt(q). Throws VerificationFailedError on the first
// breach; otherwise returns the worst observed errors.
inline GaussCheckReport check_gauss_magnitude(const Field& f, double tol = 1e-9) {
  const std::uint64_t q = f.q();
  const std::uint64_t order = q - 1;
  GaussCheckReport report;
  if (order < 2) return report;  // no nontrivial multiplicative character

  std::vector<std::uint32_t> trace_pow(order);
  for (std::uint64_t i = 0; i < order; ++i)
    trace_pow[i] = f.trace_power(i);
  auto zp = root_table(f.p());
  auto zq = root_table(static_cast<std::uint32_t>(order));

  const double root_q = std::sqrt(static_cast<double>(q));
  const double allowed = tol * root_q;

  // G(psi_1, chi_j) for every nontrivial j.
  std::vector<std::complex<double>> base(order);
  for (std::uint64_t j = 1; j < order; ++j) {
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t i = 0; i < order; ++i)
      acc += zp[trace_pow[i]] * zq[j * i % order];
    base[j] = acc;
  }

  for (std::uint64_t b = 0; b < order; ++b) {
    for (std::uint64_t j = 1; j < order; ++j) {
      std::complex<double> acc{0.0, 0.0};
      for (std::uint64_t i = 0; i < order; ++i)
        acc += zp[trace_pow[(b + i) % order]] * zq[j * i % order];
      double mag_err = std::abs(std::abs(acc) - root_q);
      std::complex<double> expected = std::conj(zq[j * b % order]) * base[j];
      double twist_err = std::abs(acc - expected);
      report.pairs_checked++;
      if (mag_err > report.max_magnitude_error) report.max_magnitude_error = mag_err;
      if (twist_err > report.max_twist_error) report.max_twist_error = twist_err;
      if (mag_err > allowed)
        throw VerificationFailedError(
            "gauss sum magnitude off by " + std::to_string(mag_err) +
            " at (b=gamma^" + std::to_string(b) + ", chi^" + std::to_string(j) +
            "), q=" + std::to_string(q));
      if (twist_err > allowed)
        throw VerificationFailedError(
            "gauss sum twist identity off by " + std::to_string(twist_err) +
            " at (b=gamma^" + std::to_string(b) + ", chi^" + std::to_string(j) +
            "), q=" + std::to_string(q));
    }
  }
  return report;
}

}  // namespace tpsig
