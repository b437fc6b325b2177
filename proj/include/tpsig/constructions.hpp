#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpsig/error.hpp"
#include "tpsig/field.hpp"
#include "tpsig/format.hpp"
#include "tpsig/roots.hpp"
#include "tpsig/signal.hpp"

namespace tpsig {

namespace detail_cons {

inline FieldMeta meta_of(const Field& F) {
  return FieldMeta{F.p(), F.m(), F.modulus(), F.gamma()};
}

}  // namespace detail_cons

// Single-signal set over GF(q): phi(i) = (1/sqrt(n)) zeta_p^{T(gamma^i)} with
// n = q - 1. Its full correlation lambda equals sqrt(n+1)/n exactly; n = 2
// (q = 3) is admitted but flagged degenerate by the sweep layer.
inline SignalSet construct_gauss(const Field& F) {
  const std::uint32_t q = F.q();
  if (q < 3) throw Error("construction needs q = p^m >= 3 so that n >= 2");
  const std::uint32_t n = q - 1;
  const double scale = 1.0 / std::sqrt(double(n));
  Signal s(n);
  for (std::uint32_t i = 0; i < n; ++i)
    s[i] = scale * unit_root(F.trace_power(i), F.p());
  SignalSet set;
  set.n = n;
  set.signals.push_back(std::move(s));
  set.meta.construction = "gauss";
  set.meta.field = detail_cons::meta_of(F);
  return set;
}

inline SignalSet construct_gauss(std::uint32_t p, std::uint32_t m) {
  return construct_gauss(Field::make(p, m));
}

// e-signal set over GF(q) with q - 1 = e n: phi_i(l) = (1/sqrt(n))
// zeta_p^{T(gamma^{i + l e})} for i = 0..e-1, l = 0..n-1. Its lambda is
// bounded by sqrt(en+1)/n.
inline SignalSet construct_cyclotomic(const Field& F, std::uint32_t e) {
  const std::uint32_t q = F.q();
  if (e < 2) throw Error("e must be at least 2");
  if ((q - 1) % e != 0) throw BadDivisorError("e must divide q-1");
  const std::uint32_t n = (q - 1) / e;
  if (n < 2) throw Error("n = (q-1)/e must be at least 2");
  const double scale = 1.0 / std::sqrt(double(n));
  SignalSet set;
  set.n = n;
  for (std::uint32_t i = 0; i < e; ++i) {
    Signal s(n);
    for (std::uint32_t l = 0; l < n; ++l)
      s[l] = scale * unit_root(F.trace_power(i + std::uint64_t(l) * e), F.p());
    set.signals.push_back(std::move(s));
  }
  set.meta.construction = "cyclotomic";
  set.meta.field = detail_cons::meta_of(F);
  set.meta.e = e;
  return set;
}

inline SignalSet construct_cyclotomic(std::uint32_t p, std::uint32_t m,
                                      std::uint32_t e) {
  return construct_cyclotomic(Field::make(p, m), e);
}

// Per-class statistics for the three correlation magnitudes of a
// single-signal construction.
struct MagnitudeClassStat {
  double expected = 0.0;
  double max_abs_error = 0.0;
  std::uint64_t cells = 0;
};

struct ConstructionCheck {
  bool passed = false;
  double lambda_measured = 0.0;
  double lambda_reference = 0.0;
  bool reference_is_exact = false;  // equality (gauss) vs ceiling (cyclotomic)
  std::optional<MagnitudeClassStat> pure_modulation;  // w != 0, tau = 0
  std::optional<MagnitudeClassStat> pure_shift;       // w = 0, tau != 0
  std::optional<MagnitudeClassStat> mixed;            // both nonzero
  std::string note;
};

namespace detail_cons {

inline double corr_mag(const SignalSet& set, std::uint32_t j, std::uint32_t j2,
                       std::uint32_t w, std::uint32_t tau) {
  return std::abs(inner(set.signals[j], modulate(time_shift(set.signals[j2], tau), w)));
}

}  // namespace detail_cons

// Numerical confirmation that a constructed set has the correlation behavior
// it was built for. Gauss sets: lambda equals sqrt(n+1)/n within 1e-9 and
// every correlation magnitude falls in its (w, tau) class. Cyclotomic sets:
// lambda stays below sqrt(en+1)/n + 1e-9 and pure modulation of a single
// signal is exactly self-orthogonal. Throws VerificationFailedError with the
// offending (j, j2, w, tau) cell.
inline ConstructionCheck verify_construction(const SignalSet& set,
                                             unsigned threads = 0) {
  validate_shape(set);
  const std::uint32_t n = set.n;
  const double tol = 1e-9;
  ConstructionCheck check;
  const CorrelationProfile prof = profile(set, threads);
  check.lambda_measured = prof.lambda;

  if (set.meta.construction == "gauss") {
    if (set.M() != 1) throw Error("gauss construction carries exactly one signal");
    check.lambda_reference = std::sqrt(n + 1.0) / n;
    check.reference_is_exact = true;
    if (std::abs(prof.lambda - check.lambda_reference) > tol) {
      const WitnessFull& wit = prof.lambda_witness;
      throw VerificationFailedError(
          "lambda " + fmt17(prof.lambda) + " != " + fmt17(check.lambda_reference) +
          " at (j=" + std::to_string(wit.j) + ", j2=" + std::to_string(wit.j2) +
          ", w=" + std::to_string(wit.w) + ", tau=" + std::to_string(wit.tau) + ")");
    }
    MagnitudeClassStat mod{0.0, 0.0, 0}, shift{1.0 / n, 0.0, 0},
        both{std::sqrt(n + 1.0) / n, 0.0, 0};
    for (std::uint32_t w = 0; w < n; ++w)
      for (std::uint32_t tau = 0; tau < n; ++tau) {
        if (w == 0 && tau == 0) continue;
        const double mag = detail_cons::corr_mag(set, 0, 0, w, tau);
        MagnitudeClassStat& cls = (tau == 0) ? mod : (w == 0 ? shift : both);
        const double err = std::abs(mag - cls.expected);
        cls.max_abs_error = std::max(cls.max_abs_error, err);
        ++cls.cells;
        if (err > tol)
          throw VerificationFailedError(
              "correlation magnitude " + fmt17(mag) + " != expected " +
              fmt17(cls.expected) + " at (j=0, j2=0, w=" + std::to_string(w) +
              ", tau=" + std::to_string(tau) + ")");
      }
    check.pure_modulation = mod;
    check.pure_shift = shift;
    check.mixed = both;
    check.note =
        "magnitude classes confirmed: 0 under pure modulation, 1/n under pure "
        "shift, sqrt(n+1)/n when both act";
    check.passed = true;
    return check;
  }

  if (set.meta.construction == "cyclotomic") {
    if (!set.meta.e) throw Error("cyclotomic set is missing its e parameter");
    const std::uint32_t e = *set.meta.e;
    check.lambda_reference = std::sqrt(double(e) * n + 1.0) / n;
    check.reference_is_exact = false;
    if (prof.lambda > check.lambda_reference + tol) {
      const WitnessFull& wit = prof.lambda_witness;
      throw VerificationFailedError(
          "lambda " + fmt17(prof.lambda) + " exceeds ceiling " +
          fmt17(check.lambda_reference) + " at (j=" + std::to_string(wit.j) +
          ", j2=" + std::to_string(wit.j2) + ", w=" + std::to_string(wit.w) +
          ", tau=" + std::to_string(wit.tau) + ")");
    }
    for (std::uint32_t i = 0; i < set.M(); ++i)
      for (std::uint32_t w = 1; w < n; ++w) {
        const double mag = detail_cons::corr_mag(set, i, i, w, 0);
        if (mag > tol)
          throw VerificationFailedError(
              "pure modulation self-correlation " + fmt17(mag) +
              " != 0 at (j=" + std::to_string(i) + ", j2=" + std::to_string(i) +
              ", w=" + std::to_string(w) + ", tau=0)");
      }
    check.note =
        "lambda within the stated ceiling; single-signal pure-modulation "
        "correlations all vanish";
    check.passed = true;
    return check;
  }

  throw Error("unknown construction: " + set.meta.construction);
}

}  // namespace tpsig
