#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tpsig/error.hpp"
#include "tpsig/parallel.hpp"
#include "tpsig/roots.hpp"

namespace tpsig {

using Cplx = std::complex<double>;
using Signal = std::vector<Cplx>;

// Provenance of the field a set was built over, stored as plain data so sets
// can round-trip through JSON without rebuilding the field.
struct FieldMeta {
  std::uint32_t p = 0, m = 0;
  std::vector<std::uint32_t> modulus;
  std::vector<std::uint32_t> gamma;
};

struct SetMeta {
  std::string construction = "external";
  std::optional<FieldMeta> field;
  std::optional<std::uint32_t> e;
};

// M unit signals of period n on Z_n. Pairwise distinctness is intentionally
// not enforced: degenerate sets (lambda = 1) are representable, and the
// bridge precondition rejects them where it matters.
struct SignalSet {
  std::uint32_t n = 0;
  std::vector<Signal> signals;
  SetMeta meta;
  std::uint32_t M() const { return static_cast<std::uint32_t>(signals.size()); }
};

inline void validate_shape(const SignalSet& s) {
  if (s.n < 2) throw PeriodMismatchError("period n must be at least 2");
  if (s.signals.empty())
    throw PeriodMismatchError("set must contain at least one signal");
  for (std::size_t j = 0; j < s.signals.size(); ++j)
    if (s.signals[j].size() != s.n)
      throw PeriodMismatchError("signal " + std::to_string(j) + " has length " +
                                std::to_string(s.signals[j].size()) +
                                ", expected " + std::to_string(s.n));
}

struct UnitNormViolation {
  std::uint32_t index;
  double norm;
};

inline std::optional<UnitNormViolation> check_unit_norms(const SignalSet& s,
                                                         double tol = 1e-9) {
  for (std::uint32_t j = 0; j < s.M(); ++j) {
    double norm2 = 0;
    for (const Cplx& v : s.signals[j]) norm2 += std::norm(v);
    double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > tol) return UnitNormViolation{j, norm};
  }
  return std::nullopt;
}

inline void require_unit_norms(const SignalSet& s, double tol = 1e-9) {
  if (auto v = check_unit_norms(s, tol))
    throw UnitNormError(v->index, v->norm,
                        "signal " + std::to_string(v->index) + " has norm " +
                            std::to_string(v->norm) + ", expected 1");
}

inline Cplx inner(const Signal& a, const Signal& b) {
  if (a.size() != b.size())
    throw PeriodMismatchError("inner product of signals with different periods");
  Cplx acc{0.0, 0.0};
  for (std::size_t t = 0; t < a.size(); ++t) acc += a[t] * std::conj(b[t]);
  return acc;
}

// (L_tau phi)(t) = phi(t + tau), indices mod n.
inline Signal time_shift(const Signal& s, std::int64_t tau) {
  std::int64_t n = static_cast<std::int64_t>(s.size());
  std::int64_t r = tau % n;
  if (r < 0) r += n;
  Signal out(s.size());
  for (std::int64_t t = 0; t < n; ++t) out[t] = s[(t + r) % n];
  return out;
}

// (M_w phi)(t) = e^{2 pi i w t / n} phi(t).
inline Signal modulate(const Signal& s, std::int64_t w) {
  std::uint32_t n = static_cast<std::uint32_t>(s.size());
  Signal out(n);
  for (std::uint32_t t = 0; t < n; ++t)
    out[t] = unit_root(w * static_cast<std::int64_t>(t), n) * s[t];
  return out;
}

// Peak coordinate modulus; for unit signals this is the peak-to-average
// measure, minimized at 1/sqrt(n) by flat signals.
inline double papr(const Signal& s) {
  double peak2 = 0;
  for (const Cplx& v : s) peak2 = std::max(peak2, std::norm(v));
  return std::sqrt(peak2);
}

struct WitnessPair {
  std::uint32_t j = 0, j2 = 0;
};
struct WitnessShift {
  std::uint32_t j = 0, j2 = 0, tau = 0;
};
struct WitnessFull {
  std::uint32_t j = 0, j2 = 0, w = 0, tau = 0;
};

// Correlation parameters of a set, with argmax witnesses. nu ranges over
// distinct pairs at (w, tau) = (0, 0); theta over all (j, j2, tau) except
// same-signal tau = 0; lambda over all (j, j2, w, tau) except the identity
// cell. The three are computed from one candidate sweep, so nu <= theta <=
// lambda holds exactly. Witnesses are the lexicographically smallest tuple
// among candidates attaining the maximal squared magnitude (ties compared on
// the exact floating-point value).
struct CorrelationProfile {
  double nu = 0.0, theta = 0.0, lambda = 0.0;
  double papr_max = 0.0;
  std::optional<WitnessPair> nu_witness;  // absent when M == 1
  WitnessShift theta_witness{};
  WitnessFull lambda_witness{};
};

namespace detail_sig {

struct Flat {
  std::uint32_t n = 0, M = 0;
  std::vector<double> re, im;  // index j * n + t

  static Flat of(const SignalSet& s) {
    Flat f;
    f.n = s.n;
    f.M = s.M();
    f.re.resize(static_cast<std::size_t>(f.n) * f.M);
    f.im.resize(static_cast<std::size_t>(f.n) * f.M);
    for (std::uint32_t j = 0; j < f.M; ++j)
      for (std::uint32_t t = 0; t < f.n; ++t) {
        f.re[static_cast<std::size_t>(j) * f.n + t] = s.signals[j][t].real();
        f.im[static_cast<std::size_t>(j) * f.n + t] = s.signals[j][t].imag();
      }
    return f;
  }
};

// Maximum tracker over candidates (squared magnitude, index tuple); ties on
// the exact value resolve to the lexicographically smaller tuple, so the
// result is independent of enumeration order.
template <std::size_t K>
struct Best {
  double mag2 = -1.0;
  std::array<std::uint32_t, K> tup{};

  void offer(double v, const std::array<std::uint32_t, K>& t) {
    if (v > mag2 || (v == mag2 && t < tup)) {
      mag2 = v;
      tup = t;
    }
  }
  void merge(const Best& o) {
    if (o.mag2 < 0) return;
    offer(o.mag2, o.tup);
  }
};

}  // namespace detail_sig

// Exhaustive correlation profile. The (j, j2) scan is restricted to j <= j2:
// swapping the pair mirrors (w, tau) to (-w, -tau) with equal magnitude, and
// the lexicographically smallest witness always lives in the j <= j2 half.
inline CorrelationProfile profile(const SignalSet& set, unsigned threads = 0) {
  validate_shape(set);
  const std::uint32_t n = set.n, M = set.M();
  const auto flat = detail_sig::Flat::of(set);
  const auto R = conj_root_table(n);

  struct JRes {
    detail_sig::Best<2> nu;
    detail_sig::Best<3> th;
    detail_sig::Best<4> la;
  };
  std::vector<JRes> res(M);

  parallel_for(0, M, thread_budget(threads), [&](std::uint64_t j64) {
    const std::uint32_t j = static_cast<std::uint32_t>(j64);
    JRes& r = res[j];
    std::vector<double> gre(n), gim(n);
    const double* ar = flat.re.data() + static_cast<std::size_t>(j) * n;
    const double* ai = flat.im.data() + static_cast<std::size_t>(j) * n;
    for (std::uint32_t j2 = j; j2 < M; ++j2) {
      const double* br = flat.re.data() + static_cast<std::size_t>(j2) * n;
      const double* bi = flat.im.data() + static_cast<std::size_t>(j2) * n;
      const bool self = (j == j2);
      for (std::uint32_t tau = 0; tau < n; ++tau) {
        for (std::uint32_t t = 0, u = tau; t < n; ++t, ++u) {
          if (u == n) u = 0;
          const double x = ar[t], y = ai[t], pr = br[u], pi = bi[u];
          gre[t] = x * pr + y * pi;  // a[t] * conj(b[t+tau])
          gim[t] = y * pr - x * pi;
        }
        double sr = 0, si = 0;
        for (std::uint32_t t = 0; t < n; ++t) {
          sr += gre[t];
          si += gim[t];
        }
        const double v0 = sr * sr + si * si;
        if (!self && tau == 0) r.nu.offer(v0, {j, j2});
        if (!(self && tau == 0)) {
          r.th.offer(v0, {j, j2, tau});
          r.la.offer(v0, {j, j2, 0, tau});
        }
        for (std::uint32_t w = 1; w < n; ++w) {
          double wr = 0, wi = 0;
          std::uint32_t idx = 0;
          for (std::uint32_t t = 0; t < n; ++t) {
            const double rr = R[idx].real(), ri = R[idx].imag();
            wr += gre[t] * rr - gim[t] * ri;
            wi += gre[t] * ri + gim[t] * rr;
            idx += w;
            if (idx >= n) idx -= n;
          }
          r.la.offer(wr * wr + wi * wi, {j, j2, w, tau});
        }
      }
    }
  });

  detail_sig::Best<2> nu;
  detail_sig::Best<3> th;
  detail_sig::Best<4> la;
  for (std::uint32_t j = 0; j < M; ++j) {
    nu.merge(res[j].nu);
    th.merge(res[j].th);
    la.merge(res[j].la);
  }

  CorrelationProfile out;
  if (nu.mag2 >= 0) {
    out.nu = std::sqrt(nu.mag2);
    out.nu_witness = WitnessPair{nu.tup[0], nu.tup[1]};
  }
  out.theta = std::sqrt(th.mag2);
  out.theta_witness = WitnessShift{th.tup[0], th.tup[1], th.tup[2]};
  out.lambda = std::sqrt(la.mag2);
  out.lambda_witness = WitnessFull{la.tup[0], la.tup[1], la.tup[2], la.tup[3]};
  double peak2 = 0;
  for (std::size_t i = 0; i < flat.re.size(); ++i)
    peak2 = std::max(peak2, flat.re[i] * flat.re[i] + flat.im[i] * flat.im[i]);
  out.papr_max = std::sqrt(peak2);
  return out;
}

// Maximum cross-correlation at (w, tau) = (0, 0) only: a dedicated search for
// large expanded sets where the full profile would be wasteful. Returns
// {0, (0,0)} for a single-signal set.
inline std::pair<double, WitnessPair> nu_only(const SignalSet& set,
                                              unsigned threads = 0) {
  validate_shape(set);
  const std::uint32_t n = set.n, M = set.M();
  if (M < 2) return {0.0, WitnessPair{0, 0}};
  const auto flat = detail_sig::Flat::of(set);
  std::vector<detail_sig::Best<2>> res(M);
  parallel_for(0, M, thread_budget(threads), [&](std::uint64_t j64) {
    const std::uint32_t j = static_cast<std::uint32_t>(j64);
    const double* ar = flat.re.data() + static_cast<std::size_t>(j) * n;
    const double* ai = flat.im.data() + static_cast<std::size_t>(j) * n;
    detail_sig::Best<2>& best = res[j];
    for (std::uint32_t j2 = j + 1; j2 < M; ++j2) {
      const double* br = flat.re.data() + static_cast<std::size_t>(j2) * n;
      const double* bi = flat.im.data() + static_cast<std::size_t>(j2) * n;
      double sr = 0, si = 0;
      for (std::uint32_t t = 0; t < n; ++t) {
        sr += ar[t] * br[t] + ai[t] * bi[t];
        si += ai[t] * br[t] - ar[t] * bi[t];
      }
      best.offer(sr * sr + si * si, {j, j2});
    }
  });
  detail_sig::Best<2> all;
  for (std::uint32_t j = 0; j < M; ++j) all.merge(res[j]);
  return {std::sqrt(all.mag2), WitnessPair{all.tup[0], all.tup[1]}};
}

// Maximum correlation over time shifts only (w = 0): theta of the set.
inline std::pair<double, WitnessShift> theta_only(const SignalSet& set,
                                                  unsigned threads = 0) {
  validate_shape(set);
  const std::uint32_t n = set.n, M = set.M();
  const auto flat = detail_sig::Flat::of(set);
  std::vector<detail_sig::Best<3>> res(M);
  parallel_for(0, M, thread_budget(threads), [&](std::uint64_t j64) {
    const std::uint32_t j = static_cast<std::uint32_t>(j64);
    const double* ar = flat.re.data() + static_cast<std::size_t>(j) * n;
    const double* ai = flat.im.data() + static_cast<std::size_t>(j) * n;
    detail_sig::Best<3>& best = res[j];
    for (std::uint32_t j2 = j; j2 < M; ++j2) {
      const double* br = flat.re.data() + static_cast<std::size_t>(j2) * n;
      const double* bi = flat.im.data() + static_cast<std::size_t>(j2) * n;
      const bool self = (j == j2);
      for (std::uint32_t tau = 0; tau < n; ++tau) {
        if (self && tau == 0) continue;
        double sr = 0, si = 0;
        const std::uint32_t split = n - tau;
        for (std::uint32_t t = 0; t < split; ++t) {
          const double x = ar[t], y = ai[t], pr = br[t + tau], pi = bi[t + tau];
          sr += x * pr + y * pi;
          si += y * pr - x * pi;
        }
        for (std::uint32_t t = split; t < n; ++t) {
          const double x = ar[t], y = ai[t], pr = br[t + tau - n], pi = bi[t + tau - n];
          sr += x * pr + y * pi;
          si += y * pr - x * pi;
        }
        best.offer(sr * sr + si * si, {j, j2, tau});
      }
    }
  });
  detail_sig::Best<3> all;
  for (std::uint32_t j = 0; j < M; ++j) all.merge(res[j]);
  return {std::sqrt(all.mag2), WitnessShift{all.tup[0], all.tup[1], all.tup[2]}};
}

namespace detail_sig {

inline void require_bridgeable(double lambda_src) {
  if (!(lambda_src < 1.0 - 1e-9))
    throw DegenerateLambdaError(
        "bridge requires lambda < 1 - 1e-9; measured lambda = " +
        std::to_string(lambda_src));
}

}  // namespace detail_sig

// Expansion into the (n, n^2 M) set {M_w L_tau phi_j}: the source lambda
// becomes the expanded set's nu. Signals are ordered by (j, w, tau).
inline SignalSet bridge_full_with_lambda(const SignalSet& src, double lambda_src) {
  validate_shape(src);
  detail_sig::require_bridgeable(lambda_src);
  const std::uint32_t n = src.n, M = src.M();
  const auto Rt = root_table(n);
  SignalSet out;
  out.n = n;
  out.meta = src.meta;
  out.meta.construction = "bridge_full";
  out.signals.reserve(static_cast<std::size_t>(n) * n * M);
  for (std::uint32_t j = 0; j < M; ++j)
    for (std::uint32_t w = 0; w < n; ++w)
      for (std::uint32_t tau = 0; tau < n; ++tau) {
        Signal s(n);
        for (std::uint32_t t = 0; t < n; ++t)
          s[t] = Rt[static_cast<std::uint64_t>(w) * t % n] *
                 src.signals[j][(t + tau) % n];
        out.signals.push_back(std::move(s));
      }
  return out;
}

inline SignalSet bridge_full(const SignalSet& src, unsigned threads = 0) {
  return bridge_full_with_lambda(src, profile(src, threads).lambda);
}

// Expansion into the (n, n M) set {M_w phi_j}: the source lambda becomes the
// expanded set's theta. Signals are ordered by (j, w).
inline SignalSet bridge_phase_with_lambda(const SignalSet& src, double lambda_src) {
  validate_shape(src);
  detail_sig::require_bridgeable(lambda_src);
  const std::uint32_t n = src.n, M = src.M();
  const auto Rt = root_table(n);
  SignalSet out;
  out.n = n;
  out.meta = src.meta;
  out.meta.construction = "bridge_phase";
  out.signals.reserve(static_cast<std::size_t>(n) * M);
  for (std::uint32_t j = 0; j < M; ++j)
    for (std::uint32_t w = 0; w < n; ++w) {
      Signal s(n);
      for (std::uint32_t t = 0; t < n; ++t)
        s[t] = Rt[static_cast<std::uint64_t>(w) * t % n] * src.signals[j][t];
      out.signals.push_back(std::move(s));
    }
  return out;
}

inline SignalSet bridge_phase(const SignalSet& src, unsigned threads = 0) {
  return bridge_phase_with_lambda(src, profile(src, threads).lambda);
}

// First (i, j) pair of signals that coincide coordinatewise within tol, or
// nullopt when all pairs are distinct.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> find_duplicate_pair(
    const SignalSet& set, double tol = 1e-6) {
  const std::uint32_t n = set.n, M = set.M();
  for (std::uint32_t i = 0; i < M; ++i)
    for (std::uint32_t j = i + 1; j < M; ++j) {
      bool dup = true;
      for (std::uint32_t t = 0; t < n; ++t) {
        const Cplx d = set.signals[i][t] - set.signals[j][t];
        if (std::abs(d.real()) > tol || std::abs(d.imag()) > tol) {
          dup = false;
          break;
        }
      }
      if (dup) return std::make_pair(i, j);
    }
  return std::nullopt;
}

// Seeded pseudorandom unit set (complex Gaussian rows, normalized); used by
// property tests.
inline SignalSet random_unit_set(std::uint32_t n, std::uint32_t M, std::uint64_t seed) {
  if (n < 2) throw PeriodMismatchError("period n must be at least 2");
  if (M < 1) throw Error("set size M must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SignalSet out;
  out.n = n;
  out.meta.construction = "external";
  for (std::uint32_t j = 0; j < M; ++j) {
    Signal s(n);
    double norm2 = 0;
    do {
      norm2 = 0;
      for (std::uint32_t t = 0; t < n; ++t) {
        const double re = gauss(rng), im = gauss(rng);
        s[t] = {re, im};
        norm2 += re * re + im * im;
      }
    } while (norm2 == 0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::uint32_t t = 0; t < n; ++t) s[t] *= inv;
    out.signals.push_back(std::move(s));
  }
  return out;
}

}  // namespace tpsig
