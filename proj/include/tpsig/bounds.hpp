#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "tpsig/error.hpp"
#include "tpsig/format.hpp"
#include "tpsig/signal.hpp"

namespace tpsig {

using BigInt = boost::multiprecision::cpp_int;

// Exact integer binomial; C(n+k-1,k) overflows 64 bits quickly, and a silent
// overflow would corrupt every bound built on it.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

inline BigInt factorial(std::uint64_t n) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// Exact-integer ratio converted to double at the last step.
inline double big_ratio(const BigInt& num, const BigInt& den) {
  using BF = boost::multiprecision::cpp_bin_float_50;
  return (BF(num) / BF(den)).convert_to<double>();
}

struct BoundValue {
  double value = 0.0;
  bool applicable = true;
  std::string note;
};

namespace detail_bounds {

inline void validate_grid(std::uint32_t n, std::uint32_t M) {
  if (n < 2) throw Error("period n must be at least 2");
  if (M < 1) throw Error("set size M must be at least 1");
}

}  // namespace detail_bounds

// w_k for an (n, M) time-phase set: lambda >= [(n^2 M - B)/((n^2 M - 1) B)]^(1/2k)
// with B = C(n+k-1, k). Vacuous (nonpositive numerator) clamps to 0.
inline BoundValue welch_timephase(std::uint32_t n, std::uint32_t M,
                                  std::uint32_t k = 1) {
  detail_bounds::validate_grid(n, M);
  if (k < 1) throw KOutOfRangeError("k must be at least 1");
  const BigInt NM = BigInt(n) * n * M;
  const BigInt B = binomial(std::uint64_t(n) + k - 1, k);
  const BigInt num = NM - B;
  if (num <= 0)
    return {0.0, false, "vacuous: n^2 M <= C(n+k-1,k) at k=" + std::to_string(k)};
  const double ratio = big_ratio(num, (NM - 1) * B);
  return {std::pow(ratio, 1.0 / (2.0 * k)), true, ""};
}

// lambda >= sqrt((2nM - n - 1)/((n+1)(nM - 1))) for M > 1; at M = 1 the value
// still evaluates (it equals w_1) but the hypothesis fails, so it is flagged.
inline BoundValue levenstein_timephase(std::uint32_t n, std::uint32_t M) {
  detail_bounds::validate_grid(n, M);
  const double nM = double(n) * M;
  const double s = (2.0 * nM - n - 1.0) / ((n + 1.0) * (nM - 1.0));
  if (M < 2)
    return {std::sqrt(s), false,
            "requires M > 1; at M = 1 it coincides with the first Welch bound"};
  return {std::sqrt(s), true, ""};
}

// Welch bound for M unit signals compared pairwise with no shift or
// modulation: max cross-correlation >= [(M - B)/((M-1) B)]^(1/2k). This
// lower-bounds nu, hence theta and lambda as well.
inline BoundValue welch_time(std::uint32_t n, std::uint32_t M,
                             std::uint32_t k = 1) {
  detail_bounds::validate_grid(n, M);
  if (k < 1) throw KOutOfRangeError("k must be at least 1");
  if (M < 2) return {0.0, false, "single signal: no pair to correlate"};
  const BigInt B = binomial(std::uint64_t(n) + k - 1, k);
  const BigInt num = BigInt(M) - B;
  if (num < 0)
    return {0.0, false, "vacuous: M < C(n+k-1,k) at k=" + std::to_string(k)};
  double value = 0.0;
  if (num > 0)
    value = std::pow(big_ratio(num, (BigInt(M) - 1) * B), 1.0 / (2.0 * k));
  if (M >= n) return {value, true, ""};
  return {value, false, "outside hypothesis M >= n"};
}

// Real-alphabet shiftless bound: sqrt((3M - n^2 - 2n)/((n+2)(M - n))),
// valid for M > n(n+1)/2.
inline BoundValue levenstein_time_real(std::uint32_t n, std::uint32_t M) {
  detail_bounds::validate_grid(n, M);
  const double num = 3.0 * M - double(n) * n - 2.0 * n;
  const double den = (n + 2.0) * (double(M) - n);
  const double value = (num > 0 && den > 0) ? std::sqrt(num / den) : 0.0;
  if (2.0 * M > double(n) * (n + 1.0)) return {value, true, ""};
  return {value, false, "requires M > n(n+1)/2"};
}

// Complex shiftless bound: sqrt((2M - n^2 - n)/((n+1)(M - n))), valid for
// M > n^2 strictly.
inline BoundValue levenstein_time_complex(std::uint32_t n, std::uint32_t M) {
  detail_bounds::validate_grid(n, M);
  const double num = 2.0 * M - double(n) * n - double(n);
  const double den = (n + 1.0) * (double(M) - n);
  const double value = (num > 0 && den > 0) ? std::sqrt(num / den) : 0.0;
  if (double(M) > double(n) * n) return {value, true, ""};
  return {value, false, "requires M > n^2"};
}

// ---------------------------------------------------------------------------
// Piecewise linear-programming bounds on the total count nM as a function of
// s = lambda^2. Piece functions return the nM-form value; the selector
// divides by n to report an (unfloored) upper bound on M.
// ---------------------------------------------------------------------------

inline double lp_complex_piece(std::uint32_t n32, int piece, double s) {
  const double n = n32;
  switch (piece) {
    case 1:
      return (1 - s) / (1 - n * s);
    case 2:
      return (n + 1) * (1 - s) / (2 - (n + 1) * s);
    case 3:
      return n * (n + 1) * (1 - s) * ((n + 2) * s - 1) /
             (4 * (n + 1) * s - (n + 1) * (n + 2) * s * s - 2);
    case 4:
      return n * (n + 1) * (n + 2) * ((n + 3) * s - 2) * (1 - s) /
             (12 * (n + 2) * s - 2 * (n + 2) * (n + 3) * s * s - 12);
    default:
      throw Error("complex family has pieces 1..4");
  }
}

// Inclusive upper endpoint of each piece's s-interval (the lower endpoint is
// the previous piece's upper one; piece 1 starts at 0, exclusive for the
// complex family).
inline double lp_complex_hi(std::uint32_t n32, int piece) {
  const double n = n32;
  switch (piece) {
    case 1:
      return 1 / (n + 1);
    case 2:
      return 2 / (n + 2);
    case 3:
      return (2 * (n + 2) + std::sqrt(2 * (n + 1) * (n + 2))) /
             ((n + 2) * (n + 3));
    case 4:
      return (3 * (n + 3) + std::sqrt(3 * (n + 3) * (n + 1))) /
             ((n + 3) * (n + 4));
    default:
      throw Error("complex family has pieces 1..4");
  }
}

inline double lp_binary_piece(std::uint32_t n32, int piece, double s) {
  const double n = n32;
  const double n2 = n * n;
  switch (piece) {
    case 1:
      return (1 - s) / (1 - n * s);
    case 2:
      return n2 * (1 - s) / (3 * n - 2 - n2 * s);
    case 3:
      return n * (1 - s) * ((n - 2) * (n2 - 3 * n + 8) - (n2 - n + 2) * n2 * s) /
             (6 * n * (n - 2) - 4 * (3 * n - 4) * n2 * s + 2 * n2 * n2 * s * s);
    case 4:
      return (n2 * (1 - s) / 6) *
             (3 * n2 * n - 23 * n2 + 90 * n - 136 - (n2 - 3 * n + 8) * n2 * s) /
             (15 * n2 - 50 * n + 24 - 10 * (n - 2) * n2 * s + n2 * n2 * s * s);
    default:
      throw Error("binary family has pieces 1..4");
  }
}

inline double lp_binary_hi(std::uint32_t n32, int piece) {
  const double n = n32;
  const double n2 = n * n;
  switch (piece) {
    case 1:
      return (n - 2) / n2;
    case 2:
      return (3 * n - 8) / n2;
    case 3:
      return (3 * n - 10 + std::sqrt(6 * n2 - 42 * n + 76)) / n2;
    case 4:
      return (5 * (n - 4) + std::sqrt(10 * n2 - 90 * n + 216)) / n2;
    default:
      throw Error("binary family has pieces 1..4");
  }
}

inline double lp_qary_piece(std::uint32_t n32, int piece, double s) {
  const double n = n32;
  const double n2 = n * n;
  switch (piece) {
    case 1:
      return (1 - s) / (1 - n * s);
    case 2:
      return n2 * (1 - s) / (2 * n - 1 - n2 * s);
    case 3:
      return n2 * (1 - s) *
             ((n2 - n + 1) * n2 * s - n2 * n + 3 * n2 - 5 * n + 4) /
             (n * (4 * (n - 1) * n2 * s - n2 * n2 * s * s - 2 * n2 + 3 * n));
    default:
      throw Error("q-ary family has pieces 1..3");
  }
}

inline double lp_qary_hi(std::uint32_t n32, int piece) {
  const double n = n32;
  const double n2 = n * n;
  switch (piece) {
    case 1:
      return (n - 1) / n2;
    case 2:
      return (2 * n2 - 5 * n + 4) / (n2 * (n - 1));
    case 3:
      return (2 * n - 2 + std::sqrt(2 * n2 - 5 * n + 4)) / n2;
    default:
      throw Error("q-ary family has pieces 1..3");
  }
}

struct LpResult {
  int piece = 0;
  double m_bound = 0.0;  // unfloored upper bound on M
};

namespace detail_bounds {

template <class PieceFn, class HiFn>
inline LpResult lp_select(std::uint32_t n, double lambda, int pieces,
                          bool zero_inclusive, PieceFn piece_fn, HiFn hi_fn,
                          const char* family) {
  const double s = lambda * lambda;
  if (s < 0 || (!zero_inclusive && s == 0))
    throw IntervalGapError(std::string(family) +
                           " pieces exclude lambda = 0");
  double prev = 0.0;
  for (int piece = 1; piece <= pieces; ++piece) {
    const double hi = hi_fn(n, piece);
    if (hi <= prev) continue;  // interval empty at this n
    if (s <= hi) return {piece, piece_fn(n, piece, s) / n};
    prev = hi;
  }
  throw IntervalGapError(std::string(family) + " pieces cover lambda^2 <= " +
                         fmt17(prev) + "; got lambda^2 = " + fmt17(s));
}

}  // namespace detail_bounds

// Four-piece bound for arbitrary complex unit time-phase sets. Piece 3 is
// evaluated in a transcription-corrected closed form (continuity with its
// neighbors is property-tested).
inline LpResult lp_bound_complex(std::uint32_t n, double lambda) {
  if (n < 2) throw Error("period n must be at least 2");
  return detail_bounds::lp_select(n, lambda, 4, false, lp_complex_piece,
                                  lp_complex_hi, "complex");
}

// Four-piece bound for sets whose entries are scaled 2nd roots of unity.
inline LpResult lp_bound_binary(std::uint32_t n, double lambda) {
  if (n < 2) throw Error("period n must be at least 2");
  return detail_bounds::lp_select(n, lambda, 4, true, lp_binary_piece,
                                  lp_binary_hi, "binary");
}

// Three-piece bound for sets whose entries are scaled q-th roots of unity,
// q >= 3. Piece 3 is transcription-corrected.
inline LpResult lp_bound_qary(std::uint32_t n, double lambda) {
  if (n < 2) throw Error("period n must be at least 2");
  return detail_bounds::lp_select(n, lambda, 3, true, lp_qary_piece,
                                  lp_qary_hi, "q-ary");
}

// Piece 2 of the q-ary family solved for lambda at a given set size:
// lambda >= sqrt((2nM - M - n)/(n(nM - 1))). Valid for every q-ary (q >= 3)
// time-phase set of M signals; where the true piecewise bound is a later
// piece this is still a (weaker) valid lower bound.
inline double lp_qary_lambda_lower(std::uint32_t n, std::uint32_t M) {
  detail_bounds::validate_grid(n, M);
  const double nM = double(n) * M;
  return std::sqrt((2.0 * nM - double(M) - double(n)) / (n * (nM - 1.0)));
}

// ---------------------------------------------------------------------------
// Power-moment lower bounds on lambda^2 with the nM denominator.
// ---------------------------------------------------------------------------

// Raw lambda^2 lower bound at a specific k; may be negative (vacuous).
// binary_alphabet selects the 2nd-roots variant (k <= floor(2n/5)); otherwise
// the q >= 3 variant (k <= n).
inline double sidelnikov_s_bound(std::uint32_t n, std::uint32_t M,
                                 bool binary_alphabet, std::uint32_t k) {
  detail_bounds::validate_grid(n, M);
  const double dn = n;
  if (binary_alphabet) {
    if (k > 2 * n / 5)
      throw KOutOfRangeError("k must satisfy 0 <= k <= floor(2n/5)");
    const double main = (2.0 * k + 1) * (dn - k) / (dn * dn) +
                        double(k) * (k + 1.0) / (2.0 * dn * dn);
    const BigInt num = pow(BigInt(2), k) * pow(BigInt(n), 2 * k);
    const BigInt den = BigInt(n) * M * factorial(2ull * k) * binomial(n, k);
    return main - big_ratio(num, den);
  }
  if (k > n) throw KOutOfRangeError("k must satisfy 0 <= k <= n");
  const double main = (k + 1.0) * (2.0 * dn - k) / (2.0 * dn * dn);
  const BigInt kf = factorial(k);
  const BigInt num = pow(BigInt(2), k) * pow(BigInt(n), 2 * k);
  const BigInt den = BigInt(n) * M * kf * kf * binomial(n, k);
  return main - big_ratio(num, den);
}

// lambda >= sqrt(max(0, s-bound)); nonpositive s-bounds are clamped to 0 and
// flagged inapplicable (the bound carries no information there).
inline BoundValue sidelnikov_timephase(std::uint32_t n, std::uint32_t M,
                                       bool binary_alphabet, std::uint32_t k) {
  const double s = sidelnikov_s_bound(n, M, binary_alphabet, k);
  if (s <= 0) return {0.0, false, "vacuous at k=" + std::to_string(k)};
  return {std::sqrt(s), true, "k=" + std::to_string(k)};
}

// Best k in the feasible range (scan capped at 128 — the subtracted term
// explodes combinatorially long before that); ties keep the smaller k.
inline BoundValue best_sidelnikov(std::uint32_t n, std::uint32_t M,
                                  bool binary_alphabet) {
  detail_bounds::validate_grid(n, M);
  const std::uint32_t kmax =
      binary_alphabet ? 2 * n / 5 : std::min(n, std::uint32_t{128});
  std::uint32_t best_k = 0;
  double best_s = sidelnikov_s_bound(n, M, binary_alphabet, 0);
  for (std::uint32_t k = 1; k <= kmax; ++k) {
    const double s = sidelnikov_s_bound(n, M, binary_alphabet, k);
    if (s > best_s) {
      best_s = s;
      best_k = k;
    }
  }
  if (best_s <= 0)
    return {0.0, false, "vacuous for every k in range (best k=" +
                            std::to_string(best_k) + ")"};
  return {std::sqrt(best_s), true, "k=" + std::to_string(best_k)};
}

// ---------------------------------------------------------------------------
// Aggregated report and optimality judgement.
// ---------------------------------------------------------------------------

enum class Alphabet { complex_any, real, binary, qary };

inline const char* alphabet_name(Alphabet a) {
  switch (a) {
    case Alphabet::complex_any:
      return "complex";
    case Alphabet::real:
      return "real";
    case Alphabet::binary:
      return "binary";
    case Alphabet::qary:
      return "qary";
  }
  return "complex";
}

struct BoundQuery {
  std::uint32_t n = 0;
  std::uint32_t M = 0;
  Alphabet alphabet = Alphabet::complex_any;
  std::optional<std::uint32_t> p;  // root order behind a binary/qary alphabet
  std::optional<std::uint32_t> k;  // extra Welch/power-moment order to report
};

enum class BoundKind { lower_on_lambda, upper_on_m };

inline const char* bound_kind_name(BoundKind k) {
  return k == BoundKind::lower_on_lambda ? "lower-on-lambda" : "upper-on-M";
}

struct BoundEntry {
  std::string name;
  BoundKind kind = BoundKind::lower_on_lambda;
  double value = 0.0;
  bool applicable = false;
  std::string note;
};

enum class VerdictKind { optimal, within_epsilon, not_optimal, undetermined };

struct Verdict {
  VerdictKind kind = VerdictKind::undetermined;
  double delta = 0.0;  // relative gap for within_epsilon
  std::string certificate;
};

inline std::string verdict_to_string(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::optimal:
      return "optimal";
    case VerdictKind::within_epsilon:
      return "within_epsilon(" + fmt17(v.delta) + ")";
    case VerdictKind::not_optimal:
      return "not_optimal";
    case VerdictKind::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

struct BoundReport {
  std::vector<BoundEntry> entries;
  std::optional<Verdict> verdict;
};

namespace detail_bounds {

// Non-finite values are never reported as applicable (a piecewise bound
// diverges exactly at its last junction point).
inline BoundEntry make_entry(std::string name, BoundKind kind, double value,
                             bool applicable, std::string note) {
  if (!std::isfinite(value)) {
    value = 0.0;
    applicable = false;
    if (!note.empty()) note += "; ";
    note += "value diverges here";
  }
  return {std::move(name), kind, value, applicable, std::move(note)};
}

inline BoundEntry from_bv(std::string name, BoundKind kind,
                          const BoundValue& bv) {
  return make_entry(std::move(name), kind, bv.value, bv.applicable, bv.note);
}

inline void append_common(std::vector<BoundEntry>& out, const BoundQuery& q) {
  using BK = BoundKind;
  out.push_back(from_bv("welch_timephase[k=1]", BK::lower_on_lambda,
                        welch_timephase(q.n, q.M, 1)));
  if (q.k && *q.k >= 2)
    out.push_back(from_bv("welch_timephase[k=" + std::to_string(*q.k) + "]",
                          BK::lower_on_lambda, welch_timephase(q.n, q.M, *q.k)));
  out.push_back(from_bv("levenstein_timephase", BK::lower_on_lambda,
                        levenstein_timephase(q.n, q.M)));
  out.push_back(
      from_bv("welch_time[k=1]", BK::lower_on_lambda, welch_time(q.n, q.M, 1)));
  if (q.k && *q.k >= 2)
    out.push_back(from_bv("welch_time[k=" + std::to_string(*q.k) + "]",
                          BK::lower_on_lambda, welch_time(q.n, q.M, *q.k)));
  out.push_back(from_bv("levenstein_time[complex]", BK::lower_on_lambda,
                        levenstein_time_complex(q.n, q.M)));
  if (q.alphabet == Alphabet::real || q.alphabet == Alphabet::binary)
    out.push_back(from_bv("levenstein_time[real]", BK::lower_on_lambda,
                          levenstein_time_real(q.n, q.M)));
}

// The binary-only families assume signals AND their modulates stay in the
// 2nd-root alphabet, which fails for n > 2; they are reported for reference
// but never allowed to certify or constrain a time-phase measurement.
inline const char* binary_family_caveat() {
  return "2nd-root-alphabet family; modulation leaves that alphabet, so the "
         "bound is reported for reference only";
}

// A 2nd-root alphabet is also a 4th-root alphabet, so the q >= 3 families
// apply to binary sets unchanged.
inline const char* binary_embedding_note() {
  return "entries are 2nd roots of unity, hence 4th roots; q >= 3 family applies";
}

inline void append_alphabet_entries(std::vector<BoundEntry>& out,
                                    const BoundQuery& q,
                                    std::optional<double> lambda) {
  using BK = BoundKind;
  const bool binary = q.alphabet == Alphabet::binary;
  const bool qary = q.alphabet == Alphabet::qary;

  if (lambda) {
    try {
      const LpResult r = lp_bound_complex(q.n, *lambda);
      out.push_back(make_entry(
          "lp_complex[piece=" + std::to_string(r.piece) + "]", BK::upper_on_m,
          r.m_bound, true, r.piece == 3 ? "transcription-corrected" : ""));
    } catch (const IntervalGapError&) {
      out.push_back(make_entry("lp_complex", BK::upper_on_m, 0.0, false,
                               "lambda^2 outside the piecewise range"));
    }
    if (binary) {
      std::string note = binary_family_caveat();
      try {
        const LpResult r = lp_bound_binary(q.n, *lambda);
        if (r.piece >= 3) note += "; transcription-corrected";
        out.push_back(make_entry(
            "lp_binary[piece=" + std::to_string(r.piece) + "]", BK::upper_on_m,
            r.m_bound, false, std::move(note)));
      } catch (const IntervalGapError&) {
        out.push_back(make_entry("lp_binary", BK::upper_on_m, 0.0, false,
                                 note + "; lambda^2 outside the piecewise range"));
      }
    }
    if (binary || qary) {
      std::string note = binary ? binary_embedding_note() : "";
      try {
        const LpResult r = lp_bound_qary(q.n, *lambda);
        if (r.piece == 3) {
          if (!note.empty()) note += "; ";
          note += "transcription-corrected";
        }
        out.push_back(make_entry(
            "lp_qary[piece=" + std::to_string(r.piece) + "]", BK::upper_on_m,
            r.m_bound, true, std::move(note)));
      } catch (const IntervalGapError&) {
        if (!note.empty()) note += "; ";
        out.push_back(make_entry("lp_qary", BK::upper_on_m, 0.0, false,
                                 note + "lambda^2 outside the piecewise range"));
      }
    }
  }

  if (binary || qary) {
    std::string note = binary ? std::string(binary_embedding_note()) : "";
    out.push_back(make_entry("lp_qary[piece=2,inverted]", BK::lower_on_lambda,
                             lp_qary_lambda_lower(q.n, q.M), true,
                             std::move(note)));
  }

  if (binary) {
    const BoundValue b2 = best_sidelnikov(q.n, q.M, true);
    std::string note = binary_family_caveat();
    if (!b2.note.empty()) note += "; " + b2.note;
    out.push_back(make_entry("sidelnikov[q=2]", BK::lower_on_lambda, b2.value,
                             false, std::move(note)));
  }
  if (binary || qary) {
    const BoundValue b = best_sidelnikov(q.n, q.M, false);
    std::string note = binary ? std::string(binary_embedding_note()) : "";
    if (!b.note.empty()) {
      if (!note.empty()) note += "; ";
      note += b.note;
    }
    out.push_back(make_entry("sidelnikov[q>2]", BK::lower_on_lambda, b.value,
                             b.applicable, std::move(note)));
    if (q.k) {
      try {
        const BoundValue bk = sidelnikov_timephase(q.n, q.M, false, *q.k);
        std::string knote = binary ? std::string(binary_embedding_note()) : "";
        if (!bk.note.empty()) {
          if (!knote.empty()) knote += "; ";
          knote += bk.note;
        }
        out.push_back(make_entry("sidelnikov[q>2,k=" + std::to_string(*q.k) + "]",
                                 BK::lower_on_lambda, bk.value, bk.applicable,
                                 std::move(knote)));
      } catch (const KOutOfRangeError& e) {
        out.push_back(make_entry("sidelnikov[q>2,k=" + std::to_string(*q.k) + "]",
                                 BK::lower_on_lambda, 0.0, false, e.what()));
      }
    }
  }
}

struct VerdictSelection {
  const BoundEntry* entry = nullptr;
  VerdictKind kind = VerdictKind::undetermined;
  double delta = 0.0;
  bool by_m_floor = false;
};

inline VerdictSelection select_verdict(const std::vector<BoundEntry>& entries,
                                       double lambda, std::uint32_t M) {
  const double tol = 1e-9;

  // An applicable M-bound whose floor equals M certifies optimality; among
  // several, the tightest one is quoted.
  const BoundEntry* m_cert = nullptr;
  for (const BoundEntry& e : entries) {
    if (e.kind != BoundKind::upper_on_m || !e.applicable) continue;
    if (std::floor(e.value + tol) == double(M))
      if (!m_cert || e.value < m_cert->value) m_cert = &e;
  }
  if (m_cert) return {m_cert, VerdictKind::optimal, 0.0, true};

  // Meeting an applicable lambda lower bound within 1e-9 also certifies.
  const BoundEntry* l_cert = nullptr;
  for (const BoundEntry& e : entries) {
    if (e.kind != BoundKind::lower_on_lambda || !e.applicable) continue;
    if (std::abs(lambda - e.value) <= tol)
      if (!l_cert ||
          std::abs(lambda - e.value) < std::abs(lambda - l_cert->value))
        l_cert = &e;
  }
  if (l_cert) return {l_cert, VerdictKind::optimal, 0.0, false};

  // Otherwise the smallest relative gap to any applicable bound.
  double best_gap = std::numeric_limits<double>::infinity();
  const BoundEntry* nearest = nullptr;
  for (const BoundEntry& e : entries) {
    if (!e.applicable) continue;
    double gap;
    if (e.kind == BoundKind::lower_on_lambda) {
      if (e.value <= 0) continue;
      gap = (lambda - e.value) / e.value;
    } else {
      gap = (e.value - M) / double(M);
    }
    if (gap < 0) gap = 0;
    if (gap < best_gap) {
      best_gap = gap;
      nearest = &e;
    }
  }
  if (!nearest) return {nullptr, VerdictKind::undetermined, 0.0, false};
  return {nearest, VerdictKind::within_epsilon, best_gap, false};
}

inline Verdict decide(const std::vector<BoundEntry>& entries, double lambda,
                      std::uint32_t M) {
  const VerdictSelection sel = select_verdict(entries, lambda, M);
  switch (sel.kind) {
    case VerdictKind::optimal:
      if (sel.by_m_floor)
        return {VerdictKind::optimal, 0.0,
                sel.entry->name + ": floor(" + fmt17(sel.entry->value) +
                    ") == M == " + std::to_string(M)};
      return {VerdictKind::optimal, 0.0,
              sel.entry->name + ": measured lambda meets " +
                  fmt17(sel.entry->value) + " within 1e-9"};
    case VerdictKind::within_epsilon:
      return {VerdictKind::within_epsilon, sel.delta,
              "nearest bound " + sel.entry->name + ": relative gap " +
                  fmt17(sel.delta)};
    default:
      return {VerdictKind::undetermined, 0.0, "no applicable bound"};
  }
}

}  // namespace detail_bounds

// All bounds computable from (n, M, alphabet) alone — no measured profile, so
// the piecewise upper bounds on M (functions of lambda) are omitted and no
// verdict is rendered.
inline BoundReport bound_table(const BoundQuery& q) {
  detail_bounds::validate_grid(q.n, q.M);
  if (q.k && *q.k < 1) throw KOutOfRangeError("k must be at least 1");
  BoundReport report;
  detail_bounds::append_common(report.entries, q);
  detail_bounds::append_alphabet_entries(report.entries, q, std::nullopt);
  return report;
}

// Full report for a measured profile: every bound valid for the query's
// alphabet, evaluated at the measured lambda where needed, plus a verdict.
inline BoundReport judge(const CorrelationProfile& prof, const BoundQuery& q) {
  detail_bounds::validate_grid(q.n, q.M);
  if (q.k && *q.k < 1) throw KOutOfRangeError("k must be at least 1");
  BoundReport report;
  detail_bounds::append_common(report.entries, q);
  detail_bounds::append_alphabet_entries(report.entries, q, prof.lambda);
  report.verdict = detail_bounds::decide(report.entries, prof.lambda, q.M);
  return report;
}

// The entry a verdict is anchored to: the certifying bound when optimal, the
// nearest applicable bound otherwise; nullopt when nothing applies.
inline std::optional<BoundEntry> verdict_entry(const BoundReport& report,
                                               double lambda, std::uint32_t M) {
  const detail_bounds::VerdictSelection sel =
      detail_bounds::select_verdict(report.entries, lambda, M);
  if (!sel.entry) return std::nullopt;
  return *sel.entry;
}

}  // namespace tpsig
