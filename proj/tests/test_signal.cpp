// Signal-set layer: shift/modulation operators, the exhaustive correlation
// search (peak values and lexicographic witnesses), the two set-expansion
// maps, and shape/norm validation.
//
// Oracle: a deliberately naive reference evaluator below recomputes every
// correlation cell with per-term std::polar phases and no shared tables or
// symmetry shortcuts. The production search must agree with it to 1e-10 on
// values and exactly on witnesses.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "tpsig/constructions.hpp"
#include "tpsig/signal.hpp"

using tpsig::Cplx;
using tpsig::CorrelationProfile;
using tpsig::Signal;
using tpsig::SignalSet;

namespace {

constexpr double kPi2 = 6.283185307179586476925286766559;

// inner(a, M_w L_tau b) evaluated term by term with fresh trig calls.
Cplx ref_corr(const SignalSet& s, std::uint32_t j, std::uint32_t j2,
              std::uint32_t w, std::uint32_t tau) {
  const std::uint32_t n = s.n;
  Cplx acc{0.0, 0.0};
  for (std::uint32_t t = 0; t < n; ++t) {
    Cplx phase = std::polar(1.0, kPi2 * double(w) * double(t) / double(n));
    acc += s.signals[j][t] * std::conj(phase * s.signals[j2][(t + tau) % n]);
  }
  return acc;
}

struct RefProfile {
  double nu = -1.0, theta = -1.0, lambda = -1.0;
  std::array<std::uint32_t, 2> nu_w{};
  std::array<std::uint32_t, 3> theta_w{};
  std::array<std::uint32_t, 4> lambda_w{};
};

// Full scan over ordered pairs and the whole operator grid; keeps the
// lexicographically first witness among exact floating-point maxima.
RefProfile ref_profile(const SignalSet& s) {
  const std::uint32_t n = s.n, M = s.M();
  RefProfile r;
  for (std::uint32_t j = 0; j < M; ++j)
    for (std::uint32_t j2 = 0; j2 < M; ++j2)
      for (std::uint32_t w = 0; w < n; ++w)
        for (std::uint32_t tau = 0; tau < n; ++tau) {
          if (j == j2 && w == 0 && tau == 0) continue;
          double v = std::abs(ref_corr(s, j, j2, w, tau));
          if (v > r.lambda) {
            r.lambda = v;
            r.lambda_w = {j, j2, w, tau};
          }
          if (w == 0 && v > r.theta) {
            r.theta = v;
            r.theta_w = {j, j2, tau};
          }
          if (w == 0 && tau == 0 && j != j2 && v > r.nu) {
            r.nu = v;
            r.nu_w = {j, j2};
          }
        }
  if (M == 1) r.nu = 0.0;
  return r;
}

SignalSet two_basis_vectors() {
  SignalSet s;
  s.n = 2;
  s.signals = {{Cplx{1, 0}, Cplx{0, 0}}, {Cplx{0, 0}, Cplx{1, 0}}};
  return s;
}

}  // namespace

TEST_CASE("orthonormal basis pair: peaks and lexicographic witnesses by hand") {
  SignalSet s = two_basis_vectors();
  CorrelationProfile p = tpsig::profile(s);
  // <e0, e1> = 0, so the pair correlation vanishes.
  CHECK(p.nu == 0.0);
  REQUIRE(p.nu_witness.has_value());
  CHECK(p.nu_witness->j == 0);
  CHECK(p.nu_witness->j2 == 1);
  // Shifting e1 by one step lands exactly on e0: theta = 1 at (0, 1, 1).
  CHECK(p.theta == 1.0);
  CHECK(p.theta_witness.j == 0);
  CHECK(p.theta_witness.j2 == 1);
  CHECK(p.theta_witness.tau == 1);
  // e0 is fixed by pure modulation, so lambda = 1 already at (0, 0, 1, 0),
  // which precedes (0, 1, 0, 1) lexicographically among the maxima.
  CHECK(p.lambda == 1.0);
  CHECK(p.lambda_witness.j == 0);
  CHECK(p.lambda_witness.j2 == 0);
  CHECK(p.lambda_witness.w == 1);
  CHECK(p.lambda_witness.tau == 0);
  CHECK(p.papr_max == 1.0);
}

TEST_CASE("three-point set from the quartic field: values by hand") {
  // (1, -1, -1)/sqrt(3): autocorrelation at shift 1 is (-1 + 1 - 1)/3.
  SignalSet s = tpsig::construct_gauss(2, 2);
  REQUIRE(s.n == 3);
  REQUIRE(s.M() == 1);
  CHECK(std::abs(s.signals[0][0] - Cplx{1.0 / std::sqrt(3.0), 0}) < 1e-15);
  CHECK(std::abs(s.signals[0][1] + Cplx{1.0 / std::sqrt(3.0), 0}) < 1e-15);
  CorrelationProfile p = tpsig::profile(s);
  CHECK(p.nu == 0.0);
  CHECK(!p.nu_witness.has_value());
  CHECK(p.theta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(p.lambda == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p.papr_max == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("search agrees with the naive reference on random sets") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::uint32_t n = 2 + seed % 8;
    const std::uint32_t M = 1 + seed % 4;
    SignalSet s = tpsig::random_unit_set(n, M, seed);
    CAPTURE(n);
    CAPTURE(M);
    CAPTURE(seed);
    RefProfile ref = ref_profile(s);
    CorrelationProfile p = tpsig::profile(s);
    CHECK(std::abs(p.lambda - ref.lambda) < 1e-10);
    CHECK(std::abs(p.theta - ref.theta) < 1e-10);
    CHECK(std::abs(p.nu - ref.nu) < 1e-10);
    // The mirror cell (j2, j, -w, -tau) carries exactly the same magnitude
    // in real arithmetic, so evaluators with different summation order can
    // disagree about which member of a mirror pair is the float argmax. The
    // binding contract is: the witness is a valid cell in the ordered half,
    // is not the excluded identity cell, and achieves the maximum.
    const auto& lw = p.lambda_witness;
    CHECK(lw.j <= lw.j2);
    CHECK(lw.j2 < M);
    CHECK(lw.w < n);
    CHECK(lw.tau < n);
    CHECK(!(lw.j == lw.j2 && lw.w == 0 && lw.tau == 0));
    CHECK(std::abs(std::abs(ref_corr(s, lw.j, lw.j2, lw.w, lw.tau)) -
                   ref.lambda) < 1e-10);
    const auto& tw = p.theta_witness;
    CHECK(tw.j <= tw.j2);
    CHECK(tw.j2 < M);
    CHECK(tw.tau < n);
    CHECK(!(tw.j == tw.j2 && tw.tau == 0));
    CHECK(std::abs(std::abs(ref_corr(s, tw.j, tw.j2, 0, tw.tau)) - ref.theta) <
          1e-10);
    if (M > 1) {
      REQUIRE(p.nu_witness.has_value());
      // Pair cells have no mirror partner inside the ordered half, and a
      // continuous random set never ties two distinct pairs exactly, so the
      // pair witness must match the reference cell for cell.
      std::array<std::uint32_t, 2> nw{p.nu_witness->j, p.nu_witness->j2};
      CHECK(nw == ref.nu_w);
    }
    // Chain ordering is exact, not approximate: shared candidate stream.
    CHECK(p.nu <= p.theta);
    CHECK(p.theta <= p.lambda);
  }
}

TEST_CASE("single-measure scans match the full profile") {
  for (std::uint64_t seed : {3ull, 8ull, 21ull}) {
    SignalSet s = tpsig::random_unit_set(4 + seed % 3, 2 + seed % 3, seed);
    CorrelationProfile p = tpsig::profile(s);
    auto nu = tpsig::nu_only(s);
    auto th = tpsig::theta_only(s);
    CHECK(std::abs(nu.first - p.nu) < 1e-12);
    CHECK(std::abs(th.first - p.theta) < 1e-12);
    REQUIRE(p.nu_witness.has_value());
    CHECK(nu.second.j == p.nu_witness->j);
    CHECK(nu.second.j2 == p.nu_witness->j2);
    // The shift grid ties +tau against -tau exactly on the diagonal, so the
    // dedicated scan may return a different member of a tied mirror pair
    // than the full profile; both must achieve the same maximum.
    const auto& tw = th.second;
    CHECK(tw.j <= tw.j2);
    CHECK(!(tw.j == tw.j2 && tw.tau == 0));
    CHECK(std::abs(std::abs(ref_corr(s, tw.j, tw.j2, 0, tw.tau)) - p.theta) <
          1e-10);
  }
  // Single signal: no pair to compare, value 0 by convention.
  auto nu1 = tpsig::nu_only(tpsig::construct_gauss(2, 2));
  CHECK(nu1.first == 0.0);
}

TEST_CASE("thread count does not change results") {
  SignalSet s = tpsig::random_unit_set(6, 4, 99);
  CorrelationProfile a = tpsig::profile(s, 1);
  CorrelationProfile b = tpsig::profile(s, 4);
  CHECK(a.lambda == b.lambda);
  CHECK(a.theta == b.theta);
  CHECK(a.nu == b.nu);
  CHECK(a.lambda_witness.j == b.lambda_witness.j);
  CHECK(a.lambda_witness.j2 == b.lambda_witness.j2);
  CHECK(a.lambda_witness.w == b.lambda_witness.w);
  CHECK(a.lambda_witness.tau == b.lambda_witness.tau);
}

TEST_CASE("operator algebra: commutation scalar and invariances") {
  SignalSet s = tpsig::random_unit_set(7, 2, 5);
  const std::uint32_t n = s.n;
  const Signal& a = s.signals[0];
  const Signal& b = s.signals[1];
  for (std::uint32_t w = 0; w < n; ++w)
    for (std::uint32_t tau = 0; tau < n; ++tau) {
      // L_tau M_w = unit_root(w tau / n) * M_w L_tau.
      Signal lhs = tpsig::time_shift(tpsig::modulate(a, w), tau);
      Signal rhs = tpsig::modulate(tpsig::time_shift(a, tau), w);
      Cplx scalar = std::polar(1.0, kPi2 * double(w) * double(tau) / double(n));
      for (std::uint32_t t = 0; t < n; ++t)
        CHECK(std::abs(lhs[t] - scalar * rhs[t]) < 1e-12);
      // Joint action preserves inner-product magnitude.
      Signal ta = tpsig::modulate(tpsig::time_shift(a, tau), w);
      Signal tb = tpsig::modulate(tpsig::time_shift(b, tau), w);
      CHECK(std::abs(std::abs(tpsig::inner(ta, tb)) -
                     std::abs(tpsig::inner(a, b))) < 1e-12);
    }
  // Norm preservation and inverse shifts.
  double norm0 = std::sqrt(std::abs(tpsig::inner(a, a)));
  Signal moved = tpsig::time_shift(tpsig::modulate(a, 3), 4);
  CHECK(std::sqrt(std::abs(tpsig::inner(moved, moved))) ==
        doctest::Approx(norm0).epsilon(1e-12));
  // Negative shift is the inverse of the positive one.
  Signal back = tpsig::time_shift(tpsig::time_shift(a, 3), -3);
  for (std::uint32_t t = 0; t < n; ++t) CHECK(std::abs(back[t] - a[t]) < 1e-15);
  Signal wrap = tpsig::time_shift(a, -1);
  Signal wrap2 = tpsig::time_shift(a, n - 1);
  for (std::uint32_t t = 0; t < n; ++t) CHECK(wrap[t] == wrap2[t]);
}

TEST_CASE("full expansion: n^2 M signals carrying the source peak as nu") {
  SignalSet src = tpsig::construct_gauss(2, 2);  // n = 3, lambda = 2/3
  CorrelationProfile sp = tpsig::profile(src);
  SignalSet big = tpsig::bridge_full(src);
  CHECK(big.n == 3);
  CHECK(big.M() == 9);
  CHECK(big.meta.construction == "bridge_full");
  REQUIRE(big.meta.field.has_value());
  CHECK(big.meta.field->p == 2);
  tpsig::require_unit_norms(big);
  auto nu = tpsig::nu_only(big);
  CHECK(std::abs(nu.first - sp.lambda) < 1e-9);
  // All expanded signals are pairwise distinct as vectors.
  CHECK(!tpsig::find_duplicate_pair(big).has_value());
  // The expansion enumerates (j, w, tau) with tau fastest: row w=0,tau=1 of
  // the source must equal its one-step shift.
  Signal expected = tpsig::time_shift(src.signals[0], 1);
  for (std::uint32_t t = 0; t < 3; ++t)
    CHECK(std::abs(big.signals[1][t] - expected[t]) < 1e-15);
}

TEST_CASE("phase expansion: n M signals carrying the source peak as theta") {
  SignalSet src = tpsig::construct_gauss(2, 2);
  CorrelationProfile sp = tpsig::profile(src);
  SignalSet mid = tpsig::bridge_phase(src);
  CHECK(mid.n == 3);
  CHECK(mid.M() == 3);
  CHECK(mid.meta.construction == "bridge_phase");
  auto th = tpsig::theta_only(mid);
  CHECK(std::abs(th.first - sp.lambda) < 1e-9);
  CHECK(!tpsig::find_duplicate_pair(mid).has_value());

  // Smallest period: the two-point set from the cubic field still expands
  // into distinct signals.
  SignalSet tiny = tpsig::construct_gauss(3, 1);  // n = 2, lambda = sqrt(3)/2
  SignalSet t4 = tpsig::bridge_full(tiny);
  CHECK(t4.M() == 4);
  CHECK(!tpsig::find_duplicate_pair(t4).has_value());
  CHECK(std::abs(tpsig::nu_only(t4).first - tpsig::profile(tiny).lambda) < 1e-9);
}

TEST_CASE("expansion rejects degenerate sources") {
  // (1, i)/sqrt(2) is an eigenvector of the joint shift+modulation operator,
  // so its peak correlation is exactly 1 and no expansion is possible.
  SignalSet eig;
  eig.n = 2;
  eig.signals = {{Cplx{1 / std::sqrt(2.0), 0}, Cplx{0, 1 / std::sqrt(2.0)}}};
  CHECK(tpsig::profile(eig).lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(tpsig::bridge_full(eig), tpsig::DegenerateLambdaError);
  CHECK_THROWS_AS(tpsig::bridge_phase(eig), tpsig::DegenerateLambdaError);

  // Duplicated signals force nu = 1, same rejection.
  SignalSet dup = two_basis_vectors();
  dup.signals.push_back(dup.signals[0]);
  CHECK_THROWS_AS(tpsig::bridge_full(dup), tpsig::DegenerateLambdaError);
  auto pair = tpsig::find_duplicate_pair(dup);
  REQUIRE(pair.has_value());
  CHECK(pair->first == 0);
  CHECK(pair->second == 2);
}

TEST_CASE("shape and norm validation") {
  SignalSet ragged;
  ragged.n = 3;
  ragged.signals = {{Cplx{1, 0}, Cplx{0, 0}, Cplx{0, 0}}, {Cplx{1, 0}, Cplx{0, 0}}};
  CHECK_THROWS_AS(tpsig::validate_shape(ragged), tpsig::PeriodMismatchError);
  CHECK_THROWS_AS(tpsig::profile(ragged), tpsig::PeriodMismatchError);

  Signal a{Cplx{1, 0}, Cplx{0, 0}};
  Signal b{Cplx{1, 0}, Cplx{0, 0}, Cplx{0, 0}};
  CHECK_THROWS_AS(tpsig::inner(a, b), tpsig::PeriodMismatchError);

  SignalSet off = two_basis_vectors();
  off.signals[1][1] = Cplx{0.5, 0};
  auto v = tpsig::check_unit_norms(off);
  REQUIRE(v.has_value());
  CHECK(v->index == 1);
  CHECK(v->norm == doctest::Approx(0.5).epsilon(1e-12));
  try {
    tpsig::require_unit_norms(off);
    FAIL("expected a norm rejection");
  } catch (const tpsig::UnitNormError& e) {
    CHECK(e.index == 1);
    CHECK(std::string(e.what()).find("norm") != std::string::npos);
  }
  CHECK(!tpsig::check_unit_norms(two_basis_vectors()).has_value());
}

TEST_CASE("seeded random sets are reproducible unit vectors") {
  SignalSet a = tpsig::random_unit_set(5, 3, 42);
  SignalSet b = tpsig::random_unit_set(5, 3, 42);
  SignalSet c = tpsig::random_unit_set(5, 3, 43);
  REQUIRE(a.M() == 3);
  for (std::uint32_t j = 0; j < 3; ++j)
    for (std::uint32_t t = 0; t < 5; ++t) CHECK(a.signals[j][t] == b.signals[j][t]);
  bool any_diff = false;
  for (std::uint32_t j = 0; j < 3; ++j)
    for (std::uint32_t t = 0; t < 5; ++t)
      if (a.signals[j][t] != c.signals[j][t]) any_diff = true;
  CHECK(any_diff);
  CHECK(!tpsig::check_unit_norms(a, 1e-12).has_value());
  CHECK_THROWS_AS(tpsig::random_unit_set(1, 3, 7), tpsig::PeriodMismatchError);
  CHECK_THROWS_AS(tpsig::random_unit_set(4, 0, 7), tpsig::Error);
}

TEST_CASE("peak-to-average measure picks the largest coordinate modulus") {
  Signal s{Cplx{0.6, 0}, Cplx{0, -0.8}};
  CHECK(tpsig::papr(s) == doctest::Approx(0.8).epsilon(1e-15));
  SignalSet g = tpsig::construct_gauss(2, 3);
  CHECK(tpsig::profile(g).papr_max ==
        doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
}
