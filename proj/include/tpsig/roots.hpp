#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace tpsig {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// e^{2 pi i k / den}; k may be any integer (reduced mod den first so the
// trigonometric argument stays small and evaluation is reproducible).
inline std::complex<double> unit_root(std::int64_t k, std::uint64_t den) {
  std::int64_t d = static_cast<std::int64_t>(den);
  std::int64_t r = k % d;
  if (r < 0) r += d;
  double ang = two_pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(ang), std::sin(ang)};
}

// Table of e^{+2 pi i k / n} for k = 0..n-1.
inline std::vector<std::complex<double>> root_table(std::uint32_t n) {
  std::vector<std::complex<double>> t(n);
  for (std::uint32_t k = 0; k < n; ++k) t[k] = unit_root(k, n);
  return t;
}

// Table of e^{-2 pi i k / n} for k = 0..n-1 (conjugate factors used in
// correlation sums).
inline std::vector<std::complex<double>> conj_root_table(std::uint32_t n) {
  std::vector<std::complex<double>> t(n);
  for (std::uint32_t k = 0; k < n; ++k)
    t[k] = std::conj(unit_root(k, n));
  return t;
}

}  // namespace tpsig
