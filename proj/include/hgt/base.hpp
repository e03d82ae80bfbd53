#pragma once

// Shared aliases and small numeric helpers.
//
// Everything ambient is complex: points, tangents and form values are vectors
// in C^m, with matrices stored column-flattened. Real objects simply live
// inside the complex containers; nothing downstream needs to know.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>

namespace hgt {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

inline Mat unflat(const Vec& v, int n) {
  return Eigen::Map<const Mat>(v.data(), n, n);
}

inline Vec flat(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

// Stack real over imaginary parts; used when solving real least squares
// against complex ambient data.
inline RVec realify(const Vec& v) {
  RVec r(2 * v.size());
  r << v.real(), v.imag();
  return r;
}

inline double urand(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double nrand(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

// FNV-1a, used to derive independent deterministic seeds per named check.
inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t base, std::string_view tag) {
  std::uint64_t h = fnv1a(tag);
  return base ^ (h + 0x9e3779b97f4a7c15ull + (base << 6) + (base >> 2));
}

// Derivative at 0 of a curve of vectors: central differences at h and h/2
// with one Richardson step. The step is tuned for smooth analytic data,
// giving roughly 1e-11 absolute error at unit scale.
inline constexpr double kFdStep = 1e-5;

inline Vec fd_deriv(const std::function<Vec(double)>& f, double h = kFdStep) {
  Vec a = f(h);
  Vec b = f(-h);
  Vec c = f(h / 2);
  Vec d = f(-h / 2);
  Vec d1 = (a - b) / (2 * h);
  Vec d2 = (c - d) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace hgt
