// Shared test utilities: seeded generators and naive dense-matrix oracles
// kept independent of the library's bit-twiddling paths.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qtm/statevec.hpp"

namespace testutil {

using cxd = std::complex<double>;

inline std::mt19937& rng() {
  static std::mt19937 g(20260809u);
  return g;
}

inline double urand(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::vector<cxd> random_amplitudes(std::size_t dim) {
  std::normal_distribution<double> gauss;
  std::vector<cxd> amp(dim);
  double norm2 = 0.0;
  for (auto& a : amp) {
    a = cxd{gauss(rng()), gauss(rng())};
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amp) a *= inv;
  return amp;
}

inline qtm::statevec::NetworkState random_state(int spins) {
  return qtm::statevec::NetworkState(spins, random_amplitudes(std::size_t{1} << spins));
}

// Dense row-major d x d matrix times vector.
inline std::vector<cxd> matvec(const std::vector<cxd>& mat, const std::vector<cxd>& v) {
  const std::size_t d = v.size();
  std::vector<cxd> out(d, cxd{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i] += mat[i * d + j] * v[j];
  return out;
}

inline std::vector<cxd> kron(const std::vector<cxd>& a, std::size_t da,
                             const std::vector<cxd>& b, std::size_t db) {
  std::vector<cxd> out(da * db * da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
          out[(i * db + k) * da * db + (j * db + l)] = a[i * da + j] * b[k * db + l];
  return out;
}

inline std::vector<cxd> identity2() { return {1.0, 0.0, 0.0, 1.0}; }

inline std::vector<cxd> rotation2(double alpha) {
  const cxd c{std::cos(alpha / 2.0), 0.0};
  const cxd ms{0.0, -std::sin(alpha / 2.0)};
  return {c, ms, ms, c};
}

inline std::vector<cxd> qcnot4() {
  return {0, 1, 0, 0,
          1, 0, 0, 0,
          0, 0, 1, 0,
          0, 0, 0, 1};
}

// One machine step applied by dense matrix algebra on the full 2-spin space.
inline std::vector<cxd> oracle_step(const std::vector<cxd>& psi, int n, double alpha) {
  if (n % 2 == 1) return matvec(kron(rotation2(alpha), 2, identity2(), 2), psi);
  return matvec(qcnot4(), psi);
}

inline double wrap_pm_pi(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  return r - std::numbers::pi;
}

// Distance between two angles on the circle.
inline double circ_dist(double a, double b) { return std::abs(wrap_pm_pi(a - b)); }

}  // namespace testutil
