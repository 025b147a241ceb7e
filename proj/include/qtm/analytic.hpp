// analytic.hpp
// Closed forms for everything the simulator produces: cumulative rotation
// angles of the two entanglement-free primitives, the superposed head
// trajectory, periodic-orbit congruences, stability multipliers, the tape
// polarization, and the 13 closed-form rows of the head-distance table.
//
// Growth identities are always rewritten through integer Fibonacci numbers
// (reduced modulo 2q for exact angles, modulo 2*pi otherwise); powers of the
// golden ratio never appear in an evaluation path.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

#include "qtm/drive.hpp"

namespace qtm::analytic {

using drive::Angle;
using drive::reduce_angle;

/// Cumulative rotation angles after m pair-steps (n = 2m): the plain sum
/// c_plus, the alternating sum c_minus, and the parity-split partial sums
/// a_m (indices m, m-2, ...) and b_m (indices m-1, m-3, ...). a_m + b_m
/// equals c_plus modulo 2*pi.
struct CumulativeAngles {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double a_m = 0.0;
  double b_m = 0.0;
};

/// Sum of alpha_1 .. alpha_m, reduced mod 2*pi.
inline double cumulative_plus(int m, std::span<const double> alphas) {
  if (m < 0) throw std::invalid_argument("cumulative_plus: m must be >= 0");
  if (alphas.size() < static_cast<std::size_t>(m))
    throw std::invalid_argument("cumulative_plus: need alpha_1..alpha_m");
  double s = 0.0;
  for (int j = 1; j <= m; ++j) s = reduce_angle(s + alphas[static_cast<std::size_t>(j - 1)]);
  return s;
}

/// Closed form of the minus-primitive cumulative angle at step n:
/// (-1)^(m-1) * sum_j (-1)^j alpha_j for n = 2m, with the opposite overall
/// sign at n = 2m-1.
inline double cumulative_minus(int n, std::span<const double> alphas) {
  if (n < 0) throw std::invalid_argument("cumulative_minus: n must be >= 0");
  if (n == 0) return 0.0;
  const int m = (n + 1) / 2;
  if (alphas.size() < static_cast<std::size_t>(m))
    throw std::invalid_argument("cumulative_minus: need alpha_1..alpha_m");
  double s = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double a = alphas[static_cast<std::size_t>(j - 1)];
    s = reduce_angle(j % 2 == 0 ? s + a : s - a);
  }
  const bool negate = (n % 2 == 0) ? (m % 2 == 0) : (m % 2 == 1);
  return negate ? reduce_angle(-s) : s;
}

/// Same quantity through the step recursion (odd step adds alpha_m, the
/// following even step flips the sign). Kept as an independent route for
/// cross-checking the closed form.
inline double cumulative_minus_by_recursion(int n, std::span<const double> alphas) {
  if (n < 0) throw std::invalid_argument("cumulative_minus_by_recursion: n must be >= 0");
  if (alphas.size() < static_cast<std::size_t>((n + 1) / 2))
    throw std::invalid_argument("cumulative_minus_by_recursion: not enough angles");
  double c = 0.0;
  for (int step = 1; step <= n; ++step) {
    if (step % 2 == 1)
      c = reduce_angle(c + alphas[static_cast<std::size_t>((step - 1) / 2)]);
    else
      c = reduce_angle(-c);
  }
  return c;
}

inline CumulativeAngles cumulative_angles(int m, std::span<const double> alphas) {
  if (m < 0) throw std::invalid_argument("cumulative_angles: m must be >= 0");
  if (alphas.size() < static_cast<std::size_t>(m))
    throw std::invalid_argument("cumulative_angles: need alpha_1..alpha_m");
  CumulativeAngles c;
  c.c_plus = cumulative_plus(m, alphas);
  c.c_minus = cumulative_minus(2 * m, alphas);
  double a = 0.0, b = 0.0;
  for (int j = m; j >= 1; j -= 2) a = reduce_angle(a + alphas[static_cast<std::size_t>(j - 1)]);
  for (int j = m - 1; j >= 1; j -= 2) b = reduce_angle(b + alphas[static_cast<std::size_t>(j - 1)]);
  c.a_m = a;
  c.b_m = b;
  return c;
}

/// Cumulative angle of one primitive at step n for initial head angle phi0.
/// The plus tape eigenstate leaves the head angle alone on even steps; the
/// minus one reflects it.
inline double primitive_cumulative(int n, char sign, double phi0, std::span<const double> alphas) {
  if (n < 0) throw std::invalid_argument("primitive_cumulative: n must be >= 0");
  if (sign != '+' && sign != '-') throw std::invalid_argument("primitive_cumulative: bad sign");
  if (alphas.size() < static_cast<std::size_t>((n + 1) / 2))
    throw std::invalid_argument("primitive_cumulative: not enough angles");
  double c = reduce_angle(phi0);
  for (int step = 1; step <= n; ++step) {
    if (step % 2 == 1)
      c = reduce_angle(c + alphas[static_cast<std::size_t>((step - 1) / 2)]);
    else if (sign == '-')
      c = reduce_angle(-c);
  }
  return c;
}

/// Head Bloch components (l2, l3) of a primitive started from head angle 0:
/// (sin C_n, -cos C_n) with the cumulative angle of the given sign.
inline std::pair<double, double> primitive_bloch(int n, char sign,
                                                 std::span<const double> alphas) {
  double c;
  if (sign == '+')
    c = cumulative_plus((n + 1) / 2, alphas);
  else if (sign == '-')
    c = cumulative_minus(n, alphas);
  else
    throw std::invalid_argument("primitive_bloch: sign must be '+' or '-'");
  return {std::sin(c), -std::cos(c)};
}

namespace detail {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t mod) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % mod);
}

// alpha1 * (F(k) - offset) reduced mod 2*pi, on the integer numerator.
// Exact angles only.
inline double fib_multiple_angle(const Angle& alpha1, std::int64_t k, std::int64_t offset) {
  const auto [p, q] = *alpha1.exact;
  const std::int64_t mod = 2 * q;
  std::int64_t f = (drive::fib_mod(k, mod) - offset) % mod;
  if (f < 0) f += mod;
  const std::int64_t num = mulmod(p, f, mod);
  return static_cast<double>(num) * std::numbers::pi / static_cast<double>(q);
}

}  // namespace detail

/// Parity-split cumulative angles (a_m, b_m) of the superposed trajectory
/// started from head |0> and tape |0>, computed through the Fibonacci
/// identities a_m = alpha1 (F(m+1) - [m even]), b_m = alpha1 (F(m) - [m odd]).
inline std::pair<double, double> superposed_angles(int m, const Angle& alpha1) {
  if (m < 1) throw std::invalid_argument("superposed_angles: m must be >= 1");
  if (alpha1.is_exact()) {
    const double a = detail::fib_multiple_angle(alpha1, m + 1, m % 2 == 0 ? 1 : 0);
    const double b = detail::fib_multiple_angle(alpha1, m, m % 2 == 1 ? 1 : 0);
    return {a, b};
  }
  // Approximate mode: parity-split partial sums of the same generated
  // angles a simulation consumes, every intermediate reduced.
  const std::vector<Angle> alphas = drive::fibonacci_angles(alpha1, m);
  double a = 0.0, b = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double v = alphas[static_cast<std::size_t>(j - 1)].approx;
    if ((m - j) % 2 == 0)
      a = reduce_angle(a + v);
    else
      b = reduce_angle(b + v);
  }
  return {a, b};
}

enum class StepParity { even, odd };

/// Head Bloch components (l2, l3) of the superposed trajectory from
/// |0>|0> at step n = 2m (even) or n = 2m-1 (odd).
inline std::pair<double, double> head_bloch_superposed(int m, StepParity parity,
                                                       const Angle& alpha1) {
  const auto [a, b] = superposed_angles(m, alpha1);
  if (parity == StepParity::even)
    return {std::cos(a) * std::sin(b), -std::cos(a) * std::cos(b)};
  return {std::cos(b) * std::sin(a), -std::cos(b) * std::cos(a)};
}

/// Periodicity test for the head orbit of period n = 2m, for an exact angle
/// alpha1 = (p/q) pi. Three congruences must hold modulo 2q:
///   p (F(m+2) - 1)        = 0   (plus-primitive cumulative angle)
///   p (F(m-1) - (-1)^m)   = 0   (minus-primitive cumulative angle)
///   p (F(m+1) - 1)        = 0   (the drive itself repeats)
/// Floating-point periodicity is ill-posed, so a non-exact angle is rejected.
inline bool periodic_orbit_check(const Angle& alpha1, std::int64_t m) {
  if (!alpha1.is_exact())
    throw std::invalid_argument("periodic_orbit_check: requires an exact rational angle");
  if (m < 1) throw std::invalid_argument("periodic_orbit_check: m must be >= 1");
  const auto [p, q] = *alpha1.exact;
  const std::int64_t mod = 2 * q;
  std::int64_t fm_prev = drive::fib_mod(m - 1, mod);
  std::int64_t fm = drive::fib_mod(m, mod);
  std::int64_t fm1 = (fm_prev + fm) % mod;
  std::int64_t fm2 = (fm + fm1) % mod;
  auto congruent_zero = [&](std::int64_t f, std::int64_t offset) {
    std::int64_t d = (f - offset) % mod;
    if (d < 0) d += mod;
    return detail::mulmod(p, d, mod) == 0;
  };
  const std::int64_t sign_m = (m % 2 == 0) ? 1 : -1;
  return congruent_zero(fm2, 1) && congruent_zero(fm_prev, sign_m) && congruent_zero(fm1, 1);
}

/// Smallest m <= m_max whose period-2m orbit closes, or nullopt.
inline std::optional<std::int64_t> find_periodic_orbit(const Angle& alpha1,
                                                       std::int64_t m_max) {
  if (!alpha1.is_exact())
    throw std::invalid_argument("find_periodic_orbit: requires an exact rational angle");
  if (m_max < 1) throw std::invalid_argument("find_periodic_orbit: m_max must be >= 1");
  const auto [p, q] = *alpha1.exact;
  const std::int64_t mod = 2 * q;
  auto congruent_zero = [&](std::int64_t f, std::int64_t offset) {
    std::int64_t d = (f - offset) % mod;
    if (d < 0) d += mod;
    return detail::mulmod(p, d, mod) == 0;
  };
  // Rolling window F(m-1), F(m), F(m+1), F(m+2) mod 2q.
  std::int64_t f0 = 0, f1 = 1 % mod, f2 = 1 % mod, f3 = 2 % mod;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const std::int64_t sign_m = (m % 2 == 0) ? 1 : -1;
    if (congruent_zero(f3, 1) && congruent_zero(f0, sign_m) && congruent_zero(f2, 1)) return m;
    f0 = f1;
    f1 = f2;
    f2 = f3;
    f3 = (f1 + f2) % mod;
  }
  return std::nullopt;
}

/// Tape polarization can only return to its start when the period is a
/// multiple of 4; period 2m with odd m admits no periodic orbit.
constexpr bool tape_period_admissible(std::int64_t m) { return m % 2 == 0; }

/// Stability multipliers of a period-2m head orbit under a perturbation
/// delta of the initial phase. m11 maps the transverse deviation across one
/// period, m22 the longitudinal one; their delta -> 0 limits are F(m-1)
/// and 1.
struct StabilityReport {
  int m = 0;
  double delta = 0.0;
  double m11 = 0.0;
  double m22 = 0.0;
  std::int64_t m11_limit = 0;
  double tape_m = std::numeric_limits<double>::quiet_NaN();
  double tape_m_limit = std::numeric_limits<double>::quiet_NaN();
};

inline StabilityReport head_stability(int m, double delta) {
  if (m < 2) throw std::invalid_argument("head_stability: m must be >= 2");
  if (delta == 0.0)
    throw std::invalid_argument("head_stability: delta = 0 divides by sin(delta)");
  if (!(std::abs(delta) < 0.1))
    throw std::invalid_argument("head_stability: |delta| must be < 0.1");
  const double dm = drive::delta_fib(delta, m);
  const double dm1 = drive::delta_fib(delta, m - 1);
  StabilityReport r;
  r.m = m;
  r.delta = delta;
  r.m11 = std::cos(dm) * std::sin(dm1) / std::sin(delta);
  r.m22 = std::cos(dm) * std::cos(dm1) / std::cos(delta);
  r.m11_limit = drive::fib_number(m - 1);
  return r;
}

/// Tape deviation multiplier between steps 2 and 2m+2: the finite-delta
/// ratio of the closed-form tape polarization differences, and its
/// delta -> 0 limit F(m+1) sin(alpha_{m+2}) / sin(alpha_1).
inline std::pair<double, double> tape_stability(int m, double delta, const Angle& alpha1) {
  if (m < 1) throw std::invalid_argument("tape_stability: m must be >= 1");
  if (delta == 0.0) throw std::invalid_argument("tape_stability: delta = 0");
  const double a1 = alpha1.approx;
  const double sin_a1 = std::sin(a1);
  if (std::abs(sin_a1) < 1e-12)
    throw std::invalid_argument("tape_stability: sin(alpha1) = 0");
  const double a_m2 = drive::fibonacci_angles(alpha1, m + 2).back().approx;
  const double a_m2_pert = drive::perturbed_angles(alpha1, delta, m + 2).back();
  const double denom = std::cos(a1 + delta) - std::cos(a1);
  if (denom == 0.0) throw std::invalid_argument("tape_stability: degenerate denominator");
  const double numer = std::cos(a_m2_pert) - std::cos(a_m2);
  const double limit = static_cast<double>(drive::fib_number(m + 1)) * std::sin(a_m2) / sin_a1;
  return {numer / denom, limit};
}

/// Head and tape multipliers in one row, as emitted by the stability
/// experiment.
inline StabilityReport stability_report(int m, double delta, const Angle& alpha1) {
  StabilityReport r = head_stability(m, delta);
  const auto [fin, lim] = tape_stability(m, delta, alpha1);
  r.tape_m = fin;
  r.tape_m_limit = lim;
  return r;
}

/// Closed-form tape polarization at step n for the run started from
/// |0>|0> with the initial head phase perturbed by delta (delta = 0 gives
/// the unperturbed run). The transverse tape components vanish identically.
///
/// The branch phases alpha_{[n/2]+1} -+ alpha_1 + delta*F([n/2]) are
/// evaluated through the perturbed sequence itself,
/// alpha'_{[n/2]+1} = alpha_{[n/2]+1} + delta*F([n/2]), so the oracle
/// consumes exactly the angles the simulation is driven by.
inline double tape_lambda3(int n, const Angle& alpha1, double delta) {
  if (n < 0) throw std::invalid_argument("tape_lambda3: n must be >= 0");
  const int mm = n / 2;
  const double a_pert = drive::perturbed_angles(alpha1, delta, mm + 1).back();
  if (n % 4 == 0 || n % 4 == 1) return -std::cos(reduce_angle(a_pert - alpha1.approx));
  return std::cos(a_pert);
}

/// The 13 closed-form rows of the squared head distance between the
/// perturbed and unperturbed runs under the Fibonacci drive, n = 0..12.
inline double table1_d2(int n, double alpha1, double delta) {
  if (n < 0 || n > 12)
    throw std::out_of_range("table1_d2: closed forms exist for n = 0..12 only");
  auto c = [&](double ka, double kd) { return std::cos(ka * alpha1 + kd * delta); };
  switch (n) {
    case 0:
    case 1:
      return 1.0 - c(0, 1);
    case 2:
      return 0.5 + 0.25 * c(2, 2) - 0.5 * c(2, 1) - 0.5 * c(0, 1) + 0.25 * c(2, 0);
    case 3:
    case 4:
      return 0.25 - 0.25 * c(0, 2);
    case 5:
      return 0.5 - 0.25 * c(2, 3) - 0.25 * c(0, 3) + 0.25 * c(2, 2) - 0.25 * c(2, -1) -
             0.25 * c(0, 1) + 0.25 * c(2, 0);
    case 6:
      return 0.5 + 0.25 * c(6, 4) - 0.25 * c(6, 3) - 0.25 * c(0, 3) - 0.25 * c(6, 1) -
             0.25 * c(0, 1) + 0.25 * c(6, 0);
    case 7:
      return 0.5 - 0.25 * c(6, 5) - 0.25 * c(0, 5) + 0.25 * c(6, 4) - 0.25 * c(6, -1) -
             0.25 * c(0, 1) + 0.25 * c(6, 0);
    case 8:
      return 0.5 + 0.25 * c(8, 6) - 0.25 * c(8, 5) - 0.25 * c(0, 5) - 0.25 * c(8, 1) -
             0.25 * c(0, 1) + 0.25 * c(8, 0);
    case 9:
      return 0.5 - 0.25 * c(8, 8) - 0.25 * c(0, 8) + 0.25 * c(8, 6) - 0.25 * c(8, -2) -
             0.25 * c(0, 2) + 0.25 * c(8, 0);
    case 10:
      return 0.5 + 0.25 * c(16, 10) - 0.25 * c(16, 8) - 0.25 * c(0, 8) - 0.25 * c(16, 2) -
             0.25 * c(0, 2) + 0.25 * c(16, 0);
    case 11:
      return 0.5 - 0.25 * c(16, 13) - 0.25 * c(0, 13) + 0.25 * c(16, 10) - 0.25 * c(16, -3) -
             0.25 * c(0, 3) + 0.25 * c(16, 0);
    case 12:
      return 0.5 + 0.25 * c(24, 16) - 0.25 * c(24, 13) - 0.25 * c(0, 13) - 0.25 * c(24, 3) -
             0.25 * c(0, 3) + 0.25 * c(24, 0);
  }
  return 0.0;  // unreachable
}

}  // namespace qtm::analytic
