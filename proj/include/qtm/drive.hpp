// drive.hpp
// Angle sequences driving the Turing head: Fibonacci (chaotic), perturbed
// Fibonacci, constant and arithmetic (regular). Angles are carried in exact
// rational-multiple-of-pi form whenever possible so that periodicity
// questions can be settled in integer arithmetic.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qtm::drive {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle into [0, 2*pi).
inline double reduce_angle(double a) {
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

// F(92) is the largest Fibonacci number representable in int64_t.
inline constexpr int max_fib_index = 92;

/// Fibonacci numbers by integer recurrence, F(0) = 0, F(1) = 1.
/// Never computed through the real closed form: powers of the golden ratio
/// lose integer exactness long before the 64-bit range ends.
inline std::int64_t fib_number(int m) {
  if (m < 0) throw std::out_of_range("fib_number: negative index");
  if (m > max_fib_index)
    throw std::out_of_range("fib_number: index " + std::to_string(m) +
                            " exceeds the 64-bit range (max 92)");
  std::int64_t a = 0, b = 1;
  for (int i = 0; i < m; ++i) {
    std::int64_t next = a + b;
    a = b;
    b = next;
  }
  return a;
}

/// F(m) mod `modulus`, valid for any m >= 0 (no overflow for modulus < 2^62).
inline std::int64_t fib_mod(std::int64_t m, std::int64_t modulus) {
  if (m < 0) throw std::out_of_range("fib_mod: negative index");
  if (modulus <= 0) throw std::invalid_argument("fib_mod: modulus must be positive");
  std::int64_t a = 0, b = 1 % modulus;
  for (std::int64_t i = 0; i < m; ++i) {
    std::int64_t next = (a + b) % modulus;
    a = b;
    b = next;
  }
  return a;
}

namespace detail {

// The additive recurrence amplifies every rounding by F(m) (its Lyapunov
// growth), so the floating generator runs in 128-bit precision internally
// and emits doubles: the emitted sequence then both satisfies the
// recurrence step-by-step at double rounding and tracks the true values
// until F(m) dwarfs the 128-bit epsilon.
using quad = __float128;

inline const quad quad_two_pi =
    (static_cast<quad>(3.14159265358979311600e+00) +
     static_cast<quad>(1.22464679914735317722e-16)) * 2;

inline quad quad_reduce(quad x) {
  while (x >= quad_two_pi) x -= quad_two_pi;
  while (x < 0) x += quad_two_pi;
  return x;
}

/// x_1 .. x_count of x_{m+1} = x_m + x_{m-1} (mod 2*pi) from seeds
/// (x_0, x_1), reduced into [0, 2*pi) on emission.
inline std::vector<double> quad_fib_sequence(double seed0, double seed1, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  quad prev = quad_reduce(static_cast<quad>(seed0));
  quad cur = quad_reduce(static_cast<quad>(seed1));
  for (int m = 1; m <= count; ++m) {
    out.push_back(reduce_angle(static_cast<double>(cur)));
    const quad next = quad_reduce(prev + cur);
    prev = cur;
    cur = next;
  }
  return out;
}

}  // namespace detail

/// An angle, optionally exact. The exact form (p, q) means (p/q)*pi with
/// gcd(p, q) = 1, q >= 1 and 0 <= p < 2q, i.e. the angle already reduced
/// into [0, 2*pi). `approx` always holds the radian value.
struct Angle {
  std::optional<std::pair<std::int64_t, std::int64_t>> exact;
  double approx = 0.0;

  bool is_exact() const { return exact.has_value(); }

  static Angle from_radians(double radians) {
    if (!std::isfinite(radians)) throw std::invalid_argument("Angle: non-finite radians");
    return Angle{std::nullopt, reduce_angle(radians)};
  }

  static Angle from_pi_fraction(std::int64_t p, std::int64_t q) {
    if (q <= 0) throw std::invalid_argument("Angle: denominator must be positive");
    std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) {
      p /= g;
      q /= g;
    }
    p %= 2 * q;
    if (p < 0) p += 2 * q;
    if (p == 0) q = 1;
    double approx = static_cast<double>(p) * std::numbers::pi / static_cast<double>(q);
    return Angle{std::make_pair(p, q), approx};
  }

  /// Accepts "p/q pi", "p pi", "pi", or a decimal radian value.
  static Angle parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("Angle: empty string");
    if (s.size() >= 2 && (s.substr(s.size() - 2) == "pi" || s.substr(s.size() - 2) == "PI")) {
      std::string_view head = trim(s.substr(0, s.size() - 2));
      if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
      if (head.empty()) return from_pi_fraction(1, 1);
      std::int64_t p = 0, q = 1;
      auto slash = head.find('/');
      std::string num(trim(slash == std::string_view::npos ? head : head.substr(0, slash)));
      auto rp = std::from_chars(num.data(), num.data() + num.size(), p);
      if (rp.ec != std::errc{} || rp.ptr != num.data() + num.size())
        throw std::invalid_argument("Angle: bad numerator in '" + std::string(text) + "'");
      if (slash != std::string_view::npos) {
        std::string den(trim(head.substr(slash + 1)));
        auto rq = std::from_chars(den.data(), den.data() + den.size(), q);
        if (rq.ec != std::errc{} || rq.ptr != den.data() + den.size())
          throw std::invalid_argument("Angle: bad denominator in '" + std::string(text) + "'");
      }
      return from_pi_fraction(p, q);
    }
    std::string buf(s);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size())
      throw std::invalid_argument("Angle: cannot parse '" + std::string(text) + "'");
    return from_radians(v);
  }

  /// Serialized as "p/q pi" when exact, decimal radians otherwise.
  std::string str() const {
    if (exact) {
      return std::to_string(exact->first) + "/" + std::to_string(exact->second) + " pi";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", approx);
    return buf;
  }
};

enum class Rule { fibonacci, fibonacci_perturbed, constant, arithmetic };

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::fibonacci: return "fibonacci";
    case Rule::fibonacci_perturbed: return "fibonacci_perturbed";
    case Rule::constant: return "constant";
    case Rule::arithmetic: return "arithmetic";
  }
  throw std::invalid_argument("rule_name: unknown rule");
}

inline Rule parse_rule(std::string_view s) {
  if (s == "fibonacci") return Rule::fibonacci;
  if (s == "fibonacci_perturbed") return Rule::fibonacci_perturbed;
  if (s == "constant") return Rule::constant;
  if (s == "arithmetic") return Rule::arithmetic;
  throw std::invalid_argument("unknown drive rule '" + std::string(s) + "'");
}

/// alpha_1 .. alpha_count of the Fibonacci sequence alpha_{m+1} = alpha_m +
/// alpha_{m-1} (mod 2*pi), alpha_0 = 0. In exact mode the reduction happens
/// on the integer numerator modulo 2q, which is bit-exact for any m.
inline std::vector<Angle> fibonacci_angles(const Angle& alpha1, int count) {
  if (count < 1) throw std::invalid_argument("fibonacci_angles: count must be >= 1");
  std::vector<Angle> out;
  out.reserve(static_cast<std::size_t>(count));
  if (alpha1.is_exact()) {
    auto [p, q] = *alpha1.exact;
    const std::int64_t mod = 2 * q;
    std::int64_t prev = 0, cur = p % mod;  // numerators of alpha_0, alpha_1 over q
    for (int m = 1; m <= count; ++m) {
      out.push_back(Angle::from_pi_fraction(cur, q));
      std::int64_t next = (prev + cur) % mod;
      prev = cur;
      cur = next;
    }
  } else {
    for (double a : detail::quad_fib_sequence(0.0, alpha1.approx, count))
      out.push_back(Angle::from_radians(a));
  }
  return out;
}

/// Perturbed Fibonacci sequence: the recurrence seeded with
/// (alpha'_0, alpha'_1) = (delta, alpha_1), assembled as alpha'_m =
/// alpha_m + delta*F(m-1) (mod 2*pi) on top of the shared unperturbed
/// angles. Returns alpha'_1 .. alpha'_count.
inline std::vector<double> perturbed_angles(const Angle& alpha1, double delta, int count) {
  if (count < 1) throw std::invalid_argument("perturbed_angles: count must be >= 1");
  if (!std::isfinite(delta)) throw std::invalid_argument("perturbed_angles: non-finite delta");
  const std::vector<Angle> plain = fibonacci_angles(alpha1, count);
  // d_m = delta * F(m-1) mod 2*pi: the same recurrence from seeds (delta, 0).
  const std::vector<double> dev = detail::quad_fib_sequence(delta, 0.0, count);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int m = 1; m <= count; ++m)
    out.push_back(reduce_angle(plain[static_cast<std::size_t>(m - 1)].approx +
                               dev[static_cast<std::size_t>(m - 1)]));
  return out;
}

/// delta * F(m), the Fibonacci-amplified perturbation after m pair-steps.
inline double delta_fib(double delta, int m) {
  return delta * static_cast<double>(fib_number(m));
}

/// Regular (zero-Lyapunov) sequences. The perturbed variant is the defining
/// recurrence seeded with (delta, alpha1): for the arithmetic rule
/// alpha_{m+1} = 2*alpha_m - alpha_{m-1} that gives alpha'_m =
/// m*alpha1 - (m-1)*delta; the constant rule never references the seed, so
/// its sequence is independent of delta (the perturbation only enters
/// through the initial head state).
inline std::vector<double> regular_angles(Rule rule, const Angle& alpha1, double delta,
                                          int count) {
  if (count < 1) throw std::invalid_argument("regular_angles: count must be >= 1");
  if (rule != Rule::constant && rule != Rule::arithmetic)
    throw std::invalid_argument("regular_angles: rule must be constant or arithmetic");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  const double a1 = reduce_angle(alpha1.approx);
  if (rule == Rule::constant) {
    out.assign(static_cast<std::size_t>(count), a1);
  } else {
    for (int m = 1; m <= count; ++m) {
      out.push_back(reduce_angle(static_cast<double>(m) * alpha1.approx -
                                 static_cast<double>(m - 1) * delta));
    }
  }
  return out;
}

/// A drive: rule plus its parameters. `delta` is the perturbation seed
/// (0 if unused). Two generations from the same exact-angle drive are
/// bit-identical.
struct DriveSequence {
  Rule rule = Rule::fibonacci;
  Angle alpha1;
  double delta = 0.0;

  /// alpha_1 .. alpha_count in [0, 2*pi).
  std::vector<double> angles(int count) const {
    if (count < 0) throw std::invalid_argument("DriveSequence::angles: negative count");
    if (count == 0) return {};
    switch (rule) {
      case Rule::fibonacci: {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        for (const Angle& a : fibonacci_angles(alpha1, count)) out.push_back(a.approx);
        return out;
      }
      case Rule::fibonacci_perturbed:
        return perturbed_angles(alpha1, delta, count);
      case Rule::constant:
      case Rule::arithmetic:
        return regular_angles(rule, alpha1, delta, count);
    }
    throw std::invalid_argument("DriveSequence::angles: unknown rule");
  }

  std::string descriptor() const {
    std::string d(rule_name(rule));
    d += " alpha1=" + alpha1.str();
    if (delta != 0.0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", delta);
      d += " delta=";
      d += buf;
    }
    return d;
  }
};

}  // namespace qtm::drive
