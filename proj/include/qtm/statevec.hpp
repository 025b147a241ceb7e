// statevec.hpp
// Dense complex state vector of the N-spin network, unitary application,
// inner products, partial trace and Bloch-vector extraction.
//
// Basis convention: product states |j k ... l> are ordered lexicographically
// with the Turing head (spin 0) as the most significant bit; tape spins
// follow in index order.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtm::statevec {

using cxd = std::complex<double>;

inline constexpr int max_spins = 16;
inline constexpr double norm_tolerance = 1e-9;      // drift beyond this is a hard error
inline constexpr double hermiticity_tolerance = 1e-12;
inline constexpr double unitarity_tolerance = 1e-12;

/// Single-spin Bloch vector (expectation values of the three transition
/// operators). Unit length iff the spin is in a pure state.
struct BlochVector {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;

  double norm() const { return std::sqrt(l1 * l1 + l2 * l2 + l3 * l3); }
};

/// Reduced 2x2 density operator of one spin. Validated on construction:
/// Hermitian, unit trace, positive semidefinite (up to 1e-12).
class DensityMatrix {
 public:
  static constexpr int dim = 2;

  explicit DensityMatrix(const std::array<cxd, 4>& entries) : e_(entries) {
    const cxd e00 = e_[0], e01 = e_[1], e10 = e_[2], e11 = e_[3];
    if (std::abs(e01 - std::conj(e10)) > hermiticity_tolerance ||
        std::abs(e00.imag()) > hermiticity_tolerance ||
        std::abs(e11.imag()) > hermiticity_tolerance)
      throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(e00.real() + e11.real() - 1.0) > hermiticity_tolerance)
      throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond 1e-12");
    const double mean = 0.5 * (e00.real() + e11.real());
    const double disc = 0.25 * (e00.real() - e11.real()) * (e00.real() - e11.real()) +
                        std::norm(e01);
    if (mean - std::sqrt(disc) < -hermiticity_tolerance)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond 1e-12");
  }

  cxd operator()(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }

  /// Tr(rho^2); 1 for a pure spin, 1/2 for the maximally mixed one.
  double purity() const {
    double p = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) p += std::real((*this)(i, j) * (*this)(j, i));
    return p;
  }

 private:
  std::array<cxd, 4> e_;  // row-major
};

/// Normalized amplitude vector over the 2^N product basis.
class NetworkState {
 public:
  NetworkState(int num_spins, std::vector<cxd> amplitudes)
      : num_spins_(num_spins), amp_(std::move(amplitudes)) {
    if (num_spins < 2 || num_spins > max_spins)
      throw std::invalid_argument("NetworkState: num_spins must be in [2, 16]");
    if (amp_.size() != (std::size_t{1} << num_spins))
      throw std::invalid_argument("NetworkState: amplitude vector length must be 2^num_spins");
    const double n = norm();
    if (std::abs(n - 1.0) > norm_tolerance)
      throw std::invalid_argument("NetworkState: norm " + std::to_string(n) +
                                  " drifted beyond tolerance");
  }

  static NetworkState basis_state(int num_spins, std::size_t index) {
    std::vector<cxd> amp(std::size_t{1} << num_spins, cxd{0.0, 0.0});
    amp.at(index) = cxd{1.0, 0.0};
    return NetworkState(num_spins, std::move(amp));
  }

  int num_spins() const { return num_spins_; }
  std::size_t dim() const { return amp_.size(); }
  const std::vector<cxd>& amplitudes() const { return amp_; }
  const cxd& operator[](std::size_t i) const { return amp_[i]; }

  double norm() const {
    double s = 0.0;
    for (const cxd& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Bit position (from the least significant end) of a spin index.
  int bit_of(int spin) const { return num_spins_ - 1 - spin; }

 private:
  int num_spins_;
  std::vector<cxd> amp_;
};

enum class TapeSpin { zero, one, plus, minus };

inline TapeSpin parse_tape_spin(char c) {
  switch (c) {
    case '0': return TapeSpin::zero;
    case '1': return TapeSpin::one;
    case '+': return TapeSpin::plus;
    case '-': return TapeSpin::minus;
  }
  throw std::invalid_argument(std::string("tape spin must be one of 0, 1, +, -; got '") + c +
                              "'");
}

/// Product state: head prepared as cos(phi0/2)|0> - i sin(phi0/2)|1>,
/// one tape factor per entry of `tape`.
inline NetworkState make_product_state(double head_angle, std::span<const TapeSpin> tape) {
  if (!std::isfinite(head_angle))
    throw std::invalid_argument("make_product_state: non-finite head angle");
  if (tape.empty() || tape.size() > static_cast<std::size_t>(max_spins - 1))
    throw std::invalid_argument("make_product_state: need 1..15 tape spins");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<cxd> amp = {cxd{std::cos(head_angle / 2.0), 0.0},
                          cxd{0.0, -std::sin(head_angle / 2.0)}};
  for (TapeSpin t : tape) {
    std::array<cxd, 2> f{};
    switch (t) {
      case TapeSpin::zero: f = {cxd{1.0, 0.0}, cxd{0.0, 0.0}}; break;
      case TapeSpin::one: f = {cxd{0.0, 0.0}, cxd{1.0, 0.0}}; break;
      case TapeSpin::plus: f = {cxd{inv_sqrt2, 0.0}, cxd{inv_sqrt2, 0.0}}; break;
      case TapeSpin::minus: f = {cxd{inv_sqrt2, 0.0}, cxd{-inv_sqrt2, 0.0}}; break;
    }
    std::vector<cxd> next(amp.size() * 2);
    for (std::size_t i = 0; i < amp.size(); ++i) {
      next[2 * i] = amp[i] * f[0];
      next[2 * i + 1] = amp[i] * f[1];
    }
    amp = std::move(next);
  }
  return NetworkState(static_cast<int>(tape.size()) + 1, std::move(amp));
}

inline NetworkState make_product_state(double head_angle, std::initializer_list<TapeSpin> tape) {
  return make_product_state(head_angle, std::span<const TapeSpin>(tape.begin(), tape.size()));
}

namespace detail {

template <class Mat>
void require_unitary(const Mat& gate) {
  const int d = gate.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      cxd s{0.0, 0.0};
      for (int k = 0; k < d; ++k) s += std::conj(gate(k, i)) * gate(k, j);
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(s - target));
    }
  }
  if (worst > unitarity_tolerance)
    throw std::invalid_argument("apply_gate: matrix is not unitary (max |U^H U - 1| = " +
                                std::to_string(worst) + ")");
}

}  // namespace detail

/// Apply a unitary 2x2 matrix to one spin. `Mat` needs dim() and (i, j)
/// element access; row/column index 1 corresponds to the |1> level.
template <class Mat>
NetworkState apply_gate(const NetworkState& state, const Mat& gate, int target) {
  if (gate.dim() != 2) throw std::invalid_argument("apply_gate: expected a 2x2 gate");
  if (target < 0 || target >= state.num_spins())
    throw std::invalid_argument("apply_gate: target spin out of range");
  detail::require_unitary(gate);
  const std::size_t bit = std::size_t{1} << state.bit_of(target);
  std::vector<cxd> amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & bit) continue;
    const cxd a0 = amp[i], a1 = amp[i | bit];
    amp[i] = gate(0, 0) * a0 + gate(0, 1) * a1;
    amp[i | bit] = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
  return NetworkState(state.num_spins(), std::move(amp));
}

/// Apply a unitary 4x4 matrix to an ordered spin pair; `first` supplies the
/// more significant bit of the gate's 2-bit index.
template <class Mat>
NetworkState apply_gate(const NetworkState& state, const Mat& gate, int first, int second) {
  if (gate.dim() != 4) throw std::invalid_argument("apply_gate: expected a 4x4 gate");
  if (first < 0 || first >= state.num_spins() || second < 0 || second >= state.num_spins())
    throw std::invalid_argument("apply_gate: target spin out of range");
  if (first == second) throw std::invalid_argument("apply_gate: target spins must be distinct");
  detail::require_unitary(gate);
  const std::size_t bit_hi = std::size_t{1} << state.bit_of(first);
  const std::size_t bit_lo = std::size_t{1} << state.bit_of(second);
  std::vector<cxd> amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & (bit_hi | bit_lo)) continue;
    const std::array<std::size_t, 4> idx = {i, i | bit_lo, i | bit_hi, i | bit_hi | bit_lo};
    std::array<cxd, 4> in{};
    for (int k = 0; k < 4; ++k) in[static_cast<std::size_t>(k)] = amp[idx[static_cast<std::size_t>(k)]];
    for (int r = 0; r < 4; ++r) {
      cxd s{0.0, 0.0};
      for (int c = 0; c < 4; ++c) s += gate(r, c) * in[static_cast<std::size_t>(c)];
      amp[idx[static_cast<std::size_t>(r)]] = s;
    }
  }
  return NetworkState(state.num_spins(), std::move(amp));
}

/// <a|b>.
inline cxd inner_product(const NetworkState& a, const NetworkState& b) {
  if (a.num_spins() != b.num_spins())
    throw std::invalid_argument("inner_product: dimension mismatch");
  cxd s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Trace out every spin except `keep`.
inline DensityMatrix partial_trace(const NetworkState& state, int keep) {
  if (keep < 0 || keep >= state.num_spins())
    throw std::invalid_argument("partial_trace: spin index out of range");
  const std::size_t bit = std::size_t{1} << state.bit_of(keep);
  std::array<cxd, 4> rho{};
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (i & bit) continue;
    for (int p = 0; p < 2; ++p) {
      for (int q = 0; q < 2; ++q) {
        rho[static_cast<std::size_t>(2 * p + q)] +=
            state[p ? (i | bit) : i] * std::conj(state[q ? (i | bit) : i]);
      }
    }
  }
  return DensityMatrix(rho);
}

/// Bloch vector of a single-spin density operator. Sign convention follows
/// the transition operators: the third component of |0><0| is -1.
inline BlochVector bloch_vector(const DensityMatrix& dm) {
  return BlochVector{2.0 * dm(0, 1).real(), 2.0 * dm(0, 1).imag(),
                     dm(1, 1).real() - dm(0, 0).real()};
}

inline BlochVector bloch_of(const NetworkState& state, int spin) {
  return bloch_vector(partial_trace(state, spin));
}

}  // namespace qtm::statevec
