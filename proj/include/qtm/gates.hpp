// gates.hpp
// The machine's unitaries (transition operators, head rotation, QCNOT) and
// the alternating step protocol: odd steps rotate the head, even steps apply
// the QCNOT between head and the first tape spin.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qtm/drive.hpp"
#include "qtm/statevec.hpp"

namespace qtm::gates {

using statevec::cxd;

/// Unitary 2x2 or 4x4 matrix, validated on construction.
class GateMatrix {
 public:
  GateMatrix(int dim, std::array<cxd, 16> entries) : dim_(dim), a_(entries) {
    if (dim != 2 && dim != 4) throw std::invalid_argument("GateMatrix: dim must be 2 or 4");
    statevec::detail::require_unitary(*this);
  }

  int dim() const { return dim_; }
  cxd operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }

 private:
  int dim_;
  std::array<cxd, 16> a_;
};

/// The SU(2) generators over transition operators: kind 1 flips the levels,
/// kind 2 is the imaginary combination, kind 3 = |1><1| - |0><0|, kind 0 is
/// the identity. All are Hermitian and square to the identity.
inline GateMatrix lambda_operator(int kind) {
  const cxd o{1.0, 0.0}, z{0.0, 0.0}, i{0.0, 1.0};
  switch (kind) {
    case 0: return GateMatrix(2, {o, z, z, o});
    case 1: return GateMatrix(2, {z, o, o, z});
    case 2: return GateMatrix(2, {z, i, -i, z});
    case 3: return GateMatrix(2, {-o, z, z, o});
  }
  throw std::invalid_argument("lambda_operator: kind must be 0, 1, 2 or 3");
}

/// Head rotation: cos(alpha/2) 1 - i sin(alpha/2) lambda_1. Rotations about
/// the same axis compose additively.
inline GateMatrix head_rotation(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("head_rotation: non-finite angle");
  const cxd c{std::cos(alpha / 2.0), 0.0};
  const cxd ms{0.0, -std::sin(alpha / 2.0)};
  return GateMatrix(2, {c, ms, ms, c});
}

/// QCNOT on (head, tape): flips the tape when the head is |0>, acts as the
/// identity when it is |1>. Hermitian and unitary, hence self-inverse.
inline GateMatrix qcnot() {
  const cxd o{1.0, 0.0}, z{0.0, 0.0};
  return GateMatrix(4, {z, o, z, z,
                        o, z, z, z,
                        z, z, o, z,
                        z, z, z, o});
}

/// The sequence of network states |psi_0>, |psi_1>, ... produced by a run.
struct Trajectory {
  std::vector<statevec::NetworkState> steps;  // index n = step number
  drive::DriveSequence drive_used;

  int total_steps() const { return static_cast<int>(steps.size()) - 1; }

  const statevec::NetworkState& at(int n) const {
    if (n < 0 || n >= static_cast<int>(steps.size()))
      throw std::out_of_range("Trajectory: step out of range");
    return steps[static_cast<std::size_t>(n)];
  }
};

/// Run the machine: step n = 2m-1 applies head_rotation(alpha_m), step
/// n = 2m applies the QCNOT. Step 0 is the initial state. All angles are
/// drawn from the drive up front, so an unsatisfiable drive fails before
/// any state is produced.
inline Trajectory run(const statevec::NetworkState& initial, const drive::DriveSequence& drive,
                      int total_steps) {
  if (total_steps < 0) throw std::invalid_argument("run: total_steps must be >= 0");
  const std::vector<double> alphas = drive.angles((total_steps + 1) / 2);
  Trajectory traj{{initial}, drive};
  traj.steps.reserve(static_cast<std::size_t>(total_steps) + 1);
  const GateMatrix swap_gate = qcnot();
  for (int n = 1; n <= total_steps; ++n) {
    const statevec::NetworkState& prev = traj.steps.back();
    if (n % 2 == 1) {
      const double alpha = alphas[static_cast<std::size_t>((n - 1) / 2)];
      traj.steps.push_back(statevec::apply_gate(prev, head_rotation(alpha), 0));
    } else {
      traj.steps.push_back(statevec::apply_gate(prev, swap_gate, 0, 1));
    }
  }
  return traj;
}

}  // namespace qtm::gates
