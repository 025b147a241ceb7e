// metrics.hpp
// Distance diagnostics between a run and its perturbed twin: the squared
// trace distance Tr{(rho - rho')^2} on reduced or total states, the overlap
// between the two evolutions, and per-step distance series.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "qtm/gates.hpp"
#include "qtm/statevec.hpp"

namespace qtm::metrics {

enum class Subsystem { head, tape, total };

inline std::string_view subsystem_name(Subsystem s) {
  switch (s) {
    case Subsystem::head: return "head";
    case Subsystem::tape: return "tape";
    case Subsystem::total: return "total";
  }
  throw std::invalid_argument("subsystem_name: unknown subsystem");
}

inline Subsystem parse_subsystem(std::string_view s) {
  if (s == "head") return Subsystem::head;
  if (s == "tape") return Subsystem::tape;
  if (s == "total") return Subsystem::total;
  throw std::invalid_argument("unknown subsystem '" + std::string(s) + "'");
}

/// Squared distance Tr{(rho - rho')^2} between two single-spin density
/// operators. Bounded by 2 regardless of dimension.
inline double bures_d2(const statevec::DensityMatrix& rho, const statevec::DensityMatrix& rho_prime) {
  double s = 0.0;
  for (int i = 0; i < statevec::DensityMatrix::dim; ++i)
    for (int j = 0; j < statevec::DensityMatrix::dim; ++j)
      s += std::norm(rho(i, j) - rho_prime(i, j));
  return s;
}

/// The same distance between two pure total states, where the trace reduces
/// to 2 (1 - |<psi|psi'>|^2).
inline double bures_d2(const statevec::NetworkState& psi, const statevec::NetworkState& psi_prime) {
  const double overlap = std::norm(statevec::inner_product(psi, psi_prime));
  return std::max(0.0, 2.0 * (1.0 - overlap));
}

/// Overlap between the two evolutions at step n: |<psi'_n|psi_n>|^2. The
/// squared total-state distance equals 2 (1 - O').
inline double overlap_oprime(const gates::Trajectory& traj, const gates::Trajectory& traj_pert,
                             int n) {
  if (n < 0 || n > traj.total_steps() || n > traj_pert.total_steps())
    throw std::out_of_range("overlap_oprime: step out of range");
  return std::norm(statevec::inner_product(traj_pert.at(n), traj.at(n)));
}

/// Per-step squared distance on one subsystem between two runs.
struct DistanceSeries {
  Subsystem subsystem = Subsystem::head;
  std::vector<std::pair<int, double>> entries;  // (step, d2)
};

inline double subsystem_d2(const statevec::NetworkState& a, const statevec::NetworkState& b,
                           Subsystem subsystem) {
  switch (subsystem) {
    case Subsystem::head: return bures_d2(statevec::partial_trace(a, 0), statevec::partial_trace(b, 0));
    case Subsystem::tape: return bures_d2(statevec::partial_trace(a, 1), statevec::partial_trace(b, 1));
    case Subsystem::total: return bures_d2(a, b);
  }
  throw std::invalid_argument("subsystem_d2: unknown subsystem");
}

inline DistanceSeries distance_series(const drive::DriveSequence& drive_a,
                                      const drive::DriveSequence& drive_b,
                                      const statevec::NetworkState& initial_a,
                                      const statevec::NetworkState& initial_b,
                                      Subsystem subsystem, int steps) {
  if (steps < 0) throw std::invalid_argument("distance_series: steps must be >= 0");
  const gates::Trajectory ta = gates::run(initial_a, drive_a, steps);
  const gates::Trajectory tb = gates::run(initial_b, drive_b, steps);
  DistanceSeries out;
  out.subsystem = subsystem;
  out.entries.reserve(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n)
    out.entries.emplace_back(n, subsystem_d2(ta.at(n), tb.at(n), subsystem));
  return out;
}

}  // namespace qtm::metrics
