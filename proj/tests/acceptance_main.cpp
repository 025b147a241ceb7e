// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each criterion pins its tolerance in code and reports the measured value
// and its runtime.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qtm/analytic.hpp"
#include "qtm/drive.hpp"
#include "qtm/gates.hpp"
#include "qtm/metrics.hpp"
#include "qtm/statevec.hpp"

using namespace qtm;
using drive::Angle;
using statevec::cxd;
using statevec::NetworkState;
using statevec::TapeSpin;

namespace {

const double pi = std::numbers::pi;
const Angle two_fifths_pi = Angle::from_pi_fraction(2, 5);

int g_failures = 0;

struct Criterion {
  std::string detail;
  bool ok = true;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

void run_criterion(int id, const std::string& name, double time_budget_s,
                   const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_budget_s > 0.0 && elapsed > time_budget_s) {
    c.require(false, "runtime " + std::to_string(elapsed) + "s over budget");
  }
  if (!c.ok) ++g_failures;
  std::printf("%s criterion %d: %s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(),
              elapsed, c.detail.empty() ? "" : " -- ", c.detail.c_str());
}

double state_distance(const NetworkState& a, const NetworkState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

gates::Trajectory fib_run(const Angle& a1, double delta, TapeSpin tape, int steps) {
  const drive::DriveSequence seq =
      delta == 0.0 ? drive::DriveSequence{drive::Rule::fibonacci, a1, 0.0}
                   : drive::DriveSequence{drive::Rule::fibonacci_perturbed, a1, delta};
  return gates::run(statevec::make_product_state(delta, {tape}), seq, steps);
}

}  // namespace

int main() {
  // 1. Periodic orbit of the 2/5 pi drive: the congruence scan returns
  //    m = 20 (n = 40), the simulated state recurs below 1e-9, and no even
  //    step before 40 comes within 1e-3 of the start.
  run_criterion(1, "periodic orbit at alpha1 = 2/5 pi", 1.0, [](Criterion& c) {
    const auto found = analytic::find_periodic_orbit(two_fifths_pi, 1000000);
    c.require(found.has_value() && *found == 20, "orbit scan did not return m = 20");
    const auto traj = fib_run(two_fifths_pi, 0.0, TapeSpin::zero, 40);
    const double d40 = state_distance(traj.at(40), traj.at(0));
    c.require(d40 < 1e-9, "recurrence distance " + std::to_string(d40));
    for (int n = 2; n < 40; n += 2)
      c.require(state_distance(traj.at(n), traj.at(0)) > 1e-3,
                "premature recurrence at n = " + std::to_string(n));
  });

  // 2. Stability multipliers: finite-delta m11 at 1e-6 within 0.1 percent of
  //    F(m-1) for m = 2..15, exact integer limit 4181 at m = 20.
  run_criterion(2, "head stability limits", 1.0, [](Criterion& c) {
    for (int m = 2; m <= 15; ++m) {
      const auto r = analytic::head_stability(m, 1e-6);
      const double rel = std::abs(r.m11 / static_cast<double>(r.m11_limit) - 1.0);
      c.require(rel <= 1e-3, "m11 off by " + std::to_string(rel) + " at m = " + std::to_string(m));
      c.require(std::abs(r.m22 - 1.0) <= 1e-3, "m22 drifts at m = " + std::to_string(m));
    }
    c.require(analytic::head_stability(20, 1e-6).m11_limit == 4181, "limit at m = 20 is not 4181");
  });

  // 3. The 13 closed-form distance rows match the simulated head-subspace
  //    distance within 1e-12 for both deltas.
  run_criterion(3, "closed-form distance table", 1.0, [](Criterion& c) {
    for (double delta : {1e-3, 1e-5}) {
      const auto tu = fib_run(two_fifths_pi, 0.0, TapeSpin::zero, 12);
      const auto tp = fib_run(two_fifths_pi, delta, TapeSpin::zero, 12);
      for (int n = 0; n <= 12; ++n) {
        const double sim = metrics::bures_d2(statevec::partial_trace(tu.at(n), 0),
                                             statevec::partial_trace(tp.at(n), 0));
        const double ref = analytic::table1_d2(n, two_fifths_pi.approx, delta);
        c.require(std::abs(sim - ref) <= 1e-12,
                  "row n = " + std::to_string(n) + " deviates by " + std::to_string(sim - ref));
      }
    }
  });

  // 4. Analytic-oracle equivalence over 2000 steps for both drive angles:
  //    superposed head, both primitives, and the tape polarization.
  run_criterion(4, "closed forms track the simulation for n <= 2000", 10.0, [](Criterion& c) {
    for (const Angle& a1 : {two_fifths_pi, Angle::from_radians(0.7)}) {
      const int steps = 2000;
      const auto alphas =
          drive::DriveSequence{drive::Rule::fibonacci, a1, 0.0}.angles(steps / 2 + 1);

      const auto traj = fib_run(a1, 0.0, TapeSpin::zero, steps);
      double worst = 0.0;
      for (int n = 1; n <= steps; ++n) {
        const auto [l2, l3] = analytic::head_bloch_superposed(
            (n + 1) / 2, n % 2 == 0 ? analytic::StepParity::even : analytic::StepParity::odd, a1);
        const auto b = statevec::bloch_of(traj.at(n), 0);
        worst = std::max({worst, std::abs(b.l2 - l2), std::abs(b.l3 - l3)});
      }
      c.require(worst <= 1e-10, "superposed head deviates by " + std::to_string(worst));

      for (TapeSpin t : {TapeSpin::plus, TapeSpin::minus}) {
        const auto ptraj = fib_run(a1, 0.0, t, steps);
        double worst_p = 0.0;
        for (int n = 0; n <= steps; ++n) {
          const auto [l2, l3] =
              analytic::primitive_bloch(n, t == TapeSpin::plus ? '+' : '-', alphas);
          const auto b = statevec::bloch_of(ptraj.at(n), 0);
          worst_p = std::max({worst_p, std::abs(b.l2 - l2), std::abs(b.l3 - l3)});
        }
        c.require(worst_p <= 1e-10, "primitive deviates by " + std::to_string(worst_p));
      }

      for (double delta : {0.0, 1e-3}) {
        const auto ttraj = fib_run(a1, delta, TapeSpin::zero, steps);
        double worst_t = 0.0;
        for (int n = 0; n <= steps; ++n)
          worst_t = std::max(worst_t, std::abs(statevec::bloch_of(ttraj.at(n), 1).l3 -
                                               analytic::tape_lambda3(n, a1, delta)));
        c.require(worst_t <= 1e-10, "tape polarization deviates by " + std::to_string(worst_t));
      }
    }
  });

  // 5. Distance diagnostics: bounds on ten thousand random pure pairs, the
  //    pure-state identity, and the overlap identity along trajectories.
  run_criterion(5, "distance bounds and overlap identities", 10.0, [](Criterion& c) {
    std::mt19937 rng(987654321u);
    std::normal_distribution<double> gauss;
    auto random_state = [&]() {
      std::vector<cxd> amp(4);
      double norm2 = 0.0;
      for (auto& a : amp) {
        a = cxd{gauss(rng), gauss(rng)};
        norm2 += std::norm(a);
      }
      for (auto& a : amp) a /= std::sqrt(norm2);
      return NetworkState(2, amp);
    };
    for (int rep = 0; rep < 10000; ++rep) {
      const NetworkState a = random_state(), b = random_state();
      const double d2 = metrics::bures_d2(a, b);
      c.require(d2 >= -1e-12 && d2 <= 2.0 + 1e-12, "d2 out of bounds");
      double dense = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          dense += std::norm(a[i] * std::conj(a[j]) - b[i] * std::conj(b[j]));
      c.require(std::abs(d2 - dense) <= 1e-12, "pure-state identity broken");
    }
    const auto tu = fib_run(two_fifths_pi, 0.0, TapeSpin::zero, 500);
    const auto tp = fib_run(two_fifths_pi, 1e-3, TapeSpin::zero, 500);
    for (int n = 0; n <= 500; ++n) {
      const double d2 = metrics::bures_d2(tu.at(n), tp.at(n));
      const double through_overlap = 2.0 * (1.0 - metrics::overlap_oprime(tu, tp, n));
      c.require(std::abs(d2 - through_overlap) <= 1e-12, "overlap identity broken");
    }
  });

  // 6. Qualitative distance evolution: Fibonacci blow-up within 60 steps
  //    from below 1e-5, flat constant drive over ten thousand steps, and an
  //    arithmetic-drive revival dip below 5 percent of the running max.
  run_criterion(6, "distance evolution shapes per drive", 30.0, [](Criterion& c) {
    const auto psi0 = statevec::make_product_state(0.0, {TapeSpin::zero});
    const auto psi0p = statevec::make_product_state(1e-3, {TapeSpin::zero});

    const auto fib = metrics::distance_series(
        drive::DriveSequence{drive::Rule::fibonacci, two_fifths_pi, 0.0},
        drive::DriveSequence{drive::Rule::fibonacci_perturbed, two_fifths_pi, 1e-3}, psi0, psi0p,
        metrics::Subsystem::head, 60);
    c.require(fib.entries[0].second < 1e-5, "initial distance too large");
    bool blowup = false;
    for (const auto& [n, d2] : fib.entries) blowup = blowup || d2 > 1.0;
    c.require(blowup, "no blow-up past 1.0 within 60 steps");

    const drive::DriveSequence cst{drive::Rule::constant, two_fifths_pi, 0.0};
    const auto flat =
        metrics::distance_series(cst, cst, psi0, psi0p, metrics::Subsystem::head, 10000);
    const double ref = flat.entries[2].second;
    for (const auto& [n, d2] : flat.entries)
      c.require(d2 <= 10.0 * ref, "constant drive exceeds 10x its n = 2 value");

    const auto arith = metrics::distance_series(
        drive::DriveSequence{drive::Rule::arithmetic, two_fifths_pi, 0.0},
        drive::DriveSequence{drive::Rule::arithmetic, two_fifths_pi, 1e-3}, psi0, psi0p,
        metrics::Subsystem::head, 400);
    double running_max = 0.0;
    bool revival = false;
    for (const auto& [n, d2] : arith.entries) {
      running_max = std::max(running_max, d2);
      if (n >= 4 && running_max > 0.1 && d2 < 0.05 * running_max) revival = true;
    }
    c.require(revival, "no revival dip below 5 percent of the running max");
  });

  // 7. Entanglement-free primitives keep the head pure for ten thousand
  //    steps; the tape-|0> start entangles and shortens the head Bloch
  //    vector.
  run_criterion(7, "primitive purity and entanglement onset", 30.0, [](Criterion& c) {
    for (TapeSpin t : {TapeSpin::plus, TapeSpin::minus}) {
      const auto traj = fib_run(two_fifths_pi, 0.0, t, 10000);
      double worst = 0.0;
      for (int n = 0; n <= 10000; ++n)
        worst = std::max(worst, std::abs(statevec::bloch_of(traj.at(n), 0).norm() - 1.0));
      c.require(worst <= 1e-10, "primitive head left the Bloch circle by " + std::to_string(worst));
    }
    const auto traj = fib_run(two_fifths_pi, 0.0, TapeSpin::zero, 100);
    double shortest = 1.0;
    for (int n = 0; n <= 100; ++n)
      shortest = std::min(shortest, statevec::bloch_of(traj.at(n), 0).norm());
    c.require(shortest < 1.0 - 0.1, "tape |0> start never entangled the head");
  });

  // 8. Drive identities: the perturbed sequence differs from the plain one
  //    by delta F(m-1) mod 2 pi, and the recurrence agrees with the real
  //    closed form for m <= 30.
  run_criterion(8, "drive sequence identities", 1.0, [](Criterion& c) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    const double golden_conj = (1.0 - std::sqrt(5.0)) / 2.0;
    for (const Angle& a1 : {two_fifths_pi, Angle::from_radians(0.7)}) {
      for (double delta : {1e-6, 1e-5}) {
        const auto plain = drive::fibonacci_angles(a1, 40);
        const auto pert = drive::perturbed_angles(a1, delta, 40);
        for (int m = 1; m <= 40; ++m) {
          const double got = drive::reduce_angle(pert[m - 1] - plain[m - 1].approx);
          const double expect =
              drive::reduce_angle(delta * static_cast<double>(drive::fib_number(m - 1)));
          const double dist = std::min(std::abs(got - expect),
                                       2.0 * pi - std::abs(got - expect));
          c.require(dist <= 1e-12, "perturbation identity off by " + std::to_string(dist) +
                                       " at m = " + std::to_string(m));
        }
      }
      const auto angles = drive::fibonacci_angles(a1, 30);
      for (int m = 1; m <= 30; ++m) {
        const double closed = drive::reduce_angle(
            a1.approx / std::sqrt(5.0) * (std::pow(golden, m) - std::pow(golden_conj, m)));
        const double got = angles[static_cast<std::size_t>(m - 1)].approx;
        const double dist = std::min(std::abs(got - closed), 2.0 * pi - std::abs(got - closed));
        c.require(dist <= 1e-9, "closed form off by " + std::to_string(dist) + " at m = " +
                                    std::to_string(m));
      }
    }
  });

  if (g_failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
