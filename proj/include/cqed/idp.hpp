#pragma once

// Optimal unambiguous discrimination of the two qubit states
//   |psi_1> = cos(theta)|1> - sin(theta)|2>,  |psi_2> = cos(theta)|1> + sin(theta)|2>,
// 0 < theta < pi/4, realised as a projective measurement on a three-level
// atom after two Ramsey pulses.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "cqed/pom.hpp"
#include "cqed/pulses.hpp"

namespace cqed::idp {

struct Problem {
  double theta = std::numbers::pi / 8.0;
  double prior1 = 0.5;

  double prior2() const { return 1.0 - prior1; }
  double overlap() const { return std::cos(2.0 * theta); }  // <psi_1|psi_2>
};

inline void check_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 4.0))
    throw DomainError("idp: theta must lie in the open interval (0, pi/4)");
}

inline void validate(const Problem& problem) {
  check_theta(problem.theta);
  if (!(problem.prior1 >= 0.0 && problem.prior1 <= 1.0))
    throw DomainError("idp: prior1 must lie in [0,1]");
}

/// The two signal states; with embed3 they carry a zero amplitude on |3>.
inline std::pair<StateVector, StateVector> idp_states(double theta, bool embed3 = false) {
  check_theta(theta);
  const Index dim = embed3 ? 3 : 2;
  StateVector psi1 = StateVector::Zero(dim);
  StateVector psi2 = StateVector::Zero(dim);
  psi1(0) = std::cos(theta);
  psi1(1) = -std::sin(theta);
  psi2(0) = std::cos(theta);
  psi2(1) = std::sin(theta);
  return {psi1, psi2};
}

/// Pi_1 = k|psi_2perp><psi_2perp|, Pi_2 = k|psi_1perp><psi_1perp|, Pi_? = I - Pi_1 - Pi_2,
/// k = 1 / (1 + <psi_1|psi_2>).
inline Pom idp_pom(double theta) {
  check_theta(theta);
  const double k = 1.0 / (1.0 + std::cos(2.0 * theta));
  StateVector perp1(2), perp2(2);
  perp1 << std::sin(theta), std::cos(theta);
  perp2 << std::sin(theta), -std::cos(theta);
  const Operator pi1 = k * projector(perp2);
  const Operator pi2 = k * projector(perp1);
  return Pom({{"1", pi1}, {"2", pi2}, {"?", identity(2) - pi1 - pi2}});
}

/// U = |1><Pi_1| + |2><Pi_2| + |3><Pi_?| in the extended three-level space.
inline Operator naimark_unitary(double theta) {
  check_theta(theta);
  const double t = std::tan(theta);
  const double r = std::sqrt(1.0 - t * t);
  const double s2 = std::numbers::sqrt2;
  Operator u(3, 3);
  u << t, -1.0, -r,
       t, 1.0, -r,
       s2 * r, 0.0, s2 * t;
  return u / s2;
}

/// Pulse area of the |1>-|3> transfer: cos(area/2) = tan(theta).
inline double transfer_area(double theta) {
  check_theta(theta);
  return 2.0 * std::acos(std::tan(theta));
}

/// T_13 first, then T_12.
inline PulseSequence idp_pulse_sequence(double theta) {
  return {3,
          {ThreeLevelCoupling{1, 3, {transfer_area(theta), 0.0}},
           ThreeLevelCoupling{1, 2, {std::numbers::pi / 2.0, 0.0}}}};
}

/// Ideal level detection after the Naimark unitary.
inline Pom level_detection() {
  return Pom({{"1", projector(basis_state(3, 0))},
              {"2", projector(basis_state(3, 1))},
              {"?", projector(basis_state(3, 2))}});
}

enum class Route { pom, naimark, pulses };

struct Statistics {
  // conditional(k, j) = p(outcome k | state j); outcomes "1","2","?", states psi_1, psi_2.
  Eigen::Matrix<double, 3, 2> conditional;
  double p_inconclusive = 0.0;  // averaged over the priors
  double p_error = 0.0;

  double at(int outcome, int state) const { return conditional(outcome, state); }
};

inline Statistics idp_statistics(const Problem& problem, Route route = Route::pom) {
  validate(problem);
  Statistics s;
  const auto run = [&](const StateVector& psi) {
    if (route == Route::pom) return outcome_probs(psi, idp_pom(problem.theta));
    const Operator u = route == Route::naimark ? naimark_unitary(problem.theta)
                                               : compile(idp_pulse_sequence(problem.theta));
    return outcome_probs(StateVector(u * psi), level_detection());
  };
  const auto [psi1, psi2] = idp_states(problem.theta, route != Route::pom);
  const auto d1 = run(psi1);
  const auto d2 = run(psi2);
  for (int k = 0; k < 3; ++k) {
    s.conditional(k, 0) = d1.probabilities[k];
    s.conditional(k, 1) = d2.probabilities[k];
  }
  s.p_inconclusive = problem.prior1 * s.conditional(2, 0) + problem.prior2() * s.conditional(2, 1);
  s.p_error = problem.prior1 * s.conditional(1, 0) + problem.prior2() * s.conditional(0, 1);
  return s;
}

struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double x) const { return x > low && x < high; }
};

/// Priors for which the fixed symmetric POM has a lower inconclusive rate
/// than the best unambiguous projective measurement: c/(1+c) < p_1 < 1/(1+c).
inline Interval advantage_interval(double theta) {
  check_theta(theta);
  const double c = std::cos(2.0 * theta);
  return {c / (1.0 + c), 1.0 / (1.0 + c)};
}

/// The secant-form bounds 1 - sec^2(2t) + sec(2t) > p_1 > 2 sin^2(t) sec^2(2t),
/// returned left to right as written. They coincide with advantage_interval
/// only at theta = pi/8.
inline Interval secant_form_interval(double theta) {
  check_theta(theta);
  const double sec = 1.0 / std::cos(2.0 * theta);
  const double s = std::sin(theta);
  return {1.0 - sec * sec + sec, 2.0 * s * s * sec * sec};
}

/// Inconclusive probability of the better of the two unambiguous projective
/// strategies {psi_1, psi_1perp} and {psi_2, psi_2perp}.
inline double projective_baseline(const Problem& problem) {
  validate(problem);
  const double c2 = std::pow(problem.overlap(), 2);
  return std::min(problem.prior1 + problem.prior2() * c2, problem.prior2() + problem.prior1 * c2);
}

}  // namespace cqed::idp
