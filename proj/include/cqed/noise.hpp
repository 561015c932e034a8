#pragma once

// Field-ionisation detection with state misidentification.
//
// Default reading: p is the chance that an atom in |0> is reported as 1 and
// q the chance that an atom in |1> is reported as 0, so
//   pi_0 = (1-p) P_0 + q P_1,   pi_1 = (1-q) P_1 + p P_0.
// NoiseConvention::swapped exchanges the roles of p and q.

#include <array>
#include <string>
#include <vector>

#include "cqed/pom.hpp"

namespace cqed {

struct DetectionNoise {
  double p = 0.0;
  double q = 0.0;
};

enum class NoiseConvention { standard, swapped };

inline void validate(const DetectionNoise& noise) {
  if (!(noise.p >= 0.0 && noise.p <= 1.0 && noise.q >= 0.0 && noise.q <= 1.0))
    throw DomainError("DetectionNoise: p and q must lie in [0,1]");
}

/// confusion(k, j) = P(report k | true j) for a single two-level atom.
inline Eigen::Matrix2d misidentification_matrix(DetectionNoise noise,
                                                NoiseConvention convention = NoiseConvention::standard) {
  validate(noise);
  const double flip0 = convention == NoiseConvention::standard ? noise.p : noise.q;  // 0 -> reported 1
  const double flip1 = convention == NoiseConvention::standard ? noise.q : noise.p;  // 1 -> reported 0
  Eigen::Matrix2d c;
  c << 1.0 - flip0, flip1,
       flip0, 1.0 - flip1;
  return c;
}

/// {pi_0, pi_1} for one atom.
inline Pom two_level_noisy_pom(DetectionNoise noise, NoiseConvention convention = NoiseConvention::standard) {
  const std::array<Operator, 2> proj{projector(basis_state(2, 0)), projector(basis_state(2, 1))};
  return noisy_projective_pom(proj, misidentification_matrix(noise, convention), {"0", "1"});
}

/// M_1 = pi_0 (x) pi_0, M_2 = pi_0 (x) pi_1, M_3 = pi_1 (x) pi_0, M_4 = pi_1 (x) pi_1,
/// labelled "00", "01", "10", "11".
inline Pom noisy_detection_pom(DetectionNoise noise, NoiseConvention convention = NoiseConvention::standard) {
  const Pom single = two_level_noisy_pom(noise, convention);
  std::vector<Effect> effects;
  for (const auto& a : single.effects())
    for (const auto& b : single.effects()) effects.push_back({a.label + b.label, tensor(a.op, b.op)});
  return Pom(std::move(effects));
}

}  // namespace cqed
