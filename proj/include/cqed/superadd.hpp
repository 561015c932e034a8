#pragma once

// Superadditive decoding of the length-two trine code.
//
// Letters are the qubit trine states, codewords |psi_xx> = |psi_x> (x) |psi_x>,
// and the decoder is the square-root measurement, applied either as an
// abstract basis measurement or as a unitary followed by computational-basis
// detection.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cqed/noise.hpp"
#include "cqed/pom.hpp"
#include "cqed/pulses.hpp"

namespace cqed::superadd {

/// cos(gamma/2) = (sqrt2 + 1)/sqrt6, sin(gamma/2) = (sqrt2 - 1)/sqrt6.
struct DecoderAngle {
  static constexpr double kCosHalf = (std::numbers::sqrt2 + 1.0) / (std::numbers::sqrt2 * std::numbers::sqrt3);
  static constexpr double kSinHalf = (std::numbers::sqrt2 - 1.0) / (std::numbers::sqrt2 * std::numbers::sqrt3);

  static double gamma() { return 2.0 * std::atan2(kSinHalf, kCosHalf); }
};

struct TrineEnsemble {
  std::array<StateVector, 3> letters;
  std::array<double, 3> priors{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

inline TrineEnsemble trine() {
  TrineEnsemble t;
  const double h = std::numbers::sqrt3 / 2.0;
  t.letters[0] = StateVector(2);
  t.letters[0] << 1.0, 0.0;
  t.letters[1] = StateVector(2);
  t.letters[1] << -0.5, -h;
  t.letters[2] = StateVector(2);
  t.letters[2] << -0.5, h;
  return t;
}

/// Always built as a tensor product of the letters.
inline std::array<StateVector, 3> codewords() {
  const auto t = trine();
  return {tensor(t.letters[0], t.letters[0]), tensor(t.letters[1], t.letters[1]),
          tensor(t.letters[2], t.letters[2])};
}

/// |A> = (|01> - |10>)/sqrt2, orthogonal to every codeword.
inline StateVector antisymmetric_state() {
  StateVector a = StateVector::Zero(4);
  a(1) = 1.0 / std::numbers::sqrt2;
  a(2) = -1.0 / std::numbers::sqrt2;
  return a;
}

struct SqrtMeasurement {
  // Pi_00, Pi_11, Pi_22, A
  std::array<StateVector, 4> basis;
  static inline const std::array<std::string, 4> kLabels{"Pi00", "Pi11", "Pi22", "A"};

  Pom as_pom() const {
    std::vector<Effect> effects;
    for (std::size_t i = 0; i < 4; ++i) effects.push_back({kLabels[i], projector(basis[i])});
    return Pom(std::move(effects));
  }
};

/// |Pi_yy> = (sum_x |psi_xx><psi_xx|)^{-1/2} |psi_yy>, completed by the unit
/// vector spanning the orthogonal complement.
inline SqrtMeasurement sqrt_measurement() {
  const auto cw = codewords();
  Operator gram = Operator::Zero(4, 4);
  for (const auto& c : cw) gram += projector(c);
  const Operator r = inv_sqrt_on_support(gram);

  SqrtMeasurement m;
  Operator covered = Operator::Zero(4, 4);
  for (std::size_t y = 0; y < 3; ++y) {
    m.basis[y] = r * cw[y];
    covered += projector(m.basis[y]);
  }
  const Operator rest = identity(4) - covered;
  Index col = 0;
  rest.colwise().norm().maxCoeff(&col);
  m.basis[3] = rest.col(col).normalized();
  return m;
}

/// The closed-form basis written in terms of gamma.
inline SqrtMeasurement reference_measurement_basis() {
  const double c = DecoderAngle::kCosHalf;
  const double s = DecoderAngle::kSinHalf;
  const double r2 = std::numbers::sqrt2;
  SqrtMeasurement m;
  m.basis[0] = StateVector(4);
  m.basis[0] << c, 0.0, 0.0, -s;
  m.basis[1] = StateVector(4);
  m.basis[1] << s / r2, 0.5, 0.5, c / r2;
  m.basis[2] = StateVector(4);
  m.basis[2] << s / r2, -0.5, -0.5, c / r2;
  m.basis[3] = antisymmetric_state();
  return m;
}

/// |00><Pi_00| + |01><Pi_11| + |10><A| + |11><Pi_22|
inline Operator u_sa() {
  const double c = DecoderAngle::kCosHalf;
  const double s = DecoderAngle::kSinHalf;
  const double r2 = std::numbers::sqrt2;
  Operator u(4, 4);
  u << 2.0 * c, 0.0, 0.0, -2.0 * s,
       r2 * s, 1.0, 1.0, r2 * c,
       0.0, r2, -r2, 0.0,
       r2 * s, -1.0, -1.0, r2 * c;
  return u / 2.0;
}

/// Closed-form reduced decoder: Pi_22 -> |10>, Pi_11 -> |11>, with Pi_00 and
/// A sent into superpositions of |00> and |01>.
inline Operator u_sa_prime() {
  const double c = DecoderAngle::kCosHalf;
  const double s = DecoderAngle::kSinHalf;
  const double g = DecoderAngle::gamma();
  const double r2 = std::numbers::sqrt2;
  const Complex em = std::exp(Complex{0.0, -g / 2.0});
  const Complex ep = std::exp(Complex{0.0, g / 2.0});
  Operator u(4, 4);
  u << -r2 * em * c, -ep, ep, r2 * em * s,
       -r2 * em * c, ep, -ep, r2 * em * s,
       -r2 * s, 1.0, 1.0, -r2 * c,
       r2 * s, 1.0, 1.0, r2 * c;
  return std::exp(Complex{0.0, -g / 4.0}) / 2.0 * u;
}

/// Interaction times of the two cavity passes, in units of 1/coupling.
inline double first_cavity_angle() { return 3.0 * std::numbers::pi / 4.0; }
inline double second_cavity_angle() { return DecoderAngle::gamma() / 2.0; }

/// Seven steps: R2(pi,pi), R2(pi,3pi/4), T(t1), R2(pi,pi/2), T(t2),
/// R2(pi,(gamma-pi/2)/4), R2(pi/2,0), with t1 = 3pi/(4 phi), t2 = gamma/(2 phi).
/// delay (seconds) is applied to both cavity passes.
inline PulseSequence seven_step_sequence(double coupling = 1.0, double delay = 0.0) {
  using std::numbers::pi;
  const double g = DecoderAngle::gamma();
  const double t1 = first_cavity_angle() / coupling;
  const double t2 = second_cavity_angle() / coupling;
  if (delay > t2)
    throw DomainError("seven_step_sequence: delay exceeds the second cavity interaction time t2");
  if (delay > t1)
    throw DomainError("seven_step_sequence: delay exceeds the first cavity interaction time t1");
  return {4,
          {RamseyOnAtom{2, {pi, pi}},
           RamseyOnAtom{2, {pi, 3.0 * pi / 4.0}},
           TavisCummings{{t1, coupling, delay}},
           RamseyOnAtom{2, {pi, pi / 2.0}},
           TavisCummings{{t2, coupling, delay}},
           RamseyOnAtom{2, {pi, (g - pi / 2.0) / 4.0}},
           RamseyOnAtom{2, {pi / 2.0, 0.0}}}};
}

/// Four-step Bell decoder: R2(pi,3pi/4), T(3pi/(4 phi)), R2(pi,0), T(3pi/(4 phi)).
inline PulseSequence bell_sequence(double coupling = 1.0) {
  using std::numbers::pi;
  const double t = first_cavity_angle() / coupling;
  return {4,
          {RamseyOnAtom{2, {pi, 3.0 * pi / 4.0}}, TavisCummings{{t, coupling, 0.0}},
           RamseyOnAtom{2, {pi, 0.0}}, TavisCummings{{t, coupling, 0.0}}}};
}

struct BellStates {
  StateVector phi_plus, psi_plus, phi_minus, psi_minus;
};

inline BellStates bell_states() {
  const double r = 1.0 / std::numbers::sqrt2;
  BellStates b{StateVector::Zero(4), StateVector::Zero(4), StateVector::Zero(4), StateVector::Zero(4)};
  b.phi_plus << r, 0.0, 0.0, r;
  b.phi_minus << r, 0.0, 0.0, -r;
  b.psi_plus << 0.0, r, r, 0.0;
  b.psi_minus << 0.0, r, -r, 0.0;
  return b;
}

/// U_B = |00><Psi+| + |01><Phi+| + |10><Psi-| + |11><Phi-|
inline Operator bell_target() {
  const auto b = bell_states();
  Operator u(4, 4);
  u.row(0) = b.psi_plus.adjoint();
  u.row(1) = b.phi_plus.adjoint();
  u.row(2) = b.psi_minus.adjoint();
  u.row(3) = b.phi_minus.adjoint();
  return u;
}

/// Classical channel: priors over X and conditional(y, x) = P(y|x).
struct Channel {
  std::vector<double> priors;
  Eigen::MatrixXd conditional;
  std::vector<std::string> outputs;

  double stochasticity_defect() const {
    double d = 0.0;
    for (Index x = 0; x < conditional.cols(); ++x) d = std::max(d, std::abs(conditional.col(x).sum() - 1.0));
    return d;
  }
};

/// P(y|x) = Tr(U rho_x U^dagger M_y).
inline Channel channel_matrix(const Operator& unitary, std::span<const StateVector> inputs,
                              std::vector<double> priors, const Pom& detection) {
  if (inputs.size() != priors.size()) throw DomainError("channel_matrix: one prior per input required");
  if (unitary.rows() != detection.dim() || unitary.cols() != detection.dim())
    throw DomainError("channel_matrix: unitary and detection dimensions differ");
  Channel ch{std::move(priors), Eigen::MatrixXd(detection.size(), inputs.size()), detection.labels()};
  for (std::size_t x = 0; x < inputs.size(); ++x) {
    if (inputs[x].size() != unitary.cols()) throw DomainError("channel_matrix: input dimension mismatch");
    const auto dist = outcome_probs(StateVector(unitary * inputs[x]), detection);
    for (std::size_t y = 0; y < dist.probabilities.size(); ++y)
      ch.conditional(static_cast<Index>(y), static_cast<Index>(x)) = dist.probabilities[y];
  }
  return ch;
}

/// Codeword channel with uniform priors.
inline Channel codeword_channel(const Operator& unitary, const Pom& detection) {
  const auto cw = codewords();
  return channel_matrix(unitary, cw, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, detection);
}

/// I(X:Y) in bits, with 0 log 0 = 0.
inline double mutual_information(const Channel& ch) {
  const Index nx = ch.conditional.cols();
  const Index ny = ch.conditional.rows();
  if (static_cast<Index>(ch.priors.size()) != nx) throw DomainError("mutual_information: prior count");
  Eigen::VectorXd py = Eigen::VectorXd::Zero(ny);
  for (Index x = 0; x < nx; ++x) py += ch.priors[x] * ch.conditional.col(x);
  double info = 0.0;
  for (Index x = 0; x < nx; ++x) {
    for (Index y = 0; y < ny; ++y) {
      const double p = ch.conditional(y, x);
      if (p > 0.0 && ch.priors[x] > 0.0) info += ch.priors[x] * p * std::log2(p / py(y));
    }
  }
  return info;
}

/// Minimum-error probability for two equiprobable pure states.
inline double helstrom_error(double overlap_magnitude) {
  return 0.5 * (1.0 - std::sqrt(1.0 - overlap_magnitude * overlap_magnitude));
}

/// Unitary taking the Helstrom basis for (a, b) to |0>, |1>: a is decoded
/// as outcome 0, b as outcome 1.
inline Operator helstrom_rotation(const StateVector& a, const StateVector& b) {
  const Operator gamma = 0.5 * (projector(a) - projector(b));
  const HermitianEigen e = eigh(gamma);
  Operator v(2, 2);
  v.row(0) = e.vectors.col(1).adjoint();  // positive eigenvalue -> a
  v.row(1) = e.vectors.col(0).adjoint();
  return v;
}

/// Binary channel of two trine letters at equal priors, decoded by the
/// Helstrom measurement and read out by the noisy single-atom detector.
inline double single_channel_capacity(DetectionNoise noise = {},
                                      NoiseConvention convention = NoiseConvention::standard) {
  const auto t = trine();
  const std::array<StateVector, 2> pair{t.letters[1], t.letters[2]};
  const Channel ch = channel_matrix(helstrom_rotation(pair[0], pair[1]), pair, {0.5, 0.5},
                                    two_level_noisy_pom(noise, convention));
  return mutual_information(ch);
}

/// Superadditive coding gain per channel use.
inline double sqcg(double i2, double c1) { return i2 / 2.0 - c1; }

enum class Decoder { usa, usa_prime, pulse };

inline const char* to_string(Decoder d) {
  switch (d) {
    case Decoder::usa: return "usa";
    case Decoder::usa_prime: return "usa_prime";
    case Decoder::pulse: return "pulse";
  }
  return "?";
}

inline Operator decoder_unitary(Decoder d) {
  switch (d) {
    case Decoder::usa: return u_sa();
    case Decoder::usa_prime: return u_sa_prime();
    case Decoder::pulse: return compile(seven_step_sequence());
  }
  throw DomainError("decoder_unitary: unknown decoder");
}

struct GainReport {
  Channel channel;
  double i2 = 0.0;
  double c1 = 0.0;
  double gain = 0.0;
};

inline GainReport evaluate(const Operator& decoder, DetectionNoise noise = {},
                           NoiseConvention convention = NoiseConvention::standard) {
  GainReport r{codeword_channel(decoder, noisy_detection_pom(noise, convention))};
  r.i2 = mutual_information(r.channel);
  r.c1 = single_channel_capacity(noise, convention);
  r.gain = sqcg(r.i2, r.c1);
  return r;
}

struct MakhlinInvariants {
  Complex g1;
  double g2 = 0.0;
};

inline Operator magic_basis() {
  const Complex i{0.0, 1.0};
  Operator q(4, 4);
  q << 1.0, 0.0, 0.0, i,
       0.0, i, 1.0, 0.0,
       0.0, i, -1.0, 0.0,
       1.0, 0.0, 0.0, -i;
  return q / std::numbers::sqrt2;
}

/// G1 = tr^2(m) / (16 det U), G2 = (tr^2(m) - tr(m^2)) / (4 det U), with
/// m = U_B^T U_B and U_B the gate in the magic basis. Identity gives (1, 3).
inline MakhlinInvariants makhlin_invariants(const Operator& u) {
  if (u.rows() != 4 || !is_unitary(u, 1e-8)) throw DomainError("makhlin_invariants: need a 4x4 unitary");
  const Operator q = magic_basis();
  const Operator ub = q.adjoint() * u * q;
  const Operator m = ub.transpose() * ub;
  const Complex det = u.determinant();
  const Complex tr = m.trace();
  return {tr * tr / (16.0 * det), ((tr * tr - (m * m).trace()) / (4.0 * det)).real()};
}

inline double invariant_distance(const MakhlinInvariants& a, const MakhlinInvariants& b) {
  return std::max(std::abs(a.g1 - b.g1), std::abs(a.g2 - b.g2));
}

inline bool locally_equivalent(const Operator& a, const Operator& b, double tolerance = tol::kEigen) {
  return invariant_distance(makhlin_invariants(a), makhlin_invariants(b)) <= tolerance;
}

/// Smallest invariant distance between `target` and T(x), x on a uniform
/// grid of `points` angles in [0, 2pi).
inline double closest_tc_distance(const Operator& target, int points = 4096) {
  const MakhlinInvariants goal = makhlin_invariants(target);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double x = 2.0 * std::numbers::pi * k / points;
    best = std::min(best, invariant_distance(makhlin_invariants(tavis_cummings({x, 1.0, 0.0})), goal));
  }
  return best;
}

/// True iff no single Tavis-Cummings gate on the grid is locally equivalent
/// to either decoder (or to the compiled seven-step decoder).
inline bool single_tc_insufficient(int points = 4096, double tolerance = tol::kEigen) {
  for (const Operator& target : {u_sa(), u_sa_prime(), compile(seven_step_sequence())})
    if (closest_tc_distance(target, points) <= tolerance) return false;
  return true;
}

}  // namespace cqed::superadd
