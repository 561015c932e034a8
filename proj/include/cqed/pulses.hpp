#pragma once

// Cavity-QED gate set and a compiler from symbolic pulse sequences to
// unitaries.
//
// Conventions: |g> = |0> = [1,0]^T, |e> = |1>. Atom 1 is the most significant
// tensor factor, so the two-atom basis is |gg>, |ge>, |eg>, |ee>.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cqed/qmat.hpp"

namespace cqed {

/// Resonant Ramsey pulse: pulse area theta, field phase phi (radians).
struct RamseyPulse {
  double theta = 0.0;
  double phi = 0.0;
};

/// Dispersive two-atom gate. Only duration * coupling enters the unitary;
/// coupling is the effective rate g^2/Delta in s^-1.
struct TavisCummingsGate {
  double duration = 0.0;
  double coupling = 1.0;
  double delay = 0.0;  // entry/exit offset between the atoms, seconds

  double angle() const { return duration * coupling; }
};

struct RamseyOnAtom {
  int atom = 1;
  RamseyPulse pulse;
};

struct TavisCummings {
  TavisCummingsGate gate;
};

/// Ramsey pulse between levels a < b of a single three-level atom.
struct ThreeLevelCoupling {
  int a = 1;
  int b = 2;
  RamseyPulse pulse;
};

using PulseStep = std::variant<RamseyOnAtom, TavisCummings, ThreeLevelCoupling>;

/// Steps are applied left to right in time.
struct PulseSequence {
  int dim = 4;
  std::vector<PulseStep> steps;
};

// R(theta, phi) = [[cos(theta/2), -e^{-i phi} sin(theta/2)],
//                  [e^{i phi} sin(theta/2), cos(theta/2)]]
inline Operator ramsey(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw DomainError("ramsey: non-finite angle");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex i{0.0, 1.0};
#ifdef CQED_MUTATE_RAMSEY_SIGN
  // Deliberately flipped phase sign, used only by the mutation-test build.
  phi = -phi;
#endif
  Operator r(2, 2);
  r << c, -std::exp(-i * phi) * s,
       std::exp(i * phi) * s, c;
  return r;
}

inline Operator ramsey(const RamseyPulse& pulse) { return ramsey(pulse.theta, pulse.phi); }

inline Operator embed_three_level(int a, int b, const RamseyPulse& pulse) {
  if (a == b) throw DomainError("embed_three_level: levels must differ");
  if (a < 1 || a > 3 || b < 1 || b > 3) throw DomainError("embed_three_level: levels must be in {1,2,3}");
  if (a > b) std::swap(a, b);
  const Operator r = ramsey(pulse);
  Operator out = identity(3);
  const Index ia = a - 1, ib = b - 1;
  out(ia, ia) = r(0, 0);
  out(ia, ib) = r(0, 1);
  out(ib, ia) = r(1, 0);
  out(ib, ib) = r(1, 1);
  return out;
}

inline Operator ramsey_on_atom(int atom, const RamseyPulse& pulse) {
  switch (atom) {
    case 1: return tensor(ramsey(pulse), identity(2));
    case 2: return tensor(identity(2), ramsey(pulse));
    default: throw DomainError("ramsey_on_atom: atom must be 1 or 2");
  }
}

namespace detail {

inline Operator tc_unitary(double angle) {
  const Complex i{0.0, 1.0};
  const Complex ph = std::exp(-i * angle);
  Operator u = identity(4);
  u(1, 1) = ph * std::cos(angle);
  u(1, 2) = -i * ph * std::sin(angle);
  u(2, 1) = -i * ph * std::sin(angle);
  u(2, 2) = ph * std::cos(angle);
  return u;
}

inline void check_gate(const TavisCummingsGate& g) {
  if (!std::isfinite(g.duration) || !std::isfinite(g.coupling) || !std::isfinite(g.delay))
    throw DomainError("TavisCummingsGate: non-finite parameter");
  if (g.duration < 0.0) throw DomainError("TavisCummingsGate: negative duration");
  if (g.delay < 0.0) throw DomainError("TavisCummingsGate: negative delay");
  if (g.delay > g.duration) throw DomainError("TavisCummingsGate: delay exceeds duration");
}

}  // namespace detail

/// Ideal gate: identity on |gg>, |ee>; the |ge>, |eg> block is
/// e^{-i x} [[cos x, -i sin x], [-i sin x, cos x]] with x = t * coupling.
inline Operator tavis_cummings(const TavisCummingsGate& gate) {
  detail::check_gate(gate);
  if (gate.delay != 0.0) throw DomainError("tavis_cummings: gate has a delay, use delayed_tavis_cummings");
  return detail::tc_unitary(gate.angle());
}

/// Phase e^{i angle} on |e> of one atom: the dispersive shift picked up while
/// that atom is alone in the detuned cavity.
inline Operator dispersive_phase(int atom, double angle) {
  Operator single = identity(2);
  single(1, 1) = std::exp(Complex{0.0, angle});
  switch (atom) {
    case 1: return tensor(single, identity(2));
    case 2: return tensor(identity(2), single);
    default: throw DomainError("dispersive_phase: atom must be 1 or 2");
  }
}

/// Atom 2 enters t_d after atom 1 and leaves t_d after it. Atom 1 is alone
/// for t_d, both interact for t - t_d, then atom 2 is alone for t_d:
///   U = D_2(t_d) T(t - t_d) D_1(t_d).
inline Operator delayed_tavis_cummings(const TavisCummingsGate& gate) {
  detail::check_gate(gate);
  const double shared = (gate.duration - gate.delay) * gate.coupling;
  const double alone = gate.delay * gate.coupling;
  return dispersive_phase(2, alone) * detail::tc_unitary(shared) * dispersive_phase(1, alone);
}

inline int step_dim(const PulseStep& step) {
  return std::holds_alternative<ThreeLevelCoupling>(step) ? 3 : 4;
}

inline Operator step_unitary(const PulseStep& step) {
  return std::visit(
      [](const auto& s) -> Operator {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RamseyOnAtom>) {
          return ramsey_on_atom(s.atom, s.pulse);
        } else if constexpr (std::is_same_v<T, TavisCummings>) {
          return s.gate.delay > 0.0 ? delayed_tavis_cummings(s.gate) : tavis_cummings(s.gate);
        } else {
          return embed_three_level(s.a, s.b, s.pulse);
        }
      },
      step);
}

/// Ordered product, later steps multiplied on the left.
inline Operator compile(const PulseSequence& seq) {
  if (seq.dim != 3 && seq.dim != 4) throw DomainError("compile: sequence dimension must be 3 or 4");
  Operator u = identity(seq.dim);
  for (std::size_t k = 0; k < seq.steps.size(); ++k) {
    if (step_dim(seq.steps[k]) != seq.dim)
      throw DomainError("compile: step " + std::to_string(k + 1) + " does not act on dimension " +
                        std::to_string(seq.dim));
    u = step_unitary(seq.steps[k]) * u;
  }
  if (!is_unitary(u)) throw NumericError("compile: result is not unitary");
  return u;
}

struct RelabelMatch {
  bool matched = false;
  std::vector<int> permutation;  // row i of u is row permutation[i] of target
  std::vector<Complex> phases;   // ... times phases[i]
};

/// Searches for u = P D target with P a permutation and D a unimodular
/// diagonal, i.e. the two unitaries differ only by relabelling and
/// rephasing detection outcomes.
inline RelabelMatch matches_up_to_relabel(const Operator& u, const Operator& target,
                                          double tolerance = tol::kAnalytic) {
  if (u.rows() != target.rows() || u.cols() != target.cols() || u.rows() != u.cols())
    throw DomainError("matches_up_to_relabel: dimension mismatch");
  const auto n = static_cast<int>(u.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    RelabelMatch m{true, perm, std::vector<Complex>(n)};
    for (int i = 0; i < n && m.matched; ++i) {
      Index c = 0;
      target.row(perm[i]).cwiseAbs().maxCoeff(&c);
      const Complex ref = target(perm[i], c);
      Complex ph = std::abs(ref) > 0.0 ? u(i, c) / ref : Complex{1.0, 0.0};
      if (std::abs(ph) > 0.0) ph /= std::abs(ph);
      m.phases[i] = ph;
      m.matched = (u.row(i) - ph * target.row(perm[i])).cwiseAbs().maxCoeff() <= tolerance;
    }
    if (m.matched) return m;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {};
}

// JSON wire format:
//   {"dim": 4, "steps": [{"type": "ramsey", "atom": 2, "theta": .., "phi": ..},
//                        {"type": "tavis_cummings", "duration": .., "coupling": .., "delay": ..},
//                        {"type": "three_level", "levels": [1, 3], "theta": .., "phi": ..}]}

inline void to_json(nlohmann::json& j, const PulseStep& step) {
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RamseyOnAtom>) {
          j = {{"type", "ramsey"}, {"atom", s.atom}, {"theta", s.pulse.theta}, {"phi", s.pulse.phi}};
        } else if constexpr (std::is_same_v<T, TavisCummings>) {
          j = {{"type", "tavis_cummings"},
               {"duration", s.gate.duration},
               {"coupling", s.gate.coupling},
               {"delay", s.gate.delay}};
        } else {
          j = {{"type", "three_level"},
               {"levels", {s.a, s.b}},
               {"theta", s.pulse.theta},
               {"phi", s.pulse.phi}};
        }
      },
      step);
}

inline void from_json(const nlohmann::json& j, PulseStep& step) {
  const auto type = j.at("type").get<std::string>();
  if (type == "ramsey") {
    step = RamseyOnAtom{j.at("atom").get<int>(), {j.at("theta").get<double>(), j.value("phi", 0.0)}};
  } else if (type == "tavis_cummings") {
    step = TavisCummings{
        {j.at("duration").get<double>(), j.value("coupling", 1.0), j.value("delay", 0.0)}};
  } else if (type == "three_level") {
    const auto levels = j.at("levels").get<std::vector<int>>();
    if (levels.size() != 2) throw DomainError("three_level step needs exactly two levels");
    step = ThreeLevelCoupling{levels[0], levels[1], {j.at("theta").get<double>(), j.value("phi", 0.0)}};
  } else {
    throw DomainError("unknown pulse step type '" + type + "'");
  }
}

inline void to_json(nlohmann::json& j, const PulseSequence& seq) {
  j = {{"dim", seq.dim}, {"steps", seq.steps}};
}

inline void from_json(const nlohmann::json& j, PulseSequence& seq) {
  seq.dim = j.at("dim").get<int>();
  seq.steps = j.at("steps").get<std::vector<PulseStep>>();
}

}  // namespace cqed
