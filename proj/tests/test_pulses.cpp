#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "cqed/idp.hpp"
#include "cqed/pulses.hpp"
#include "cqed/superadd.hpp"
#include "cqed/testing/oracles.hpp"

using namespace cqed;
namespace oracle = cqed::testing;
using std::numbers::pi;

namespace {

Operator mat2(Complex a, Complex b, Complex c, Complex d) {
  Operator m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Ramsey, HalfPi) {
  const double r = 1.0 / std::numbers::sqrt2;
  EXPECT_LE(max_abs(ramsey(pi / 2.0, 0.0) - mat2(r, -r, r, r)), 1e-15);
}

TEST(Ramsey, Pi) { EXPECT_LE(max_abs(ramsey(pi, 0.0) - mat2(0, -1, 1, 0)), 1e-15); }

TEST(Ramsey, PhaseEntries) {
  const Complex i{0.0, 1.0};
  const Operator r = ramsey(pi, pi / 2.0);
  EXPECT_LE(max_abs(r - mat2(0, i, i, 0)), 1e-15);
}

TEST(Ramsey, SameAxisComposition) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(-6.0, 6.0);
  for (int n = 0; n < 200; ++n) {
    const double t1 = a(rng), t2 = a(rng), phi = a(rng);
    EXPECT_LE(max_abs(ramsey(t1, phi) * ramsey(t2, phi) - ramsey(t1 + t2, phi)), 1e-12);
  }
}

TEST(Ramsey, RejectsNonFinite) { EXPECT_THROW(ramsey(NAN, 0.0), DomainError); }

TEST(EmbedThreeLevel, T12Block) {
  const double r = 1.0 / std::numbers::sqrt2;
  Operator expected(3, 3);
  expected << r, -r, 0, r, r, 0, 0, 0, 1;
  EXPECT_LE(max_abs(embed_three_level(1, 2, {pi / 2.0, 0.0}) - expected), 1e-15);
}

TEST(EmbedThreeLevel, T13AtPiOverSix) {
  const double t = 1.0 / std::numbers::sqrt3;
  const double r = std::sqrt(1.0 - t * t);
  Operator expected(3, 3);
  expected << t, 0, -r, 0, 1, 0, r, 0, t;
  EXPECT_LE(max_abs(embed_three_level(1, 3, {idp::transfer_area(pi / 6.0), 0.0}) - expected), 1e-14);
}

TEST(EmbedThreeLevel, TrivialPulseAndErrors) {
  EXPECT_LE(max_abs(embed_three_level(2, 3, {0.0, 0.0}) - identity(3)), 0.0);
  EXPECT_THROW(embed_three_level(2, 2, {1.0, 0.0}), DomainError);
  EXPECT_THROW(embed_three_level(0, 2, {1.0, 0.0}), DomainError);
  EXPECT_THROW(embed_three_level(1, 4, {1.0, 0.0}), DomainError);
}

TEST(RamseyOnAtom, ZeroAreaIsIdentity) {
  EXPECT_LE(max_abs(ramsey_on_atom(1, {0.0, 1.3}) - identity(4)), 1e-15);
  EXPECT_THROW(ramsey_on_atom(3, {0.0, 0.0}), DomainError);
}

TEST(RamseyOnAtom, PiOnSecondAtomSwapsItsLevel) {
  const Operator u = ramsey_on_atom(2, {pi, 0.0});
  // |a0> -> |a1>, |a1> -> -|a0>
  EXPECT_LE((u * basis_state(4, 0) - basis_state(4, 1)).norm(), 1e-15);
  EXPECT_LE((u * basis_state(4, 1) + basis_state(4, 0)).norm(), 1e-15);
  EXPECT_LE((u * basis_state(4, 2) - basis_state(4, 3)).norm(), 1e-15);
  EXPECT_LE((u * basis_state(4, 3) + basis_state(4, 2)).norm(), 1e-15);
}

TEST(RamseyOnAtom, BellStatesToPhasedPsiStates) {
  // R2(pi, 3pi/4) maps Phi+/- to (|01> +- i|10>)/sqrt2 up to global phase.
  const Operator u = ramsey_on_atom(2, {pi, 3.0 * pi / 4.0});
  const auto b = superadd::bell_states();
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  StateVector plus = StateVector::Zero(4), minus = StateVector::Zero(4);
  plus(1) = r;
  plus(2) = i * r;
  minus(1) = r;
  minus(2) = -i * r;
  const StateVector out_p = u * b.phi_plus;
  const StateVector out_m = u * b.phi_minus;
  EXPECT_NEAR(fidelity(out_p, plus) + fidelity(out_p, minus), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(out_m, plus) + fidelity(out_m, minus), 1.0, 1e-12);
  EXPECT_NEAR(std::max(fidelity(out_p, plus), fidelity(out_p, minus)), 1.0, 1e-12);
  EXPECT_LE(std::min(fidelity(out_p, plus), fidelity(out_m, plus)), 1e-12);
}

TEST(TavisCummings, ZeroDurationIsIdentity) { EXPECT_LE(max_abs(tavis_cummings({0.0}) - identity(4)), 0.0); }

TEST(TavisCummings, FullPeriodMiddleBlockIsIdentity) {
  EXPECT_LE(max_abs(tavis_cummings({pi}) - identity(4)), 1e-15);
}

TEST(TavisCummings, HalfPiExchangesWithMinusSign) {
  const Operator u = tavis_cummings({pi / 2.0});
  EXPECT_LE((u * basis_state(4, 1) + basis_state(4, 2)).norm(), 1e-15);
  EXPECT_LE((u * basis_state(4, 2) + basis_state(4, 1)).norm(), 1e-15);
}

TEST(TavisCummings, CouplingScalesTime) {
  EXPECT_LE(max_abs(tavis_cummings({0.5, 3.0}) - tavis_cummings({1.5, 1.0})), 1e-15);
}

TEST(TavisCummings, ExcitationBlocksDecoupled) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t(0.0, 10.0);
  for (int n = 0; n < 100; ++n) {
    const Operator u = tavis_cummings({t(rng)});
    for (int a : {0, 3})
      for (int b : {1, 2}) {
        EXPECT_EQ(u(a, b), Complex(0.0));
        EXPECT_EQ(u(b, a), Complex(0.0));
      }
  }
}

TEST(TavisCummings, Errors) {
  EXPECT_THROW(tavis_cummings({-1.0}), DomainError);
  EXPECT_THROW(tavis_cummings({1.0, 1.0, 0.1}), DomainError);
  EXPECT_THROW(delayed_tavis_cummings({1.0, 1.0, 1.5}), DomainError);
  EXPECT_THROW(delayed_tavis_cummings({1.0, 1.0, -0.1}), DomainError);
}

TEST(DelayedTavisCummings, ZeroDelayIsIdeal) {
  EXPECT_LE(max_abs(delayed_tavis_cummings({0.7, 1.0, 0.0}) - tavis_cummings({0.7})), 0.0);
}

TEST(DelayedTavisCummings, FullDelayIsLocalPhasesOnly) {
  const double t = 0.9;
  const Operator u = delayed_tavis_cummings({t, 1.0, t});
  EXPECT_LE(max_abs(u - dispersive_phase(1, t) * dispersive_phase(2, t)), 1e-15);
  // Diagonal, so no two-atom exchange at all.
  EXPECT_EQ(u(1, 2), Complex(0.0));
}

TEST(DelayedTavisCummings, ContinuousAtZero) {
  const double t = 3.0 * pi / 4.0;
  EXPECT_LE(max_abs(delayed_tavis_cummings({t, 1.0, 1e-6 * t}) - tavis_cummings({t})), 1e-4);
}

TEST(Compile, EmptySequenceIsIdentity) {
  EXPECT_LE(max_abs(compile({4, {}}) - identity(4)), 0.0);
  EXPECT_LE(max_abs(compile({3, {}}) - identity(3)), 0.0);
}

TEST(Compile, LaterStepsMultiplyOnTheLeft) {
  const RamseyPulse a{0.3, 0.1}, b{1.1, -0.4};
  const PulseSequence seq{4, {RamseyOnAtom{1, a}, RamseyOnAtom{2, b}, TavisCummings{{0.8}}}};
  const Operator expected = tavis_cummings({0.8}) * ramsey_on_atom(2, b) * ramsey_on_atom(1, a);
  EXPECT_LE(max_abs(compile(seq) - expected), 1e-15);
}

TEST(Compile, SplitsIntoSubsequences) {
  const auto seq = superadd::seven_step_sequence();
  PulseSequence head{4, {seq.steps.begin(), seq.steps.begin() + 3}};
  PulseSequence tail{4, {seq.steps.begin() + 3, seq.steps.end()}};
  EXPECT_LE(max_abs(compile(seq) - compile(tail) * compile(head)), 1e-14);
}

TEST(Compile, IdpOrderReproducesNaimarkUnitary) {
  const double theta = 0.37;
  EXPECT_TRUE(equal_up_to_global_phase(compile(idp::idp_pulse_sequence(theta)), idp::naimark_unitary(theta)));
}

TEST(Compile, RejectsMixedDimensions) {
  const PulseSequence seq{4, {RamseyOnAtom{1, {1.0, 0.0}}, ThreeLevelCoupling{1, 2, {1.0, 0.0}}}};
  EXPECT_THROW(compile(seq), DomainError);
  EXPECT_THROW(compile({5, {}}), DomainError);
}

TEST(Relabel, IdentityWitness) {
  std::mt19937_64 rng(8);
  const Operator u = oracle::random_unitary(4, rng);
  const auto m = matches_up_to_relabel(u, u);
  ASSERT_TRUE(m.matched);
  EXPECT_EQ(m.permutation, (std::vector<int>{0, 1, 2, 3}));
  for (auto ph : m.phases) EXPECT_NEAR(std::abs(ph - Complex(1.0)), 0.0, 1e-12);
}

TEST(Relabel, SwappedAndPhasedRows) {
  std::mt19937_64 rng(9);
  const Operator t = oracle::random_unitary(4, rng);
  Operator u = t;
  u.row(0) = t.row(2);
  u.row(2) = std::exp(Complex{0.0, 1.2}) * t.row(0);
  const auto m = matches_up_to_relabel(u, t);
  ASSERT_TRUE(m.matched);
  EXPECT_EQ(m.permutation, (std::vector<int>{2, 1, 0, 3}));
  EXPECT_NEAR(std::arg(m.phases[2]), 1.2, 1e-12);
}

TEST(Relabel, RejectsUnrelatedUnitary) {
  std::mt19937_64 rng(10);
  EXPECT_FALSE(matches_up_to_relabel(oracle::random_unitary(4, rng), oracle::random_unitary(4, rng)).matched);
}

TEST(Relabel, BellDecoderIsRelabelledBellBasis) {
  EXPECT_TRUE(matches_up_to_relabel(compile(superadd::bell_sequence()), superadd::bell_target()).matched);
}

TEST(GateUnitarity, RandomDraws) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> a(-20.0, 20.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    const RamseyPulse p{a(rng), a(rng)};
    const double t = std::abs(a(rng));
    EXPECT_TRUE(is_unitary(ramsey(p), 1e-10));
    EXPECT_TRUE(is_unitary(ramsey_on_atom(1 + n % 2, p), 1e-10));
    EXPECT_TRUE(is_unitary(embed_three_level(1 + n % 2, 3, p), 1e-10));
    EXPECT_TRUE(is_unitary(tavis_cummings({t}), 1e-10));
    EXPECT_TRUE(is_unitary(delayed_tavis_cummings({t, 1.0, u01(rng) * t}), 1e-10));
  }
}

TEST(Json, SequenceRoundTrip) {
  const PulseSequence seq = superadd::seven_step_sequence(2.0, 0.01);
  const nlohmann::json j = seq;
  const auto back = j.get<PulseSequence>();
  EXPECT_LE(max_abs(compile(back) - compile(seq)), 0.0);
  EXPECT_EQ(j.at("steps").size(), 7u);
  EXPECT_EQ(j.at("steps")[2].at("type"), "tavis_cummings");

  const PulseSequence idp_seq = idp::idp_pulse_sequence(0.4);
  EXPECT_LE(max_abs(compile(nlohmann::json(idp_seq).get<PulseSequence>()) - compile(idp_seq)), 0.0);
}

TEST(Json, RejectsUnknownStepType) {
  const auto j = nlohmann::json::parse(R"({"dim": 4, "steps": [{"type": "laser", "theta": 1}]})");
  EXPECT_THROW(j.get<PulseSequence>(), DomainError);
  const auto k = nlohmann::json::parse(R"({"dim": 3, "steps": [{"type": "three_level", "levels": [1], "theta": 1}]})");
  EXPECT_THROW(k.get<PulseSequence>(), DomainError);
}
