#pragma once

// Imperfection models: detector misidentification surfaces and the
// inter-atom delay in the cavity passes.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cqed/noise.hpp"
#include "cqed/superadd.hpp"

namespace cqed::imperfect {

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// written by exactly one worker, so results assembled by index are
/// independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

inline std::string format6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

}  // namespace detail

inline std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps == 0) return {};
  if (steps == 1) return {lo};
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  out.back() = hi;
  return out;
}

struct GainPoint {
  double p = 0.0;
  double q = 0.0;
  double i2 = 0.0;
  double c1 = 0.0;
  double g = 0.0;   // I2/2 - C1(p,q)
  double g0 = 0.0;  // I2/2 - C1(0,0)
};

/// Row-major over (p, q): points[i * qs.size() + j] is (ps[i], qs[j]).
struct DetectionSweep {
  superadd::Decoder decoder = superadd::Decoder::usa;
  std::vector<double> ps;
  std::vector<double> qs;
  std::vector<GainPoint> points;

  const GainPoint& at(std::size_t i, std::size_t j) const { return points.at(i * qs.size() + j); }
};

inline GainPoint evaluate_point(const Operator& decoder, DetectionNoise noise, double c1_ideal,
                                NoiseConvention convention = NoiseConvention::standard) {
  const auto r = superadd::evaluate(decoder, noise, convention);
  return {noise.p, noise.q, r.i2, r.c1, r.gain, r.i2 / 2.0 - c1_ideal};
}

inline DetectionSweep detection_sweep(superadd::Decoder decoder, std::vector<double> ps, std::vector<double> qs,
                                      NoiseConvention convention = NoiseConvention::standard,
                                      unsigned threads = 0) {
  for (double v : ps) validate(DetectionNoise{v, 0.0});
  for (double v : qs) validate(DetectionNoise{0.0, v});
  DetectionSweep sweep{decoder, std::move(ps), std::move(qs), {}};
  sweep.points.resize(sweep.ps.size() * sweep.qs.size());
  const Operator u = superadd::decoder_unitary(decoder);
  const double c1_ideal = superadd::single_channel_capacity();
  const std::size_t nq = sweep.qs.size();
  detail::parallel_for(sweep.points.size(), threads, [&](std::size_t k) {
    sweep.points[k] = evaluate_point(u, {sweep.ps[k / nq], sweep.qs[k % nq]}, c1_ideal, convention);
  });
  return sweep;
}

/// max |G(p,q) - G(q,p)| over a square grid.
inline double max_asymmetry(const DetectionSweep& sweep) {
  if (sweep.ps != sweep.qs) throw DomainError("max_asymmetry: grid is not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < sweep.ps.size(); ++i)
    for (std::size_t j = 0; j < sweep.qs.size(); ++j)
      worst = std::max(worst, std::abs(sweep.at(i, j).g - sweep.at(j, i).g));
  return worst;
}

inline void write_csv(std::ostream& os, const DetectionSweep& sweep) {
  os << "p,q,I2,C1,G,G0\n";
  for (const auto& pt : sweep.points)
    os << detail::format6(pt.p) << ',' << detail::format6(pt.q) << ',' << detail::format6(pt.i2) << ','
       << detail::format6(pt.c1) << ',' << detail::format6(pt.g) << ',' << detail::format6(pt.g0) << '\n';
}

// ---------------------------------------------------------------------------
// Delay between the two atoms in each cavity pass.

/// Which interaction time a fractional delay is measured against.
enum class DelayReference { t1, t2, max };

inline double reference_time(DelayReference ref, double coupling = 1.0) {
  const double t1 = superadd::first_cavity_angle() / coupling;
  const double t2 = superadd::second_cavity_angle() / coupling;
  switch (ref) {
    case DelayReference::t1: return t1;
    case DelayReference::t2: return t2;
    case DelayReference::max: return std::max(t1, t2);
  }
  return t1;
}

/// Largest fraction for which the delay still fits inside both passes.
inline double max_delay_fraction(DelayReference ref) {
  return std::min(superadd::first_cavity_angle(), superadd::second_cavity_angle()) / reference_time(ref);
}

/// Seven-step decoder with both cavity passes degraded by the same delay
/// t_d = delta * reference_time(ref).
inline Operator delayed_decoder(double delta, DelayReference ref = DelayReference::max) {
  if (!(delta >= 0.0)) throw DomainError("delay fraction must be non-negative");
  const double td = delta * reference_time(ref);
  if (td > superadd::second_cavity_angle() * (1.0 + 1e-12))
    throw DomainError("delay fraction " + detail::format6(delta) +
                      " exceeds the second cavity interaction time t2 (max fraction " +
                      detail::format6(max_delay_fraction(ref)) + ")");
  return compile(superadd::seven_step_sequence(1.0, std::min(td, superadd::second_cavity_angle())));
}

inline double sqcg_with_delay(double delta, DelayReference ref = DelayReference::max) {
  return superadd::evaluate(delayed_decoder(delta, ref)).gain;
}

struct DelayPoint {
  double delta = 0.0;
  double sqcg = 0.0;
};

inline std::vector<DelayPoint> delay_sweep(std::span<const double> deltas,
                                           DelayReference ref = DelayReference::max, unsigned threads = 0) {
  for (double d : deltas) (void)delayed_decoder(d, ref);  // fail before any work is spread out
  std::vector<DelayPoint> out(deltas.size());
  detail::parallel_for(out.size(), threads, [&](std::size_t k) {
    out[k] = {deltas[k], sqcg_with_delay(deltas[k], ref)};
  });
  return out;
}

inline void write_csv(std::ostream& os, std::span<const DelayPoint> points) {
  os << "delta,sqcg\n";
  for (const auto& pt : points) os << detail::format6(pt.delta) << ',' << detail::format6(pt.sqcg) << '\n';
}

/// Fidelity of the EPR state made from |eg> by one pi/4 pass, with atom 2
/// delayed by `fraction` of the pass time, against the undelayed output.
inline double epr_fidelity(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw DomainError("epr_fidelity: fraction must be in [0,1]");
  const double x = std::numbers::pi / 4.0;
  const StateVector eg = basis_state(4, 2);
  const StateVector ideal = tavis_cummings({x, 1.0, 0.0}) * eg;
  const StateVector actual = delayed_tavis_cummings({x, 1.0, fraction * x}) * eg;
  return fidelity(ideal, actual);
}

}  // namespace cqed::imperfect
