#pragma once

// Probability operator measures: effect validation, the trace rule,
// multinomial sampling of outcomes, and noisy lifts of projective detection.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/qmat.hpp"

namespace cqed {

struct Effect {
  std::string label;
  Operator op;
};

class Pom {
 public:
  explicit Pom(std::vector<Effect> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw DomainError("Pom: no effects");
    dim_ = effects_.front().op.rows();
    for (const auto& e : effects_) {
      if (e.op.rows() != dim_ || e.op.cols() != dim_)
        throw DomainError("Pom: effect '" + e.label + "' has inconsistent shape");
      require_finite(e.op, "Pom");
    }
  }

  Index dim() const { return dim_; }
  std::size_t size() const { return effects_.size(); }
  const std::vector<Effect>& effects() const { return effects_; }
  const Effect& operator[](std::size_t i) const { return effects_.at(i); }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(effects_.size());
    for (const auto& e : effects_) out.push_back(e.label);
    return out;
  }

 private:
  Index dim_ = 0;
  std::vector<Effect> effects_;
};

struct PomDiagnostics {
  double completeness_defect = 0.0;  // max |sum_j Pi_j - I|
  std::vector<double> min_eigenvalues;
  double hermiticity_defect = 0.0;
  bool valid = false;
};

inline PomDiagnostics validate(const Pom& pom, double tolerance = tol::kUnitary) {
  PomDiagnostics d;
  Operator sum = Operator::Zero(pom.dim(), pom.dim());
  for (const auto& e : pom.effects()) {
    sum += e.op;
    d.hermiticity_defect = std::max(d.hermiticity_defect, max_abs(e.op - e.op.adjoint()));
    const Operator sym = 0.5 * (e.op + e.op.adjoint());
    d.min_eigenvalues.push_back(Eigen::SelfAdjointEigenSolver<Operator>(sym).eigenvalues().minCoeff());
  }
  d.completeness_defect = max_abs(sum - identity(pom.dim()));
  d.valid = d.completeness_defect <= tolerance && d.hermiticity_defect <= tolerance;
  for (double m : d.min_eigenvalues) d.valid = d.valid && m >= -tolerance;
  return d;
}

struct OutcomeDistribution {
  std::vector<std::string> labels;
  std::vector<double> probabilities;

  double at(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return probabilities[i];
    throw DomainError("OutcomeDistribution: unknown label '" + std::string(label) + "'");
  }
};

namespace detail {

inline double clamp_probability(double p) {
  constexpr double kSlack = 1e-12;
  if (p < -kSlack || p > 1.0 + kSlack)
    throw NumericError("probability " + std::to_string(p) + " outside [0,1]");
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace detail

/// Trace rule p(j) = Tr(rho Pi_j) for a density operator.
inline OutcomeDistribution outcome_probs(const Operator& rho, const Pom& pom) {
  if (rho.rows() != pom.dim() || rho.cols() != pom.dim())
    throw DomainError("outcome_probs: state and POM dimensions differ");
  if (std::abs(rho.trace() - 1.0) > tol::kAnalytic)
    throw DomainError("outcome_probs: density operator is not unit trace");
  OutcomeDistribution out{pom.labels(), {}};
  out.probabilities.reserve(pom.size());
  for (const auto& e : pom.effects())
    out.probabilities.push_back(detail::clamp_probability((rho * e.op).trace().real()));
  return out;
}

/// Trace rule for a pure state, <psi|Pi_j|psi>.
inline OutcomeDistribution outcome_probs(const StateVector& psi, const Pom& pom) {
  if (psi.size() != pom.dim()) throw DomainError("outcome_probs: state and POM dimensions differ");
  if (!is_normalized(psi)) throw DomainError("outcome_probs: state is not normalized");
  OutcomeDistribution out{pom.labels(), {}};
  out.probabilities.reserve(pom.size());
  for (const auto& e : pom.effects())
    out.probabilities.push_back(detail::clamp_probability(psi.dot(e.op * psi).real()));
  return out;
}

/// Multinomial draw of n outcomes. Deterministic for a fixed seed: the
/// counts are drawn label by label as conditional binomials.
inline std::vector<std::uint64_t> sample(const OutcomeDistribution& dist, std::uint64_t n,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(dist.probabilities.size(), 0);
  std::uint64_t remaining = n;
  double mass = 1.0;
  for (std::size_t i = 0; i < counts.size() && remaining > 0; ++i) {
    if (i + 1 == counts.size()) {
      counts[i] = remaining;
      break;
    }
    const double p = mass > 0.0 ? std::clamp(dist.probabilities[i] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> draw(remaining, p);
    counts[i] = draw(rng);
    remaining -= counts[i];
    mass -= dist.probabilities[i];
  }
  return counts;
}

/// effect_k = sum_j confusion(k, j) P_j, where confusion(k, j) is the
/// probability of reporting k when the system is really in outcome j.
inline Pom noisy_projective_pom(std::span<const Operator> projectors, const Eigen::MatrixXd& confusion,
                                std::vector<std::string> labels = {}) {
  const auto n = static_cast<Index>(projectors.size());
  if (n == 0) throw DomainError("noisy_projective_pom: no projectors");
  if (confusion.rows() != n || confusion.cols() != n)
    throw DomainError("noisy_projective_pom: confusion matrix shape mismatch");
  for (Index j = 0; j < n; ++j) {
    if ((confusion.col(j).array() < 0.0).any() || (confusion.col(j).array() > 1.0).any() ||
        std::abs(confusion.col(j).sum() - 1.0) > tol::kAnalytic)
      throw DomainError("noisy_projective_pom: confusion matrix is not column-stochastic");
  }
  if (labels.empty())
    for (Index k = 0; k < n; ++k) labels.push_back(std::to_string(k));
  if (static_cast<Index>(labels.size()) != n) throw DomainError("noisy_projective_pom: label count");

  const Index dim = projectors.front().rows();
  std::vector<Effect> effects;
  for (Index k = 0; k < n; ++k) {
    Operator op = Operator::Zero(dim, dim);
    for (Index j = 0; j < n; ++j) op += confusion(k, j) * projectors[j];
    effects.push_back({labels[k], std::move(op)});
  }
  return Pom(std::move(effects));
}

/// Projective measurement in the computational basis of dimension dim,
/// labelled by bit strings of `width` digits (width 0 uses plain indices).
inline Pom computational_basis_pom(Index dim, int width = 0) {
  std::vector<Effect> effects;
  for (Index k = 0; k < dim; ++k) {
    std::string label;
    if (width > 0) {
      for (int b = width - 1; b >= 0; --b) label += ((k >> b) & 1) ? '1' : '0';
    } else {
      label = std::to_string(k);
    }
    effects.push_back({label, projector(basis_state(dim, k))});
  }
  return Pom(std::move(effects));
}

}  // namespace cqed
