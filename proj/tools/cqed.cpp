// Command-line front end: idp, superadd, sweep {detection,delay}, verify.
// Exit codes: 0 success, 1 verify found failures, 2 argument/domain error,
// 3 numeric-contract violation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/idp.hpp"
#include "cqed/imperfect.hpp"
#include "cqed/superadd.hpp"
#include "cqed/testing/acceptance.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitArgument = 2;
constexpr int kExitNumeric = 3;

// Relative paths land in $CQED_OUTPUT_DIR when it is set.
fs::path resolve_output(const std::string& out) {
  fs::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CQED_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  return p;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  const fs::path path = resolve_output(out);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw cqed::DomainError("cannot open output file " + path.string());
  f << text;
  f.close();
  if (!f) throw cqed::DomainError("failed writing output file " + path.string());
  std::cerr << "wrote " << path.string() << '\n';
}

json interval_json(const cqed::idp::Interval& i) { return json::array({i.low, i.high}); }

json conditional_json(const cqed::idp::Statistics& s) {
  const char* outcomes[] = {"1", "2", "?"};
  json j;
  for (int state = 0; state < 2; ++state) {
    json row;
    for (int k = 0; k < 3; ++k) row[outcomes[k]] = s.at(k, state);
    j["psi" + std::to_string(state + 1)] = row;
  }
  return j;
}

struct IdpArgs {
  double theta = std::numbers::pi / 8.0;
  double prior1 = 0.5;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool degrees = false;
  std::string out;
};

int run_idp(const IdpArgs& a) {
  using namespace cqed;
  const double theta = a.degrees ? a.theta * std::numbers::pi / 180.0 : a.theta;
  const idp::Problem problem{theta, a.prior1};
  idp::validate(problem);

  const auto pom = idp::idp_statistics(problem, idp::Route::pom);
  const auto pulses = idp::idp_statistics(problem, idp::Route::pulses);
  json j{{"theta", theta},
         {"prior1", a.prior1},
         {"pom_probs", conditional_json(pom)},
         {"pulse_probs", conditional_json(pulses)},
         {"p_inconclusive", pom.p_inconclusive},
         {"p_error", pom.p_error},
         {"projective_baseline", idp::projective_baseline(problem)},
         {"advantage_interval", interval_json(idp::advantage_interval(theta))},
         {"paper_interval", interval_json(idp::secant_form_interval(theta))}};

  if (a.samples > 0) {
    // Outcomes of the prior-weighted mixture, measured with the POM.
    OutcomeDistribution mix{{"1", "2", "?"}, {}};
    for (int k = 0; k < 3; ++k)
      mix.probabilities.push_back(problem.prior1 * pom.at(k, 0) + problem.prior2() * pom.at(k, 1));
    const auto counts = sample(mix, a.samples, a.seed);
    json freq, exact;
    for (int k = 0; k < 3; ++k) {
      freq[mix.labels[k]] = static_cast<double>(counts[k]) / static_cast<double>(a.samples);
      exact[mix.labels[k]] = mix.probabilities[k];
    }
    j["samples"] = {{"n", a.samples}, {"seed", a.seed}, {"frequencies", freq}, {"exact", exact}};
  }
  emit(j.dump(2) + "\n", a.out);
  return 0;
}

const std::map<std::string, cqed::superadd::Decoder> kImpls{{"usa", cqed::superadd::Decoder::usa},
                                                            {"usa-prime", cqed::superadd::Decoder::usa_prime},
                                                            {"pulse", cqed::superadd::Decoder::pulse}};

const std::map<std::string, cqed::imperfect::DelayReference> kRefs{{"t1", cqed::imperfect::DelayReference::t1},
                                                                   {"t2", cqed::imperfect::DelayReference::t2},
                                                                   {"max", cqed::imperfect::DelayReference::max}};

struct SuperaddArgs {
  cqed::superadd::Decoder impl = cqed::superadd::Decoder::usa;
  double p = 0.0;
  double q = 0.0;
  double delta = 0.0;
  cqed::imperfect::DelayReference ref = cqed::imperfect::DelayReference::max;
  bool swap = false;
  std::string out;
};

cqed::NoiseConvention convention(bool swap) {
  return swap ? cqed::NoiseConvention::swapped : cqed::NoiseConvention::standard;
}

int run_superadd(const SuperaddArgs& a) {
  using namespace cqed;
  const DetectionNoise noise{a.p, a.q};
  validate(noise);
  if (a.delta != 0.0 && a.impl != superadd::Decoder::pulse)
    throw DomainError("--delta only applies to --impl pulse");
  const Operator u = a.impl == superadd::Decoder::pulse ? imperfect::delayed_decoder(a.delta, a.ref)
                                                        : superadd::decoder_unitary(a.impl);
  const auto r = superadd::evaluate(u, noise, convention(a.swap));

  json conditional = json::array();
  for (Index y = 0; y < r.channel.conditional.rows(); ++y) {
    json row = json::array();
    for (Index x = 0; x < r.channel.conditional.cols(); ++x) row.push_back(r.channel.conditional(y, x));
    conditional.push_back(row);
  }
  json j{{"impl", superadd::to_string(a.impl)},
         {"p", a.p},
         {"q", a.q},
         {"delta", a.delta},
         {"priors", r.channel.priors},
         {"outputs", r.channel.outputs},
         {"conditional", conditional},
         {"I2", r.i2},
         {"C1", r.c1},
         {"sqcg", r.gain}};
  emit(j.dump(2) + "\n", a.out);
  return 0;
}

struct SweepArgs {
  cqed::superadd::Decoder impl = cqed::superadd::Decoder::usa;
  std::size_t steps = 51;
  double max = 0.2;
  cqed::imperfect::DelayReference ref = cqed::imperfect::DelayReference::max;
  unsigned threads = 0;
  bool swap = false;
  std::string out;
};

int run_sweep_detection(const SweepArgs& a) {
  using namespace cqed;
  if (a.impl == superadd::Decoder::pulse) throw DomainError("detection sweeps take --impl usa or usa-prime");
  const auto grid = imperfect::linspace(0.0, 1.0, a.steps);
  const auto sweep = imperfect::detection_sweep(a.impl, grid, grid, convention(a.swap), a.threads);
  std::ostringstream os;
  imperfect::write_csv(os, sweep);
  emit(os.str(), a.out.empty() ? "sweep_detection.csv" : a.out);
  return 0;
}

int run_sweep_delay(const SweepArgs& a) {
  using namespace cqed;
  if (!(a.max >= 0.0)) throw DomainError("--max must be non-negative");
  const auto deltas = imperfect::linspace(0.0, a.max, a.steps);
  const auto points = imperfect::delay_sweep(deltas, a.ref, a.threads);
  std::ostringstream os;
  imperfect::write_csv(os, points);
  emit(os.str(), a.out.empty() ? "sweep_delay.csv" : a.out);
  return 0;
}

int run_verify(bool as_json) {
  const auto results = cqed::testing::run_acceptance();
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (as_json) {
    std::cout << json(results).dump(2) << '\n';
  } else {
    int passed = 0;
    for (const auto& r : results) {
      std::cout << cqed::testing::format_line(r) << '\n';
      passed += r.passed;
    }
    std::cout << passed << "/" << results.size() << " criteria passed\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavity-QED generalized measurement toolkit"};
  app.require_subcommand(1);

  IdpArgs idp_args;
  auto* idp = app.add_subcommand("idp", "unambiguous discrimination of two qubit states");
  idp->add_option("--theta", idp_args.theta, "half-angle between the states, in (0, pi/4)");
  idp->add_option("--prior1", idp_args.prior1, "prior of psi_1")->check(CLI::Range(0.0, 1.0));
  idp->add_option("--samples", idp_args.samples, "draw this many outcomes");
  idp->add_option("--seed", idp_args.seed, "sampler seed");
  idp->add_flag("--degrees", idp_args.degrees, "theta is given in degrees");
  idp->add_option("--out", idp_args.out, "JSON output path (default stdout)");

  SuperaddArgs sa_args;
  auto* sa = app.add_subcommand("superadd", "trine-code decoder: I2, C1 and the coding gain");
  sa->add_option("--impl", sa_args.impl, "usa | usa-prime | pulse")->transform(CLI::CheckedTransformer(kImpls));
  sa->add_option("--p", sa_args.p, "probability a 0 is read as 1")->check(CLI::Range(0.0, 1.0));
  sa->add_option("--q", sa_args.q, "probability a 1 is read as 0")->check(CLI::Range(0.0, 1.0));
  sa->add_option("--delta", sa_args.delta, "fractional inter-atom delay (pulse only)");
  sa->add_option("--delay-ref", sa_args.ref, "t1 | t2 | max")->transform(CLI::CheckedTransformer(kRefs));
  sa->add_flag("--swap-pq", sa_args.swap, "exchange the roles of p and q");
  sa->add_option("--out", sa_args.out, "JSON output path (default stdout)");

  SweepArgs sw_args;
  auto* sweep = app.add_subcommand("sweep", "parameter sweeps written as CSV");
  sweep->require_subcommand(1);
  auto* det = sweep->add_subcommand("detection", "G and G0 over a (p, q) grid on [0,1]^2");
  det->add_option("--impl", sw_args.impl, "usa | usa-prime")->transform(CLI::CheckedTransformer(kImpls));
  det->add_option("--steps", sw_args.steps, "grid points per axis")->check(CLI::Range(1, 1000));
  det->add_option("--threads", sw_args.threads, "worker threads (0 = all cores)");
  det->add_flag("--swap-pq", sw_args.swap, "exchange the roles of p and q");
  det->add_option("--out", sw_args.out, "CSV path (default sweep_detection.csv)");
  auto* del = sweep->add_subcommand("delay", "coding gain against the inter-atom delay");
  del->add_option("--max", sw_args.max, "largest delay fraction");
  del->add_option("--steps", sw_args.steps, "number of delay values")->check(CLI::Range(1, 100000));
  del->add_option("--delay-ref", sw_args.ref, "t1 | t2 | max")->transform(CLI::CheckedTransformer(kRefs));
  del->add_option("--threads", sw_args.threads, "worker threads (0 = all cores)");
  del->add_option("--out", sw_args.out, "CSV path (default sweep_delay.csv)");

  bool verify_json = false;
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_flag("--json", verify_json, "machine-readable results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitArgument;
  }

  try {
    if (*idp) return run_idp(idp_args);
    if (*sa) return run_superadd(sa_args);
    if (*det) return run_sweep_detection(sw_args);
    if (*del) return run_sweep_delay(sw_args);
    if (*verify) return run_verify(verify_json);
  } catch (const cqed::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgument;
  } catch (const cqed::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
