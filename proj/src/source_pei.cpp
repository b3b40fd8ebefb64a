#include "pei/source_pei.hpp"

#include <cmath>
#include <numbers>

namespace pei::source {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SourceProblem::SourceProblem(int n_devices, double fault_angle)
    : n(n_devices), phi(fault_angle) {
  if (n < 1) throw std::invalid_argument("source problem requires n >= 1");
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
}

double SourceProblem::folded_phi() const {
  return phi <= std::numbers::pi ? phi : kTwoPi - phi;
}

disc::Ensemble source_states(const SourceProblem& problem, int qubit_cap) {
  if (problem.n > qubit_cap) {
    throw ResourceCapError("source_states: " + std::to_string(problem.n) +
                           " qubits exceed the cap of " + std::to_string(qubit_cap));
  }
  const double f = problem.folded_phi();
  const Complex c = std::cos(f / 2.0);
  const Complex s = std::sin(f / 2.0);
  const std::int64_t d = std::int64_t{1} << problem.n;

  std::vector<Vec> states;
  states.reserve(problem.n);
  for (int k = 0; k < problem.n; ++k) {
    Vec v = Vec::Zero(d);
    // |0>^(k) |phi> |0>^(n-k-1): support on basis states 0 and the bit at slot k.
    const std::int64_t mask = std::int64_t{1} << (problem.n - 1 - k);
    v(0) = c;
    v(mask) = s;
    states.push_back(std::move(v));
  }
  return disc::Ensemble::uniform_pure(std::move(states));
}

disc::GramMatrix source_gram_closed_form(const SourceProblem& problem) {
  const int n = problem.n;
  const double f = problem.folded_phi();
  const double c2 = std::cos(f / 2.0) * std::cos(f / 2.0);
  const double s2 = 1.0 - c2;

  disc::GramMatrix g;
  g.entries = Mat::Constant(n, n, Complex(c2 / n, 0.0));
  g.entries.diagonal().setConstant(Complex(1.0 / n, 0.0));
  g.is_circulant = true;
  // Ascending: the flat eigenvalue sin^2/n is never above (1+(n-1)cos^2)/n.
  g.eigenvalues = RealVec::Constant(n, s2 / n);
  g.eigenvalues(n - 1) = (1.0 + (n - 1) * c2) / n;
  return g;
}

double ps_star(int n, double phi) { return ps_star(SourceProblem(n, phi)); }

double ps_star(const SourceProblem& problem) {
  const int n = problem.n;
  const double f = problem.folded_phi();
  const double c2 = std::cos(f / 2.0) * std::cos(f / 2.0);
  const double s = std::sin(f / 2.0);
  const double root = std::sqrt(1.0 + (n - 1) * c2) + (n - 1) * s;
  return (root / n) * (root / n);
}

SourceReport verify_source(const SourceProblem& problem,
                           disc::FixedPointOptions oracle_opts, int qubit_cap) {
  SourceReport report;
  report.closed = ps_star(problem);

  disc::Ensemble ensemble = source_states(problem, qubit_cap);
  disc::GramMatrix gram = gram_of(ensemble);
  report.srm = disc::srm_success_probability(gram);

  disc::FixedPointResult fp = disc::fixed_point_optimal_povm(ensemble, oracle_opts);
  report.fixed_point = fp.povm.success_probability;
  report.certificate_slack = fp.certificate.slack;

  report.max_disagreement =
      std::max({std::abs(report.closed - report.srm),
                std::abs(report.closed - report.fixed_point),
                std::abs(report.srm - report.fixed_point)});
  return report;
}

}  // namespace pei::source
