#include "pei/unitary_pei.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace pei::unitary {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int half_ceil(int n) { return (n + 1) / 2; }
}  // namespace

UnitaryProblem::UnitaryProblem(int n_devices, double rotation_angle)
    : n(n_devices), phi(rotation_angle) {
  if (n < 2) throw std::invalid_argument("unitary problem requires n >= 2");
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
}

double UnitaryProblem::folded_phi() const {
  return phi <= std::numbers::pi ? phi : kTwoPi - phi;
}

SymmetricInput::SymmetricInput(RealVec c) : coefficients(std::move(c)) {
  if (coefficients.size() < 2) {
    throw std::invalid_argument("symmetric input needs at least two weights");
  }
  if (coefficients.minCoeff() < 0.0) {
    throw std::invalid_argument("symmetric-input coefficients must be nonnegative");
  }
  if (std::abs(coefficients.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("symmetric-input coefficients must sum to 1");
  }
}

SymmetricInput SymmetricInput::single_weight(int n, int m) {
  if (m < 0 || m > n) throw std::out_of_range("Dicke weight out of range");
  RealVec c = RealVec::Zero(n + 1);
  c(m) = 1.0;
  return SymmetricInput(std::move(c));
}

SymmetricInput SymmetricInput::binomial(int n) {
  RealVec c(n + 1);
  const double scale = std::pow(2.0, -n);
  for (int m = 0; m <= n; ++m) c(m) = pei::binomial(n, m) * scale;
  c /= c.sum();
  return SymmetricInput(std::move(c));
}

double overlap_coefficient(int n, int m, double phi) {
  if (n < 2) throw std::invalid_argument("overlap coefficient requires n >= 2");
  if (m < 0 || m > n) throw std::out_of_range("Dicke weight out of range");
  const double s2 = std::sin(phi / 2.0) * std::sin(phi / 2.0);
  return 1.0 - 4.0 * m * (n - m) * s2 / (double(n) * (n - 1));
}

double phi_min(int n) {
  if (n < 2) throw std::invalid_argument("phi_min requires n >= 2");
  const int h = half_ceil(n);
  return std::acos(-1.0 + 1.0 / h);
}

SymmetricInput optimal_input(const UnitaryProblem& problem) {
  const double f = problem.folded_phi();
  if (f <= 0.0) {
    throw std::invalid_argument("phi = 0 leaves all hypothesis states identical");
  }
  const int h = half_ceil(problem.n);
  if (f <= phi_min(problem.n) + 1e-15) {
    return SymmetricInput::single_weight(problem.n, h);
  }
  const double s2 = std::sin(f / 2.0) * std::sin(f / 2.0);
  const double ch = (2.0 * h - 1.0) / (2.0 * h * s2);
  RealVec c = RealVec::Zero(problem.n + 1);
  c(h) = ch;
  c(0) = 1.0 - ch;
  return SymmetricInput(std::move(c));
}

double ps_unitary(int n, double phi) { return ps_unitary(UnitaryProblem(n, phi)); }

double ps_unitary(const UnitaryProblem& problem) {
  const double f = problem.folded_phi();
  if (f > phi_min(problem.n)) return 1.0;
  const double b = overlap_coefficient(problem.n, half_ceil(problem.n), f);
  return disc::srm_equal_overlap_value(problem.n, 1.0, b);
}

std::vector<Vec> rotated_states(const UnitaryProblem& problem,
                                const SymmetricInput& input, int oracle_cap) {
  const int n = problem.n;
  if (input.coefficients.size() != n + 1) {
    throw std::invalid_argument("coefficient count must be n + 1");
  }
  if (n > oracle_cap) {
    throw ResourceCapError("rotated_states: " + std::to_string(n) +
                           " qubits exceed the oracle cap of " +
                           std::to_string(oracle_cap));
  }
  const double f = problem.folded_phi();
  const std::int64_t d = std::int64_t{1} << n;

  Vec psi = Vec::Zero(d);
  for (int m = 0; m <= n; ++m) {
    if (input.coefficients(m) == 0.0) continue;
    psi += std::sqrt(input.coefficients(m)) * dicke_state(n, m).amplitudes();
  }

  // The faulty gate is diagonal in this basis: phase e^{+i phi/2} on |0>,
  // e^{-i phi/2} on |1> of the affected qubit.
  std::vector<Vec> states;
  states.reserve(n);
  for (int k = 0; k < n; ++k) {
    const std::int64_t mask = std::int64_t{1} << (n - 1 - k);
    Vec v = psi;
    const Complex up = std::polar(1.0, f / 2.0);
    const Complex down = std::polar(1.0, -f / 2.0);
    for (std::int64_t x = 0; x < d; ++x) {
      v(x) *= (x & mask) ? down : up;
    }
    states.push_back(std::move(v));
  }
  return states;
}

UnitaryOracleResult unitary_oracle(const UnitaryProblem& problem,
                                   const SymmetricInput& input, int oracle_cap) {
  auto states = rotated_states(problem, input, oracle_cap);
  disc::Ensemble ensemble = disc::Ensemble::uniform_pure(std::move(states));

  UnitaryOracleResult result;
  result.gram = gram_of(ensemble);
  result.srm_value = disc::srm_success_probability(result.gram);
  if (problem.n <= 6) {
    disc::FixedPointResult fp = disc::fixed_point_optimal_povm(
        ensemble, {.max_iter = 20000, .tol = 1e-11});
    result.fixed_point_value = fp.povm.success_probability;
    result.certificate_slack = fp.certificate.slack;
  }
  return result;
}

}  // namespace pei::unitary
