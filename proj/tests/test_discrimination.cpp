#include "pei/discrimination.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pei;
using namespace pei::disc;

namespace {

constexpr double kPi = std::numbers::pi;

// Faulty-source hypothesis states |0..0 phi 0..0>.
std::vector<Vec> source_vectors(int n, double phi) {
  std::vector<Vec> out;
  const std::int64_t d = std::int64_t{1} << n;
  for (int k = 0; k < n; ++k) {
    Vec v = Vec::Zero(d);
    v(0) = std::cos(phi / 2);
    v(std::int64_t{1} << (n - 1 - k)) = std::sin(phi / 2);
    out.push_back(std::move(v));
  }
  return out;
}

double source_closed_form(int n, double phi) {
  const double c2 = std::cos(phi / 2) * std::cos(phi / 2);
  const double root = std::sqrt(1 + (n - 1) * c2) + (n - 1) * std::sin(phi / 2);
  return (root / n) * (root / n);
}

std::vector<Vec> orthonormal_basis_vectors(int n) {
  std::vector<Vec> out;
  for (int k = 0; k < n; ++k) {
    Vec v = Vec::Zero(n);
    v(k) = 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

Vec random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

KrausSet pauli_mix_kraus(double p0, double p1, double p2, double p3) {
  Mat2 x, y, z;
  x << 0, 1, 1, 0;
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  z << 1, 0, 0, -1;
  std::vector<Mat2> ops;
  if (p0 > 0) ops.push_back(std::sqrt(p0) * Mat2::Identity());
  if (p1 > 0) ops.push_back(std::sqrt(p1) * x);
  if (p2 > 0) ops.push_back(std::sqrt(p2) * y);
  if (p3 > 0) ops.push_back(std::sqrt(p3) * z);
  return KrausSet(ops);
}

}  // namespace

TEST_CASE("gram_of orthogonal states is I/N") {
  auto ens = Ensemble::uniform_pure(orthonormal_basis_vectors(4));
  GramMatrix g = gram_of(ens);
  CHECK((g.entries - Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(g.is_circulant);
}

TEST_CASE("gram_of identical states is the flat rank-one matrix") {
  Vec v(2);
  v << 1, 0;
  auto ens = Ensemble::uniform_pure({v, v, v});
  GramMatrix g = gram_of(ens);
  CHECK((g.entries - Mat::Constant(3, 3, Complex(1.0 / 3, 0))).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK(g.eigenvalues(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gram_of the three-source ensemble at phi = pi/2") {
  auto ens = Ensemble::uniform_pure(source_vectors(3, kPi / 2));
  GramMatrix g = gram_of(ens);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = i == j ? 1.0 / 3 : 1.0 / 6;
      CHECK(std::abs(g.entries(i, j) - expected) < 1e-14);
    }
  }
  CHECK(g.is_circulant);
}

TEST_CASE("gram_of rejects mixed ensembles and nonuniform priors") {
  std::vector<Mat> mixed = {Mat::Identity(2, 2) / 2.0, Mat::Identity(2, 2) / 2.0};
  RealVec priors(2);
  priors << 0.5, 0.5;
  auto ens = Ensemble::mixed(mixed, priors);
  CHECK_THROWS_AS(gram_of(ens), std::invalid_argument);

  Vec a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  RealVec skew(2);
  skew << 0.9, 0.1;
  CHECK_THROWS_AS(gram_of(Ensemble::pure_with_priors({a, b}, skew)),
                  std::invalid_argument);
}

TEST_CASE("srm value: orthogonal, identical and two-source ensembles") {
  auto orth = gram_of(Ensemble::uniform_pure(orthonormal_basis_vectors(5)));
  CHECK(srm_success_probability(orth) == doctest::Approx(1.0).epsilon(1e-12));

  Vec v(2);
  v << 0, 1;
  auto flat = gram_of(Ensemble::uniform_pure({v, v, v, v}));
  CHECK(srm_success_probability(flat) == doctest::Approx(0.25).epsilon(1e-12));

  auto g = gram_of(Ensemble::uniform_pure(source_vectors(2, kPi / 2)));
  CHECK(srm_success_probability(g) ==
        doctest::Approx(0.9330127018922193).epsilon(1e-12));
}

TEST_CASE("srm value is invariant under cyclic relabeling") {
  auto states = source_vectors(4, 1.1);
  auto g0 = gram_of(Ensemble::uniform_pure(states));
  std::rotate(states.begin(), states.begin() + 1, states.end());
  auto g1 = gram_of(Ensemble::uniform_pure(states));
  CHECK(srm_success_probability(g0) ==
        doctest::Approx(srm_success_probability(g1)).epsilon(1e-12));
}

TEST_CASE("srm_povm of an orthogonal ensemble projects onto the states") {
  auto ens = Ensemble::uniform_pure(orthonormal_basis_vectors(3));
  Povm povm = srm_povm(ens, gram_of(ens));
  CHECK_FALSE(povm.support_only);
  for (int k = 0; k < 3; ++k) {
    Mat expected = ens.pure[k] * ens.pure[k].adjoint();
    CHECK((povm.elements[k] - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(completeness_defect(ens, povm) < 1e-12);
}

TEST_CASE("srm_povm agrees with the Gram diagonal value") {
  auto ens = Ensemble::uniform_pure(source_vectors(2, kPi / 2));
  GramMatrix g = gram_of(ens);
  Povm povm = srm_povm(ens, g);
  CHECK(std::abs(povm.success_probability - srm_success_probability(g)) < 1e-9);
  CHECK(completeness_defect(ens, povm) < 1e-8);

  // Circulant symmetry: every <psi_k|m_k> overlap is equal.
  Mat s = hermitian_sqrt(g.entries);
  for (int k = 1; k < 2; ++k) {
    CHECK(std::abs(s(k, k) - s(0, 0)) < 1e-12);
  }
}

TEST_CASE("srm_povm falls back to the support for dependent states") {
  Vec v(2);
  v << 1, 0;
  auto ens = Ensemble::uniform_pure({v, v});
  Povm povm = srm_povm(ens, gram_of(ens));
  CHECK(povm.support_only);
  CHECK(completeness_defect(ens, povm) < 1e-8);
  CHECK(povm.success_probability == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("fixed point solver on orthogonal and identical pairs") {
  auto orth = Ensemble::uniform_pure(orthonormal_basis_vectors(2));
  auto r1 = fixed_point_optimal_povm(orth);
  CHECK(r1.converged);
  CHECK(r1.povm.success_probability == doctest::Approx(1.0).epsilon(1e-9));

  Vec v(2);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  auto same = Ensemble::uniform_pure({v, v});
  auto r2 = fixed_point_optimal_povm(same);
  CHECK(r2.povm.success_probability == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("fixed point matches the source closed form") {
  for (int n : {2, 4, 6}) {
    for (double phi : {kPi / 3, kPi / 2, 5 * kPi / 6}) {
      auto ens = Ensemble::uniform_pure(source_vectors(n, phi));
      auto r = fixed_point_optimal_povm(ens, {.max_iter = 20000, .tol = 1e-11});
      CHECK(std::abs(r.povm.success_probability - source_closed_form(n, phi)) <
            1e-7);
      CHECK(r.certificate.slack > -1e-8);
      CHECK(completeness_defect(ens, r.povm) < 1e-8);
      for (const auto& m : r.povm.elements) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
      }
    }
  }
}

TEST_CASE("fixed point never loses to the square-root measurement") {
  std::mt19937_64 rng(40412);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<Vec> states;
    for (int k = 0; k < n; ++k) states.push_back(random_state(4, rng));
    auto ens = Ensemble::uniform_pure(states);
    const double srm = srm_success_probability(gram_of(ens));
    auto r = fixed_point_optimal_povm(ens, {.max_iter = 20000, .tol = 1e-11});
    CHECK(r.povm.success_probability >= srm - 1e-9);
    // Weak duality at the claimed optimum.
    CHECK(r.certificate.objective >= r.povm.success_probability - 1e-8);
    CHECK(std::abs(r.certificate.objective - r.povm.success_probability) < 1e-6);
  }
}

TEST_CASE("fixed point reproduces the two-hypothesis trace-norm value") {
  // For two states the optimum is (1 + ||p1 rho1 - p2 rho2||_1)/2.
  std::mt19937_64 rng(61803);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 3;
    auto random_density = [&] {
      Mat b(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) b(i, j) = Complex(gauss(rng), gauss(rng));
      }
      Mat rho = b * b.adjoint();
      return Mat(rho / rho.trace().real());
    };
    const double p1 = 0.2 + 0.06 * trial;
    RealVec priors(2);
    priors << p1, 1 - p1;
    auto ens = Ensemble::mixed({random_density(), random_density()}, priors);

    Mat diff = priors(0) * ens.states[0] - priors(1) * ens.states[1];
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    const double helstrom = 0.5 * (1.0 + es.eigenvalues().cwiseAbs().sum());

    auto r = fixed_point_optimal_povm(ens, {.max_iter = 20000, .tol = 1e-12});
    CHECK(std::abs(r.povm.success_probability - helstrom) < 1e-8);
    CHECK(r.certificate.slack > -1e-8);
  }
}

TEST_CASE("dual certificate flags a deliberately bad POVM") {
  auto ens = Ensemble::uniform_pure(orthonormal_basis_vectors(2));
  Povm wrong;
  wrong.elements = {ens.states[1], ens.states[0]};  // guesses are swapped
  wrong.success_probability = 0.0;
  DualCertificate cert = check_dual_certificate(ens, wrong);
  CHECK(cert.slack < -1e-4);
  CHECK_FALSE(cert.valid());
}

TEST_CASE("dual certificate of a single-state ensemble") {
  Vec v(2);
  v << 1, 0;
  auto ens = Ensemble::uniform_pure({v});
  auto r = fixed_point_optimal_povm(ens);
  CHECK(r.povm.success_probability == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((r.certificate.gamma - ens.states[0]).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(r.certificate.slack) < 1e-9);
}

TEST_CASE("dual certificate validates the SRM for three sources") {
  auto ens = Ensemble::uniform_pure(source_vectors(3, kPi / 2));
  Povm povm = srm_povm(ens, gram_of(ens));
  DualCertificate cert = check_dual_certificate(ens, povm);
  CHECK(cert.slack > -1e-8);
  CHECK(std::abs(cert.objective - povm.success_probability) < 1e-8);
}

TEST_CASE("seesaw on the identity channel guesses uniformly") {
  KrausSet identity({Mat2::Identity()});
  SeesawOptions opts;
  opts.restarts = 2;
  auto r = seesaw_optimize(identity, 3, false, opts);
  CHECK(r.value == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("seesaw finds the balanced-dephasing optimum without ancillas") {
  auto kraus = pauli_mix_kraus(0.5, 0, 0, 0.5);
  SeesawOptions opts;
  opts.seed = 991;
  auto r = seesaw_optimize(kraus, 2, false, opts);
  CHECK(std::abs(r.value - 0.75) < 1e-6);
  CHECK(r.all_converged);
}

TEST_CASE("seesaw history is non-decreasing within the winning restart") {
  auto kraus = pauli_mix_kraus(0.25, 0.25, 0.25, 0.25);
  SeesawOptions opts;
  opts.restarts = 3;
  opts.seed = 5;
  auto r = seesaw_optimize(kraus, 2, false, opts);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i] >= r.history[i - 1] - 1e-9);
  }
}

TEST_CASE("seesaw is deterministic for a fixed seed") {
  auto kraus = pauli_mix_kraus(0.25, 0.25, 0.25, 0.25);
  SeesawOptions opts;
  opts.restarts = 3;
  opts.seed = 77;
  auto a = seesaw_optimize(kraus, 2, false, opts);
  auto b = seesaw_optimize(kraus, 2, false, opts);
  CHECK(a.value == b.value);
  CHECK(a.best_restart == b.best_restart);
}

TEST_CASE("iteration caps are reported instead of raised") {
  auto ens = Ensemble::uniform_pure(source_vectors(3, 0.9));
  auto starved = fixed_point_optimal_povm(ens, {.max_iter = 1, .tol = 1e-15});
  CHECK_FALSE(starved.converged);
  CHECK(starved.iterations == 1);
  CHECK(completeness_defect(ens, starved.povm) < 1e-8);

  KrausSet identity({Mat2::Identity()});
  SeesawOptions opts;
  opts.restarts = 2;
  opts.max_outer = 1;
  opts.tol = 1e-18;
  auto r = seesaw_optimize(identity, 2, false, opts);
  CHECK_FALSE(r.all_converged);
}

TEST_CASE("placement ensemble validates the register size") {
  KrausSet identity({Mat2::Identity()});
  Vec v = Vec::Zero(4);
  v(0) = 1.0;
  CHECK_THROWS_AS(placement_ensemble(identity, v, 3, false), std::invalid_argument);
  CHECK_NOTHROW(placement_ensemble(identity, v, 2, false));
  CHECK_NOTHROW(placement_ensemble(identity, v, 1, true));
}
