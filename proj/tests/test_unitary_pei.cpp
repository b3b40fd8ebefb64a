#include "pei/unitary_pei.hpp"

#include "pei/source_pei.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pei;
using namespace pei::unitary;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent overlap oracle: rotate qubits k and l of a symmetric input by
// the diagonal phase gate and take the inner product.
double overlap_from_vectors(int n, int m, double phi) {
  UnitaryProblem problem(n, phi);
  auto states = rotated_states(problem, SymmetricInput::single_weight(n, m));
  return states[0].dot(states[1]).real();
}
}  // namespace

TEST_CASE("overlap coefficients match the stated values") {
  for (double phi : {0.0, 0.7, kPi / 2, kPi}) {
    CHECK(overlap_coefficient(5, 0, phi) == 1.0);
    CHECK(overlap_coefficient(5, 5, phi) == 1.0);
  }
  for (int m = 0; m <= 4; ++m) {
    CHECK(overlap_coefficient(4, m, 0.0) == 1.0);
  }
  CHECK(overlap_coefficient(4, 2, kPi) == doctest::Approx(-1.0 / 3).epsilon(1e-14));
}

TEST_CASE("overlap coefficients agree with the explicit-vector oracle") {
  for (int n : {2, 3, 4, 5}) {
    for (int m = 0; m <= n; ++m) {
      for (double phi : {0.4, 1.3, 2.7, kPi}) {
        CHECK(std::abs(overlap_from_vectors(n, m, phi) -
                       overlap_coefficient(n, m, phi)) < 1e-12);
      }
    }
  }
}

TEST_CASE("the half-weight overlap is minimal over all weights") {
  for (int n = 2; n <= 32; ++n) {
    const int h = (n + 1) / 2;
    for (int i = 1; i <= 20; ++i) {
      const double phi = kPi * i / 20.0;
      const double bh = overlap_coefficient(n, h, phi);
      for (int m = 0; m <= n; ++m) {
        CHECK(bh <= overlap_coefficient(n, m, phi) + 1e-14);
      }
    }
  }
}

TEST_CASE("phi_min reference values and defining property") {
  CHECK(phi_min(2) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(phi_min(3) == doctest::Approx(std::acos(-0.5)).epsilon(1e-14));
  CHECK(phi_min(4) == doctest::Approx(2 * kPi / 3).epsilon(1e-14));
  for (int n = 2; n <= 32; ++n) {
    CHECK(std::abs(overlap_coefficient(n, (n + 1) / 2, phi_min(n))) < 1e-12);
  }
  // The threshold climbs toward pi as the network grows.
  CHECK(phi_min(400) > 3.0);
}

TEST_CASE("optimal_input selects the half-weight Dicke state below threshold") {
  auto in = optimal_input({5, 0.8});
  CHECK(in.coefficients(3) == doctest::Approx(1.0));
  CHECK(in.coefficients.sum() == doctest::Approx(1.0));

  // Threshold cases collapse to the pure Dicke weight as well.
  auto thr = optimal_input({4, 2 * kPi / 3});
  CHECK(thr.coefficients(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("optimal_input beyond threshold zeroes the Gram off-diagonal") {
  auto in2 = optimal_input({2, kPi});
  CHECK(in2.coefficients(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(in2.coefficients(1) == doctest::Approx(0.5).epsilon(1e-14));

  for (int n : {2, 3, 4, 5, 6}) {
    for (double phi : {phi_min(n) + 0.05, phi_min(n) + 0.3, kPi}) {
      if (phi > kPi) continue;
      auto in = optimal_input({n, phi});
      double off = 0.0;
      for (int m = 0; m <= n; ++m) {
        off += in.coefficients(m) * overlap_coefficient(n, m, phi);
      }
      CHECK(std::abs(off) < 1e-12);
    }
  }

  CHECK_THROWS_AS(optimal_input({3, 0.0}), std::invalid_argument);
}

TEST_CASE("ps_unitary reference values") {
  CHECK(ps_unitary(4, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ps_unitary(2, kPi / 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ps_unitary(2, kPi) == 1.0);
  // Frozen from the explicit-vector and fixed-point oracles.
  CHECK(ps_unitary(3, kPi / 3) == doctest::Approx(0.7993705646021616).epsilon(1e-12));
  // Even networks admit the compact two-term closed form.
  for (int n : {2, 4, 6, 8}) {
    for (double phi : {0.3, 0.9, 1.4}) {
      if (phi > phi_min(n)) continue;
      const double reference =
          std::pow((std::cos(phi / 2) + std::sqrt(n - 1.0) * std::sin(phi / 2)) /
                       std::sqrt(double(n)),
                   2);
      CHECK(ps_unitary(n, phi) == doctest::Approx(reference).epsilon(1e-12));
    }
  }
}

TEST_CASE("ps_unitary dominates ps_star and meets it at the edges") {
  for (int n : {2, 3, 4, 5, 8}) {
    for (int i = 0; i < 50; ++i) {
      const double phi = kPi * i / 49.0;
      CHECK(ps_unitary(n, phi) >= source::ps_star(n, phi) - 1e-12);
    }
    CHECK(ps_unitary(n, 0.0) == doctest::Approx(source::ps_star(n, 0.0)));
  }
}

TEST_CASE("the entanglement advantage fades with network size") {
  for (double phi : {0.5, 1.2, 2.0}) {
    double adv64 = ps_unitary(64, phi) - source::ps_star(64, phi);
    double adv256 = ps_unitary(256, phi) - source::ps_star(256, phi);
    CHECK(adv64 >= -1e-12);
    CHECK(adv64 < 3.0 / std::sqrt(64.0));
    CHECK(adv256 < adv64 + 1e-12);
    CHECK(adv256 < 3.0 / std::sqrt(256.0));
  }
}

TEST_CASE("oracle with the binomial input reproduces the source problem") {
  for (int n = 2; n <= 5; ++n) {
    for (double phi : {0.6, 1.5, 2.4}) {
      auto oracle = unitary_oracle({n, phi}, SymmetricInput::binomial(n));
      CHECK(std::abs(oracle.srm_value - source::ps_star(n, phi)) < 1e-9);
    }
  }
}

TEST_CASE("oracle confirms the closed form on both sides of the threshold") {
  for (int n = 2; n <= 6; ++n) {
    UnitaryProblem below(n, 0.8 * phi_min(n));
    auto sub = unitary_oracle(below, optimal_input(below));
    CHECK(std::abs(sub.srm_value - ps_unitary(below)) < 1e-9);
    REQUIRE(sub.fixed_point_value);
    CHECK(std::abs(*sub.fixed_point_value - ps_unitary(below)) < 1e-7);
    CHECK(*sub.certificate_slack > -1e-8);

    UnitaryProblem above(n, phi_min(n) + 0.1);
    auto sup = unitary_oracle(above, optimal_input(above));
    CHECK(std::abs(sup.srm_value - 1.0) < 1e-9);
  }
}

TEST_CASE("oracle Gram is circulant with the predicted off-diagonal") {
  for (int n : {2, 4, 6}) {
    RealVec c = RealVec::Zero(n + 1);
    c(0) = 0.3;
    c(1) = 0.2;
    c(n) = 0.5;
    SymmetricInput input(c);
    const double phi = 1.1;
    auto oracle = unitary_oracle({n, phi}, input);
    CHECK(oracle.gram.is_circulant);
    double expected = 0.0;
    for (int m = 0; m <= n; ++m) {
      expected += c(m) * overlap_coefficient(n, m, phi);
    }
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const double target = k == l ? 1.0 : expected;
        CHECK(std::abs(oracle.gram.entries(k, l) - target / n) < 1e-12);
      }
    }
  }
}

TEST_CASE("oracle enforces its qubit cap") {
  CHECK_THROWS_AS(rotated_states({14, 1.0}, SymmetricInput::single_weight(14, 7)),
                  ResourceCapError);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(UnitaryProblem(1, 1.0), std::invalid_argument);
  CHECK(UnitaryProblem(3, 3 * kPi / 2).folded_phi() ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(SymmetricInput(RealVec::Constant(3, 0.5)), std::invalid_argument);
}
