#include "pei/source_pei.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pei;
using namespace pei::source;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("problem angles are normalized and folded") {
  SourceProblem p(3, 3 * kPi / 2);
  CHECK(p.phi == doctest::Approx(3 * kPi / 2).epsilon(1e-15));
  CHECK(p.folded_phi() == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(ps_star(3, 3 * kPi / 2) == doctest::Approx(ps_star(3, kPi / 2)).epsilon(1e-14));
  CHECK_THROWS_AS(SourceProblem(0, 1.0), std::invalid_argument);
}

TEST_CASE("source_states produces the expected overlaps") {
  SourceProblem p(4, 1.2);
  auto ens = source_states(p);
  CHECK(ens.size() == 4);
  const double c2 = std::cos(0.6) * std::cos(0.6);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(ens.pure[i].norm() - 1.0) < 1e-12);
    for (int j = i + 1; j < 4; ++j) {
      CHECK(std::abs(ens.pure[i].dot(ens.pure[j]).real() - c2) < 1e-12);
    }
  }

  // phi = pi gives orthogonal flag states.
  auto flags = source_states({2, kPi});
  CHECK(std::abs(flags.pure[0].dot(flags.pure[1])) < 1e-15);

  CHECK_THROWS_AS(source_states({30, 1.0}), ResourceCapError);
}

TEST_CASE("single source is identified with certainty") {
  CHECK(ps_star(1, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  auto ens = source_states({1, 0.3});
  CHECK(ens.size() == 1);
}

TEST_CASE("closed-form Gram matches the explicit construction") {
  for (int n : {2, 3, 5}) {
    for (double phi : {0.4, kPi / 2, 2.8}) {
      SourceProblem p(n, phi);
      auto closed = source_gram_closed_form(p);
      auto explicit_gram = gram_of(source_states(p));
      CHECK((closed.entries - explicit_gram.entries).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(closed.is_circulant);
      // Analytic eigenvalues agree with the numeric spectrum.
      RealVec numeric = explicit_gram.eigenvalues;
      RealVec analytic = closed.eigenvalues;
      std::sort(analytic.data(), analytic.data() + analytic.size());
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(numeric(i) - analytic(i)) < 1e-12);
      }
    }
  }
}

TEST_CASE("closed-form Gram spectrum at the edges") {
  auto orth = source_gram_closed_form({4, kPi});
  CHECK(orth.eigenvalues.minCoeff() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(orth.eigenvalues.maxCoeff() == doctest::Approx(0.25).epsilon(1e-14));

  auto flat = source_gram_closed_form({4, 0.0});
  CHECK(flat.eigenvalues.maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(flat.eigenvalues.minCoeff()) < 1e-14);

  auto mid = source_gram_closed_form({3, kPi / 2});
  CHECK(mid.eigenvalues.maxCoeff() == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(mid.eigenvalues.minCoeff() == doctest::Approx(1.0 / 6).epsilon(1e-13));
}

TEST_CASE("ps_star reference values") {
  for (int n : {1, 2, 5, 9}) {
    CHECK(ps_star(n, 0.0) == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
  for (int n = 1; n <= 16; ++n) {
    CHECK(ps_star(n, kPi) == 1.0);  // exact
  }
  CHECK(ps_star(2, kPi / 2) == doctest::Approx(0.9330127018922193).epsilon(1e-14));
}

TEST_CASE("ps_star is monotone in phi on [0, pi]") {
  for (int n = 2; n <= 16; ++n) {
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double phi = kPi * i / 99.0;
      const double v = ps_star(n, phi);
      CHECK(v >= prev - 1e-13);
      CHECK(v <= 1.0 + 1e-13);
      CHECK(v >= 1.0 / n - 1e-13);
      prev = v;
    }
  }
}

TEST_CASE("verify_source agreement on the small grid") {
  for (int n : {2, 3, 6}) {
    for (double phi : {kPi / 6, kPi / 2, 5 * kPi / 6, kPi}) {
      SourceReport r = verify_source({n, phi});
      CHECK(r.max_disagreement < 1e-7);
      CHECK(std::abs(r.closed - r.srm) < 1e-9);
      CHECK(r.certificate_slack > -1e-8);
    }
  }
}

TEST_CASE("degenerate problem phi = 0 reports uniform guessing") {
  SourceReport r = verify_source({3, 0.0});
  CHECK(r.closed == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(r.srm == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(r.fixed_point == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("square root of the closed-form Gram has the predicted diagonal") {
  for (int n : {2, 4, 7}) {
    for (double phi : {0.5, 1.8, 2.9}) {
      auto g = source_gram_closed_form({n, phi});
      Mat s = hermitian_sqrt(g.entries);
      double diag_sum = 0.0;
      for (int j = 0; j < n; ++j) diag_sum += std::sqrt(g.eigenvalues(j));
      for (int k = 0; k < n; ++k) {
        CHECK(std::abs(s(k, k).real() - diag_sum / n) < 1e-10);
        CHECK(std::abs(s(k, k).imag()) < 1e-12);
      }
    }
  }
}

// The two-term large-N expansion of ps_star carries a genuine O(1/N) defect:
// the residual against sin^2 + sin(phi)/sqrt(N) + cos^2/N approaches
// -2 sin^2(phi/2)/N, and only the corrected residual decays faster.
TEST_CASE("large-N expansion of ps_star and its corrected residual") {
  const double phi = kPi / 2;
  const double s2 = std::sin(phi / 2) * std::sin(phi / 2);
  const double c2 = 1.0 - s2;
  double prev_corrected = 0.0;
  for (int n : {64, 128, 256}) {
    const double expansion = s2 + std::sin(phi) / std::sqrt(double(n)) + c2 / n;
    const double residual = ps_star(n, phi) - expansion;
    // Leading defect -2 sin^2(phi/2)/N, within 10% by N = 64.
    CHECK(std::abs(residual * n + 2 * s2) < 0.2 * 2 * s2);
    const double corrected = std::abs(residual + 2 * s2 / n);
    if (prev_corrected > 0.0) {
      // Faster than 1/N: ratio approaches 2^(3/2) per doubling.
      CHECK(prev_corrected / corrected > 2.2);
    }
    prev_corrected = corrected;
  }
}
