// Faulty-unitary identification: overlap coefficients of symmetric inputs,
// the perfect-identification threshold, the optimal Dicke-weight inputs and
// the explicit-vector oracle working in the rotation eigenbasis.
#pragma once

#include "pei/discrimination.hpp"
#include "pei/qcore.hpp"

#include <optional>

namespace pei::unitary {

// N identical gates, one of which applies the rotation U(phi) = exp(i phi/2 sigma_y)
// instead of the identity. Angles fold into [0, pi] (overlaps depend on
// sin^2(phi/2) only).
struct UnitaryProblem {
  int n = 2;
  double phi = 0.0;

  UnitaryProblem(int n_devices, double rotation_angle);
  double folded_phi() const;
};

// Probe state restricted to the symmetric subspace, expressed in the Dicke
// basis of the rotation axis: |psi> = sum_m sqrt(c_m) |N, m>. Coefficients are
// nonnegative reals (no generality is lost for this problem family).
struct SymmetricInput {
  RealVec coefficients;  // length n+1, sums to 1

  explicit SymmetricInput(RealVec c);
  static SymmetricInput single_weight(int n, int m);
  static SymmetricInput binomial(int n);  // |0>^N re-expressed in the rotation basis
};

// Pairwise overlap b_m(phi) of the rotated copies of |N, m>.
double overlap_coefficient(int n, int m, double phi);

// Smallest angle at which b_ceil(N/2) vanishes and identification becomes
// perfect for two-weight superpositions.
double phi_min(int n);

// Optimal symmetric input: the single Dicke weight ceil(N/2) up to phi_min,
// the two-weight {0, ceil(N/2)} superposition with vanishing overlap beyond.
SymmetricInput optimal_input(const UnitaryProblem& problem);

// Optimal success probability over symmetric inputs: square-root-measurement
// value of the equal-overlap Gram with off-diagonal b_ceil(N/2)(phi) below the
// threshold, exactly 1 above it.
double ps_unitary(const UnitaryProblem& problem);
double ps_unitary(int n, double phi);

// The N rotated probe vectors, built in the eigenbasis of the rotation where
// the fault acts as the diagonal phase diag(e^{i phi/2}, e^{-i phi/2}).
std::vector<Vec> rotated_states(const UnitaryProblem& problem,
                                const SymmetricInput& input,
                                int oracle_cap = 12);

struct UnitaryOracleResult {
  double srm_value = 0.0;
  disc::GramMatrix gram;
  std::optional<double> fixed_point_value;    // populated for n <= 6
  std::optional<double> certificate_slack;
};

// Full-vector oracle: explicit rotated states, weighted Gram, SRM value;
// certificate-checked through the fixed-point solver for n <= 6.
UnitaryOracleResult unitary_oracle(const UnitaryProblem& problem,
                                   const SymmetricInput& input,
                                   int oracle_cap = 12);

}  // namespace pei::unitary
