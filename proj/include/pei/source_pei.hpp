// Faulty-source identification: the state ensemble, its closed-form Gram
// spectrum and optimal success probability, and the verification harness
// that pits the closed forms against the numerical discrimination oracles.
#pragma once

#include "pei/discrimination.hpp"
#include "pei/qcore.hpp"

namespace pei::source {

// N identical sources, one of which emits |phi> = cos(phi/2)|0> + sin(phi/2)|1>
// instead of |0>. Angles are folded into [0, pi]: only |<0|phi>|^2 enters the
// overlaps, which is even about phi = pi.
struct SourceProblem {
  int n = 1;
  double phi = 0.0;  // normalized to [0, 2*pi)

  SourceProblem(int n_devices, double fault_angle);
  double folded_phi() const;
};

// The N hypothesis states |0..0 phi 0..0> with uniform priors.
disc::Ensemble source_states(const SourceProblem& problem,
                             int qubit_cap = kDefaultQubitCap);

// Weighted Gram matrix without building any 2^N vectors; circulant, with the
// two analytic eigenvalues populated.
disc::GramMatrix source_gram_closed_form(const SourceProblem& problem);

// Optimal success probability of the square-root measurement.
double ps_star(const SourceProblem& problem);
double ps_star(int n, double phi);

struct SourceReport {
  double closed = 0.0;
  double srm = 0.0;          // SRM value on the explicitly constructed Gram
  double fixed_point = 0.0;  // independent iterative optimum
  double certificate_slack = 0.0;
  double max_disagreement = 0.0;
};

// Builds the explicit ensemble and checks closed form vs SRM vs fixed-point
// oracle, including the dual certificate of the fixed-point measurement.
SourceReport verify_source(const SourceProblem& problem,
                           disc::FixedPointOptions oracle_opts = {.max_iter = 20000,
                                                                  .tol = 1e-11},
                           int qubit_cap = kDefaultQubitCap);

}  // namespace pei::source
