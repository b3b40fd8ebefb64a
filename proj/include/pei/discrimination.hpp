// Minimum-error discrimination engine: weighted Gram matrices, the
// square-root measurement, an iterative optimal-POVM solver with dual
// (Holevo) optimality certificates, and the alternating state/measurement
// (seesaw) optimizer for channel placement problems.
#pragma once

#include "pei/qcore.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pei::disc {

// Hypothesis states with prior weights; the discrimination problem instance.
struct Ensemble {
  std::vector<Mat> states;  // density operators, one shared dimension
  RealVec priors;           // nonnegative, sums to 1
  std::vector<Vec> pure;    // set iff every state is pure, same order

  int size() const { return static_cast<int>(states.size()); }
  std::int64_t dim() const { return states.empty() ? 0 : states.front().rows(); }
  bool is_pure() const { return !pure.empty(); }

  static Ensemble uniform_pure(std::vector<Vec> states);
  static Ensemble pure_with_priors(std::vector<Vec> states, RealVec priors);
  static Ensemble mixed(std::vector<Mat> states, RealVec priors);
};

// Prior-weighted overlap matrix G_kl = sqrt(p_k p_l) <psi_k|psi_l>.
struct GramMatrix {
  Mat entries;
  bool is_circulant = false;
  RealVec eigenvalues;  // ascending
};

struct Povm {
  std::vector<Mat> elements;
  double success_probability = 0.0;
  // True when completeness is only guaranteed on the span of the states:
  // the states do not fill the space, or a linearly dependent set was
  // resolved through a pseudo-inverse.
  bool support_only = false;
};

// Dual feasible point for the minimum-error SDP: Gamma >= p_k rho_k for all k
// certifies optimality with optimal value Tr Gamma.
struct DualCertificate {
  Mat gamma;
  double slack = 0.0;      // min_k lambda_min(Gamma - p_k rho_k)
  double objective = 0.0;  // Tr Gamma
  bool valid(double tol = 1e-8) const { return slack >= -tol; }
};

GramMatrix gram_of(const Ensemble& ensemble);

// Success probability of the square-root measurement, sum_k |S_kk|^2 with
// S the Hermitian square root of the weighted Gram matrix. Exact optimum
// when S has equal diagonal entries (circulant Gram); a lower bound otherwise.
double srm_success_probability(const GramMatrix& gram);

// Closed form of the above for an equal-overlap Gram with constant diagonal
// `diag`/n and constant off-diagonal `offdiag`/n (unnormalized states allowed).
double srm_equal_overlap_value(int n, double diag, double offdiag);

Povm srm_povm(const Ensemble& ensemble, const GramMatrix& gram);

struct FixedPointOptions {
  int max_iter = 10000;
  double tol = 1e-9;  // stop when the per-iteration gain falls below this
};

struct FixedPointResult {
  Povm povm;
  DualCertificate certificate;
  bool converged = false;
  int iterations = 0;
};

// Iterative minimum-error solver (independent of the SRM path); starts from
// the uniform POVM unless a warm start is supplied.
FixedPointResult fixed_point_optimal_povm(const Ensemble& ensemble,
                                          FixedPointOptions opts = {},
                                          const std::vector<Mat>* warm_start = nullptr);

DualCertificate check_dual_certificate(const Ensemble& ensemble, const Povm& povm);

// Max elementwise deviation of sum_k M_k from identity (or from the support
// projector of the ensemble when the POVM is flagged support-only).
double completeness_defect(const Ensemble& ensemble, const Povm& povm);

struct SeesawOptions {
  int restarts = 8;
  double tol = 1e-9;
  int max_outer = 300;
  std::uint64_t seed = 12345;
  FixedPointOptions inner{.max_iter = 5000, .tol = 1e-10};
};

struct SeesawResult {
  StateVector input;
  Povm povm;
  double value = 0.0;
  int best_restart = 0;
  bool all_converged = true;
  std::vector<double> history;  // per-outer-iteration values of the best restart
};

// Alternating optimization for locating a single faulty channel among
// n_devices identical slots: (a) fixed input -> optimal POVM, (b) fixed POVM
// -> top eigenvector of the pulled-back success operator. Best over seeded
// random restarts, ties to the lowest restart index.
SeesawResult seesaw_optimize(const KrausSet& fault, int n_devices, bool use_ancilla,
                             SeesawOptions opts = {});

// Hypothesis states rho_k = (fault at probe k)(|psi><psi|), uniform priors.
Ensemble placement_ensemble(const KrausSet& fault, const Vec& input,
                            int n_devices, bool use_ancilla);

}  // namespace pei::disc
