// Faulty-channel identification for the Pauli and amplitude-damping families:
// closed-form product strategies, Kraus-branch bounds, the ancilla-assisted
// double-Dicke construction and its large-N expansion.
#pragma once

#include "pei/discrimination.hpp"
#include "pei/qcore.hpp"

#include <string>
#include <utility>

namespace pei::channel {

// p0 I + p1 X + p2 Y + p3 Z mixing channel; the rank counts the non-identity
// Paulis that fire with nonzero probability.
struct PauliChannel {
  double p0 = 1.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;

  PauliChannel(double p0, double p1, double p2, double p3);
  KrausSet kraus() const;
};

struct AmplitudeDampingChannel {
  double gamma = 0.0;

  explicit AmplitudeDampingChannel(double gamma);
  KrausSet kraus() const;
};

enum class StrategyKind { product_separable, ancilla_assisted, seesaw_numeric };
enum class BoundKind { exact, lower, upper };

struct StrategyReport {
  StrategyKind kind = StrategyKind::product_separable;
  std::string input_description;
  double success_probability = 0.0;
  BoundKind bound = BoundKind::exact;
};

std::string to_string(StrategyKind kind);
std::string to_string(BoundKind kind);

// Number of nonzero entries among {p1, p2, p3} (zero tolerance 1e-12).
int pauli_rank(const PauliChannel& channel);

// Exact optimum p0/N + 1 - p0 for rank-one and rank-two Pauli channels,
// achieved by a product input and separable per-qubit readout.
StrategyReport pauli_rank12_value(const PauliChannel& channel, int n);

// Product-strategy lower bound and ancilla-assisted upper bound for rank-three
// Pauli channels.
std::pair<StrategyReport, StrategyReport> pauli_rank3_bounds(
    const PauliChannel& channel, int n);

// Upper bound sum_i P_S(K_i, psi) on any single-query strategy with the given
// input; each branch is scored by the square-root measurement on the Gram of
// its (generally unnormalized) conditional vectors.
double kraus_branch_bound(const KrausSet& fault, const StateVector& input);

// gamma + (1 - gamma)/N with |1>^N probes and per-qubit readout along z.
StrategyReport ad_product_lower_bound(const AmplitudeDampingChannel& channel, int n);

// Damping-branch probability and the damped-branch Gram entries for a
// double-Dicke input with the given weight distribution.
struct AdBranchOverlaps {
  double diag0 = 0.0;          // <Psi_0^k|Psi_0^k>
  double off0 = 0.0;           // <Psi_0^k|Psi_0^l>, k != l
  double k1_probability = 0.0; // gamma <n>/N
};
AdBranchOverlaps ad_branch_overlaps(const RealVec& coefficients, double gamma, int n);

// Exact success probability of the double-Dicke strategy with weights c:
// the damping branch identifies with certainty, the damped branch is solved
// through its equal-overlap Gram.
double ad_double_dicke_value(const RealVec& coefficients, double gamma, int n);

struct AdAncillaReport {
  StrategyReport report;       // exact ancilla-assisted value
  double p_coefficient = 0.0;  // weight on the all-excited double-Dicke state
  double k1_probability = 0.0;
  bool oracle_verified = false;
  double oracle_value = 0.0;   // explicit-vector recomputation when verified
};

// Optimal two-weight double-Dicke strategy {c_N = p, c_{N-1} = 1 - p};
// verified against explicit 2N-qubit vectors whenever they fit the cap.
AdAncillaReport ad_ancilla_strategy(const AmplitudeDampingChannel& channel, int n,
                                    int qubit_cap = kDefaultQubitCap);

// Large-N expansion of the ancilla-assisted optimum, truncated at 1/N^2.
double ad_asymptotic_value(const AmplitudeDampingChannel& channel, int n);

// Numerical maximization of ad_double_dicke_value over the full (n+1)-weight
// simplex; cross-check for the two-weight optimum at small n.
std::pair<RealVec, double> ad_optimize_coefficients(double gamma, int n,
                                                    int passes = 40);

// Hypothesis states rho_k for an arbitrary fault, input and placement.
disc::Ensemble conditional_states(const KrausSet& fault, const StateVector& input,
                                  bool with_ancilla);

}  // namespace pei::channel
