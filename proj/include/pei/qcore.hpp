// Complex linear algebra and qubit-register primitives shared by all
// position-error-identification solvers: labeled state vectors, density
// operators, Kraus sets, tensor products, Dicke states and PSD square roots.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pei {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using RealVec = Eigen::VectorXd;

// Dense vectors are capped at this many qubits unless a caller overrides it.
inline constexpr int kDefaultQubitCap = 24;

// A requested dense object would exceed the configured qubit cap.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_power_of_two(std::int64_t n);
int log2_dim(std::int64_t dim);

bool is_hermitian(const Mat& a, double tol = 1e-12);
bool is_unitary(const Mat& a, double tol = 1e-10);

enum class QubitRole { probe, ancilla };

struct QubitLabel {
  QubitRole role = QubitRole::probe;
  int index = 0;  // 1-based device index
  bool operator==(const QubitLabel&) const = default;
};

// Layout helpers. Qubit 0 is the first tensor factor (most significant bit
// of the basis index). Probe k sits next to its flag ancilla k when ancillas
// are present.
std::vector<QubitLabel> probe_layout(int n_probes);
std::vector<QubitLabel> probe_ancilla_layout(int n_probes);

// Normalized pure state over a labeled qubit register.
class StateVector {
 public:
  StateVector(Vec amplitudes, std::vector<QubitLabel> layout);

  const Vec& amplitudes() const { return amps_; }
  const std::vector<QubitLabel>& layout() const { return layout_; }
  int num_qubits() const { return static_cast<int>(layout_.size()); }
  std::int64_t dim() const { return amps_.size(); }
  int num_probes() const;
  bool has_ancillas() const;
  // Position (0-based tensor slot) of probe k, 1-based k.
  int probe_qubit(int k) const;

 private:
  Vec amps_;
  std::vector<QubitLabel> layout_;
};

// Hermitian, unit-trace operator on a 2^n-dimensional register.
class DensityOperator {
 public:
  explicit DensityOperator(Mat matrix);
  static DensityOperator pure(const Vec& state);

  const Mat& matrix() const { return m_; }
  std::int64_t dim() const { return m_.rows(); }
  double min_eigenvalue() const;

 private:
  Mat m_;
};

// Kraus decomposition {K_i} of a single-qubit CPTP map.
class KrausSet {
 public:
  explicit KrausSet(std::vector<Mat2> operators);

  const std::vector<Mat2>& operators() const { return ops_; }
  int rank() const { return static_cast<int>(ops_.size()); }

 private:
  std::vector<Mat2> ops_;
};

StateVector tensor_product(const StateVector& a, const StateVector& b,
                           int qubit_cap = kDefaultQubitCap);
Mat tensor_product(const Mat& a, const Mat& b, int qubit_cap = kDefaultQubitCap);

// In-place application of a single-qubit operator to tensor slot `qubit`
// of an n-qubit vector or (rows/columns of) an n-qubit matrix.
void apply_single_qubit(const Mat2& op, int qubit, int n_qubits, Vec& v);
void apply_single_qubit_rows(const Mat2& op, int qubit, int n_qubits, Mat& m);
void apply_single_qubit_cols_dagger(const Mat2& op, int qubit, int n_qubits, Mat& m);

// rho -> sum_i (I ⊗ K_i ⊗ I) rho (·)†, K_i acting on 1-based qubit `position`.
DensityOperator apply_kraus_at(const DensityOperator& state, const KrausSet& kraus,
                               int position);
// Same placement for a pure input; one unnormalized branch vector per operator.
std::vector<Vec> kraus_branch_vectors(const Vec& state, const KrausSet& kraus,
                                      int qubit, int n_qubits);

// Unique Hermitian PSD square root. Eigenvalues in [-1e-8, 0) are clamped to
// zero; anything below -1e-8 is rejected as materially non-PSD.
Mat hermitian_sqrt(const Mat& m);

// Equal superposition of all weight-m computational strings on n qubits.
StateVector dicke_state(int n, int m, int qubit_cap = kDefaultQubitCap);

// Symmetrized state over n probe-ancilla pairs with m pairs in |11> and the
// rest in |00>; each ancilla mirrors its probe.
StateVector double_dicke_state(int n, int m, int qubit_cap = kDefaultQubitCap);

double binomial(int n, int k);

}  // namespace pei
