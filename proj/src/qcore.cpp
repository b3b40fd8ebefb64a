#include "pei/qcore.hpp"

#include <bit>
#include <cmath>

namespace pei {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kNormTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kKrausTol = 1e-10;

std::int64_t bit_mask(int qubit, int n_qubits) {
  return std::int64_t{1} << (n_qubits - 1 - qubit);
}

void check_cap(int n_qubits, int cap, const char* what) {
  if (n_qubits > cap) {
    throw ResourceCapError(std::string(what) + ": " + std::to_string(n_qubits) +
                           " qubits exceed the cap of " + std::to_string(cap));
  }
}

}  // namespace

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_dim(std::int64_t dim) {
  if (!is_power_of_two(dim)) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two");
  }
  return std::bit_width(static_cast<std::uint64_t>(dim)) - 1;
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  Mat d = a.adjoint() * a - Mat::Identity(a.rows(), a.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

std::vector<QubitLabel> probe_layout(int n_probes) {
  std::vector<QubitLabel> layout;
  layout.reserve(n_probes);
  for (int k = 1; k <= n_probes; ++k) layout.push_back({QubitRole::probe, k});
  return layout;
}

std::vector<QubitLabel> probe_ancilla_layout(int n_probes) {
  std::vector<QubitLabel> layout;
  layout.reserve(2 * n_probes);
  for (int k = 1; k <= n_probes; ++k) {
    layout.push_back({QubitRole::probe, k});
    layout.push_back({QubitRole::ancilla, k});
  }
  return layout;
}

StateVector::StateVector(Vec amplitudes, std::vector<QubitLabel> layout)
    : amps_(std::move(amplitudes)), layout_(std::move(layout)) {
  if (amps_.size() != (std::int64_t{1} << layout_.size())) {
    throw std::invalid_argument("amplitude count does not match register layout");
  }
  double n = amps_.norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw std::invalid_argument("state vector norm " + std::to_string(n) +
                                " is not 1");
  }
}

int StateVector::num_probes() const {
  int n = 0;
  for (const auto& q : layout_) n += (q.role == QubitRole::probe);
  return n;
}

bool StateVector::has_ancillas() const {
  for (const auto& q : layout_) {
    if (q.role == QubitRole::ancilla) return true;
  }
  return false;
}

int StateVector::probe_qubit(int k) const {
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].role == QubitRole::probe && layout_[i].index == k) {
      return static_cast<int>(i);
    }
  }
  throw std::out_of_range("no probe with index " + std::to_string(k));
}

DensityOperator::DensityOperator(Mat matrix) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols() || !is_power_of_two(m_.rows())) {
    throw std::invalid_argument("density operator must be square with power-of-two dimension");
  }
  if (!is_hermitian(m_, kHermTol * std::max(1.0, m_.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("density operator is not Hermitian");
  }
  if (std::abs(m_.trace().real() - 1.0) > kTraceTol) {
    throw std::invalid_argument("density operator trace is not 1");
  }
}

DensityOperator DensityOperator::pure(const Vec& state) {
  return DensityOperator(state * state.adjoint());
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

KrausSet::KrausSet(std::vector<Mat2> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw std::invalid_argument("empty Kraus set");
  Mat2 sum = Mat2::Zero();
  for (const auto& k : ops_) sum += k.adjoint() * k;
  if ((sum - Mat2::Identity()).cwiseAbs().maxCoeff() > kKrausTol) {
    throw std::invalid_argument("Kraus set violates completeness");
  }
}

StateVector tensor_product(const StateVector& a, const StateVector& b, int qubit_cap) {
  int n = a.num_qubits() + b.num_qubits();
  check_cap(n, qubit_cap, "tensor_product");
  Vec out(a.dim() * b.dim());
  for (std::int64_t i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  }
  std::vector<QubitLabel> layout = a.layout();
  layout.insert(layout.end(), b.layout().begin(), b.layout().end());
  return StateVector(std::move(out), std::move(layout));
}

Mat tensor_product(const Mat& a, const Mat& b, int qubit_cap) {
  if (is_power_of_two(a.rows()) && is_power_of_two(b.rows())) {
    check_cap(log2_dim(a.rows()) + log2_dim(b.rows()), qubit_cap, "tensor_product");
  }
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void apply_single_qubit(const Mat2& op, int qubit, int n_qubits, Vec& v) {
  const std::int64_t mask = bit_mask(qubit, n_qubits);
  const std::int64_t dim = v.size();
  for (std::int64_t x = 0; x < dim; ++x) {
    if (x & mask) continue;
    const std::int64_t y = x | mask;
    const Complex v0 = v(x), v1 = v(y);
    v(x) = op(0, 0) * v0 + op(0, 1) * v1;
    v(y) = op(1, 0) * v0 + op(1, 1) * v1;
  }
}

void apply_single_qubit_rows(const Mat2& op, int qubit, int n_qubits, Mat& m) {
  const std::int64_t mask = bit_mask(qubit, n_qubits);
  const std::int64_t dim = m.rows();
  for (std::int64_t c = 0; c < m.cols(); ++c) {
    for (std::int64_t x = 0; x < dim; ++x) {
      if (x & mask) continue;
      const std::int64_t y = x | mask;
      const Complex v0 = m(x, c), v1 = m(y, c);
      m(x, c) = op(0, 0) * v0 + op(0, 1) * v1;
      m(y, c) = op(1, 0) * v0 + op(1, 1) * v1;
    }
  }
}

void apply_single_qubit_cols_dagger(const Mat2& op, int qubit, int n_qubits, Mat& m) {
  const std::int64_t mask = bit_mask(qubit, n_qubits);
  const std::int64_t dim = m.cols();
  for (std::int64_t r = 0; r < m.rows(); ++r) {
    for (std::int64_t x = 0; x < dim; ++x) {
      if (x & mask) continue;
      const std::int64_t y = x | mask;
      const Complex v0 = m(r, x), v1 = m(r, y);
      m(r, x) = std::conj(op(0, 0)) * v0 + std::conj(op(0, 1)) * v1;
      m(r, y) = std::conj(op(1, 0)) * v0 + std::conj(op(1, 1)) * v1;
    }
  }
}

DensityOperator apply_kraus_at(const DensityOperator& state, const KrausSet& kraus,
                               int position) {
  const int n = log2_dim(state.dim());
  if (position < 1 || position > n) {
    throw std::out_of_range("Kraus position " + std::to_string(position) +
                            " outside register of " + std::to_string(n) + " qubits");
  }
  Mat out = Mat::Zero(state.dim(), state.dim());
  for (const auto& k : kraus.operators()) {
    Mat term = state.matrix();
    apply_single_qubit_rows(k, position - 1, n, term);
    apply_single_qubit_cols_dagger(k, position - 1, n, term);
    out += term;
  }
  return DensityOperator(std::move(out));
}

std::vector<Vec> kraus_branch_vectors(const Vec& state, const KrausSet& kraus,
                                      int qubit, int n_qubits) {
  std::vector<Vec> branches;
  branches.reserve(kraus.rank());
  for (const auto& k : kraus.operators()) {
    Vec v = state;
    apply_single_qubit(k, qubit, n_qubits, v);
    branches.push_back(std::move(v));
  }
  return branches;
}

Mat hermitian_sqrt(const Mat& m) {
  if (!is_hermitian(m, 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("hermitian_sqrt requires a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  RealVec w = es.eigenvalues();
  if (w.minCoeff() < -1e-8) {
    throw std::domain_error("matrix is materially non-PSD (eigenvalue " +
                            std::to_string(w.minCoeff()) + ")");
  }
  RealVec s(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) s(i) = std::sqrt(std::max(w(i), 0.0));
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

StateVector dicke_state(int n, int m, int qubit_cap) {
  if (n < 1) throw std::invalid_argument("dicke_state requires n >= 1");
  if (m < 0 || m > n) {
    throw std::out_of_range("Dicke weight m=" + std::to_string(m) +
                            " outside [0, " + std::to_string(n) + "]");
  }
  check_cap(n, qubit_cap, "dicke_state");
  Vec amps = Vec::Zero(std::int64_t{1} << n);
  const double amp = 1.0 / std::sqrt(binomial(n, m));
  for (std::int64_t x = 0; x < amps.size(); ++x) {
    if (std::popcount(static_cast<std::uint64_t>(x)) == m) amps(x) = amp;
  }
  return StateVector(std::move(amps), probe_layout(n));
}

StateVector double_dicke_state(int n, int m, int qubit_cap) {
  if (n < 1) throw std::invalid_argument("double_dicke_state requires n >= 1");
  if (m < 0 || m > n) {
    throw std::out_of_range("double-Dicke weight m=" + std::to_string(m) +
                            " outside [0, " + std::to_string(n) + "]");
  }
  check_cap(2 * n, qubit_cap, "double_dicke_state");
  const int nq = 2 * n;
  Vec amps = Vec::Zero(std::int64_t{1} << nq);
  const double amp = 1.0 / std::sqrt(binomial(n, m));
  // Enumerate the m-element subsets of pairs as n-bit masks.
  for (std::int64_t t = 0; t < (std::int64_t{1} << n); ++t) {
    if (std::popcount(static_cast<std::uint64_t>(t)) != m) continue;
    std::int64_t x = 0;
    for (int k = 0; k < n; ++k) {
      if (t & (std::int64_t{1} << k)) {
        x |= bit_mask(2 * k, nq) | bit_mask(2 * k + 1, nq);
      }
    }
    amps(x) = amp;
  }
  return StateVector(std::move(amps), probe_ancilla_layout(n));
}

}  // namespace pei
