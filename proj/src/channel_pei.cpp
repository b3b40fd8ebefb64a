#include "pei/channel_pei.hpp"

#include <array>
#include <cmath>

namespace pei::channel {

namespace {

constexpr double kZeroTol = 1e-12;

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

disc::GramMatrix gram_from_vectors(const std::vector<Vec>& vectors) {
  const int n = static_cast<int>(vectors.size());
  disc::GramMatrix g;
  g.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g.entries(i, j) = vectors[i].dot(vectors[j]) / double(n);
    }
  }
  g.entries = (g.entries + g.entries.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(g.entries, Eigen::EigenvaluesOnly);
  g.eigenvalues = es.eigenvalues();
  return g;
}

}  // namespace

PauliChannel::PauliChannel(double q0, double q1, double q2, double q3)
    : p0(q0), p1(q1), p2(q2), p3(q3) {
  const double sum = p0 + p1 + p2 + p3;
  if (p0 < 0 || p1 < 0 || p2 < 0 || p3 < 0 || std::abs(sum - 1.0) > kZeroTol) {
    throw std::invalid_argument("Pauli weights must be nonnegative and sum to 1");
  }
}

KrausSet PauliChannel::kraus() const {
  std::vector<Mat2> ops;
  if (p0 > kZeroTol) ops.push_back(std::sqrt(p0) * Mat2::Identity());
  if (p1 > kZeroTol) ops.push_back(std::sqrt(p1) * pauli_x());
  if (p2 > kZeroTol) ops.push_back(std::sqrt(p2) * pauli_y());
  if (p3 > kZeroTol) ops.push_back(std::sqrt(p3) * pauli_z());
  return KrausSet(std::move(ops));
}

AmplitudeDampingChannel::AmplitudeDampingChannel(double g) : gamma(g) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("damping parameter must lie in [0, 1]");
  }
}

KrausSet AmplitudeDampingChannel::kraus() const {
  Mat2 k0, k1;
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  std::vector<Mat2> ops = {k0};
  if (gamma > 0.0) ops.push_back(k1);
  return KrausSet(std::move(ops));
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::product_separable: return "product-separable";
    case StrategyKind::ancilla_assisted: return "ancilla-assisted";
    case StrategyKind::seesaw_numeric: return "seesaw-numeric";
  }
  return "unknown";
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::exact: return "exact";
    case BoundKind::lower: return "lower";
    case BoundKind::upper: return "upper";
  }
  return "unknown";
}

int pauli_rank(const PauliChannel& channel) {
  int rank = 0;
  for (double p : {channel.p1, channel.p2, channel.p3}) rank += (p > kZeroTol);
  return rank;
}

StrategyReport pauli_rank12_value(const PauliChannel& channel, int n) {
  const int rank = pauli_rank(channel);
  if (rank > 2) {
    throw std::invalid_argument("pauli_rank12_value requires rank <= 2");
  }
  StrategyReport report;
  report.kind = StrategyKind::product_separable;
  report.bound = BoundKind::exact;
  report.success_probability = channel.p0 / n + 1.0 - channel.p0;

  static constexpr std::array<const char*, 3> axes = {"x", "y", "z"};
  const std::array<double, 3> weights = {channel.p1, channel.p2, channel.p3};
  if (rank == 0) {
    report.input_description = "any product input; channel is the identity";
  } else if (rank == 1) {
    int axis = 0;
    for (int i = 0; i < 3; ++i) {
      if (weights[i] > kZeroTol) axis = i;
    }
    report.input_description =
        std::string("product input unbiased to sigma_") + axes[axis] +
        "; per-qubit readout in the same unbiased basis";
  } else {
    int missing = 0;
    for (int i = 0; i < 3; ++i) {
      if (weights[i] <= kZeroTol) missing = i;
    }
    report.input_description = std::string("product sigma_") + axes[missing] +
                               " eigenstate input; per-qubit readout in the "
                               "orthogonal equatorial basis";
  }
  return report;
}

std::pair<StrategyReport, StrategyReport> pauli_rank3_bounds(
    const PauliChannel& channel, int n) {
  if (pauli_rank(channel) != 3) {
    throw std::invalid_argument("pauli_rank3_bounds requires rank 3");
  }
  const double p_star = std::min({channel.p1, channel.p2, channel.p3});

  StrategyReport lower;
  lower.kind = StrategyKind::product_separable;
  lower.bound = BoundKind::lower;
  lower.success_probability =
      1.0 - (channel.p0 + p_star) + (channel.p0 + p_star) / n;
  lower.input_description =
      "product input discriminating the dominant rank-two component";

  StrategyReport upper;
  upper.kind = StrategyKind::ancilla_assisted;
  upper.bound = BoundKind::upper;
  upper.success_probability = channel.p0 / n + 1.0 - channel.p0;
  upper.input_description =
      "maximally entangled probe-ancilla pairs; Bell-basis readout";

  return {lower, upper};
}

// Optimal identification value for one Kraus branch. The problem lives in
// the span of the conditional vectors, where the Hermitian square root of
// their Gram matrix provides exact coordinates; the fixed-point solver then
// resolves the few cases whose Gram is not circulant.
static double branch_optimum(const std::vector<Vec>& branch) {
  const int n = static_cast<int>(branch.size());
  Mat gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram(i, j) = branch[i].dot(branch[j]);
  }
  gram = (gram + gram.adjoint()) / 2.0;

  disc::GramMatrix weighted;
  weighted.entries = gram / double(n);
  const double srm = disc::srm_success_probability(weighted);

  Mat coords = hermitian_sqrt(gram);
  std::vector<Mat> states;
  std::vector<double> weights;
  double total_weight = 0.0;
  const double weight_cut = std::max(gram.trace().real(), 0.0) * 1e-14;
  for (int k = 0; k < n; ++k) {
    const double w = coords.col(k).squaredNorm();
    if (w <= weight_cut) continue;  // this hypothesis never produces the branch
    states.push_back(coords.col(k) * coords.col(k).adjoint() / w);
    weights.push_back(w);
    total_weight += w;
  }
  if (states.empty()) return 0.0;

  RealVec priors(states.size());
  for (std::size_t k = 0; k < weights.size(); ++k) priors(k) = weights[k] / total_weight;
  auto ens = disc::Ensemble::mixed(std::move(states), priors);
  auto fp = disc::fixed_point_optimal_povm(ens, {.max_iter = 20000, .tol = 1e-12});
  return std::max(srm, total_weight / n * fp.povm.success_probability);
}

double kraus_branch_bound(const KrausSet& fault, const StateVector& input) {
  const int n = input.num_probes();
  const int nq = input.num_qubits();
  double total = 0.0;
  for (const auto& op : fault.operators()) {
    std::vector<Vec> branch;
    branch.reserve(n);
    for (int k = 1; k <= n; ++k) {
      Vec v = input.amplitudes();
      apply_single_qubit(op, input.probe_qubit(k), nq, v);
      branch.push_back(std::move(v));
    }
    total += branch_optimum(branch);
  }
  return total;
}

StrategyReport ad_product_lower_bound(const AmplitudeDampingChannel& channel, int n) {
  StrategyReport report;
  report.kind = StrategyKind::product_separable;
  report.bound = BoundKind::lower;
  report.success_probability = channel.gamma + (1.0 - channel.gamma) / n;
  report.input_description = "|1>^N probes; per-qubit readout along z";
  return report;
}

AdBranchOverlaps ad_branch_overlaps(const RealVec& coefficients, double gamma, int n) {
  if (coefficients.size() != n + 1) {
    throw std::invalid_argument("coefficient count must be n + 1");
  }
  const double root = std::sqrt(1.0 - gamma);
  AdBranchOverlaps out;
  double nbar = 0.0;
  for (int m = 0; m <= n; ++m) {
    const double c = coefficients(m);
    if (c == 0.0) continue;
    nbar += c * m;
    out.diag0 += c * ((m / double(n)) * (1.0 - gamma) + (n - m) / double(n));
    if (n >= 2) {
      const double denom = double(n) * (n - 1);
      out.off0 += c *
                  (m * (m - 1.0) * (1.0 - gamma) + 2.0 * m * (n - m) * root +
                   (n - m) * (n - m - 1.0)) /
                  denom;
    }
  }
  out.k1_probability = gamma * nbar / n;
  return out;
}

double ad_double_dicke_value(const RealVec& coefficients, double gamma, int n) {
  const AdBranchOverlaps o = ad_branch_overlaps(coefficients, gamma, n);
  return o.k1_probability + disc::srm_equal_overlap_value(n, o.diag0, o.off0);
}

namespace {

// Explicit 2N-qubit recomputation of the double-Dicke strategy value.
double ad_explicit_value(const RealVec& coefficients, double gamma, int n,
                         int qubit_cap) {
  const int nq = 2 * n;
  Vec psi = Vec::Zero(std::int64_t{1} << nq);
  for (int m = 0; m <= n; ++m) {
    if (coefficients(m) == 0.0) continue;
    psi += std::sqrt(coefficients(m)) *
           double_dicke_state(n, m, qubit_cap).amplitudes();
  }
  const KrausSet kraus = AmplitudeDampingChannel(gamma).kraus();
  std::vector<std::vector<Vec>> branches(kraus.rank());
  for (int k = 0; k < n; ++k) {
    auto per_op = kraus_branch_vectors(psi, kraus, 2 * k, nq);
    for (int i = 0; i < kraus.rank(); ++i) branches[i].push_back(std::move(per_op[i]));
  }
  double total = 0.0;
  for (const auto& branch : branches) {
    total += disc::srm_success_probability(gram_from_vectors(branch));
  }
  return total;
}

}  // namespace

AdAncillaReport ad_ancilla_strategy(const AmplitudeDampingChannel& channel, int n,
                                    int qubit_cap) {
  if (n < 1) throw std::invalid_argument("need at least one device");
  const double root = std::sqrt(1.0 - channel.gamma);
  const double p = (root * (3.0 * n - 2.0) + 2.0) / (root * (4.0 * n - 2.0) + 2.0);

  RealVec c = RealVec::Zero(n + 1);
  c(n) = p;
  c(n - 1) = 1.0 - p;

  AdAncillaReport out;
  out.p_coefficient = p;
  const AdBranchOverlaps overlaps = ad_branch_overlaps(c, channel.gamma, n);
  out.k1_probability = overlaps.k1_probability;
  out.report.kind = StrategyKind::ancilla_assisted;
  out.report.bound = BoundKind::exact;
  out.report.success_probability = ad_double_dicke_value(c, channel.gamma, n);
  out.report.input_description =
      "double-Dicke probe-ancilla input on weights {N-1, N}";

  if (2 * n <= qubit_cap) {
    out.oracle_value = ad_explicit_value(c, channel.gamma, n, qubit_cap);
    out.oracle_verified = true;
  }
  return out;
}

double ad_asymptotic_value(const AmplitudeDampingChannel& channel, int n) {
  const double g = channel.gamma;
  const double root = std::sqrt(1.0 - g);
  return g + root * (root + 1.0) / (2.0 * n) - g / (4.0 * double(n) * n);
}

std::pair<RealVec, double> ad_optimize_coefficients(double gamma, int n, int passes) {
  auto value = [&](const RealVec& c) { return ad_double_dicke_value(c, gamma, n); };

  // Pairwise weight-transfer ascent from a few deterministic starting points.
  auto ascend = [&](RealVec c) {
    double best = value(c);
    for (int pass = 0; pass < passes; ++pass) {
      for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          double lo = -c(i), hi = c(j);
          if (hi - lo < 1e-15) continue;
          for (int refine = 0; refine < 3; ++refine) {
            const int grid = 64;
            double t_best = 0.0, v_best = best;
            for (int g_i = 0; g_i <= grid; ++g_i) {
              const double t = lo + (hi - lo) * g_i / grid;
              RealVec trial = c;
              trial(i) += t;
              trial(j) -= t;
              const double v = value(trial);
              if (v > v_best) {
                v_best = v;
                t_best = t;
              }
            }
            c(i) += t_best;
            c(j) -= t_best;
            best = std::max(best, v_best);
            const double width = (hi - lo) / grid;
            lo = std::max(-c(i), -width);
            hi = std::min(c(j), width);
          }
        }
      }
    }
    return std::pair<RealVec, double>{c, best};
  };

  std::vector<RealVec> starts;
  starts.push_back(RealVec::Constant(n + 1, 1.0 / (n + 1)));
  RealVec corner = RealVec::Zero(n + 1);
  corner(n) = 1.0;
  starts.push_back(corner);
  RealVec two = RealVec::Zero(n + 1);
  two(n) = 0.75;
  two(n - 1) = 0.25;
  starts.push_back(two);

  std::pair<RealVec, double> best{starts[0], -1.0};
  for (const auto& s : starts) {
    auto cand = ascend(s);
    if (cand.second > best.second) best = std::move(cand);
  }
  return best;
}

disc::Ensemble conditional_states(const KrausSet& fault, const StateVector& input,
                                  bool with_ancilla) {
  if (with_ancilla != input.has_ancillas()) {
    throw std::invalid_argument(
        "ancilla flag does not match the input register layout");
  }
  const int n = input.num_probes();
  const int nq = input.num_qubits();
  const Mat rho = input.amplitudes() * input.amplitudes().adjoint();

  std::vector<Mat> states;
  states.reserve(n);
  for (int k = 1; k <= n; ++k) {
    const int q = input.probe_qubit(k);
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& op : fault.operators()) {
      Mat term = rho;
      apply_single_qubit_rows(op, q, nq, term);
      apply_single_qubit_cols_dagger(op, q, nq, term);
      out += term;
    }
    states.push_back(std::move(out));
  }
  return disc::Ensemble::mixed(std::move(states), RealVec::Constant(n, 1.0 / n));
}

}  // namespace pei::channel
