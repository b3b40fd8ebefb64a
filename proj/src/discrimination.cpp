#include "pei/discrimination.hpp"

#include <cmath>
#include <random>

namespace pei::disc {

namespace {

constexpr double kCirculantTol = 1e-12;
constexpr double kPriorTol = 1e-12;

void check_ensemble(const Ensemble& e) {
  if (e.states.empty()) throw std::invalid_argument("empty ensemble");
  if (e.priors.size() != e.size()) {
    throw std::invalid_argument("prior count does not match state count");
  }
  if (std::abs(e.priors.sum() - 1.0) > kPriorTol || e.priors.minCoeff() < 0.0) {
    throw std::invalid_argument("priors must be nonnegative and sum to 1");
  }
  for (const auto& s : e.states) {
    if (s.rows() != e.dim()) {
      throw std::invalid_argument("ensemble states must share one dimension");
    }
  }
}

// Spectral square root with a relative clamp on round-off eigenvalues.
Mat sqrt_psd(const Mat& g, RealVec* eigenvalues = nullptr) {
  Eigen::SelfAdjointEigenSolver<Mat> es((g + g.adjoint()) / 2.0);
  RealVec w = es.eigenvalues();
  const double cut = std::max(w.maxCoeff(), 0.0) * 1e-13;
  RealVec s(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    s(i) = w(i) > cut ? std::sqrt(w(i)) : 0.0;
  }
  if (eigenvalues) *eigenvalues = w;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

Mat inv_sqrt_psd(const Mat& g, bool* rank_deficient) {
  Eigen::SelfAdjointEigenSolver<Mat> es((g + g.adjoint()) / 2.0);
  RealVec w = es.eigenvalues();
  const double cut = std::max(w.maxCoeff(), 0.0) * 1e-13;
  RealVec s(w.size());
  bool deficient = false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > cut) {
      s(i) = 1.0 / std::sqrt(w(i));
    } else {
      s(i) = 0.0;
      deficient = true;
    }
  }
  if (rank_deficient) *rank_deficient = deficient;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

bool circulant_within(const Mat& g, double tol) {
  const auto n = g.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(g((i + 1) % n, (j + 1) % n) - g(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace

Ensemble Ensemble::uniform_pure(std::vector<Vec> states) {
  const int n = static_cast<int>(states.size());
  return pure_with_priors(std::move(states), RealVec::Constant(n, 1.0 / n));
}

Ensemble Ensemble::pure_with_priors(std::vector<Vec> states, RealVec priors) {
  Ensemble e;
  e.pure = std::move(states);
  e.priors = std::move(priors);
  e.states.reserve(e.pure.size());
  for (const auto& v : e.pure) {
    if (std::abs(v.norm() - 1.0) > 1e-10) {
      throw std::invalid_argument("pure ensemble states must be normalized");
    }
    e.states.push_back(v * v.adjoint());
  }
  check_ensemble(e);
  return e;
}

Ensemble Ensemble::mixed(std::vector<Mat> states, RealVec priors) {
  Ensemble e;
  e.states = std::move(states);
  e.priors = std::move(priors);
  check_ensemble(e);
  return e;
}

GramMatrix gram_of(const Ensemble& ensemble) {
  if (!ensemble.is_pure()) {
    throw std::invalid_argument("gram_of requires a pure-state ensemble");
  }
  const int n = ensemble.size();
  const RealVec uniform = RealVec::Constant(n, 1.0 / n);
  if ((ensemble.priors - uniform).cwiseAbs().maxCoeff() > kPriorTol) {
    throw std::invalid_argument("gram_of requires uniform priors");
  }
  GramMatrix g;
  g.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g.entries(i, j) = ensemble.pure[i].dot(ensemble.pure[j]) / double(n);
    }
  }
  g.entries = (g.entries + g.entries.adjoint()) / 2.0;
  g.is_circulant = circulant_within(g.entries, kCirculantTol);
  Eigen::SelfAdjointEigenSolver<Mat> es(g.entries, Eigen::EigenvaluesOnly);
  g.eigenvalues = es.eigenvalues();
  return g;
}

double srm_success_probability(const GramMatrix& gram) {
  Mat s = sqrt_psd(gram.entries);
  double p = 0.0;
  for (Eigen::Index k = 0; k < s.rows(); ++k) p += std::norm(s(k, k));
  return std::min(p, 1.0 + 1e-15);
}

double srm_equal_overlap_value(int n, double diag, double offdiag) {
  if (n == 1) return std::max(diag, 0.0);
  const double lam1 = diag + (n - 1) * offdiag;
  const double lam2 = diag - offdiag;
  const double tr = std::sqrt(std::max(lam1, 0.0)) +
                    (n - 1) * std::sqrt(std::max(lam2, 0.0));
  return tr * tr / (double(n) * double(n));
}

Povm srm_povm(const Ensemble& ensemble, const GramMatrix& gram) {
  if (!ensemble.is_pure()) {
    throw std::invalid_argument("srm_povm requires a pure-state ensemble");
  }
  const int n = ensemble.size();
  bool deficient = false;
  Mat g_inv_sqrt = inv_sqrt_psd(gram.entries, &deficient);

  // Columns sqrt(p_k)|psi_k>; measurement vectors are Psi G^{-1/2}.
  Mat psi(ensemble.dim(), n);
  for (int k = 0; k < n; ++k) {
    psi.col(k) = std::sqrt(ensemble.priors(k)) * ensemble.pure[k];
  }
  Mat m = psi * g_inv_sqrt;

  Povm povm;
  // The SRM vectors resolve the identity on the span of the states only.
  povm.support_only = deficient || ensemble.size() < ensemble.dim();
  povm.elements.reserve(n);
  double p = 0.0;
  for (int k = 0; k < n; ++k) {
    povm.elements.push_back(m.col(k) * m.col(k).adjoint());
    p += ensemble.priors(k) * std::norm(m.col(k).dot(ensemble.pure[k]));
  }
  povm.success_probability = p;
  return povm;
}

double completeness_defect(const Ensemble& ensemble, const Povm& povm) {
  Mat sum = Mat::Zero(ensemble.dim(), ensemble.dim());
  for (const auto& m : povm.elements) sum += m;
  Mat target;
  if (povm.support_only) {
    // Projector onto the joint support of the weighted states.
    Mat acc = Mat::Zero(ensemble.dim(), ensemble.dim());
    for (int k = 0; k < ensemble.size(); ++k) {
      acc += ensemble.priors(k) * ensemble.states[k];
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(acc);
    const double cut = std::max(es.eigenvalues().maxCoeff(), 0.0) * 1e-12;
    target = Mat::Zero(ensemble.dim(), ensemble.dim());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) > cut) {
        target += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      }
    }
  } else {
    target = Mat::Identity(ensemble.dim(), ensemble.dim());
  }
  return (sum - target).cwiseAbs().maxCoeff();
}

DualCertificate check_dual_certificate(const Ensemble& ensemble, const Povm& povm) {
  const int n = ensemble.size();
  const auto d = ensemble.dim();
  Mat gamma = Mat::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    Mat t = ensemble.priors(k) * (ensemble.states[k] * povm.elements[k]);
    gamma += (t + t.adjoint()) / 2.0;
  }
  DualCertificate cert;
  cert.gamma = gamma;
  cert.objective = gamma.trace().real();
  double slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    Mat diff = gamma - ensemble.priors(k) * ensemble.states[k];
    Eigen::SelfAdjointEigenSolver<Mat> es((diff + diff.adjoint()) / 2.0,
                                          Eigen::EigenvaluesOnly);
    slack = std::min(slack, es.eigenvalues().minCoeff());
  }
  cert.slack = slack;
  return cert;
}

FixedPointResult fixed_point_optimal_povm(const Ensemble& ensemble,
                                          FixedPointOptions opts,
                                          const std::vector<Mat>* warm_start) {
  check_ensemble(ensemble);
  if (ensemble.size() < 1) throw std::invalid_argument("need at least one state");
  const int n = ensemble.size();
  const auto d = ensemble.dim();

  std::vector<Mat> weighted(n);
  for (int k = 0; k < n; ++k) weighted[k] = ensemble.priors(k) * ensemble.states[k];

  std::vector<Mat> m(n);
  if (warm_start && static_cast<int>(warm_start->size()) == n) {
    m = *warm_start;
  } else {
    for (int k = 0; k < n; ++k) m[k] = Mat::Identity(d, d) / double(n);
  }

  auto success = [&](const std::vector<Mat>& povm) {
    double p = 0.0;
    for (int k = 0; k < n; ++k) p += (povm[k] * weighted[k]).trace().real();
    return p;
  };

  FixedPointResult result;
  double p_prev = success(m);
  for (int it = 1; it <= opts.max_iter; ++it) {
    result.iterations = it;
    std::vector<Mat> a(n);
    Mat lambda = Mat::Zero(d, d);
    for (int k = 0; k < n; ++k) {
      a[k] = weighted[k] * m[k] * weighted[k];
      lambda += a[k];
    }
    Mat l = inv_sqrt_psd(lambda, nullptr);
    Mat deficit = Mat::Identity(d, d);
    for (int k = 0; k < n; ++k) {
      m[k] = l * a[k] * l;
      m[k] = (m[k] + m[k].adjoint()) / 2.0;
      deficit -= m[k];
    }
    // Distribute any kernel of lambda so the POVM is complete on the whole space.
    deficit /= double(n);
    for (int k = 0; k < n; ++k) m[k] += deficit;

    const double p = success(m);
    if (std::abs(p - p_prev) < opts.tol) {
      result.converged = true;
      p_prev = p;
      break;
    }
    p_prev = p;
  }

  result.povm.elements = std::move(m);
  result.povm.success_probability = p_prev;
  result.certificate = check_dual_certificate(ensemble, result.povm);
  return result;
}

Ensemble placement_ensemble(const KrausSet& fault, const Vec& input,
                            int n_devices, bool use_ancilla) {
  const int nq = log2_dim(input.size());
  const int expected = n_devices * (use_ancilla ? 2 : 1);
  if (nq != expected) {
    throw std::invalid_argument("input register has " + std::to_string(nq) +
                                " qubits, expected " + std::to_string(expected));
  }
  std::vector<Mat> states;
  states.reserve(n_devices);
  const Mat rho = input * input.adjoint();
  for (int k = 0; k < n_devices; ++k) {
    const int q = use_ancilla ? 2 * k : k;
    Mat out = Mat::Zero(input.size(), input.size());
    for (const auto& kop : fault.operators()) {
      Mat term = rho;
      apply_single_qubit_rows(kop, q, nq, term);
      apply_single_qubit_cols_dagger(kop, q, nq, term);
      out += term;
    }
    states.push_back(std::move(out));
  }
  return Ensemble::mixed(std::move(states),
                         RealVec::Constant(n_devices, 1.0 / n_devices));
}

SeesawResult seesaw_optimize(const KrausSet& fault, int n_devices, bool use_ancilla,
                             SeesawOptions opts) {
  if (n_devices < 1) throw std::invalid_argument("need at least one device");
  if (opts.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const int nq = n_devices * (use_ancilla ? 2 : 1);
  const std::int64_t d = std::int64_t{1} << nq;

  double best_value = -1.0;
  int best_restart = 0;
  bool all_converged = true;
  Vec best_psi;
  Povm best_povm;
  std::vector<double> best_history;

  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec psi(d);
    for (std::int64_t i = 0; i < d; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
    psi /= psi.norm();

    std::vector<Mat> warm;
    std::vector<double> history;
    double value = -1.0;
    bool converged = false;
    Povm povm;

    for (int outer = 0; outer < opts.max_outer; ++outer) {
      Ensemble ens = placement_ensemble(fault, psi, n_devices, use_ancilla);
      FixedPointResult fp = fixed_point_optimal_povm(
          ens, opts.inner, warm.empty() ? nullptr : &warm);
      double p_meas = fp.povm.success_probability;
      warm = fp.povm.elements;
      povm = fp.povm;

      // Pull the measurement back through the placement; the success
      // probability is linear in the input, so the optimum is the top
      // eigenvector of the pulled-back operator.
      Mat f = Mat::Zero(d, d);
      for (int k = 0; k < n_devices; ++k) {
        const int q = use_ancilla ? 2 * k : k;
        for (const auto& kop : fault.operators()) {
          Mat term = fp.povm.elements[k];
          apply_single_qubit_rows(Mat2(kop.adjoint()), q, nq, term);
          apply_single_qubit_cols_dagger(Mat2(kop.adjoint()), q, nq, term);
          f += term / double(n_devices);
        }
      }
      Eigen::SelfAdjointEigenSolver<Mat> es((f + f.adjoint()) / 2.0);
      const double p_state = es.eigenvalues().maxCoeff();
      Eigen::Index top;
      es.eigenvalues().maxCoeff(&top);
      psi = es.eigenvectors().col(top);
      psi /= psi.norm();

      const double p = std::max(p_meas, p_state);
      history.push_back(p);
      if (p - value < opts.tol) {
        value = std::max(value, p);
        converged = true;
        break;
      }
      value = p;
    }

    if (value > best_value + 1e-15) {
      best_value = value;
      best_povm = std::move(povm);
      best_restart = r;
      best_history = std::move(history);
      best_psi = psi;
    }
    all_converged = all_converged && converged;
  }

  auto layout = use_ancilla ? probe_ancilla_layout(n_devices)
                            : probe_layout(n_devices);
  return SeesawResult{StateVector(best_psi, std::move(layout)),
                      std::move(best_povm),
                      best_value,
                      best_restart,
                      all_converged,
                      std::move(best_history)};
}

}  // namespace pei::disc
