#include "genesol/measure_kit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace genesol {

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                     int max_iter) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = A.transpose() * (b - A * x);
  int iter = 0;
  while (iter++ < max_iter) {
    int t = -1;
    double wmax = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > wmax) {
        wmax = w[j];
        t = j;
      }
    if (t < 0) break;
    passive[t] = true;
    while (true) {
      std::vector<int> P;
      for (int j = 0; j < n; ++j)
        if (passive[j]) P.push_back(j);
      Eigen::MatrixXd Ap(A.rows(), P.size());
      for (std::size_t j = 0; j < P.size(); ++j) Ap.col(j) = A.col(P[j]);
      Eigen::VectorXd z =
          Ap.colPivHouseholderQr().solve(b);
      double alpha = 1.0;
      bool clipped = false;
      for (std::size_t j = 0; j < P.size(); ++j)
        if (z[j] <= tol) {
          double xj = x[P[j]];
          if (xj - z[j] > 0) alpha = std::min(alpha, xj / (xj - z[j]));
          clipped = true;
        }
      if (!clipped) {
        for (std::size_t j = 0; j < P.size(); ++j) x[P[j]] = z[j];
        break;
      }
      for (std::size_t j = 0; j < P.size(); ++j)
        x[P[j]] = x[P[j]] + alpha * (z[j] - x[P[j]]);
      for (std::size_t j = 0; j < P.size(); ++j)
        if (x[P[j]] <= tol) {
          x[P[j]] = 0.0;
          passive[P[j]] = false;
        }
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

// ---- defect fields ----

void DefectField::validate(double sym_tol, double eig_tol) const {
  if (R.rank() != Rank::Matrix)
    throw std::invalid_argument("DefectField: R must be a matrix field");
  for (std::size_t c = 0; c < R.cells(); ++c) {
    Eigen::MatrixXd M = R.matrix_at(c);
    if ((M - M.transpose()).norm() > sym_tol)
      throw std::domain_error("DefectField: R not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    if (es.eigenvalues().minCoeff() < -eig_tol)
      throw std::domain_error("DefectField: R not PSD");
  }
}

RecoveredDefect recover_defect(const std::vector<double>& residuals,
                               const std::vector<TorusField>& basis_gradients,
                               DefectNorm norm_kind) {
  const std::size_t m = basis_gradients.size();
  if (m == 0 || residuals.size() != m)
    throw std::invalid_argument("recover_defect: residuals/basis size mismatch");
  for (const auto& g : basis_gradients)
    if (g.rank() != Rank::Matrix)
      throw std::invalid_argument("recover_defect: basis entries must be matrix fields");

  Eigen::MatrixXd gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      gram(i, j) = inner(basis_gradients[i], basis_gradients[j]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (lu.rank() < static_cast<Eigen::Index>(m))
    throw std::runtime_error("recover_defect: basis gradients are linearly dependent");
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(residuals.data(), m);
  Eigen::VectorXd c = lu.solve(r);

  // least-norm R = -sum_j c_j grad psi_j (row space of the constraint map)
  TorusField raw(basis_gradients[0].grid(), Rank::Matrix);
  for (std::size_t j = 0; j < m; ++j) raw -= c[j] * basis_gradients[j];

  TorusField projected = raw;
  for (std::size_t cell = 0; cell < projected.cells(); ++cell) {
    Eigen::MatrixXd M = projected.matrix_at(cell);
    Eigen::MatrixXd S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    projected.set_matrix(
        cell, es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
  }

  RecoveredDefect out;
  out.raw = raw;
  out.field.R = projected;
  out.field.norm_kind = norm_kind;
  out.projection_distance = l2_norm(projected - raw);
  return out;
}

// ---- varifolds ----

double Varifold::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

void Varifold::validate() const {
  for (const auto& a : atoms) {
    if (a.mass < 0.0) throw std::domain_error("Varifold: negative mass");
    if (std::abs(a.direction.norm() - 1.0) > 1e-12)
      throw std::domain_error("Varifold: non-unit direction");
  }
}

InterfaceData InterfaceData::from_indicator(const TorusField& chi, double tol) {
  if (chi.rank() != Rank::Scalar)
    throw std::invalid_argument("InterfaceData: chi must be scalar");
  InterfaceData out;
  out.chi = chi;
  TorusField g = gradient(chi);
  for (std::size_t c = 0; c < chi.cells(); ++c) {
    Eigen::VectorXd gc = g.vector_at(c);
    double n = gc.norm();
    if (n > tol) out.atoms.push_back({c, gc / n, n});
  }
  out.validate();
  return out;
}

void InterfaceData::validate() const {
  for (std::size_t c = 0; c < chi.cells(); ++c) {
    double v = chi.at(c);
    if (std::abs(v) > 1e-12 && std::abs(v - 1.0) > 1e-12)
      throw std::domain_error("InterfaceData: chi must be two-valued {0,1}");
  }
  for (const auto& a : atoms) {
    if (a.mass < 0.0) throw std::domain_error("InterfaceData: negative mass");
    if (std::abs(a.normal.norm() - 1.0) > 1e-12)
      throw std::domain_error("InterfaceData: non-unit normal");
  }
}

Varifold build_varifold(const DefectField& defect,
                        const std::optional<InterfaceData>& interface) {
  Varifold out;
  const TorusField& R = defect.R;
  for (std::size_t c = 0; c < R.cells(); ++c) {
    Eigen::MatrixXd M = R.matrix_at(c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double lam = es.eigenvalues()[i];
      if (lam < -1e-10) throw std::domain_error("build_varifold: defect not PSD");
      if (lam <= 1e-14) continue;
      Eigen::VectorXd e = es.eigenvectors().col(i);
      out.atoms.push_back({c, e, 0.5 * lam});
      out.atoms.push_back({c, (-e).eval(), 0.5 * lam});
    }
  }
  if (interface)
    for (const auto& a : interface->atoms) out.atoms.push_back({a.cell, a.normal, a.mass});
  return out;
}

// ---- moment matching ----

namespace {

// Gauss-Newton search for a state x with g(x) = target; finite-difference
// Jacobian, damped steps, best iterate returned.
Eigen::VectorXd g_preimage(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                           const Eigen::VectorXd& start, const Eigen::VectorXd& target) {
  Eigen::VectorXd x = start;
  Eigen::VectorXd best = x;
  double best_err = (g(x) - target).norm();
  const int n = static_cast<int>(x.size());
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd r = g(x) - target;
    if (r.norm() <= 1e-13) break;
    const int mdim = static_cast<int>(r.size());
    Eigen::MatrixXd J(mdim, n);
    double h = 1e-6 * (1.0 + x.norm());
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      J.col(j) = (g(xp) - g(xm)) / (2.0 * h);
    }
    Eigen::VectorXd step =
        (J.transpose() * J + 1e-12 * Eigen::MatrixXd::Identity(n, n))
            .ldlt()
            .solve(J.transpose() * r);
    double t = 1.0;
    for (int back = 0; back < 30; ++back) {
      double err = (g(x - t * step) - target).norm();
      if (err < r.norm()) break;
      t *= 0.5;
    }
    x -= t * step;
    double err = (g(x) - target).norm();
    if (err < best_err) {
      best_err = err;
      best = x;
    }
    if (t * step.norm() < 1e-14) break;
  }
  return best;
}

}  // namespace

MatchedMeasure match_moments(
    const std::function<double(const Eigen::VectorXd&)>& eta,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& mean, const Eigen::VectorXd& g_target, double surplus,
    int atom_budget) {
  if (surplus < 0.0) throw std::invalid_argument("match_moments: surplus >= 0");
  if (atom_budget < 3) throw std::invalid_argument("match_moments: atom_budget >= 3");
  const int n = static_cast<int>(mean.size());
  Eigen::VectorXd g_mean = g(mean);
  double defect_norm = (g_target - g_mean).norm();
  double energy_target = eta(mean) + defect_norm + surplus;

  auto finish = [&](MatchedMeasure m) {
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd gm = Eigen::VectorXd::Zero(g_target.size());
    double em = 0.0;
    for (const auto& [w, x] : m.atoms) {
      mom += w * x;
      gm += w * g(x);
      em += w * eta(x);
    }
    m.mean_residual = (mom - mean).norm();
    m.g_residual = (gm - g_target).norm();
    m.energy_residual = std::abs(em + m.gamma - energy_target);
    return m;
  };

  // Dirac shortcut
  if (defect_norm <= 1e-12 && surplus <= 1e-12) {
    MatchedMeasure m;
    m.atoms.emplace_back(1.0, mean);
    m.gamma = 0.0;
    return finish(m);
  }

  // Symmetric two-atom solve: mean +- r u at weight 1/2 matches the mean
  // exactly; works whenever g is already matched at the mean.
  if (defect_norm <= 1e-12) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    u[0] = 1.0;
    auto phi = [&](double r) { return 0.5 * (eta(mean + r * u) + eta(mean - r * u)); };
    double lo = 0.0, hi = 1.0;
    while (phi(hi) < energy_target && hi < 1e8) hi *= 2.0;
    if (phi(hi) >= energy_target) {
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (phi(mid) < energy_target ? lo : hi) = mid;
      }
      double r = 0.5 * (lo + hi);
      MatchedMeasure m;
      m.atoms.emplace_back(0.5, (mean + r * u).eval());
      m.atoms.emplace_back(0.5, (mean - r * u).eval());
      m.gamma = std::max(0.0, energy_target - phi(r));
      m = finish(m);
      if (m.mean_residual <= 1e-10 && m.g_residual <= 1e-10 &&
          m.energy_residual <= 1e-8)
        return m;
    }
  }

  // Candidate set + nonnegative least squares, gamma as a slack column in
  // the energy row.
  std::vector<Eigen::VectorXd> cand;
  cand.push_back(mean);
  Eigen::VectorXd pre = g_preimage(g, mean, g_target);
  cand.push_back(pre);
  cand.push_back((2.0 * mean - pre).eval());
  for (double tscale : {0.5, 1.5, 2.0, 3.0}) {
    cand.push_back((mean + tscale * (pre - mean)).eval());
    cand.push_back((mean - tscale * (pre - mean)).eval());
  }
  double radius = std::sqrt(std::max(1.0, energy_target));
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = radius;
    cand.push_back((mean + e).eval());
    cand.push_back((mean - e).eval());
  }

  const int mdim = static_cast<int>(g_target.size());
  const int rows = 1 + n + mdim + 1;
  const int cols = static_cast<int>(cand.size()) + 1;  // + gamma
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd b(rows);
  for (int j = 0; j < cols - 1; ++j) {
    A(0, j) = 1.0;
    A.block(1, j, n, 1) = cand[j];
    A.block(1 + n, j, mdim, 1) = g(cand[j]);
    A(1 + n + mdim, j) = eta(cand[j]);
  }
  A(1 + n + mdim, cols - 1) = 1.0;  // gamma slack
  b[0] = 1.0;
  b.segment(1, n) = mean;
  b.segment(1 + n, mdim) = g_target;
  b[1 + n + mdim] = energy_target;

  Eigen::VectorXd w = nnls(A, b);
  MatchedMeasure m;
  m.gamma = w[cols - 1];
  for (int j = 0; j < cols - 1; ++j)
    if (w[j] > 1e-14) m.atoms.emplace_back(w[j], cand[j]);
  // renormalize the tiny NNLS slack in the weight row
  double wsum = 0.0;
  for (auto& [wt, x] : m.atoms) wsum += wt;
  if (std::abs(wsum - 1.0) < 1e-8 && wsum > 0.0)
    for (auto& [wt, x] : m.atoms) wt /= wsum;
  m = finish(m);
  if (static_cast<int>(m.atoms.size()) > atom_budget || m.mean_residual > 1e-10 ||
      m.g_residual > 1e-10 || m.energy_residual > 1e-8)
    throw MatchInfeasible("match_moments: no measure within budget and tolerances",
                          (A * w - b).norm());
  return m;
}

// ---- Gaussian construction ----

std::vector<Eigen::Matrix3d> gaussian_measure(const Eigen::Matrix3d& A,
                                              const Eigen::Matrix3d& B,
                                              int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("gaussian_measure: sample_count >= 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (B + B.transpose()));
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::domain_error("gaussian_measure: covariance not PSD");
  Eigen::Matrix3d sqrtB = es.eigenvectors() *
                          es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                          es.eigenvectors().transpose();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(3.0);
  std::vector<Eigen::Matrix3d> atoms;
  atoms.reserve(sample_count);
  for (int s = 0; s < sample_count; ++s) {
    Eigen::Matrix3d xi;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) xi(i, j) = gauss(rng);
    atoms.push_back(A + scale * xi * sqrtB);
  }
  return atoms;
}

}  // namespace genesol
