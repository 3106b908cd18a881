#include <doctest.h>

#include <cmath>
#include <random>

#include "genesol/energy_models.hpp"

using namespace genesol;

namespace {

Eigen::MatrixXd random_mat(int d, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd F(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) F(i, j) = scale * gauss(rng);
  return F;
}

// central finite difference of G along direction H
double fd_directional(const std::function<double(const Eigen::MatrixXd&)>& G,
                      const Eigen::MatrixXd& F, const Eigen::MatrixXd& H, double h) {
  return (G(F + h * H) - G(F - h * H)) / (2 * h);
}

}  // namespace

TEST_CASE("quadratic model stress and Hessian match finite differences") {
  for (int d : {1, 2, 3}) {
    ConvexElasticModel m = quadratic_elastic_model(d);
    Eigen::MatrixXd F = random_mat(d, 100 + d);
    ConvexEval e = convex_eval(m, F);
    CHECK(e.value == doctest::Approx(0.5 * F.squaredNorm()).epsilon(1e-14));
    CHECK((e.stress - F).norm() <= 1e-14);
    CHECK((e.hessian - Eigen::MatrixXd::Identity(d * d, d * d)).norm() <= 1e-14);
  }
}

TEST_CASE("perturbed model derivatives match finite differences") {
  const double delta = 0.1;
  for (int d : {1, 2, 3}) {
    ConvexElasticModel m = perturbed_quadratic_model(d, delta);
    Eigen::MatrixXd F = random_mat(d, 200 + d);
    ConvexEval e = convex_eval(m, F);
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::MatrixXd H = random_mat(d, 300 + 10 * d + trial);
      H /= H.norm();
      double fd = fd_directional(m.G, F, H, 1e-5);
      double an = (e.stress.array() * H.array()).sum();
      CHECK(fd == doctest::Approx(an).epsilon(1e-8));
      // Hessian action via stress difference
      Eigen::MatrixXd dstress =
          (m.DG(F + 1e-5 * H) - m.DG(F - 1e-5 * H)) / 2e-5;
      Eigen::Map<const Eigen::VectorXd> hvec(H.data(), d * d);
      // row-major vec: remap H transposed since Eigen is column-major
      Eigen::MatrixXd Ht = H.transpose();
      Eigen::Map<const Eigen::VectorXd> hrow(Ht.data(), d * d);
      Eigen::VectorXd hess_h = e.hessian * hrow;
      Eigen::MatrixXd dstress_t = dstress.transpose();
      Eigen::Map<const Eigen::VectorXd> drow(dstress_t.data(), d * d);
      CHECK((hess_h - drow).norm() <= 1e-6);
    }
    // Hessian eigenvalues within the advertised [m, M] bounds
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian);
    CHECK(es.eigenvalues().minCoeff() >= m.m - 1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= m.M + 1e-12);
  }
}

TEST_CASE("sampled convexity constants bracket the analytic bounds") {
  ConvexElasticModel m = perturbed_quadratic_model(3, 0.1);
  ConvexityConstants c = estimate_convexity_constants(m, 200, 2.0);
  CHECK(c.m_hat >= 1.0 - 1e-10);
  CHECK(c.M_hat <= 1.1 + 1e-10);
  CHECK(c.m_hat <= c.M_hat);
  // the quadratic model is exactly the identity Hessian
  ConvexityConstants cq =
      estimate_convexity_constants(quadratic_elastic_model(2), 50, 1.0);
  CHECK(cq.m_hat == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cq.M_hat == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("model lookup by id") {
  CHECK(elastic_model_by_id("quadratic", 2).id == "quadratic");
  CHECK(elastic_model_by_id("perturbed", 3).id == "perturbed");
  CHECK_THROWS_AS(elastic_model_by_id("nope", 2), std::invalid_argument);
}

TEST_CASE("polyconvex kinematics reproduce cofactor and determinant") {
  Eigen::Matrix3d F = random_mat(3, 400);
  Kinematics kin = polyconvex_kinematics(F);
  double det = F.determinant();
  CHECK(kin.det == doctest::Approx(det).epsilon(1e-12));
  Eigen::Matrix3d cof_ref = det * F.inverse().transpose();
  CHECK((kin.cof - cof_ref).norm() <= 1e-10);
  CHECK((kin.ddet - kin.cof).norm() <= 1e-14);

  // dcof against finite differences of the cofactor map
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j)
    for (int b = 0; b < 3; ++b) {
      Eigen::Matrix3d Fp = F, Fm = F;
      Fp(j, b) += h;
      Fm(j, b) -= h;
      Eigen::Matrix3d dc = (polyconvex_kinematics(Fp).cof -
                            polyconvex_kinematics(Fm).cof) /
                           (2 * h);
      for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
          CHECK(kin.dcof(3 * i + a, 3 * j + b) ==
                doctest::Approx(dc(i, a)).epsilon(1e-6));
    }
}

TEST_CASE("zeta is the gradient of the composed stored energy") {
  PolyconvexModel m = polyconvex_example_model(0.01, 0.02);
  Eigen::Matrix3d F = Eigen::Matrix3d::Identity() + 0.3 * random_mat(3, 500);
  Eigen::Matrix3d zeta = zeta_eval(m, F);
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix3d Fp = F, Fm = F;
      Fp(i, j) += h;
      Fm(i, j) -= h;
      double fd = (sigma_eval(m, Fp) - sigma_eval(m, Fm)) / (2 * h);
      CHECK(zeta(i, j) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("polyconvex partial derivatives match finite differences") {
  PolyconvexModel m = polyconvex_example_model(0.01, 0.02);
  Eigen::Matrix3d F = random_mat(3, 600);
  Eigen::Matrix3d Z = random_mat(3, 601);
  double w = 0.7;
  const double h = 1e-6;
  Eigen::Matrix3d dF = m.dF(F, Z, w);
  Eigen::Matrix3d dZ = m.dZ(F, Z, w);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix3d Fp = F, Fm = F;
      Fp(i, j) += h;
      Fm(i, j) -= h;
      CHECK(dF(i, j) ==
            doctest::Approx((m.G(Fp, Z, w) - m.G(Fm, Z, w)) / (2 * h)).epsilon(1e-5));
      Eigen::Matrix3d Zp = Z, Zm = Z;
      Zp(i, j) += h;
      Zm(i, j) -= h;
      CHECK(dZ(i, j) ==
            doctest::Approx((m.G(F, Zp, w) - m.G(F, Zm, w)) / (2 * h)).epsilon(1e-5));
    }
  CHECK(m.dw(F, Z, w) ==
        doctest::Approx((m.G(F, Z, w + h) - m.G(F, Z, w - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("strict convexity margin is positive for the example energy") {
  PolyconvexModel m = polyconvex_example_model(0.01, 0.02);
  CHECK(strict_convexity_margin(m, 500, 2.0) > 0.0);
}

TEST_CASE("liquid crystal parameter validation") {
  LiquidCrystalModel ok;
  CHECK_NOTHROW(ok.validate());
  LiquidCrystalModel bad = ok;
  bad.K3 = 0.5;  // K3 <= K1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.mu4 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.lambda = 5.0;  // mu5 + mu6 - lambda^2 < 0
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("unit director check renormalizes or throws") {
  Eigen::Vector3d d(1.0 + 5e-9, 0, 0);
  Eigen::Vector3d u = require_unit(d);
  CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(require_unit(Eigen::Vector3d(1.1, 0, 0)), std::domain_error);
}

TEST_CASE("full Oseen-Frank density equals the reduced one on tangential gradients") {
  LiquidCrystalModel m;
  m.K1 = 1.0;
  m.K3 = 2.5;
  std::mt19937_64 rng(700);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    d.normalize();
    Eigen::Matrix3d Gd;
    for (int i = 0; i < 9; ++i) Gd(i / 3, i % 3) = gauss(rng);
    // project so that Gd^T d = 0 (unit-length constraint on the director)
    Gd = (Eigen::Matrix3d::Identity() - d * d.transpose()) * Gd;
    OseenFrankEval e = oseen_frank_eval(m, d, Gd);
    CHECK(e.full == doctest::Approx(e.reduced).epsilon(1e-12));
    CHECK(e.value == doctest::Approx(e.reduced).epsilon(1e-15));
  }
}

TEST_CASE("Oseen-Frank derivatives match finite differences") {
  LiquidCrystalModel m;
  m.K1 = 1.0;
  m.K3 = 2.0;
  Eigen::Vector3d d(0.0, 0.6, 0.8);
  Eigen::Matrix3d Gd = random_mat(3, 710);
  OseenFrankEval e = oseen_frank_eval(m, d, Gd);
  const double h = 1e-6;
  auto reduced = [&](const Eigen::Vector3d& dd, const Eigen::Matrix3d& G) {
    double k = m.K3 - m.K1;
    return 0.5 * m.K1 * G.squaredNorm() + 0.5 * k * (G * dd).squaredNorm();
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix3d Gp = Gd, Gm = Gd;
      Gp(i, j) += h;
      Gm(i, j) -= h;
      CHECK(e.d_grad(i, j) ==
            doctest::Approx((reduced(d, Gp) - reduced(d, Gm)) / (2 * h)).epsilon(1e-6));
    }
  // d-derivative computed without the unit constraint
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d dp = d, dm = d;
    dp[i] += h;
    dm[i] -= h;
    CHECK(e.d_dir[i] ==
          doctest::Approx((reduced(dp, Gd) - reduced(dm, Gd)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("Leslie stress is dissipative against the strain rate") {
  LiquidCrystalModel m;
  m.lambda = 0.5;
  m.mu1 = 1.2;
  m.mu4 = 0.9;
  m.mu5 = 0.8;
  m.mu6 = 0.7;
  m.validate();
  std::mt19937_64 rng(720);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
    d.normalize();
    Eigen::Matrix3d Dv;
    for (int i = 0; i < 9; ++i) Dv(i / 3, i % 3) = gauss(rng);
    Eigen::Vector3d q(gauss(rng), gauss(rng), gauss(rng));
    LeslieStressEval le = leslie_stress_eval(m, d, Dv, q);
    Eigen::Matrix3d S = 0.5 * (Dv + Dv.transpose());
    Eigen::Matrix3d W = 0.5 * (Dv - Dv.transpose());
    double lambda = m.lambda;
    Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - d * d.transpose();
    // TL : Dv minus the exchange terms with the director equation must equal
    // the nonnegative dissipation quadratic
    double quad = (m.mu1 + lambda * lambda) * std::pow(d.dot(S * d), 2) +
                  m.mu4 * S.squaredNorm() +
                  (m.mu5 + m.mu6 - lambda * lambda) * (S * d).squaredNorm();
    double contraction = (le.TL.array() * Dv.array()).sum();
    // contraction = dissipation quadratic + coupling of q against the
    // kinematic transport W d - lambda P S d of the director
    CHECK(contraction == doctest::Approx(quad + (W * d - lambda * P * S * d).dot(q))
                             .epsilon(1e-10));
  }
}

TEST_CASE("Ericksen stress formula") {
  LiquidCrystalModel m;
  m.K3 = 3.0;
  Eigen::Vector3d d(1, 0, 0);
  Eigen::Matrix3d Gd = random_mat(3, 730);
  LeslieStressEval le = leslie_stress_eval(m, d, Eigen::Matrix3d::Zero(),
                                           Eigen::Vector3d::Zero(), Gd);
  double k = m.k();
  Eigen::Matrix3d ref =
      Gd.transpose() * Gd *
      (Eigen::Matrix3d::Identity() + k * d * d.transpose());
  CHECK((le.TE - ref).norm() <= 1e-13);
}

TEST_CASE("anisotropic matrix norm: primal and dual") {
  double k = 1.0;
  Eigen::Vector3d d(0, 0, 1);
  // A = d@d: shifting by l = 1 kills the spectral part, leaving (d.Ad)/(k+1)
  Eigen::Matrix3d A = d * d.transpose();
  DNormEval e = d_norm(d, k, A);
  CHECK(e.primal == doctest::Approx(std::sqrt(1.0 / (k + 1))).epsilon(1e-6));
  CHECK(e.dual_defined);
  CHECK(e.dual ==
        doctest::Approx(std::sqrt(A.trace() + k * d.dot(A * d))).epsilon(1e-12));

  // identity: inf_l |I - l d@d|_2 = 1 at l = 0..2, and (d.Id)/(k+1) = 1/2
  DNormEval ei = d_norm(d, k, Eigen::Matrix3d::Identity());
  CHECK(ei.primal == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ei.dual == doctest::Approx(std::sqrt(3.0 + k)).epsilon(1e-12));

  // the anchor family I + k d(x)d has unit anisotropic norm for every k
  for (double kk : {0.0, 0.5, 2.0}) {
    Eigen::Matrix3d anchor = Eigen::Matrix3d::Identity() + kk * d * d.transpose();
    CHECK(std::abs(d_norm(d, kk, anchor).primal - 1.0) <= 1e-12);
  }

  // indefinite matrix: dual undefined
  Eigen::Matrix3d N = Eigen::Matrix3d::Zero();
  N(0, 0) = -1.0;
  DNormEval en = d_norm(d, k, N);
  CHECK_FALSE(en.dual_defined);
}

TEST_CASE("spectral norm agrees with Eigen SVD") {
  Eigen::MatrixXd A = random_mat(3, 740);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  CHECK(spectral_norm(A) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-12));
}
