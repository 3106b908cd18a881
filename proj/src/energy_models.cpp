#include "genesol/energy_models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace genesol {

namespace {

constexpr int kLevi[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};

Eigen::VectorXd vec(const Eigen::MatrixXd& F) {
  const int d = static_cast<int>(F.rows());
  Eigen::VectorXd v(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v[i * d + j] = F(i, j);
  return v;
}

}  // namespace

ConvexElasticModel quadratic_elastic_model(int dim) {
  ConvexElasticModel m;
  m.dim = dim;
  m.id = "quadratic";
  m.G = [](const Eigen::MatrixXd& F) { return 0.5 * F.squaredNorm(); };
  m.DG = [](const Eigen::MatrixXd& F) { return F; };
  m.D2G = [dim](const Eigen::MatrixXd&) {
    return Eigen::MatrixXd::Identity(dim * dim, dim * dim).eval();
  };
  m.m = 1.0;
  m.M = 1.0;
  return m;
}

ConvexElasticModel perturbed_quadratic_model(int dim, double delta) {
  if (delta < 0.0) throw std::invalid_argument("perturbed_quadratic_model: delta >= 0");
  ConvexElasticModel m;
  m.dim = dim;
  m.id = "perturbed";
  m.G = [delta](const Eigen::MatrixXd& F) {
    return 0.5 * F.squaredNorm() + delta * (std::sqrt(1.0 + F.squaredNorm()) - 1.0);
  };
  m.DG = [delta](const Eigen::MatrixXd& F) {
    double s = std::sqrt(1.0 + F.squaredNorm());
    return (F * (1.0 + delta / s)).eval();
  };
  m.D2G = [delta, dim](const Eigen::MatrixXd& F) {
    double s = std::sqrt(1.0 + F.squaredNorm());
    Eigen::VectorXd f = vec(F);
    Eigen::MatrixXd H =
        Eigen::MatrixXd::Identity(dim * dim, dim * dim) * (1.0 + delta / s);
    H -= (delta / (s * s * s)) * (f * f.transpose());
    return H;
  };
  m.m = 1.0;
  m.M = 1.0 + delta;
  return m;
}

ConvexElasticModel elastic_model_by_id(const std::string& id, int dim) {
  if (id == "quadratic") return quadratic_elastic_model(dim);
  if (id == "perturbed") return perturbed_quadratic_model(dim);
  throw std::invalid_argument("unknown elastic model id: " + id);
}

ConvexEval convex_eval(const ConvexElasticModel& model, const Eigen::MatrixXd& F) {
  if (!F.allFinite()) throw std::invalid_argument("convex_eval: non-finite F");
  return ConvexEval{model.G(F), model.DG(F), model.D2G(F)};
}

ConvexityConstants estimate_convexity_constants(const ConvexElasticModel& model,
                                                int sample_count, double radius,
                                                std::uint64_t seed) {
  if (sample_count < 1)
    throw std::invalid_argument("estimate_convexity_constants: sample_count >= 1");
  if (radius <= 0.0)
    throw std::invalid_argument("estimate_convexity_constants: radius > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = model.dim;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int s = 0; s < sample_count; ++s) {
    Eigen::MatrixXd F(d, d);
    for (int i = 0; i < d * d; ++i) F(i / d, i % d) = gauss(rng);
    double n = F.norm();
    if (n > 0) F *= radius * std::pow(unif(rng), 1.0 / (d * d)) / n;
    Eigen::MatrixXd H = model.D2G(F);
    if (!H.allFinite())
      throw std::runtime_error("estimate_convexity_constants: non-finite Hessian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return ConvexityConstants{lo, hi};
}

Kinematics polyconvex_kinematics(const Eigen::Matrix3d& F) {
  Kinematics out;
  out.cof.setZero();
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int b = 0; b < 3; ++b)
            for (int g = 0; g < 3; ++g)
              if (kLevi[i][j][k] != 0 && kLevi[a][b][g] != 0)
                s += 0.5 * kLevi[i][j][k] * kLevi[a][b][g] * F(j, b) * F(k, g);
      out.cof(i, a) = s;
    }
  out.det = (out.cof.array() * F.array()).sum() / 3.0;
  out.ddet = out.cof;
  out.dcof.setZero();
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int j = 0; j < 3; ++j)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k)
            for (int g = 0; g < 3; ++g)
              if (kLevi[i][j][k] != 0 && kLevi[a][b][g] != 0)
                s += kLevi[i][j][k] * kLevi[a][b][g] * F(k, g);
          out.dcof(3 * i + a, 3 * j + b) = s;
        }
  return out;
}

PolyconvexModel polyconvex_example_model(double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0)
    throw std::invalid_argument("polyconvex_example_model: alpha, beta >= 0");
  PolyconvexModel m;
  m.id = "example";
  m.G = [alpha, beta](const Eigen::Matrix3d& F, const Eigen::Matrix3d& Z, double w) {
    double f2 = F.squaredNorm(), z2 = Z.squaredNorm();
    return alpha * f2 * f2 * f2 + f2 + beta * std::pow(z2, 1.5) + z2 + w * w;
  };
  m.dF = [alpha](const Eigen::Matrix3d& F, const Eigen::Matrix3d&, double) {
    double f2 = F.squaredNorm();
    return (6.0 * alpha * f2 * f2 * F + 2.0 * F).eval();
  };
  m.dZ = [beta](const Eigen::Matrix3d&, const Eigen::Matrix3d& Z, double) {
    double zn = Z.norm();
    return (3.0 * beta * zn * Z + 2.0 * Z).eval();
  };
  m.dw = [](const Eigen::Matrix3d&, const Eigen::Matrix3d&, double w) { return 2.0 * w; };
  m.p = alpha > 0.0 ? 6.0 : 2.0;
  m.q = beta > 0.0 ? 3.0 : 2.0;
  m.r = 2.0;
  return m;
}

double sigma_eval(const PolyconvexModel& model, const Eigen::Matrix3d& F) {
  Kinematics k = polyconvex_kinematics(F);
  return model.G(F, k.cof, k.det);
}

Eigen::Matrix3d zeta_eval(const PolyconvexModel& model, const Eigen::Matrix3d& F) {
  Kinematics kin = polyconvex_kinematics(F);
  Eigen::Matrix3d gF = model.dF(F, kin.cof, kin.det);
  Eigen::Matrix3d gZ = model.dZ(F, kin.cof, kin.det);
  double gw = model.dw(F, kin.cof, kin.det);
  if (!gF.allFinite() || !gZ.allFinite() || !std::isfinite(gw))
    throw std::runtime_error("zeta_eval: non-finite partials");
  Eigen::Matrix3d zeta = gF + gw * kin.cof;
  // explicit Levi-Civita contraction of the Z partial against F
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int b = 0; b < 3; ++b)
            for (int g = 0; g < 3; ++g)
              if (kLevi[i][j][k] != 0 && kLevi[a][b][g] != 0)
                s += gZ(k, g) * kLevi[i][j][k] * kLevi[a][b][g] * F(j, b);
      zeta(i, a) += s;
    }
  return zeta;
}

double strict_convexity_margin(const PolyconvexModel& model, int segments,
                               double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&]() {
    Eigen::VectorXd x(19);
    for (int i = 0; i < 19; ++i) x[i] = gauss(rng);
    x *= radius / x.norm();
    return x;
  };
  auto eval = [&](const Eigen::VectorXd& x) {
    Eigen::Matrix3d F, Z;
    for (int i = 0; i < 9; ++i) F(i / 3, i % 3) = x[i];
    for (int i = 0; i < 9; ++i) Z(i / 3, i % 3) = x[9 + i];
    return model.G(F, Z, x[18]);
  };
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < segments; ++s) {
    Eigen::VectorXd a = draw(), b = draw();
    double gap = 0.5 * (eval(a) + eval(b)) - eval(0.5 * (a + b));
    double scale = (a - b).squaredNorm() / 8.0;
    if (scale > 1e-14) worst = std::min(worst, gap / scale);
  }
  return worst;
}

void LiquidCrystalModel::validate() const {
  if (!(K1 > 0.0) || !(K1 < K3))
    throw std::invalid_argument("LiquidCrystalModel: need 0 < K1 < K3");
  if (!(mu4 > 0.0) || mu5 + mu6 - lambda * lambda < 0.0 || mu1 + lambda * lambda < 0.0)
    throw std::invalid_argument("LiquidCrystalModel: non-dissipative Leslie coefficients");
}

Eigen::Vector3d require_unit(const Eigen::Vector3d& d) {
  double n = d.norm();
  if (std::abs(n - 1.0) > 1e-8)
    throw std::domain_error("director must be unit length within 1e-8");
  return d / n;
}

OseenFrankEval oseen_frank_eval(const LiquidCrystalModel& model,
                                const Eigen::Vector3d& d_in, const Eigen::Matrix3d& Gd) {
  Eigen::Vector3d d = require_unit(d_in);
  const double k = model.k();
  const double K1 = model.K1, K2 = model.K1, K3 = model.K3;

  double div_d = Gd.trace();
  Eigen::Vector3d curl_d;
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l)
        if (kLevi[i][j][l] != 0) s += kLevi[i][j][l] * Gd(l, j);
    curl_d[i] = s;
  }
  Eigen::Vector3d dxc = d.cross(curl_d);
  // gauge term tr((grad d)^2) - (div d)^2: a null Lagrangian, zero on the
  // torus after integration for genuine gradient fields
  double gauge = (Gd * Gd).trace() - div_d * div_d;

  OseenFrankEval out;
  out.full = 0.5 * K1 * div_d * div_d + 0.5 * K2 * std::pow(d.dot(curl_d), 2) +
             0.5 * K3 * dxc.squaredNorm() + 0.5 * K1 * gauge;
  Eigen::Vector3d conv = Gd * d;  // (d . grad) d
  out.reduced = 0.5 * K1 * Gd.squaredNorm() + 0.5 * k * conv.squaredNorm();
  out.value = out.reduced;
  out.d_grad = K1 * Gd + k * conv * d.transpose();
  out.d_dir = k * (Gd.transpose() * Gd) * d;
  return out;
}

LeslieStressEval leslie_stress_eval(const LiquidCrystalModel& model,
                                    const Eigen::Vector3d& d_in, const Eigen::Matrix3d& Dv,
                                    const Eigen::Vector3d& q, const Eigen::Matrix3d& Gd) {
  Eigen::Vector3d d = require_unit(d_in);
  const double k = model.k();
  const double la = model.lambda;
  Eigen::Matrix3d S = 0.5 * (Dv + Dv.transpose());
  Eigen::Matrix3d dd = d * d.transpose();

  LeslieStressEval out;
  out.TE = (Gd.transpose() * Gd) * (Eigen::Matrix3d::Identity() + k * dd);

  Eigen::Vector3d Sd = S * d;
  Eigen::Matrix3d dSd = d * Sd.transpose();
  Eigen::Vector3d qp = (Eigen::Matrix3d::Identity() - dd) * q;
  Eigen::Matrix3d dq = d * qp.transpose();
  Eigen::Matrix3d dqf = d * q.transpose();
  out.TL = (model.mu1 + la * la) * d.dot(Sd) * dd + model.mu4 * S +
           (model.mu5 + model.mu6 - la * la) * 0.5 * (dSd + dSd.transpose()) -
           la * 0.5 * (dq + dq.transpose()) - 0.5 * (dqf - dqf.transpose());
  return out;
}

double spectral_norm(const Eigen::MatrixXd& A) {
  return A.jacobiSvd().singularValues()[0];
}

DNormEval d_norm(const Eigen::Vector3d& d_in, double k, const Eigen::Matrix3d& A) {
  if (k < 0.0) throw std::invalid_argument("d_norm: k >= 0");
  Eigen::Vector3d d = require_unit(d_in);
  Eigen::Matrix3d dd = d * d.transpose();

  auto h = [&](double lam) { return spectral_norm(A - lam * dd); };
  // golden-section on the convex scalar objective
  double bound = 2.0 * spectral_norm(A) + 1.0;
  double lo = -bound, hi = bound;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  while (hi - lo > 1e-12 * (1.0 + bound)) {
    if (f1 > f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo); f2 = h(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo); f1 = h(x1);
    }
  }
  double inf_val = h(0.5 * (lo + hi));

  DNormEval out;
  out.primal = std::sqrt(std::max(inf_val * inf_val, d.dot(A * d) / (k + 1.0)));

  Eigen::Matrix3d sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym);
  bool psd = (A - A.transpose()).norm() <= 1e-12 * (1.0 + A.norm()) &&
             es.eigenvalues().minCoeff() >= -1e-12 * (1.0 + A.norm());
  out.dual_defined = psd;
  out.dual = psd ? std::sqrt(std::max(0.0, A.trace() + k * d.dot(A * d))) : 0.0;
  return out;
}

}  // namespace genesol
