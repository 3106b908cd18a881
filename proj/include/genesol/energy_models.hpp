#ifndef GENESOL_ENERGY_MODELS_HPP
#define GENESOL_ENERGY_MODELS_HPP

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace genesol {

// Convex elastic stored energy G on d x d matrices with Hessian eigenvalue
// bounds 0 < m <= M. DG is the Piola stress, D2G the Hessian in the
// vec(d*d) x vec(d*d) pairing (row-major vec).
struct ConvexElasticModel {
  int dim = 1;
  std::string id;
  std::function<double(const Eigen::MatrixXd&)> G;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> DG;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> D2G;
  double m = 1.0;
  double M = 1.0;
};

// G(F) = 1/2 |F|^2, the linear wave model.
ConvexElasticModel quadratic_elastic_model(int dim);
// G(F) = 1/2 |F|^2 + delta (sqrt(1 + |F|^2) - 1): uniformly convex,
// bounded D3G, Hessian eigenvalues in [1, 1 + delta].
ConvexElasticModel perturbed_quadratic_model(int dim, double delta = 0.1);
ConvexElasticModel elastic_model_by_id(const std::string& id, int dim);

struct ConvexEval {
  double value;
  Eigen::MatrixXd stress;    // DG(F)
  Eigen::MatrixXd hessian;   // D2G(F), d^2 x d^2
};
ConvexEval convex_eval(const ConvexElasticModel& model, const Eigen::MatrixXd& F);

// Min/max Hessian eigenvalue over seeded random samples in a Frobenius ball.
struct ConvexityConstants {
  double m_hat;
  double M_hat;
};
ConvexityConstants estimate_convexity_constants(const ConvexElasticModel& model,
                                                int sample_count, double radius,
                                                std::uint64_t seed = 7);

// ---- polyconvex kinematics (3x3) ----

struct Kinematics {
  Eigen::Matrix3d cof;
  double det;
  Eigen::Matrix3d ddet;              // = cof F
  // dcof(i,a; j,b) = sum_kg eps_ijk eps_abg F(k,g); stored 9x9, row index
  // 3*i+a, column index 3*j+b.
  Eigen::Matrix<double, 9, 9> dcof;
};
Kinematics polyconvex_kinematics(const Eigen::Matrix3d& F);

// Stored energy G(F, Z, w) of the enlarged polyconvex system.
struct PolyconvexModel {
  std::string id;
  std::function<double(const Eigen::Matrix3d&, const Eigen::Matrix3d&, double)> G;
  std::function<Eigen::Matrix3d(const Eigen::Matrix3d&, const Eigen::Matrix3d&, double)> dF;
  std::function<Eigen::Matrix3d(const Eigen::Matrix3d&, const Eigen::Matrix3d&, double)> dZ;
  std::function<double(const Eigen::Matrix3d&, const Eigen::Matrix3d&, double)> dw;
  double p = 2, q = 2, r = 2;  // growth exponents
  double weight_c = 1.0;       // EVI weight constant c
};

// alpha |F|^6 + |F|^2 + beta |Z|^3 + |Z|^2 + w^2 with analytic partials.
PolyconvexModel polyconvex_example_model(double alpha, double beta);

// zeta(F) = dG/dF + dG/dZ-contraction + cof(F) dG/dw, all partials
// evaluated at (F, cof F, det F); equals the gradient of
// sigma(F) = G(F, cof F, det F).
Eigen::Matrix3d zeta_eval(const PolyconvexModel& model, const Eigen::Matrix3d& F);
double sigma_eval(const PolyconvexModel& model, const Eigen::Matrix3d& F);

// Minimum of (chord midpoint - value midpoint) / (|delta|^2 / 8) over seeded
// random segments; positive means the sampled strict-convexity margin holds.
double strict_convexity_margin(const PolyconvexModel& model, int segments,
                               double radius, std::uint64_t seed = 11);

// ---- liquid crystal (Ericksen-Leslie with one-constant-split Oseen-Frank) ----

struct LiquidCrystalModel {
  double K1 = 1.0;
  double K3 = 2.0;
  double lambda = 0.0;
  double mu1 = 1.0, mu4 = 1.0, mu5 = 1.0, mu6 = 1.0;

  double k() const { return K3 - K1; }
  void validate() const;  // throws on non-dissipative coefficients
};

struct OseenFrankEval {
  double value;             // reduced form, the model energy density
  Eigen::Matrix3d d_grad;   // dF/d(grad d)
  Eigen::Vector3d d_dir;    // dF/dd
  double full;              // four-constant form incl. the gauge term
  double reduced;
};

// Pointwise Oseen-Frank density for director d (unit within 1e-8) and
// director gradient Gd with Gd(i,j) = d d_i / d x_j.
//
// `full` carries the K4-type null-Lagrangian term with weight K1: on the
// torus it integrates to zero for genuine gradient fields, and including it
// makes the full/reduced identity exact pointwise whenever Gd^T d = 0.
OseenFrankEval oseen_frank_eval(const LiquidCrystalModel& model,
                                const Eigen::Vector3d& d, const Eigen::Matrix3d& Gd);

struct LeslieStressEval {
  Eigen::Matrix3d TE;
  Eigen::Matrix3d TL;
};

// Ericksen stress from Gd, Leslie stress from the symmetric/skew velocity
// gradient parts and the director forcing q.
LeslieStressEval leslie_stress_eval(const LiquidCrystalModel& model,
                                    const Eigen::Vector3d& d, const Eigen::Matrix3d& Dv,
                                    const Eigen::Vector3d& q,
                                    const Eigen::Matrix3d& Gd = Eigen::Matrix3d::Zero());

struct DNormEval {
  double primal;
  double dual;        // defined for symmetric PSD A only
  bool dual_defined;
};

// |A|_d^2 = max{ inf_l |A - l d@d|_2^2, (d . A d)/(k+1) }; the conjugate
// norm |A|_d*^2 = tr A + k d . A d is flagged undefined off the PSD cone.
DNormEval d_norm(const Eigen::Vector3d& d, double k, const Eigen::Matrix3d& A);

// spectral norm (largest singular value) of a small matrix
double spectral_norm(const Eigen::MatrixXd& A);

// renormalizes d when |d| is within 1e-8 of 1, throws otherwise
Eigen::Vector3d require_unit(const Eigen::Vector3d& d);

}  // namespace genesol

#endif
