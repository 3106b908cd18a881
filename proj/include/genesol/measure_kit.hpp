#ifndef GENESOL_MEASURE_KIT_HPP
#define GENESOL_MEASURE_KIT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "genesol/torus_field.hpp"

namespace genesol {

// Nonnegative least squares (Lawson-Hanson active set) for the small dense
// moment systems assembled below.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol = 1e-12, int max_iter = 300);

// ---- defect fields ----

enum class DefectNorm { L2, LpDual, TraceD };

// Symmetric PSD matrix field R with the norm it is to be measured in.
// LpDual carries the exponent p; TraceD carries a director field and the
// anisotropy constant k.
struct DefectField {
  TorusField R;
  DefectNorm norm_kind = DefectNorm::L2;
  double p = 2.0;
  TorusField d_field;
  double k = 0.0;

  void validate(double sym_tol = 1e-12, double eig_tol = 1e-10) const;
};

struct RecoveredDefect {
  DefectField field;        // PSD-projected result
  TorusField raw;           // least-norm solution before projection
  double projection_distance = 0.0;  // L2 distance moved by the projection
};

// Least-norm matrix field R with <-R, grad psi_j> = residual_j for every
// basis gradient, solved in the L2 inner product (the Hilbert surrogate for
// every norm_kind; the tag is carried as metadata). Symmetrization and
// cellwise PSD projection follow, with the distance reported.
RecoveredDefect recover_defect(const std::vector<double>& residuals,
                               const std::vector<TorusField>& basis_gradients,
                               DefectNorm norm_kind = DefectNorm::L2);

// ---- varifolds ----

struct VarifoldAtom {
  std::size_t cell;
  Eigen::VectorXd direction;  // unit
  double mass;                // >= 0
};

struct Varifold {
  std::vector<VarifoldAtom> atoms;
  double total_mass() const;
  void validate() const;
};

struct InterfaceAtom {
  std::size_t cell;
  Eigen::VectorXd normal;  // unit
  double mass;             // >= 0
};

// Two-valued indicator with per-interface-cell normal/mass proxies
// (grad chi / |grad chi| and |grad chi|).
struct InterfaceData {
  TorusField chi;
  std::vector<InterfaceAtom> atoms;

  static InterfaceData from_indicator(const TorusField& chi, double tol = 1e-12);
  void validate() const;
};

// Per cell, eigendecompose R = sum lambda_i e_i (x) e_i and emit the pair of
// atoms (cell, +-e_i, lambda_i / 2); interface atoms are appended verbatim.
// Total mass equals the integral-free sum of tr R plus interface mass.
// Eigenvalues below -1e-10 raise a domain error.
Varifold build_varifold(const DefectField& defect,
                        const std::optional<InterfaceData>& interface = std::nullopt);

// ---- moment-matched atomic measures ----

struct MatchedMeasure {
  std::vector<std::pair<double, Eigen::VectorXd>> atoms;  // (weight, state)
  double gamma = 0.0;
  double mean_residual = 0.0;
  double g_residual = 0.0;
  double energy_residual = 0.0;
};

struct MatchInfeasible : std::runtime_error {
  double best_residual;
  MatchInfeasible(const std::string& what, double r)
      : std::runtime_error(what), best_residual(r) {}
};

// Atomic probability measure nu with
//   <nu, id> = mean                         (<= 1e-10)
//   <nu, g>  = g_target                     (<= 1e-10)
//   <nu, eta> + gamma = eta(mean) + |g_target - g(mean)| + surplus  (<= 1e-8)
// staged as: Dirac shortcut, symmetric two-atom root solve, then nonnegative
// least squares over a bounded candidate set (mean, a g-preimage of the
// target found by Gauss-Newton, and radial scalings of both).
MatchedMeasure match_moments(
    const std::function<double(const Eigen::VectorXd&)>& eta,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
    const Eigen::VectorXd& mean, const Eigen::VectorXd& g_target, double surplus,
    int atom_budget);

// ---- Gaussian second-moment construction ----

// Equally weighted atoms S_j = A + d^{-1/2} Xi_j B^{1/2} (d = 3) with Xi_j
// standard normal from a seeded generator, so E[S^T S] = A^T A + B exactly.
std::vector<Eigen::Matrix3d> gaussian_measure(const Eigen::Matrix3d& A,
                                              const Eigen::Matrix3d& B,
                                              int sample_count,
                                              std::uint64_t seed = 42);

}  // namespace genesol

#endif
