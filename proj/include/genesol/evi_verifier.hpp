#ifndef GENESOL_EVI_VERIFIER_HPP
#define GENESOL_EVI_VERIFIER_HPP

#include <optional>
#include <string>
#include <vector>

#include "genesol/coarse_grain.hpp"
#include "genesol/energy_models.hpp"
#include "genesol/measure_kit.hpp"
#include "genesol/torus_field.hpp"
#include "genesol/wave_integrator.hpp"

namespace genesol {

// ---- test functions ----

struct SpatialMode {
  TorusField field;
  bool divergence_free = false;  // verified for vector modes at build time
  std::string label;
};

// Low-index trigonometric modes per rank plus constants. Vector modes of
// the form f(x_a) e_b with b != a have exactly vanishing discrete
// divergence and are flagged; the flag is checked against the grid
// operator at construction (integral of |div phi|^2 <= 1e-12).
struct TestFunctionBasis {
  std::vector<SpatialMode> scalar_modes;
  std::vector<SpatialMode> vector_modes;
  std::vector<SpatialMode> matrix_modes;

  static TestFunctionBasis trigonometric(const TorusGrid& grid, int max_index = 1);
  std::vector<const SpatialMode*> divergence_free_vector_modes() const;
};

// Piecewise-linear temporal profile given by its node values.
using TimeProfile = std::vector<double>;

// constant-1 profile plus hats centered at <= max_samples evenly spaced nodes
std::vector<TimeProfile> standard_time_profiles(int node_count, int max_samples = 9);

// ---- reports ----

struct ResidualEntry {
  std::string label;
  int s_node = 0;
  int t_node = 0;
  double value = 0.0;  // positive = violation
};

struct ViolationReport {
  std::vector<ResidualEntry> table;
  double max_violation = 0.0;
  ResidualEntry argmax;
  double tolerance = 0.0;

  void finalize();  // recompute max_violation/argmax from the table
};

// ---- elastic energy-variational inequality ----

// One inequality evaluation: boundary bracket, time-derivative and
// transport integrals (trapezoidal in time), and the convexity-weighted
// correction weight_constant * |grad phi|_L2 * (calE - E). phi/Psi may be
// null (zero test function). Positive return = violation.
double evi_entry_elastic(const ConvexElasticModel& model, const Trajectory& traj,
                         const TorusField* phi, const TorusField* Psi,
                         const TimeProfile& theta, int s, int t,
                         double weight_constant);

// The part of the inequality linear in the test functions (no E terms, no
// weight): the alpha-scaling limit of evi_entry_elastic on conservative data.
double weak_entry_elastic(const ConvexElasticModel& model, const Trajectory& traj,
                          const TorusField* phi, const TorusField* Psi,
                          const TimeProfile& theta, int s, int t);

ViolationReport evi_residual_elastic(const ConvexElasticModel& model,
                                     const Trajectory& traj,
                                     const TestFunctionBasis& basis,
                                     double weight_constant, int max_time_samples = 9);

// ---- polyconvex energy-variational inequality (3D) ----

struct PolyconvexTrajectory {
  std::vector<TorusField> v;  // vector: time derivative of the deformation
  std::vector<TorusField> F;  // matrix: deformation gradient
  std::vector<TorusField> Z;  // matrix: cofactor field
  std::vector<TorusField> w;  // scalar: determinant field
  std::vector<double> E;
  double dt = 0.0;

  // derive Z and w cellwise from F and set E to the physical energy
  static PolyconvexTrajectory from_states(const PolyconvexModel& model,
                                          const std::vector<TorusField>& v,
                                          const std::vector<TorusField>& F, double dt);
};

double polyconvex_energy(const PolyconvexModel& model, const TorusField& v,
                         const TorusField& F);

double evi_entry_polyconvex(const PolyconvexModel& model,
                            const PolyconvexTrajectory& traj, const TorusField* phi,
                            const TorusField* Psi, const TorusField* Xi,
                            const TorusField* phi_s, const TimeProfile& theta, int s,
                            int t, double weight_constant);

ViolationReport evi_residual_polyconvex(const PolyconvexModel& model,
                                        const PolyconvexTrajectory& traj,
                                        const TestFunctionBasis& basis,
                                        double weight_constant,
                                        int max_time_samples = 9);

// ---- liquid crystal energy-variational inequality ----

struct LiquidCrystalData {
  std::vector<TorusField> v;  // divergence-free velocity
  std::vector<TorusField> d;  // unit director
  std::vector<TorusField> q;  // director forcing (assemble_director_forcing)
  std::vector<double> E;
  double dt = 0.0;
};

// q = k (grad d)^T (grad d) d - div(grad d (I + k d (x) d)) with grid operators
TorusField assemble_director_forcing(const LiquidCrystalModel& model,
                                     const TorusField& d);

double liquid_crystal_energy(const LiquidCrystalModel& model, const TorusField& v,
                             const TorusField& d);

// phi must be a divergence-free mode; zero test functions reduce the
// inequality to E(t) - E(s) + integrated dissipation <= 0.
double evi_entry_liquid_crystal(const LiquidCrystalModel& model,
                                const LiquidCrystalData& data, const TorusField* phi,
                                const TorusField* zeta, const TorusField* psi,
                                const TimeProfile& theta, int s, int t);

ViolationReport evi_residual_liquid_crystal(const LiquidCrystalModel& model,
                                            const LiquidCrystalData& data,
                                            const TestFunctionBasis& basis,
                                            int max_time_samples = 9);

// ---- measure-valued residuals ----

// Residuals of the two weak measure-valued equations (absolute value) and
// the theta-weighted energy inequality (positive part) on per-node coarse
// data. Profiles vanish at the last node (compact support in time).
ViolationReport mvs_residual_elastic(const ConvexElasticModel& model,
                                     const std::vector<CoarseData>& nodes, double dt,
                                     const TestFunctionBasis& basis,
                                     int max_time_samples = 9);

// ---- varifold compatibility ----

// max over trigonometric probe fields psi of
// | sum_atoms psi(x) mass direction - sum_interface psi(x) mass normal |
double compatibility_check(const TorusGrid& grid, const Varifold& varifold,
                           const std::optional<InterfaceData>& interface,
                           int probe_count = 8);

// ---- relative energy ----

struct RelativeEnergyReport {
  std::vector<double> values;  // Bregman-type distance per node
  double growth_rate = 0.0;    // least-squares exponential fit coefficient
};

RelativeEnergyReport relative_energy(const ConvexElasticModel& model,
                                     const Trajectory& traj,
                                     const Trajectory& reference);

}  // namespace genesol

#endif
