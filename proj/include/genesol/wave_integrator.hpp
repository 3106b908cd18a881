#ifndef GENESOL_WAVE_INTEGRATOR_HPP
#define GENESOL_WAVE_INTEGRATOR_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "genesol/energy_models.hpp"
#include "genesol/torus_field.hpp"

namespace genesol {

// First-order elastic system v_t = div DG(F), F_t = grad v on the torus.
struct ElasticState {
  TorusField v;  // vector field
  TorusField F;  // matrix field
  double t = 0.0;

  void validate() const;
};

struct Trajectory {
  std::vector<ElasticState> states;
  std::vector<double> E;            // auxiliary energy, non-increasing
  std::vector<double> dissipation;  // cumulative injected dissipation
  double dt = 0.0;
  std::vector<std::string> warnings;
};

struct NewtonFailure : std::runtime_error {
  double last_residual;
  NewtonFailure(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
};

// Discrete physical energy: integral of 1/2 |v|^2 + G(F) (midpoint quadrature).
double elastic_energy(const ConvexElasticModel& model, const ElasticState& s);

// Largest dt for which the approximate Newton system stays SPD: 2 h / sqrt(M).
double stable_dt_cap(const ConvexElasticModel& model, const TorusGrid& grid);

// One implicit step of the discrete-gradient midpoint scheme
//   (v+ - v)/dt = div DbarG(F, F+) + viscosity * lap(v_mid)
//   (F+ - F)/dt = grad v_mid,          v_mid = (v + v+)/2.
// Inviscid steps conserve the discrete energy to solver tolerance; viscous
// steps dissipate viscosity*dt*|grad v_mid|^2 exactly, which is written to
// *dissipation_out when provided.
ElasticState step(const ConvexElasticModel& model, const ElasticState& s, double dt,
                  double viscosity, double* dissipation_out = nullptr);

// Repeated step; E[n] = E[0] - cumulative dissipation, so E >= energy holds
// by construction. dt above the stability cap is clamped with a warning.
Trajectory simulate(const ConvexElasticModel& model, const ElasticState& initial,
                    double dt, int steps, double viscosity);

// Exact standing-wave solution of the linear system (G = 1/2 |F|^2) in 1D:
//   v(x,t) = c cos(k t) sin(k x),  F(x,t) = c sin(k t) cos(k x),  k = 2 pi / L.
ElasticState manufactured_linear_solution(const TorusGrid& grid, double t,
                                          double amplitude = 1.0);

// F alternates blockwise along axis 0 between +amplitude*ones and
// -amplitude*ones with the given wavelength (in cells, even, dividing the
// extent); v = 0. Coarse-graining over one wavelength averages to zero.
ElasticState oscillatory_initial_data(const TorusGrid& grid, double amplitude,
                                      int wavelength_cells);

}  // namespace genesol

#endif
