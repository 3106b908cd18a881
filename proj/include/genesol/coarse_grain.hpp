#ifndef GENESOL_COARSE_GRAIN_HPP
#define GENESOL_COARSE_GRAIN_HPP

#include <functional>
#include <vector>

#include "genesol/energy_models.hpp"
#include "genesol/torus_field.hpp"
#include "genesol/wave_integrator.hpp"

namespace genesol {

// One atom of a per-cell probability measure on (velocity, gradient) states.
struct MeasureAtom {
  double weight;
  Eigen::VectorXd s;  // velocity value
  Eigen::MatrixXd S;  // gradient value
};

// Per-cell atomic probability measure with an optional singular mass gamma.
// Weights sum to 1 per cell; gamma >= 0 (always 0 for empirical measures
// built from bounded fine fields, but carried so downstream constructions
// share the type).
struct YoungMeasureField {
  TorusGrid grid;
  std::vector<std::vector<MeasureAtom>> atoms;  // one list per cell
  std::vector<double> gamma;                    // one per cell

  void validate() const;  // weight normalization, gamma >= 0
  // Merge atoms whose states coincide within tol (file-size control).
  void merge_atoms(double tol = 1e-10);
};

struct CoarseData {
  ElasticState mean;          // blockwise averages on the coarse grid
  YoungMeasureField measure;  // empirical measure, one atom per fine cell
  TorusField defect;          // R = <nu, DG(S)> - DG(Fbar), matrix field
  std::vector<double> surplus;  // <nu, eta> - eta(vbar, Fbar) per cell, >= 0
};

// Blockwise coarse-graining of a fine state. block must divide every extent.
CoarseData coarsen(const ConvexElasticModel& model, const ElasticState& fine,
                   int block);

// Per-cell pairing sum_i weight_i f(atom_i).
std::vector<double> moment_scalar(
    const YoungMeasureField& measure,
    const std::function<double(const Eigen::VectorXd&, const Eigen::MatrixXd&)>& f);
TorusField moment_vector(
    const YoungMeasureField& measure,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::MatrixXd&)>& f);
TorusField moment_matrix(
    const YoungMeasureField& measure,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::MatrixXd&)>& f);

}  // namespace genesol

#endif
