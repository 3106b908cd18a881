#include "genesol/coarse_grain.hpp"

#include <cmath>
#include <stdexcept>

namespace genesol {

void YoungMeasureField::validate() const {
  if (atoms.size() != grid.cell_count() || gamma.size() != grid.cell_count())
    throw std::invalid_argument("YoungMeasureField: per-cell sizes mismatch grid");
  for (std::size_t c = 0; c < atoms.size(); ++c) {
    double w = 0.0;
    for (const auto& a : atoms[c]) {
      if (!(a.weight > 0.0))
        throw std::invalid_argument("YoungMeasureField: weights must be positive");
      w += a.weight;
    }
    if (std::abs(w - 1.0) > 1e-12)
      throw std::invalid_argument("YoungMeasureField: weights must sum to 1");
    if (gamma[c] < 0.0)
      throw std::invalid_argument("YoungMeasureField: gamma must be >= 0");
  }
}

void YoungMeasureField::merge_atoms(double tol) {
  for (auto& cell : atoms) {
    std::vector<MeasureAtom> merged;
    for (const auto& a : cell) {
      bool absorbed = false;
      for (auto& m : merged) {
        if ((m.s - a.s).norm() <= tol && (m.S - a.S).norm() <= tol) {
          m.weight += a.weight;
          absorbed = true;
          break;
        }
      }
      if (!absorbed) merged.push_back(a);
    }
    cell = std::move(merged);
  }
}

CoarseData coarsen(const ConvexElasticModel& model, const ElasticState& fine,
                   int block) {
  fine.validate();
  if (block < 1) throw std::invalid_argument("coarsen: block >= 1");
  const TorusGrid& fg = fine.v.grid();
  for (int a = 0; a < fg.dim; ++a)
    if (fg.extent[a] % block != 0)
      throw std::invalid_argument("coarsen: block must divide every extent");

  TorusGrid cg = fg;
  for (int a = 0; a < fg.dim; ++a) {
    cg.extent[a] = fg.extent[a] / block;
    cg.spacing[a] = fg.spacing[a] * block;
  }

  const int d = fg.dim;
  int per_block = 1;
  for (int a = 0; a < d; ++a) per_block *= block;
  const double w = 1.0 / per_block;

  CoarseData out;
  out.mean.v = TorusField(cg, Rank::Vector);
  out.mean.F = TorusField(cg, Rank::Matrix);
  out.mean.t = fine.t;
  out.measure.grid = cg;
  out.measure.atoms.resize(cg.cell_count());
  out.measure.gamma.assign(cg.cell_count(), 0.0);
  out.defect = TorusField(cg, Rank::Matrix);
  out.surplus.assign(cg.cell_count(), 0.0);

  for (std::size_t cc = 0; cc < cg.cell_count(); ++cc) {
    auto base = cg.coords(cc);
    Eigen::VectorXd vbar = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd Fbar = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd DGbar = Eigen::MatrixXd::Zero(d, d);
    double eta_bar = 0.0;
    auto& cell_atoms = out.measure.atoms[cc];
    cell_atoms.reserve(per_block);
    // enumerate the fine cells of this block
    for (int off = 0; off < per_block; ++off) {
      int rem = off, fi[3] = {0, 0, 0};
      for (int a = 0; a < d; ++a) {
        fi[a] = base[a] * block + rem % block;
        rem /= block;
      }
      std::size_t fc = fg.index(fi[0], fi[1], fi[2]);
      MeasureAtom atom;
      atom.weight = w;
      atom.s = fine.v.vector_at(fc);
      atom.S = fine.F.matrix_at(fc);
      vbar += w * atom.s;
      Fbar += w * atom.S;
      DGbar += w * model.DG(atom.S);
      eta_bar += w * (0.5 * atom.s.squaredNorm() + model.G(atom.S));
      cell_atoms.push_back(std::move(atom));
    }
    out.mean.v.set_vector(cc, vbar);
    out.mean.F.set_matrix(cc, Fbar);
    out.defect.set_matrix(cc, DGbar - model.DG(Fbar));
    out.surplus[cc] = eta_bar - (0.5 * vbar.squaredNorm() + model.G(Fbar));
  }
  return out;
}

std::vector<double> moment_scalar(
    const YoungMeasureField& measure,
    const std::function<double(const Eigen::VectorXd&, const Eigen::MatrixXd&)>& f) {
  std::vector<double> out(measure.atoms.size(), 0.0);
  for (std::size_t c = 0; c < measure.atoms.size(); ++c)
    for (const auto& a : measure.atoms[c]) out[c] += a.weight * f(a.s, a.S);
  return out;
}

TorusField moment_vector(
    const YoungMeasureField& measure,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::MatrixXd&)>& f) {
  TorusField out(measure.grid, Rank::Vector);
  for (std::size_t c = 0; c < measure.atoms.size(); ++c) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(measure.grid.dim);
    for (const auto& a : measure.atoms[c]) acc += a.weight * f(a.s, a.S);
    out.set_vector(c, acc);
  }
  return out;
}

TorusField moment_matrix(
    const YoungMeasureField& measure,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::MatrixXd&)>& f) {
  TorusField out(measure.grid, Rank::Matrix);
  for (std::size_t c = 0; c < measure.atoms.size(); ++c) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(measure.grid.dim, measure.grid.dim);
    for (const auto& a : measure.atoms[c]) acc += a.weight * f(a.s, a.S);
    out.set_matrix(c, acc);
  }
  return out;
}

}  // namespace genesol
