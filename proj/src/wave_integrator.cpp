#include "genesol/wave_integrator.hpp"

#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace genesol {

namespace {

// Gonzalez midpoint discrete gradient of G along F -> Fp, per cell.
TorusField discrete_gradient(const ConvexElasticModel& model, const TorusField& F,
                             const TorusField& Fp) {
  TorusField out(F.grid(), Rank::Matrix);
  const std::size_t n = F.cells();
  for (std::size_t c = 0; c < n; ++c) {
    Eigen::MatrixXd a = F.matrix_at(c), b = Fp.matrix_at(c);
    Eigen::MatrixXd mid = 0.5 * (a + b);
    Eigen::MatrixXd dg = model.DG(mid);
    Eigen::MatrixXd delta = b - a;
    double d2 = delta.squaredNorm();
    if (d2 > 1e-28) {
      double corr = (model.G(b) - model.G(a) - (dg.array() * delta.array()).sum()) / d2;
      dg += corr * delta;
    }
    out.set_matrix(c, dg);
  }
  return out;
}

// Hessian-weighted gradient: cellwise D2G(F_mid) applied to vec(grad w).
TorusField hessian_apply(const ConvexElasticModel& model, const TorusField& Fmid,
                         const TorusField& grad_w) {
  TorusField out(grad_w.grid(), Rank::Matrix);
  const int d = grad_w.grid().dim;
  const std::size_t n = grad_w.cells();
  for (std::size_t c = 0; c < n; ++c) {
    Eigen::MatrixXd H = model.D2G(Fmid.matrix_at(c));
    Eigen::VectorXd g(d * d);
    for (int i = 0; i < d * d; ++i) g[i] = grad_w.at(c, i);
    Eigen::VectorXd hg = H * g;
    for (int i = 0; i < d * d; ++i) out(c, i) = hg[i];
  }
  return out;
}

double field_inner(const TorusField& a, const TorusField& b) { return inner(a, b); }

}  // namespace

void ElasticState::validate() const {
  if (!(v.grid() == F.grid()))
    throw std::invalid_argument("ElasticState: v and F on different grids");
  if (v.rank() != Rank::Vector || F.rank() != Rank::Matrix)
    throw std::invalid_argument("ElasticState: v must be vector, F matrix");
  if (!v.all_finite() || !F.all_finite())
    throw std::invalid_argument("ElasticState: non-finite entries");
}

double elastic_energy(const ConvexElasticModel& model, const ElasticState& s) {
  TorusField density(s.v.grid(), Rank::Scalar);
  const std::size_t n = s.v.cells();
  for (std::size_t c = 0; c < n; ++c) {
    double kin = 0.0;
    for (int i = 0; i < s.v.components(); ++i) kin += s.v.at(c, i) * s.v.at(c, i);
    density(c) = 0.5 * kin + model.G(s.F.matrix_at(c));
  }
  return integrate(density);
}

double stable_dt_cap(const ConvexElasticModel& model, const TorusGrid& grid) {
  double h = grid.spacing[0];
  for (int a = 1; a < grid.dim; ++a) h = std::min(h, grid.spacing[a]);
  return 2.0 * h / std::sqrt(model.M);
}

ElasticState step(const ConvexElasticModel& model, const ElasticState& s, double dt,
                  double viscosity, double* dissipation_out) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt > 0");
  if (viscosity < 0.0) throw std::invalid_argument("step: viscosity >= 0");
  s.validate();

  const TorusField& v = s.v;
  const TorusField& F = s.F;
  TorusField vp = v;  // Newton iterate for v+

  auto substitute_F = [&](const TorusField& vplus) {
    TorusField vmid = 0.5 * (v + vplus);
    return F + dt * gradient(vmid);
  };
  auto residual = [&](const TorusField& vplus) {
    TorusField vmid = 0.5 * (v + vplus);
    TorusField Fp = F + dt * gradient(vmid);
    TorusField r = vplus - v - dt * divergence(discrete_gradient(model, F, Fp));
    if (viscosity > 0.0) r -= (viscosity * dt) * divergence(gradient(vmid));
    return r;
  };

  // iterate to 1e-13 when reachable; 1e-11 is the acceptance threshold
  double res_norm = 0.0;
  double prev_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    TorusField r = residual(vp);
    res_norm = l2_norm(r);
    if (res_norm <= 1e-13 || (res_norm <= 1e-11 && res_norm > 0.5 * prev_norm)) {
      converged = true;
      break;
    }
    prev_norm = res_norm;
    // Approximate symmetric Jacobian of the residual in v+:
    //   J w = w - (dt^2/2) div(D2G(F_mid)[grad w]) - (viscosity dt/2) lap w
    TorusField Fmid = 0.5 * (F + substitute_F(vp));
    auto apply_J = [&](const TorusField& w) {
      TorusField gw = gradient(w);
      TorusField out = w - (0.5 * dt * dt) * divergence(hessian_apply(model, Fmid, gw));
      if (viscosity > 0.0) out -= (0.5 * viscosity * dt) * divergence(gw);
      return out;
    };
    // CG on J delta = -r
    TorusField delta(v.grid(), Rank::Vector);
    TorusField cg_r = r;
    cg_r *= -1.0;
    TorusField p = cg_r;
    double rs = field_inner(cg_r, cg_r);
    for (int cg = 0; cg < 500 && rs > 1e-24; ++cg) {
      TorusField Jp = apply_J(p);
      double alpha = rs / field_inner(p, Jp);
      delta += alpha * p;
      cg_r -= alpha * Jp;
      double rs_new = field_inner(cg_r, cg_r);
      if (rs_new <= 1e-24 * std::max(1.0, rs)) { rs = rs_new; break; }
      p = cg_r + (rs_new / rs) * p;
      rs = rs_new;
    }
    vp += delta;
  }
  if (!converged && res_norm > 1e-11)
    throw NewtonFailure("step: Newton did not reach residual 1e-11 in 50 iterations",
                        res_norm);

  ElasticState out;
  out.v = vp;
  out.F = substitute_F(vp);
  out.t = s.t + dt;
  if (dissipation_out) {
    TorusField gvmid = gradient(0.5 * (v + vp));
    *dissipation_out = viscosity * dt * field_inner(gvmid, gvmid);
  }
  return out;
}

Trajectory simulate(const ConvexElasticModel& model, const ElasticState& initial,
                    double dt, int steps, double viscosity) {
  if (steps < 1) throw std::invalid_argument("simulate: steps >= 1");
  initial.validate();
  Trajectory traj;
  traj.dt = dt;
  double cap = stable_dt_cap(model, initial.v.grid());
  if (dt > cap) {
    traj.warnings.push_back("dt exceeds stability cap; capped to " + std::to_string(cap));
    traj.dt = cap;
  }
  traj.states.push_back(initial);
  double E0 = elastic_energy(model, initial);
  traj.E.push_back(E0);
  traj.dissipation.push_back(0.0);
  double cum = 0.0;
  for (int n = 0; n < steps; ++n) {
    double diss = 0.0;
    try {
      traj.states.push_back(step(model, traj.states.back(), traj.dt, viscosity, &diss));
    } catch (const NewtonFailure& e) {
      throw NewtonFailure("simulate: step " + std::to_string(n) + ": " + e.what(),
                          e.last_residual);
    }
    cum += diss;
    traj.E.push_back(E0 - cum);
    traj.dissipation.push_back(cum);
  }
  return traj;
}

ElasticState manufactured_linear_solution(const TorusGrid& grid, double t,
                                          double amplitude) {
  if (grid.dim != 1)
    throw std::invalid_argument("manufactured_linear_solution: 1D grids only");
  const double k = 2.0 * std::numbers::pi / grid.period(0);
  ElasticState s;
  s.t = t;
  s.v = TorusField::sample_vector(grid, [&](const std::array<double, 3>& x) {
    Eigen::VectorXd v(1);
    v[0] = amplitude * std::cos(k * t) * std::sin(k * x[0]);
    return v;
  });
  s.F = TorusField::sample_matrix(grid, [&](const std::array<double, 3>& x) {
    Eigen::MatrixXd F(1, 1);
    F(0, 0) = amplitude * std::sin(k * t) * std::cos(k * x[0]);
    return F;
  });
  return s;
}

ElasticState oscillatory_initial_data(const TorusGrid& grid, double amplitude,
                                      int wavelength_cells) {
  if (wavelength_cells < 2 || wavelength_cells % 2 != 0 ||
      grid.extent[0] % wavelength_cells != 0)
    throw std::invalid_argument(
        "oscillatory_initial_data: wavelength must be even, >= 2, and divide the extent");
  ElasticState s;
  s.t = 0.0;
  s.v = TorusField(grid, Rank::Vector);
  s.F = TorusField(grid, Rank::Matrix);
  const int half = wavelength_cells / 2;
  const std::size_t n = grid.cell_count();
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(grid.dim, grid.dim);
  for (std::size_t c = 0; c < n; ++c) {
    int i0 = grid.coords(c)[0];
    double sign = ((i0 / half) % 2 == 0) ? 1.0 : -1.0;
    s.F.set_matrix(c, sign * amplitude * ones);
  }
  return s;
}

}  // namespace genesol
