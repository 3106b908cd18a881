#include "genesol/evi_verifier.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace genesol {

namespace {

// trapezoidal quadratures over the node interval [s, t]
double trapz(const std::vector<double>& f, int s, int t, double dt) {
  double acc = 0.0;
  for (int n = s; n < t; ++n) acc += 0.5 * dt * (f[n] + f[n + 1]);
  return acc;
}

double trapz_weighted(const std::vector<double>& theta, const std::vector<double>& f,
                      int s, int t, double dt) {
  double acc = 0.0;
  for (int n = s; n < t; ++n)
    acc += 0.5 * dt * (theta[n] * f[n] + theta[n + 1] * f[n + 1]);
  return acc;
}

// integral of theta'(tau) f(tau): theta' is constant per interval
double trapz_dtheta(const std::vector<double>& theta, const std::vector<double>& f,
                    int s, int t) {
  double acc = 0.0;
  for (int n = s; n < t; ++n)
    acc += (theta[n + 1] - theta[n]) * 0.5 * (f[n] + f[n + 1]);
  return acc;
}

void check_window(std::size_t nodes, const TimeProfile& theta, int s, int t) {
  if (theta.size() != nodes)
    throw std::invalid_argument("verifier: time profile length mismatch");
  if (s < 0 || t <= s || t >= static_cast<int>(nodes))
    throw std::invalid_argument("verifier: need 0 <= s < t < node count");
}

double lp_grad_norm(const TorusField& phi, double p) {
  TorusField g = gradient(phi);
  double vol = phi.grid().cell_volume();
  double acc = 0.0;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    double f2 = 0.0;
    for (int i = 0; i < g.components(); ++i) f2 += g.at(c, i) * g.at(c, i);
    acc += std::pow(std::sqrt(f2), p) * vol;
  }
  return std::pow(acc, 1.0 / p);
}

void require_div_free(const TorusField& phi) {
  TorusField d = divergence(phi);
  if (inner(d, d) > 1e-12)
    throw std::invalid_argument("verifier: velocity test mode must be divergence-free");
}

}  // namespace

// ---- basis ----

TestFunctionBasis TestFunctionBasis::trigonometric(const TorusGrid& grid,
                                                   int max_index) {
  TestFunctionBasis basis;
  struct ScalarSpec {
    std::string label;
    int axis;  // -1: constant
    std::function<double(const std::array<double, 3>&)> f;
  };
  std::vector<ScalarSpec> specs;
  specs.push_back({"const", -1, [](const std::array<double, 3>&) { return 1.0; }});
  for (int a = 0; a < grid.dim; ++a)
    for (int k = 1; k <= max_index; ++k) {
      double om = 2.0 * std::numbers::pi * k / grid.period(a);
      specs.push_back({"sin" + std::to_string(k) + "_x" + std::to_string(a), a,
                       [om, a](const std::array<double, 3>& x) {
                         return std::sin(om * x[a]);
                       }});
      specs.push_back({"cos" + std::to_string(k) + "_x" + std::to_string(a), a,
                       [om, a](const std::array<double, 3>& x) {
                         return std::cos(om * x[a]);
                       }});
    }

  for (const auto& sp : specs)
    basis.scalar_modes.push_back({TorusField::sample_scalar(grid, sp.f), false, sp.label});

  for (const auto& sp : specs)
    for (int i = 0; i < grid.dim; ++i) {
      TorusField v(grid, Rank::Vector);
      TorusField s = TorusField::sample_scalar(grid, sp.f);
      for (std::size_t c = 0; c < v.cells(); ++c) v(c, i) = s.at(c);
      TorusField dv = divergence(v);
      bool df = inner(dv, dv) <= 1e-12;
      basis.vector_modes.push_back(
          {std::move(v), df, sp.label + "_e" + std::to_string(i)});
    }

  for (const auto& sp : specs)
    for (int i = 0; i < grid.dim; ++i)
      for (int j = 0; j < grid.dim; ++j) {
        TorusField m(grid, Rank::Matrix);
        TorusField s = TorusField::sample_scalar(grid, sp.f);
        int comp = i * grid.dim + j;
        for (std::size_t c = 0; c < m.cells(); ++c) m(c, comp) = s.at(c);
        basis.matrix_modes.push_back(
            {std::move(m), false,
             sp.label + "_E" + std::to_string(i) + std::to_string(j)});
      }
  return basis;
}

std::vector<const SpatialMode*> TestFunctionBasis::divergence_free_vector_modes()
    const {
  std::vector<const SpatialMode*> out;
  for (const auto& m : vector_modes)
    if (m.divergence_free) out.push_back(&m);
  return out;
}

std::vector<TimeProfile> standard_time_profiles(int node_count, int max_samples) {
  std::vector<TimeProfile> out;
  out.emplace_back(node_count, 1.0);
  int samples = std::min(max_samples, node_count);
  for (int j = 0; j < samples; ++j) {
    int center = (samples == 1) ? 0 : static_cast<int>(
        std::llround(static_cast<double>(j) * (node_count - 1) / (samples - 1)));
    TimeProfile hat(node_count, 0.0);
    hat[center] = 1.0;
    if (center > 0) hat[center - 1] = 0.0;
    if (center + 1 < node_count) hat[center + 1] = 0.0;
    out.push_back(std::move(hat));
  }
  return out;
}

void ViolationReport::finalize() {
  max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& e : table)
    if (e.value > max_violation) {
      max_violation = e.value;
      argmax = e;
    }
  if (table.empty()) max_violation = 0.0;
}

// ---- elastic EVI ----

namespace {

struct ElasticArrays {
  std::vector<double> pair;       // integral of v.phi + F:Psi per node
  std::vector<double> transport;  // integral of DG(F):grad phi + v.div Psi
  std::vector<double> calE;
  double grad_phi_l2 = 0.0;
};

ElasticArrays elastic_arrays(const ConvexElasticModel& model, const Trajectory& traj,
                             const TorusField* phi, const TorusField* Psi) {
  const int N = static_cast<int>(traj.states.size());
  ElasticArrays a;
  a.pair.assign(N, 0.0);
  a.transport.assign(N, 0.0);
  a.calE.assign(N, 0.0);
  TorusField grad_phi, div_Psi;
  if (phi) {
    grad_phi = gradient(*phi);
    a.grad_phi_l2 = l2_norm(grad_phi);
  }
  if (Psi) div_Psi = divergence(*Psi);
  for (int n = 0; n < N; ++n) {
    const ElasticState& st = traj.states[n];
    a.calE[n] = elastic_energy(model, st);
    if (phi) {
      a.pair[n] += inner(st.v, *phi);
      TorusField dg(st.F.grid(), Rank::Matrix);
      for (std::size_t c = 0; c < st.F.cells(); ++c)
        dg.set_matrix(c, model.DG(st.F.matrix_at(c)));
      a.transport[n] += inner(dg, grad_phi);
    }
    if (Psi) {
      a.pair[n] += inner(st.F, *Psi);
      a.transport[n] += inner(st.v, div_Psi);
    }
  }
  return a;
}

}  // namespace

double evi_entry_elastic(const ConvexElasticModel& model, const Trajectory& traj,
                         const TorusField* phi, const TorusField* Psi,
                         const TimeProfile& theta, int s, int t,
                         double weight_constant) {
  check_window(traj.states.size(), theta, s, t);
  ElasticArrays a = elastic_arrays(model, traj, phi, Psi);
  const double dt = traj.dt;

  double bracket = (traj.E[t] - theta[t] * a.pair[t]) -
                   (traj.E[s] - theta[s] * a.pair[s]);
  double timeterm = trapz_dtheta(theta, a.pair, s, t);
  double transport = trapz_weighted(theta, a.transport, s, t, dt);
  std::vector<double> gap(traj.states.size());
  for (std::size_t n = 0; n < gap.size(); ++n)
    gap[n] = std::abs(theta[n]) * (a.calE[n] - traj.E[n]);
  double weight = weight_constant * a.grad_phi_l2 * trapz(gap, s, t, dt);
  return bracket + timeterm - transport + weight;
}

double weak_entry_elastic(const ConvexElasticModel& model, const Trajectory& traj,
                          const TorusField* phi, const TorusField* Psi,
                          const TimeProfile& theta, int s, int t) {
  check_window(traj.states.size(), theta, s, t);
  ElasticArrays a = elastic_arrays(model, traj, phi, Psi);
  double bracket = -(theta[t] * a.pair[t] - theta[s] * a.pair[s]);
  return bracket + trapz_dtheta(theta, a.pair, s, t) -
         trapz_weighted(theta, a.transport, s, t, traj.dt);
}

namespace {

std::vector<int> sample_nodes(int node_count, int max_samples) {
  std::vector<int> idx;
  int samples = std::min(max_samples, node_count);
  for (int j = 0; j < samples; ++j)
    idx.push_back((samples == 1) ? 0 : static_cast<int>(std::llround(
        static_cast<double>(j) * (node_count - 1) / (samples - 1))));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

}  // namespace

ViolationReport evi_residual_elastic(const ConvexElasticModel& model,
                                     const Trajectory& traj,
                                     const TestFunctionBasis& basis,
                                     double weight_constant, int max_time_samples) {
  const int N = static_cast<int>(traj.states.size());
  ViolationReport rep;
  auto profiles = standard_time_profiles(N, max_time_samples);
  auto nodes = sample_nodes(N, max_time_samples);

  struct Pair {
    const TorusField* phi;
    const TorusField* Psi;
    std::string label;
  };
  std::vector<Pair> mode_pairs;
  mode_pairs.push_back({nullptr, nullptr, "zero"});
  for (const auto& m : basis.vector_modes)
    mode_pairs.push_back({&m.field, nullptr, "phi:" + m.label});
  for (const auto& m : basis.matrix_modes)
    mode_pairs.push_back({nullptr, &m.field, "Psi:" + m.label});

  for (const auto& mp : mode_pairs)
    for (std::size_t p = 0; p < profiles.size(); ++p)
      for (std::size_t is = 0; is < nodes.size(); ++is)
        for (std::size_t it = is + 1; it < nodes.size(); ++it) {
          double v = evi_entry_elastic(model, traj, mp.phi, mp.Psi, profiles[p],
                                       nodes[is], nodes[it], weight_constant);
          rep.table.push_back({mp.label + "/theta" + std::to_string(p), nodes[is],
                               nodes[it], v});
        }
  rep.finalize();
  return rep;
}

// ---- polyconvex EVI ----

double polyconvex_energy(const PolyconvexModel& model, const TorusField& v,
                         const TorusField& F) {
  TorusField density(v.grid(), Rank::Scalar);
  for (std::size_t c = 0; c < v.cells(); ++c) {
    double kin = 0.0;
    for (int i = 0; i < v.components(); ++i) kin += v.at(c, i) * v.at(c, i);
    density(c) = 0.5 * kin + sigma_eval(model, F.matrix_at(c));
  }
  return integrate(density);
}

PolyconvexTrajectory PolyconvexTrajectory::from_states(
    const PolyconvexModel& model, const std::vector<TorusField>& v,
    const std::vector<TorusField>& F, double dt) {
  if (v.size() != F.size() || v.empty())
    throw std::invalid_argument("PolyconvexTrajectory: v/F node mismatch");
  if (v[0].grid().dim != 3)
    throw std::invalid_argument("PolyconvexTrajectory: 3D grids only");
  PolyconvexTrajectory traj;
  traj.v = v;
  traj.F = F;
  traj.dt = dt;
  for (std::size_t n = 0; n < v.size(); ++n) {
    TorusField Z(F[n].grid(), Rank::Matrix);
    TorusField w(F[n].grid(), Rank::Scalar);
    for (std::size_t c = 0; c < F[n].cells(); ++c) {
      Kinematics kin = polyconvex_kinematics(F[n].matrix_at(c));
      Z.set_matrix(c, kin.cof);
      w(c) = kin.det;
    }
    traj.Z.push_back(std::move(Z));
    traj.w.push_back(std::move(w));
    traj.E.push_back(polyconvex_energy(model, v[n], F[n]));
  }
  return traj;
}

double evi_entry_polyconvex(const PolyconvexModel& model,
                            const PolyconvexTrajectory& traj, const TorusField* phi,
                            const TorusField* Psi, const TorusField* Xi,
                            const TorusField* phi_s, const TimeProfile& theta, int s,
                            int t, double weight_constant) {
  const int N = static_cast<int>(traj.v.size());
  check_window(N, theta, s, t);
  if (traj.v[0].grid().dim != 3)
    throw std::invalid_argument("evi_entry_polyconvex: 3D grids only");
  const double dt = traj.dt;

  TorusField grad_phi, div_Psi, curl_Xi, grad_phis;
  double grad_phi_lp = 0.0;
  if (phi) {
    grad_phi = gradient(*phi);
    grad_phi_lp = lp_grad_norm(*phi, model.p);
  }
  if (Psi) div_Psi = divergence(*Psi);
  if (Xi) curl_Xi = curl(*Xi);
  if (phi_s) grad_phis = gradient(*phi_s);

  std::vector<double> pair(N, 0.0), transport(N, 0.0), calE(N, 0.0), gap(N, 0.0);
  for (int n = 0; n < N; ++n) {
    const TorusField& v = traj.v[n];
    const TorusField& F = traj.F[n];
    const TorusField& Z = traj.Z[n];
    const TorusField& w = traj.w[n];
    calE[n] = polyconvex_energy(model, v, F);
    if (phi) {
      pair[n] += inner(v, *phi);
      TorusField zeta(F.grid(), Rank::Matrix);
      for (std::size_t c = 0; c < F.cells(); ++c)
        zeta.set_matrix(c, zeta_eval(model, F.matrix_at(c)));
      transport[n] += inner(zeta, grad_phi);
    }
    if (Psi) {
      pair[n] += inner(F, *Psi);
      transport[n] += inner(v, div_Psi);
    }
    if (Xi) {
      pair[n] += inner(Z, *Xi);
      transport[n] += inner(cross(v, F), curl_Xi);
    }
    if (phi_s) {
      pair[n] += inner(w, *phi_s);
      TorusField cofTv(v.grid(), Rank::Vector);
      for (std::size_t c = 0; c < v.cells(); ++c)
        cofTv.set_vector(c, Z.matrix_at(c).transpose() * v.vector_at(c));
      transport[n] += inner(cofTv, grad_phis);
    }
    gap[n] = std::abs(theta[n]) * (calE[n] - traj.E[n]);
  }

  double bracket = (traj.E[t] - theta[t] * pair[t]) - (traj.E[s] - theta[s] * pair[s]);
  return bracket + trapz_dtheta(theta, pair, s, t) -
         trapz_weighted(theta, transport, s, t, dt) +
         weight_constant * grad_phi_lp * trapz(gap, s, t, dt);
}

ViolationReport evi_residual_polyconvex(const PolyconvexModel& model,
                                        const PolyconvexTrajectory& traj,
                                        const TestFunctionBasis& basis,
                                        double weight_constant, int max_time_samples) {
  const int N = static_cast<int>(traj.v.size());
  ViolationReport rep;
  auto profiles = standard_time_profiles(N, max_time_samples);
  auto nodes = sample_nodes(N, max_time_samples);

  struct Mode {
    const TorusField* phi = nullptr;
    const TorusField* Psi = nullptr;
    const TorusField* Xi = nullptr;
    const TorusField* phi_s = nullptr;
    std::string label;
  };
  std::vector<Mode> modes;
  modes.push_back({nullptr, nullptr, nullptr, nullptr, "zero"});
  for (const auto& m : basis.vector_modes)
    modes.push_back({&m.field, nullptr, nullptr, nullptr, "phi:" + m.label});
  for (const auto& m : basis.matrix_modes) {
    modes.push_back({nullptr, &m.field, nullptr, nullptr, "Psi:" + m.label});
    modes.push_back({nullptr, nullptr, &m.field, nullptr, "Xi:" + m.label});
  }
  for (const auto& m : basis.scalar_modes)
    modes.push_back({nullptr, nullptr, nullptr, &m.field, "phis:" + m.label});

  for (const auto& md : modes)
    for (std::size_t p = 0; p < profiles.size(); ++p)
      for (std::size_t is = 0; is < nodes.size(); ++is)
        for (std::size_t it = is + 1; it < nodes.size(); ++it) {
          double v = evi_entry_polyconvex(model, traj, md.phi, md.Psi, md.Xi,
                                          md.phi_s, profiles[p], nodes[is],
                                          nodes[it], weight_constant);
          rep.table.push_back({md.label + "/theta" + std::to_string(p), nodes[is],
                               nodes[it], v});
        }
  rep.finalize();
  return rep;
}

// ---- liquid crystal EVI ----

TorusField assemble_director_forcing(const LiquidCrystalModel& model,
                                     const TorusField& d) {
  const double k = model.k();
  TorusField Gd = gradient(d);
  TorusField flux(d.grid(), Rank::Matrix);  // dF/d(grad d) = Gd (I + k d(x)d)
  TorusField bulk(d.grid(), Rank::Vector);  // k Gd^T Gd d
  for (std::size_t c = 0; c < d.cells(); ++c) {
    Eigen::MatrixXd G = Gd.matrix_at(c);
    Eigen::VectorXd dd = d.vector_at(c);
    flux.set_matrix(c, G + k * (G * dd) * dd.transpose());
    bulk.set_vector(c, k * (G.transpose() * G) * dd);
  }
  return bulk - divergence(flux);
}

double liquid_crystal_energy(const LiquidCrystalModel& model, const TorusField& v,
                             const TorusField& d) {
  const double k = model.k();
  TorusField Gd = gradient(d);
  TorusField density(v.grid(), Rank::Scalar);
  for (std::size_t c = 0; c < v.cells(); ++c) {
    double kin = 0.0;
    for (int i = 0; i < v.components(); ++i) kin += v.at(c, i) * v.at(c, i);
    Eigen::MatrixXd G = Gd.matrix_at(c);
    Eigen::VectorXd dd = d.vector_at(c);
    double conv = (G * dd).squaredNorm();
    density(c) = 0.5 * kin + 0.5 * model.K1 * G.squaredNorm() + 0.5 * k * conv;
  }
  return integrate(density);
}

double evi_entry_liquid_crystal(const LiquidCrystalModel& model,
                                const LiquidCrystalData& data, const TorusField* phi,
                                const TorusField* zeta, const TorusField* psi,
                                const TimeProfile& theta, int s, int t) {
  const int N = static_cast<int>(data.v.size());
  check_window(N, theta, s, t);
  if (std::abs(model.K1 - 1.0) > 1e-14)
    throw std::invalid_argument(
        "evi_entry_liquid_crystal: the reformulated inequality assumes K1 = 1");
  if (phi) require_div_free(*phi);
  const double k = model.k();
  const double la = model.lambda;
  const double dt = data.dt;

  TorusField grad_phi, grad_psi;
  if (phi) grad_phi = gradient(*phi);
  if (psi) grad_psi = gradient(*psi);

  std::vector<double> pair(N, 0.0), flux(N, 0.0), diss(N, 0.0), dirterm(N, 0.0),
      qterm(N, 0.0), wfac(N, 0.0), gap(N, 0.0);
  for (int n = 0; n < N; ++n) {
    const TorusField& v = data.v[n];
    const TorusField& d = data.d[n];
    const TorusField& q = data.q[n];
    TorusField Gd = gradient(d);
    TorusField Gv = gradient(v);
    double calE = liquid_crystal_energy(model, v, d);
    gap[n] = theta[n] < 0.0 ? 0.0 : theta[n];  // profiles are nonnegative

    if (zeta) pair[n] += inner(d, *zeta);
    if (phi) pair[n] += inner(v, *phi);

    double wmax = 0.0;
    const std::size_t cells = v.cells();
    TorusField diss_density(v.grid(), Rank::Scalar);
    TorusField flux_density(v.grid(), Rank::Scalar);
    TorusField dir_density(v.grid(), Rank::Scalar);
    TorusField q_density(v.grid(), Rank::Scalar);
    for (std::size_t c = 0; c < cells; ++c) {
      Eigen::Vector3d dd = require_unit(d.vector_at(c));
      Eigen::Vector3d vv = v.vector_at(c);
      Eigen::Vector3d qq = q.vector_at(c);
      Eigen::Matrix3d G = Gd.matrix_at(c);
      Eigen::Matrix3d Dv = Gv.matrix_at(c);
      Eigen::Matrix3d S = 0.5 * (Dv + Dv.transpose());
      Eigen::Matrix3d W = 0.5 * (Dv - Dv.transpose());
      Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - dd * dd.transpose();

      double dSd = dd.dot(S * dd);
      diss_density(c) = (model.mu1 + la * la) * dSd * dSd +
                        model.mu4 * S.squaredNorm() +
                        (model.mu5 + model.mu6 - la * la) * (S * dd).squaredNorm() +
                        dd.cross(qq).squaredNorm();

      if (phi) {
        Eigen::Matrix3d gp = grad_phi.matrix_at(c);
        Eigen::Matrix3d TE =
            (G.transpose() * G) *
            (Eigen::Matrix3d::Identity() + k * dd * dd.transpose());
        Eigen::Matrix3d TL =
            leslie_stress_eval(model, dd, Dv, qq, G).TL;
        // transport (+) and Leslie (-) contributions to the time integrand
        flux_density(c) = ((vv * vv.transpose()).array() * gp.array()).sum() +
                          (TE.array() * gp.array()).sum() -
                          (TL.array() * gp.array()).sum();
      }
      if (zeta) {
        Eigen::Vector3d zc = zeta->vector_at(c);
        Eigen::Vector3d eqn =
            G * vv - W * dd + proj * (la * S * dd + qq);
        dir_density(c) = eqn.dot(zc);
      }
      if (psi) {
        Eigen::Vector3d pc = psi->vector_at(c);
        Eigen::Matrix3d gpsic = grad_psi.matrix_at(c);
        double lhs = qq.dot(pc);
        double rhs = (k * (G.transpose() * G) * dd).dot(pc) +
                     ((G * (Eigen::Matrix3d::Identity() +
                            k * dd * dd.transpose())).array() *
                      gpsic.array())
                         .sum();
        q_density(c) = lhs - rhs;
      }
      if (phi || psi) {
        Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
        if (phi) {
          Eigen::Matrix3d gp = grad_phi.matrix_at(c);
          A += gp + k * dd * (gp * dd).transpose();
        }
        if (psi) A += k * dd * psi->vector_at(c).transpose();
        Eigen::Matrix3d sym = 0.5 * (A + A.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym);
        Eigen::Matrix3d neg = es.eigenvectors() *
                              (-es.eigenvalues()).cwiseMax(0.0).asDiagonal() *
                              es.eigenvectors().transpose();
        wmax = std::max(wmax, d_norm(dd, k, neg).primal);
      }
    }
    diss[n] = integrate(diss_density);
    if (phi) flux[n] = integrate(flux_density);
    if (zeta) dirterm[n] = integrate(dir_density);
    if (psi) qterm[n] = integrate(q_density);
    wfac[n] = 2.0 * gap[n] * wmax * (calE - data.E[n]);
  }

  double bracket = (data.E[t] - theta[t] * pair[t]) - (data.E[s] - theta[s] * pair[s]);
  return bracket + trapz_dtheta(theta, pair, s, t) +
         trapz_weighted(theta, flux, s, t, dt) + trapz(diss, s, t, dt) -
         trapz_weighted(theta, dirterm, s, t, dt) -
         trapz_weighted(theta, qterm, s, t, dt) + trapz(wfac, s, t, dt);
}

ViolationReport evi_residual_liquid_crystal(const LiquidCrystalModel& model,
                                            const LiquidCrystalData& data,
                                            const TestFunctionBasis& basis,
                                            int max_time_samples) {
  const int N = static_cast<int>(data.v.size());
  ViolationReport rep;
  auto profiles = standard_time_profiles(N, max_time_samples);
  auto nodes = sample_nodes(N, max_time_samples);

  struct Mode {
    const TorusField* phi = nullptr;
    const TorusField* zeta = nullptr;
    const TorusField* psi = nullptr;
    std::string label;
  };
  std::vector<Mode> modes;
  modes.push_back({nullptr, nullptr, nullptr, "zero"});
  for (const auto* m : basis.divergence_free_vector_modes())
    modes.push_back({&m->field, nullptr, nullptr, "phi:" + m->label});
  for (const auto& m : basis.vector_modes) {
    modes.push_back({nullptr, &m.field, nullptr, "zeta:" + m.label});
    modes.push_back({nullptr, nullptr, &m.field, "psi:" + m.label});
  }

  for (const auto& md : modes)
    for (std::size_t p = 0; p < profiles.size(); ++p)
      for (std::size_t is = 0; is < nodes.size(); ++is)
        for (std::size_t it = is + 1; it < nodes.size(); ++it) {
          double v = evi_entry_liquid_crystal(model, data, md.phi, md.zeta, md.psi,
                                              profiles[p], nodes[is], nodes[it]);
          rep.table.push_back({md.label + "/theta" + std::to_string(p), nodes[is],
                               nodes[it], v});
        }
  rep.finalize();
  return rep;
}

// ---- measure-valued residuals ----

ViolationReport mvs_residual_elastic(const ConvexElasticModel& model,
                                     const std::vector<CoarseData>& nodes, double dt,
                                     const TestFunctionBasis& basis,
                                     int max_time_samples) {
  const int N = static_cast<int>(nodes.size());
  if (N < 2) throw std::invalid_argument("mvs_residual_elastic: need >= 2 nodes");
  ViolationReport rep;

  // compactly supported profiles: hats vanishing at the last node, plus a
  // ramp with theta(0) = 1 to exercise the initial-data terms
  std::vector<TimeProfile> profiles;
  {
    TimeProfile ramp(N);
    for (int n = 0; n < N; ++n) ramp[n] = 1.0 - static_cast<double>(n) / (N - 1);
    profiles.push_back(std::move(ramp));
    for (int center : sample_nodes(N - 1, max_time_samples)) {
      TimeProfile hat(N, 0.0);
      hat[center] = 1.0;
      profiles.push_back(std::move(hat));
    }
  }

  const ElasticState& init = nodes[0].mean;
  const double T_total = dt * (N - 1);
  (void)T_total;

  for (const auto& mode : basis.vector_modes) {
    TorusField grad_psi = gradient(mode.field);
    std::vector<double> a(N), g(N);
    for (int n = 0; n < N; ++n) {
      a[n] = inner(nodes[n].mean.v, mode.field);
      TorusField dgmom = moment_matrix(
          nodes[n].measure,
          [&](const Eigen::VectorXd&, const Eigen::MatrixXd& S) { return model.DG(S); });
      g[n] = inner(dgmom, grad_psi);
    }
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      const TimeProfile& th = profiles[p];
      double r = th[0] * inner(init.v, mode.field) + trapz_dtheta(th, a, 0, N - 1) -
                 trapz_weighted(th, g, 0, N - 1, dt);
      rep.table.push_back({"eq1:" + mode.label + "/theta" + std::to_string(p), 0,
                           N - 1, std::abs(r)});
    }
  }

  for (const auto& mode : basis.matrix_modes) {
    TorusField div_Psi = divergence(mode.field);
    std::vector<double> b(N), g(N);
    for (int n = 0; n < N; ++n) {
      b[n] = inner(nodes[n].mean.F, mode.field);
      g[n] = inner(nodes[n].mean.v, div_Psi);
    }
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      const TimeProfile& th = profiles[p];
      double r = th[0] * inner(init.F, mode.field) + trapz_dtheta(th, b, 0, N - 1) -
                 trapz_weighted(th, g, 0, N - 1, dt);
      rep.table.push_back({"eq2:" + mode.label + "/theta" + std::to_string(p), 0,
                           N - 1, std::abs(r)});
    }
  }

  // energy inequality over nonnegative profiles vanishing at the last node
  {
    std::vector<double> total_eta(N);
    for (int n = 0; n < N; ++n) {
      std::vector<double> eta = moment_scalar(
          nodes[n].measure, [&](const Eigen::VectorXd& s, const Eigen::MatrixXd& S) {
            return 0.5 * s.squaredNorm() + model.G(S);
          });
      double vol = nodes[n].measure.grid.cell_volume();
      double acc = 0.0;
      for (std::size_t c = 0; c < eta.size(); ++c)
        acc += (eta[c] + nodes[n].measure.gamma[c]) * vol;
      total_eta[n] = acc;
    }
    double E0 = elastic_energy(model, init);
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      const TimeProfile& th = profiles[p];
      double lhs = trapz_dtheta(th, total_eta, 0, N - 1) + th[0] * E0;
      rep.table.push_back(
          {"energy/theta" + std::to_string(p), 0, N - 1, -lhs});  // positive = violation
    }
  }
  rep.finalize();
  return rep;
}

// ---- varifold compatibility ----

double compatibility_check(const TorusGrid& grid, const Varifold& varifold,
                           const std::optional<InterfaceData>& interface,
                           int probe_count) {
  TestFunctionBasis probes = TestFunctionBasis::trigonometric(grid, 2);
  double worst = 0.0;
  int used = 0;
  const int vdim =
      varifold.atoms.empty()
          ? (interface && !interface->atoms.empty()
                 ? static_cast<int>(interface->atoms[0].normal.size())
                 : grid.dim)
          : static_cast<int>(varifold.atoms[0].direction.size());
  for (const auto& probe : probes.scalar_modes) {
    if (used++ >= probe_count) break;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(vdim);
    for (const auto& a : varifold.atoms)
      acc += probe.field.at(a.cell) * a.mass * a.direction;
    if (interface)
      for (const auto& a : interface->atoms)
        acc -= probe.field.at(a.cell) * a.mass * a.normal;
    worst = std::max(worst, acc.norm());
  }
  return worst;
}

// ---- relative energy ----

RelativeEnergyReport relative_energy(const ConvexElasticModel& model,
                                     const Trajectory& traj,
                                     const Trajectory& reference) {
  if (traj.states.size() != reference.states.size())
    throw std::invalid_argument("relative_energy: node count mismatch");
  RelativeEnergyReport rep;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const ElasticState& a = traj.states[n];
    const ElasticState& b = reference.states[n];
    if (!(a.v.grid() == b.v.grid()))
      throw std::invalid_argument("relative_energy: grid mismatch");
    TorusField density(a.v.grid(), Rank::Scalar);
    for (std::size_t c = 0; c < a.v.cells(); ++c) {
      double kin = 0.0;
      for (int i = 0; i < a.v.components(); ++i) {
        double dv = a.v.at(c, i) - b.v.at(c, i);
        kin += dv * dv;
      }
      Eigen::MatrixXd Fa = a.F.matrix_at(c), Fb = b.F.matrix_at(c);
      density(c) = 0.5 * kin + model.G(Fa) - model.G(Fb) -
                   (model.DG(Fb).array() * (Fa - Fb).array()).sum();
    }
    rep.values.push_back(integrate(density));
  }
  // exponential fit log(value) ~ a + rate * t over informative nodes
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t n = 0; n < rep.values.size(); ++n) {
    if (rep.values[n] <= 1e-16) continue;
    double x = traj.dt * n, y = std::log(rep.values[n]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  double denom = count * sxx - sx * sx;
  rep.growth_rate = (count >= 2 && std::abs(denom) > 1e-300)
                        ? (count * sxy - sx * sy) / denom
                        : 0.0;
  return rep;
}

}  // namespace genesol
