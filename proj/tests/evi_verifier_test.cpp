#include <doctest.h>

#include <cmath>
#include <random>

#include "genesol/evi_verifier.hpp"

using namespace genesol;

namespace {

Trajectory constant_trajectory(const ConvexElasticModel& model, const TorusGrid& g,
                               double fvalue, int nodes, double dt) {
  ElasticState s{TorusField(g, Rank::Vector), TorusField(g, Rank::Matrix), 0.0};
  for (double& x : s.F.values()) x = fvalue;
  Trajectory tr;
  tr.dt = dt;
  double e = elastic_energy(model, s);
  for (int n = 0; n < nodes; ++n) {
    s.t = n * dt;
    tr.states.push_back(s);
    tr.E.push_back(e);
    tr.dissipation.push_back(0.0);
  }
  return tr;
}

}  // namespace

TEST_CASE("trigonometric basis flags divergence-free vector modes") {
  TorusGrid g = TorusGrid::uniform(2, 8);
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  // 1 constant + sin/cos per axis = 5 scalar specs
  CHECK(basis.scalar_modes.size() == 5);
  CHECK(basis.vector_modes.size() == 10);
  CHECK(basis.matrix_modes.size() == 20);
  for (const auto& m : basis.vector_modes) {
    TorusField d = divergence(m.field);
    bool df = inner(d, d) <= 1e-12;
    CHECK(m.divergence_free == df);
  }
  // f(x0) e1 never sees its own axis: at least the constant and cross modes
  CHECK(basis.divergence_free_vector_modes().size() >= 4);
}

TEST_CASE("time profiles are a constant plus hats") {
  auto profiles = standard_time_profiles(11, 5);
  CHECK(profiles.size() == 6);
  for (double v : profiles[0]) CHECK(v == 1.0);
  for (std::size_t p = 1; p < profiles.size(); ++p) {
    double sum = 0.0;
    for (double v : profiles[p]) sum += v;
    CHECK(sum == 1.0);  // single unit node value
  }
}

TEST_CASE("zero test functions reduce the elastic inequality to energy decay") {
  TorusGrid g = TorusGrid::uniform(1, 32);
  ConvexElasticModel m = quadratic_elastic_model(1);
  Trajectory tr = simulate(m, manufactured_linear_solution(g, 0.0), g.spacing[0] / 4,
                           20, 0.1);
  TimeProfile theta(tr.states.size(), 1.0);
  double entry = evi_entry_elastic(m, tr, nullptr, nullptr, theta, 2, 15, 1.0);
  CHECK(entry == doctest::Approx(tr.E[15] - tr.E[2]).epsilon(1e-12));
  CHECK(entry <= 0.0);
}

TEST_CASE("stationary elastic data satisfies the inequality exactly") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  ConvexElasticModel m = perturbed_quadratic_model(1);
  Trajectory tr = constant_trajectory(m, g, 0.4, 9, 0.01);
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  ViolationReport rep = evi_residual_elastic(m, tr, basis, m.M / m.m);
  CHECK(rep.max_violation <= 1e-12);
  CHECK(!rep.table.empty());
}

TEST_CASE("the inequality is linear in the test function") {
  TorusGrid g = TorusGrid::uniform(1, 32);
  ConvexElasticModel m = quadratic_elastic_model(1);
  Trajectory tr = simulate(m, manufactured_linear_solution(g, 0.0), g.spacing[0] / 4,
                           16, 0.0);
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  const TorusField& phi = basis.vector_modes[1].field;
  TimeProfile theta = standard_time_profiles((int)tr.states.size(), 5)[2];
  double weak = weak_entry_elastic(m, tr, &phi, nullptr, theta, 0, 12);
  double base = evi_entry_elastic(m, tr, nullptr, nullptr, theta, 0, 12, 0.0);
  for (double alpha : {1e-2, 1e-4}) {
    TorusField scaled = phi * alpha;
    double entry = evi_entry_elastic(m, tr, &scaled, nullptr, theta, 0, 12, 0.0);
    CHECK(std::abs((entry - base) / alpha - weak) <= 1e-9 * (1.0 + std::abs(weak)));
  }
}

TEST_CASE("the convexity weight only helps when the auxiliary energy dominates") {
  TorusGrid g = TorusGrid::uniform(1, 32);
  ConvexElasticModel m = quadratic_elastic_model(1);
  Trajectory tr = simulate(m, manufactured_linear_solution(g, 0.0), g.spacing[0] / 4,
                           16, 0.0);
  for (double& e : tr.E) e += 0.01;  // still dominates the physical energy
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  const TorusField& phi = basis.vector_modes[1].field;
  TimeProfile theta(tr.states.size(), 1.0);
  double loose = evi_entry_elastic(m, tr, &phi, nullptr, theta, 0, 12, 0.0);
  double tight = evi_entry_elastic(m, tr, &phi, nullptr, theta, 0, 12, 5.0);
  CHECK(tight < loose);
}

TEST_CASE("elastic residuals shrink under joint grid and step refinement") {
  ConvexElasticModel m = quadratic_elastic_model(1);
  double T = 0.25;
  double vio[3];
  int idx = 0;
  for (int n : {16, 32, 64}) {
    TorusGrid g = TorusGrid::uniform(1, n);
    double dt = g.spacing[0] / 4;
    int steps = static_cast<int>(std::round(T / dt));
    Trajectory tr = simulate(m, manufactured_linear_solution(g, 0.0), dt, steps, 0.0);
    TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
    ViolationReport rep = evi_residual_elastic(m, tr, basis, m.M / m.m, 5);
    vio[idx++] = rep.max_violation;
  }
  CHECK(vio[0] / vio[1] >= 3.0);
  CHECK(vio[1] / vio[2] >= 3.0);
}

TEST_CASE("stationary polyconvex data satisfies the inequality exactly") {
  TorusGrid g = TorusGrid::uniform(3, 4);
  PolyconvexModel m = polyconvex_example_model(0.01, 0.02);
  TorusField v(g, Rank::Vector);
  TorusField F = TorusField::sample_matrix(
      g, [](const std::array<double, 3>&) {
        return Eigen::MatrixXd(Eigen::Matrix3d::Identity() * 1.1);
      });
  std::vector<TorusField> vs(3, v), Fs(3, F);
  PolyconvexTrajectory traj = PolyconvexTrajectory::from_states(m, vs, Fs, 0.01);
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  ViolationReport rep = evi_residual_polyconvex(m, traj, basis, m.weight_c);
  CHECK(rep.max_violation <= 1e-12);
}

TEST_CASE("polyconvex weight term pushes the residual down") {
  TorusGrid g = TorusGrid::uniform(3, 4);
  PolyconvexModel m = polyconvex_example_model(0.01, 0.02);
  TorusField v(g, Rank::Vector);
  TorusField F = TorusField::sample_matrix(
      g, [](const std::array<double, 3>&) {
        return Eigen::MatrixXd(Eigen::Matrix3d::Identity());
      });
  std::vector<TorusField> vs(2, v), Fs(2, F);
  PolyconvexTrajectory traj = PolyconvexTrajectory::from_states(m, vs, Fs, 0.01);
  for (double& e : traj.E) e += 0.05;  // auxiliary energy above the physical one
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  // first non-constant mode: the constant one has zero gradient and no weight
  const TorusField& phi = basis.vector_modes[3].field;
  TimeProfile theta(2, 1.0);
  double loose = evi_entry_polyconvex(m, traj, &phi, nullptr, nullptr, nullptr,
                                      theta, 0, 1, 0.0);
  double tight = evi_entry_polyconvex(m, traj, &phi, nullptr, nullptr, nullptr,
                                      theta, 0, 1, 4.0);
  CHECK(tight < loose);
}

namespace {

LiquidCrystalData uniform_director_data(const LiquidCrystalModel& model,
                                        const TorusGrid& g, const TorusField& v,
                                        int nodes, double dt) {
  TorusField d = TorusField::sample_vector(g, [](const std::array<double, 3>&) {
    return Eigen::VectorXd(Eigen::Vector3d(0, 0, 1));
  });
  LiquidCrystalData data;
  data.dt = dt;
  double e = liquid_crystal_energy(model, v, d);
  for (int n = 0; n < nodes; ++n) {
    data.v.push_back(v);
    data.d.push_back(d);
    data.q.push_back(assemble_director_forcing(model, d));
    data.E.push_back(e);
  }
  return data;
}

}  // namespace

TEST_CASE("resting liquid crystal data satisfies the inequality exactly") {
  TorusGrid g = TorusGrid::uniform(3, 4);
  LiquidCrystalModel m;
  m.K1 = 1.0;
  m.K3 = 2.0;
  m.validate();
  LiquidCrystalData data = uniform_director_data(m, g, TorusField(g, Rank::Vector), 3,
                                                 0.01);
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  ViolationReport rep = evi_residual_liquid_crystal(m, data, basis);
  CHECK(rep.max_violation <= 1e-12);
}

TEST_CASE("liquid crystal dissipation quadrature matches the closed form") {
  TorusGrid g = TorusGrid::uniform(3, 8);
  LiquidCrystalModel m;
  m.K1 = 1.0;
  m.K3 = 1.5;
  m.mu4 = 0.8;
  m.validate();
  // shear flow v = sin(2 pi x0) e2 is divergence-free; with a uniform director
  // along e3 only the mu4 |S|^2 term survives
  TorusField v = TorusField::sample_vector(g, [](const std::array<double, 3>& x) {
    return Eigen::VectorXd(Eigen::Vector3d(0.0, std::sin(2 * M_PI * x[0]), 0.0));
  });
  LiquidCrystalData data = uniform_director_data(m, g, v, 3, 0.01);
  TimeProfile theta(3, 1.0);
  double entry = evi_entry_liquid_crystal(m, data, nullptr, nullptr, nullptr, theta,
                                          0, 2);
  TorusField Gv = gradient(v);
  double expected = 0.5 * m.mu4 * l2_norm(Gv) * l2_norm(Gv) * 2 * data.dt;
  CHECK(entry == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("liquid crystal verifier rejects unsupported inputs") {
  TorusGrid g = TorusGrid::uniform(3, 4);
  LiquidCrystalModel m;
  m.K1 = 2.0;  // reformulation requires the unit exchange constant
  m.K3 = 3.0;
  LiquidCrystalData data = uniform_director_data(m, g, TorusField(g, Rank::Vector), 2,
                                                 0.01);
  TimeProfile theta(2, 1.0);
  CHECK_THROWS_AS(
      evi_entry_liquid_crystal(m, data, nullptr, nullptr, nullptr, theta, 0, 1),
      std::invalid_argument);
  LiquidCrystalModel ok;
  ok.K1 = 1.0;
  ok.K3 = 2.0;
  LiquidCrystalData data2 = uniform_director_data(ok, g, TorusField(g, Rank::Vector),
                                                  2, 0.01);
  // phi with nonzero divergence is refused
  TorusField bad = TorusField::sample_vector(g, [](const std::array<double, 3>& x) {
    return Eigen::VectorXd(Eigen::Vector3d(std::sin(2 * M_PI * x[0]), 0, 0));
  });
  CHECK_THROWS_AS(
      evi_entry_liquid_crystal(ok, data2, &bad, nullptr, nullptr, theta, 0, 1),
      std::invalid_argument);
}

TEST_CASE("measure-valued residuals vanish on stationary data") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  ConvexElasticModel m = perturbed_quadratic_model(1);
  Trajectory tr = constant_trajectory(m, g, 0.3, 6, 0.01);
  std::vector<CoarseData> nodes;
  for (const auto& s : tr.states) nodes.push_back(coarsen(m, s, 1));
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  ViolationReport rep = mvs_residual_elastic(m, nodes, tr.dt, basis);
  CHECK(rep.max_violation <= 1e-12);
}

TEST_CASE("measure-valued residuals shrink under time-step halving") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  ConvexElasticModel m = quadratic_elastic_model(1);
  TestFunctionBasis basis = TestFunctionBasis::trigonometric(g);
  double T = 0.5;
  double vio[2];
  int idx = 0;
  for (double dt : {g.spacing[0] / 4, g.spacing[0] / 8}) {
    int steps = static_cast<int>(std::round(T / dt));
    Trajectory tr = simulate(m, manufactured_linear_solution(g, 0.0), dt, steps, 0.0);
    std::vector<CoarseData> nodes;
    for (const auto& s : tr.states) nodes.push_back(coarsen(m, s, 1));
    vio[idx++] = mvs_residual_elastic(m, nodes, dt, basis).max_violation;
  }
  CHECK(vio[0] / vio[1] >= 1.9);
}

TEST_CASE("varifold compatibility holds exactly for consistent data") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  TorusField chi = TorusField::sample_scalar(
      g, [](const std::array<double, 3>& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
  InterfaceData iface = InterfaceData::from_indicator(chi);
  DefectField df;
  df.R = TorusField(g, Rank::Matrix);
  Varifold vf = build_varifold(df, iface);
  CHECK(compatibility_check(g, vf, iface) <= 1e-12);

  // a symmetric defect contributes antipodal pairs that cancel by themselves
  DefectField df2;
  df2.R = TorusField::sample_matrix(g, [](const std::array<double, 3>&) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = 0.7;
    return m;
  });
  Varifold vf2 = build_varifold(df2, iface);
  CHECK(compatibility_check(g, vf2, iface) <= 1e-12);
}

TEST_CASE("varifold compatibility detects a perturbed mass") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  TorusField chi = TorusField::sample_scalar(
      g, [](const std::array<double, 3>& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
  InterfaceData iface = InterfaceData::from_indicator(chi);
  DefectField df;
  df.R = TorusField(g, Rank::Matrix);
  Varifold vf = build_varifold(df, iface);
  double mass = vf.atoms[0].mass;
  vf.atoms[0].mass *= 1.0 + 1e-3;
  CHECK(compatibility_check(g, vf, iface) >= 1e-4 * mass);
}

TEST_CASE("relative energy vanishes on identical data and bounds the distance") {
  TorusGrid g = TorusGrid::uniform(1, 32);
  ConvexElasticModel m = perturbed_quadratic_model(1, 0.1);
  double dt = g.spacing[0] / 4;
  Trajectory ref = simulate(m, manufactured_linear_solution(g, 0.0), dt, 16, 0.0);
  RelativeEnergyReport same = relative_energy(m, ref, ref);
  for (double v : same.values) CHECK(std::abs(v) <= 1e-14);

  ElasticState other0 = manufactured_linear_solution(g, 0.0, 1.01);
  Trajectory other = simulate(m, other0, dt, 16, 0.0);
  RelativeEnergyReport rep = relative_energy(m, other, ref);
  for (std::size_t n = 0; n < rep.values.size(); ++n) {
    TorusField dv = other.states[n].v - ref.states[n].v;
    TorusField dF = other.states[n].F - ref.states[n].F;
    double lower = 0.5 * l2_norm(dv) * l2_norm(dv) +
                   0.5 * m.m * l2_norm(dF) * l2_norm(dF);
    double upper = 0.5 * l2_norm(dv) * l2_norm(dv) +
                   0.5 * m.M * l2_norm(dF) * l2_norm(dF);
    CHECK(rep.values[n] >= lower - 1e-12);
    CHECK(rep.values[n] <= upper + 1e-12);
  }
  // nearby smooth solutions stay nearby: no runaway exponential growth
  CHECK(std::abs(rep.growth_rate) <= 10.0);
}
