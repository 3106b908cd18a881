#include <doctest.h>

#include <cmath>
#include <random>

#include "genesol/coarse_grain.hpp"

using namespace genesol;

namespace {

ElasticState random_state(const TorusGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ElasticState s{TorusField(grid, Rank::Vector), TorusField(grid, Rank::Matrix), 0.0};
  for (double& x : s.v.values()) x = gauss(rng);
  for (double& x : s.F.values()) x = gauss(rng);
  return s;
}

}  // namespace

TEST_CASE("block one coarse-graining is the identity with Dirac measures") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  ConvexElasticModel m = perturbed_quadratic_model(1);
  ElasticState fine = random_state(g, 3);
  CoarseData cd = coarsen(m, fine, 1);
  cd.measure.validate();
  TorusField dv = cd.mean.v - fine.v;
  TorusField dF = cd.mean.F - fine.F;
  CHECK(l2_norm(dv) <= 1e-14);
  CHECK(l2_norm(dF) <= 1e-14);
  CHECK(l2_norm(cd.defect) <= 1e-12);
  for (double s : cd.surplus) CHECK(std::abs(s) <= 1e-12);
  for (const auto& cell_atoms : cd.measure.atoms) {
    CHECK(cell_atoms.size() == 1);
    CHECK(cell_atoms[0].weight == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("two-valued oscillation coarse-grains to the closed form") {
  TorusGrid g = TorusGrid::uniform(1, 32);
  ConvexElasticModel m = perturbed_quadratic_model(1, 0.1);
  double a = 0.6;
  ElasticState fine = oscillatory_initial_data(g, a, 2);  // alternating +-a
  CoarseData cd = coarsen(m, fine, 2);
  CHECK(cd.mean.F.grid().cell_count() == 16);
  for (std::size_t c = 0; c < cd.mean.F.grid().cell_count(); ++c) {
    CHECK(std::abs(cd.mean.F.at(c)) <= 1e-14);  // mean of +-a
    // defect R = (DG(a) + DG(-a))/2 - DG(0); DG odd for this model, so the
    // atom average vanishes and R = -DG(0) = 0
    CHECK(std::abs(cd.defect.at(c)) <= 1e-14);
    // surplus = (G(a) + G(-a))/2 - G(0) = G(a)
    Eigen::MatrixXd A(1, 1);
    A(0, 0) = a;
    CHECK(cd.surplus[c] == doctest::Approx(m.G(A)).epsilon(1e-13));
    CHECK(cd.measure.atoms[c].size() == 2);
    CHECK(cd.measure.atoms[c][0].weight == doctest::Approx(0.5));
  }
}

TEST_CASE("defect matches the moment formula for a non-odd stress") {
  // shift the oscillation so the stress average no longer cancels
  TorusGrid g = TorusGrid::uniform(1, 16);
  ConvexElasticModel m = perturbed_quadratic_model(1, 0.2);
  ElasticState fine = oscillatory_initial_data(g, 0.5, 2);
  for (double& x : fine.F.values()) x += 0.3;  // values 0.8 and -0.2
  CoarseData cd = coarsen(m, fine, 2);
  Eigen::MatrixXd Fp(1, 1), Fm(1, 1), Fbar(1, 1);
  Fp(0, 0) = 0.8;
  Fm(0, 0) = -0.2;
  Fbar(0, 0) = 0.3;
  double expected = 0.5 * (m.DG(Fp)(0, 0) + m.DG(Fm)(0, 0)) - m.DG(Fbar)(0, 0);
  for (std::size_t c = 0; c < cd.defect.grid().cell_count(); ++c)
    CHECK(cd.defect.at(c) == doctest::Approx(expected).epsilon(1e-13));
  // Jensen: surplus of a convex energy is nonnegative
  for (double s : cd.surplus) CHECK(s >= -1e-14);
}

TEST_CASE("measure moments agree with direct fine-grid sums") {
  TorusGrid g = TorusGrid::uniform(2, 8);
  ConvexElasticModel m = quadratic_elastic_model(2);
  ElasticState fine = random_state(g, 9);
  CoarseData cd = coarsen(m, fine, 2);
  cd.measure.validate();
  // <nu, |S|^2> summed against coarse cell volumes equals the fine integral
  std::vector<double> sq = moment_scalar(
      cd.measure,
      [](const Eigen::VectorXd&, const Eigen::MatrixXd& S) { return S.squaredNorm(); });
  double total = 0.0;
  for (double x : sq) total += x;
  total *= cd.mean.F.grid().cell_volume();
  CHECK(total == doctest::Approx(l2_norm(fine.F) * l2_norm(fine.F)).epsilon(1e-12));
  // first moment reproduces the blockwise mean
  TorusField mom = moment_matrix(
      cd.measure,
      [](const Eigen::VectorXd&, const Eigen::MatrixXd& S) { return S; });
  TorusField diff = mom - cd.mean.F;
  CHECK(l2_norm(diff) <= 1e-13);
  TorusField vmom = moment_vector(
      cd.measure,
      [](const Eigen::VectorXd& s, const Eigen::MatrixXd&) { return s; });
  TorusField vdiff = vmom - cd.mean.v;
  CHECK(l2_norm(vdiff) <= 1e-13);
}

TEST_CASE("validation catches broken measures") {
  TorusGrid g = TorusGrid::uniform(1, 4);
  YoungMeasureField mu;
  mu.grid = g;
  mu.atoms.resize(g.cell_count());
  mu.gamma.assign(g.cell_count(), 0.0);
  Eigen::VectorXd s(1);
  s[0] = 0.0;
  Eigen::MatrixXd S(1, 1);
  S(0, 0) = 0.0;
  for (auto& cell : mu.atoms) cell.push_back({1.0, s, S});
  CHECK_NOTHROW(mu.validate());
  mu.atoms[0][0].weight = 0.5;  // breaks normalization
  CHECK_THROWS_AS(mu.validate(), std::invalid_argument);
  mu.atoms[0][0].weight = 1.0;
  mu.gamma[1] = -0.1;
  CHECK_THROWS_AS(mu.validate(), std::invalid_argument);
}

TEST_CASE("merge_atoms combines coincident states") {
  TorusGrid g = TorusGrid::uniform(1, 4);
  YoungMeasureField mu;
  mu.grid = g;
  mu.atoms.resize(g.cell_count());
  mu.gamma.assign(g.cell_count(), 0.0);
  Eigen::VectorXd s(1);
  s[0] = 1.0;
  Eigen::MatrixXd S(1, 1);
  S(0, 0) = 2.0;
  for (auto& cell : mu.atoms) {
    cell.push_back({0.25, s, S});
    cell.push_back({0.25, s, S});
    Eigen::VectorXd s2 = s;
    s2[0] = -1.0;
    cell.push_back({0.5, s2, S});
  }
  mu.merge_atoms();
  for (const auto& cell : mu.atoms) {
    CHECK(cell.size() == 2);
    double w = 0.0;
    for (const auto& a : cell) w += a.weight;
    CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
  }
  mu.validate();
}

TEST_CASE("coarsen rejects non-dividing block sizes") {
  TorusGrid g = TorusGrid::uniform(1, 16);
  ConvexElasticModel m = quadratic_elastic_model(1);
  ElasticState fine = random_state(g, 1);
  CHECK_THROWS_AS(coarsen(m, fine, 3), std::invalid_argument);
  CHECK_THROWS_AS(coarsen(m, fine, 0), std::invalid_argument);
}
