#ifndef GENESOL_TORUS_FIELD_HPP
#define GENESOL_TORUS_FIELD_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace genesol {

enum class Rank { Scalar, Vector, Matrix };

// Uniform cell-centered grid on the flat torus, 1-3 dimensions.
// Fields are indexed modulo the extent along every axis.
struct TorusGrid {
  int dim = 1;
  std::array<int, 3> extent{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  static TorusGrid uniform(int dim, int cells_per_axis, double period = 1.0);

  std::size_t cell_count() const;
  double cell_volume() const;
  double period(int axis) const { return extent[axis] * spacing[axis]; }

  std::size_t index(int i, int j = 0, int k = 0) const;  // wraps
  std::array<int, 3> coords(std::size_t idx) const;
  // Cell-center coordinates.
  std::array<double, 3> center(std::size_t idx) const;
  std::size_t neighbor(std::size_t idx, int axis, int offset) const;

  bool operator==(const TorusGrid& o) const;
};

// Sampled scalar/vector/matrix field, one value block per component,
// component-major layout: values[c * cell_count + cell].
class TorusField {
 public:
  TorusField() = default;
  TorusField(TorusGrid grid, Rank rank);

  static TorusField sample_scalar(
      const TorusGrid& grid,
      const std::function<double(const std::array<double, 3>&)>& f);
  static TorusField sample_vector(
      const TorusGrid& grid,
      const std::function<Eigen::VectorXd(const std::array<double, 3>&)>& f);
  static TorusField sample_matrix(
      const TorusGrid& grid,
      const std::function<Eigen::MatrixXd(const std::array<double, 3>&)>& f);

  const TorusGrid& grid() const { return grid_; }
  Rank rank() const { return rank_; }
  int components() const { return components_; }
  std::size_t cells() const { return grid_.cell_count(); }

  double& operator()(std::size_t cell, int comp = 0);
  double at(std::size_t cell, int comp = 0) const;
  // matrix component index, row-major within the d x d block
  int mat_comp(int i, int j) const { return i * grid_.dim + j; }

  Eigen::VectorXd vector_at(std::size_t cell) const;
  Eigen::MatrixXd matrix_at(std::size_t cell) const;
  void set_vector(std::size_t cell, const Eigen::VectorXd& v);
  void set_matrix(std::size_t cell, const Eigen::MatrixXd& m);

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool all_finite() const;

  TorusField& operator+=(const TorusField& o);
  TorusField& operator-=(const TorusField& o);
  TorusField& operator*=(double s);
  friend TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
  friend TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
  friend TorusField operator*(TorusField a, double s) { return a *= s; }
  friend TorusField operator*(double s, TorusField a) { return a *= s; }

 private:
  TorusGrid grid_;
  Rank rank_ = Rank::Scalar;
  int components_ = 1;
  std::vector<double> values_;
};

// Second-order central differences with periodic wraparound.
// gradient: scalar -> vector, vector -> matrix with (grad f)_ij = df_i/dx_j.
TorusField gradient(const TorusField& f);
// divergence: vector -> scalar, matrix -> vector (row-wise).
TorusField divergence(const TorusField& f);
// curl (dim 3 only): vector per (curl f)_i = eps_ijk d_j f_k,
// matrix per (curl A)_ij = eps_jkl d_k A_il.
TorusField curl(const TorusField& f);
// pointwise cross products: vector x vector, vector x matrix
// ((a x A)_ij = eps_ikl a_k A_lj).
TorusField cross(const TorusField& a, const TorusField& b);

// Midpoint quadrature of a scalar field.
double integrate(const TorusField& f);
// L2 pairing: integral of the componentwise product.
double inner(const TorusField& a, const TorusField& b);
double l2_norm(const TorusField& a);

TorusField shift(const TorusField& f, const std::array<int, 3>& offset);

}  // namespace genesol

#endif
