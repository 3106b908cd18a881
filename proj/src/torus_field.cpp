#include "genesol/torus_field.hpp"

#include <cmath>
#include <stdexcept>

namespace genesol {

namespace {

int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

constexpr int kLevi[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};

}  // namespace

TorusGrid TorusGrid::uniform(int dim, int cells_per_axis, double period) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("TorusGrid: dim must be 1..3");
  if (cells_per_axis < 4)
    throw std::invalid_argument("TorusGrid: extent must be >= 4 per axis");
  if (period <= 0.0) throw std::invalid_argument("TorusGrid: period must be positive");
  TorusGrid g;
  g.dim = dim;
  for (int a = 0; a < dim; ++a) {
    g.extent[a] = cells_per_axis;
    g.spacing[a] = period / cells_per_axis;
  }
  for (int a = dim; a < 3; ++a) {
    g.extent[a] = 1;
    g.spacing[a] = 1.0;
  }
  return g;
}

std::size_t TorusGrid::cell_count() const {
  return static_cast<std::size_t>(extent[0]) * extent[1] * extent[2];
}

double TorusGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing[a];
  return v;
}

std::size_t TorusGrid::index(int i, int j, int k) const {
  i = wrap(i, extent[0]);
  j = wrap(j, extent[1]);
  k = wrap(k, extent[2]);
  return (static_cast<std::size_t>(k) * extent[1] + j) * extent[0] + i;
}

std::array<int, 3> TorusGrid::coords(std::size_t idx) const {
  int i = static_cast<int>(idx % extent[0]);
  int j = static_cast<int>((idx / extent[0]) % extent[1]);
  int k = static_cast<int>(idx / (static_cast<std::size_t>(extent[0]) * extent[1]));
  return {i, j, k};
}

std::array<double, 3> TorusGrid::center(std::size_t idx) const {
  auto c = coords(idx);
  return {(c[0] + 0.5) * spacing[0], (c[1] + 0.5) * spacing[1],
          (c[2] + 0.5) * spacing[2]};
}

std::size_t TorusGrid::neighbor(std::size_t idx, int axis, int offset) const {
  auto c = coords(idx);
  c[axis] += offset;
  return index(c[0], c[1], c[2]);
}

bool TorusGrid::operator==(const TorusGrid& o) const {
  return dim == o.dim && extent == o.extent && spacing == o.spacing;
}

TorusField::TorusField(TorusGrid grid, Rank rank) : grid_(grid), rank_(rank) {
  switch (rank) {
    case Rank::Scalar: components_ = 1; break;
    case Rank::Vector: components_ = grid_.dim; break;
    case Rank::Matrix: components_ = grid_.dim * grid_.dim; break;
  }
  values_.assign(static_cast<std::size_t>(components_) * grid_.cell_count(), 0.0);
}

TorusField TorusField::sample_scalar(
    const TorusGrid& grid,
    const std::function<double(const std::array<double, 3>&)>& f) {
  TorusField out(grid, Rank::Scalar);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) out(c, 0) = f(grid.center(c));
  return out;
}

TorusField TorusField::sample_vector(
    const TorusGrid& grid,
    const std::function<Eigen::VectorXd(const std::array<double, 3>&)>& f) {
  TorusField out(grid, Rank::Vector);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) out.set_vector(c, f(grid.center(c)));
  return out;
}

TorusField TorusField::sample_matrix(
    const TorusGrid& grid,
    const std::function<Eigen::MatrixXd(const std::array<double, 3>&)>& f) {
  TorusField out(grid, Rank::Matrix);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) out.set_matrix(c, f(grid.center(c)));
  return out;
}

double& TorusField::operator()(std::size_t cell, int comp) {
  return values_[static_cast<std::size_t>(comp) * cells() + cell];
}

double TorusField::at(std::size_t cell, int comp) const {
  return values_[static_cast<std::size_t>(comp) * cells() + cell];
}

Eigen::VectorXd TorusField::vector_at(std::size_t cell) const {
  Eigen::VectorXd v(components_);
  for (int c = 0; c < components_; ++c) v[c] = at(cell, c);
  return v;
}

Eigen::MatrixXd TorusField::matrix_at(std::size_t cell) const {
  const int d = grid_.dim;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = at(cell, mat_comp(i, j));
  return m;
}

void TorusField::set_vector(std::size_t cell, const Eigen::VectorXd& v) {
  for (int c = 0; c < components_; ++c) (*this)(cell, c) = v[c];
}

void TorusField::set_matrix(std::size_t cell, const Eigen::MatrixXd& m) {
  const int d = grid_.dim;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) (*this)(cell, mat_comp(i, j)) = m(i, j);
}

bool TorusField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

TorusField& TorusField::operator+=(const TorusField& o) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

TorusField& TorusField::operator-=(const TorusField& o) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

TorusField& TorusField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

namespace {

// central difference of component `comp` along `axis`
double diff(const TorusField& f, std::size_t cell, int comp, int axis) {
  const auto& g = f.grid();
  return (f.at(g.neighbor(cell, axis, +1), comp) -
          f.at(g.neighbor(cell, axis, -1), comp)) /
         (2.0 * g.spacing[axis]);
}

}  // namespace

TorusField gradient(const TorusField& f) {
  const auto& g = f.grid();
  const int d = g.dim;
  if (f.rank() == Rank::Scalar) {
    TorusField out(g, Rank::Vector);
    for (std::size_t c = 0; c < f.cells(); ++c)
      for (int j = 0; j < d; ++j) out(c, j) = diff(f, c, 0, j);
    return out;
  }
  if (f.rank() == Rank::Vector) {
    TorusField out(g, Rank::Matrix);
    for (std::size_t c = 0; c < f.cells(); ++c)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(c, out.mat_comp(i, j)) = diff(f, c, i, j);
    return out;
  }
  throw std::invalid_argument("gradient: unsupported rank (matrix)");
}

TorusField divergence(const TorusField& f) {
  const auto& g = f.grid();
  const int d = g.dim;
  if (f.rank() == Rank::Vector) {
    TorusField out(g, Rank::Scalar);
    for (std::size_t c = 0; c < f.cells(); ++c) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += diff(f, c, i, i);
      out(c, 0) = s;
    }
    return out;
  }
  if (f.rank() == Rank::Matrix) {
    TorusField out(g, Rank::Vector);
    for (std::size_t c = 0; c < f.cells(); ++c)
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += diff(f, c, i * d + j, j);
        out(c, i) = s;
      }
    return out;
  }
  throw std::invalid_argument("divergence: unsupported rank (scalar)");
}

TorusField curl(const TorusField& f) {
  const auto& g = f.grid();
  if (g.dim != 3) throw std::invalid_argument("curl: requires dim = 3");
  const int d = 3;
  if (f.rank() == Rank::Vector) {
    TorusField out(g, Rank::Vector);
    for (std::size_t c = 0; c < f.cells(); ++c)
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            if (kLevi[i][j][k] != 0) s += kLevi[i][j][k] * diff(f, c, k, j);
        out(c, i) = s;
      }
    return out;
  }
  if (f.rank() == Rank::Matrix) {
    TorusField out(g, Rank::Matrix);
    for (std::size_t c = 0; c < f.cells(); ++c)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
              if (kLevi[j][k][l] != 0) s += kLevi[j][k][l] * diff(f, c, i * d + l, k);
          out(c, out.mat_comp(i, j)) = s;
        }
    return out;
  }
  throw std::invalid_argument("curl: unsupported rank (scalar)");
}

TorusField cross(const TorusField& a, const TorusField& b) {
  const auto& g = a.grid();
  if (g.dim != 3) throw std::invalid_argument("cross: requires dim = 3");
  if (a.rank() != Rank::Vector) throw std::invalid_argument("cross: first arg must be a vector");
  const int d = 3;
  if (b.rank() == Rank::Vector) {
    TorusField out(g, Rank::Vector);
    for (std::size_t c = 0; c < a.cells(); ++c)
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            if (kLevi[i][j][k] != 0) s += kLevi[i][j][k] * a.at(c, j) * b.at(c, k);
        out(c, i) = s;
      }
    return out;
  }
  if (b.rank() == Rank::Matrix) {
    TorusField out(g, Rank::Matrix);
    for (std::size_t c = 0; c < a.cells(); ++c)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
              if (kLevi[i][k][l] != 0)
                s += kLevi[i][k][l] * a.at(c, k) * b.at(c, l * d + j);
          out(c, out.mat_comp(i, j)) = s;
        }
    return out;
  }
  throw std::invalid_argument("cross: unsupported rank combination");
}

double integrate(const TorusField& f) {
  if (f.rank() != Rank::Scalar)
    throw std::invalid_argument("integrate: scalar fields only");
  double s = 0.0;
  for (std::size_t c = 0; c < f.cells(); ++c) s += f.at(c, 0);
  return s * f.grid().cell_volume();
}

double inner(const TorusField& a, const TorusField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw std::invalid_argument("inner: incompatible fields");
  double s = 0.0;
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  return s * a.grid().cell_volume();
}

double l2_norm(const TorusField& a) { return std::sqrt(inner(a, a)); }

TorusField shift(const TorusField& f, const std::array<int, 3>& offset) {
  TorusField out(f.grid(), f.rank());
  const auto& g = f.grid();
  for (std::size_t c = 0; c < f.cells(); ++c) {
    auto co = g.coords(c);
    std::size_t src = g.index(co[0] - offset[0], co[1] - offset[1], co[2] - offset[2]);
    for (int comp = 0; comp < f.components(); ++comp) out(c, comp) = f.at(src, comp);
  }
  return out;
}

}  // namespace genesol
