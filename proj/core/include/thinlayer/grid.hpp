#pragma once

// Grids, grid functions, norms, quadrature and tensor packing shared by all
// solvers. All types are immutable values once constructed.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <iosfwd>
#include <type_traits>
#include <variant>

#include "thinlayer/errors.hpp"

namespace thinlayer {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Side { left, right };

/// Uniform grid with n cells on [a, b].
class IntervalGrid {
 public:
  IntervalGrid(double a, double b, int n);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int cells() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 1; }

  /// Node coordinate; endpoints are returned exactly.
  double node(int i) const noexcept {
    if (i == n_) return b_;
    return a_ + i * h_;
  }
  Vector nodes() const;
  Vector trapezoid_weights() const;

  friend bool operator==(const IntervalGrid&, const IntervalGrid&) = default;

 private:
  double a_;
  double b_;
  int n_;
  double h_;
};

/// [-1, 0-] and [0+, 1] as two non-communicating intervals. The membrane
/// nodes 0- (last left node) and 0+ (first right node) are distinct degrees
/// of freedom.
class SplitGrid {
 public:
  SplitGrid(int left_cells, int right_cells);
  static SplitGrid uniform(int cells_per_side) { return {cells_per_side, cells_per_side}; }

  const IntervalGrid& left() const noexcept { return left_; }
  const IntervalGrid& right() const noexcept { return right_; }
  std::size_t size() const noexcept { return left_.size() + right_.size(); }
  int minus_index() const noexcept { return left_.cells(); }
  int plus_index() const noexcept { return left_.cells() + 1; }
  int right_offset() const noexcept { return left_.cells() + 1; }
  int left_size() const noexcept { return left_.cells() + 1; }
  int right_size() const noexcept { return right_.cells() + 1; }
  Side side(int i) const noexcept { return i <= minus_index() ? Side::left : Side::right; }
  double node(int i) const noexcept {
    return i <= minus_index() ? left_.node(i) : right_.node(i - right_offset());
  }
  Vector trapezoid_weights() const;

  friend bool operator==(const SplitGrid&, const SplitGrid&) = default;

 private:
  IntervalGrid left_;
  IntervalGrid right_;
};

/// Node values over an interval grid or a split grid.
class GridFunction {
 public:
  GridFunction(IntervalGrid grid, Vector values);
  GridFunction(SplitGrid grid, Vector values);

  /// Sample f(x) (or f(x, side) on a split grid) at every node.
  template <class F>
  static GridFunction sample(const IntervalGrid& grid, F&& f) {
    Vector v(static_cast<Eigen::Index>(grid.size()));
    for (int i = 0; i <= grid.cells(); ++i) v[i] = f(grid.node(i));
    return {grid, std::move(v)};
  }
  template <class F>
  static GridFunction sample(const SplitGrid& grid, F&& f) {
    Vector v(static_cast<Eigen::Index>(grid.size()));
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
      if constexpr (std::is_invocable_v<F, double, Side>) {
        v[i] = f(grid.node(i), grid.side(i));
      } else {
        v[i] = f(grid.node(i));
      }
    }
    return {grid, std::move(v)};
  }
  static GridFunction constant(const IntervalGrid& grid, double c) {
    return {grid, Vector::Constant(static_cast<Eigen::Index>(grid.size()), c)};
  }
  static GridFunction constant(const SplitGrid& grid, double c) {
    return {grid, Vector::Constant(static_cast<Eigen::Index>(grid.size()), c)};
  }
  /// Piecewise constant: `minus` on [-1,0-], `plus` on [0+,1].
  static GridFunction lift(const SplitGrid& grid, double minus, double plus);

  bool is_split() const noexcept { return std::holds_alternative<SplitGrid>(grid_); }
  const IntervalGrid& interval_grid() const;
  const SplitGrid& split_grid() const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double coordinate(int i) const;

  const Vector& values() const noexcept { return values_; }
  double operator[](int i) const { return values_[i]; }
  GridFunction with_values(Vector values) const;

  /// Restrictions to the two halves of a split grid.
  Vector left_values() const;
  Vector right_values() const;

 private:
  std::variant<IntervalGrid, SplitGrid> grid_;
  Vector values_;
};

/// Rectangle [0, Lx] x [0, Ly] with a uniform node grid. Base nodes are
/// numbered x-fastest: index = iy * (nx + 1) + ix.
class BaseGrid2D {
 public:
  BaseGrid2D(double lx, double ly, int nx, int ny);

  double lx() const noexcept { return x_.b(); }
  double ly() const noexcept { return y_.b(); }
  int nx() const noexcept { return x_.cells(); }
  int ny() const noexcept { return y_.cells(); }
  double hx() const noexcept { return x_.h(); }
  double hy() const noexcept { return y_.h(); }
  const IntervalGrid& x_grid() const noexcept { return x_; }
  const IntervalGrid& y_grid() const noexcept { return y_; }
  std::size_t size() const noexcept { return x_.size() * y_.size(); }
  int index(int ix, int iy) const noexcept { return iy * (nx() + 1) + ix; }
  double x(int ix) const noexcept { return x_.node(ix); }
  double y(int iy) const noexcept { return y_.node(iy); }
  /// Tensor trapezoid weights over the rectangle.
  Vector trapezoid_weights() const;

  friend bool operator==(const BaseGrid2D&, const BaseGrid2D&) = default;

 private:
  IntervalGrid x_;
  IntervalGrid y_;
};

/// Values on the base rectangle.
struct BaseField {
  BaseGrid2D grid;
  Vector values;

  template <class F>
  static BaseField sample(const BaseGrid2D& g, F&& f) {
    Vector v(static_cast<Eigen::Index>(g.size()));
    for (int iy = 0; iy <= g.ny(); ++iy)
      for (int ix = 0; ix <= g.nx(); ++ix) v[g.index(ix, iy)] = f(g.x(ix), g.y(iy));
    return {g, std::move(v)};
  }
  static BaseField constant(const BaseGrid2D& g, double c) {
    return {g, Vector::Constant(static_cast<Eigen::Index>(g.size()), c)};
  }
};

/// u(x, y, z) over base x vertical. Layout is base-major: the vertical
/// column of base node b occupies values[b * nv, (b + 1) * nv).
class LayerField {
 public:
  LayerField(BaseGrid2D base, SplitGrid vertical, Vector values);
  LayerField(BaseGrid2D base, SplitGrid vertical, double fill = 0.0);

  template <class F>
  static LayerField sample(const BaseGrid2D& base, const SplitGrid& vertical, F&& f) {
    LayerField u(base, vertical);
    const int nv = static_cast<int>(vertical.size());
    for (int iy = 0; iy <= base.ny(); ++iy)
      for (int ix = 0; ix <= base.nx(); ++ix)
        for (int iz = 0; iz < nv; ++iz) {
          const double v = [&] {
            if constexpr (std::is_invocable_v<F, double, double, double, Side>) {
              return f(base.x(ix), base.y(iy), vertical.node(iz), vertical.side(iz));
            } else {
              return f(base.x(ix), base.y(iy), vertical.node(iz));
            }
          }();
          u.values_[static_cast<Eigen::Index>(base.index(ix, iy)) * nv + iz] = v;
        }
    return u;
  }
  /// f(x, y) * g(z).
  static LayerField simple_tensor(const BaseField& f, const GridFunction& g);

  const BaseGrid2D& base() const noexcept { return base_; }
  const SplitGrid& vertical() const noexcept { return vertical_; }
  std::size_t base_size() const noexcept { return base_.size(); }
  std::size_t vertical_size() const noexcept { return vertical_.size(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }
  double at(int b, int iz) const { return values_[static_cast<Eigen::Index>(b) * nv() + iz]; }
  double& at(int b, int iz) { return values_[static_cast<Eigen::Index>(b) * nv() + iz]; }

  /// Unpack to a (base nodes) x (vertical nodes) matrix.
  RowMatrix unpack() const;
  /// Pack a (base nodes) x (vertical nodes) matrix.
  static LayerField pack(const BaseGrid2D& base, const SplitGrid& vertical, const RowMatrix& m);

  Eigen::Map<const RowMatrix> as_matrix() const {
    return {values_.data(), static_cast<Eigen::Index>(base_size()), nv()};
  }
  Eigen::Map<RowMatrix> as_matrix() {
    return {values_.data(), static_cast<Eigen::Index>(base_size()), nv()};
  }

  /// Horizontal slice at vertical node iz.
  BaseField slab(int iz) const;
  Vector column(int b) const { return values_.segment(static_cast<Eigen::Index>(b) * nv(), nv()); }

 private:
  Eigen::Index nv() const noexcept { return static_cast<Eigen::Index>(vertical_.size()); }

  BaseGrid2D base_;
  SplitGrid vertical_;
  Vector values_;
};

// Quadrature and norms.

double trapezoid_integral(const IntervalGrid& grid, const Vector& values);
double trapezoid_integral(const GridFunction& f);
double trapezoid_integral(const BaseField& f);

double sup_norm(const Vector& v);
double sup_norm(const GridFunction& f);
double sup_norm(const BaseField& f);
double sup_norm(const LayerField& u);

/// Trapezoid L2 norms (sum over both intervals on a split grid).
double l2_norm(const GridFunction& f);
double l2_norm(const BaseField& f);
double l2_norm(const LayerField& u);

enum class TensorMode { sum, product };

/// (H (x) I + I (x) V) u or (H (x) V) u without forming the Kronecker product.
LayerField tensor_apply(const Matrix& op_h, const Matrix& op_v, const LayerField& u,
                        TensorMode mode);
LayerField tensor_apply(const SparseMatrix& op_h, const SparseMatrix& op_v,
                        const LayerField& u, TensorMode mode);

// CSV output with 17 significant digits.

void write_csv(std::ostream& os, const GridFunction& f);
void write_csv(std::ostream& os, const BaseField& f);
void write_csv(std::ostream& os, const LayerField& u);

}  // namespace thinlayer
