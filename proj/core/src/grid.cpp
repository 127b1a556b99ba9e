#include "thinlayer/grid.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace thinlayer {

IntervalGrid::IntervalGrid(double a, double b, int n) : a_(a), b_(b), n_(n) {
  if (n < 1) throw ParameterError("n", "cell count must be positive, got " + std::to_string(n));
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
    throw ParameterError("interval", "require finite a < b");
  h_ = (b - a) / n;
}

Vector IntervalGrid::nodes() const {
  Vector x(static_cast<Eigen::Index>(size()));
  for (int i = 0; i <= n_; ++i) x[i] = node(i);
  return x;
}

Vector IntervalGrid::trapezoid_weights() const {
  Vector w = Vector::Constant(static_cast<Eigen::Index>(size()), h_);
  w[0] = w[n_] = 0.5 * h_;
  return w;
}

SplitGrid::SplitGrid(int left_cells, int right_cells)
    : left_(-1.0, 0.0, left_cells), right_(0.0, 1.0, right_cells) {}

Vector SplitGrid::trapezoid_weights() const {
  Vector w(static_cast<Eigen::Index>(size()));
  w << left_.trapezoid_weights(), right_.trapezoid_weights();
  return w;
}

GridFunction::GridFunction(IntervalGrid grid, Vector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != std::get<IntervalGrid>(grid_).size())
    throw DimensionMismatch("GridFunction: value count does not match grid node count");
}

GridFunction::GridFunction(SplitGrid grid, Vector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != std::get<SplitGrid>(grid_).size())
    throw DimensionMismatch("GridFunction: value count does not match split grid node count");
}

GridFunction GridFunction::lift(const SplitGrid& grid, double minus, double plus) {
  Vector v(static_cast<Eigen::Index>(grid.size()));
  v.head(grid.left_size()).setConstant(minus);
  v.tail(grid.right_size()).setConstant(plus);
  return {grid, std::move(v)};
}

const IntervalGrid& GridFunction::interval_grid() const {
  if (const auto* g = std::get_if<IntervalGrid>(&grid_)) return *g;
  throw DimensionMismatch("GridFunction lives on a split grid, not an interval grid");
}

const SplitGrid& GridFunction::split_grid() const {
  if (const auto* g = std::get_if<SplitGrid>(&grid_)) return *g;
  throw DimensionMismatch("GridFunction lives on an interval grid, not a split grid");
}

double GridFunction::coordinate(int i) const {
  return std::visit([i](const auto& g) { return g.node(i); }, grid_);
}

GridFunction GridFunction::with_values(Vector values) const {
  return std::visit([&](const auto& g) { return GridFunction(g, std::move(values)); }, grid_);
}

Vector GridFunction::left_values() const {
  const auto& g = split_grid();
  return values_.head(g.left_size());
}

Vector GridFunction::right_values() const {
  const auto& g = split_grid();
  return values_.tail(g.right_size());
}

BaseGrid2D::BaseGrid2D(double lx, double ly, int nx, int ny)
    : x_(0.0, lx, nx), y_(0.0, ly, ny) {}

Vector BaseGrid2D::trapezoid_weights() const {
  const Vector wx = x_.trapezoid_weights();
  const Vector wy = y_.trapezoid_weights();
  Vector w(static_cast<Eigen::Index>(size()));
  for (int iy = 0; iy <= ny(); ++iy)
    for (int ix = 0; ix <= nx(); ++ix) w[index(ix, iy)] = wx[ix] * wy[iy];
  return w;
}

LayerField::LayerField(BaseGrid2D base, SplitGrid vertical, Vector values)
    : base_(std::move(base)), vertical_(std::move(vertical)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != base_.size() * vertical_.size())
    throw DimensionMismatch("LayerField: length must equal base nodes x vertical nodes");
}

LayerField::LayerField(BaseGrid2D base, SplitGrid vertical, double fill)
    : base_(std::move(base)),
      vertical_(std::move(vertical)),
      values_(Vector::Constant(static_cast<Eigen::Index>(base_.size() * vertical_.size()), fill)) {}

LayerField LayerField::simple_tensor(const BaseField& f, const GridFunction& g) {
  const SplitGrid& vg = g.split_grid();
  LayerField u(f.grid, vg);
  u.as_matrix() = f.values * g.values().transpose();
  return u;
}

RowMatrix LayerField::unpack() const { return as_matrix(); }

LayerField LayerField::pack(const BaseGrid2D& base, const SplitGrid& vertical, const RowMatrix& m) {
  if (static_cast<std::size_t>(m.rows()) != base.size() ||
      static_cast<std::size_t>(m.cols()) != vertical.size())
    throw DimensionMismatch("LayerField::pack: matrix shape does not match grids");
  LayerField u(base, vertical);
  u.as_matrix() = m;
  return u;
}

BaseField LayerField::slab(int iz) const { return {base_, as_matrix().col(iz)}; }

double trapezoid_integral(const IntervalGrid& grid, const Vector& values) {
  if (static_cast<std::size_t>(values.size()) != grid.size())
    throw DimensionMismatch("trapezoid_integral: size mismatch");
  const int n = grid.cells();
  double s = 0.5 * (values[0] + values[n]);
  for (int i = 1; i < n; ++i) s += values[i];
  return s * grid.h();
}

double trapezoid_integral(const GridFunction& f) {
  return trapezoid_integral(f.interval_grid(), f.values());
}

double trapezoid_integral(const BaseField& f) {
  return f.grid.trapezoid_weights().dot(f.values);
}

double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
double sup_norm(const GridFunction& f) { return sup_norm(f.values()); }
double sup_norm(const BaseField& f) { return sup_norm(f.values); }
double sup_norm(const LayerField& u) { return sup_norm(u.values()); }

double l2_norm(const GridFunction& f) {
  const Vector w = f.is_split() ? f.split_grid().trapezoid_weights()
                                : f.interval_grid().trapezoid_weights();
  return std::sqrt(w.dot(f.values().cwiseAbs2()));
}

double l2_norm(const BaseField& f) {
  return std::sqrt(f.grid.trapezoid_weights().dot(f.values.cwiseAbs2()));
}

double l2_norm(const LayerField& u) {
  const Vector wb = u.base().trapezoid_weights();
  const Vector wz = u.vertical().trapezoid_weights();
  const auto m = u.as_matrix();
  return std::sqrt(wb.dot(m.cwiseAbs2() * wz));
}

namespace {

template <class H, class V>
LayerField tensor_apply_impl(const H& op_h, const V& op_v, const LayerField& u, TensorMode mode) {
  const auto nb = static_cast<Eigen::Index>(u.base_size());
  const auto nv = static_cast<Eigen::Index>(u.vertical_size());
  if (op_h.rows() != nb || op_h.cols() != nb || op_v.rows() != nv || op_v.cols() != nv)
    throw DimensionMismatch("tensor_apply: operator dimensions do not match the field");
  const auto um = u.as_matrix();
  LayerField out(u.base(), u.vertical());
  if (mode == TensorMode::sum) {
    RowMatrix hu = op_h * um;
    RowMatrix uv = um * op_v.transpose();
    out.as_matrix() = hu + uv;
  } else {
    RowMatrix hu = op_h * um;
    out.as_matrix() = hu * op_v.transpose();
  }
  return out;
}

}  // namespace

LayerField tensor_apply(const Matrix& op_h, const Matrix& op_v, const LayerField& u,
                        TensorMode mode) {
  return tensor_apply_impl(op_h, op_v, u, mode);
}

LayerField tensor_apply(const SparseMatrix& op_h, const SparseMatrix& op_v, const LayerField& u,
                        TensorMode mode) {
  return tensor_apply_impl(op_h, op_v, u, mode);
}

void write_csv(std::ostream& os, const GridFunction& f) {
  os << "index,coordinate,value\n" << std::setprecision(17);
  for (int i = 0; i < static_cast<int>(f.size()); ++i)
    os << i << ',' << f.coordinate(i) << ',' << f[i] << '\n';
}

void write_csv(std::ostream& os, const BaseField& f) {
  os << "ix,iy,x,y,value\n" << std::setprecision(17);
  const auto& g = f.grid;
  for (int iy = 0; iy <= g.ny(); ++iy)
    for (int ix = 0; ix <= g.nx(); ++ix)
      os << ix << ',' << iy << ',' << g.x(ix) << ',' << g.y(iy) << ','
         << f.values[g.index(ix, iy)] << '\n';
}

void write_csv(std::ostream& os, const LayerField& u) {
  os << "ix,iy,iz,x,y,z,value\n" << std::setprecision(17);
  const auto& g = u.base();
  const auto& v = u.vertical();
  for (int iy = 0; iy <= g.ny(); ++iy)
    for (int ix = 0; ix <= g.nx(); ++ix)
      for (int iz = 0; iz < static_cast<int>(v.size()); ++iz)
        os << ix << ',' << iy << ',' << iz << ',' << g.x(ix) << ',' << g.y(iy) << ','
           << v.node(iz) << ',' << u.at(g.index(ix, iy), iz) << '\n';
}

}  // namespace thinlayer
