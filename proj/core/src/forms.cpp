#include "thinlayer/forms.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace thinlayer {

namespace {

// Centered differences inside, second-order one-sided at both ends.
template <class In>
Vector derivative(const In& v, double h) {
  const Eigen::Index n = v.size() - 1;
  Vector d(n + 1);
  if (n == 1) {
    d.setConstant((v[1] - v[0]) / h);
    return d;
  }
  for (Eigen::Index i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  return d;
}

// \int grad u . grad v over the base for two base vectors.
double base_gradient(const BaseGrid2D& g, const Vector& wb, const Vector& u, const Vector& v) {
  const int nx = g.nx();
  const int ny = g.ny();
  Eigen::Map<const RowMatrix> mu(u.data(), ny + 1, nx + 1);
  Eigen::Map<const RowMatrix> mv(v.data(), ny + 1, nx + 1);
  RowMatrix ux(ny + 1, nx + 1), vx(ny + 1, nx + 1), uy(ny + 1, nx + 1), vy(ny + 1, nx + 1);
  for (int iy = 0; iy <= ny; ++iy) {
    ux.row(iy) = derivative(Vector(mu.row(iy).transpose()), g.hx()).transpose();
    vx.row(iy) = derivative(Vector(mv.row(iy).transpose()), g.hx()).transpose();
  }
  for (int ix = 0; ix <= nx; ++ix) {
    uy.col(ix) = derivative(Vector(mu.col(ix)), g.hy());
    vy.col(ix) = derivative(Vector(mv.col(ix)), g.hy());
  }
  const RowMatrix prod = ux.cwiseProduct(vx) + uy.cwiseProduct(vy);
  return wb.dot(Eigen::Map<const Vector>(prod.data(), prod.size()));
}

void check_field(const FormContext& ctx, const LayerField& u) {
  if (!(u.base() == ctx.base) || !(u.vertical() == ctx.vertical))
    throw DimensionMismatch("form: field grids differ from the form context");
}

double surface(const FormContext& ctx, const LayerField& u, const LayerField& v) {
  const Vector wb = ctx.base.trapezoid_weights();
  const SplitGrid& g = ctx.vertical;
  const int lo = 0;
  const int up = static_cast<int>(g.size()) - 1;
  const int m = g.minus_index();
  const int p = g.plus_index();
  const auto nb = static_cast<int>(ctx.base.size());
  double s = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double term = ctx.coeff.c_minus.values[b] * u.at(b, lo) * v.at(b, lo) +
                        ctx.coeff.c_plus.values[b] * u.at(b, up) * v.at(b, up) +
                        ctx.coeff.beta.values[b] * (u.at(b, p) - u.at(b, m)) * v.at(b, p) +
                        ctx.coeff.alpha.values[b] * (u.at(b, m) - u.at(b, p)) * v.at(b, m);
    s += wb[b] * term;
  }
  return s;
}

}  // namespace

BaseField FormContext::trace_up(const LayerField& u) const {
  return u.slab(static_cast<int>(vertical.size()) - 1);
}
BaseField FormContext::trace_lo(const LayerField& u) const { return u.slab(0); }
BaseField FormContext::trace_plus(const LayerField& u) const { return u.slab(vertical.plus_index()); }
BaseField FormContext::trace_minus(const LayerField& u) const { return u.slab(vertical.minus_index()); }

FormParts form_parts(const FormContext& ctx, const LayerField& u, const LayerField& v) {
  check_field(ctx, u);
  check_field(ctx, v);
  FormParts parts;
  const Vector wb = ctx.base.trapezoid_weights();
  const Vector wz = ctx.vertical.trapezoid_weights();
  const auto nv = static_cast<int>(ctx.vertical.size());
  const auto nb = static_cast<int>(ctx.base.size());
  const auto mu = u.as_matrix();
  const auto mv = v.as_matrix();

  for (int iz = 0; iz < nv; ++iz)
    parts.gxy += wz[iz] * base_gradient(ctx.base, wb, Vector(mu.col(iz)), Vector(mv.col(iz)));

  const int nl = ctx.vertical.left_size();
  const int nr = ctx.vertical.right_size();
  const double hl = ctx.vertical.left().h();
  const double hr = ctx.vertical.right().h();
  for (int b = 0; b < nb; ++b) {
    const Vector cu = mu.row(b).transpose();
    const Vector cv = mv.row(b).transpose();
    const Vector ul = derivative(cu.head(nl), hl);
    const Vector vl = derivative(cv.head(nl), hl);
    const Vector ur = derivative(cu.tail(nr), hr);
    const Vector vr = derivative(cv.tail(nr), hr);
    const double col = wz.head(nl).dot(ul.cwiseProduct(vl)) + wz.tail(nr).dot(ur.cwiseProduct(vr));
    parts.gz += wb[b] * col;
  }
  parts.surface = surface(ctx, u, v);
  return parts;
}

double form_a_eps(const FormContext& ctx, const LayerField& u, const LayerField& v) {
  const FormParts f = form_parts(ctx, u, v);
  return f.gxy + f.gz / (ctx.eps * ctx.eps) + f.surface;
}

std::complex<double> form_a_eps(const FormContext& ctx, const ComplexLayerField& u,
                                const ComplexLayerField& v) {
  const double rr = form_a_eps(ctx, u.re, v.re);
  const double ii = form_a_eps(ctx, u.im, v.im);
  const double ir = form_a_eps(ctx, u.im, v.re);
  const double ri = form_a_eps(ctx, u.re, v.im);
  return {rr + ii, ir - ri};
}

std::complex<double> form_a_eps(const FormContext& ctx, const ComplexLayerField& u) {
  const FormParts rr = form_parts(ctx, u.re, u.re);
  const FormParts ii = form_parts(ctx, u.im, u.im);
  const double re = (rr.gxy + ii.gxy) + (rr.gz + ii.gz) / (ctx.eps * ctx.eps) + (rr.surface + ii.surface);
  const double im = surface(ctx, u.im, u.re) - surface(ctx, u.re, u.im);
  return {re, im};
}

LayerOperator form_operator(const FormContext& ctx) {
  MembraneParams prm;  // p = q = 0, mu = nu = delta_0
  return {ctx.base, ctx.vertical, prm, ctx.coeff, ctx.eps};
}

DualityReport duality_check(const FormContext& ctx, const LayerField& u, const LayerField& v) {
  const LayerOperator op = form_operator(ctx);
  const LayerField au = op.apply(u);
  const Vector wb = ctx.base.trapezoid_weights();
  const Vector wz = ctx.vertical.trapezoid_weights();
  DualityReport r;
  r.pairing = wb.dot(au.as_matrix().cwiseProduct(v.as_matrix()) * wz);
  r.form = form_a_eps(ctx, u, v);
  r.residual = std::abs(r.form + r.pairing);
  return r;
}

SectorialityReport sectoriality_scan(const FormContext& ctx, int samples, std::uint64_t seed,
                                     const std::vector<double>& eps_list, double gamma_cap) {
  if (samples < 1) throw ParameterError("samples", "need at least one sample");
  if (eps_list.empty()) throw ParameterError("eps", "need at least one eps value");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double pi = std::numbers::pi;

  auto smooth = [&]() {
    const int kx = static_cast<int>(rng() % 4);
    const int ky = static_cast<int>(rng() % 4);
    const double a = gauss(rng);
    const double c[6] = {gauss(rng), gauss(rng), gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    const double lx = ctx.base.lx();
    const double ly = ctx.base.ly();
    return LayerField::sample(ctx.base, ctx.vertical, [&](double x, double y, double z, Side s) {
      const double h = a * std::cos(kx * pi * x / lx) * std::cos(ky * pi * y / ly);
      const double* k = s == Side::left ? c : c + 3;
      return h * (k[0] + k[1] * z + k[2] * z * z);
    });
  };
  auto noise = [&]() {
    LayerField f(ctx.base, ctx.vertical);
    for (Eigen::Index i = 0; i < f.values().size(); ++i) f.values()[i] = unif(rng);
    return f;
  };

  std::vector<ComplexLayerField> fields;
  fields.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    if (s % 2 == 0) {
      LayerField re = noise();
      LayerField im = noise();
      fields.push_back({std::move(re), std::move(im)});
    } else {
      LayerField re = smooth();
      LayerField im = smooth();
      fields.push_back({std::move(re), std::move(im)});
    }
  }

  SectorialityReport rep;
  rep.samples = samples;
  rep.eps = eps_list;
  std::vector<std::vector<std::complex<double>>> values;
  std::vector<double> norms;
  for (const auto& f : fields) {
    const double n = l2_norm(f.re);
    const double m = l2_norm(f.im);
    norms.push_back(n * n + m * m);
  }
  FormContext c = ctx;
  for (double eps : eps_list) {
    c.eps = eps;
    double g = 0.0;
    std::vector<std::complex<double>> vals;
    for (int s = 0; s < samples; ++s) {
      const auto a = form_a_eps(c, fields[static_cast<std::size_t>(s)]);
      vals.push_back(a);
      const double need = (std::abs(a.imag()) - a.real()) / norms[static_cast<std::size_t>(s)];
      if (need > g) {
        g = need;
        if (g > gamma_cap && rep.witness < 0) rep.witness = s;
      }
    }
    rep.gamma_by_eps.push_back(g);
    rep.gamma = std::max(rep.gamma, g);
    values.push_back(std::move(vals));
  }
  rep.eps_uniform = true;
  for (double g : rep.gamma_by_eps)
    if (g > rep.gamma_by_eps.front()) rep.eps_uniform = false;
  rep.certified = rep.witness < 0;
  const double gam = rep.gamma * (1.0 + 1e-12) + 1e-300;
  for (const auto& vals : values)
    for (int s = 0; s < samples; ++s) {
      const auto a = vals[static_cast<std::size_t>(s)];
      if (std::abs(a.imag()) > a.real() + gam * norms[static_cast<std::size_t>(s)]) rep.certified = false;
    }
  return rep;
}

double limit_form(const FormContext& ctx, const LimitState& u, const LimitState& v) {
  const Vector wb = ctx.base.trapezoid_weights();
  const CoefficientFields& k = ctx.coeff;
  double s = base_gradient(ctx.base, wb, u.u_minus.values, v.u_minus.values) +
             base_gradient(ctx.base, wb, u.u_plus.values, v.u_plus.values);
  const Vector& um = u.u_minus.values;
  const Vector& up = u.u_plus.values;
  const Vector& vm = v.u_minus.values;
  const Vector& vp = v.u_plus.values;
  s += wb.dot(k.c_minus.values.cwiseProduct(um).cwiseProduct(vm));
  s += wb.dot(k.c_plus.values.cwiseProduct(up).cwiseProduct(vp));
  s += wb.dot(k.alpha.values.cwiseProduct(um - up).cwiseProduct(vm));
  s += wb.dot(k.beta.values.cwiseProduct(up - um).cwiseProduct(vp));
  return s;
}

}  // namespace thinlayer
