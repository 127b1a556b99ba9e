#include "commands.hpp"

#include <algorithm>
#include <complex>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "thinlayer/thinlayer.hpp"

namespace thinlayer::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Summary-line precision; artifacts use num().
std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Shared parameter readers.

MeasureSpec read_measure(const Params& p, const std::string& key, double lo, double hi) {
  if (!p.has(key)) return MeasureSpec::dirac(lo, hi, 0.0);
  const auto& v = p.raw().at(key);
  if (v.is_string()) {
    if (v == "uniform") return MeasureSpec::uniform(lo, hi);
    if (v == "delta0") return MeasureSpec::dirac(lo, hi, 0.0);
  } else if (v.is_object() && v.contains("dirac") && v.at("dirac").is_number()) {
    const double x = v.at("dirac").get<double>();
    if (x < lo || x > hi) throw ParameterError(key, "dirac location outside its side");
    return MeasureSpec::dirac(lo, hi, x);
  }
  throw ParameterError(key, "expected \"uniform\", \"delta0\" or {\"dirac\": x}");
}

MembraneParams read_membrane(const Params& p) {
  MembraneParams m;
  m.p = p.number_in("p", 0.0, 0.0, 1.0);
  m.q = p.number_in("q", 0.0, 0.0, 1.0);
  m.alpha = p.nonnegative("alpha", 0.0);
  m.beta = p.nonnegative("beta", 0.0);
  m.mu = read_measure(p, "mu", -1.0, 0.0);
  m.nu = read_measure(p, "nu", 0.0, 1.0);
  return m;
}

GridFunction interval_preset(const IntervalGrid& g, const std::string& key, const std::string& name) {
  if (name == "smooth")
    return GridFunction::sample(g, [](double x) { return std::exp(-x) * std::cos(2.0 * x) + x * x; });
  if (name == "cosine") return GridFunction::sample(g, [](double x) { return std::cos(kPi * x); });
  if (name == "constant") return GridFunction::constant(g, 1.0);
  if (name == "corner") return GridFunction::sample(g, [](double x) { return x < 0.1 ? 1.0 : 0.0; });
  throw ParameterError(key, "unknown preset '" + name + "' (smooth, cosine, constant, corner or a .csv file)");
}

// Reads a vertical grid-function CSV (index,coordinate,value) onto g.
GridFunction interval_csv(const IntervalGrid& g, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  std::vector<double> values;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(ss, field, ',')) cols.push_back(field);
    if (cols.size() != 3) throw ParameterError("g", "CSV rows must be index,coordinate,value");
    try {
      values.push_back(std::stod(cols[2]));
    } catch (const std::exception&) {
      throw ParameterError("g", "unreadable value '" + cols[2] + "'");
    }
  }
  if (values.size() != g.size())
    throw ParameterError("g", "CSV has " + std::to_string(values.size()) + " rows, grid has " +
                                  std::to_string(g.size()) + " nodes");
  return GridFunction(g, Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
}

GridFunction interval_data(const IntervalGrid& g, const Params& p, const std::string& key) {
  const std::string name = p.text(key, "smooth");
  if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") return interval_csv(g, name);
  return interval_preset(g, key, name);
}

GridFunction split_data(const SplitGrid& g, const Params& p) {
  const std::string name = p.choice("data", "smooth", {"smooth", "lift", "constant"});
  if (name == "lift") return GridFunction::lift(g, 1.0, 0.0);
  if (name == "constant") return GridFunction::constant(g, 1.0);
  return GridFunction::sample(g, [](double z, Side s) {
    return s == Side::left ? std::cos(2.0 * z) + z : 0.5 - z * z;
  });
}

Scheme read_scheme(const Params& p, const std::string& key, const std::string& fallback) {
  const std::string s = p.choice(key, fallback, {"implicit_euler", "crank_nicolson", "exact"});
  if (s == "crank_nicolson") return Scheme::crank_nicolson;
  if (s == "exact") return Scheme::exact;
  return Scheme::implicit_euler;
}

ReactionTerm read_reaction(const Params& p) {
  const std::string r = p.choice("reaction", "zero", {"zero", "linear", "logistic"});
  if (r == "linear") return ReactionTerm::linear(p.number("slope", -1.0));
  if (r == "logistic") return ReactionTerm::clipped_logistic();
  return ReactionTerm::zero();
}

struct LayerSetup {
  BaseGrid2D base;
  SplitGrid vertical;
  MembraneParams params;
  CoefficientFields coeff;
};

LayerSetup read_layer(const Params& p) {
  const double lx = p.positive("Lx", 1.0);
  const double ly = p.positive("Ly", 1.0);
  BaseGrid2D base(lx, ly, p.integer("nx", 10, 1), p.integer("ny", 10, 1));
  SplitGrid vertical = SplitGrid::uniform(p.integer("nz", 16, 1));
  MembraneParams prm = read_membrane(p);
  auto coeff = CoefficientFields::constant(base, p.number("cminus", 0.0), p.number("cplus", 0.0), prm.alpha,
                                           prm.beta);
  return {base, vertical, prm, coeff};
}

LayerField layer_initial(const LayerSetup& s, const Params& p) {
  const std::string name = p.choice("u0", "smooth", {"smooth", "constant", "flat"});
  if (name == "constant") return LayerField(s.base, s.vertical, 1.0);
  const double lx = s.base.lx();
  const double ly = s.base.ly();
  if (name == "flat")
    return LayerField::sample(s.base, s.vertical, [&](double x, double y, double) {
      return std::cos(kPi * x / lx) * std::cos(kPi * y / ly);
    });
  return LayerField::sample(s.base, s.vertical, [&](double x, double y, double z) {
    return std::cos(kPi * x / lx) * (1.0 + z) + (y / ly) * (y / ly) + std::sin(2.0 * z);
  });
}

// Subcommands.

Artifact sticky_resolvent(const Params& p, const std::string&) {
  const double r = p.number_in("r", 0.5, 0.0, 1.0);
  const double lambda = p.positive("lambda", 1.0);
  IntervalGrid g(0.0, 1.0, p.integer("n", 200, 2));
  const auto data = interval_data(g, p, "g");
  const auto closed = resolvent_closed_form(r, lambda, data);
  const auto discrete = resolvent_discrete(assemble_sticky(r, g), lambda, data);
  std::ostringstream os;
  os << "index,coordinate,closed_form,discrete\n";
  Series a{"closed form", {}, {}}, b{"discrete", {}, {}};
  for (int i = 0; i < static_cast<int>(g.size()); ++i) {
    os << i << ',' << num(g.node(i)) << ',' << num(closed[i]) << ',' << num(discrete[i]) << '\n';
    a.x.push_back(g.node(i));
    a.y.push_back(closed[i]);
    b.x.push_back(g.node(i));
    b.y.push_back(discrete[i]);
  }
  const double gap = (closed.values() - discrete.values()).cwiseAbs().maxCoeff();
  Artifact out{os.str(), false, "sticky resolvent r=" + brief(r) + " lambda=" + brief(lambda) + " max gap " + brief(gap), {}};
  out.chart = Chart{"sticky resolvent", "x", "f(x)", false, false, {a, b}};
  return out;
}

Artifact sticky_decay(const Params& p, const std::string&) {
  const double r = p.number_in("r", 0.5, 0.0, 1.0);
  const double tmax = p.positive("tmax", 1.0);
  const int samples = p.integer("samples", 20, 2);
  IntervalGrid g(0.0, 1.0, p.integer("n", 100, 2));
  DecayOptions opts{p.positive("dt", 1e-3), read_scheme(p, "scheme", "implicit_euler")};
  std::vector<double> times;
  for (int k = 1; k <= samples; ++k) times.push_back(tmax * k / samples);
  const auto fit = decay_to_equilibrium(assemble_sticky(r, g), interval_data(g, p, "f0"), times, opts);
  std::ostringstream os;
  os << "t,error\n";
  for (std::size_t k = 0; k < fit.times.size(); ++k) os << num(fit.times[k]) << ',' << num(fit.errors[k]) << '\n';
  Artifact out{os.str(), false, "sticky decay r=" + brief(r) + " fitted omega " + brief(fit.omega), {}};
  out.chart = Chart{"distance to equilibrium", "t", "error", false, true, {{"r=" + brief(r), fit.times, fit.errors}}};
  return out;
}

Artifact membrane_sweep(const Params& p, const std::string&) {
  const MembraneParams prm = read_membrane(p);
  const double t = p.positive("t", 0.5);
  const auto eps = p.eps_list("epsList", {0.2, 0.1, 0.05, 0.025});
  SplitGrid g = SplitGrid::uniform(p.integer("n", 100, 2));
  const bool record = p.flag("record_runtime", false);
  const auto rows = kurtz_sweep(prm, split_data(g, p), t, eps, {read_scheme(p, "scheme", "implicit_euler")});
  std::ostringstream os;
  os << "eps,error,runtime_ms\n";
  Series s{"sup error", {}, {}};
  for (const auto& row : rows) {
    os << num(row.eps) << ',' << num(row.error) << ',' << num(record ? row.runtime_ms : 0.0) << '\n';
    s.x.push_back(row.eps);
    s.y.push_back(row.error);
  }
  Artifact out{os.str(), false,
               "membrane sweep " + std::to_string(rows.size()) + " eps values, error " + brief(rows.front().error) +
                   " -> " + brief(rows.back().error),
               {}};
  out.chart = Chart{"singular limit error", "eps", "error", true, true, {s}};
  return out;
}

Artifact layer_evolve_cmd(const Params& p, const std::string&) {
  const auto setup = read_layer(p);
  const double eps = p.number_in("eps", 1.0, 0.0, 1.0, true);
  const double t = p.nonnegative("t", 0.1);
  const double dt = p.positive("dt", 1e-3);
  const SplitMode mode = p.choice("mode", "strang", {"strang", "factored"}) == "factored" ? SplitMode::factored
                                                                                          : SplitMode::strang;
  const auto reaction = read_reaction(p);
  reaction.check();
  LayerOperator op(setup.base, setup.vertical, setup.params, setup.coeff, eps);
  const auto u0 = layer_initial(setup, p);
  const auto u = p.text("reaction", "zero") == "zero" ? layer_evolve(op, u0, t, dt, mode)
                                                          : semilinear_evolve(op, u0, t, dt, reaction, mode);
  std::ostringstream os;
  write_csv(os, u);
  return {os.str(), false, "layer evolve to t=" + brief(t) + " sup " + brief(sup_norm(u)), {}};
}

Artifact compare_cmd(const Params& p, const std::string&) {
  const auto setup = read_layer(p);
  CompareConfig cfg{setup.base, setup.vertical, setup.params, setup.coeff};
  cfg.projection = p.choice("projection", "ppq", {"ppq", "average"}) == "average" ? ProjectionKind::average
                                                                                  : ProjectionKind::ppq;
  cfg.dt = p.positive("dt", 1e-3);
  cfg.mode = p.choice("mode", "strang", {"strang", "factored"}) == "factored" ? SplitMode::factored
                                                                              : SplitMode::strang;
  cfg.reaction = read_reaction(p);
  cfg.t_min = p.number("t_min", -1.0);
  const double t = p.positive("t", 0.5);
  const auto eps = p.eps_list("epsList", {0.2, 0.1, 0.05, 0.025});
  const bool record = p.flag("record_runtime", false);
  const auto rows = compare_full_vs_limit(cfg, layer_initial(setup, p), t, eps);
  std::ostringstream os;
  os << "eps,t,sup_gap,l2_gap,runtime_ms\n";
  Series s{"sup gap", {}, {}}, l{"L2 gap", {}, {}};
  for (const auto& row : rows) {
    os << num(row.eps) << ',' << num(row.t) << ',' << num(row.sup_gap) << ',' << num(row.l2_gap) << ','
       << num(record ? row.runtime_ms : 0.0) << '\n';
    s.x.push_back(row.eps);
    s.y.push_back(row.sup_gap);
    l.x.push_back(row.eps);
    l.y.push_back(row.l2_gap);
  }
  Artifact out{os.str(), false,
               "compare " + std::to_string(rows.size()) + " eps values, sup gap " + brief(rows.front().sup_gap) +
                   " -> " + brief(rows.back().sup_gap),
               {}};
  out.chart = Chart{"full layer vs limit system", "eps", "gap", true, true, {s, l}};
  return out;
}

FormContext form_context(const Params& p, int n) {
  BaseGrid2D base(1.0, 1.0, n, n);
  auto coeff = CoefficientFields::constant(base, p.number("cminus", 0.0), p.number("cplus", 0.0),
                                           p.nonnegative("alpha", 1.0), p.nonnegative("beta", 0.5));
  return {base, SplitGrid::uniform(n), coeff, 1.0};
}

// Re a_eps grows as eps falls and Im a_eps does not move, on random fields.
bool form_monotone(FormContext ctx, std::vector<double> eps, int samples, std::uint64_t seed) {
  std::sort(eps.begin(), eps.end(), std::greater<>());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    ComplexLayerField u{LayerField(ctx.base, ctx.vertical), LayerField(ctx.base, ctx.vertical)};
    for (Eigen::Index i = 0; i < u.re.values().size(); ++i) {
      u.re.values()[i] = unif(rng);
      u.im.values()[i] = unif(rng);
    }
    std::complex<double> prev;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      ctx.eps = eps[k];
      const auto a = form_a_eps(ctx, u);
      if (k > 0 && (a.imag() != prev.imag() || a.real() < prev.real())) return false;
      prev = a;
    }
  }
  return true;
}

Artifact forms_check(const Params& p, const std::string& config_hash) {
  const int n = p.integer("n", 8, 2);
  const int samples = p.integer("samples", 200, 1);
  const std::uint64_t seed = p.seed(42);
  const auto eps = p.eps_list("epsList", {1.0, 0.5, 0.1});
  const auto levels = p.integers("levels", {8, 16, 32}, 2);
  FormContext ctx = form_context(p, n);
  ctx.eps = eps.front();
  const auto rep = sectoriality_scan(ctx, samples, seed, eps);
  std::vector<double> residuals;
  for (int m : levels) {
    FormContext c = form_context(p, m);
    c.eps = eps.front();
    auto u = LayerField::sample(c.base, c.vertical, [](double x, double y, double z) {
      return std::cos(x) * std::sin(y + z) + z * z;
    });
    auto v = LayerField::sample(c.base, c.vertical, [](double x, double y, double z) { return std::exp(x * y) - z; });
    residuals.push_back(duality_check(c, u, v).residual);
  }
  const bool monotone = form_monotone(ctx, eps, samples, seed);
  nlohmann::ordered_json j;
  j["gamma"] = rep.gamma;
  j["gamma_by_eps"] = rep.gamma_by_eps;
  j["certified"] = rep.certified;
  j["eps"] = eps;
  j["duality_levels"] = levels;
  j["duality_residuals"] = residuals;
  j["monotonicity_ok"] = monotone;
  j["samples"] = samples;
  j["seed"] = seed;
  j["thinlayer"] = thinlayer::version;
  j["config_hash"] = config_hash;
  Artifact out{j.dump(2) + "\n", true,
               "forms check gamma " + brief(rep.gamma) + (rep.certified ? " certified" : " NOT certified") +
                   (monotone ? ", monotone" : ", NOT monotone"),
               {}};
  std::vector<double> lv(levels.begin(), levels.end());
  out.chart = Chart{"duality residual", "cells per direction", "residual", true, true, {{"|a + <Au,v>|", lv, residuals}}};
  return out;
}

Artifact mc_cmd(const Params& p, const std::string&) {
  const std::string kind = p.choice("generator", "sticky", {"sticky", "membrane", "two-state"});
  const double t = p.positive("t", 0.02);
  const long paths = p.integer("paths", 100000, 1);
  const std::uint64_t seed = p.seed(1);
  SparseMatrix gen;
  Vector f;
  std::vector<int> marked;
  int start = 0;
  if (kind == "sticky") {
    const double r = p.number_in("r", 0.5, 0.0, 1.0);
    IntervalGrid g(0.0, 1.0, p.integer("n", 100, 2));
    gen = assemble_sticky(r, g).matrix();
    f = interval_data(g, p, "f").values();
    marked = {0};
    start = p.integer("start", g.cells() / 2, 0);
  } else if (kind == "membrane") {
    SplitGrid g = SplitGrid::uniform(p.integer("n", 50, 2));
    gen = assemble_APhi(read_membrane(p), g).rows;
    f = split_data(g, p).values();
    marked = {g.minus_index(), g.minus_index() + 1};
    start = p.integer("start", g.minus_index() - 5, 0);
  } else {
    TwoStateGenerator b{p.nonnegative("alpha", 2.0), p.nonnegative("beta", 1.0)};
    gen = b.matrix().sparseView();
    f = Eigen::Vector2d(0.0, 1.0);
    marked = {0};
    start = p.integer("start", 0, 0);
  }
  if (start >= gen.rows()) throw ParameterError("start", "node index outside the grid");
  JumpChain chain(gen);
  const CtmcRun run{&chain, start, t, paths, seed};
  const auto semigroup = estimate_semigroup(run, f);
  const auto occupation = membrane_occupation(run, marked);
  const double reference =
      GeneratorStepper(gen, Scheme::crank_nicolson).evolve(f, t, t / 2000.0)[start];
  std::ostringstream os;
  os << "quantity,mean,stderr,N,seed\n";
  os << "semigroup," << num(semigroup.mean) << ',' << num(semigroup.std_error) << ',' << semigroup.n << ',' << seed
     << '\n';
  os << "occupation," << num(occupation.mean) << ',' << num(occupation.std_error) << ',' << occupation.n << ','
     << seed << '\n';
  os << "reference," << num(reference) << ",0,0," << seed << '\n';
  const double z = semigroup.std_error > 0.0 ? (semigroup.mean - reference) / semigroup.std_error : 0.0;
  return {os.str(), false,
          "mc " + kind + " E f(X_t) " + brief(semigroup.mean) + " vs " + brief(reference) + " (z " + brief(z) + ")", {}};
}

using Handler = Artifact (*)(const Params&, const std::string&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"sticky-resolvent", sticky_resolvent}, {"sticky-decay", sticky_decay},
      {"membrane-sweep", membrane_sweep},     {"layer-evolve", layer_evolve_cmd},
      {"compare", compare_cmd},               {"forms-check", forms_check},
      {"mc", mc_cmd},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"sticky-resolvent", "sticky-decay", "membrane-sweep",
                                              "layer-evolve",     "compare",      "forms-check",
                                              "mc"};
  return names;
}

Artifact run_command(const std::string& name, const Params& params, const std::string& config_hash) {
  return handlers().at(name)(params, config_hash);
}

}  // namespace thinlayer::cli
