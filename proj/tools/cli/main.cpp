// thinlayer: command-line front end. One JSON config per run; artifacts are
// written atomically and carry the config hash.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "output.hpp"
#include "params.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/version.hpp"

namespace {

enum Exit { ok = 0, validation = 2, numerical = 3, io = 4 };

int fail(int code, const std::string& kind, const std::string& what) {
  std::fprintf(stderr, "thinlayer: %s: %s\n", kind.c_str(), what.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace thinlayer;
  using namespace thinlayer::cli;

  CLI::App app{"Thin-layer diffusion across a semi-permeable membrane: solvers, limits and checks."};
  app.set_version_flag("--version", std::string(thinlayer::version));
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool plot = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--seed", seed, "random seed, overrides the config");
  app.add_flag("--plot", plot, "also write an SVG chart next to the output");
  app.require_subcommand(1);
  app.fallthrough();

  // Direct flags for the 1D commands; they override config keys of the same name.
  std::map<std::string, std::optional<double>> numeric;
  std::optional<int> n_cells;
  std::optional<std::string> g_data;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : command_names()) subs[name] = app.add_subcommand(name);
  subs["sticky-resolvent"]->description("closed-form vs discrete resolvent of the sticky generator");
  subs["sticky-decay"]->description("distance to equilibrium of e^{tG} f0 over time");
  subs["membrane-sweep"]->description("singular-limit error over a list of eps");
  subs["layer-evolve"]->description("evolve a field in the 3D layer");
  subs["compare"]->description("full layer against the limit system over eps");
  subs["forms-check"]->description("sectoriality and duality checks of the layer form (JSON)");
  subs["mc"]->description("Monte Carlo estimate against the deterministic semigroup");
  for (const char* cmd : {"sticky-resolvent", "sticky-decay"}) {
    subs[cmd]->add_option("--r", numeric["r"], "stickiness in [0, 1]");
    subs[cmd]->add_option("--n", n_cells, "grid cells");
  }
  subs["sticky-resolvent"]->add_option("--lambda", numeric["lambda"], "resolvent parameter");
  subs["sticky-resolvent"]->add_option("--g", g_data, "right-hand side: preset name or CSV file");
  subs["sticky-decay"]->add_option("--tmax", numeric["tmax"], "final time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }
  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) {
      try {
        j = nlohmann::json::parse(read_file(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError("config", std::string("malformed JSON: ") + e.what());
      }
    }
    if (!j.is_object()) throw ParameterError("config", "expected a JSON object");
    for (const auto& [key, v] : numeric)
      if (v) j[key] = *v;
    if (n_cells) j["n"] = *n_cells;
    if (g_data) j["g"] = *g_data;
    if (seed) j["seed"] = *seed;

    const std::string hash = hex64(fnv1a(command + "\n" + j.dump()));
    const Params params(j);
    if (plot && out_path.empty()) throw ParameterError("plot", "--plot needs --out");

    const Artifact art = run_command(command, params, hash);
    const std::string content = art.is_json ? art.body : art.body + csv_footer(hash);
    if (out_path.empty()) {
      std::cout << content << std::flush;
    } else {
      atomic_write(out_path, content);
    }
    if (plot) {
      if (art.chart)
        atomic_write(out_path + ".svg", render_svg(*art.chart));
      else
        std::fprintf(stderr, "thinlayer: %s has no chart, --plot ignored\n", command.c_str());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::FILE* summary = out_path.empty() ? stderr : stdout;
    std::fprintf(summary, "%s: %s%s%s [%.3f s]\n", command.c_str(), art.summary.c_str(),
                 out_path.empty() ? "" : " -> ", out_path.c_str(), secs);
    return ok;
  } catch (const ParameterError& e) {
    return fail(validation, "validation error in '" + e.field() + "'", e.what());
  } catch (const ConfigError& e) {
    return fail(validation, "configuration error", e.what());
  } catch (const DimensionMismatch& e) {
    return fail(validation, "configuration error", e.what());
  } catch (const RangeError& e) {
    return fail(validation, "range error", e.what());
  } catch (const IoError& e) {
    return fail(io, "I/O error", e.what());
  } catch (const ResolventThresholdError& e) {
    return fail(numerical, "numerical failure", e.what());
  } catch (const NumericalFailure& e) {
    return fail(numerical, "numerical failure", e.what());
  } catch (const std::exception& e) {
    return fail(numerical, "failure", e.what());
  }
}
