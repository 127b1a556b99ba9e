#pragma once

#include <optional>
#include <string>
#include <vector>

#include "output.hpp"
#include "params.hpp"

namespace thinlayer::cli {

/// What a subcommand produced: the artifact text (CSV without footer, or a
/// JSON document), a one-line summary and an optional chart.
struct Artifact {
  std::string body;
  bool is_json = false;
  std::string summary;
  std::optional<Chart> chart;
};

const std::vector<std::string>& command_names();

/// Runs a subcommand. `config_hash` is embedded in JSON artifacts.
Artifact run_command(const std::string& name, const Params& params, const std::string& config_hash);

}  // namespace thinlayer::cli
