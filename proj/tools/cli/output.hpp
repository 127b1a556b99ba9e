#pragma once

// Artifact writing for the command-line tool: atomic file replacement,
// CSV metadata footers and small SVG line charts.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinlayer::cli {

/// Failure to read a config or write an artifact (exit status 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// `# thinlayer <version> config-hash=<hex>`, newline terminated.
std::string csv_footer(const std::string& config_hash);

/// %.17g, the precision every artifact uses for floating values.
std::string num(double v);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

/// A self-contained SVG document. Non-positive values are dropped on
/// logarithmic axes.
std::string render_svg(const Chart& chart);

}  // namespace thinlayer::cli
