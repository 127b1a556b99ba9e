#pragma once

// Typed access to a run configuration. Every getter validates and reports
// problems as ParameterError naming the offending key.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace thinlayer::cli {

class Params {
 public:
  explicit Params(nlohmann::json j);

  const nlohmann::json& raw() const noexcept { return j_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double fallback) const;
  /// number in [lo, hi]; lo excluded when lo_open.
  double number_in(const std::string& key, double fallback, double lo, double hi,
                   bool lo_open = false) const;
  double nonnegative(const std::string& key, double fallback) const;
  double positive(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback, int min) const;
  std::uint64_t seed(std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  /// One of `choices`.
  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& choices) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback, int min) const;
  /// A list of eps values, each in (0, 1].
  std::vector<double> eps_list(const std::string& key, const std::vector<double>& fallback) const;

 private:
  nlohmann::json j_;
};

}  // namespace thinlayer::cli
