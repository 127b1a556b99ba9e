#include "params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thinlayer/errors.hpp"

namespace thinlayer::cli {

Params::Params(nlohmann::json j) : j_(std::move(j)) {
  if (!j_.is_object()) throw ParameterError("config", "expected a JSON object");
}

double Params::number(const std::string& key, double fallback) const {
  if (!j_.contains(key)) return fallback;
  const auto& v = j_.at(key);
  if (!v.is_number()) throw ParameterError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParameterError(key, "must be finite");
  return d;
}

double Params::number_in(const std::string& key, double fallback, double lo, double hi,
                         bool lo_open) const {
  const double v = number(key, fallback);
  if (v > hi || v < lo || (lo_open && v == lo)) {
    const std::string range = (lo_open ? "(" : "[") + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    throw ParameterError(key, "value " + std::to_string(v) + " outside " + range);
  }
  return v;
}

double Params::nonnegative(const std::string& key, double fallback) const {
  return number_in(key, fallback, 0.0, std::numeric_limits<double>::max());
}

double Params::positive(const std::string& key, double fallback) const {
  return number_in(key, fallback, 0.0, std::numeric_limits<double>::max(), true);
}

int Params::integer(const std::string& key, int fallback, int min) const {
  if (!j_.contains(key)) return fallback;
  const auto& v = j_.at(key);
  if (!v.is_number_integer()) throw ParameterError(key, "expected an integer");
  const auto n = v.get<long long>();
  if (n < min || n > std::numeric_limits<int>::max())
    throw ParameterError(key, "must be an integer >= " + std::to_string(min));
  return static_cast<int>(n);
}

std::uint64_t Params::seed(std::uint64_t fallback) const {
  if (!j_.contains("seed")) return fallback;
  const auto& v = j_.at("seed");
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ParameterError("seed", "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

bool Params::flag(const std::string& key, bool fallback) const {
  if (!j_.contains(key)) return fallback;
  const auto& v = j_.at(key);
  if (!v.is_boolean()) throw ParameterError(key, "expected true or false");
  return v.get<bool>();
}

std::string Params::text(const std::string& key, const std::string& fallback) const {
  if (!j_.contains(key)) return fallback;
  const auto& v = j_.at(key);
  if (!v.is_string()) throw ParameterError(key, "expected a string");
  return v.get<std::string>();
}

std::string Params::choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& choices) const {
  const std::string v = text(key, fallback);
  if (std::find(choices.begin(), choices.end(), v) != choices.end()) return v;
  std::string list;
  for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
  throw ParameterError(key, "'" + v + "' is not one of " + list);
}

std::vector<double> Params::numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!j_.contains(key)) return fallback;
  const auto& v = j_.at(key);
  if (!v.is_array() || v.empty()) throw ParameterError(key, "expected a nonempty list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParameterError(key, "expected a nonempty list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> Params::integers(const std::string& key, const std::vector<int>& fallback, int min) const {
  if (!j_.contains(key)) return fallback;
  const auto& v = j_.at(key);
  if (!v.is_array() || v.empty()) throw ParameterError(key, "expected a nonempty list of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<long long>() < min)
      throw ParameterError(key, "entries must be integers >= " + std::to_string(min));
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<double> Params::eps_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto v = numbers(key, fallback);
  for (double e : v)
    if (!(e > 0.0 && e <= 1.0)) throw ParameterError(key, "eps value " + std::to_string(e) + " outside (0, 1]");
  return v;
}

}  // namespace thinlayer::cli
