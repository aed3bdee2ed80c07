#include "starlens/cli/body_spec.hpp"

#include <set>

#include "starlens/errors.hpp"

namespace starlens::cli {
namespace {

const nlohmann::json& field(const nlohmann::json& spec, const std::string& path, const char* key) {
  if (!spec.contains(key)) throw ConfigError(path + "." + key + ": required field missing");
  return spec.at(key);
}

double number(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number()) throw ConfigError(where + ": expected a number");
  return value.get<double>();
}

int integer(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return value.get<int>();
}

std::vector<double> numbers(const nlohmann::json& value, const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(number(value[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

StarBody parse_body(const nlohmann::json& spec, const std::string& path) {
  if (!spec.is_object()) throw ConfigError(path + ": expected an object");
  static const std::set<std::string> allowed{"kind", "n", "r", "axes", "q", "p", "eps", "m", "axis"};
  for (const auto& [key, value] : spec.items()) {
    if (!allowed.count(key)) throw ConfigError(path + "." + key + ": unknown field");
  }
  const auto& kind_value = field(spec, path, "kind");
  if (!kind_value.is_string()) throw ConfigError(path + ".kind: expected a string");
  const std::string kind = kind_value.get<std::string>();

  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys)
      if (spec.contains(key)) throw ConfigError(path + "." + key + ": not used by kind '" + kind + "'");
  };

  try {
    if (kind == "ball") {
      reject({"axes", "q", "p", "eps", "m", "axis"});
      const int n = integer(field(spec, path, "n"), path + ".n");
      const double r = spec.contains("r") ? number(spec.at("r"), path + ".r") : 1.0;
      return ball(n, r);
    }
    if (kind == "ellipsoid") {
      reject({"r", "q", "p", "eps", "m", "axis"});
      const auto axes = numbers(field(spec, path, "axes"), path + ".axes");
      if (spec.contains("n") && integer(spec.at("n"), path + ".n") != static_cast<int>(axes.size()))
        throw ConfigError(path + ".n: does not match the number of axes");
      return ellipsoid(axes);
    }
    if (kind == "lp_ball") {
      reject({"r", "axes", "p", "eps", "m", "axis"});
      return lp_ball(integer(field(spec, path, "n"), path + ".n"), number(field(spec, path, "q"), path + ".q"));
    }
    if (kind == "perturbed_ball") {
      reject({"r", "axes", "q"});
      const int n = integer(field(spec, path, "n"), path + ".n");
      std::vector<double> axis;
      if (spec.contains("axis")) {
        axis = numbers(spec.at("axis"), path + ".axis");
        if (static_cast<int>(axis.size()) != n) throw ConfigError(path + ".axis: length must equal n");
      }
      return perturbed_ball(n, number(field(spec, path, "p"), path + ".p"), number(field(spec, path, "eps"), path + ".eps"),
                            integer(field(spec, path, "m"), path + ".m"), axis);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".kind: unknown body kind '" + kind + "'");
}

}  // namespace starlens::cli
