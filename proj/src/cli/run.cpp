#include "starlens/cli/run.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "starlens/bodies.hpp"
#include "starlens/cli/body_spec.hpp"
#include "starlens/cli/random.hpp"
#include "starlens/cli/verify.hpp"
#include "starlens/errors.hpp"
#include "starlens/inequalities.hpp"
#include "starlens/ip_operator.hpp"
#include "starlens/specfun.hpp"

namespace starlens::cli {
namespace {

const std::set<std::string> kChecks{"busemann", "generalized", "parseval", "kint",        "kpz",
                                    "lz",       "opnorm",      "local-sweep", "multipliers", "verify"};
const std::set<std::string> kParamKeys{"p", "k",    "q",      "M_max", "level",  "eps_list",  "seed",
                                       "m", "n",    "trials", "quick", "expect", "tolerance"};

double as_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int as_int(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

void set_param(Params& params, const std::string& key, const nlohmann::json& v, const std::string& where) {
  if (key == "p") params.p = as_number(v, where);
  else if (key == "k") params.k = as_int(v, where);
  else if (key == "q") params.q = as_number(v, where);
  else if (key == "M_max") params.max_degree = as_int(v, where);
  else if (key == "level") params.level = as_int(v, where);
  else if (key == "m") params.m = as_int(v, where);
  else if (key == "n") params.n = as_int(v, where);
  else if (key == "trials") params.trials = as_int(v, where);
  else if (key == "tolerance") params.tolerance = as_number(v, where);
  else if (key == "seed") {
    if (!v.is_number_unsigned()) throw ConfigError(where + ": expected a nonnegative integer");
    params.seed = v.get<std::uint64_t>();
  } else if (key == "quick") {
    if (!v.is_boolean()) throw ConfigError(where + ": expected a boolean");
    params.quick = v.get<bool>();
  } else if (key == "expect") {
    if (!v.is_string() || (v != "equality" && v != "strict"))
      throw ConfigError(where + ": expected \"equality\" or \"strict\"");
    params.expect = v.get<std::string>();
  } else if (key == "eps_list") {
    if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
    params.eps_list.clear();
    for (std::size_t i = 0; i < v.size(); ++i) params.eps_list.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
}

template <typename T>
T required(const std::optional<T>& value, const char* key, const std::string& check) {
  if (!value) throw ConfigError("params." + std::string(key) + ": required by check '" + check + "'");
  return *value;
}

// Fields a check does not read are rejected, so typos cannot pass silently.
void allow_only(const ExperimentConfig& c, std::initializer_list<const char*> keys, bool body) {
  const std::set<std::string> ok(keys.begin(), keys.end());
  const Params& p = c.params;
  auto check = [&](bool present, const char* key) {
    if (present && !ok.count(key)) throw ConfigError("params." + std::string(key) + ": not used by check '" + c.check + "'");
  };
  check(p.p.has_value(), "p");
  check(p.k.has_value(), "k");
  check(p.q.has_value(), "q");
  check(p.max_degree.has_value(), "M_max");
  check(p.level.has_value(), "level");
  check(!p.eps_list.empty(), "eps_list");
  check(p.seed.has_value(), "seed");
  check(p.m.has_value(), "m");
  check(p.n.has_value(), "n");
  check(p.trials.has_value(), "trials");
  check(p.quick.has_value(), "quick");
  check(p.expect.has_value(), "expect");
  check(p.tolerance.has_value(), "tolerance");
  if (body && !c.body) throw ConfigError("body: required by check '" + c.check + "'");
  if (!body && c.body) throw ConfigError("body: not used by check '" + c.check + "'");
}

int default_max_degree(int n) { return n == 3 ? 16 : (n == 4 ? 12 : 8); }

QuadratureRule rule_for(const Params& p, int n) { return product_rule(n, p.level.value_or(default_level(n))); }

std::string describe(const InequalityReport& r) {
  std::ostringstream out;
  out << r.name << " " << r.body << " p_or_k=" << format_number(r.param) << " lhs=" << format_number(r.lhs)
      << " rhs=" << format_number(r.rhs) << " deficit=" << format_number(r.deficit)
      << " quad_error=" << format_number(r.quad_error);
  return out.str();
}

void user_expectation(const Params& p, const InequalityReport& r, RunOutcome& out) {
  if (!p.expect) return;
  bool ok = true;
  if (*p.expect == "equality") ok = std::abs(r.deficit) <= p.tolerance.value_or(1e-5) * std::abs(r.rhs);
  else ok = r.deficit > 3.0 * r.quad_error;
  if (!ok) out.failures.push_back("expected " + *p.expect + ": " + describe(r));
}

void report(RunOutcome& out, const InequalityReport& r, bool holds, const char* what) {
  out.records.push_back(to_record(r));
  if (!holds) out.failures.push_back(std::string(what) + ": " + describe(r));
}

RunOutcome dispatch(const ExperimentConfig& c) {
  RunOutcome out;
  const Params& p = c.params;
  const std::string& check = c.check;

  if (check == "busemann" || check == "lz") {
    const bool lz = check == "lz";
    if (lz) allow_only(c, {"q", "level", "expect", "tolerance"}, true);
    else allow_only(c, {"level", "expect", "tolerance"}, true);
    const StarBody body = parse_body(*c.body);
    const QuadratureRule rule = rule_for(p, body.dim());
    validate(body, rule);
    const InequalityReport r = lz ? lutwak_zhang_check(body, p.q.value_or(2.0), rule) : busemann_check(body, rule);
    report(out, r, r.deficit >= -(r.quad_error + 1e-9 * std::abs(r.rhs)), "deficit below -quad_error");
    user_expectation(p, r, out);
  } else if (check == "generalized" || check == "parseval") {
    const bool gen = check == "generalized";
    if (gen) allow_only(c, {"p", "M_max", "level", "expect", "tolerance"}, true);
    else allow_only(c, {"M_max", "level", "expect", "tolerance"}, true);
    const StarBody body = parse_body(*c.body);
    const int n = body.dim();
    const QuadratureRule rule = rule_for(p, n);
    validate(body, rule);
    const int max_degree = p.max_degree.value_or(default_max_degree(n));
    if (gen) {
      const double exponent = required(p.p, "p", check);
      const InequalityReport r = generalized_busemann(body, exponent, max_degree, rule);
      report(out, r, r.lhs <= weakened_bound_factor(n, exponent) * r.rhs + 1e-6, "weakened inequality violated");
      user_expectation(p, r, out);
    } else {
      const InequalityReport r = parseval_check(body, rule, max_degree);
      const double tol = 1e-7 * std::abs(r.rhs) + r.truncation_residual * r.truncation_residual;
      report(out, r, std::abs(r.deficit) <= tol, "Parseval identity violated");
      user_expectation(p, r, out);
    }
  } else if (check == "kint" || check == "kpz") {
    allow_only(c, {"k", "M_max", "level"}, true);
    const StarBody body = parse_body(*c.body);
    const int n = body.dim();
    const int k = required(p.k, "k", check);
    if (k < 1 || k >= n) throw ConfigError("params.k: must satisfy 1 <= k < n");
    const QuadratureRule rule = rule_for(p, n);
    validate(body, rule);
    const int max_degree = p.max_degree.value_or(default_max_degree(n));
    InequalityReport r;
    r.n = n;
    r.param = k;
    r.body = body.label();
    r.level = rule.level();
    r.max_degree = max_degree;
    if (check == "kint") {
      r.name = "kint";
      const KIntersection ki = k_intersection_body(body, k, max_degree, rule);
      if (!ki.body) {
        r.lhs = r.ratio = r.deficit = std::nan("");
        r.rhs = ki.min_bracket;
        out.notes.push_back("not a body: the bracket reaches " + format_number(ki.min_bracket));
      } else {
        std::vector<double> powered(ki.bracket.size());
        for (std::size_t i = 0; i < powered.size(); ++i) powered[i] = std::pow(ki.bracket[i], static_cast<double>(n) / k);
        r.lhs = kappa(n) * integrate(powered, rule);
        r.rhs = kappa(n) * std::pow(kappa(n - k) / kappa(k), static_cast<double>(n) / k) *
                std::pow(volume(body, rule) / kappa(n), static_cast<double>(n - k) / k);
        r.ratio = r.lhs / r.rhs;
        r.deficit = r.rhs - r.lhs;
      }
      out.records.push_back(to_record(r));
    } else {
      if (2 * k >= n) throw ConfigError("params.k: the ratio bound needs k < n/2");
      r.name = "kpz";
      try {
        r.lhs = kpz_ratio(body, k, max_degree, rule);
      } catch (const NotABody& e) {
        throw Error(std::string("kpz: ") + e.what());
      }
      r.rhs = std::sqrt(n / (2.0 * k));
      r.ratio = r.lhs / r.rhs;
      r.deficit = r.rhs - r.lhs;
      report(out, r, r.lhs <= r.rhs + 1e-6, "ratio above sqrt(n/2k)");
    }
  } else if (check == "opnorm") {
    allow_only(c, {"p", "M_max", "level", "seed", "trials", "n"}, false);
    const int n = required(p.n, "n", check);
    const double exponent = required(p.p, "p", check);
    const std::uint64_t seed = required(p.seed, "seed", check);
    const int trials = p.trials.value_or(200);
    if (trials < 1) throw ConfigError("params.trials: must be positive");
    const int max_degree = p.max_degree.value_or(8);
    if (max_degree < 2 || max_degree % 2 != 0) throw ConfigError("params.M_max: must be even and >= 2");
    const QuadratureRule rule = rule_for(p, n);
    const double bound = operator_bound(n, exponent);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
      InequalityReport r;
      r.name = "opnorm";
      r.n = n;
      r.param = exponent;
      r.body = "random[seed=" + std::to_string(seed) + " trial=" + std::to_string(t) + "]";
      r.level = rule.level();
      r.max_degree = max_degree;
      r.lhs = operator_norm_test(random_band_limited(n, max_degree, rng), exponent, max_degree, rule);
      r.rhs = bound;
      r.ratio = r.lhs / r.rhs;
      r.deficit = r.rhs - r.lhs;
      report(out, r, r.lhs <= bound + 1e-6, "operator bound violated");
    }
  } else if (check == "local-sweep") {
    allow_only(c, {"n", "p", "m", "eps_list", "M_max", "level"}, false);
    const int n = required(p.n, "n", check);
    const int m = required(p.m, "m", check);
    const SweepResult s = local_expansion(n, required(p.p, "p", check), m, p.eps_list,
                                          p.max_degree.value_or(m + 4), rule_for(p, n));
    out.records.push_back(to_record(s));
    for (std::size_t i = 0; i < s.deficits.size(); ++i) {
      if (!(s.deficits[i] >= -s.quad_errors[i]))
        out.failures.push_back("sweep deficit below -quad_error at eps=" + format_number(s.eps_values[i]));
    }
  } else if (check == "multipliers") {
    allow_only(c, {"n", "p", "M_max"}, false);
    const int n = required(p.n, "n", check);
    const double exponent = required(p.p, "p", check);
    const int max_degree = p.max_degree.value_or(8);
    if (max_degree < 0) throw ConfigError("params.M_max: must be nonnegative");
    for (int m = 0; m <= max_degree; m += 2) {
      Record rec;
      rec.add("name", std::string("multiplier"))
          .add("n", std::int64_t{n})
          .add("p", exponent)
          .add("m", std::int64_t{m})
          .add("lambda", multiplier(n, exponent, m))
          .add("eigenvalue", eigenvalue(n, exponent, m));
      out.records.push_back(std::move(rec));
    }
  } else if (check == "verify") {
    allow_only(c, {"level", "quick", "seed"}, false);
    VerifyOptions options;
    options.level = p.level.value_or(0);
    options.quick = p.quick.value_or(false);
    if (p.seed) options.seed = *p.seed;
    for (const CriterionResult& res : run_all(options)) {
      Record rec;
      rec.add("name", std::string("criterion"))
          .add("id", std::int64_t{res.id})
          .add("title", res.title)
          .add("passed", res.passed)
          .add("detail", res.detail);
      out.records.push_back(std::move(rec));
      if (!res.passed) out.failures.push_back("criterion " + std::to_string(res.id) + " " + res.title + ": " + res.detail);
    }
  }
  out.exit_code = out.failures.empty() ? 0 : 2;
  return out;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  std::set<std::string> seen;
  for (const auto& [key, value] : doc.items()) {
    if (key == "body") {
      c.body = value;
    } else if (key == "check") {
      if (!value.is_string()) throw ConfigError("check: expected a string");
      c.check = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError("params: expected an object");
      for (const auto& [pk, pv] : value.items()) {
        if (!kParamKeys.count(pk)) throw ConfigError("params." + pk + ": unknown field");
        if (!seen.insert(pk).second) throw ConfigError("params." + pk + ": given twice");
        set_param(c.params, pk, pv, "params." + pk);
      }
    } else if (key == "output") {
      if (!value.is_object()) throw ConfigError("output: expected an object");
      for (const auto& [ok, ov] : value.items()) {
        if (ok == "path") {
          if (!ov.is_string()) throw ConfigError("output.path: expected a string");
          c.output_path = ov.get<std::string>();
        } else if (ok == "format") {
          if (!ov.is_string()) throw ConfigError("output.format: expected a string");
          c.format = parse_format(ov.get<std::string>());
        } else {
          throw ConfigError("output." + ok + ": unknown field");
        }
      }
    } else if (kParamKeys.count(key)) {
      if (!seen.insert(key).second) throw ConfigError(key + ": given twice");
      set_param(c.params, key, value, key);
    } else {
      throw ConfigError(key + ": unknown field");
    }
  }
  if (c.check.empty()) throw ConfigError("check: required field missing");
  if (!kChecks.count(c.check)) throw ConfigError("check: unknown check '" + c.check + "'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunOutcome execute(const ExperimentConfig& config) {
  try {
    return dispatch(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    // Parameter domain errors surface here; in a config they are user input.
    if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
        dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const DegreeTooLarge*>(&e) ||
        dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const ParityError*>(&e) ||
        dynamic_cast<const ZeroVector*>(&e) || dynamic_cast<const SingularMap*>(&e)) {
      throw ConfigError(e.what());
    }
    throw;
  }
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  try {
    outcome = execute(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "invariant failure: " << e.what() << "\n";
    return 2;
  }
  try {
    write_output(emit(outcome.records, config.format), config.output_path, out);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return 1;
  }
  for (const std::string& line : outcome.notes) err << line << "\n";
  for (const std::string& line : outcome.failures) err << "FAILED " << line << "\n";
  return outcome.exit_code;
}

}  // namespace starlens::cli
