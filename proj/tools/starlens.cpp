#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "starlens/cli/emit.hpp"
#include "starlens/cli/run.hpp"
#include "starlens/cli/verify.hpp"
#include "starlens/errors.hpp"

using namespace starlens;
using namespace starlens::cli;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream cell(item);
    cell.imbue(std::locale::classic());
    double v = 0.0;
    if (!(cell >> v) || !(cell >> std::ws).eof()) throw ConfigError("--eps: cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int verify_command(const VerifyOptions& options, int only) {
  bool all_passed = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (only != 0 && id != only) continue;
    const CriterionResult r = run_criterion(id, options);
    std::printf("[%s] %2d %s (%.1fs): %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                r.detail.c_str());
    for (const auto& note : r.notes) std::printf("       # %s\n", note.c_str());
    std::fflush(stdout);
    all_passed = all_passed && r.passed;
  }
  return all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Busemann-type inequalities for star bodies"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::string format_override;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config ('-' reads stdin)");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("--output", output_override, "Output path, overrides output.path");
  run_cmd->add_option("--format", format_override, "json or csv, overrides output.format");

  VerifyOptions verify_options;
  int only = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_option("--level", verify_options.level, "Base quadrature level for n = 3; other levels scale with it");
  verify_cmd->add_flag("--quick", verify_options.quick, "Fewer random trials");
  verify_cmd->add_option("--seed", verify_options.seed, "Seed for randomized checks");
  verify_cmd->add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, kCriterionCount));

  int n = 3;
  double p = 1.0;
  int max_degree = 8;
  std::string format = "csv";
  auto* mult_cmd = app.add_subcommand("multipliers", "Tabulate the multipliers lambda_m(n, p)");
  mult_cmd->add_option("--n", n, "Dimension")->required();
  mult_cmd->add_option("--p", p, "Exponent in (0, n)")->required();
  mult_cmd->add_option("--max-degree", max_degree, "Largest degree")->required();
  mult_cmd->add_option("--format", format, "json or csv");

  int m = 4;
  std::string eps_text;
  int sweep_degree = 0;
  int level = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Deficit of a zonal perturbation of the ball against eps");
  sweep_cmd->add_option("--n", n, "Dimension")->required();
  sweep_cmd->add_option("--p", p, "Exponent in (0, n/2)")->required();
  sweep_cmd->add_option("--m", m, "Even harmonic degree >= 2")->required();
  sweep_cmd->add_option("--eps", eps_text, "Comma-separated, increasing")->required();
  sweep_cmd->add_option("--max-degree", sweep_degree, "Truncation degree (default m + 4)");
  sweep_cmd->add_option("--level", level, "Quadrature level");
  sweep_cmd->add_option("--format", format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*verify_cmd) return verify_command(verify_options, only);

    ExperimentConfig config;
    if (*run_cmd) {
      config = load_config(config_path);
      if (!output_override.empty()) config.output_path = output_override;
      if (!format_override.empty()) config.format = parse_format(format_override);
    } else if (*mult_cmd) {
      config.check = "multipliers";
      config.params.n = n;
      config.params.p = p;
      config.params.max_degree = max_degree;
      config.format = parse_format(format);
    } else {
      config.check = "local-sweep";
      config.params.n = n;
      config.params.p = p;
      config.params.m = m;
      config.params.eps_list = parse_list(eps_text);
      if (sweep_degree > 0) config.params.max_degree = sweep_degree;
      if (level > 0) config.params.level = level;
      config.format = parse_format(format);
    }
    return run(config, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}
