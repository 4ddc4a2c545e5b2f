#include <fstream>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cli.hpp"

namespace cli = fastfpt::cli;

namespace {

struct Flags {
  std::string model, lambda, k, times, out, format, variant, config;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  double tolerance_scale = 1.0;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "halfline|sphere|power|exponential|ctmc|grid, with :key=value,...");
  sub->add_option("--lambda", f.lambda, "comma-separated immigration rates");
  sub->add_option("--k", f.k, "comma-separated order statistics");
  sub->add_option("--times", f.times, "comma-separated times (survival)");
  sub->add_option("--trials", f.trials, "Monte Carlo trials per lambda");
  sub->add_option("--seed", f.seed, "base seed");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--workers", f.workers, "OpenMP threads");
  sub->add_option("--variant", f.variant, "theorem or lambertw");
  sub->add_option("--config", f.config, "JSON config; flags override it");
  sub->add_option("--tolerance-scale", f.tolerance_scale, "multiplies every validate tolerance");
}

bool given(CLI::App* sub, const char* name) { return sub->get_option(name)->count() > 0; }

cli::ExperimentConfig build_config(CLI::App* sub, const Flags& f) {
  cli::ExperimentConfig c;
  c.workers = cli::default_workers();
  if (given(sub, "--config")) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("cannot open config file " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config " + f.config + ": " + e.what());
    }
    c = cli::config_from_json(j, c);
  }
  if (given(sub, "--model")) c.model = f.model;
  if (given(sub, "--lambda")) c.lambdas = cli::parse_double_list(f.lambda);
  if (given(sub, "--k")) c.ks = cli::parse_int_list(f.k);
  if (given(sub, "--times")) c.times = cli::parse_double_list(f.times);
  if (given(sub, "--trials")) c.trials = f.trials;
  if (given(sub, "--seed")) c.seed = f.seed;
  if (given(sub, "--out")) c.out = f.out;
  if (given(sub, "--format")) c.format = f.format;
  if (given(sub, "--workers")) c.workers = f.workers;
  if (given(sub, "--variant")) c.variant = fastfpt::parse_scaling_variant(f.variant);
  if (given(sub, "--tolerance-scale")) c.tolerance_scale = f.tolerance_scale;
  c.validate();
  return c;
}

template <class Write>
void emit(const cli::ExperimentConfig& c, Write&& write) {
  if (c.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw std::runtime_error("cannot write " + c.out);
  write(os);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First passage times of the fastest searchers under immigration"};
  app.set_version_flag("--version", std::string("fastfpt ") + cli::kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"density", "rescaled k-th FPT histograms against the exact and limit densities"},
      {"mean-error", "relative error of the mean estimators"},
      {"validate", "run the invariant checks and print a JSON report"},
      {"survival", "S, S_I and the k-th survival on a time grid"},
      {"constants", "scaling constants a, b for both variants"},
      {"equiv", "equivalent initial searcher count and short-time law"},
  };
  Flags flags;
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    subs.push_back(app.add_subcommand(name, help));
    add_flags(subs.back(), flags);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* sub : subs) {
      if (!sub->parsed()) continue;
      const auto c = build_config(sub, flags);
      const std::string name = sub->get_name();
      if (name == "validate") {
        const auto report = cli::cmd_validate(c);
        emit(c, [&](std::ostream& os) { os << report.json.dump(2) << '\n'; });
        return report.passed ? 0 : 1;
      }
      cli::Table table;
      if (name == "density") table = cli::cmd_density(c);
      else if (name == "mean-error") table = cli::cmd_mean_error(c);
      else if (name == "survival") table = cli::cmd_survival(c);
      else if (name == "constants") table = cli::cmd_constants(c);
      else table = cli::cmd_equiv(c);
      emit(c, [&](std::ostream& os) { cli::write_table(table, c.format, os); });
    }
  } catch (const std::exception& e) {
    std::cerr << "fastfpt: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
