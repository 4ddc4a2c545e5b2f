#ifndef FASTFPT_TOOLS_CLI_HPP
#define FASTFPT_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "fastfpt/asymptotics.hpp"
#include "fastfpt/survival.hpp"

namespace fastfpt::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Builds a model from "kind:key=value,..." where kind is one of
///   halfline:L=1,D=1      sphere:L=1,D=1
///   power:A=1,p=1         exponential:rate=1
///   ctmc:file=net.json    grid:W=5,H=5,sx=0,sy=0,tx=2,ty=1,rate=1
/// Missing keys take the defaults shown. Throws std::invalid_argument.
ModelPtr parse_model(const std::string& spec);

/// JSON form of a model: either the string above or an object
/// {"type": "halfline", "L": 1, "D": 1}.
ModelPtr model_from_json(const nlohmann::json& j);

struct ExperimentConfig {
  std::string model = "halfline:L=1,D=1";
  std::vector<double> lambdas;   // empty: command default
  std::vector<int> ks{1};
  std::vector<double> times;     // survival only; empty: grid around the time scale
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::string out;               // empty: stdout
  std::string format = "csv";
  int workers = 1;
  ScalingVariant variant = ScalingVariant::LambertW;
  double tolerance_scale = 1.0;  // validate only

  /// Throws std::invalid_argument with a readable message.
  void validate() const;
};

/// Reads the JSON config file form: keys model, lambda, k, times, trials,
/// seed, out, format, workers, variant, tolerance_scale. Unknown keys throw.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

/// FASTFPT_WORKERS if set, else the OpenMP thread count.
int default_workers();

std::vector<double> parse_double_list(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

using Cell = std::variant<double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  bool operator==(const Table& other) const;  // NaN cells compare equal
};

/// CSV: "# fastfpt v<version> <command>", a header line, then rows. Numbers
/// print with 17 significant digits; strings are always double-quoted.
void write_csv(const Table& t, std::ostream& os);
Table read_csv(std::istream& is);
nlohmann::json to_json(const Table& t);
Table table_from_json(const nlohmann::json& j);
void write_table(const Table& t, const std::string& format, std::ostream& os);

Table cmd_survival(const ExperimentConfig& c);
Table cmd_constants(const ExperimentConfig& c);
Table cmd_equiv(const ExperimentConfig& c);
Table cmd_mean_error(const ExperimentConfig& c);
Table cmd_density(const ExperimentConfig& c);

struct ValidationReport {
  nlohmann::json json;
  bool passed = true;
};

/// Runs the invariant suite. Each check reports its measured value and
/// tolerance; checks flagged known_gap are reported but do not fail the run.
ValidationReport cmd_validate(const ExperimentConfig& c);

}  // namespace fastfpt::cli

#endif  // FASTFPT_TOOLS_CLI_HPP
