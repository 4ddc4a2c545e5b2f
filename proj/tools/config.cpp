#include <omp.h>

#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "fastfpt/ctmc_io.hpp"

namespace fastfpt::cli {

namespace {

using Params = std::map<std::string, std::string>;

double number(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size()) throw std::invalid_argument("model: '" + key + "' is not a number: " + it->second);
  return v;
}

std::size_t index(const Params& p, const std::string& key, std::size_t fallback) {
  const double v = number(p, key, static_cast<double>(fallback));
  if (!(v >= 0.0) || v != std::floor(v)) throw std::invalid_argument("model: '" + key + "' must be a whole number");
  return static_cast<std::size_t>(v);
}

void check_keys(const std::string& kind, const Params& p, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument("model " + kind + ": unknown parameter '" + key + "'");
  }
}

ModelPtr build(const std::string& kind, const Params& p) {
  if (kind == "halfline") {
    check_keys(kind, p, {"L", "D"});
    return std::make_shared<HalfLineDiffusion>(number(p, "L", 1.0), number(p, "D", 1.0));
  }
  if (kind == "sphere") {
    check_keys(kind, p, {"L", "D"});
    return std::make_shared<SphereEscape3D>(number(p, "L", 1.0), number(p, "D", 1.0));
  }
  if (kind == "power") {
    check_keys(kind, p, {"A", "p"});
    return std::make_shared<PowerLawFixture>(number(p, "A", 1.0), number(p, "p", 1.0));
  }
  if (kind == "exponential") {
    check_keys(kind, p, {"rate"});
    return std::make_shared<ExponentialFixture>(number(p, "rate", 1.0));
  }
  if (kind == "ctmc") {
    check_keys(kind, p, {"file"});
    const auto it = p.find("file");
    if (it == p.end()) throw std::invalid_argument("model ctmc: 'file' is required");
    return std::make_shared<CtmcNetwork>(ctmc_from_file(it->second));
  }
  if (kind == "grid") {
    check_keys(kind, p, {"W", "H", "sx", "sy", "tx", "ty", "rate"});
    GridSpec g;
    g.width = index(p, "W", g.width);
    g.height = index(p, "H", g.height);
    g.start = {index(p, "sx", g.start[0]), index(p, "sy", g.start[1])};
    g.target = {index(p, "tx", g.target[0]), index(p, "ty", g.target[1])};
    g.rate = number(p, "rate", g.rate);
    return std::make_shared<CtmcNetwork>(make_grid_network(g));
  }
  throw std::invalid_argument("unknown model kind '" + kind +
                              "' (expected halfline, sphere, power, exponential, ctmc, grid)");
}

}  // namespace

ModelPtr parse_model(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  Params p;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("model: expected key=value, got '" + item + "'");
      p[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return build(kind, p);
}

ModelPtr model_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_model(j.get<std::string>());
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw std::invalid_argument("model: expected a spec string or an object with a \"type\" key");
  }
  Params p;
  for (const auto& [key, value] : j.items()) {
    if (key == "type") continue;
    if (value.is_string()) {
      p[key] = value.get<std::string>();
    } else if (value.is_number()) {
      std::ostringstream os;
      os.precision(17);
      os << value.get<double>();
      p[key] = os.str();
    } else {
      throw std::invalid_argument("model: value of '" + key + "' must be a number or string");
    }
  }
  return build(j["type"].get<std::string>(), p);
}

void ExperimentConfig::validate() const {
  (void)model_from_json(model);
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambda values must be finite and >= 0");
  }
  if (ks.empty()) throw std::invalid_argument("k list is empty");
  for (int k : ks) {
    if (k < 1) throw std::invalid_argument("k values must be >= 1");
  }
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("times must be >= 0");
  }
  if (trials < 2) throw std::invalid_argument("trials must be >= 2");
  if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!(tolerance_scale >= 0.0)) throw std::invalid_argument("tolerance scale must be >= 0");
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "model") {
        c.model = value.is_string() ? value.get<std::string>() : value.dump();
      } else if (key == "lambda") {
        c.lambdas = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
      } else if (key == "k") {
        c.ks = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
      } else if (key == "times") {
        c.times = value.get<std::vector<double>>();
      } else if (key == "trials") {
        c.trials = value.get<std::size_t>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        c.out = value.get<std::string>();
      } else if (key == "format") {
        c.format = value.get<std::string>();
      } else if (key == "workers") {
        c.workers = value.get<int>();
      } else if (key == "variant") {
        c.variant = parse_scaling_variant(value.get<std::string>());
      } else if (key == "tolerance_scale") {
        c.tolerance_scale = value.get<double>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

int default_workers() {
  if (const char* env = std::getenv("FASTFPT_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return omp_get_max_threads();
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) {
    if (v != std::floor(v)) throw std::invalid_argument("not an integer: " + std::to_string(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace fastfpt::cli
