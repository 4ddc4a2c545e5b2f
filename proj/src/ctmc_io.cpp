#include "fastfpt/ctmc_io.hpp"

#include <fstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fastfpt {

CtmcNetwork make_grid_network(const GridSpec& spec) {
  const auto w = spec.width;
  const auto h = spec.height;
  if (w * h < 2) throw std::invalid_argument("grid must have at least 2 vertices");
  if (spec.start[0] >= w || spec.start[1] >= h || spec.target[0] >= w || spec.target[1] >= h) {
    throw std::invalid_argument("grid start/target outside the grid");
  }
  auto index = [w](std::size_t x, std::size_t y) { return y * w + x; };
  std::vector<CtmcEdge> edges;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto s = index(x, y);
      if (x > 0) edges.push_back({s, index(x - 1, y), spec.rate});
      if (x + 1 < w) edges.push_back({s, index(x + 1, y), spec.rate});
      if (y > 0) edges.push_back({s, index(x, y - 1), spec.rate});
      if (y + 1 < h) edges.push_back({s, index(x, y + 1), spec.rate});
    }
  }
  return CtmcNetwork(w * h, std::move(edges), {{index(spec.start[0], spec.start[1]), 1.0}},
                     {index(spec.target[0], spec.target[1])});
}

namespace {

template <class T>
T get_required(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw std::invalid_argument(std::string("ctmc json: missing key '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ctmc json: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

CtmcNetwork ctmc_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("ctmc json: document must be an object");
  try {
    if (doc.contains("grid")) {
      GridSpec spec;
      const auto dims = get_required<std::vector<std::size_t>>(doc, "grid");
      const auto start = get_required<std::vector<std::size_t>>(doc, "start");
      const auto target = get_required<std::vector<std::size_t>>(doc, "target");
      if (dims.size() != 2 || start.size() != 2 || target.size() != 2) {
        throw std::invalid_argument("ctmc json: grid, start and target must have two entries");
      }
      spec.width = dims[0];
      spec.height = dims[1];
      spec.start = {start[0], start[1]};
      spec.target = {target[0], target[1]};
      spec.rate = doc.value("rate", 1.0);
      return make_grid_network(spec);
    }

    const auto n = get_required<std::size_t>(doc, "n_states");
    std::vector<CtmcEdge> edges;
    for (const auto& e : get_required<nlohmann::json>(doc, "edges")) {
      if (!e.is_array() || e.size() != 3) throw std::invalid_argument("ctmc json: edge must be [from, to, rate]");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    std::vector<std::pair<std::size_t, double>> initial;
    for (const auto& e : get_required<nlohmann::json>(doc, "initial")) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("ctmc json: initial entry must be [state, prob]");
      initial.emplace_back(e[0].get<std::size_t>(), e[1].get<double>());
    }
    auto targets = get_required<std::vector<std::size_t>>(doc, "targets");
    return CtmcNetwork(n, std::move(edges), std::move(initial), std::move(targets));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ctmc json: ") + e.what());
  }
}

CtmcNetwork ctmc_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open ctmc file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("ctmc file " + path + ": " + e.what());
  }
  return ctmc_from_json(doc);
}

}  // namespace fastfpt
