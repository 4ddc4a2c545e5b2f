#ifndef FASTFPT_CTMC_IO_HPP
#define FASTFPT_CTMC_IO_HPP

#include <array>
#include <cstddef>
#include <string>

#include "json.hpp"

#include "fastfpt/survival.hpp"

namespace fastfpt {

struct GridSpec {
  std::size_t width = 5;
  std::size_t height = 5;
  std::array<std::size_t, 2> start{0, 0};   // (x, y)
  std::array<std::size_t, 2> target{2, 1};  // (x, y)
  double rate = 1.0;
};

/// Nearest-neighbour walk on a width x height grid, hopping to each
/// neighbour at `rate`. State index of (x, y) is y * width + x.
CtmcNetwork make_grid_network(const GridSpec& spec);

/// Builds a network from either of two JSON shapes:
///   {"n_states": n, "edges": [[from, to, rate], ...],
///    "initial": [[state, prob], ...], "targets": [state, ...]}
///   {"grid": [W, H], "start": [x, y], "target": [x, y], "rate": r}
/// Throws std::invalid_argument on malformed documents.
CtmcNetwork ctmc_from_json(const nlohmann::json& doc);

CtmcNetwork ctmc_from_file(const std::string& path);

}  // namespace fastfpt

#endif  // FASTFPT_CTMC_IO_HPP
