#pragma once

#include <string>

#include "astra/photonic/workload.hpp"

namespace astra::photonic {

/// User-supplied what-if comparator: a flat cost per multiply-accumulate.
struct BaselineParams {
  std::string name;
  double energy_per_mac_pj = 1.0;
  double macs_per_second = 1e12;
};

struct BaselineCost {
  double seconds = 0.0;
  double joules = 0.0;
};

/// Throws std::invalid_argument for non-positive parameters.
BaselineCost baseline_cost(const GemmWorkload& w, const BaselineParams& b);

}  // namespace astra::photonic
