#include "astra/photonic/baseline.hpp"

#include <stdexcept>

namespace astra::photonic {

BaselineCost baseline_cost(const GemmWorkload& w, const BaselineParams& b) {
  if (!(b.energy_per_mac_pj > 0.0) || !(b.macs_per_second > 0.0)) {
    throw std::invalid_argument("baseline '" + b.name + "': energy_per_mac_pj and macs_per_second must be > 0");
  }
  const auto macs = static_cast<double>(w.total_macs());
  return {macs / b.macs_per_second, macs * b.energy_per_mac_pj * 1e-12};
}

}  // namespace astra::photonic
