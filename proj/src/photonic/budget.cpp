#include "astra/photonic/budget.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace astra::photonic {
namespace {

constexpr double kSlackDb = 1e-9;
constexpr std::uint64_t kLaneSearchCap = std::uint64_t{1} << 40;

bool feasible(const PhotonicParams& p, double laser_power_dbm, std::uint64_t lanes) {
  return laser_power_dbm - lane_path_loss_db(p, lanes) >= required_lane_power_dbm(p) - kSlackDb;
}

}  // namespace

double mw_to_dbm(double milliwatts) { return 10.0 * std::log10(milliwatts); }

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double required_lane_power_dbm(const PhotonicParams& p) {
  return std::max(mw_to_dbm(p.oag_optical_power_uw * 1e-3), p.detector_sensitivity_dbm);
}

double lane_path_loss_db(const PhotonicParams& p, std::uint64_t lanes) {
  const auto stages = lanes <= 1 ? 0 : std::bit_width(lanes - 1);  // ceil(log2 L)
  return p.propagation_loss_db + p.insertion_loss_db_per_oag + static_cast<double>(stages) * p.splitter_excess_loss_db +
         10.0 * std::log10(static_cast<double>(lanes));
}

std::uint64_t max_lanes_per_wavelength(const PhotonicParams& p, double laser_power_dbm) {
  if (!feasible(p, laser_power_dbm, 1)) return 0;
  // Path loss grows with L, so feasibility is monotone: gallop, then bisect.
  std::uint64_t lo = 1;
  std::uint64_t hi = 2;
  while (hi < kLaneSearchCap && feasible(p, laser_power_dbm, hi)) {
    lo = hi;
    hi *= 2;
  }
  if (hi >= kLaneSearchCap && feasible(p, laser_power_dbm, hi)) return hi;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (feasible(p, laser_power_dbm, mid) ? lo : hi) = mid;
  }
  return lo;
}

double required_laser_power(std::uint64_t lanes, const PhotonicParams& p) {
  return required_lane_power_dbm(p) + lane_path_loss_db(p, std::max<std::uint64_t>(lanes, 1));
}

}  // namespace astra::photonic
