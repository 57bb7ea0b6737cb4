#pragma once

#include <cstdint>

#include "astra/photonic/params.hpp"

namespace astra::photonic {

double mw_to_dbm(double milliwatts);
double dbm_to_mw(double dbm);

/// Power one OAG must see: max(per-OAG optical power, detector sensitivity).
double required_lane_power_dbm(const PhotonicParams& p);

/// Total loss between the laser and one of L lanes:
/// propagation + per-OAG insertion + ceil(log2 L) * splitter excess + 10 log10 L.
double lane_path_loss_db(const PhotonicParams& p, std::uint64_t lanes);

/// Largest L whose per-lane power meets required_lane_power_dbm; 0 when one
/// lane already fails. Comparisons allow 1e-9 dB of rounding slack.
std::uint64_t max_lanes_per_wavelength(const PhotonicParams& p, double laser_power_dbm);

/// Minimal laser power (dBm) that feeds exactly `lanes` lanes.
double required_laser_power(std::uint64_t lanes, const PhotonicParams& p);

}  // namespace astra::photonic
