#include "astra/photonic/params.hpp"

#include <cmath>
#include <string>

#include "astra/common/error.hpp"
#include "astra/photonic/budget.hpp"

namespace astra::photonic {

std::string_view to_string(EnergyComponent c) {
  switch (c) {
    case EnergyComponent::Serializer: return "serializer";
    case EnergyComponent::BToS: return "b_to_s";
    case EnergyComponent::Oag: return "oag";
    case EnergyComponent::Pca: return "pca";
    case EnergyComponent::Adc: return "adc";
    case EnergyComponent::Laser: return "laser";
    case EnergyComponent::Memory: return "memory";
  }
  return "unknown";
}

void PhotonicParams::validate() const {
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string("photonic.") + name + " must be finite and >= 0");
  };
  if (!(bitrate_gbps > 0.0)) throw ConfigError("photonic.bitrate_gbps must be > 0");
  if (!(oag_optical_power_uw > 0.0)) throw ConfigError("photonic.oag_optical_power_uw must be > 0");
  non_negative(insertion_loss_db_per_oag, "insertion_loss_db_per_oag");
  non_negative(splitter_excess_loss_db, "splitter_excess_loss_db");
  non_negative(propagation_loss_db, "propagation_loss_db");
  if (!(laser_wallplug_efficiency > 0.0 && laser_wallplug_efficiency <= 1.0)) {
    throw ConfigError("photonic.laser_wallplug_efficiency must be in (0, 1]");
  }
  if (!std::isfinite(laser_power_dbm) || !std::isfinite(detector_sensitivity_dbm)) {
    throw ConfigError("photonic laser power and detector sensitivity must be finite");
  }
  non_negative(energy_per_bit.serializer_pj, "energy_per_bit.serializer_pj");
  non_negative(energy_per_bit.b_to_s_pj, "energy_per_bit.b_to_s_pj");
  non_negative(energy_per_bit.oag_pj, "energy_per_bit.oag_pj");
  non_negative(energy_per_bit.pca_pj, "energy_per_bit.pca_pj");
  non_negative(energy_per_bit.adc_per_conversion_pj, "energy_per_bit.adc_per_conversion_pj");
  non_negative(energy_per_bit.sram_per_byte_pj, "energy_per_bit.sram_per_byte_pj");
}

PhotonicParams PhotonicParams::from_config(const KeyValueConfig& cfg, const PhotonicParams& base, const std::string& prefix) {
  PhotonicParams p = base;
  const auto key = [&](const char* field) { return prefix + "." + field; };
  p.bitrate_gbps = cfg.get_double(key("bitrate_gbps"), p.bitrate_gbps);
  p.oag_optical_power_uw = cfg.get_double(key("oag_optical_power_uw"), p.oag_optical_power_uw);
  p.insertion_loss_db_per_oag = cfg.get_double(key("insertion_loss_db_per_oag"), p.insertion_loss_db_per_oag);
  p.splitter_excess_loss_db = cfg.get_double(key("splitter_excess_loss_db"), p.splitter_excess_loss_db);
  p.propagation_loss_db = cfg.get_double(key("propagation_loss_db"), p.propagation_loss_db);
  p.detector_sensitivity_dbm = cfg.get_double(key("detector_sensitivity_dbm"), p.detector_sensitivity_dbm);
  p.laser_wallplug_efficiency = cfg.get_double(key("laser_wallplug_efficiency"), p.laser_wallplug_efficiency);
  p.laser_power_dbm = cfg.get_double(key("laser_power_dbm"), p.laser_power_dbm);
  auto& e = p.energy_per_bit;
  e.serializer_pj = cfg.get_double(key("energy_per_bit.serializer_pj"), e.serializer_pj);
  e.b_to_s_pj = cfg.get_double(key("energy_per_bit.b_to_s_pj"), e.b_to_s_pj);
  e.oag_pj = cfg.get_double(key("energy_per_bit.oag_pj"), e.oag_pj);
  e.pca_pj = cfg.get_double(key("energy_per_bit.pca_pj"), e.pca_pj);
  e.adc_per_conversion_pj = cfg.get_double(key("energy_per_bit.adc_per_conversion_pj"), e.adc_per_conversion_pj);
  e.sram_per_byte_pj = cfg.get_double(key("energy_per_bit.sram_per_byte_pj"), e.sram_per_byte_pj);
  p.validate();
  return p;
}

PhotonicParams PhotonicParams::from_config(const KeyValueConfig& cfg) { return from_config(cfg, PhotonicParams{}); }

void ArchConfig::validate(const PhotonicParams& params) const {
  if (vdpe_count == 0 || lanes_per_vdpe == 0 || wavelengths == 0) {
    throw ConfigError("arch.vdpe_count, arch.lanes_per_vdpe and arch.wavelengths must be >= 1");
  }
  vdpe.validate();
  const auto limit = max_lanes_per_wavelength(params, params.laser_power_dbm);
  if (lanes_per_vdpe > limit) {
    throw ConfigError("arch.lanes_per_vdpe = " + std::to_string(lanes_per_vdpe) + " exceeds the optical budget (" +
                      std::to_string(limit) + " lanes at " + std::to_string(params.laser_power_dbm) + " dBm)");
  }
}

}  // namespace astra::photonic
