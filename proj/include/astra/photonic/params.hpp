#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "astra/common/kv_config.hpp"
#include "astra/vdpe/vdpe.hpp"

namespace astra::photonic {

/// Device and energy parameters. Defaults are calibrated, not measured:
///
///   field                        default   source
///   bitrate_gbps                 30        published link rate (> 30 Gbps)
///   oag_optical_power_uw         0.5       published per-OAG optical power
///   insertion_loss_db_per_oag    1.0       calibrated
///   splitter_excess_loss_db      0.05      calibrated, per 1x2 stage
///   propagation_loss_db          2.0       calibrated, total routing
///   detector_sensitivity_dbm     -40       calibrated
///   laser_wallplug_efficiency    0.2       calibrated
///   laser_power_dbm              1.0       calibrated so >= 1024 lanes fit
///   energy_per_bit (pJ)          see EnergyPerBit
struct EnergyPerBit {
  double serializer_pj = 1.0;          // per streamed bit slot
  double b_to_s_pj = 0.1;              // per generated stream bit
  double oag_pj = 0.05;                // per lane-bit event
  double pca_pj = 0.005;               // per integrated lane-bit event
  double adc_per_conversion_pj = 2.0;  // per output conversion
  double sram_per_byte_pj = 1.0;       // per byte moved
};

struct PhotonicParams {
  double bitrate_gbps = 30.0;
  double oag_optical_power_uw = 0.5;
  double insertion_loss_db_per_oag = 1.0;
  double splitter_excess_loss_db = 0.05;
  double propagation_loss_db = 2.0;
  double detector_sensitivity_dbm = -40.0;
  double laser_wallplug_efficiency = 0.2;
  double laser_power_dbm = 1.0;  // per wavelength, per VDPE
  EnergyPerBit energy_per_bit;

  void validate() const;  // throws ConfigError

  /// Reads "<prefix>.field" keys (e.g. photonic.bitrate_gbps,
  /// photonic.energy_per_bit.serializer_pj) on top of `base`.
  static PhotonicParams from_config(const KeyValueConfig& cfg, const PhotonicParams& base,
                                    const std::string& prefix = "photonic");
  static PhotonicParams from_config(const KeyValueConfig& cfg);
};

struct ArchConfig {
  std::uint32_t vdpe_count = 32;
  std::uint32_t lanes_per_vdpe = 1024;
  std::uint32_t wavelengths = 4;
  vdpe::VdpeConfig vdpe;

  std::uint64_t engines() const { return std::uint64_t{vdpe_count} * wavelengths; }

  /// Throws ConfigError, including when lanes_per_vdpe exceeds the optical
  /// budget of `params`.
  void validate(const PhotonicParams& params) const;
};

enum class EnergyComponent : std::uint8_t { Serializer, BToS, Oag, Pca, Adc, Laser, Memory };

inline constexpr std::array<EnergyComponent, 7> kEnergyComponents{
    EnergyComponent::Serializer, EnergyComponent::BToS, EnergyComponent::Oag, EnergyComponent::Pca,
    EnergyComponent::Adc,        EnergyComponent::Laser, EnergyComponent::Memory};

std::string_view to_string(EnergyComponent c);

}  // namespace astra::photonic
