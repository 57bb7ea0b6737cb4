#pragma once

#include <array>
#include <cstdint>

#include "astra/photonic/params.hpp"
#include "astra/photonic/workload.hpp"

namespace astra::photonic {

/// Joules per component. There is no DAC entry: operands reach the OAGs as
/// binary ON/OFF streams.
struct EnergyReport {
  std::array<double, kEnergyComponents.size()> joules{};
  std::uint64_t adc_conversions = 0;

  double operator[](EnergyComponent c) const { return joules[static_cast<std::size_t>(c)]; }
  double& operator[](EnergyComponent c) { return joules[static_cast<std::size_t>(c)]; }

  double total() const;
  /// Share of the total in percent (0 when the total is 0).
  double percent(EnergyComponent c) const;

  EnergyReport& operator+=(const EnergyReport& other);
};

/// Event counts behind one GEMM's energy.
struct GemmEvents {
  std::uint64_t operand_values = 0;  // M*K + K*N, each streamed once
  std::uint64_t stream_bits = 0;     // operand_values * (stream_length + 1)
  std::uint64_t lane_bit_events = 0; // M*N*K*stream_length
  std::uint64_t adc_conversions = 0; // M*N
  std::uint64_t memory_bytes = 0;
};

GemmEvents gemm_events(const GemmShape& g, const ArchConfig& arch);
EnergyReport gemm_energy(const GemmShape& g, const ArchConfig& arch, const PhotonicParams& p);
EnergyReport workload_energy(const GemmWorkload& w, const ArchConfig& arch, const PhotonicParams& p);

}  // namespace astra::photonic
