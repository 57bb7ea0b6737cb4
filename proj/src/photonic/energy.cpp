#include "astra/photonic/energy.hpp"

#include "astra/photonic/budget.hpp"
#include "astra/photonic/latency.hpp"

namespace astra::photonic {
namespace {

constexpr double kPico = 1e-12;

}  // namespace

double EnergyReport::total() const {
  double t = 0.0;
  for (double j : joules) t += j;
  return t;
}

double EnergyReport::percent(EnergyComponent c) const {
  const double t = total();
  return t > 0.0 ? 100.0 * (*this)[c] / t : 0.0;
}

EnergyReport& EnergyReport::operator+=(const EnergyReport& other) {
  for (std::size_t i = 0; i < joules.size(); ++i) joules[i] += other.joules[i];
  adc_conversions += other.adc_conversions;
  return *this;
}

GemmEvents gemm_events(const GemmShape& g, const ArchConfig& arch) {
  const std::uint64_t n_bits = arch.vdpe.sc.stream_length;
  const std::uint64_t operand_bytes = (arch.vdpe.sc.magnitude_bits + 1 + 7) / 8;
  const std::uint64_t output_bytes = arch.vdpe.adc_bits ? (*arch.vdpe.adc_bits + 7) / 8 : 4;
  GemmEvents e;
  e.operand_values = g.m * g.k + g.k * g.n;
  e.stream_bits = e.operand_values * (n_bits + 1);
  e.lane_bit_events = g.m * g.n * g.k * n_bits;
  e.adc_conversions = g.m * g.n;
  e.memory_bytes = e.operand_values * operand_bytes + e.adc_conversions * output_bytes;
  return e;
}

EnergyReport gemm_energy(const GemmShape& g, const ArchConfig& arch, const PhotonicParams& p) {
  const auto e = gemm_events(g, arch);
  const auto& pj = p.energy_per_bit;
  EnergyReport r;
  r[EnergyComponent::Serializer] = static_cast<double>(e.stream_bits) * pj.serializer_pj * kPico;
  r[EnergyComponent::BToS] = static_cast<double>(e.stream_bits) * pj.b_to_s_pj * kPico;
  r[EnergyComponent::Oag] = static_cast<double>(e.lane_bit_events) * pj.oag_pj * kPico;
  r[EnergyComponent::Pca] = static_cast<double>(e.lane_bit_events) * pj.pca_pj * kPico;
  r[EnergyComponent::Adc] = static_cast<double>(e.adc_conversions) * pj.adc_per_conversion_pj * kPico;
  const double laser_watts = static_cast<double>(arch.engines()) * dbm_to_mw(p.laser_power_dbm) * 1e-3 /
                             p.laser_wallplug_efficiency;
  r[EnergyComponent::Laser] = laser_watts * gemm_latency(g, arch, p).seconds;
  r[EnergyComponent::Memory] = static_cast<double>(e.memory_bytes) * pj.sram_per_byte_pj * kPico;
  r.adc_conversions = e.adc_conversions;
  return r;
}

EnergyReport workload_energy(const GemmWorkload& w, const ArchConfig& arch, const PhotonicParams& p) {
  EnergyReport total;
  for (const auto& g : w.gemms) total += gemm_energy(g, arch, p);
  return total;
}

}  // namespace astra::photonic
