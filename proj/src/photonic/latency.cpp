#include "astra/photonic/latency.hpp"

namespace astra::photonic {

double bit_slot_seconds(const PhotonicParams& p) { return 1.0 / (p.bitrate_gbps * 1e9); }

GemmLatency gemm_latency(const GemmShape& g, const ArchConfig& arch, const PhotonicParams& p) {
  const std::uint64_t slots_per_pass = std::uint64_t{arch.vdpe.sc.stream_length} + 1;
  GemmLatency out;
  out.name = g.name;
  out.passes = (g.k + arch.lanes_per_vdpe - 1) / arch.lanes_per_vdpe;
  out.rounds = (g.m * g.n + arch.engines() - 1) / arch.engines();
  out.bit_slots = (out.rounds * out.passes + 1) * slots_per_pass;
  out.seconds = static_cast<double>(out.bit_slots) * bit_slot_seconds(p);
  return out;
}

LatencyReport workload_latency(const GemmWorkload& w, const ArchConfig& arch, const PhotonicParams& p) {
  LatencyReport r;
  r.gemms.reserve(w.gemms.size());
  for (const auto& g : w.gemms) {
    r.gemms.push_back(gemm_latency(g, arch, p));
    r.total_bit_slots += r.gemms.back().bit_slots;
    r.total_seconds += r.gemms.back().seconds;
  }
  return r;
}

}  // namespace astra::photonic
