#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "astra/photonic/params.hpp"
#include "astra/photonic/workload.hpp"

namespace astra::photonic {

struct GemmLatency {
  std::string name;
  std::uint64_t passes = 0;     // ceil(K / lanes_per_vdpe)
  std::uint64_t rounds = 0;     // ceil(M*N / engines)
  std::uint64_t bit_slots = 0;  // (rounds * passes + 1) * (stream_length + 1)
  double seconds = 0.0;
};

struct LatencyReport {
  std::vector<GemmLatency> gemms;
  std::uint64_t total_bit_slots = 0;
  double total_seconds = 0.0;
};

/// Seconds of one bit slot.
double bit_slot_seconds(const PhotonicParams& p);

/// Output elements round-robin over vdpe_count * wavelengths engines; each
/// pass streams stream_length magnitude bits plus one sign slot; one extra
/// pass of serializer fill per GEMM.
GemmLatency gemm_latency(const GemmShape& g, const ArchConfig& arch, const PhotonicParams& p);

/// Serial schedule: the sum of per-GEMM latencies.
LatencyReport workload_latency(const GemmWorkload& w, const ArchConfig& arch, const PhotonicParams& p);

}  // namespace astra::photonic
