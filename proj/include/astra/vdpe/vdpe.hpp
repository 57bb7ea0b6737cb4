#pragma once

// Functional model of a homodyne vector dot-product engine: L OSSM lanes on
// one wavelength, product 1-bits integrated on a positive or negative
// photo-charge rail according to the product sign, a differential read and
// a single ADC conversion per output.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "astra/common/matrix.hpp"
#include "astra/sc/quantized_matrix.hpp"
#include "astra/sc/types.hpp"

namespace astra::vdpe {

enum class Accumulation : std::uint8_t {
  BitExact,          // simulate every stream bit
  ExpectationModel,  // each product contributes its expected 1-count exactly
};

std::string_view to_string(Accumulation a);
Accumulation parse_accumulation(std::string_view name);  // "bit_exact" | "expectation"

struct VdpeConfig {
  std::uint32_t lanes = 1024;
  sc::ScConfig sc;
  /// Converter resolution; nullopt models an ideal converter.
  std::optional<std::uint32_t> adc_bits = 8;
  Accumulation accumulation = Accumulation::BitExact;

  void validate() const;  // throws ConfigError
};

/// Photo-charge on the two rails. Charges count detected 1-bits in units of
/// 2^-fraction_bits bits (fraction_bits is 0 for BitExact accumulation).
struct AccumulatorState {
  std::uint64_t positive_charge = 0;
  std::uint64_t negative_charge = 0;
  std::uint32_t fraction_bits = 0;

  /// (positive - negative) / stream_length, in units of one full-scale product.
  double analog_sum(std::uint32_t stream_length) const;

  friend bool operator==(const AccumulatorState&, const AccumulatorState&) = default;
};

struct DotProductJob {
  std::vector<sc::FixedPointValue> x;
  std::vector<sc::FixedPointValue> w;
};

/// Lanes [begin, end) of the vector occupy lanes [0, end - begin) in `pass`.
struct LaneAssignment {
  std::size_t pass = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t active_lanes() const { return end - begin; }
  friend bool operator==(const LaneAssignment&, const LaneAssignment&) = default;
};

/// ceil(k / lanes) passes covering [0, k) once, in order.
std::vector<LaneAssignment> tile_vector(std::size_t k, std::size_t lanes);

/// Mid-tread uniform quantizer over [-k, k] with 2^bits - 1 levels (zero and
/// both range ends are exact levels). Returns the dequantized value; the
/// ideal converter returns its input. Throws std::domain_error
/// ("accumulator overflow") when |analog_sum| > k.
double adc_quantize(double analog_sum, std::size_t k, const VdpeConfig& cfg);

struct DotResult {
  double value = 0.0;  // ADC output times the operand scales
  AccumulatorState charge;
  std::size_t passes = 0;
};

/// Reusable engine for dot products of a fixed length. Lane i of the x
/// vector draws thresholds from channel (Left, i), lane i of w from
/// (Right, i); thresholds are generated once at construction.
class DotEngine {
 public:
  DotEngine(const VdpeConfig& cfg, std::size_t k);

  /// Both spans must have length k, one magnitude width matching the config
  /// and one scale per vector. Throws std::invalid_argument otherwise.
  DotResult dot(std::span<const sc::FixedPointValue> x, std::span<const sc::FixedPointValue> w) const;

  std::size_t length() const { return k_; }

 private:
  VdpeConfig cfg_;
  std::size_t k_;
  std::size_t words_;
  std::vector<std::uint16_t> x_thresholds_;  // k * stream_length
  std::vector<std::uint16_t> w_thresholds_;
};

DotResult vdpe_dot_detailed(const DotProductJob& job, const VdpeConfig& cfg);
double vdpe_dot(const DotProductJob& job, const VdpeConfig& cfg);

struct MatmulStats {
  std::uint64_t adc_conversions = 0;
  std::uint64_t passes = 0;
  std::uint64_t positive_charge = 0;
  std::uint64_t negative_charge = 0;
};

/// Output-stationary A (M x K) times B (K x N): one accumulator and one ADC
/// read per output element. Element A(m,k) uses channel (Left, m*K + k),
/// B(k,n) uses (Right, k*N + n). Output rows are computed in parallel; the
/// result does not depend on the worker count.
Matrix vdpe_matmul(const sc::QuantizedMatrix& a, const sc::QuantizedMatrix& b, const VdpeConfig& cfg,
                   MatmulStats* stats = nullptr);

}  // namespace astra::vdpe
