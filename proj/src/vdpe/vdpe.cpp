#include "astra/vdpe/vdpe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "astra/common/error.hpp"
#include "astra/common/parallel.hpp"
#include "astra/kernels/bitstream.hpp"
#include "astra/sc/ops.hpp"
#include "astra/sc/rng.hpp"

namespace astra::vdpe {

std::string_view to_string(Accumulation a) {
  return a == Accumulation::BitExact ? "bit_exact" : "expectation";
}

Accumulation parse_accumulation(std::string_view name) {
  if (name == "bit_exact") return Accumulation::BitExact;
  if (name == "expectation") return Accumulation::ExpectationModel;
  throw ConfigError("unknown accumulation mode '" + std::string(name) + "' (expected bit_exact or expectation)");
}

void VdpeConfig::validate() const {
  sc.validate();
  if (lanes == 0) throw ConfigError("vdpe.lanes must be >= 1");
  if (adc_bits && (*adc_bits < 4 || *adc_bits > 16)) {
    throw ConfigError("vdpe.adc_bits must be in [4, 16] or 'ideal', got " + std::to_string(*adc_bits));
  }
}

double AccumulatorState::analog_sum(std::uint32_t stream_length) const {
  const auto diff = static_cast<std::int64_t>(positive_charge) - static_cast<std::int64_t>(negative_charge);
  return std::ldexp(static_cast<double>(diff), -static_cast<int>(fraction_bits)) / static_cast<double>(stream_length);
}

std::vector<LaneAssignment> tile_vector(std::size_t k, std::size_t lanes) {
  if (k == 0 || lanes == 0) throw std::invalid_argument("tile_vector: k and lanes must be >= 1");
  std::vector<LaneAssignment> passes;
  passes.reserve((k + lanes - 1) / lanes);
  for (std::size_t begin = 0, p = 0; begin < k; begin += lanes, ++p) {
    passes.push_back({p, begin, std::min(k, begin + lanes)});
  }
  return passes;
}

double adc_quantize(double analog_sum, std::size_t k, const VdpeConfig& cfg) {
  const auto range = static_cast<double>(k);
  if (!(std::fabs(analog_sum) <= range)) throw std::domain_error("accumulator overflow");
  if (!cfg.adc_bits) return analog_sum;
  const double top = std::ldexp(1.0, static_cast<int>(*cfg.adc_bits) - 1) - 1.0;
  const double step = range / top;
  const double code = std::clamp(std::nearbyint(analog_sum / step), -top, top);
  return code * step;
}

namespace {

struct Operands {
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;
  std::vector<std::uint64_t> signs;

  // Every slot is fully rewritten by encode(), so stale contents are harmless.
  void resize(std::size_t count, std::size_t words_per_stream) {
    words = words_per_stream;
    bits.resize(count * words);
    signs.resize(count * words);
  }

  void encode(std::size_t slot, const sc::FixedPointValue& v, std::span<const std::uint16_t> thresholds) {
    std::span<std::uint64_t> out(bits.data() + slot * words, words);
    kernels::encode_threshold(sc::comparator_level(v), thresholds, out);
    const std::uint64_t s = v.negative ? ~std::uint64_t{0} : 0;
    for (std::size_t i = 0; i < words; ++i) signs[slot * words + i] = s;
  }

  std::span<const std::uint64_t> bit_range(std::size_t first, std::size_t last) const {
    return {bits.data() + first * words, (last - first) * words};
  }
  std::span<const std::uint64_t> sign_range(std::size_t first, std::size_t last) const {
    return {signs.data() + first * words, (last - first) * words};
  }
};

void check_uniform(std::span<const sc::FixedPointValue> v, std::uint32_t bits, const char* what) {
  for (const auto& e : v) {
    if (e.magnitude_bits != bits) {
      throw std::invalid_argument(std::string("vdpe: ") + what + " operand width differs from sc.magnitude_bits");
    }
    if (e.scale != v.front().scale) throw std::invalid_argument(std::string("vdpe: ") + what + " operands must share one scale");
  }
}

void add_expected(AccumulatorState& acc, std::uint32_t a_code, std::uint32_t b_code, bool negative,
                  std::uint32_t stream_length) {
  const std::uint64_t units = std::uint64_t{a_code} * b_code * stream_length;
  if (negative) {
    acc.negative_charge += units;
  } else {
    acc.positive_charge += units;
  }
}

}  // namespace

DotEngine::DotEngine(const VdpeConfig& cfg, std::size_t k)
    : cfg_(cfg), k_(k), words_(kernels::words_for_bits(cfg.sc.stream_length)) {
  cfg_.validate();
  if (k == 0) throw std::invalid_argument("DotEngine: k must be >= 1");
  const std::size_t n = cfg_.sc.stream_length;
  if (cfg_.accumulation == Accumulation::BitExact) {
    x_thresholds_.resize(k * n);
    w_thresholds_.resize(k * n);
    for (std::size_t i = 0; i < k; ++i) {
      sc::RngChannel::create(cfg_.sc.generator, cfg_.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Left, i))
          .fill_thresholds({x_thresholds_.data() + i * n, n});
      sc::RngChannel::create(cfg_.sc.generator, cfg_.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Right, i))
          .fill_thresholds({w_thresholds_.data() + i * n, n});
    }
  }
}

DotResult DotEngine::dot(std::span<const sc::FixedPointValue> x, std::span<const sc::FixedPointValue> w) const {
  if (x.size() != k_ || w.size() != k_) {
    throw std::invalid_argument("vdpe_dot: operand lengths " + std::to_string(x.size()) + "/" +
                                std::to_string(w.size()) + " do not match engine length " + std::to_string(k_));
  }
  check_uniform(x, cfg_.sc.magnitude_bits, "x");
  check_uniform(w, cfg_.sc.magnitude_bits, "w");

  const std::uint32_t n = cfg_.sc.stream_length;
  const std::size_t lanes = cfg_.lanes;
  DotResult result;
  result.passes = (k_ + lanes - 1) / lanes;

  if (cfg_.accumulation == Accumulation::ExpectationModel) {
    result.charge.fraction_bits = 2 * cfg_.sc.magnitude_bits;
    for (std::size_t i = 0; i < k_; ++i) {
      add_expected(result.charge, x[i].magnitude_code, w[i].magnitude_code, x[i].negative != w[i].negative, n);
    }
  } else {
    thread_local Operands xs;
    thread_local Operands ws;
    xs.resize(k_, words_);
    ws.resize(k_, words_);
    for (std::size_t i = 0; i < k_; ++i) {
      xs.encode(i, x[i], {x_thresholds_.data() + i * n, n});
      ws.encode(i, w[i], {w_thresholds_.data() + i * n, n});
    }
    for (std::size_t begin = 0; begin < k_; begin += lanes) {
      const std::size_t end = std::min(k_, begin + lanes);
      const auto rails = kernels::and_popcount_rails(xs.bit_range(begin, end), ws.bit_range(begin, end),
                                                     xs.sign_range(begin, end), ws.sign_range(begin, end));
      result.charge.positive_charge += rails.positive;
      result.charge.negative_charge += rails.negative;
    }
  }

  const double converted = adc_quantize(result.charge.analog_sum(n), k_, cfg_);
  result.value = converted * (x.front().scale * w.front().scale);
  return result;
}

DotResult vdpe_dot_detailed(const DotProductJob& job, const VdpeConfig& cfg) {
  if (job.x.size() != job.w.size()) throw std::invalid_argument("vdpe_dot: x and w lengths differ");
  return DotEngine(cfg, job.x.size()).dot(job.x, job.w);
}

double vdpe_dot(const DotProductJob& job, const VdpeConfig& cfg) { return vdpe_dot_detailed(job, cfg).value; }

Matrix vdpe_matmul(const sc::QuantizedMatrix& a, const sc::QuantizedMatrix& b, const VdpeConfig& cfg, MatmulStats* stats) {
  cfg.validate();
  if (a.cols != b.rows) {
    throw std::invalid_argument("vdpe_matmul: shapes " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                                " and " + std::to_string(b.rows) + "x" + std::to_string(b.cols) + " are not conformable");
  }
  if (a.magnitude_bits != cfg.sc.magnitude_bits || b.magnitude_bits != cfg.sc.magnitude_bits) {
    throw std::invalid_argument("vdpe_matmul: operand width differs from sc.magnitude_bits");
  }
  const std::size_t m_dim = a.rows;
  const std::size_t k_dim = a.cols;
  const std::size_t n_dim = b.cols;
  const std::uint32_t n = cfg.sc.stream_length;
  const double scale = a.scale * b.scale;
  const auto passes = tile_vector(k_dim, cfg.lanes);

  Matrix out(m_dim, n_dim);
  std::vector<MatmulStats> row_stats(m_dim);

  if (cfg.accumulation == Accumulation::ExpectationModel) {
    parallel_for(m_dim, [&](std::size_t m) {
      auto& rs = row_stats[m];
      for (std::size_t col = 0; col < n_dim; ++col) {
        AccumulatorState acc;
        acc.fraction_bits = 2 * cfg.sc.magnitude_bits;
        for (const auto& pass : passes) {
          for (std::size_t k = pass.begin; k < pass.end; ++k) {
            const std::int32_t ac = a.codes[m * k_dim + k];
            const std::int32_t bc = b.codes[k * n_dim + col];
            add_expected(acc, static_cast<std::uint32_t>(std::abs(ac)), static_cast<std::uint32_t>(std::abs(bc)),
                         (ac < 0) != (bc < 0), n);
          }
        }
        out(m, col) = adc_quantize(acc.analog_sum(n), k_dim, cfg) * scale;
        rs.adc_conversions += 1;
        rs.passes += passes.size();
        rs.positive_charge += acc.positive_charge;
        rs.negative_charge += acc.negative_charge;
      }
    });
  } else {
    const std::size_t words = kernels::words_for_bits(n);
    Operands left;
    Operands right;  // column-major: slot n*K + k
    left.resize(m_dim * k_dim, words);
    right.resize(k_dim * n_dim, words);

    parallel_for(m_dim, [&](std::size_t m) {
      std::vector<std::uint16_t> thresholds(n);
      for (std::size_t k = 0; k < k_dim; ++k) {
        const std::size_t index = m * k_dim + k;
        sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Left, index))
            .fill_thresholds(thresholds);
        left.encode(index, a.at(m, k), thresholds);
      }
    });
    parallel_for(n_dim, [&](std::size_t col) {
      std::vector<std::uint16_t> thresholds(n);
      for (std::size_t k = 0; k < k_dim; ++k) {
        sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed,
                               sc::ChannelId::make(sc::OperandRole::Right, k * n_dim + col))
            .fill_thresholds(thresholds);
        right.encode(col * k_dim + k, b.at(k, col), thresholds);
      }
    });

    parallel_for(m_dim, [&](std::size_t m) {
      auto& rs = row_stats[m];
      for (std::size_t col = 0; col < n_dim; ++col) {
        AccumulatorState acc;
        const std::size_t a0 = m * k_dim;
        const std::size_t b0 = col * k_dim;
        for (const auto& pass : passes) {
          const auto rails =
              kernels::and_popcount_rails(left.bit_range(a0 + pass.begin, a0 + pass.end),
                                          right.bit_range(b0 + pass.begin, b0 + pass.end),
                                          left.sign_range(a0 + pass.begin, a0 + pass.end),
                                          right.sign_range(b0 + pass.begin, b0 + pass.end));
          acc.positive_charge += rails.positive;
          acc.negative_charge += rails.negative;
        }
        out(m, col) = adc_quantize(acc.analog_sum(n), k_dim, cfg) * scale;
        rs.adc_conversions += 1;
        rs.passes += passes.size();
        rs.positive_charge += acc.positive_charge;
        rs.negative_charge += acc.negative_charge;
      }
    });
  }

  if (stats != nullptr) {
    for (const auto& rs : row_stats) {
      stats->adc_conversions += rs.adc_conversions;
      stats->passes += rs.passes;
      stats->positive_charge += rs.positive_charge;
      stats->negative_charge += rs.negative_charge;
    }
  }
  return out;
}

}  // namespace astra::vdpe
