#include <cmath>
#include <random>
#include <stdexcept>

#include "astra/common/error.hpp"
#include "astra/sc/ops.hpp"
#include "astra/vdpe/vdpe.hpp"
#include "bit_oracle.hpp"
#include "doctest.h"

using namespace astra;
using namespace astra::vdpe;
using sc::FixedPointValue;

namespace {

VdpeConfig make_config(sc::Generator g = sc::Generator::LowDiscrepancy, std::uint32_t n = 128, std::uint32_t lanes = 1024) {
  VdpeConfig c;
  c.sc.generator = g;
  c.sc.stream_length = n;
  c.sc.master_seed = 17;
  c.lanes = lanes;
  return c;
}

std::vector<FixedPointValue> random_vector(std::mt19937_64& rng, std::size_t k, std::uint32_t bits = 8) {
  std::uniform_int_distribution<int> code(-(1 << bits) + 1, (1 << bits) - 1);
  std::vector<FixedPointValue> v(k);
  for (auto& e : v) {
    const int c = code(rng);
    e.negative = c < 0;
    e.magnitude_code = static_cast<std::uint32_t>(std::abs(c));
    e.magnitude_bits = bits;
  }
  return v;
}

double exact_dot(const std::vector<FixedPointValue>& x, const std::vector<FixedPointValue>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i].to_real() * w[i].to_real();
  return s;
}

sc::QuantizedMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  std::normal_distribution<double> d(0.0, 1.0);
  for (auto& v : m.data()) v = d(rng);
  return sc::QuantizedMatrix::quantize(m, 8);
}

}  // namespace

TEST_CASE("tile_vector") {
  SUBCASE("K = L is one pass") {
    const auto t = tile_vector(1024, 1024);
    REQUIRE(t.size() == 1);
    CHECK(t[0].active_lanes() == 1024);
  }
  SUBCASE("K = 1") {
    const auto t = tile_vector(1, 1024);
    REQUIRE(t.size() == 1);
    CHECK(t[0].active_lanes() == 1);
  }
  SUBCASE("K = 2500 over 1024 lanes") {
    const auto t = tile_vector(2500, 1024);
    REQUIRE(t.size() == 3);
    CHECK(t[0].active_lanes() == 1024);
    CHECK(t[1].active_lanes() == 1024);
    CHECK(t[2].active_lanes() == 452);
  }
  SUBCASE("covers every index exactly once") {
    for (std::size_t k : {1u, 7u, 64u, 1000u}) {
      for (std::size_t l : {1u, 3u, 64u, 2048u}) {
        std::vector<int> seen(k, 0);
        const auto t = tile_vector(k, l);
        CHECK(t.size() == (k + l - 1) / l);
        for (const auto& p : t) {
          CHECK(p.active_lanes() <= l);
          for (std::size_t i = p.begin; i < p.end; ++i) ++seen[i];
        }
        for (int s : seen) CHECK(s == 1);
      }
    }
  }
  CHECK_THROWS_AS(tile_vector(0, 4), std::invalid_argument);
}

TEST_CASE("adc_quantize") {
  auto cfg = make_config();
  CHECK(std::fabs(adc_quantize(0.0, 64, cfg)) <= 64.0 / 255.0);
  CHECK(adc_quantize(0.0, 64, cfg) == 0.0);
  CHECK(adc_quantize(64.0, 64, cfg) == doctest::Approx(64.0));
  CHECK(adc_quantize(-64.0, 64, cfg) == doctest::Approx(-64.0));

  // Direct evaluation of the quantizer: 127 levels per side over [-64, 64].
  const double step = 64.0 / 127.0;
  const double expected = std::nearbyint(0.37 * 64 / step) * step;
  CHECK(adc_quantize(0.37 * 64, 64, cfg) == doctest::Approx(expected));
  CHECK(std::fabs(adc_quantize(0.37 * 64, 64, cfg) - 0.37 * 64) <= 64.0 / 128.0);

  CHECK_THROWS_WITH_AS(adc_quantize(64.5, 64, cfg), "accumulator overflow", std::domain_error);
  cfg.adc_bits.reset();
  CHECK(adc_quantize(0.123456, 4, cfg) == 0.123456);
  cfg.adc_bits = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("vdpe_dot examples") {
  std::mt19937_64 rng(3);
  const auto cfg = make_config();

  SUBCASE("all-zero x gives exactly zero") {
    DotProductJob job{std::vector<FixedPointValue>(32), random_vector(rng, 32)};
    CHECK(vdpe_dot(job, cfg) == 0.0);
  }
  SUBCASE("single-lane passthrough") {
    const std::size_t k = 16;
    DotProductJob job{std::vector<FixedPointValue>(k), random_vector(rng, k)};
    job.x[5] = sc::quantize(1.0, 8, 1.0);
    const double adc_step = static_cast<double>(k) / 127.0;
    const double sc_step = 1.0 / 128.0 + 1.0 / 256.0;
    CHECK(std::fabs(vdpe_dot(job, cfg) - job.w[5].to_real()) <= adc_step + sc_step);
  }
  SUBCASE("K = 16 random vectors match the bit-level oracle exactly") {
    for (int trial = 0; trial < 50; ++trial) {
      DotProductJob job{random_vector(rng, 16), random_vector(rng, 16)};
      const auto got = vdpe_dot_detailed(job, cfg);
      const auto ref = testing::oracle_dot(job.x, job.w, cfg);
      CHECK(got.charge.positive_charge == ref.positive);
      CHECK(got.charge.negative_charge == ref.negative);
      CHECK(got.value == ref.value);
      // Per-product deviation of a (0,m,2)-net box count is a few bits; the
      // bound here is K products at 4 bits each plus one ADC step.
      const double bound = 16 * (4.0 / 128.0) + 16.0 / 127.0;
      CHECK(std::fabs(got.value - exact_dot(job.x, job.w)) <= bound);
    }
  }
  SUBCASE("mismatched or mixed operands are rejected") {
    DotProductJob job{random_vector(rng, 4), random_vector(rng, 5)};
    CHECK_THROWS_AS(vdpe_dot(job, cfg), std::invalid_argument);
    job.w = random_vector(rng, 4, 6);
    CHECK_THROWS_AS(vdpe_dot(job, cfg), std::invalid_argument);
  }
}

TEST_CASE("vdpe invariants") {
  std::mt19937_64 rng(11);

  SUBCASE("pass invariance: tiling does not change the charge") {
    for (auto g : {sc::Generator::LowDiscrepancy, sc::Generator::Lfsr}) {
      DotProductJob job{random_vector(rng, 100), random_vector(rng, 100)};
      const auto ref = vdpe_dot_detailed(job, make_config(g, 128, 1024));
      for (std::uint32_t lanes : {1u, 7u, 32u, 99u}) {
        const auto r = vdpe_dot_detailed(job, make_config(g, 128, lanes));
        CHECK(r.charge == ref.charge);
        CHECK(r.passes == (100 + lanes - 1) / lanes);
      }
    }
  }

  SUBCASE("mode agreement: expectation vs grid generators") {
    for (auto g : {sc::Generator::LowDiscrepancy, sc::Generator::ExhaustiveUnary}) {
      for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 64;
        DotProductJob job{random_vector(rng, k), random_vector(rng, k)};
        auto cfg = make_config(g, 128, 16);
        cfg.adc_bits.reset();
        const auto bit = vdpe_dot_detailed(job, cfg);
        cfg.accumulation = Accumulation::ExpectationModel;
        const auto expect = vdpe_dot_detailed(job, cfg);
        const double lane_passes = static_cast<double>(k);
        CHECK(std::fabs(bit.charge.analog_sum(128) - expect.charge.analog_sum(128)) * 128 <= lane_passes);
      }
    }
  }

  SUBCASE("conservation: rails sum to total product popcount") {
    auto cfg = make_config(sc::Generator::Lfsr, 64, 8);
    DotProductJob job{random_vector(rng, 20), random_vector(rng, 20)};
    const auto r = vdpe_dot_detailed(job, cfg);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < 20; ++i) {
      const auto x = sc::binary_to_stochastic(job.x[i], cfg.sc,
          sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Left, i)));
      const auto w = sc::binary_to_stochastic(job.w[i], cfg.sc,
          sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Right, i)));
      total += sc::ossm_multiply(x, w).stream.popcount();
    }
    CHECK(r.charge.positive_charge + r.charge.negative_charge == total);
  }

  SUBCASE("small instances match the oracle exactly") {
    for (auto g : {sc::Generator::LowDiscrepancy, sc::Generator::Lfsr, sc::Generator::ExhaustiveUnary}) {
      for (std::uint32_t n : {1u, 2u, 4u, 8u}) {
        auto cfg = make_config(g, n, 2);
        cfg.sc.magnitude_bits = 3;
        for (int trial = 0; trial < 200; ++trial) {
          const std::size_t k = 1 + trial % 4;
          DotProductJob job{random_vector(rng, k, 3), random_vector(rng, k, 3)};
          CHECK(vdpe_dot(job, cfg) == testing::oracle_dot(job.x, job.w, cfg).value);
        }
      }
    }
  }
}

TEST_CASE("vdpe_matmul") {
  std::mt19937_64 rng(21);
  const auto cfg = make_config();

  SUBCASE("full-scale identity reproduces B") {
    const std::size_t k = 8;
    sc::QuantizedMatrix eye{k, k, 8, 1.0, std::vector<std::int32_t>(k * k, 0)};
    for (std::size_t i = 0; i < k; ++i) eye.codes[i * k + i] = 255;
    const auto b = random_matrix(rng, k, 5);
    const auto out = vdpe_matmul(eye, b, cfg);
    const auto ref = b.dequantize();
    const double bound = (8.0 / 127.0 + 2.0 / 128.0) * b.scale;
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::fabs(out.data()[i] - ref.data()[i]) <= bound);
  }

  SUBCASE("1x1x1 is one OSSM product") {
    const auto a = random_matrix(rng, 1, 1);
    const auto b = random_matrix(rng, 1, 1);
    auto ideal = cfg;
    ideal.adc_bits.reset();
    const auto out = vdpe_matmul(a, b, ideal);
    const auto x = sc::binary_to_stochastic(a.at(0, 0), cfg.sc,
        sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Left, 0)));
    const auto w = sc::binary_to_stochastic(b.at(0, 0), cfg.sc,
        sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Right, 0)));
    CHECK(out(0, 0) == sc::stochastic_to_value(sc::ossm_multiply(x, w), cfg.sc) * a.scale * b.scale);
  }

  SUBCASE("random 8x16x8 against exact integer matmul") {
    const auto a = random_matrix(rng, 8, 16);
    const auto b = random_matrix(rng, 16, 8);
    MatmulStats stats;
    const auto out = vdpe_matmul(a, b, cfg, &stats);
    CHECK(stats.adc_conversions == 64);
    double sc_bound = 0.0;
    for (std::size_t m = 0; m < 8; ++m) {
      for (std::size_t n = 0; n < 8; ++n) {
        std::int64_t acc = 0;
        double var = 0.0;
        for (std::size_t k = 0; k < 16; ++k) {
          acc += std::int64_t{a.codes[m * 16 + k]} * b.codes[k * 8 + n];
          var += sc::sc_multiply_error_model(a.at(m, k).magnitude(), b.at(k, n).magnitude(), 128);
        }
        sc_bound = 4.0 * std::sqrt(var) + 16.0 / 128.0;
        const double exact = std::ldexp(static_cast<double>(acc), -16);
        const double adc_step = 16.0 / 127.0;
        CHECK(std::fabs(out(m, n) / (a.scale * b.scale) - exact) <= sc_bound + adc_step);
      }
    }
  }

  SUBCASE("rows match standalone dot engines with the matmul channel layout") {
    const auto a = random_matrix(rng, 3, 10);
    const auto b = random_matrix(rng, 10, 4);
    auto ideal = cfg;
    ideal.adc_bits.reset();
    MatmulStats stats;
    const auto out = vdpe_matmul(a, b, ideal, &stats);
    std::uint64_t pos = 0, neg = 0;
    for (std::size_t m = 0; m < 3; ++m) {
      for (std::size_t n = 0; n < 4; ++n) {
        double analog_pos = 0, analog_neg = 0;
        for (std::size_t k = 0; k < 10; ++k) {
          const auto x = sc::binary_to_stochastic(a.at(m, k), cfg.sc,
              sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Left, m * 10 + k)));
          const auto w = sc::binary_to_stochastic(b.at(k, n), cfg.sc,
              sc::RngChannel::create(cfg.sc.generator, cfg.sc.master_seed, sc::ChannelId::make(sc::OperandRole::Right, k * 4 + n)));
          const auto p = sc::ossm_multiply(x, w);
          (p.negative ? analog_neg : analog_pos) += static_cast<double>(p.stream.popcount());
          (p.negative ? neg : pos) += p.stream.popcount();
        }
        CHECK(out(m, n) == (analog_pos - analog_neg) / 128.0 * (a.scale * b.scale));
      }
    }
    CHECK(stats.positive_charge == pos);
    CHECK(stats.negative_charge == neg);
    CHECK(stats.adc_conversions == 12);
  }

  SUBCASE("output-stationary: one conversion per output regardless of K and tiling") {
    for (std::uint32_t lanes : {1u, 4u, 1024u}) {
      auto c = make_config(sc::Generator::Lfsr, 32, lanes);
      MatmulStats stats;
      vdpe_matmul(random_matrix(rng, 4, 9), random_matrix(rng, 9, 3), c, &stats);
      CHECK(stats.adc_conversions == 12);
      CHECK(stats.passes == 12 * ((9 + lanes - 1) / lanes));
    }
  }

  SUBCASE("non-conformable shapes") {
    CHECK_THROWS_AS(vdpe_matmul(random_matrix(rng, 2, 3), random_matrix(rng, 4, 2), cfg), std::invalid_argument);
  }
}
