// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "astra/common/hash.hpp"
#include "astra/model/evaluate.hpp"
#include "astra/photonic/budget.hpp"
#include "astra/photonic/energy.hpp"
#include "astra/photonic/latency.hpp"
#include "astra/photonic/workload.hpp"
#include "astra/sc/ops.hpp"
#include "bit_oracle.hpp"

using namespace astra;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string printf_string(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<std::pair<sc::FixedPointValue, sc::FixedPointValue>> random_pairs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<sc::FixedPointValue, sc::FixedPointValue>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = u(rng);
    const double w = u(rng);
    out.emplace_back(sc::quantize(x, 8, 1.0), sc::quantize(w, 8, 1.0));
  }
  return out;
}

double decoded_product(const sc::FixedPointValue& x, const sc::FixedPointValue& w, const sc::ScConfig& cfg,
                       std::size_t pair) {
  const auto cx = sc::RngChannel::create(cfg.generator, cfg.master_seed, sc::ChannelId::make(sc::OperandRole::Left, pair));
  const auto cw = sc::RngChannel::create(cfg.generator, cfg.master_seed, sc::ChannelId::make(sc::OperandRole::Right, pair));
  return sc::stochastic_to_value(
      sc::ossm_multiply(sc::binary_to_stochastic(x, cfg, cx), sc::binary_to_stochastic(w, cfg, cw)), cfg);
}

Outcome sc_unbiasedness() {
  const auto pairs = random_pairs(1000, 101);
  sc::ScConfig cfg{128, 8, sc::Generator::Lfsr, 0};
  std::size_t within = 0;
  double worst = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [x, w] = pairs[p];
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 256; ++s) {
      cfg.master_seed = hash_combine(0xc1, s);
      sum += decoded_product(x, w, cfg, p);
    }
    const double bias = std::fabs(sum / 256.0 - x.to_real() * w.to_real());
    worst = std::max(worst, bias);
    within += bias <= 0.01;
  }
  const double frac = static_cast<double>(within) / static_cast<double>(pairs.size());
  return {frac >= 0.99, printf_string("%.1f%% of 1000 pairs within 0.01 FS (need >= 99%%), worst bias %.4f", 100 * frac, worst)};
}

Outcome error_scaling() {
  const auto pairs = random_pairs(1000, 202);
  double mse64 = 0.0, mse128 = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [x, w] = pairs[p];
    const double exact = x.to_real() * w.to_real();
    for (std::uint64_t s = 0; s < 64; ++s) {
      const auto seed = hash_combine(0xc2, s);
      const double e64 = decoded_product(x, w, {64, 8, sc::Generator::Lfsr, seed}, p) - exact;
      const double e128 = decoded_product(x, w, {128, 8, sc::Generator::Lfsr, seed}, p) - exact;
      mse64 += e64 * e64;
      mse128 += e128 * e128;
    }
  }
  const double ratio = mse64 / mse128;
  return {ratio >= 1.5 && ratio <= 2.7, printf_string("MSE(N=64)/MSE(N=128) = %.3f over 1000 pairs x 64 seeds (need [1.5, 2.7])", ratio)};
}

// Every signed operand assignment for K <= 4, b <= 3, N in {1,2,4,8} under all
// three generators, except K = 4 with b = 3 (15^8 assignments per setting):
// there all 8^8 magnitude assignments run, each with a sign pattern that
// cycles through all 2^8 patterns.
Outcome exhaustive_oracle() {
  std::uint64_t instances = 0, mismatches = 0;
  std::string first_mismatch;
  for (auto gen : {sc::Generator::LowDiscrepancy, sc::Generator::Lfsr, sc::Generator::ExhaustiveUnary}) {
    for (std::uint32_t b = 1; b <= 3; ++b) {
      for (std::size_t k = 1; k <= 4; ++k) {
        for (std::uint32_t n : {1u, 2u, 4u, 8u}) {
          vdpe::VdpeConfig cfg;
          cfg.lanes = 2;  // K = 3, 4 take two passes
          cfg.sc = {n, b, gen, 0xc3};
          const vdpe::DotEngine engine(cfg, k);
          const testing::OracleChannels ch(cfg.sc, k);

          // Per-lane oracle charge for every (signed x, signed w) pair.
          const int codes = (1 << b);
          const int values = 2 * codes - 1;  // signed codes -(2^b-1) .. 2^b-1
          const auto fp = [&](int v) { return sc::FixedPointValue{v < 0, static_cast<std::uint32_t>(std::abs(v)), b, 1.0}; };
          std::vector<testing::OracleDot> lane(k * values * values);
          for (std::size_t l = 0; l < k; ++l) {
            for (int xi = 0; xi < values; ++xi) {
              for (int wi = 0; wi < values; ++wi) {
                const auto x = fp(xi - (codes - 1));
                const auto w = fp(wi - (codes - 1));
                auto& o = lane[(l * values + xi) * values + wi];
                for (std::uint32_t i = 0; i < n; ++i) {
                  if (testing::oracle_bit(x.magnitude_code, b, ch.x[l][i]) && testing::oracle_bit(w.magnitude_code, b, ch.w[l][i])) {
                    (x.negative != w.negative ? o.negative : o.positive) += 1;
                  }
                }
              }
            }
          }

          const bool sampled = k == 4 && b == 3;
          const std::uint64_t radix = sampled ? static_cast<std::uint64_t>(codes) : static_cast<std::uint64_t>(values);
          std::uint64_t total = 1;
          for (std::size_t d = 0; d < 2 * k; ++d) total *= radix;

          std::vector<sc::FixedPointValue> xs(k), ws(k);
          std::vector<int> digit(2 * k, 0);
          for (std::uint64_t idx = 0; idx < total; ++idx) {
            if (idx > 0) {
              for (std::size_t d = 0; d < 2 * k && ++digit[d] == static_cast<int>(radix); ++d) digit[d] = 0;
            }
            std::uint64_t pos = 0, neg = 0;
            for (std::size_t l = 0; l < k; ++l) {
              int xv, wv;
              if (sampled) {
                const std::uint64_t signs = idx % 256;
                xv = digit[l] * ((signs >> l) & 1 ? -1 : 1);
                wv = digit[k + l] * ((signs >> (k + l)) & 1 ? -1 : 1);
              } else {
                xv = digit[l] - (codes - 1);
                wv = digit[k + l] - (codes - 1);
              }
              xs[l] = fp(xv);
              ws[l] = fp(wv);
              const auto& o = lane[(l * values + (xv + codes - 1)) * values + (wv + codes - 1)];
              pos += o.positive;
              neg += o.negative;
            }
            const double analog = (static_cast<double>(pos) - static_cast<double>(neg)) / n;
            const double expect = testing::oracle_adc(analog, k, cfg);
            const auto got = engine.dot(xs, ws);
            ++instances;
            if (got.charge.positive_charge != pos || got.charge.negative_charge != neg || got.value != expect) {
              if (mismatches++ == 0) {
                first_mismatch = printf_string(" first: %s K=%zu b=%u N=%u index %llu", std::string(sc::to_string(gen)).c_str(),
                                               k, b, n, static_cast<unsigned long long>(idx));
              }
            }
          }
        }
      }
    }
  }
  return {mismatches == 0,
          printf_string("%llu instances, %llu mismatches%s", static_cast<unsigned long long>(instances),
                        static_cast<unsigned long long>(mismatches), first_mismatch.c_str())};
}

struct Fixture {
  model::TinyTransformer model;
  model::Dataset data;
};

const Fixture& fixture() {
  static const Fixture f{model::TinyTransformer::load(ASTRA_SOURCE_DIR "/fixtures/tiny_model.astt"),
                         model::Dataset::load(ASTRA_SOURCE_DIR "/fixtures/tiny_dataset.astt")};
  return f;
}

Outcome degenerate_limit() {
  const auto& f = fixture();
  model::ForwardOptions quant;
  quant.mode = model::Mode::Quantized;
  model::ForwardOptions stoch;
  stoch.mode = model::Mode::Stochastic;
  stoch.vdpe.accumulation = vdpe::Accumulation::ExpectationModel;
  stoch.vdpe.adc_bits.reset();
  stoch.seed = 7;
  const auto q = model::forward_all(f.model, f.data, quant);
  const auto s = model::forward_all(f.model, f.data, stoch);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < q.size(); ++i) differing += q[i] != s[i];
  return {differing == 0, printf_string("%zu of %zu items with any differing logit bit", differing, q.size())};
}

Outcome scalability() {
  const photonic::PhotonicParams p;
  const auto lanes = photonic::max_lanes_per_wavelength(p, p.laser_power_dbm);
  bool round_trip = true;
  for (std::uint64_t l = 1; l <= 4096; l *= 2) {
    round_trip = round_trip && photonic::max_lanes_per_wavelength(p, photonic::required_laser_power(l, p)) >= l;
  }
  return {lanes >= 1024 && round_trip,
          printf_string("max lanes %llu at %.2f dBm (need >= 1024); round trip over 1..4096 %s",
                        static_cast<unsigned long long>(lanes), p.laser_power_dbm, round_trip ? "holds" : "BROKEN")};
}

Outcome energy_shape() {
  const photonic::PhotonicParams p;
  const photonic::ArchConfig arch;
  const auto r = photonic::workload_energy(photonic::transformer_workload(photonic::transformer_preset("tiny")), arch, p);
  std::vector<std::pair<double, std::string>> ranked;
  for (auto c : photonic::kEnergyComponents) ranked.emplace_back(r[c], std::string(photonic::to_string(c)));
  std::sort(ranked.rbegin(), ranked.rend());
  const std::set<std::string> top{ranked[0].second, ranked[1].second};
  bool dac = false;
  for (auto c : photonic::kEnergyComponents) dac = dac || photonic::to_string(c).find("dac") != std::string_view::npos;
  const bool ok = top == std::set<std::string>{"serializer", "oag"} && !dac;
  return {ok, printf_string("top two: %s %.1f%%, %s %.1f%%; dac component %s", ranked[0].second.c_str(),
                            100 * ranked[0].first / r.total(), ranked[1].second.c_str(), 100 * ranked[1].first / r.total(),
                            dac ? "PRESENT" : "absent")};
}

Outcome latency_formula() {
  const photonic::PhotonicParams p;
  photonic::ArchConfig one;
  one.vdpe_count = 1;
  one.wavelengths = 1;
  one.lanes_per_vdpe = 1024;
  const double s = photonic::gemm_latency({"dot", 1, 1024, 1}, one, p).seconds;
  const double slot = 1.0 / (p.bitrate_gbps * 1e9);
  const auto w = photonic::transformer_workload(photonic::transformer_preset("bert-base"));
  const photonic::ArchConfig arch;
  const auto report = photonic::workload_latency(w, arch, p);
  double sum = 0.0;
  for (const auto& g : w.gemms) sum += photonic::gemm_latency(g, arch, p).seconds;
  const double rel = std::fabs(report.total_seconds - sum) / sum;
  return {std::fabs(s - 8.6e-9) <= slot && rel <= 1e-12,
          printf_string("(1,1024,1) = %.4f ns (8.6 +- %.4f); workload vs sum rel diff %.1e", s * 1e9, slot * 1e9, rel)};
}

Outcome desk_accuracy() {
  const auto& f = fixture();
  model::ForwardOptions exact;
  model::ForwardOptions stoch;
  stoch.mode = model::Mode::Stochastic;
  stoch.seed = 1;
  const auto r = model::evaluate(f.model, f.data, exact, stoch);
  return {r.mean_relative_error <= 0.02 && r.agreement >= 0.98,
          printf_string("N=128 %s, %u-bit ADC: mean rel logit error %.4f (need <= 0.02), agreement %.4f (need >= 0.98), %zu items",
                        std::string(sc::to_string(stoch.vdpe.sc.generator)).c_str(), *stoch.vdpe.adc_bits,
                        r.mean_relative_error, r.agreement, r.items)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  const auto root = std::filesystem::temp_directory_path() / ("astra-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  const std::string common = " --config " ASTRA_SOURCE_DIR "/configs/default.cfg --seed 42"
                             " --set infer.max_items=48 --set infer.stream_lengths=64,128"
                             " --set baseline.energy_per_mac_pj=1 --set baseline.macs_per_second=1e12";
  const std::vector<std::string> subs{"multiply-sweep", "scalability", "energy-breakdown",
                                      "infer-compare",  "latency",     "baseline-compare"};
  const std::vector<std::pair<std::string, std::string>> runs{{"a", "1"}, {"b", "1"}, {"c", "4"}};
  std::size_t compared = 0;
  std::string problems;
  for (const auto& sub : subs) {
    for (const auto& [dir, threads] : runs) {
      const std::string cmd = "ASTRA_SIM_THREADS=" + threads + " " ASTRA_SIM_BIN " " + sub + common + " --out " +
                              (root / dir).string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) problems += " " + sub + "(exit)";
    }
    const auto name = sub + ".csv";
    const auto a = slurp(root / "a" / name);
    if (a.empty()) problems += " " + sub + "(empty)";
    for (const char* other : {"b", "c"}) {
      ++compared;
      if (slurp(root / other / name) != a) problems += " " + sub + "(" + other + ")";
    }
  }
  std::filesystem::remove_all(root);
  return {problems.empty(), printf_string("%zu CSV pairs compared (threads 1, 1, 4)%s%s", compared,
                                          problems.empty() ? "" : "; differing:", problems.c_str())};
}

}  // namespace

// Optional arguments select criteria by number: acceptance 3 8
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::tuple<int, const char*, std::function<Outcome()>>> criteria{
      {1, "SC multiply unbiasedness (LFSR, N=128)", sc_unbiasedness},
      {2, "SC error scaling N=64 vs N=128", error_scaling},
      {3, "exhaustive bit-level oracle equivalence", exhaustive_oracle},
      {4, "degenerate-limit equivalence on the fixture", degenerate_limit},
      {5, "lanes per wavelength and budget round trip", scalability},
      {6, "energy breakdown shape", energy_shape},
      {7, "latency formula", latency_formula},
      {8, "desk-scale accuracy on the fixture", desk_accuracy},
      {9, "CLI determinism across runs and thread counts", cli_determinism},
  };
  int failed = 0, ran = 0;
  for (const auto& [id, name, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
