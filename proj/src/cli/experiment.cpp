#include "astra/cli/experiment.hpp"

#include <algorithm>
#include <stdexcept>

#include "astra/common/error.hpp"

namespace astra::cli {

namespace {

std::uint32_t u32(const KeyValueConfig& kv, const std::string& key, std::uint32_t fallback) {
  const auto v = kv.get_uint(key, fallback);
  if (v > UINT32_MAX) throw ConfigError(key + " = " + std::to_string(v) + " is too large");
  return static_cast<std::uint32_t>(v);
}

// name:M:K:N
photonic::GemmShape parse_gemm(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 4 || parts[0].empty()) throw ConfigError("workload.gemms entry '" + text + "' is not name:M:K:N");
  photonic::GemmShape g;
  g.name = parts[0];
  try {
    std::size_t used = 0;
    for (auto [field, s] : {std::pair{&g.m, parts[1]}, std::pair{&g.k, parts[2]}, std::pair{&g.n, parts[3]}}) {
      *field = std::stoull(s, &used);
      if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
    }
  } catch (const std::exception&) {
    throw ConfigError("workload.gemms entry '" + text + "' has a non-integer dimension");
  }
  return g;
}

std::filesystem::path resolve(const KeyValueConfig& kv, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : kv.base_dir() / path;
}

}  // namespace

std::vector<std::string> known_keys() {
  return {"seed",
          "out_dir",
          "sc.stream_length",
          "sc.magnitude_bits",
          "sc.generator",
          "vdpe.lanes",
          "vdpe.adc_bits",
          "vdpe.accumulation",
          "arch.vdpe_count",
          "arch.wavelengths",
          "photonic.bitrate_gbps",
          "photonic.oag_optical_power_uw",
          "photonic.insertion_loss_db_per_oag",
          "photonic.splitter_excess_loss_db",
          "photonic.propagation_loss_db",
          "photonic.detector_sensitivity_dbm",
          "photonic.laser_wallplug_efficiency",
          "photonic.laser_power_dbm",
          "photonic.energy_per_bit.serializer_pj",
          "photonic.energy_per_bit.b_to_s_pj",
          "photonic.energy_per_bit.oag_pj",
          "photonic.energy_per_bit.pca_pj",
          "photonic.energy_per_bit.adc_per_conversion_pj",
          "photonic.energy_per_bit.sram_per_byte_pj",
          "workload.preset",
          "workload.gemms",
          "multiply.values_x",
          "multiply.values_w",
          "multiply.random_pairs",
          "multiply.trials",
          "multiply.stream_lengths",
          "multiply.generators",
          "scalability.lanes",
          "infer.model",
          "infer.dataset",
          "infer.max_items",
          "infer.stream_lengths",
          "baseline.name",
          "baseline.energy_per_mac_pj",
          "baseline.macs_per_second"};
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
  ExperimentConfig c;
  c.seed = kv.get_uint("seed", c.seed);
  c.out_dir = kv.get_string("out_dir", c.out_dir.string());

  auto& sc = c.vdpe.sc;
  sc.stream_length = u32(kv, "sc.stream_length", sc.stream_length);
  sc.magnitude_bits = u32(kv, "sc.magnitude_bits", sc.magnitude_bits);
  sc.generator = sc::parse_generator(kv.get_string("sc.generator", std::string(sc::to_string(sc.generator))));
  sc.master_seed = c.seed;
  c.vdpe.lanes = u32(kv, "vdpe.lanes", c.vdpe.lanes);
  const auto adc = kv.get_string("vdpe.adc_bits", "8");
  if (adc == "ideal") {
    c.vdpe.adc_bits.reset();
  } else {
    c.vdpe.adc_bits = u32(kv, "vdpe.adc_bits", 8);
  }
  c.vdpe.accumulation = vdpe::parse_accumulation(kv.get_string("vdpe.accumulation", "bit_exact"));
  c.vdpe.validate();

  c.photonic = photonic::PhotonicParams::from_config(kv);
  c.arch.vdpe_count = u32(kv, "arch.vdpe_count", c.arch.vdpe_count);
  c.arch.wavelengths = u32(kv, "arch.wavelengths", c.arch.wavelengths);
  c.arch.lanes_per_vdpe = c.vdpe.lanes;
  c.arch.vdpe = c.vdpe;
  c.arch.validate(c.photonic);

  if (kv.contains("workload.gemms")) {
    if (kv.contains("workload.preset")) throw ConfigError("set either workload.preset or workload.gemms, not both");
    c.workload_name = "custom";
    for (const auto& e : kv.get_list("workload.gemms", {})) c.workload.gemms.push_back(parse_gemm(e));
  } else {
    c.workload_name = kv.get_string("workload.preset", c.workload_name);
    c.workload = photonic::transformer_workload(photonic::transformer_preset(c.workload_name));
  }
  c.workload.validate();

  auto& m = c.multiply;
  m.values_x = kv.get_double_list("multiply.values_x", {});
  m.values_w = kv.get_double_list("multiply.values_w", {});
  if (m.values_x.size() != m.values_w.size()) throw ConfigError("multiply.values_x and multiply.values_w differ in length");
  m.random_pairs = kv.get_uint("multiply.random_pairs", m.random_pairs);
  m.trials = kv.get_uint("multiply.trials", m.trials);
  m.stream_lengths = kv.get_uint_list("multiply.stream_lengths", m.stream_lengths);
  if (kv.contains("multiply.generators")) {
    m.generators.clear();
    for (const auto& g : kv.get_list("multiply.generators", {})) m.generators.push_back(sc::parse_generator(g));
  }
  if (m.values_x.empty() && m.random_pairs == 0) throw ConfigError("multiply sweep has no operand pairs");
  if (m.trials == 0 || m.stream_lengths.empty() || m.generators.empty()) {
    throw ConfigError("multiply.trials, multiply.stream_lengths and multiply.generators must be non-empty");
  }
  for (double v : m.values_x) {
    if (std::abs(v) > 1.0) throw ConfigError("multiply.values_x entries must lie in [-1, 1]");
  }
  for (double v : m.values_w) {
    if (std::abs(v) > 1.0) throw ConfigError("multiply.values_w entries must lie in [-1, 1]");
  }
  for (auto n : m.stream_lengths) {
    sc::ScConfig probe = sc;
    probe.stream_length = static_cast<std::uint32_t>(std::min<std::uint64_t>(n, UINT32_MAX));
    probe.validate();
  }

  std::vector<std::uint64_t> lanes;
  for (std::uint64_t l = 1; l <= 4096; l *= 2) lanes.push_back(l);
  c.scalability_lanes = kv.get_uint_list("scalability.lanes", lanes);
  if (c.scalability_lanes.empty() ||
      std::any_of(c.scalability_lanes.begin(), c.scalability_lanes.end(), [](auto l) { return l == 0; })) {
    throw ConfigError("scalability.lanes must be a non-empty list of positive lane counts");
  }

  auto& inf = c.inference;
  // Defaults are relative to the working directory, explicit paths to the config file.
  inf.model_path = kv.contains("infer.model") ? resolve(kv, kv.get_string("infer.model", "")) : "fixtures/tiny_model.astt";
  inf.dataset_path =
      kv.contains("infer.dataset") ? resolve(kv, kv.get_string("infer.dataset", "")) : "fixtures/tiny_dataset.astt";
  inf.max_items = kv.get_uint("infer.max_items", inf.max_items);
  inf.stream_lengths = kv.get_uint_list("infer.stream_lengths", inf.stream_lengths);
  if (inf.stream_lengths.empty()) throw ConfigError("infer.stream_lengths must be non-empty");
  for (auto n : inf.stream_lengths) {
    sc::ScConfig probe = sc;
    probe.stream_length = static_cast<std::uint32_t>(std::min<std::uint64_t>(n, UINT32_MAX));
    probe.validate();
  }

  if (!kv.keys_with_prefix("baseline.").empty()) {
    photonic::BaselineParams b;
    b.name = kv.get_string("baseline.name", "baseline");
    b.energy_per_mac_pj = kv.get_double("baseline.energy_per_mac_pj", 0.0);
    b.macs_per_second = kv.get_double("baseline.macs_per_second", 0.0);
    if (!(b.energy_per_mac_pj > 0.0) || !(b.macs_per_second > 0.0)) {
      throw ConfigError("baseline.energy_per_mac_pj and baseline.macs_per_second must be positive");
    }
    c.baseline = b;
  }

  const auto unused = kv.unused_keys();
  if (!unused.empty()) {
    std::string list;
    for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown config key(s): " + list);
  }
  return c;
}

}  // namespace astra::cli
