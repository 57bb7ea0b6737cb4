#pragma once

// Merged experiment configuration read from flat dotted keys. Every key is
// read up front, so a typo anywhere in the file is rejected whatever the
// subcommand.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "astra/common/kv_config.hpp"
#include "astra/photonic/baseline.hpp"
#include "astra/photonic/params.hpp"
#include "astra/photonic/workload.hpp"
#include "astra/sc/types.hpp"

namespace astra::cli {

struct MultiplySweep {
  std::vector<double> values_x;  // paired with values_w when given
  std::vector<double> values_w;
  std::uint64_t random_pairs = 16;  // used when no explicit values
  std::uint64_t trials = 256;
  std::vector<std::uint64_t> stream_lengths{32, 64, 128, 256};
  std::vector<sc::Generator> generators{sc::Generator::LowDiscrepancy, sc::Generator::Lfsr};
};

struct InferenceSweep {
  std::filesystem::path model_path;
  std::filesystem::path dataset_path;
  std::uint64_t max_items = 0;  // 0 = whole dataset
  std::vector<std::uint64_t> stream_lengths{128};
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";

  vdpe::VdpeConfig vdpe;  // includes sc
  photonic::ArchConfig arch;
  photonic::PhotonicParams photonic;

  std::string workload_name = "tiny";
  photonic::GemmWorkload workload;

  MultiplySweep multiply;
  std::vector<std::uint64_t> scalability_lanes;
  InferenceSweep inference;
  std::optional<photonic::BaselineParams> baseline;

  /// Throws ConfigError on malformed, inconsistent or unknown keys. Explicit
  /// relative fixture paths resolve against the config file's directory.
  static ExperimentConfig from(const KeyValueConfig& kv);
};

/// Every key ExperimentConfig understands, for documentation and tests.
std::vector<std::string> known_keys();

}  // namespace astra::cli
