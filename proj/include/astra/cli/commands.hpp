#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "astra/cli/experiment.hpp"
#include "astra/cli/table.hpp"

namespace astra::cli {

struct Artifact {
  std::string filename;
  std::string content;
};

Table multiply_sweep(const ExperimentConfig& cfg);
Table scalability(const ExperimentConfig& cfg);
Table energy_breakdown(const ExperimentConfig& cfg);
Table latency(const ExperimentConfig& cfg);
/// Throws IoError when the fixture files are missing or unreadable.
Table infer_compare(const ExperimentConfig& cfg);
/// Throws ConfigError without baseline.* keys.
Table baseline_compare(const ExperimentConfig& cfg);

std::vector<std::string> subcommand_names();

/// CSV plus any plot for one subcommand. Throws ConfigError for an unknown
/// name.
std::vector<Artifact> run_subcommand(const std::string& name, const ExperimentConfig& cfg);

/// Creates `dir` if needed and writes each artifact in order. Throws IoError.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

}  // namespace astra::cli
