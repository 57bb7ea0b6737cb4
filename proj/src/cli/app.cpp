#include "astra/cli/app.hpp"

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "astra/cli/commands.hpp"
#include "astra/common/error.hpp"

namespace astra::cli {

int run(int argc, const char* const* argv) {
  CLI::App app{"Stochastic-photonic accelerator simulator"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
    sub->add_option("--seed", seed, "master seed (overrides seed)");
    sub->add_option("--set", overrides, "override a config key: key=value")->take_all();
  };
  const std::vector<std::pair<std::string, std::string>> docs{
      {"multiply-sweep", "signed SC multiply error over stream lengths and generators"},
      {"scalability", "required laser power vs lanes per wavelength"},
      {"energy-breakdown", "per-component energy of a transformer workload"},
      {"infer-compare", "tiny-transformer accuracy across arithmetic modes"},
      {"latency", "per-GEMM latency of a transformer workload"},
      {"baseline-compare", "workload cost against a per-MAC baseline"},
  };
  for (const auto& [name, help] : docs) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  try {
    auto kv = KeyValueConfig::load(config_path);
    for (const auto& o : overrides) kv.apply_override(o);
    if (sub->count("--seed")) kv.set("seed", std::to_string(seed));
    if (sub->count("--out")) kv.set("out_dir", out_dir);
    const auto cfg = ExperimentConfig::from(kv);
    const auto artifacts = run_subcommand(name, cfg);
    write_artifacts(cfg.out_dir, artifacts);
    for (const auto& a : artifacts) std::cout << (cfg.out_dir / a.filename).string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace astra::cli
