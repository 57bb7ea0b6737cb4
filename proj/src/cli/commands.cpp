#include "astra/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "astra/cli/svg.hpp"
#include "astra/common/error.hpp"
#include "astra/common/hash.hpp"
#include "astra/common/parallel.hpp"
#include "astra/model/evaluate.hpp"
#include "astra/photonic/baseline.hpp"
#include "astra/photonic/budget.hpp"
#include "astra/photonic/energy.hpp"
#include "astra/photonic/latency.hpp"
#include "astra/sc/ops.hpp"

namespace astra::cli {

namespace {

struct Pair {
  sc::FixedPointValue x, w;
};

std::vector<Pair> operand_pairs(const ExperimentConfig& cfg) {
  const auto bits = cfg.vdpe.sc.magnitude_bits;
  const auto& m = cfg.multiply;
  std::vector<Pair> pairs;
  if (!m.values_x.empty()) {
    for (std::size_t i = 0; i < m.values_x.size(); ++i) {
      pairs.push_back({sc::quantize(m.values_x[i], bits, 1.0), sc::quantize(m.values_w[i], bits, 1.0)});
    }
    return pairs;
  }
  std::mt19937_64 rng(hash_combine(cfg.seed, 0x6d756c));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::uint64_t i = 0; i < m.random_pairs; ++i) {
    const double x = u(rng);
    const double w = u(rng);
    pairs.push_back({sc::quantize(x, bits, 1.0), sc::quantize(w, bits, 1.0)});
  }
  return pairs;
}

std::string adc_name(const vdpe::VdpeConfig& v) { return v.adc_bits ? std::to_string(*v.adc_bits) : "ideal"; }

}  // namespace

Table multiply_sweep(const ExperimentConfig& cfg) {
  Table t{"multiply-sweep", {"value_x", "value_w", "n", "generator", "mean_error", "mse"}, {}};
  const auto pairs = operand_pairs(cfg);
  const auto& m = cfg.multiply;
  const std::size_t per_pair = m.stream_lengths.size() * m.generators.size();
  std::vector<std::vector<std::string>> rows(pairs.size() * per_pair);

  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto& [x, w] = pairs[p];
    const double exact = x.to_real() * w.to_real();
    std::size_t slot = p * per_pair;
    for (auto n : m.stream_lengths) {
      for (auto gen : m.generators) {
        sc::ScConfig sc = cfg.vdpe.sc;
        sc.stream_length = static_cast<std::uint32_t>(n);
        sc.generator = gen;
        double sum = 0.0, sum_sq = 0.0;
        for (std::uint64_t trial = 0; trial < m.trials; ++trial) {
          sc.master_seed = hash_combine(cfg.seed, trial);
          const auto cx = sc::RngChannel::create(gen, sc.master_seed, sc::ChannelId::make(sc::OperandRole::Left, p));
          const auto cw = sc::RngChannel::create(gen, sc.master_seed, sc::ChannelId::make(sc::OperandRole::Right, p));
          const auto prod = sc::ossm_multiply(sc::binary_to_stochastic(x, sc, cx), sc::binary_to_stochastic(w, sc, cw));
          const double err = sc::stochastic_to_value(prod, sc) - exact;
          sum += err;
          sum_sq += err * err;
        }
        const auto trials = static_cast<double>(m.trials);
        rows[slot++] = {fmt(x.to_real()), fmt(w.to_real()), fmt(n), std::string(sc::to_string(gen)), fmt(sum / trials),
                        fmt(sum_sq / trials)};
      }
    }
  });
  for (auto& r : rows) t.add(std::move(r));
  return t;
}

Table scalability(const ExperimentConfig& cfg) {
  Table t{"scalability", {"lanes", "required_laser_dbm", "feasible"}, {}};
  for (auto lanes : cfg.scalability_lanes) {
    const double need = photonic::required_laser_power(lanes, cfg.photonic);
    const bool ok = photonic::max_lanes_per_wavelength(cfg.photonic, cfg.photonic.laser_power_dbm) >= lanes;
    t.add({fmt(lanes), fmt(need), ok ? "1" : "0"});
  }
  return t;
}

Table energy_breakdown(const ExperimentConfig& cfg) {
  Table t{"energy-breakdown", {"component", "joules", "percent"}, {}};
  const auto r = photonic::workload_energy(cfg.workload, cfg.arch, cfg.photonic);
  double pct = 0.0;
  for (auto c : photonic::kEnergyComponents) {
    t.add({std::string(photonic::to_string(c)), fmt(r[c]), fmt(r.percent(c))});
    pct += r.percent(c);
  }
  t.add({"total", fmt(r.total()), fmt(r.total() > 0 ? std::round(pct * 1e9) / 1e9 : 0.0)});
  return t;
}

Table latency(const ExperimentConfig& cfg) {
  Table t{"latency", {"gemm", "passes", "seconds"}, {}};
  const auto r = photonic::workload_latency(cfg.workload, cfg.arch, cfg.photonic);
  std::uint64_t passes = 0;
  for (const auto& g : r.gemms) {
    t.add({g.name, fmt(g.passes), fmt(g.seconds)});
    passes += g.passes;
  }
  t.add({"total", fmt(passes), fmt(r.total_seconds)});
  return t;
}

Table infer_compare(const ExperimentConfig& cfg) {
  const auto load = [](const std::filesystem::path& p, const char* what) {
    if (!std::filesystem::exists(p)) {
      throw IoError(std::string(what) + " fixture not found: " + p.string() +
                    "\nThe fixtures ship with the repository; restore them with\n"
                    "  git checkout -- fixtures/\n"
                    "from the repository root, or point infer.model / infer.dataset at another copy.");
    }
  };
  load(cfg.inference.model_path, "model");
  load(cfg.inference.dataset_path, "dataset");
  const auto model = model::TinyTransformer::load(cfg.inference.model_path);
  auto data = model::Dataset::load(cfg.inference.dataset_path);
  if (data.seq_len != model.config.seq_len) throw IoError("dataset sequence length does not match the model");
  if (cfg.inference.max_items > 0 && cfg.inference.max_items < data.size()) {
    data.inputs.resize(cfg.inference.max_items);
    data.labels.resize(cfg.inference.max_items);
  }
  if (data.size() == 0) throw IoError("dataset fixture is empty");

  Table t{"infer-compare",
          {"reference", "candidate", "n", "generator", "adc_bits", "accumulation", "items", "agreement",
           "mean_rel_error", "max_rel_error", "reference_accuracy", "candidate_accuracy"},
          {}};
  model::ForwardOptions opts;
  opts.vdpe = cfg.vdpe;
  opts.seed = cfg.seed;
  const auto run = [&](model::Mode mode, std::uint64_t n) {
    auto o = opts;
    o.mode = mode;
    o.vdpe.sc.stream_length = static_cast<std::uint32_t>(n);
    return model::forward_all(model, data, o);
  };
  const auto add = [&](const model::AccuracyReport& r, const std::string& n) {
    const bool stochastic = r.candidate == model::Mode::Stochastic;
    t.add({std::string(model::to_string(r.reference)), std::string(model::to_string(r.candidate)), n,
           stochastic ? std::string(sc::to_string(cfg.vdpe.sc.generator)) : "-", stochastic ? adc_name(cfg.vdpe) : "-",
           stochastic ? std::string(vdpe::to_string(cfg.vdpe.accumulation)) : "-", fmt(std::uint64_t{r.items}),
           fmt(r.agreement), fmt(r.mean_relative_error), fmt(r.max_relative_error), fmt(r.reference_accuracy),
           fmt(r.candidate_accuracy)});
  };
  using model::Mode;
  const auto exact = run(Mode::Exact, cfg.vdpe.sc.stream_length);
  const auto quant = run(Mode::Quantized, cfg.vdpe.sc.stream_length);
  add(model::compare(Mode::Exact, exact, Mode::Exact, exact, data.labels), "-");
  add(model::compare(Mode::Exact, exact, Mode::Quantized, quant, data.labels), "-");
  for (auto n : cfg.inference.stream_lengths) {
    const auto stoch = run(Mode::Stochastic, n);
    add(model::compare(Mode::Exact, exact, Mode::Stochastic, stoch, data.labels), fmt(n));
    add(model::compare(Mode::Quantized, quant, Mode::Stochastic, stoch, data.labels), fmt(n));
  }
  return t;
}

Table baseline_compare(const ExperimentConfig& cfg) {
  if (!cfg.baseline) {
    throw ConfigError("baseline-compare needs baseline.energy_per_mac_pj and baseline.macs_per_second");
  }
  Table t{"baseline-compare", {"system", "seconds", "joules", "speedup_vs_baseline", "energy_ratio_vs_baseline"}, {}};
  const double s = photonic::workload_latency(cfg.workload, cfg.arch, cfg.photonic).total_seconds;
  const double j = photonic::workload_energy(cfg.workload, cfg.arch, cfg.photonic).total();
  const auto b = photonic::baseline_cost(cfg.workload, *cfg.baseline);
  const auto ratio = [](double num, double den) { return den > 0 ? fmt(num / den) : std::string("-"); };
  t.add({"photonic_sc", fmt(s), fmt(j), ratio(b.seconds, s), ratio(j, b.joules)});
  t.add({cfg.baseline->name, fmt(b.seconds), fmt(b.joules), "1", "1"});
  return t;
}

std::vector<std::string> subcommand_names() {
  return {"multiply-sweep", "scalability", "energy-breakdown", "infer-compare", "latency", "baseline-compare"};
}

std::vector<Artifact> run_subcommand(const std::string& name, const ExperimentConfig& cfg) {
  std::vector<Artifact> out;
  const auto csv = [&](const Table& t) { out.push_back({name + ".csv", t.to_csv()}); };
  if (name == "multiply-sweep") {
    csv(multiply_sweep(cfg));
  } else if (name == "scalability") {
    const Table t = scalability(cfg);
    csv(t);
    svg::Series s{"required laser power", {}, {}};
    for (const auto& r : t.rows) {
      s.x.push_back(std::stod(r[0]));
      s.y.push_back(std::stod(r[1]));
    }
    out.push_back({name + ".svg", svg::line_chart("Laser power per wavelength vs OAG lanes", "lanes per wavelength",
                                                  "required laser power (dBm)", {s}, true,
                                                  &cfg.photonic.laser_power_dbm, "available laser power")});
  } else if (name == "energy-breakdown") {
    const Table t = energy_breakdown(cfg);
    csv(t);
    std::vector<std::string> labels;
    std::vector<double> joules;
    for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
      labels.push_back(t.rows[i][0]);
      joules.push_back(std::stod(t.rows[i][1]));
    }
    out.push_back({name + ".svg", svg::stacked_bar("Energy breakdown (" + cfg.workload_name + ")", labels, joules)});
  } else if (name == "infer-compare") {
    csv(infer_compare(cfg));
  } else if (name == "latency") {
    csv(latency(cfg));
  } else if (name == "baseline-compare") {
    csv(baseline_compare(cfg));
  } else {
    std::string names;
    for (const auto& n : subcommand_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown subcommand '" + name + "' (expected one of: " + names + ")");
  }
  return out;
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  for (const auto& a : artifacts) {
    const auto path = dir / a.filename;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << a.content;
    f.close();
    if (!f) throw IoError("cannot write " + path.string());
  }
}

}  // namespace astra::cli
