#include "astra/photonic/workload.hpp"

#include <array>

#include "astra/common/error.hpp"

namespace astra::photonic {
namespace {

struct Preset {
  std::string_view name;
  model::TinyTransformerConfig dims;
};

// Published layer dimensions; encoder-decoder models are flattened into a
// stack of identical layers.
const std::array<Preset, 6>& presets() {
  static const std::array<Preset, 6> table{{
      {"tiny", {2, 32, 2, 16, 64, 8, 4}},
      {"transformer-base", {12, 512, 8, 128, 2048, 32000, 2}},
      {"bert-base", {12, 768, 12, 128, 3072, 30522, 2}},
      {"albert-base", {12, 768, 12, 128, 3072, 30000, 2}},
      {"vit-base", {12, 768, 12, 197, 3072, 1, 1000}},
      {"opt-350", {24, 1024, 16, 128, 4096, 50272, 2}},
  }};
  return table;
}

}  // namespace

void GemmWorkload::validate() const {
  for (const auto& g : gemms) {
    if (g.m == 0 || g.k == 0 || g.n == 0) throw ConfigError("GEMM '" + g.name + "' has a zero dimension");
  }
}

std::uint64_t GemmWorkload::total_macs() const {
  std::uint64_t total = 0;
  for (const auto& g : gemms) total += g.macs();
  return total;
}

GemmWorkload transformer_workload(const model::TinyTransformerConfig& dims) {
  dims.validate();
  const std::uint64_t s = dims.seq_len;
  const std::uint64_t d = dims.d_model;
  const std::uint64_t f = dims.ffn_dim;
  GemmWorkload w;
  w.gemms.reserve(std::size_t{dims.layers} * 8);
  for (std::uint32_t layer = 0; layer < dims.layers; ++layer) {
    const std::string p = "L" + std::to_string(layer) + ".";
    w.gemms.push_back({p + "q_proj", s, d, d});
    w.gemms.push_back({p + "k_proj", s, d, d});
    w.gemms.push_back({p + "v_proj", s, d, d});
    w.gemms.push_back({p + "scores", s, d, s});
    w.gemms.push_back({p + "context", s, s, d});
    w.gemms.push_back({p + "out_proj", s, d, d});
    w.gemms.push_back({p + "ffn_up", s, d, f});
    w.gemms.push_back({p + "ffn_down", s, f, d});
  }
  return w;
}

model::TinyTransformerConfig transformer_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.dims;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + std::string(p.name);
  throw ConfigError("unknown transformer preset '" + std::string(name) + "' (available: " + known + ")");
}

std::vector<std::string> transformer_preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.emplace_back(p.name);
  return out;
}

}  // namespace astra::photonic
