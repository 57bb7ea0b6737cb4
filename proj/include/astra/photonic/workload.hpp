#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "astra/model/config.hpp"

namespace astra::photonic {

struct GemmShape {
  std::string name;
  std::uint64_t m = 1;
  std::uint64_t k = 1;
  std::uint64_t n = 1;

  std::uint64_t macs() const { return m * k * n; }
  friend bool operator==(const GemmShape&, const GemmShape&) = default;
};

struct GemmWorkload {
  std::vector<GemmShape> gemms;

  void validate() const;  // every dimension >= 1, throws ConfigError
  std::uint64_t total_macs() const;
};

/// Per layer, in order: q_proj, k_proj, v_proj (seq x d x d), scores
/// (seq x d x seq), context (seq x seq x d), out_proj (seq x d x d), ffn_up
/// (seq x d x ffn), ffn_down (seq x ffn x d). Names carry an "L<i>." prefix.
GemmWorkload transformer_workload(const model::TinyTransformerConfig& dims);

/// Layer dimensions of the named presets (modeling only): tiny,
/// transformer-base, bert-base, albert-base, vit-base, opt-350.
/// Throws ConfigError listing the presets for an unknown name.
model::TinyTransformerConfig transformer_preset(std::string_view name);
std::vector<std::string> transformer_preset_names();

}  // namespace astra::photonic
