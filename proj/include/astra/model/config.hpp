#pragma once

#include <cstdint>

namespace astra::model {

struct TinyTransformerConfig {
  std::uint32_t layers = 2;
  std::uint32_t d_model = 32;
  std::uint32_t heads = 2;
  std::uint32_t seq_len = 16;
  std::uint32_t ffn_dim = 64;
  std::uint32_t vocab = 8;
  std::uint32_t classes = 4;

  std::uint32_t head_dim() const { return d_model / heads; }

  /// Throws ConfigError: d_model divisible by heads; model dimensions >= 1
  /// (layers may be 0).
  void validate() const;

  friend bool operator==(const TinyTransformerConfig&, const TinyTransformerConfig&) = default;
};

}  // namespace astra::model
