#include "astra/model/config.hpp"

#include <string>

#include "astra/common/error.hpp"

namespace astra::model {

void TinyTransformerConfig::validate() const {
  if (d_model == 0 || heads == 0 || seq_len == 0 || ffn_dim == 0 || vocab == 0 || classes == 0) {
    throw ConfigError("transformer dimensions must be >= 1");
  }
  if (d_model % heads != 0) {
    throw ConfigError("d_model (" + std::to_string(d_model) + ") is not divisible by heads (" + std::to_string(heads) + ")");
  }
}

}  // namespace astra::model
