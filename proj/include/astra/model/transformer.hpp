#pragma once

// Pre-LN encoder classifier evaluated in three arithmetic modes. Only the
// GEMMs change between modes; embeddings, bias adds, layernorm, softmax and
// GELU run in double precision everywhere.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "astra/common/matrix.hpp"
#include "astra/model/config.hpp"
#include "astra/model/tensor_archive.hpp"
#include "astra/vdpe/vdpe.hpp"

namespace astra::model {

enum class Mode : std::uint8_t { Exact, Quantized, Stochastic };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view name);  // "exact" | "quantized" | "stochastic"

/// Linear maps are stored [in, out] so that y = x W + b.
struct LayerWeights {
  std::vector<double> ln1_gamma, ln1_beta;
  Matrix wq, wk, wv, wo;
  std::vector<double> bq, bk, bv, bo;
  std::vector<double> ln2_gamma, ln2_beta;
  Matrix w1, w2;
  std::vector<double> b1, b2;
};

struct TinyTransformer {
  TinyTransformerConfig config;
  Matrix token_embedding;     // vocab x d_model
  Matrix position_embedding;  // seq_len x d_model
  std::vector<LayerWeights> layers;
  std::vector<double> final_gamma, final_beta;
  Matrix classifier;  // d_model x classes
  std::vector<double> classifier_bias;

  /// Throws std::invalid_argument on any shape inconsistent with config.
  void validate() const;

  TensorArchive to_archive() const;
  static TinyTransformer from_archive(const TensorArchive& ar);  // throws IoError
  static TinyTransformer load(const std::filesystem::path& path);

  /// Gaussian weights with std `init_scale`; unit layernorm gains.
  static TinyTransformer random(const TinyTransformerConfig& cfg, std::uint64_t seed, double init_scale = 0.2);
};

struct ForwardOptions {
  Mode mode = Mode::Exact;
  /// Quantized mode reads sc.magnitude_bits; Stochastic mode uses all of it.
  vdpe::VdpeConfig vdpe;
  /// Stochastic mode: GEMM g of a forward pass runs with master seed
  /// hash_combine(seed, g).
  std::uint64_t seed = 0;
};

/// Routes matrix products through the selected arithmetic. Quantized and
/// Stochastic modes quantize both operands per tensor on every call.
class GemmUnit {
 public:
  explicit GemmUnit(const ForwardOptions& opts) : opts_(opts) {}

  Matrix operator()(const Matrix& a, const Matrix& b);

  std::uint64_t calls() const { return calls_; }
  const vdpe::MatmulStats& stats() const { return stats_; }

 private:
  const ForwardOptions& opts_;
  std::uint64_t calls_ = 0;
  vdpe::MatmulStats stats_;
};

Matrix exact_matmul(const Matrix& a, const Matrix& b);

/// Integer GEMM over the codes, dequantized as ldexp(acc, -2b) * sa * sb.
Matrix quantized_matmul(const sc::QuantizedMatrix& a, const sc::QuantizedMatrix& b);

// Non-linear units, shared by every mode.
Matrix layer_norm(const Matrix& x, std::span<const double> gamma, std::span<const double> beta, double eps = 1e-5);
void softmax_rows(Matrix& x);
double gelu(double x);
void add_bias(Matrix& x, std::span<const double> bias);

/// (seq x d_model) -> heads matrices of (seq x d_model/heads), and back.
std::vector<Matrix> split_heads(const Matrix& x, std::uint32_t heads);
Matrix merge_heads(const std::vector<Matrix>& parts);

/// Multi-head scaled dot-product attention including the output projection.
Matrix attention_block(const Matrix& x, const LayerWeights& w, std::uint32_t heads, GemmUnit& gemm);
Matrix ffn_block(const Matrix& x, const LayerWeights& w, GemmUnit& gemm);

/// Logits for one token sequence (length seq_len, ids < vocab).
std::vector<double> forward(const TinyTransformer& model, std::span<const std::uint32_t> tokens,
                            const ForwardOptions& opts);

}  // namespace astra::model
