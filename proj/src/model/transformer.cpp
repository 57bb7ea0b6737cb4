#include "astra/model/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "astra/common/error.hpp"
#include "astra/common/hash.hpp"
#include "astra/kernels/bitstream.hpp"

namespace astra::model {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Exact:
      return "exact";
    case Mode::Quantized:
      return "quantized";
    case Mode::Stochastic:
      return "stochastic";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  if (name == "exact") return Mode::Exact;
  if (name == "quantized") return Mode::Quantized;
  if (name == "stochastic") return Mode::Stochastic;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected exact, quantized or stochastic)");
}

namespace {

void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols || m.size() != rows * cols) {
    throw std::invalid_argument(what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void check_vector(const std::vector<double>& v, std::size_t n, const std::string& what) {
  if (v.size() != n) {
    throw std::invalid_argument(what + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
}

std::string layer_key(std::size_t l, const char* leaf) { return "layers." + std::to_string(l) + "." + leaf; }

}  // namespace

void TinyTransformer::validate() const {
  config.validate();
  const std::size_t d = config.d_model;
  check_matrix(token_embedding, config.vocab, d, "token_embedding");
  check_matrix(position_embedding, config.seq_len, d, "position_embedding");
  if (layers.size() != config.layers) throw std::invalid_argument("layer count does not match config");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l];
    const std::string p = "layer " + std::to_string(l) + " ";
    check_vector(w.ln1_gamma, d, p + "ln1_gamma");
    check_vector(w.ln1_beta, d, p + "ln1_beta");
    check_vector(w.ln2_gamma, d, p + "ln2_gamma");
    check_vector(w.ln2_beta, d, p + "ln2_beta");
    check_matrix(w.wq, d, d, p + "wq");
    check_matrix(w.wk, d, d, p + "wk");
    check_matrix(w.wv, d, d, p + "wv");
    check_matrix(w.wo, d, d, p + "wo");
    check_vector(w.bq, d, p + "bq");
    check_vector(w.bk, d, p + "bk");
    check_vector(w.bv, d, p + "bv");
    check_vector(w.bo, d, p + "bo");
    check_matrix(w.w1, d, config.ffn_dim, p + "w1");
    check_vector(w.b1, config.ffn_dim, p + "b1");
    check_matrix(w.w2, config.ffn_dim, d, p + "w2");
    check_vector(w.b2, d, p + "b2");
  }
  check_vector(final_gamma, d, "final_gamma");
  check_vector(final_beta, d, "final_beta");
  check_matrix(classifier, d, config.classes, "classifier");
  check_vector(classifier_bias, config.classes, "classifier_bias");
}

TensorArchive TinyTransformer::to_archive() const {
  validate();
  TensorArchive ar;
  const auto& c = config;
  ar.put("config", Tensor::integer({7}, {c.layers, c.d_model, c.heads, c.seq_len, c.ffn_dim, c.vocab, c.classes}));
  const auto vec = [](const std::vector<double>& v) { return Tensor::real({v.size()}, v); };
  ar.put("token_embedding", Tensor::from_matrix(token_embedding));
  ar.put("position_embedding", Tensor::from_matrix(position_embedding));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l];
    ar.put(layer_key(l, "ln1.gamma"), vec(w.ln1_gamma));
    ar.put(layer_key(l, "ln1.beta"), vec(w.ln1_beta));
    ar.put(layer_key(l, "attn.wq"), Tensor::from_matrix(w.wq));
    ar.put(layer_key(l, "attn.wk"), Tensor::from_matrix(w.wk));
    ar.put(layer_key(l, "attn.wv"), Tensor::from_matrix(w.wv));
    ar.put(layer_key(l, "attn.wo"), Tensor::from_matrix(w.wo));
    ar.put(layer_key(l, "attn.bq"), vec(w.bq));
    ar.put(layer_key(l, "attn.bk"), vec(w.bk));
    ar.put(layer_key(l, "attn.bv"), vec(w.bv));
    ar.put(layer_key(l, "attn.bo"), vec(w.bo));
    ar.put(layer_key(l, "ln2.gamma"), vec(w.ln2_gamma));
    ar.put(layer_key(l, "ln2.beta"), vec(w.ln2_beta));
    ar.put(layer_key(l, "ffn.w1"), Tensor::from_matrix(w.w1));
    ar.put(layer_key(l, "ffn.b1"), vec(w.b1));
    ar.put(layer_key(l, "ffn.w2"), Tensor::from_matrix(w.w2));
    ar.put(layer_key(l, "ffn.b2"), vec(w.b2));
  }
  ar.put("final_ln.gamma", vec(final_gamma));
  ar.put("final_ln.beta", vec(final_beta));
  ar.put("classifier.weight", Tensor::from_matrix(classifier));
  ar.put("classifier.bias", vec(classifier_bias));
  return ar;
}

TinyTransformer TinyTransformer::from_archive(const TensorArchive& ar) {
  const Tensor& cfg = ar.get("config");
  if (cfg.dtype != DType::I64 || cfg.dims != std::vector<std::uint64_t>{7}) throw IoError("malformed 'config' tensor");
  for (auto v : cfg.i64) {
    if (v < 0 || v > 1'000'000) throw IoError("'config' tensor holds an out-of-range dimension");
  }
  TinyTransformer m;
  auto& c = m.config;
  const auto u = [&](int i) { return static_cast<std::uint32_t>(cfg.i64[static_cast<std::size_t>(i)]); };
  c = {u(0), u(1), u(2), u(3), u(4), u(5), u(6)};
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw IoError(std::string("model config: ") + e.what());
  }
  const std::uint64_t d = c.d_model;
  m.token_embedding = ar.matrix("token_embedding", c.vocab, d);
  m.position_embedding = ar.matrix("position_embedding", c.seq_len, d);
  m.layers.resize(c.layers);
  for (std::size_t l = 0; l < c.layers; ++l) {
    auto& w = m.layers[l];
    w.ln1_gamma = ar.vector(layer_key(l, "ln1.gamma"), d);
    w.ln1_beta = ar.vector(layer_key(l, "ln1.beta"), d);
    w.wq = ar.matrix(layer_key(l, "attn.wq"), d, d);
    w.wk = ar.matrix(layer_key(l, "attn.wk"), d, d);
    w.wv = ar.matrix(layer_key(l, "attn.wv"), d, d);
    w.wo = ar.matrix(layer_key(l, "attn.wo"), d, d);
    w.bq = ar.vector(layer_key(l, "attn.bq"), d);
    w.bk = ar.vector(layer_key(l, "attn.bk"), d);
    w.bv = ar.vector(layer_key(l, "attn.bv"), d);
    w.bo = ar.vector(layer_key(l, "attn.bo"), d);
    w.ln2_gamma = ar.vector(layer_key(l, "ln2.gamma"), d);
    w.ln2_beta = ar.vector(layer_key(l, "ln2.beta"), d);
    w.w1 = ar.matrix(layer_key(l, "ffn.w1"), d, c.ffn_dim);
    w.b1 = ar.vector(layer_key(l, "ffn.b1"), c.ffn_dim);
    w.w2 = ar.matrix(layer_key(l, "ffn.w2"), c.ffn_dim, d);
    w.b2 = ar.vector(layer_key(l, "ffn.b2"), d);
  }
  m.final_gamma = ar.vector("final_ln.gamma", d);
  m.final_beta = ar.vector("final_ln.beta", d);
  m.classifier = ar.matrix("classifier.weight", d, c.classes);
  m.classifier_bias = ar.vector("classifier.bias", c.classes);
  return m;
}

TinyTransformer TinyTransformer::load(const std::filesystem::path& path) {
  try {
    return from_archive(TensorArchive::load(path));
  } catch (const IoError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw IoError(path.string() + ": " + msg);
  }
}

TinyTransformer TinyTransformer::random(const TinyTransformerConfig& cfg, std::uint64_t seed, double init_scale) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, init_scale);
  const auto mat = [&](std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (auto& v : m.data()) v = normal(rng);
    return m;
  };
  const auto vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& e : v) e = normal(rng);
    return v;
  };
  const std::size_t d = cfg.d_model;
  TinyTransformer m;
  m.config = cfg;
  m.token_embedding = mat(cfg.vocab, d);
  m.position_embedding = mat(cfg.seq_len, d);
  m.layers.resize(cfg.layers);
  for (auto& w : m.layers) {
    w.ln1_gamma.assign(d, 1.0);
    w.ln1_beta.assign(d, 0.0);
    w.ln2_gamma.assign(d, 1.0);
    w.ln2_beta.assign(d, 0.0);
    w.wq = mat(d, d);
    w.wk = mat(d, d);
    w.wv = mat(d, d);
    w.wo = mat(d, d);
    w.bq = vec(d);
    w.bk = vec(d);
    w.bv = vec(d);
    w.bo = vec(d);
    w.w1 = mat(d, cfg.ffn_dim);
    w.b1 = vec(cfg.ffn_dim);
    w.w2 = mat(cfg.ffn_dim, d);
    w.b2 = vec(d);
  }
  m.final_gamma.assign(d, 1.0);
  m.final_beta.assign(d, 0.0);
  m.classifier = mat(d, cfg.classes);
  m.classifier_bias = vec(cfg.classes);
  return m;
}

Matrix exact_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double av = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += av * b(k, j);
    }
  }
  return out;
}

Matrix quantized_matmul(const sc::QuantizedMatrix& a, const sc::QuantizedMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  if (a.magnitude_bits != b.magnitude_bits || a.magnitude_bits > 15) {
    throw std::invalid_argument("quantized_matmul: operands need one width of at most 15 bits");
  }
  const std::size_t k_dim = a.cols;
  std::vector<std::int16_t> lhs(a.codes.begin(), a.codes.end());
  std::vector<std::int16_t> rhs(b.codes.size());  // column-major
  for (std::size_t k = 0; k < k_dim; ++k)
    for (std::size_t j = 0; j < b.cols; ++j) rhs[j * k_dim + k] = static_cast<std::int16_t>(b.codes[k * b.cols + j]);

  const double scale = a.scale * b.scale;
  const int shift = -2 * static_cast<int>(a.magnitude_bits);
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const std::span<const std::int16_t> row(lhs.data() + i * k_dim, k_dim);
    for (std::size_t j = 0; j < b.cols; ++j) {
      const auto acc = kernels::dot_i16(row, {rhs.data() + j * k_dim, k_dim});
      out(i, j) = std::ldexp(static_cast<double>(acc), shift) * scale;
    }
  }
  return out;
}

Matrix GemmUnit::operator()(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("gemm: shapes " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + " are not conformable");
  }
  const std::uint64_t ordinal = calls_++;
  if (opts_.mode == Mode::Exact) return exact_matmul(a, b);
  const std::uint32_t bits = opts_.vdpe.sc.magnitude_bits;
  const auto qa = sc::QuantizedMatrix::quantize(a, bits);
  const auto qb = sc::QuantizedMatrix::quantize(b, bits);
  if (opts_.mode == Mode::Quantized) return quantized_matmul(qa, qb);
  vdpe::VdpeConfig cfg = opts_.vdpe;
  cfg.sc.master_seed = hash_combine(opts_.seed, ordinal);
  return vdpe::vdpe_matmul(qa, qb, cfg, &stats_);
}

Matrix layer_norm(const Matrix& x, std::span<const double> gamma, std::span<const double> beta, double eps) {
  if (gamma.size() != x.cols() || beta.size() != x.cols()) throw std::invalid_argument("layer_norm: parameter width mismatch");
  Matrix out(x.rows(), x.cols());
  const auto n = static_cast<double>(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto in = x.row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= n;
    const double inv = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (in[c] - mean) * inv * gamma[c] + beta[c];
  }
  return out;
}

void softmax_rows(Matrix& x) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    double peak = row[0];
    for (double v : row) peak = std::max(peak, v);
    double sum = 0.0;
    for (double& v : row) sum += (v = std::exp(v - peak));
    for (double& v : row) v /= sum;
  }
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

void add_bias(Matrix& x, std::span<const double> bias) {
  if (bias.size() != x.cols()) throw std::invalid_argument("add_bias: width mismatch");
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) += bias[c];
}

std::vector<Matrix> split_heads(const Matrix& x, std::uint32_t heads) {
  if (heads == 0 || x.cols() % heads != 0) {
    throw std::invalid_argument("split_heads: width " + std::to_string(x.cols()) + " is not divisible by " +
                                std::to_string(heads) + " heads");
  }
  const std::size_t dh = x.cols() / heads;
  std::vector<Matrix> parts(heads, Matrix(x.rows(), dh));
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t h = 0; h < heads; ++h)
      for (std::size_t c = 0; c < dh; ++c) parts[h](r, c) = x(r, h * dh + c);
  return parts;
}

Matrix merge_heads(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge_heads: no heads");
  const std::size_t rows = parts[0].rows();
  const std::size_t dh = parts[0].cols();
  Matrix out(rows, dh * parts.size());
  for (std::size_t h = 0; h < parts.size(); ++h) {
    if (parts[h].rows() != rows || parts[h].cols() != dh) throw std::invalid_argument("merge_heads: head shapes differ");
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < dh; ++c) out(r, h * dh + c) = parts[h](r, c);
  }
  return out;
}

namespace {

Matrix linear(const Matrix& x, const Matrix& w, std::span<const double> b, GemmUnit& gemm) {
  Matrix y = gemm(x, w);
  add_bias(y, b);
  return y;
}

}  // namespace

Matrix attention_block(const Matrix& x, const LayerWeights& w, std::uint32_t heads, GemmUnit& gemm) {
  const auto q = split_heads(linear(x, w.wq, w.bq, gemm), heads);
  const auto k = split_heads(linear(x, w.wk, w.bk, gemm), heads);
  const auto v = split_heads(linear(x, w.wv, w.bv, gemm), heads);
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(q[0].cols()));

  std::vector<Matrix> context;
  context.reserve(heads);
  for (std::uint32_t h = 0; h < heads; ++h) {
    Matrix scores = gemm(q[h], k[h].transposed());
    for (double& s : scores.data()) s *= inv_sqrt_dh;
    softmax_rows(scores);
    context.push_back(gemm(scores, v[h]));
  }
  return linear(merge_heads(context), w.wo, w.bo, gemm);
}

Matrix ffn_block(const Matrix& x, const LayerWeights& w, GemmUnit& gemm) {
  Matrix h = linear(x, w.w1, w.b1, gemm);
  for (double& v : h.data()) v = gelu(v);
  return linear(h, w.w2, w.b2, gemm);
}

std::vector<double> forward(const TinyTransformer& model, std::span<const std::uint32_t> tokens,
                            const ForwardOptions& opts) {
  const auto& cfg = model.config;
  if (tokens.size() != cfg.seq_len) {
    throw std::invalid_argument("forward: sequence length " + std::to_string(tokens.size()) + ", model expects " +
                                std::to_string(cfg.seq_len));
  }
  Matrix x(cfg.seq_len, cfg.d_model);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t] >= cfg.vocab) throw std::invalid_argument("forward: token id " + std::to_string(tokens[t]) + " out of range");
    for (std::size_t c = 0; c < cfg.d_model; ++c) x(t, c) = model.token_embedding(tokens[t], c) + model.position_embedding(t, c);
  }

  GemmUnit gemm(opts);
  for (const auto& layer : model.layers) {
    const Matrix a = attention_block(layer_norm(x, layer.ln1_gamma, layer.ln1_beta), layer, cfg.heads, gemm);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += a.data()[i];
    const Matrix f = ffn_block(layer_norm(x, layer.ln2_gamma, layer.ln2_beta), layer, gemm);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += f.data()[i];
  }
  const Matrix h = layer_norm(x, model.final_gamma, model.final_beta);

  Matrix pooled(1, cfg.d_model);
  for (std::size_t t = 0; t < h.rows(); ++t)
    for (std::size_t c = 0; c < h.cols(); ++c) pooled(0, c) += h(t, c);
  for (double& v : pooled.data()) v /= static_cast<double>(h.rows());

  const Matrix logits = linear(pooled, model.classifier, model.classifier_bias, gemm);
  return logits.data();
}

}  // namespace astra::model
