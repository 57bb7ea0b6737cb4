#include "astra/model/evaluate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "astra/common/error.hpp"
#include "astra/common/hash.hpp"
#include "astra/common/parallel.hpp"

namespace astra::model {

TensorArchive Dataset::to_archive() const {
  std::vector<std::int64_t> tokens;
  tokens.reserve(inputs.size() * seq_len);
  for (const auto& in : inputs) {
    if (in.size() != seq_len) throw std::invalid_argument("dataset item length differs from seq_len");
    tokens.insert(tokens.end(), in.begin(), in.end());
  }
  TensorArchive ar;
  ar.put("tokens", Tensor::integer({inputs.size(), seq_len}, std::move(tokens)));
  ar.put("labels", Tensor::integer({labels.size()}, {labels.begin(), labels.end()}));
  return ar;
}

Dataset Dataset::from_archive(const TensorArchive& ar) {
  const Tensor& tokens = ar.get("tokens");
  const Tensor& labels = ar.get("labels");
  if (tokens.dtype != DType::I64 || tokens.dims.size() != 2) throw IoError("'tokens' must be an i64 [n, seq] tensor");
  if (labels.dtype != DType::I64 || labels.dims != std::vector<std::uint64_t>{tokens.dims[0]}) {
    throw IoError("'labels' must be an i64 [n] tensor matching 'tokens'");
  }
  Dataset d;
  d.seq_len = static_cast<std::uint32_t>(tokens.dims[1]);
  d.inputs.resize(tokens.dims[0]);
  for (std::size_t i = 0; i < d.inputs.size(); ++i) {
    for (std::size_t t = 0; t < d.seq_len; ++t) {
      const auto v = tokens.i64[i * d.seq_len + t];
      if (v < 0 || v > UINT32_MAX) throw IoError("negative or oversized token id in dataset");
      d.inputs[i].push_back(static_cast<std::uint32_t>(v));
    }
    if (labels.i64[i] < 0 || labels.i64[i] > UINT32_MAX) throw IoError("negative or oversized label in dataset");
    d.labels.push_back(static_cast<std::uint32_t>(labels.i64[i]));
  }
  return d;
}

Dataset Dataset::load(const std::filesystem::path& path) {
  try {
    return from_archive(TensorArchive::load(path));
  } catch (const IoError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw IoError(path.string() + ": " + msg);
  }
}

std::vector<std::vector<double>> forward_all(const TinyTransformer& model, const Dataset& data, const ForwardOptions& opts) {
  std::vector<std::vector<double>> logits(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    ForwardOptions item = opts;
    item.seed = hash_combine(opts.seed, i);
    logits[i] = forward(model, data.inputs[i], item);
  });
  return logits;
}

std::size_t argmax(const std::vector<double>& logits) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return best;
}

double relative_l2_error(const std::vector<double>& candidate, const std::vector<double>& reference) {
  if (candidate.size() != reference.size()) throw std::invalid_argument("relative_l2_error: length mismatch");
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    diff += (candidate[i] - reference[i]) * (candidate[i] - reference[i]);
    norm += reference[i] * reference[i];
  }
  if (diff == 0.0) return 0.0;
  if (norm == 0.0) return INFINITY;
  return std::sqrt(diff / norm);
}

AccuracyReport compare(Mode reference, const std::vector<std::vector<double>>& ref_logits, Mode candidate,
                       const std::vector<std::vector<double>>& cand_logits, const std::vector<std::uint32_t>& labels) {
  const std::size_t n = ref_logits.size();
  if (n == 0) throw std::invalid_argument("evaluate: empty dataset");
  if (cand_logits.size() != n || labels.size() != n) throw std::invalid_argument("evaluate: item counts differ");
  AccuracyReport r;
  r.reference = reference;
  r.candidate = candidate;
  r.items = n;
  std::size_t agree = 0, ref_ok = 0, cand_ok = 0;
  double err_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto rc = argmax(ref_logits[i]);
    const auto cc = argmax(cand_logits[i]);
    agree += rc == cc;
    ref_ok += rc == labels[i];
    cand_ok += cc == labels[i];
    const double e = relative_l2_error(cand_logits[i], ref_logits[i]);
    err_sum += e;
    r.max_relative_error = std::max(r.max_relative_error, e);
  }
  const auto dn = static_cast<double>(n);
  r.agreement = static_cast<double>(agree) / dn;
  r.reference_accuracy = static_cast<double>(ref_ok) / dn;
  r.candidate_accuracy = static_cast<double>(cand_ok) / dn;
  r.mean_relative_error = err_sum / dn;
  return r;
}

AccuracyReport evaluate(const TinyTransformer& model, const Dataset& data, const ForwardOptions& reference,
                        const ForwardOptions& candidate) {
  if (data.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
  const auto ref = forward_all(model, data, reference);
  const auto cand = forward_all(model, data, candidate);
  return compare(reference.mode, ref, candidate.mode, cand, data.labels);
}

}  // namespace astra::model
