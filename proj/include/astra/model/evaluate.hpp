#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "astra/model/transformer.hpp"

namespace astra::model {

struct Dataset {
  std::uint32_t seq_len = 0;
  std::vector<std::vector<std::uint32_t>> inputs;
  std::vector<std::uint32_t> labels;

  std::size_t size() const { return inputs.size(); }

  TensorArchive to_archive() const;  // tensors "tokens" [n, seq] and "labels" [n]
  static Dataset from_archive(const TensorArchive& ar);
  static Dataset load(const std::filesystem::path& path);
};

struct AccuracyReport {
  Mode reference = Mode::Exact;
  Mode candidate = Mode::Exact;
  std::size_t items = 0;
  /// Fraction of items whose top-1 class matches between the two modes.
  double agreement = 0.0;
  /// Per-item ||candidate - reference|| / ||reference|| over the logits.
  double mean_relative_error = 0.0;
  double max_relative_error = 0.0;
  double reference_accuracy = 0.0;
  double candidate_accuracy = 0.0;
};

/// Logits for every item. Item i runs with seed hash_combine(opts.seed, i),
/// so results do not depend on the worker count.
std::vector<std::vector<double>> forward_all(const TinyTransformer& model, const Dataset& data, const ForwardOptions& opts);

/// Lowest index of the maximum logit.
std::size_t argmax(const std::vector<double>& logits);

double relative_l2_error(const std::vector<double>& candidate, const std::vector<double>& reference);

AccuracyReport compare(Mode reference, const std::vector<std::vector<double>>& ref_logits, Mode candidate,
                       const std::vector<std::vector<double>>& cand_logits, const std::vector<std::uint32_t>& labels);

/// Throws std::invalid_argument on an empty dataset.
AccuracyReport evaluate(const TinyTransformer& model, const Dataset& data, const ForwardOptions& reference,
                        const ForwardOptions& candidate);

}  // namespace astra::model
