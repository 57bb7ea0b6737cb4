#pragma once

// Named-tensor container with a versioned little-endian file layout; see
// docs/tensor_format.md.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "astra/common/matrix.hpp"

namespace astra::model {

enum class DType : std::uint8_t { F64 = 1, I64 = 2 };

struct Tensor {
  DType dtype = DType::F64;
  std::vector<std::uint64_t> dims;
  std::vector<double> f64;        // used when dtype == F64
  std::vector<std::int64_t> i64;  // used when dtype == I64

  std::uint64_t element_count() const;

  static Tensor real(std::vector<std::uint64_t> dims, std::vector<double> values);
  static Tensor integer(std::vector<std::uint64_t> dims, std::vector<std::int64_t> values);
  static Tensor from_matrix(const Matrix& m);
};

inline constexpr char kArchiveMagic[4] = {'A', 'S', 'T', 'T'};
inline constexpr std::uint32_t kArchiveVersion = 1;

class TensorArchive {
 public:
  void put(const std::string& name, Tensor t);
  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }

  /// Accessors throw IoError when the tensor is missing or has the wrong
  /// dtype or shape.
  const Tensor& get(const std::string& name) const;
  Matrix matrix(const std::string& name, std::uint64_t rows, std::uint64_t cols) const;
  std::vector<double> vector(const std::string& name, std::uint64_t length) const;

  const std::map<std::string, Tensor>& tensors() const { return tensors_; }

  std::vector<std::uint8_t> serialize() const;
  static TensorArchive deserialize(const std::vector<std::uint8_t>& bytes);

  void save(const std::filesystem::path& path) const;
  static TensorArchive load(const std::filesystem::path& path);

 private:
  std::map<std::string, Tensor> tensors_;
};

}  // namespace astra::model
