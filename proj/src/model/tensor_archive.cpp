#include "astra/model/tensor_archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <stdexcept>

#include "astra/common/error.hpp"

namespace astra::model {

static_assert(std::endian::native == std::endian::little, "tensor archives assume a little-endian host");

std::uint64_t Tensor::element_count() const {
  return std::accumulate(dims.begin(), dims.end(), std::uint64_t{1}, std::multiplies<>());
}

Tensor Tensor::real(std::vector<std::uint64_t> dims, std::vector<double> values) {
  Tensor t;
  t.dtype = DType::F64;
  t.dims = std::move(dims);
  t.f64 = std::move(values);
  if (t.f64.size() != t.element_count()) throw std::invalid_argument("Tensor::real: value count does not match shape");
  return t;
}

Tensor Tensor::integer(std::vector<std::uint64_t> dims, std::vector<std::int64_t> values) {
  Tensor t;
  t.dtype = DType::I64;
  t.dims = std::move(dims);
  t.i64 = std::move(values);
  if (t.i64.size() != t.element_count()) throw std::invalid_argument("Tensor::integer: value count does not match shape");
  return t;
}

Tensor Tensor::from_matrix(const Matrix& m) { return real({m.rows(), m.cols()}, m.data()); }

void TensorArchive::put(const std::string& name, Tensor t) {
  if (name.empty() || name.size() > 0xffff) throw std::invalid_argument("tensor name length must be in [1, 65535]");
  tensors_[name] = std::move(t);
}

const Tensor& TensorArchive::get(const std::string& name) const {
  const auto it = tensors_.find(name);
  if (it == tensors_.end()) throw IoError("tensor '" + name + "' missing from archive");
  return it->second;
}

namespace {

std::string shape_string(const std::vector<std::uint64_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

const Tensor& expect(const TensorArchive& ar, const std::string& name, const std::vector<std::uint64_t>& dims) {
  const Tensor& t = ar.get(name);
  if (t.dtype != DType::F64) throw IoError("tensor '" + name + "' is not f64");
  if (t.dims != dims) {
    throw IoError("tensor '" + name + "' has shape " + shape_string(t.dims) + ", expected " + shape_string(dims));
  }
  return t;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes(b) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
  void need(std::size_t n) const {
    if (bytes.size() - pos < n) throw IoError("tensor archive truncated at byte " + std::to_string(pos));
  }

  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;
};

}  // namespace

Matrix TensorArchive::matrix(const std::string& name, std::uint64_t rows, std::uint64_t cols) const {
  return Matrix(rows, cols, expect(*this, name, {rows, cols}).f64);
}

std::vector<double> TensorArchive::vector(const std::string& name, std::uint64_t length) const {
  return expect(*this, name, {length}).f64;
}

std::vector<std::uint8_t> TensorArchive::serialize() const {
  Writer w;
  for (char c : kArchiveMagic) w.put(static_cast<std::uint8_t>(c));
  w.put(kArchiveVersion);
  w.put(static_cast<std::uint32_t>(tensors_.size()));
  for (const auto& [name, t] : tensors_) {
    w.put(static_cast<std::uint16_t>(name.size()));
    w.out.insert(w.out.end(), name.begin(), name.end());
    w.put(static_cast<std::uint8_t>(t.dtype));
    w.put(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) w.put(d);
    if (t.dtype == DType::F64) {
      for (double v : t.f64) w.put(v);
    } else {
      for (std::int64_t v : t.i64) w.put(v);
    }
  }
  return std::move(w.out);
}

TensorArchive TensorArchive::deserialize(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  for (char c : kArchiveMagic) {
    if (r.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) throw IoError("not a tensor archive (bad magic)");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kArchiveVersion) throw IoError("unsupported tensor archive version " + std::to_string(version));
  const auto count = r.get<std::uint32_t>();

  TensorArchive ar;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = r.get<std::uint16_t>();
    r.need(len);
    std::string name(reinterpret_cast<const char*>(bytes.data() + r.pos), len);
    r.pos += len;
    const auto dtype = r.get<std::uint8_t>();
    if (dtype != 1 && dtype != 2) throw IoError("tensor '" + name + "' has unknown dtype " + std::to_string(dtype));
    Tensor t;
    t.dtype = static_cast<DType>(dtype);
    t.dims.resize(r.get<std::uint8_t>());
    for (auto& d : t.dims) d = r.get<std::uint64_t>();
    const std::uint64_t n = t.element_count();
    if (n > bytes.size()) throw IoError("tensor '" + name + "' shape exceeds the archive size");
    r.need(n * 8);
    if (t.dtype == DType::F64) {
      t.f64.resize(n);
      for (auto& v : t.f64) v = r.get<double>();
    } else {
      t.i64.resize(n);
      for (auto& v : t.i64) v = r.get<std::int64_t>();
    }
    ar.tensors_[std::move(name)] = std::move(t);
  }
  if (r.pos != bytes.size()) throw IoError("trailing bytes after tensor archive");
  return ar;
}

void TensorArchive::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  const auto bytes = serialize();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write tensor archive " + path.string());
}

TensorArchive TensorArchive::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor archive " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace astra::model
