#include "astra/sc/quantized_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "astra/sc/ops.hpp"

namespace astra::sc {

FixedPointValue QuantizedMatrix::at(std::size_t r, std::size_t c) const {
  const std::int32_t code = codes[r * cols + c];
  FixedPointValue v;
  v.negative = code < 0;
  v.magnitude_code = static_cast<std::uint32_t>(code < 0 ? -code : code);
  v.magnitude_bits = magnitude_bits;
  v.scale = scale;
  return v;
}

Matrix QuantizedMatrix::dequantize() const {
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out.data()[i] = std::ldexp(static_cast<double>(codes[i]), -static_cast<int>(magnitude_bits)) * scale;
  }
  return out;
}

QuantizedMatrix QuantizedMatrix::quantize(const Matrix& m, std::uint32_t magnitude_bits) {
  double max_abs = 0.0;
  for (double v : m.data()) max_abs = std::max(max_abs, std::fabs(v));
  QuantizedMatrix q;
  q.rows = m.rows();
  q.cols = m.cols();
  q.magnitude_bits = magnitude_bits;
  q.scale = max_abs > 0.0 ? max_abs : 1.0;
  q.codes.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) q.codes[i] = sc::quantize(m.data()[i], magnitude_bits, q.scale).signed_code();
  return q;
}

}  // namespace astra::sc
