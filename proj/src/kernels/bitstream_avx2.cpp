// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>
#include <cassert>

#include "astra/kernels/bitstream.hpp"

namespace astra::kernels::avx2 {
namespace {

// Per-64-bit-lane popcount (nibble lookup + SAD).
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t hsum_epi64(__m256i v) {
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

void encode_threshold(std::uint16_t level, std::span<const std::uint16_t> thresholds,
                      std::span<std::uint64_t> out) {
  assert(out.size() >= words_for_bits(thresholds.size()));
  for (auto& w : out) w = 0;
  const __m256i lv = _mm256_set1_epi16(static_cast<short>(level));
  std::size_t i = 0;
  for (; i + 16 <= thresholds.size(); i += 16) {
    const __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(thresholds.data() + i));
    // t >= level (unsigned) <=> max(t, level) == t
    const __m256i ge = _mm256_cmpeq_epi16(_mm256_max_epu16(t, lv), t);
    const __m256i packed = _mm256_permute4x64_epi64(_mm256_packs_epi16(ge, ge), 0x08);
    const auto not_set = static_cast<std::uint32_t>(_mm256_movemask_epi8(packed)) & 0xffffu;
    const std::uint64_t bits = (~not_set) & 0xffffu;
    out[i / 64] |= bits << (i % 64);
  }
  if (i == thresholds.size()) return;
  // Tail stays within one word since the vector loop stops on a 16-bit boundary.
  std::uint64_t tail = 0;
  const std::size_t base = i;
  for (; i < thresholds.size(); ++i) {
    tail |= std::uint64_t{level > thresholds[i]} << (i - base);
  }
  out[base / 64] |= tail << (base % 64);
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  assert(a.size() == b.size());
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(va, vb)));
  }
  std::uint64_t count = hsum_epi64(acc);
  for (; i < a.size(); ++i) count += std::popcount(a[i] & b[i]);
  return count;
}

RailCounts and_popcount_rails(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                              std::span<const std::uint64_t> a_sign,
                              std::span<const std::uint64_t> b_sign) {
  assert(a.size() == b.size() && a.size() == a_sign.size() && a.size() == b_sign.size());
  __m256i pos = _mm256_setzero_si256();
  __m256i neg = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const __m256i sa = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a_sign.data() + i));
    const __m256i sb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b_sign.data() + i));
    const __m256i ones = popcount_epi64(_mm256_and_si256(va, vb));
    const __m256i negative = _mm256_xor_si256(sa, sb);
    pos = _mm256_add_epi64(pos, _mm256_andnot_si256(negative, ones));
    neg = _mm256_add_epi64(neg, _mm256_and_si256(negative, ones));
  }
  RailCounts rails{hsum_epi64(pos), hsum_epi64(neg)};
  for (; i < a.size(); ++i) {
    const std::uint64_t ones = std::popcount(a[i] & b[i]);
    const std::uint64_t negative = a_sign[i] ^ b_sign[i];
    rails.positive += ones & ~negative;
    rails.negative += ones & negative;
  }
  return rails;
}

std::int64_t dot_i16(std::span<const std::int16_t> a, std::span<const std::int16_t> b) {
  assert(a.size() == b.size());
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= a.size(); i += 16) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    // |a|,|b| <= 32767 keeps each pair sum below 2^31.
    const __m256i pairs = _mm256_madd_epi16(va, vb);
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(pairs)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(pairs, 1)));
  }
  auto total = static_cast<std::int64_t>(hsum_epi64(acc));
  for (; i < a.size(); ++i) total += std::int64_t{a[i]} * b[i];
  return total;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{"avx2", &encode_threshold, &and_popcount, &and_popcount_rails, &dot_i16};
  return t;
}

}  // namespace astra::kernels::avx2
