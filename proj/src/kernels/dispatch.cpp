#include <cstdlib>
#include <string_view>

#include "astra/kernels/bitstream.hpp"

namespace astra::kernels {

namespace avx2 {
#if ASTRA_HAVE_AVX2
bool available() {
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return ok;
}
#else
bool available() { return false; }
const KernelTable& table() { return scalar::table(); }
#endif
}  // namespace avx2

const KernelTable& active() {
  static const KernelTable& selected = []() -> const KernelTable& {
    const char* force = std::getenv("ASTRA_SIM_SIMD");
    if (force != nullptr && std::string_view(force) == "scalar") return scalar::table();
    if (avx2::available()) return avx2::table();
    return scalar::table();
  }();
  return selected;
}

}  // namespace astra::kernels
