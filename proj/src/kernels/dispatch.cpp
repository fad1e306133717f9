#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qda/kernels.hpp"

namespace qda::kernels {

#if defined(QDA_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(QDA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* env = std::getenv("QDA_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_table();
  if (choice == "avx2" && !isa_available(Isa::avx2)) {
    throw std::runtime_error("QDA_SIMD=avx2 requested but AVX2 is unavailable");
  }
  if ((choice == "avx2" || choice == "auto") && isa_available(Isa::avx2)) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable* avx2_table() {
#if defined(QDA_HAVE_AVX2)
  return &avx2_table_impl();
#else
  return nullptr;
#endif
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool has = cpu_has_avx2();
  return has && avx2_table() != nullptr;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("kernel variant " + std::string(to_string(isa)) + " is unavailable");
  }
  return isa == Isa::avx2 ? *avx2_table() : scalar_table();
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void set_active(Isa isa) { current().store(&table(isa), std::memory_order_release); }

}  // namespace qda::kernels
