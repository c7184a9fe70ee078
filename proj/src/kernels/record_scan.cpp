#include "arbor/kernels/record_scan.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace arbor::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(ARBOR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace {

Isa initial_isa() {
  const char* env = std::getenv("ARBOR_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return Isa::scalar;
  return detect_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::scalar;
  active_slot().store(isa, std::memory_order_relaxed);
  return isa;
}

namespace scalar {

void max_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out) {
  std::int32_t best = seed;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > best) {
      best = values[i];
      out.push_back(static_cast<std::int32_t>(i));
    }
  }
}

void min_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out) {
  std::int32_t best = seed;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < best) {
      best = values[i];
      out.push_back(static_cast<std::int32_t>(i));
    }
  }
}

}  // namespace scalar

void max_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out) {
#if defined(ARBOR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::max_records(values, seed, out);
#endif
  scalar::max_records(values, seed, out);
}

void min_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out) {
#if defined(ARBOR_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::min_records(values, seed, out);
#endif
  scalar::min_records(values, seed, out);
}

}  // namespace arbor::kernels
