#pragma once

// Strict running-extremum ("record") scans over int32 columns.
//
// Both the greedy sweep and the satisfaction checker reduce their inner loop
// to the same question: walking away from a pivot column, which entries beat
// every entry seen so far (and a seed value)? The scalar kernels are the
// reference; the AVX2 kernels must produce identical index lists.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace arbor::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best ISA compiled in and supported by the running CPU.
Isa detect_isa();

/// ISA used by the dispatching entry points. Defaults to detect_isa(), or to
/// scalar if the ARBOR_SIMD environment variable is "scalar".
Isa active_isa();

/// Override the dispatch target. Requesting an unsupported ISA falls back
/// to scalar; returns the ISA actually selected.
Isa set_active_isa(Isa isa);

/// True if `isa` can run on this build and CPU.
bool isa_available(Isa isa);

namespace scalar {
/// Appends every i with values[i] > max(seed, values[0..i)) to `out`.
void max_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out);
/// Appends every i with values[i] < min(seed, values[0..i)) to `out`.
void min_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out);
}  // namespace scalar

#if defined(ARBOR_HAVE_AVX2)
namespace avx2 {
void max_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out);
void min_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out);
}  // namespace avx2
#endif

void max_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out);
void min_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out);

}  // namespace arbor::kernels
