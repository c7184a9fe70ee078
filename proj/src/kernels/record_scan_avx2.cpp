// Compiled with -mavx2; only reached through the runtime dispatch in
// record_scan.cpp after the CPU check.

#include <immintrin.h>

#include <climits>

#include "arbor/kernels/record_scan.hpp"

namespace arbor::kernels::avx2 {
namespace {

// Lane i takes lane i-k; lanes below k take `fill`.
template <int K>
inline __m256i shift_up(__m256i v, __m256i fill) {
  static_assert(K == 1 || K == 2 || K == 4);
  const __m256i idx = K == 1   ? _mm256_setr_epi32(0, 0, 1, 2, 3, 4, 5, 6)
                      : K == 2 ? _mm256_setr_epi32(0, 0, 0, 1, 2, 3, 4, 5)
                               : _mm256_setr_epi32(0, 0, 0, 0, 0, 1, 2, 3);
  const __m256i moved = _mm256_permutevar8x32_epi32(v, idx);
  return _mm256_blend_epi32(moved, fill, (1 << K) - 1);
}

inline void emit(unsigned bits, std::size_t base, std::vector<std::int32_t>& out) {
  while (bits != 0) {
    const int lane = __builtin_ctz(bits);
    out.push_back(static_cast<std::int32_t>(base + lane));
    bits &= bits - 1;
  }
}

inline unsigned lane_mask(__m256i cmp) {
  return static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(cmp)));
}

}  // namespace

void max_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out) {
  const std::size_t size = values.size();
  const std::size_t body = size & ~std::size_t{7};
  const __m256i floor = _mm256_set1_epi32(INT_MIN);
  const __m256i last = _mm256_set1_epi32(7);
  __m256i running = _mm256_set1_epi32(seed);

  for (std::size_t i = 0; i < body; i += 8) {
    const __m256i x =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i));
    if (lane_mask(_mm256_cmpgt_epi32(x, running)) == 0) continue;

    __m256i prefix = _mm256_max_epi32(x, shift_up<1>(x, floor));
    prefix = _mm256_max_epi32(prefix, shift_up<2>(prefix, floor));
    prefix = _mm256_max_epi32(prefix, shift_up<4>(prefix, floor));
    const __m256i before = _mm256_max_epi32(shift_up<1>(prefix, floor), running);

    emit(lane_mask(_mm256_cmpgt_epi32(x, before)), i, out);
    running = _mm256_max_epi32(running, _mm256_permutevar8x32_epi32(prefix, last));
  }

  std::int32_t best = _mm256_extract_epi32(running, 0);
  for (std::size_t i = body; i < size; ++i) {
    if (values[i] > best) {
      best = values[i];
      out.push_back(static_cast<std::int32_t>(i));
    }
  }
}

void min_records(std::span<const std::int32_t> values, std::int32_t seed,
                 std::vector<std::int32_t>& out) {
  const std::size_t size = values.size();
  const std::size_t body = size & ~std::size_t{7};
  const __m256i ceiling = _mm256_set1_epi32(INT_MAX);
  const __m256i last = _mm256_set1_epi32(7);
  __m256i running = _mm256_set1_epi32(seed);

  for (std::size_t i = 0; i < body; i += 8) {
    const __m256i x =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i));
    if (lane_mask(_mm256_cmpgt_epi32(running, x)) == 0) continue;

    __m256i prefix = _mm256_min_epi32(x, shift_up<1>(x, ceiling));
    prefix = _mm256_min_epi32(prefix, shift_up<2>(prefix, ceiling));
    prefix = _mm256_min_epi32(prefix, shift_up<4>(prefix, ceiling));
    const __m256i before = _mm256_min_epi32(shift_up<1>(prefix, ceiling), running);

    emit(lane_mask(_mm256_cmpgt_epi32(before, x)), i, out);
    running = _mm256_min_epi32(running, _mm256_permutevar8x32_epi32(prefix, last));
  }

  std::int32_t best = _mm256_extract_epi32(running, 0);
  for (std::size_t i = body; i < size; ++i) {
    if (values[i] < best) {
      best = values[i];
      out.push_back(static_cast<std::int32_t>(i));
    }
  }
}

}  // namespace arbor::kernels::avx2
