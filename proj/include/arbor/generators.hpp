#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "arbor/geometry.hpp"

namespace arbor {

enum class Pattern { sequential, reverse, random, bit_reversal, zigzag };

std::string_view pattern_name(Pattern pattern);
std::optional<Pattern> parse_pattern(std::string_view name);

struct GeneratorSpec {
  Pattern pattern = Pattern::sequential;
  int n = 1;
  std::uint64_t seed = 0;  // random only
};

/// Throws std::invalid_argument for n < 1, or bit_reversal with n not a power of two.
///
/// The random pattern is frozen: std::mt19937_64 seeded with `seed`, then a
/// Fisher-Yates shuffle of 1..n running i = n-1 down to 1 and swapping slot i
/// with slot j, where j is drawn uniformly from [0, i] by rejection sampling
/// (draws at or above the largest multiple of i+1 below 2^64 are discarded,
/// the rest are reduced mod i+1). The standard fixes mt19937_64's output
/// sequence, so the result is identical on every platform.
Instance generate(const GeneratorSpec& spec);

/// Calls `visit(instance)` for all n! permutations in lexicographic order.
/// Stops early if `visit` returns false.
template <typename Visit>
void for_each_permutation(int n, Visit&& visit);

/// All n! permutations in lexicographic order; n must be in 1..8.
std::vector<Instance> enumerate_permutations(int n);

}  // namespace arbor

#include <algorithm>
#include <numeric>

template <typename Visit>
void arbor::for_each_permutation(int n, Visit&& visit) {
  if (n < 1) return;
  std::vector<std::int32_t> keys(static_cast<std::size_t>(n));
  std::iota(keys.begin(), keys.end(), 1);
  do {
    if (!visit(Instance(keys))) return;
  } while (std::next_permutation(keys.begin(), keys.end()));
}
