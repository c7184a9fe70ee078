#include "arbor/generators.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace arbor {

std::string_view pattern_name(Pattern pattern) {
  switch (pattern) {
    case Pattern::sequential:
      return "sequential";
    case Pattern::reverse:
      return "reverse";
    case Pattern::random:
      return "random";
    case Pattern::bit_reversal:
      return "bit_reversal";
    case Pattern::zigzag:
      return "zigzag";
  }
  return "unknown";
}

std::optional<Pattern> parse_pattern(std::string_view name) {
  for (const Pattern p : {Pattern::sequential, Pattern::reverse, Pattern::random,
                          Pattern::bit_reversal, Pattern::zigzag}) {
    if (pattern_name(p) == name) return p;
  }
  return std::nullopt;
}

namespace {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw std::invalid_argument("n must be at least 1, got " + std::to_string(n));
  std::vector<std::int32_t> access(static_cast<std::size_t>(n));

  switch (spec.pattern) {
    case Pattern::sequential:
      std::iota(access.begin(), access.end(), 1);
      break;
    case Pattern::reverse:
      for (int t = 1; t <= n; ++t) access[t - 1] = n + 1 - t;
      break;
    case Pattern::random: {
      std::iota(access.begin(), access.end(), 1);
      std::mt19937_64 rng(spec.seed);
      for (std::size_t i = access.size() - 1; i > 0; --i) {
        std::swap(access[i], access[uniform_below(rng, i + 1)]);
      }
      break;
    }
    case Pattern::bit_reversal: {
      if ((n & (n - 1)) != 0) {
        throw std::invalid_argument("bit_reversal needs a power-of-two n, got " +
                                    std::to_string(n));
      }
      int bits = 0;
      while ((1 << bits) < n) ++bits;
      for (int t = 0; t < n; ++t) {
        int reversed = 0;
        for (int b = 0; b < bits; ++b) {
          if (t & (1 << b)) reversed |= 1 << (bits - 1 - b);
        }
        access[static_cast<std::size_t>(t)] = reversed + 1;
      }
      break;
    }
    case Pattern::zigzag: {
      std::int32_t lo = 1;
      std::int32_t hi = n;
      for (int t = 0; t < n; ++t) access[static_cast<std::size_t>(t)] = (t % 2 == 0) ? lo++ : hi--;
      break;
    }
  }
  return Instance(std::move(access));
}

std::vector<Instance> enumerate_permutations(int n) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("enumerate_permutations supports n in 1..8, got " +
                                std::to_string(n));
  }
  std::vector<Instance> out;
  for_each_permutation(n, [&](Instance inst) {
    out.push_back(std::move(inst));
    return true;
  });
  return out;
}

}  // namespace arbor
