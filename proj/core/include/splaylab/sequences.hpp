#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "splaylab/tree.hpp"

namespace splaylab {

// Randomness: every consumer derives an independent mt19937_64 from a root
// seed and a stream index, and maps draws to ranges with the helpers below
// rather than std:: distributions, whose outputs vary across standard
// libraries.

using Rng = std::mt19937_64;

Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag = 0);

/// Uniform integer in [0, bound), bound > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Rng& rng);

/// Random BST over `keys`, choosing each subtree root uniformly.
Tree random_tree(Rng& rng, std::vector<Key> keys);

enum class GeneratorKind : std::uint8_t { Uniform, Sequential, Zipf, WorkingSet, RepeatedExtremes };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Uniform;
  double parameter = 0.0;  // zipf exponent or working-set size
};

/// Accepts "uniform", "sequential", "zipf(s)" or "zipf:s", "working-set(w)"
/// or "working-set:w", "repeated-extremes". Throws std::invalid_argument.
GeneratorSpec parse_generator(std::string_view text);
std::string generator_name(const GeneratorSpec& spec);

/// Queries over keys 0..n-1.
///
/// uniform            independent uniform keys
/// sequential         i mod n for i < m
/// zipf(s)            popularity rank r drawn with probability ~ 1/r^s; ranks
///                    map to keys through a seeded permutation
/// working-set(w)     with probability 3/4 a uniform pick among the w most
///                    recently queried distinct keys, otherwise uniform
/// repeated-extremes  0, n-1, 0, n-1, ...
std::vector<Key> generate_sequence(const GeneratorSpec& spec, std::size_t n, std::size_t m,
                                   std::uint64_t seed);

}  // namespace splaylab
