#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splaylab/tree.hpp"

namespace splaylab {

// Canonical shape indexing. A shape is encoded as a Dyck word,
//
//   word(empty) = ""
//   word(node)  = "(" word(left) ")" word(right)
//
// and ranked lexicographically with '(' < ')' by counting ballot-path
// completions. Ranks run over [0, catalan(n)).

inline constexpr std::size_t kMaxRankedShape = 30;

std::uint64_t catalan(std::size_t n);

std::string dyck_word(const Tree& tree);
Tree tree_from_dyck(std::string_view word, Key first_key = 0);

std::uint64_t shape_rank(const Tree& tree);
Tree shape_unrank(std::size_t n, std::uint64_t rank, Key first_key = 0);

inline constexpr std::size_t kMaxEnumeratedShape = 8;

/// All shapes over keys 0..n-1 in rank order, for 1 <= n <= 8.
std::vector<Tree> enumerate_shapes(std::size_t n);

}  // namespace splaylab
