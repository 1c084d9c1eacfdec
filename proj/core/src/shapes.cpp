#include "splaylab/shapes.hpp"

#include <array>
#include <stdexcept>

namespace splaylab {

namespace {

// completions[r][h]: number of '('/')' strings of length r that bring height h
// back to zero without dipping below it.
const std::vector<std::vector<std::uint64_t>>& completions() {
  static const auto table = [] {
    constexpr std::size_t kLen = 2 * kMaxRankedShape;
    std::vector<std::vector<std::uint64_t>> t(kLen + 1, std::vector<std::uint64_t>(kLen + 2, 0));
    t[0][0] = 1;
    for (std::size_t r = 1; r <= kLen; ++r) {
      for (std::size_t h = 0; h <= kLen; ++h) {
        t[r][h] = t[r - 1][h + 1] + (h > 0 ? t[r - 1][h - 1] : 0);
      }
    }
    return t;
  }();
  return table;
}

void check_rankable(std::size_t n) {
  if (n > kMaxRankedShape) throw std::invalid_argument("shape too large to rank");
}

// Converts the Dyck region [pos, end) into a shape descriptor.
void dyck_to_shape(std::string_view w, std::size_t pos, std::size_t end, std::string& out) {
  if (pos == end) return;
  if (w[pos] != '(') throw ShapeError("Dyck word must open with '('");
  int h = 0;
  std::size_t match = pos;
  for (; match < end; ++match) {
    h += w[match] == '(' ? 1 : -1;
    if (h == 0) break;
    if (h < 0) throw ShapeError("unbalanced Dyck word");
  }
  if (match == end) throw ShapeError("unbalanced Dyck word");
  out.push_back('(');
  dyck_to_shape(w, pos + 1, match, out);
  out.push_back('.');
  dyck_to_shape(w, match + 1, end, out);
  out.push_back(')');
}

}  // namespace

std::uint64_t catalan(std::size_t n) {
  check_rankable(n);
  return completions()[2 * n][0];
}

std::string dyck_word(const Tree& tree) {
  std::string out;
  out.reserve(2 * tree.size());
  if (tree.empty()) return out;
  // state 0: open and descend left; state 1: close and continue right.
  std::vector<std::pair<Slot, int>> stack{{tree.root_slot(), 0}};
  while (!stack.empty()) {
    auto& [s, state] = stack.back();
    if (state == 0) {
      out.push_back('(');
      state = 1;
      if (const Slot l = tree.left_slot(s); l != kNoSlot) stack.push_back({l, 0});
    } else {
      out.push_back(')');
      const Slot r = tree.right_slot(s);
      stack.pop_back();
      if (r != kNoSlot) stack.push_back({r, 0});
    }
  }
  return out;
}

Tree tree_from_dyck(std::string_view word, Key first_key) {
  if (word.size() % 2 != 0) throw ShapeError("Dyck word of odd length");
  std::string shape;
  dyck_to_shape(word, 0, word.size(), shape);
  return Tree::from_shape(Tree::iota_keys(word.size() / 2, first_key), shape);
}

std::uint64_t shape_rank(const Tree& tree) {
  check_rankable(tree.size());
  const auto& table = completions();
  const std::string w = dyck_word(tree);
  std::uint64_t rank = 0;
  std::size_t h = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t remaining = w.size() - i - 1;
    if (w[i] == ')') {
      rank += table[remaining][h + 1];  // words that put '(' here instead
      --h;
    } else {
      ++h;
    }
  }
  return rank;
}

Tree shape_unrank(std::size_t n, std::uint64_t rank, Key first_key) {
  check_rankable(n);
  if (rank >= catalan(n)) throw std::out_of_range("shape rank out of range");
  const auto& table = completions();
  std::string w;
  w.reserve(2 * n);
  std::size_t h = 0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const std::size_t remaining = 2 * n - i - 1;
    const std::uint64_t with_open = table[remaining][h + 1];
    if (rank < with_open) {
      w.push_back('(');
      ++h;
    } else {
      rank -= with_open;
      w.push_back(')');
      --h;
    }
  }
  return tree_from_dyck(w, first_key);
}

std::vector<Tree> enumerate_shapes(std::size_t n) {
  if (n < 1 || n > kMaxEnumeratedShape) {
    throw std::invalid_argument("shape enumeration supports 1 <= n <= 8");
  }
  const std::uint64_t count = catalan(n);
  std::vector<Tree> shapes;
  shapes.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) shapes.push_back(shape_unrank(n, r));
  return shapes;
}

}  // namespace splaylab
