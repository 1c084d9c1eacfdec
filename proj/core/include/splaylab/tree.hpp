#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace splaylab {

// Keys are ranks in key order. Sentinel keys used by the restricted
// simulation sit just outside the range of the keys they bracket.
using Key = std::int32_t;

// Index of a node inside a Tree's storage (position in sorted key order).
using Slot = std::int32_t;
inline constexpr Slot kNoSlot = -1;

inline constexpr std::size_t kMaxKeys = std::size_t{1} << 16;

enum class Side : std::uint8_t { Left, Right };

inline constexpr Side opposite(Side s) noexcept {
  return s == Side::Left ? Side::Right : Side::Left;
}

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class KeyError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A binary search tree over a fixed, strictly increasing key set, plus a
/// cursor. Nodes are stored by slot, where slot i holds the i-th smallest key,
/// so in-order position and storage index coincide.
class Tree {
 public:
  Tree() = default;

  /// Builds a tree from a shape descriptor. Grammar:
  ///
  ///   node ::= "(" [node] "." [node] ")"
  ///
  /// Each "." is one node slot; slots receive `keys` in order of appearance,
  /// which is in-order. The empty string is the empty tree.
  static Tree from_shape(std::vector<Key> keys, std::string_view shape);

  /// Builds a tree from a parent array indexed by slot (kNoSlot for root).
  /// Child sides are implied by key order.
  static Tree from_parents(std::vector<Key> keys, std::span<const Slot> parents);

  static Tree left_spine(std::vector<Key> keys);   // largest key at the root
  static Tree right_spine(std::vector<Key> keys);  // smallest key at the root
  static Tree balanced(std::vector<Key> keys);     // median-split

  /// Keys 0..n-1.
  static std::vector<Key> iota_keys(std::size_t n, Key first = 0);

  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  std::span<const Key> keys() const noexcept { return keys_; }

  bool contains(Key k) const noexcept { return find_slot(k) != kNoSlot; }
  Slot slot_of(Key k) const;                  // throws KeyError
  Slot find_slot(Key k) const noexcept;       // kNoSlot when absent
  Key key_at(Slot s) const { return keys_.at(static_cast<std::size_t>(s)); }

  Key root() const { return key_at(root_); }
  Key cursor() const { return key_at(cursor_); }
  Slot root_slot() const noexcept { return root_; }
  Slot cursor_slot() const noexcept { return cursor_; }

  std::optional<Key> parent(Key k) const { return key_or_none(parent_slot(slot_of(k))); }
  std::optional<Key> left(Key k) const { return key_or_none(left_slot(slot_of(k))); }
  std::optional<Key> right(Key k) const { return key_or_none(right_slot(slot_of(k))); }
  std::optional<Key> child(Key k, Side side) const {
    return side == Side::Left ? left(k) : right(k);
  }

  Slot parent_slot(Slot s) const noexcept { return parent_[static_cast<std::size_t>(s)]; }
  Slot left_slot(Slot s) const noexcept { return left_[static_cast<std::size_t>(s)]; }
  Slot right_slot(Slot s) const noexcept { return right_[static_cast<std::size_t>(s)]; }
  Slot child_slot(Slot s, Side side) const noexcept {
    return side == Side::Left ? left_slot(s) : right_slot(s);
  }

  /// Which child of its parent `s` is. Precondition: `s` is not the root.
  Side side_of(Slot s) const noexcept;

  /// Distance to the root, by walking parent links.
  std::uint32_t depth(Key k) const { return depth_slot(slot_of(k)); }
  std::uint32_t depth_slot(Slot s) const noexcept;

  /// Depth of every slot, computed top-down in one pass.
  std::vector<std::uint32_t> depths() const;
  std::uint32_t height() const;  // maximum depth; 0 for a singleton

  std::vector<Key> in_order() const;
  std::vector<Key> path_from_root(Key k) const;
  std::string shape() const;

  /// Single upward rotation of `k` over its parent. The cursor does not move.
  void rotate_up(Key k) { rotate_up_slot(slot_of(k)); }
  void rotate_up_slot(Slot s);

  void set_cursor(Key k) { cursor_ = slot_of(k); }
  void set_cursor_slot(Slot s) noexcept { cursor_ = s; }

  /// Throws std::logic_error when a structural invariant is broken.
  void validate() const;

  /// Structural equality over keys, links, and cursor.
  friend bool operator==(const Tree& a, const Tree& b) = default;

  /// Same keys and links; cursor ignored.
  bool same_shape(const Tree& other) const noexcept;

 private:
  explicit Tree(std::vector<Key> keys);
  std::optional<Key> key_or_none(Slot s) const {
    if (s == kNoSlot) return std::nullopt;
    return key_at(s);
  }
  void link_child(Slot parent, Slot child, Side side) noexcept;

  std::vector<Key> keys_;
  std::vector<Slot> parent_;
  std::vector<Slot> left_;
  std::vector<Slot> right_;
  Slot root_ = kNoSlot;
  Slot cursor_ = kNoSlot;
};

}  // namespace splaylab
