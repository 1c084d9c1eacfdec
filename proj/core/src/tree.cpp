#include "splaylab/tree.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace splaylab {

namespace {

void check_keys(const std::vector<Key>& keys) {
  if (keys.size() > kMaxKeys) {
    throw ShapeError("tree exceeds the supported key count (2^16)");
  }
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (keys[i - 1] == keys[i]) throw ShapeError("duplicate key " + std::to_string(keys[i]));
    if (keys[i - 1] > keys[i]) throw ShapeError("keys must be strictly increasing");
  }
}

}  // namespace

Tree::Tree(std::vector<Key> keys)
    : keys_(std::move(keys)),
      parent_(keys_.size(), kNoSlot),
      left_(keys_.size(), kNoSlot),
      right_(keys_.size(), kNoSlot) {}

std::vector<Key> Tree::iota_keys(std::size_t n, Key first) {
  std::vector<Key> keys(n);
  std::iota(keys.begin(), keys.end(), first);
  return keys;
}

Tree Tree::from_shape(std::vector<Key> keys, std::string_view shape) {
  check_keys(keys);
  Tree t(std::move(keys));

  struct Frame {
    Slot slot = kNoSlot;
    Slot left = kNoSlot;
    Slot right = kNoSlot;
    bool has_left = false;
  };
  std::vector<Frame> stack;
  Slot next_slot = 0;
  const auto n = static_cast<Slot>(t.size());
  bool closed_root = false;

  for (std::size_t pos = 0; pos < shape.size(); ++pos) {
    const char c = shape[pos];
    auto fail = [&](const std::string& what) {
      throw ShapeError("malformed shape at offset " + std::to_string(pos) + ": " + what);
    };
    switch (c) {
      case '(':
        if (closed_root) fail("text after the root node");
        if (!stack.empty()) {
          const Frame& top = stack.back();
          if (top.slot == kNoSlot && top.has_left) fail("two subtrees before a node slot");
          if (top.slot != kNoSlot && top.right != kNoSlot) fail("more than two subtrees");
        }
        stack.push_back({});
        break;
      case '.':
        if (stack.empty()) fail("node slot outside parentheses");
        if (stack.back().slot != kNoSlot) fail("two node slots in one node");
        if (next_slot >= n) fail("more node slots than keys");
        stack.back().slot = next_slot++;
        break;
      case ')': {
        if (stack.empty()) fail("unbalanced ')'");
        Frame done = stack.back();
        stack.pop_back();
        if (done.slot == kNoSlot) fail("node without a '.' slot");
        if (done.left != kNoSlot) t.link_child(done.slot, done.left, Side::Left);
        if (done.right != kNoSlot) t.link_child(done.slot, done.right, Side::Right);
        if (stack.empty()) {
          t.root_ = done.slot;
          closed_root = true;
        } else if (stack.back().slot == kNoSlot) {
          stack.back().left = done.slot;
          stack.back().has_left = true;
        } else {
          stack.back().right = done.slot;
        }
        break;
      }
      case ' ':
      case '\t':
      case '\n':
        break;
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }
  if (!stack.empty()) throw ShapeError("malformed shape: unbalanced '('");
  if (next_slot != n) {
    throw ShapeError("shape has " + std::to_string(next_slot) + " node slots but " +
                     std::to_string(n) + " keys were given");
  }
  t.cursor_ = t.root_;
  return t;
}

Tree Tree::from_parents(std::vector<Key> keys, std::span<const Slot> parents) {
  check_keys(keys);
  if (parents.size() != keys.size()) throw ShapeError("parent array size differs from key count");
  Tree t(std::move(keys));
  const auto n = static_cast<Slot>(t.size());
  for (Slot s = 0; s < n; ++s) {
    const Slot p = parents[static_cast<std::size_t>(s)];
    if (p == kNoSlot) {
      if (t.root_ != kNoSlot) throw ShapeError("more than one root");
      t.root_ = s;
      continue;
    }
    if (p < 0 || p >= n || p == s) throw ShapeError("parent slot out of range");
    const Side side = s < p ? Side::Left : Side::Right;
    if (t.child_slot(p, side) != kNoSlot) throw ShapeError("two children on one side");
    t.link_child(p, s, side);
  }
  if (n > 0 && t.root_ == kNoSlot) throw ShapeError("no root");
  t.cursor_ = t.root_;
  try {
    t.validate();
  } catch (const std::logic_error& e) {
    throw ShapeError(e.what());
  }
  return t;
}

Tree Tree::left_spine(std::vector<Key> keys) {
  check_keys(keys);
  Tree t(std::move(keys));
  const auto n = static_cast<Slot>(t.size());
  for (Slot s = 0; s + 1 < n; ++s) t.link_child(s + 1, s, Side::Left);
  t.root_ = n - 1;
  t.cursor_ = t.root_;
  if (n == 0) t.root_ = t.cursor_ = kNoSlot;
  return t;
}

Tree Tree::right_spine(std::vector<Key> keys) {
  check_keys(keys);
  Tree t(std::move(keys));
  const auto n = static_cast<Slot>(t.size());
  for (Slot s = 1; s < n; ++s) t.link_child(s - 1, s, Side::Right);
  t.root_ = n > 0 ? 0 : kNoSlot;
  t.cursor_ = t.root_;
  return t;
}

Tree Tree::balanced(std::vector<Key> keys) {
  check_keys(keys);
  Tree t(std::move(keys));
  const auto n = static_cast<Slot>(t.size());
  if (n == 0) return t;
  struct Range {
    Slot lo, hi, parent;
    Side side;
  };
  std::vector<Range> work{{0, n - 1, kNoSlot, Side::Left}};
  while (!work.empty()) {
    const Range r = work.back();
    work.pop_back();
    if (r.lo > r.hi) continue;
    const Slot mid = r.lo + (r.hi - r.lo) / 2;
    if (r.parent == kNoSlot) {
      t.root_ = mid;
    } else {
      t.link_child(r.parent, mid, r.side);
    }
    work.push_back({r.lo, mid - 1, mid, Side::Left});
    work.push_back({mid + 1, r.hi, mid, Side::Right});
  }
  t.cursor_ = t.root_;
  return t;
}

Slot Tree::find_slot(Key k) const noexcept {
  if (keys_.empty()) return kNoSlot;
  // Contiguous key ranges are the common case.
  const Key first = keys_.front();
  if (keys_.back() - first + 1 == static_cast<Key>(keys_.size())) {
    if (k < first || k > keys_.back()) return kNoSlot;
    return k - first;
  }
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it == keys_.end() || *it != k) return kNoSlot;
  return static_cast<Slot>(it - keys_.begin());
}

Slot Tree::slot_of(Key k) const {
  const Slot s = find_slot(k);
  if (s == kNoSlot) throw KeyError("unknown key " + std::to_string(k));
  return s;
}

Side Tree::side_of(Slot s) const noexcept {
  const Slot p = parent_slot(s);
  return left_slot(p) == s ? Side::Left : Side::Right;
}

std::uint32_t Tree::depth_slot(Slot s) const noexcept {
  std::uint32_t d = 0;
  for (Slot p = parent_slot(s); p != kNoSlot; p = parent_slot(p)) ++d;
  return d;
}

std::vector<std::uint32_t> Tree::depths() const {
  std::vector<std::uint32_t> out(size(), 0);
  if (empty()) return out;
  std::vector<Slot> stack{root_};
  while (!stack.empty()) {
    const Slot s = stack.back();
    stack.pop_back();
    const auto d = out[static_cast<std::size_t>(s)];
    for (Slot c : {left_slot(s), right_slot(s)}) {
      if (c == kNoSlot) continue;
      out[static_cast<std::size_t>(c)] = d + 1;
      stack.push_back(c);
    }
  }
  return out;
}

std::uint32_t Tree::height() const {
  const auto d = depths();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::vector<Key> Tree::in_order() const {
  std::vector<Key> out;
  out.reserve(size());
  std::vector<Slot> stack;
  Slot s = root_;
  while (s != kNoSlot || !stack.empty()) {
    while (s != kNoSlot) {
      stack.push_back(s);
      s = left_slot(s);
    }
    s = stack.back();
    stack.pop_back();
    out.push_back(key_at(s));
    s = right_slot(s);
  }
  return out;
}

std::vector<Key> Tree::path_from_root(Key k) const {
  std::vector<Key> path;
  for (Slot s = slot_of(k); s != kNoSlot; s = parent_slot(s)) path.push_back(key_at(s));
  std::reverse(path.begin(), path.end());
  return path;
}

std::string Tree::shape() const {
  std::string out;
  out.reserve(size() * 3);
  if (empty()) return out;
  // Frame state: 0 = emit '(' and descend left, 1 = emit '.' and descend right,
  // 2 = emit ')'.
  std::vector<std::pair<Slot, int>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto& [s, state] = stack.back();
    if (state == 0) {
      out.push_back('(');
      state = 1;
      if (const Slot l = left_slot(s); l != kNoSlot) stack.push_back({l, 0});
    } else if (state == 1) {
      out.push_back('.');
      state = 2;
      if (const Slot r = right_slot(s); r != kNoSlot) stack.push_back({r, 0});
    } else {
      out.push_back(')');
      stack.pop_back();
    }
  }
  return out;
}

void Tree::link_child(Slot parent, Slot child, Side side) noexcept {
  auto& slot = side == Side::Left ? left_[static_cast<std::size_t>(parent)]
                                  : right_[static_cast<std::size_t>(parent)];
  slot = child;
  if (child != kNoSlot) parent_[static_cast<std::size_t>(child)] = parent;
}

void Tree::rotate_up_slot(Slot x) {
  if (x < 0 || static_cast<std::size_t>(x) >= size()) throw KeyError("rotation slot out of range");
  const Slot p = parent_slot(x);
  if (p == kNoSlot) throw std::invalid_argument("cannot rotate the root upward");
  const Slot g = parent_slot(p);
  const Side xs = side_of(x);
  const Side ps = g == kNoSlot ? Side::Left : side_of(p);

  // The inner subtree of x switches parents.
  link_child(p, child_slot(x, opposite(xs)), xs);
  link_child(x, p, opposite(xs));
  if (g == kNoSlot) {
    parent_[static_cast<std::size_t>(x)] = kNoSlot;
    root_ = x;
  } else {
    link_child(g, x, ps);
  }
}

void Tree::validate() const {
  const auto n = static_cast<Slot>(size());
  for (std::size_t i = 1; i < keys_.size(); ++i) {
    if (keys_[i - 1] >= keys_[i]) throw std::logic_error("keys not strictly increasing");
  }
  if (n == 0) {
    if (root_ != kNoSlot) throw std::logic_error("empty tree with a root");
    return;
  }
  if (root_ < 0 || root_ >= n) throw std::logic_error("root out of range");
  if (parent_slot(root_) != kNoSlot) throw std::logic_error("root has a parent");
  if (cursor_ < 0 || cursor_ >= n) throw std::logic_error("cursor out of range");
  for (Slot s = 0; s < n; ++s) {
    const Slot p = parent_slot(s);
    if (s != root_ && p == kNoSlot) throw std::logic_error("non-root node without parent");
    if (p != kNoSlot && left_slot(p) != s && right_slot(p) != s) {
      throw std::logic_error("parent link not mirrored by a child link");
    }
    for (Slot c : {left_slot(s), right_slot(s)}) {
      if (c != kNoSlot && parent_slot(c) != s) throw std::logic_error("child link not mirrored");
    }
  }
  // In-order traversal must visit slots 0..n-1 in order; this also rules
  // out cycles and unreachable nodes.
  Slot expected = 0;
  std::vector<Slot> stack;
  Slot s = root_;
  while (s != kNoSlot || !stack.empty()) {
    while (s != kNoSlot) {
      if (static_cast<Slot>(stack.size()) > n) throw std::logic_error("cycle in tree links");
      stack.push_back(s);
      s = left_slot(s);
    }
    s = stack.back();
    stack.pop_back();
    if (s != expected) throw std::logic_error("in-order traversal violates key order");
    ++expected;
    s = right_slot(s);
  }
  if (expected != n) throw std::logic_error("unreachable nodes");
}

bool Tree::same_shape(const Tree& other) const noexcept {
  return keys_ == other.keys_ && root_ == other.root_ && parent_ == other.parent_ &&
         left_ == other.left_ && right_ == other.right_;
}

}  // namespace splaylab
