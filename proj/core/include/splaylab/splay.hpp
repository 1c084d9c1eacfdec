#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splaylab/machine.hpp"
#include "splaylab/tree.hpp"

namespace splaylab {

enum class SplayCase : std::uint8_t { Zig, ZigZig, ZigZag };

/// One splay step. `side` is the side of the splayed node's parent under the
/// grandparent for ZigZig/ZigZag, and the side of the node itself for Zig.
/// Right-side cases are the mirror images of the left-side ones.
struct SplayStepKind {
  SplayCase kind = SplayCase::Zig;
  Side side = Side::Left;
  friend bool operator==(const SplayStepKind&, const SplayStepKind&) = default;
};

StepOp to_step(SplayCase c) noexcept;

struct SplayRecord {
  Key key = 0;
  std::uint32_t depth_before = 0;
  std::vector<SplayStepKind> steps;
  // Downward moves needed to reach the key; the splay tree pays nothing else.
  std::uint64_t move_cost = 0;
};

/// Applies one bottom-up splay step to `key`. Throws std::invalid_argument
/// when `key` is the root.
SplayStepKind splay_step(Tree& state, Key key);

/// Bottom-up splay of `key` to the root. The cursor ends at the root.
SplayRecord splay(Tree& state, Key key);

struct ServeResult {
  Trace trace;
  std::vector<SplayRecord> records;
  std::uint64_t total_cost = 0;
};

/// Splays every query in order. Throws KeyError naming the index of the first
/// query missing from the tree. The trace lists, per query, the descent moves
/// followed by the splay steps.
ServeResult serve_queries(Tree& state, std::span<const Key> queries);

/// Total move cost of splaying `queries` in order, without building a trace.
std::uint64_t splay_cost(Tree& state, std::span<const Key> queries);

/// Replays a splay trace (machine moves plus zig/zigzig/zigzag steps), checking
/// the recorded cursors and ledger.
Tree replay_splay_trace(const Trace& trace);

struct DepthHalvingReport {
  std::size_t path_nodes = 0;
  std::size_t flagged = 0;  // nodes exceeding ceil((d + 1) / 2) + 1
};

/// Splays `key` and compares the depth of every node on the access path before
/// and after. Observational; flags are reported, never thrown.
DepthHalvingReport splay_with_depth_report(Tree& state, Key key);

}  // namespace splaylab
