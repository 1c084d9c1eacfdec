#include "splaylab/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "splaylab/shapes.hpp"

namespace splaylab {

namespace {

constexpr std::uint64_t kUnreached = std::numeric_limits<std::uint64_t>::max();

// Per-shape adjacency for all slots of all shapes on n keys.
struct ShapeTable {
  std::size_t n = 0;
  std::size_t count = 0;
  std::vector<Slot> left, right, parent;  // [shape * n + slot]
  std::vector<std::uint32_t> rotated;     // shape after rotating slot up; self at the root
  std::vector<Slot> root;

  explicit ShapeTable(std::size_t keys) : n(keys), count(catalan(keys)) {
    left.resize(count * n);
    right.resize(count * n);
    parent.resize(count * n);
    rotated.resize(count * n);
    root.resize(count);
    for (std::size_t sh = 0; sh < count; ++sh) {
      const Tree t = shape_unrank(n, sh);
      root[sh] = t.root_slot();
      for (std::size_t s = 0; s < n; ++s) {
        const auto slot = static_cast<Slot>(s);
        const std::size_t i = sh * n + s;
        left[i] = t.left_slot(slot);
        right[i] = t.right_slot(slot);
        parent[i] = t.parent_slot(slot);
        if (parent[i] == kNoSlot) {
          rotated[i] = static_cast<std::uint32_t>(sh);
        } else {
          Tree r = t;
          r.rotate_up_slot(slot);
          rotated[i] = static_cast<std::uint32_t>(shape_rank(r));
        }
      }
    }
  }
};

struct State {
  std::uint32_t shape;
  Slot cursor;
  std::uint32_t next;
  bool pending;
};

}  // namespace

OracleResult opt_cost(const Tree& initial, std::span<const Key> queries) {
  const std::size_t n = initial.size();
  if (n == 0) throw std::invalid_argument("oracle needs a nonempty tree");
  if (n > kOracleMaxKeys || queries.size() > kOracleMaxQueries) {
    throw InstanceTooLarge("oracle instance too large (n <= 6, m <= 8)");
  }
  std::vector<Slot> qslots;
  qslots.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Slot s = initial.find_slot(queries[i]);
    if (s == kNoSlot) {
      throw KeyError("query " + std::to_string(i) + ": unknown key " + std::to_string(queries[i]));
    }
    qslots.push_back(s);
  }

  const ShapeTable table(n);
  const std::size_t m = queries.size();
  auto encode = [&](const State& st) {
    return ((static_cast<std::size_t>(st.shape) * n + static_cast<std::size_t>(st.cursor)) *
                (m + 1) +
            st.next) *
               2 +
           (st.pending ? 1 : 0);
  };
  auto decode = [&](std::size_t id) {
    State st{};
    st.pending = (id & 1) != 0;
    id /= 2;
    st.next = static_cast<std::uint32_t>(id % (m + 1));
    id /= m + 1;
    st.cursor = static_cast<Slot>(id % n);
    st.shape = static_cast<std::uint32_t>(id / n);
    return st;
  };

  const std::size_t total = table.count * n * (m + 1) * 2;
  std::vector<std::uint64_t> dist(total, kUnreached);
  std::vector<std::size_t> prev(total, total);
  std::vector<std::int8_t> via(total, -1);  // OpKind of the edge, -1 for free edges
  std::vector<bool> settled(total, false);

  const State start{static_cast<std::uint32_t>(shape_rank(initial)), initial.root_slot(), 0, false};
  std::deque<std::size_t> frontier;
  const std::size_t start_id = encode(start);
  dist[start_id] = 0;
  frontier.push_back(start_id);

  OracleResult out;
  out.initial = initial;
  out.initial.set_cursor_slot(out.initial.root_slot());
  out.queries.assign(queries.begin(), queries.end());

  std::size_t goal = total;
  while (!frontier.empty()) {
    const std::size_t id = frontier.front();
    frontier.pop_front();
    if (settled[id]) continue;
    settled[id] = true;
    ++out.states_settled;
    const State st = decode(id);
    if (st.next == m && !st.pending) {
      goal = id;
      break;
    }
    auto relax = [&](const State& to, std::uint64_t w, int op) {
      const std::size_t tid = encode(to);
      if (dist[id] + w < dist[tid]) {
        dist[tid] = dist[id] + w;
        prev[tid] = id;
        via[tid] = static_cast<std::int8_t>(op);
        if (w == 0) {
          frontier.push_front(tid);
        } else {
          frontier.push_back(tid);
        }
      }
    };

    const std::size_t base = st.shape * n + static_cast<std::size_t>(st.cursor);
    const bool at_root = table.parent[base] == kNoSlot;
    if (st.pending && at_root) {
      relax({st.shape, st.cursor, st.next, false}, 0, -1);
      continue;
    }
    if (!st.pending && st.next < m && st.cursor == qslots[st.next]) {
      relax({st.shape, st.cursor, st.next + 1, !at_root}, 0, -1);
      continue;
    }
    if (table.left[base] != kNoSlot) {
      relax({st.shape, table.left[base], st.next, st.pending}, 1,
            static_cast<int>(OpKind::MoveLeft));
    }
    if (table.right[base] != kNoSlot) {
      relax({st.shape, table.right[base], st.next, st.pending}, 1,
            static_cast<int>(OpKind::MoveRight));
    }
    if (!at_root) {
      relax({st.shape, table.parent[base], st.next, st.pending}, 1,
            static_cast<int>(OpKind::MoveParent));
      relax({table.rotated[base], st.cursor, st.next, st.pending}, 1,
            static_cast<int>(OpKind::Rotate));
    }
  }
  if (goal == total) throw std::logic_error("oracle search exhausted without serving all queries");

  out.opt_cost = dist[goal];
  std::vector<MachineOp> ops;
  for (std::size_t id = goal; id != start_id; id = prev[id]) {
    if (via[id] >= 0) ops.push_back({static_cast<OpKind>(via[id]), std::nullopt});
  }
  std::reverse(ops.begin(), ops.end());
  out.witness.ops = std::move(ops);
  return out;
}

FrequencyTable FrequencyTable::from_queries(std::vector<Key> keys, std::span<const Key> queries) {
  FrequencyTable f;
  if (!std::is_sorted(keys.begin(), keys.end()) ||
      std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw std::invalid_argument("frequency keys must be strictly increasing");
  }
  f.keys = std::move(keys);
  f.counts.assign(f.keys.size(), 0);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto it = std::lower_bound(f.keys.begin(), f.keys.end(), queries[i]);
    if (it == f.keys.end() || *it != queries[i]) {
      throw KeyError("query " + std::to_string(i) + ": unknown key " + std::to_string(queries[i]));
    }
    ++f.counts[static_cast<std::size_t>(it - f.keys.begin())];
  }
  f.total = queries.size();
  return f;
}

Tree static_optimal(const FrequencyTable& freq) {
  const std::size_t n = freq.keys.size();
  if (n == 0) throw std::invalid_argument("static-optimal tree needs keys");
  if (freq.counts.size() != n) throw std::invalid_argument("frequency table size mismatch");

  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + freq.counts[i];

  // cost[i][j], root[i][j] over half-open intervals [i, j).
  const std::size_t w = n + 1;
  std::vector<std::uint64_t> cost(w * w, 0);
  std::vector<std::size_t> root(w * w, 0);
  auto at = [w](std::size_t i, std::size_t j) { return i * w + j; };
  for (std::size_t i = 0; i < n; ++i) {
    cost[at(i, i + 1)] = freq.counts[i];
    root[at(i, i + 1)] = i;
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      const std::size_t lo = root[at(i, j - 1)];
      const std::size_t hi = root[at(i + 1, j)];
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      std::size_t best_r = lo;
      for (std::size_t r = lo; r <= hi; ++r) {
        const std::uint64_t c = cost[at(i, r)] + cost[at(r + 1, j)];
        if (c < best) {
          best = c;
          best_r = r;
        }
      }
      cost[at(i, j)] = best + (prefix[j] - prefix[i]);
      root[at(i, j)] = best_r;
    }
  }

  std::vector<Slot> parents(n, kNoSlot);
  struct Span {
    std::size_t i, j;
    Slot parent;
  };
  std::vector<Span> stack{{0, n, kNoSlot}};
  while (!stack.empty()) {
    const Span sp = stack.back();
    stack.pop_back();
    if (sp.i >= sp.j) continue;
    const std::size_t r = root[at(sp.i, sp.j)];
    parents[r] = sp.parent;
    stack.push_back({sp.i, r, static_cast<Slot>(r)});
    stack.push_back({r + 1, sp.j, static_cast<Slot>(r)});
  }
  return Tree::from_parents(freq.keys, parents);
}

std::uint64_t static_cost(const Tree& tree, const FrequencyTable& freq) {
  if (!std::equal(tree.keys().begin(), tree.keys().end(), freq.keys.begin(), freq.keys.end())) {
    throw std::invalid_argument("tree and frequency table hold different keys");
  }
  const auto depths = tree.depths();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) total += freq.counts[i] * (depths[i] + 1ULL);
  return total;
}

ServiceCheck check_service(const Tree& initial, const MachineProgram& program,
                           std::span<const Key> queries) {
  ServiceCheck out;
  Tree t = initial;
  if (t.empty()) {
    out.served = queries.empty() && program.empty();
    return out;
  }
  std::size_t next = 0;
  bool pending = false;
  out.segment_starts.push_back(0);
  auto settle = [&](std::size_t executed) {
    for (;;) {
      const bool at_root = t.cursor_slot() == t.root_slot();
      if (pending && at_root) {
        pending = false;
        if (next < queries.size()) out.segment_starts.push_back(executed);
        continue;
      }
      if (!pending && next < queries.size() && t.cursor() == queries[next]) {
        ++next;
        pending = true;
        continue;
      }
      return;
    }
  };
  if (t.cursor_slot() != t.root_slot()) return out;
  settle(0);
  for (std::size_t i = 0; i < program.ops.size(); ++i) {
    try {
      apply_op(t, out.ledger, program.ops[i]);
    } catch (const MachineError&) {
      out.segment_starts.clear();
      return out;
    }
    settle(i + 1);
  }
  out.served = next == queries.size() && !pending;
  if (queries.empty()) out.segment_starts.clear();
  return out;
}

ServingProgram static_walk_program(const Tree& tree, std::span<const Key> queries) {
  ServingProgram out;
  out.initial = tree;
  if (!tree.empty()) out.initial.set_cursor_slot(tree.root_slot());
  out.queries.assign(queries.begin(), queries.end());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (!tree.contains(queries[i])) {
      throw KeyError("query " + std::to_string(i) + ": unknown key " + std::to_string(queries[i]));
    }
    const auto down = descend_to(out.initial, queries[i]);
    out.program.ops.insert(out.program.ops.end(), down.begin(), down.end());
    for (std::size_t k = 0; k < down.size(); ++k) out.program.ops.push_back(move_parent());
    out.ledger.moves += 2 * down.size();
  }
  return out;
}

ServingProgram strategy_program(Strategy strategy, const Tree& initial,
                                std::span<const Key> queries) {
  if (strategy == Strategy::StaticOptimal) {
    const FrequencyTable f = FrequencyTable::from_queries(
        std::vector<Key>(initial.keys().begin(), initial.keys().end()), queries);
    return static_walk_program(static_optimal(f), queries);
  }
  const OracleResult r = opt_cost(initial, queries);
  ServingProgram out;
  out.initial = r.initial;
  out.queries = r.queries;
  out.program = r.witness;
  out.ledger.moves = r.witness.move_count();
  out.ledger.rotations = r.witness.rotation_count();
  return out;
}

}  // namespace splaylab
