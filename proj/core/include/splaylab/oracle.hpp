#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "splaylab/machine.hpp"
#include "splaylab/tree.hpp"

namespace splaylab {

// Exact offline-optimal cost for tiny instances, by uniform-cost search over
// (shape rank, cursor, next query, awaiting return to root). A query is served
// when the cursor visits its key; the cursor must then reach the root before
// the next query can be served. Moves and rotations cost 1 each.

inline constexpr std::size_t kOracleMaxKeys = 6;
inline constexpr std::size_t kOracleMaxQueries = 8;

class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleResult {
  Tree initial;
  std::vector<Key> queries;
  std::uint64_t opt_cost = 0;
  MachineProgram witness;
  std::size_t states_settled = 0;
};

OracleResult opt_cost(const Tree& initial, std::span<const Key> queries);

struct FrequencyTable {
  std::vector<Key> keys;
  std::vector<std::uint64_t> counts;  // by position in keys
  std::uint64_t total = 0;

  static FrequencyTable from_queries(std::vector<Key> keys, std::span<const Key> queries);
};

/// Static tree minimizing sum f_i (d_i + 1), via the interval DP with Knuth's
/// root-monotonicity bound. Ties go to the smallest root key.
Tree static_optimal(const FrequencyTable& freq);

/// sum f_i (d_i + 1) of `tree` under `freq`.
std::uint64_t static_cost(const Tree& tree, const FrequencyTable& freq);

struct ServiceCheck {
  bool served = false;
  // For each query, the op index where its segment begins: 0 for the first,
  // otherwise the point at which the cursor came back to the root after the
  // previous query was served.
  std::vector<std::size_t> segment_starts;
  CostLedger ledger;
};

/// Replays `program` from `initial` and checks it serves `queries` in order,
/// returning to the root between them and at the end.
ServiceCheck check_service(const Tree& initial, const MachineProgram& program,
                           std::span<const Key> queries);

enum class Strategy : std::uint8_t { StaticOptimal, OracleWitness };

struct ServingProgram {
  Tree initial;
  std::vector<Key> queries;
  MachineProgram program;
  CostLedger ledger;
};

/// Walks down to each query and back up in a fixed tree.
ServingProgram static_walk_program(const Tree& tree, std::span<const Key> queries);

/// StaticOptimal builds the static-optimal tree over the query frequencies of
/// `keys` and walks it; OracleWitness starts from `initial` (which must then
/// be within the oracle's limits) and uses the optimal witness.
ServingProgram strategy_program(Strategy strategy, const Tree& initial,
                                std::span<const Key> queries);

}  // namespace splaylab
