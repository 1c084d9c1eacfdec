#pragma once

#include <nlohmann/json.hpp>

#include "splaylab/lab.hpp"
#include "splaylab/machine.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/potential.hpp"

namespace splaylab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json ledger_to_json(const CostLedger& ledger);

/// {"initial_shape", "keys", "initial_cursor", "steps": [{"op", "cursor"}], "ledger"}
Json trace_to_json(const Trace& trace);
Trace trace_from_json(const Json& j);

/// Offline-tree programs as a list of {"op": "L" | "R" | "U" | "ROT"}.
/// Compare has no encoding; writing one throws std::invalid_argument.
Json t_program_to_json(const MachineProgram& program);
MachineProgram t_program_from_json(const Json& j);

/// Exact sums as decimal strings of the scaled integers.
Json snapshot_to_json(const PotentialSnapshot& snap);

Json oracle_to_json(const OracleResult& result);
Json accounting_to_json(const AccountingReport& report);
Json trial_to_json(const TrialResult& trial);
Json search_to_json(const SearchResult& result);

}  // namespace splaylab
