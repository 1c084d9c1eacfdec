#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "splaylab/json_io.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/sequences.hpp"

namespace splaylab::harness {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::optional<std::size_t> n;  // per-suite default when absent
  std::optional<std::size_t> m;
  GeneratorSpec generator{};
  Strategy strategy = Strategy::StaticOptimal;
  std::optional<std::size_t> trials;
  std::string output_path;
  std::string csv_path;
  unsigned threads = 0;
};

/// Throws std::invalid_argument on n == 0, n too large, or an oracle strategy
/// on an instance the oracle cannot handle.
void validate(const ExperimentConfig& config);

Strategy parse_strategy(std::string_view text);
std::string_view strategy_name(Strategy s) noexcept;

std::size_t resolved_n(const ExperimentConfig& config, std::size_t fallback);
/// Explicit m, else n for the sequential generator, else `fallback`.
std::size_t resolved_m(const ExperimentConfig& config, std::size_t n, std::size_t fallback);

/// Queries for `config` over keys 0..n-1, using `n_fallback` and `m_fallback`
/// when the config leaves them open.
std::vector<Key> generate_sequence(const ExperimentConfig& config, std::size_t n_fallback = 16,
                                   std::size_t m_fallback = 16);

/// A legal random program on `tree` with at most `max_moves` moves and
/// `max_rotations` rotations; budgets are drawn uniformly up to the limits.
MachineProgram random_program(Rng& rng, const Tree& tree, std::size_t max_moves,
                              std::size_t max_rotations);

/// Random BST over 0..n-1 with n drawn uniformly from [lo, hi].
Tree random_instance(Rng& rng, std::size_t lo, std::size_t hi);

/// Reads the keys of `config` from a JSON object; unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});
Json config_to_json(const ExperimentConfig& config);

struct CsvRow {
  std::uint64_t seed = 0;
  std::size_t n = 0, m = 0;
  std::uint64_t M = 0, R = 0, M_prime = 0, R_prime = 0;
  std::size_t e = 0;
  std::uint64_t total_S_cost = 0;
  double phi_final = 0.0;
  double max_ratio = 0.0;
};

inline constexpr const char* kCsvHeader =
    "seed,n,m,M,R,M_prime,R_prime,e,total_S_cost,phi_final,max_ratio";
std::string csv_line(const CsvRow& row);

struct SuiteOutcome {
  int exit_code = 0;
  std::size_t violations = 0;
  Json report;
  std::vector<CsvRow> rows;
};

const std::vector<std::string>& suite_names();

/// Runs a named suite. Throws std::invalid_argument for an unknown name.
SuiteOutcome run_suite(const std::string& name, const ExperimentConfig& config);

/// Writes the report (and CSV rows when a CSV path is set). Throws
/// std::runtime_error on I/O failure.
void write_outputs(const SuiteOutcome& outcome, const ExperimentConfig& config);

/// Runs `count` independent tasks on up to `threads` workers. Each task
/// writes only its own slot, so results do not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace splaylab::harness
