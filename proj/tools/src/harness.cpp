#include "splaylab/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "splaylab/lab.hpp"
#include "splaylab/potential.hpp"
#include "splaylab/restricted.hpp"
#include "splaylab/splay.hpp"

namespace splaylab::harness {

namespace {

constexpr std::uint64_t kPairTag = 1;
constexpr std::uint64_t kProgramTag = 2;
constexpr std::uint64_t kInterleaveTag = 3;
constexpr std::uint64_t kRotationTag = 4;
constexpr std::uint64_t kAccessTag = 5;
constexpr std::uint64_t kInstanceTag = 6;
constexpr std::uint64_t kConjectureTag = 7;
constexpr std::size_t kMaxReportedViolations = 5;

Json header(const std::string& suite, const ExperimentConfig& config) {
  return {{"schema_version", kSchemaVersion}, {"suite", suite}, {"config", config_to_json(config)}};
}

void finish(SuiteOutcome& out, std::size_t violations) {
  out.violations = violations;
  out.report["violations"] = violations;
  out.report["passed"] = violations == 0;
  out.exit_code = violations == 0 ? 0 : 1;
}

Key random_key(Rng& rng, const Tree& t) { return t.keys()[uniform_below(rng, t.size())]; }

std::vector<Key> keys_at_depth(const Tree& t, std::uint32_t d) {
  const auto depths = t.depths();
  std::vector<Key> out;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] == d) out.push_back(t.keys()[i]);
  }
  return out;
}

// ---------------------------------------------------------------- lemma1/2

SuiteOutcome suite_lemma1(const ExperimentConfig& config) {
  const std::size_t max_n = resolved_n(config, 64);
  const std::size_t trials = config.trials.value_or(1000);
  std::vector<WeightBoundsReport> reports(trials);
  parallel_for(trials, config.threads, [&](std::size_t t) {
    Rng rng = substream(config.seed, t, kPairTag);
    const Tree T = random_instance(rng, 1, max_n);
    const Tree S = random_tree(rng, std::vector<Key>(T.keys().begin(), T.keys().end()));
    reports[t] = check_lemma1(S, T);
  });
  SuiteOutcome out;
  out.report = header("lemma1", config);
  std::array<std::size_t, 6> checked{};
  std::array<std::size_t, 6> failed{};
  std::size_t violations = 0;
  Json examples = Json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    for (int eq = 1; eq <= 6; ++eq) {
      checked[static_cast<std::size_t>(eq - 1)] += reports[t].checked[static_cast<std::size_t>(eq - 1)];
      failed[static_cast<std::size_t>(eq - 1)] += reports[t].failures(eq);
    }
    for (const WeightBoundViolation& v : reports[t].violations) {
      ++violations;
      if (examples.size() < kMaxReportedViolations) {
        examples.push_back({{"trial", t}, {"bound", v.bound}, {"key", v.key},
                            {"tree", v.tree == TreeRole::S ? "S" : "T"}});
      }
    }
  }
  out.report["trials"] = trials;
  out.report["checked"] = checked;
  out.report["failed"] = failed;
  out.report["examples"] = std::move(examples);
  finish(out, violations);
  return out;
}

SuiteOutcome suite_lemma2(const ExperimentConfig& config) {
  const std::size_t max_n = resolved_n(config, 64);
  const std::size_t trials = config.trials.value_or(1000);
  std::vector<PhiFloorReport> reports(trials);
  parallel_for(trials, config.threads, [&](std::size_t t) {
    Rng rng = substream(config.seed, t, kPairTag);
    const Tree T = random_instance(rng, 1, max_n);
    const Tree S = random_tree(rng, std::vector<Key>(T.keys().begin(), T.keys().end()));
    reports[t] = check_phi_floor(S, T);
  });
  SuiteOutcome out;
  out.report = header("lemma2", config);
  std::size_t violations = 0;
  double min_margin = 0.0;
  bool first = true;
  for (const PhiFloorReport& r : reports) {
    if (!r.passed) ++violations;
    const double margin = r.phi + static_cast<double>(r.n);
    if (first || margin < min_margin) min_margin = margin;
    first = false;
  }
  out.report["trials"] = trials;
  out.report["min_margin"] = min_margin;
  finish(out, violations);
  return out;
}

// ---------------------------------------------------------------- lemma3

struct SimulationOutcome {
  bool counts_ok = false;
  bool restricted = false;
  bool subsequence = false;
  bool consistent = false;
  std::uint64_t M = 0, R = 0;
};

SuiteOutcome suite_lemma3(const ExperimentConfig& config) {
  const std::size_t max_n = resolved_n(config, 16);
  const std::size_t trials = config.trials.value_or(10000);
  std::vector<SimulationOutcome> res(trials);
  parallel_for(trials, config.threads, [&](std::size_t t) {
    Rng rng = substream(config.seed, t, kProgramTag);
    const Tree T = random_instance(rng, 1, max_n);
    const MachineProgram p = random_program(rng, T, 100, 50);
    const SimulationResult sim = simulate_program(T, p);
    SimulationOutcome& o = res[t];
    o.M = sim.source.moves;
    o.R = sim.source.rotations;
    o.counts_ok = sim.ledger.moves == 4 * o.M + 3 * o.R && sim.ledger.rotations == 2 * o.M + o.R &&
                  sim.program.move_count() == sim.ledger.moves &&
                  sim.program.rotation_count() == sim.ledger.rotations;
    o.restricted = check_restricted(sim.initial_prime, sim.program).restricted();
    o.subsequence = is_subsequence(sim.source_cursor_keys, sim.prime_cursor_keys);
    o.consistent = expected_prime(sim.final_simulated).same_shape(sim.final_prime);
  });
  SuiteOutcome out;
  out.report = header("lemma3", config);
  std::size_t bad_counts = 0, bad_restricted = 0, bad_subsequence = 0, bad_layout = 0;
  std::uint64_t max_M = 0, max_R = 0;
  for (const SimulationOutcome& o : res) {
    bad_counts += o.counts_ok ? 0 : 1;
    bad_restricted += o.restricted ? 0 : 1;
    bad_subsequence += o.subsequence ? 0 : 1;
    bad_layout += o.consistent ? 0 : 1;
    max_M = std::max(max_M, o.M);
    max_R = std::max(max_R, o.R);
  }
  out.report["trials"] = trials;
  out.report["max_M"] = max_M;
  out.report["max_R"] = max_R;
  out.report["count_mismatches"] = bad_counts;
  out.report["restriction_failures"] = bad_restricted;
  out.report["subsequence_failures"] = bad_subsequence;
  out.report["layout_failures"] = bad_layout;
  finish(out, bad_counts + bad_restricted + bad_subsequence + bad_layout);
  return out;
}

// ---------------------------------------------------------------- lemma4/6

struct SplayTally {
  std::size_t splays = 0;
  std::size_t depth_violations = 0;
  std::size_t access_violations = 0;
  std::size_t step_violations = 0;
  std::size_t local_mismatches = 0;
  double worst_depth_slack = 0.0;   // max of amortized - bound
  double worst_access_slack = 0.0;
  bool seen = false;

  void add(const SplayEvent& ev) {
    const AmortizedDepthReport d = check_amortized_depth(ev);
    const AccessBoundReport a = check_access_bound(ev);
    ++splays;
    depth_violations += d.passed ? 0 : 1;
    access_violations += a.amortized <= a.bound + kRankSlack ? 0 : 1;
    step_violations += a.step_violations;
    local_mismatches += ev.local_sums_exact ? 0 : 1;
    if (!seen || d.amortized - d.bound > worst_depth_slack) worst_depth_slack = d.amortized - d.bound;
    if (!seen || a.amortized - a.bound > worst_access_slack) worst_access_slack = a.amortized - a.bound;
    seen = true;
  }
  void merge(const SplayTally& o) {
    if (!o.seen) return;
    splays += o.splays;
    depth_violations += o.depth_violations;
    access_violations += o.access_violations;
    step_violations += o.step_violations;
    local_mismatches += o.local_mismatches;
    worst_depth_slack = seen ? std::max(worst_depth_slack, o.worst_depth_slack) : o.worst_depth_slack;
    worst_access_slack =
        seen ? std::max(worst_access_slack, o.worst_access_slack) : o.worst_access_slack;
    seen = true;
  }
};

constexpr std::size_t kSplaysPerBatch = 100;

std::vector<std::size_t> batch_sizes(std::size_t total) {
  std::vector<std::size_t> out(total / kSplaysPerBatch, kSplaysPerBatch);
  if (total % kSplaysPerBatch != 0) out.push_back(total % kSplaysPerBatch);
  return out;
}

SuiteOutcome suite_lemma4(const ExperimentConfig& config) {
  const std::size_t max_n = resolved_n(config, 64);
  const std::size_t total = config.trials.value_or(10000);
  const auto batches = batch_sizes(total);
  std::vector<SplayTally> tallies(batches.size());
  parallel_for(batches.size(), config.threads, [&](std::size_t b) {
    Rng rng = substream(config.seed, b, kInterleaveTag);
    const Tree T = random_instance(rng, 1, max_n);
    InterleavedRun run(random_tree(rng, std::vector<Key>(T.keys().begin(), T.keys().end())), T);
    SplayTally& tally = tallies[b];
    while (tally.splays < batches[b]) {
      if (run.T().size() > 1 && uniform_below(rng, 4) == 0) {
        auto cand = keys_at_depth(run.T(), 1);
        const auto deeper = keys_at_depth(run.T(), 2);
        cand.insert(cand.end(), deeper.begin(), deeper.end());
        const Key k = cand[uniform_below(rng, cand.size())];
        const RotationEvent rot = run.rotate_T(k);
        for (const SplayEvent& s : rot.splays) {
          if (tally.splays < batches[b]) tally.add(s);
        }
        continue;
      }
      tally.add(run.splay_S(random_key(rng, run.S()), EventKind::QuerySplay));
    }
  });
  SplayTally sum;
  for (const SplayTally& t : tallies) sum.merge(t);
  SuiteOutcome out;
  out.report = header("lemma4", config);
  out.report["splays"] = sum.splays;
  out.report["worst_slack"] = sum.worst_depth_slack;
  out.report["local_sum_mismatches"] = sum.local_mismatches;
  finish(out, sum.depth_violations + sum.local_mismatches);
  return out;
}

SuiteOutcome suite_lemma6(const ExperimentConfig& config) {
  const std::size_t max_n = resolved_n(config, 256);
  const std::size_t total = config.trials.value_or(10000);
  const auto batches = batch_sizes(total);
  std::vector<SplayTally> tallies(batches.size());
  parallel_for(batches.size(), config.threads, [&](std::size_t b) {
    Rng rng = substream(config.seed, b, kAccessTag);
    const Tree T = random_instance(rng, 1, max_n);
    InterleavedRun run(random_tree(rng, std::vector<Key>(T.keys().begin(), T.keys().end())), T);
    for (std::size_t i = 0; i < batches[b]; ++i) {
      tallies[b].add(run.splay_S(random_key(rng, run.S()), EventKind::QuerySplay));
    }
  });
  SplayTally sum;
  for (const SplayTally& t : tallies) sum.merge(t);
  SuiteOutcome out;
  out.report = header("lemma6", config);
  out.report["splays"] = sum.splays;
  out.report["worst_slack"] = sum.worst_access_slack;
  out.report["step_violations"] = sum.step_violations;
  out.report["local_sum_mismatches"] = sum.local_mismatches;
  finish(out, sum.access_violations + sum.step_violations + sum.local_mismatches);
  return out;
}

// ---------------------------------------------------------------- lemma5

struct RotationOutcome {
  std::uint32_t depth = 0;
  double delta = 0.0;
  bool within = false;
  bool within_shallow = false;
};

RotationOutcome random_rotation_event(Rng& rng, std::size_t max_n, std::uint32_t depth) {
  for (;;) {
    const Tree T = random_instance(rng, depth + 1, std::max<std::size_t>(max_n, depth + 1));
    const auto cand = keys_at_depth(T, depth);
    if (cand.empty()) continue;
    InterleavedRun run(random_tree(rng, std::vector<Key>(T.keys().begin(), T.keys().end())), T);
    const RotationEvent ev = run.rotate_T(cand[uniform_below(rng, cand.size())]);
    return {depth, ev.delta_phi_rotation(), ev.within_bound(), ev.within_shallow_bound()};
  }
}

SuiteOutcome suite_lemma5(const ExperimentConfig& config) {
  const std::size_t max_n = resolved_n(config, 64);
  const std::size_t trials = config.trials.value_or(1000);
  std::vector<RotationOutcome> res(2 * trials);
  parallel_for(2 * trials, config.threads, [&](std::size_t t) {
    Rng rng = substream(config.seed, t, kRotationTag);
    res[t] = random_rotation_event(rng, max_n, t < trials ? 1 : 2);
  });
  std::size_t violations = 0, shallow_violations = 0;
  double max1 = 0.0, max2 = 0.0;
  for (const RotationOutcome& r : res) {
    violations += r.within ? 0 : 1;
    if (r.depth == 1) {
      shallow_violations += r.within_shallow ? 0 : 1;
      max1 = std::max(max1, r.delta);
    } else {
      max2 = std::max(max2, r.delta);
    }
  }
  SuiteOutcome out;
  out.report = header("lemma5", config);
  out.report["events_per_depth"] = trials;
  out.report["bound"] = kRotationBound;
  out.report["shallow_bound"] = kShallowRotationBound;
  out.report["max_delta_depth1"] = max1;
  out.report["max_delta_depth2"] = max2;
  out.report["shallow_violations"] = shallow_violations;
  finish(out, violations + shallow_violations);
  return out;
}

// ---------------------------------------------------------------- theorem7

SuiteOutcome suite_theorem7(const ExperimentConfig& config) {
  const bool oracle = config.strategy == Strategy::OracleWitness;
  const std::size_t n = resolved_n(config, oracle ? 4 : 64);
  const std::size_t m = resolved_m(config, n, oracle ? std::min<std::size_t>(8, 2 * n) : 8 * n);
  const std::size_t trials = config.trials.value_or(oracle ? 100 : 1);
  ExperimentConfig sized = config;
  sized.n = n;
  sized.m = m;
  validate(sized);

  std::vector<AccountingReport> reports(trials);
  std::vector<std::string> errors(trials);
  parallel_for(trials, config.threads, [&](std::size_t t) {
    Rng rng = substream(config.seed, t, kInstanceTag);
    const Tree T = random_tree(rng, Tree::iota_keys(n));
    ExperimentConfig inst = sized;
    inst.seed = rng();
    const std::vector<Key> queries = generate_sequence(inst);
    try {
      reports[t] = accounting_run(config.strategy, T, queries, {.abort_on_violation = false});
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  });

  SuiteOutcome out;
  out.report = header("theorem7", config);
  std::size_t violations = 0;
  double max_residual = 0.0;
  Json instances = Json::array();
  for (std::size_t t = 0; t < trials; ++t) {
    if (!errors[t].empty()) {
      ++violations;
      instances.push_back({{"trial", t}, {"error", errors[t]}});
      continue;
    }
    const AccountingReport& r = reports[t];
    violations += r.passed() ? 0 : 1;
    max_residual = std::max(max_residual, std::abs(r.telescoping_residual));
    Json j = accounting_to_json(r);
    j["trial"] = t;
    instances.push_back(std::move(j));
    out.rows.push_back({config.seed, r.n, r.m, r.M, r.R, r.M_prime, r.R_prime, r.e, r.total_S_cost,
                        r.phi_final, r.empirical_ratio});
  }
  out.report["trials"] = trials;
  out.report["max_telescoping_residual"] = max_residual;
  out.report["instances"] = std::move(instances);
  finish(out, violations);
  return out;
}

// ---------------------------------------------------------------- conjecture

SuiteOutcome suite_conjecture(const ExperimentConfig& config) {
  const std::size_t n = resolved_n(config, 64);
  const std::size_t m = resolved_m(config, n, 512);
  ExperimentConfig sized = config;
  sized.n = n;
  sized.m = m;
  const std::vector<Key> base = generate_sequence(sized);
  Rng rng = substream(config.seed, 0, kConjectureTag);
  const Tree S0 = random_tree(rng, Tree::iota_keys(n));

  SearchConfig sc;
  sc.seed = config.seed;
  sc.trials = config.trials.value_or(10000);
  sc.extras = std::max<std::size_t>(1, m / 8);
  sc.threads = config.threads;
  const SearchResult r = search_regular_access(S0, base, sc);

  SuiteOutcome out;
  out.report = header("conjecture", config);
  out.report["initial_shape"] = S0.shape();
  out.report["m"] = m;
  out.report["extras"] = sc.extras;
  out.report["chains"] = sc.chains;
  out.report["search"] = search_to_json(r);
  out.rows.push_back({config.seed, n, m, 0, 0, 0, 0, sc.extras, r.base_cost, 0.0, r.max_ratio});
  finish(out, 0);
  return out;
}

// ---------------------------------------------------------------- scan9n

SuiteOutcome suite_scan9n(const ExperimentConfig& config) {
  std::vector<std::size_t> sizes = config.n ? std::vector<std::size_t>{*config.n}
                                            : std::vector<std::size_t>{128, 1024};
  SuiteOutcome out;
  out.report = header("scan9n", config);
  std::size_t violations = 0;
  Json runs = Json::array();
  for (const std::size_t n : sizes) {
    Rng rng = substream(config.seed, n, kInstanceTag);
    const std::vector<std::pair<std::string, Tree>> starts = {
        {"left-spine", Tree::left_spine(Tree::iota_keys(n))},
        {"right-spine", Tree::right_spine(Tree::iota_keys(n))},
        {"balanced", Tree::balanced(Tree::iota_keys(n))},
        {"random", random_tree(rng, Tree::iota_keys(n))}};
    const std::vector<Key> scan = Tree::iota_keys(n);
    for (const auto& [name, start] : starts) {
      Tree t = start;
      const std::uint64_t cost = splay_cost(t, scan);
      const bool ok = cost <= 9 * n;
      violations += ok ? 0 : 1;
      runs.push_back({{"n", n}, {"start", name}, {"cost", cost}, {"limit", 9 * n}, {"passed", ok}});
    }
  }
  out.report["runs"] = std::move(runs);
  finish(out, violations);
  return out;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.n && *config.n == 0) throw std::invalid_argument("n must be at least 1");
  if (config.n && *config.n > kMaxKeys) throw std::invalid_argument("n exceeds the key limit");
  if (config.strategy == Strategy::OracleWitness) {
    if (config.n && *config.n > kOracleMaxKeys) {
      throw std::invalid_argument("oracle-witness needs n <= 6");
    }
    if (config.m && *config.m > kOracleMaxQueries) {
      throw std::invalid_argument("oracle-witness needs m <= 8");
    }
  }
}

Strategy parse_strategy(std::string_view text) {
  if (text == "static-optimal" || text == "static") return Strategy::StaticOptimal;
  if (text == "oracle-witness" || text == "witness") return Strategy::OracleWitness;
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

std::string_view strategy_name(Strategy s) noexcept {
  return s == Strategy::StaticOptimal ? "static-optimal" : "oracle-witness";
}

std::size_t resolved_n(const ExperimentConfig& config, std::size_t fallback) {
  return config.n.value_or(fallback);
}

std::size_t resolved_m(const ExperimentConfig& config, std::size_t n, std::size_t fallback) {
  if (config.m) return *config.m;
  return config.generator.kind == GeneratorKind::Sequential ? n : fallback;
}

std::vector<Key> generate_sequence(const ExperimentConfig& config, std::size_t n_fallback,
                                   std::size_t m_fallback) {
  validate(config);
  const std::size_t n = resolved_n(config, n_fallback);
  return splaylab::generate_sequence(config.generator, n, resolved_m(config, n, m_fallback),
                                     config.seed);
}

MachineProgram random_program(Rng& rng, const Tree& tree, std::size_t max_moves,
                              std::size_t max_rotations) {
  MachineProgram p;
  if (tree.empty()) return p;
  std::size_t moves = uniform_below(rng, max_moves + 1);
  std::size_t rotations = uniform_below(rng, max_rotations + 1);
  Tree t = tree;
  t.set_cursor_slot(t.root_slot());
  CostLedger scratch;
  std::vector<MachineOp> legal;
  for (;;) {
    const Slot c = t.cursor_slot();
    const bool at_root = t.parent_slot(c) == kNoSlot;
    if (rotations > 0 && !at_root && (moves == 0 || uniform_below(rng, 3) == 0)) {
      p.ops.push_back(rotate());
      --rotations;
    } else if (moves > 0) {
      legal.clear();
      if (t.left_slot(c) != kNoSlot) legal.push_back(move_left());
      if (t.right_slot(c) != kNoSlot) legal.push_back(move_right());
      if (!at_root) legal.push_back(move_parent());
      if (legal.empty()) break;  // singleton
      p.ops.push_back(legal[uniform_below(rng, legal.size())]);
      --moves;
    } else {
      break;
    }
    apply_op(t, scratch, p.ops.back());
  }
  return p;
}

Tree random_instance(Rng& rng, std::size_t lo, std::size_t hi) {
  if (lo == 0 || lo > hi) throw std::invalid_argument("bad instance size range");
  const std::size_t n = lo + uniform_below(rng, hi - lo + 1);
  return random_tree(rng, Tree::iota_keys(n));
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto size_or_none = [](const Json& v) -> std::optional<std::size_t> {
    if (v.is_null()) return std::nullopt;
    return v.get<std::size_t>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "n") {
      c.n = size_or_none(value);
    } else if (key == "m") {
      c.m = size_or_none(value);
    } else if (key == "generator") {
      c.generator = parse_generator(value.get<std::string>());
    } else if (key == "strategy") {
      c.strategy = parse_strategy(value.get<std::string>());
    } else if (key == "trials") {
      c.trials = size_or_none(value);
    } else if (key == "out" || key == "output_path") {
      c.output_path = value.get<std::string>();
    } else if (key == "csv") {
      c.csv_path = value.get<std::string>();
    } else if (key == "threads") {
      c.threads = value.get<unsigned>();
    } else if (key != "suite") {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j = {{"seed", c.seed}};
  j["n"] = c.n ? Json(*c.n) : Json(nullptr);
  j["m"] = c.m ? Json(*c.m) : Json(nullptr);
  j["generator"] = generator_name(c.generator);
  j["strategy"] = std::string(strategy_name(c.strategy));
  j["trials"] = c.trials ? Json(*c.trials) : Json(nullptr);
  return j;
}

std::string csv_line(const CsvRow& r) {
  auto real = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << r.seed << ',' << r.n << ',' << r.m << ',' << r.M << ',' << r.R << ',' << r.M_prime << ','
     << r.R_prime << ',' << r.e << ',' << r.total_S_cost << ',' << real(r.phi_final) << ','
     << real(r.max_ratio);
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma1", "lemma2",   "lemma3",     "lemma4", "lemma5",
                                                 "lemma6", "theorem7", "conjecture", "scan9n"};
  return names;
}

SuiteOutcome run_suite(const std::string& name, const ExperimentConfig& config) {
  validate(config);
  if (name == "lemma1") return suite_lemma1(config);
  if (name == "lemma2") return suite_lemma2(config);
  if (name == "lemma3") return suite_lemma3(config);
  if (name == "lemma4") return suite_lemma4(config);
  if (name == "lemma5") return suite_lemma5(config);
  if (name == "lemma6") return suite_lemma6(config);
  if (name == "theorem7") return suite_theorem7(config);
  if (name == "conjecture") return suite_conjecture(config);
  if (name == "scan9n") return suite_scan9n(config);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

void write_outputs(const SuiteOutcome& outcome, const ExperimentConfig& config) {
  if (!config.output_path.empty()) {
    std::ofstream f(config.output_path);
    if (!f) throw std::runtime_error("cannot open " + config.output_path);
    f << outcome.report.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed: " + config.output_path);
  }
  if (!config.csv_path.empty()) {
    std::ifstream probe(config.csv_path);
    const bool fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    probe.close();
    std::ofstream f(config.csv_path, std::ios::app);
    if (!f) throw std::runtime_error("cannot open " + config.csv_path);
    if (fresh) f << kCsvHeader << '\n';
    for (const CsvRow& row : outcome.rows) f << csv_line(row) << '\n';
    if (!f) throw std::runtime_error("write failed: " + config.csv_path);
  }
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace splaylab::harness
