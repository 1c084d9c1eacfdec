#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "splaylab/harness.hpp"
#include "splaylab/json_io.hpp"
#include "splaylab/oracle.hpp"
#include "splaylab/restricted.hpp"

namespace {

using namespace splaylab;
using harness::ExperimentConfig;

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return Json::parse(f);
}

void emit(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << '\n';
}

std::vector<Key> parse_key_list(const std::string& text) {
  std::vector<Key> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad key '" + item + "'");
    out.push_back(static_cast<Key>(v));
  }
  return out;
}

// Flags shared by the experiment subcommands. Values land in `raw` and are
// folded into the config after an optional --config file.
struct RawFlags {
  std::uint64_t seed = 0;
  std::size_t n = 0, m = 0, trials = 0;
  unsigned threads = 0;
  std::string generator, strategy, out, csv, config;
};

void add_experiment_flags(CLI::App* app, RawFlags& raw) {
  app->add_option("--seed", raw.seed, "root seed");
  app->add_option("--n", raw.n, "number of keys");
  app->add_option("--m", raw.m, "number of queries");
  app->add_option("--generator", raw.generator,
                  "uniform | sequential | zipf(s) | working-set(w) | repeated-extremes");
  app->add_option("--strategy", raw.strategy, "static-optimal | oracle-witness");
  app->add_option("--trials", raw.trials, "trial count");
  app->add_option("--threads", raw.threads, "worker threads (0: all cores)");
  app->add_option("--out", raw.out, "report path (stdout when omitted)");
  app->add_option("--csv", raw.csv, "CSV file to append rows to");
  app->add_option("--config", raw.config, "JSON file with any of the above keys");
}

ExperimentConfig fold(const CLI::App* app, const RawFlags& raw) {
  ExperimentConfig c;
  if (!raw.config.empty()) c = harness::config_from_json(read_json_file(raw.config));
  auto given = [app](const char* flag) { return app->count(flag) > 0; };
  if (given("--seed")) c.seed = raw.seed;
  if (given("--n")) c.n = raw.n;
  if (given("--m")) c.m = raw.m;
  if (given("--generator")) c.generator = parse_generator(raw.generator);
  if (given("--strategy")) c.strategy = harness::parse_strategy(raw.strategy);
  if (given("--trials")) c.trials = raw.trials;
  if (given("--threads")) c.threads = raw.threads;
  if (given("--out")) c.output_path = raw.out;
  if (given("--csv")) c.csv_path = raw.csv;
  harness::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splaylab: splay tree potential and simulation laboratory"};
  app.require_subcommand(1);

  RawFlags run_flags;
  std::string suite;
  CLI::App* run = app.add_subcommand("run", "run a checking suite");
  run->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(harness::suite_names()));
  add_experiment_flags(run, run_flags);

  RawFlags gen_flags;
  CLI::App* gen = app.add_subcommand("generate", "emit a query sequence as JSON");
  add_experiment_flags(gen, gen_flags);

  std::string shape, program_path, queries_text, sim_out;
  CLI::App* sim = app.add_subcommand("simulate", "translate a program on T into one on T'");
  sim->add_option("--shape", shape, "shape of T over keys 0..n-1")->required();
  sim->add_option("--program", program_path, "JSON list of {\"op\": L|R|U|ROT}")->required();
  sim->add_option("--out", sim_out, "output path");

  std::string oracle_shape, oracle_queries, oracle_out;
  CLI::App* orc = app.add_subcommand("oracle", "exact offline optimum for a tiny instance");
  orc->add_option("--shape", oracle_shape, "initial shape over keys 0..n-1")->required();
  orc->add_option("--queries", oracle_queries, "comma-separated keys")->required();
  orc->add_option("--out", oracle_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentConfig config = fold(run, run_flags);
      const harness::SuiteOutcome outcome = harness::run_suite(suite, config);
      if (config.output_path.empty()) std::cout << outcome.report.dump(2) << '\n';
      harness::write_outputs(outcome, config);
      std::cerr << suite << ": " << (outcome.exit_code == 0 ? "ok" : "FAILED") << " ("
                << outcome.violations << " violations)\n";
      return outcome.exit_code;
    }
    if (gen->parsed()) {
      const ExperimentConfig config = fold(gen, gen_flags);
      const std::vector<Key> keys = harness::generate_sequence(config);
      emit(Json(keys), config.output_path);
      return 0;
    }
    if (sim->parsed()) {
      const std::size_t slots = static_cast<std::size_t>(std::count(shape.begin(), shape.end(), '.'));
      const Tree T = Tree::from_shape(Tree::iota_keys(slots), shape);
      const MachineProgram p = t_program_from_json(read_json_file(program_path));
      const SimulationResult r = simulate_program(T, p);
      Tree replay_from = r.initial_prime;
      const Trace trace = run_program(replay_from, r.program);
      Json j = {{"schema_version", kSchemaVersion},
                {"M", r.source.moves},
                {"R", r.source.rotations},
                {"M_prime", r.ledger.moves},
                {"R_prime", r.ledger.rotations},
                {"restricted", r.program.restricted},
                {"final_shape", r.final_simulated.shape()},
                {"trace", trace_to_json(trace)}};
      emit(j, sim_out);
      return 0;
    }
    if (orc->parsed()) {
      const std::size_t slots =
          static_cast<std::size_t>(std::count(oracle_shape.begin(), oracle_shape.end(), '.'));
      const Tree T = Tree::from_shape(Tree::iota_keys(slots), oracle_shape);
      const std::vector<Key> queries = parse_key_list(oracle_queries);
      Json j = oracle_to_json(opt_cost(T, queries));
      j["schema_version"] = kSchemaVersion;
      emit(j, oracle_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
