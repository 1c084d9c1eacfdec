#include "splaylab/json_io.hpp"

#include <stdexcept>
#include <string>

namespace splaylab {

namespace {

Json sums_to_json(const std::vector<BigInt>& values) {
  Json out = Json::array();
  for (const BigInt& v : values) out.push_back(v.str());
  return out;
}

}  // namespace

Json ledger_to_json(const CostLedger& ledger) {
  return {{"moves", ledger.moves},
          {"rotations", ledger.rotations},
          {"comparisons", ledger.comparisons}};
}

Json trace_to_json(const Trace& trace) {
  Json steps = Json::array();
  for (const TraceStep& s : trace.steps) {
    steps.push_back({{"op", std::string(step_name(s.op))}, {"cursor", s.cursor}});
  }
  return {{"initial_shape", trace.initial_shape},
          {"keys", trace.keys},
          {"initial_cursor", trace.initial_cursor},
          {"steps", std::move(steps)},
          {"ledger", ledger_to_json(trace.ledger)}};
}

Trace trace_from_json(const Json& j) {
  Trace t;
  t.initial_shape = j.at("initial_shape").get<std::string>();
  t.keys = j.at("keys").get<std::vector<Key>>();
  if (j.contains("initial_cursor")) {
    t.initial_cursor = j.at("initial_cursor").get<Key>();
  } else if (!t.keys.empty()) {
    t.initial_cursor = Tree::from_shape(t.keys, t.initial_shape).root();
  }
  for (const Json& s : j.at("steps")) {
    const auto name = s.at("op").get<std::string>();
    const auto op = parse_step_name(name);
    if (!op) throw std::invalid_argument("unknown trace op '" + name + "'");
    t.steps.push_back({*op, s.at("cursor").get<Key>()});
  }
  const Json& l = j.at("ledger");
  t.ledger.moves = l.at("moves").get<std::uint64_t>();
  t.ledger.rotations = l.at("rotations").get<std::uint64_t>();
  t.ledger.comparisons = l.at("comparisons").get<std::uint64_t>();
  return t;
}

Json t_program_to_json(const MachineProgram& program) {
  Json out = Json::array();
  for (const MachineOp& op : program.ops) {
    const char* code = nullptr;
    switch (op.kind) {
      case OpKind::MoveLeft: code = "L"; break;
      case OpKind::MoveRight: code = "R"; break;
      case OpKind::MoveParent: code = "U"; break;
      case OpKind::Rotate: code = "ROT"; break;
      case OpKind::Compare: throw std::invalid_argument("compare has no program encoding");
    }
    out.push_back({{"op", code}});
  }
  return out;
}

MachineProgram t_program_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("program must be a JSON array");
  MachineProgram p;
  p.ops.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    if (!e.is_object() || !e.contains("op") || !e.at("op").is_string()) {
      throw std::invalid_argument("program entry " + std::to_string(i) + ": expected {\"op\": ...}");
    }
    const auto code = e.at("op").get<std::string>();
    if (code == "L") {
      p.ops.push_back(move_left());
    } else if (code == "R") {
      p.ops.push_back(move_right());
    } else if (code == "U") {
      p.ops.push_back(move_parent());
    } else if (code == "ROT") {
      p.ops.push_back(rotate());
    } else {
      throw std::invalid_argument("program entry " + std::to_string(i) + ": unknown op '" + code +
                                  "'");
    }
  }
  return p;
}

Json snapshot_to_json(const PotentialSnapshot& snap) {
  return {{"scale_exponent", snap.scale_exponent},
          {"keys", snap.keys},
          {"weights", sums_to_json(snap.weights)},
          {"sums_T", sums_to_json(snap.sums_T)},
          {"sums_S", sums_to_json(snap.sums_S)},
          {"P_T", snap.P_T},
          {"P_S", snap.P_S},
          {"phi", snap.phi}};
}

Json oracle_to_json(const OracleResult& result) {
  return {{"n", result.initial.size()},
          {"initial_shape", result.initial.shape()},
          {"queries", result.queries},
          {"opt_cost", result.opt_cost},
          {"witness", t_program_to_json(result.witness)}};
}

Json accounting_to_json(const AccountingReport& r) {
  const BoundTerms& b = r.bounds;
  return {{"n", r.n},
          {"m", r.m},
          {"e", r.e},
          {"M", r.M},
          {"R", r.R},
          {"M_prime", r.M_prime},
          {"R_prime", r.R_prime},
          {"total_S_cost", r.total_S_cost},
          {"augmented_S_cost", r.augmented_S_cost},
          {"sum_amortized", r.sum_amortized},
          {"phi_initial", r.phi_initial},
          {"phi_final", r.phi_final},
          {"telescoping_residual", r.telescoping_residual},
          {"phi_recompute_residual", r.phi_recompute_residual},
          {"empirical_ratio", r.empirical_ratio},
          {"cost_per_offline_op", r.cost_per_offline_op},
          {"max_delta_phi_rotation", r.max_delta_phi_rotation},
          {"violations",
           {{"access", r.access_violations},
            {"step", r.step_violations},
            {"depth", r.depth_violations},
            {"rotation", r.rotation_violations},
            {"local_sums", r.local_sum_mismatches}}},
          {"restricted", r.restricted},
          {"phi_floor_ok", r.phi_floor_ok},
          {"bound_terms",
           {{"rotation_term", b.rotation_term},
            {"splay_term", b.splay_term},
            {"ell_multiplier", b.ell_multiplier},
            {"final_constant", b.final_constant},
            {"final_M_coefficient", b.final_M_coefficient},
            {"final_R_coefficient", b.final_R_coefficient},
            {"final_ell_multiplier", b.final_ell_multiplier},
            {"final_ell_free", b.final_ell_free}}},
          {"passed", r.passed()}};
}

Json trial_to_json(const TrialResult& t) {
  return {{"base_cost", t.base_cost}, {"augmented_cost", t.augmented_cost}, {"ratio", t.ratio}};
}

Json search_to_json(const SearchResult& r) {
  Json extras = Json::array();
  for (const ExtraSplay& e : r.best_extras) extras.push_back({{"position", e.position}, {"key", e.key}});
  return {{"trials", r.trials},
          {"base_cost", r.base_cost},
          {"best_augmented_cost", r.best_augmented_cost},
          {"max_ratio", r.max_ratio},
          {"chain_max", r.chain_max},
          {"best_extras", std::move(extras)}};
}

}  // namespace splaylab
