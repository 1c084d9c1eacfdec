#include "splaylab/lab.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "splaylab/restricted.hpp"
#include "splaylab/sequences.hpp"

namespace splaylab {

namespace {

constexpr std::uint64_t kSearchTag = 0xc0417;

BigInt node_sum(const Tree& t, const std::vector<BigInt>& weights,
                const std::vector<BigInt>& sums, Slot s) {
  BigInt v = weights[static_cast<std::size_t>(s)];
  if (const Slot l = t.left_slot(s); l != kNoSlot) v += sums[static_cast<std::size_t>(l)];
  if (const Slot r = t.right_slot(s); r != kNoSlot) v += sums[static_cast<std::size_t>(r)];
  return v;
}

}  // namespace

std::string_view event_name(EventKind k) noexcept {
  switch (k) {
    case EventKind::QuerySplay: return "query-splay";
    case EventKind::OrganizingSplay: return "organizing-splay";
    case EventKind::TMove: return "t-move";
    case EventKind::TRotation: return "t-rotation";
  }
  return "query-splay";
}

AccessBoundReport check_access_bound(const SplayEvent& event) {
  AccessBoundReport r;
  r.amortized = event.amortized();
  r.bound = 1.0 + 3.0 * (event.rank_root_before - event.rank_key_before);
  r.steps = event.steps.size();
  for (const StepAccount& s : event.steps) {
    if (!s.ok) ++r.step_violations;
  }
  r.passed = r.amortized <= r.bound + kRankSlack && r.step_violations == 0;
  return r;
}

AmortizedDepthReport check_amortized_depth(const SplayEvent& event) {
  AmortizedDepthReport r;
  r.amortized = event.amortized();
  r.depth_T = event.depth_T;
  r.bound = 4.0 + 6.0 * event.depth_T;
  r.passed = r.amortized <= r.bound + kRankSlack;
  return r;
}

OrganizingPlan plan_organizing_splays(const Tree& S, const Tree& T, Key rotated) {
  require_same_keys(S, T);
  const std::uint32_t d = T.depth(rotated);
  if (d == 0) throw std::invalid_argument("cannot rotate the root of T");
  if (d > 2) throw std::invalid_argument("rotation at depth " + std::to_string(d) + " (limit 2)");
  OrganizingPlan plan;
  plan.rotated = rotated;
  const Key y = *T.parent(rotated);
  plan.splay_keys = {rotated, y};
  plan.depths_T = {d, d - 1};
  if (d == 2) {
    plan.splay_keys.push_back(T.root());
    plan.depths_T.push_back(0);
  }
  return plan;
}

InterleavedRun::InterleavedRun(Tree S, Tree T, bool keep_snapshots)
    : S_(std::move(S)), T_(std::move(T)), keep_snapshots_(keep_snapshots) {
  require_same_keys(S_, T_);
  if (S_.empty()) throw std::invalid_argument("interleaved run needs nonempty trees");
  S_.set_cursor_slot(S_.root_slot());
  reweigh();
  phi0_ = phi();
  if (keep_snapshots_) snapshots_.push_back(snapshot());
}

void InterleavedRun::reweigh() {
  wa_ = assign_weights(T_);
  P_T_ = potential_of(T_, wa_);
  sums_S_ = subtree_sums(S_, wa_);
  P_S_ = potential_from_sums(sums_S_, wa_.scale_exponent);
}

void InterleavedRun::record(const EventRecord& e) {
  sum_real_ += static_cast<double>(e.cost);
  sum_amortized_ += e.amortized();
  events_.push_back(e);
  if (keep_snapshots_ && e.kind != EventKind::TMove) snapshots_.push_back(snapshot());
}

SplayEvent InterleavedRun::splay_S(Key v, EventKind kind) {
  if (kind != EventKind::QuerySplay && kind != EventKind::OrganizingSplay) {
    throw std::invalid_argument("splay events are query or organizing splays");
  }
  const Slot x = S_.slot_of(v);
  const std::uint32_t D = wa_.scale_exponent;
  auto rank = [&](Slot s) { return log2_scaled(sums_S_[static_cast<std::size_t>(s)], D); };

  SplayEvent ev;
  ev.kind = kind;
  ev.key = v;
  ev.depth_S = S_.depth_slot(x);
  ev.depth_T = T_.depth(v);
  ev.phi_before = phi();
  ev.rank_root_before = rank(S_.root_slot());
  ev.rank_key_before = rank(x);

  while (S_.parent_slot(x) != kNoSlot) {
    const Slot p = S_.parent_slot(x);
    const Slot g = S_.parent_slot(p);
    std::array<Slot, 3> touched{x, p, g};
    const std::size_t count = g == kNoSlot ? 2 : 3;
    std::array<double, 3> before{};
    for (std::size_t i = 0; i < count; ++i) before[i] = rank(touched[i]);

    StepAccount acc;
    acc.step = splay_step(S_, v);
    // Refresh bottom-up in the new arrangement; x is always on top.
    std::array<Slot, 3> order{};
    std::size_t k = 0;
    if (acc.step.kind == SplayCase::ZigZig) {
      order = {g, p, x};
      k = 3;
    } else if (acc.step.kind == SplayCase::ZigZag) {
      order = {p, g, x};
      k = 3;
    } else {
      order = {p, x, kNoSlot};
      k = 2;
    }
    for (std::size_t i = 0; i < k; ++i) {
      sums_S_[static_cast<std::size_t>(order[i])] = node_sum(S_, wa_.weights, sums_S_, order[i]);
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < count; ++i) delta += rank(touched[i]) - before[i];
    const double cost = acc.step.kind == SplayCase::Zig ? 1.0 : 2.0;
    acc.amortized = cost + delta;
    acc.rank_gain = rank(x) - before[0];
    acc.bound = (acc.step.kind == SplayCase::Zig ? 1.0 : 0.0) + 3.0 * acc.rank_gain;
    acc.ok = acc.amortized <= acc.bound + kRankSlack;
    ev.step_delta_sum += delta;
    ev.steps.push_back(acc);
  }
  S_.set_cursor_slot(S_.root_slot());

  std::vector<BigInt> full = subtree_sums(S_, wa_);
  ev.local_sums_exact = full == sums_S_;
  sums_S_ = std::move(full);
  P_S_ = potential_from_sums(sums_S_, D);
  ev.phi_after = phi();

  splay_cost_ += ev.depth_S;
  if (kind == EventKind::OrganizingSplay) ++organizing_;
  record({kind, v, ev.depth_S, ev.phi_before, ev.phi_after});
  return ev;
}

void InterleavedRun::move_T(const MachineOp& op) {
  if (!is_move(op.kind)) throw std::invalid_argument("move_T takes a move");
  apply_op(T_, T_ledger_, op);
  const double p = phi();
  record({EventKind::TMove, T_.cursor(), 0, p, p});
}

RotationEvent InterleavedRun::rotate_T(Key rotated, bool with_contributions) {
  RotationEvent ev;
  ev.plan = plan_organizing_splays(S_, T_, rotated);
  ev.depth_T = ev.plan.depths_T.front();
  ev.phi_before_splays = phi();
  for (const Key k : ev.plan.splay_keys) ev.splays.push_back(splay_S(k, EventKind::OrganizingSplay));
  ev.phi_before_rotation = phi();

  PotentialSnapshot before;
  const std::uint32_t D = T_.height() + 1;
  if (with_contributions) before = splaylab::phi(S_, T_, D);

  T_.set_cursor(rotated);
  apply_op(T_, T_ledger_, rotate());
  reweigh();
  ev.phi_after = phi();

  if (with_contributions) {
    const PotentialSnapshot after = splaylab::phi(S_, T_, D);
    ev.contributions.reserve(before.keys.size());
    for (std::size_t i = 0; i < before.keys.size(); ++i) {
      NodeContribution c;
      c.key = before.keys[i];
      c.value = (log2_scaled(after.sums_S[i], D) - log2_scaled(before.sums_S[i], D)) -
                (log2_scaled(after.sums_T[i], D) - log2_scaled(before.sums_T[i], D));
      c.exact_zero = after.sums_S[i] * before.sums_T[i] == before.sums_S[i] * after.sums_T[i];
      ev.contributions.push_back(c);
    }
  }
  record({EventKind::TRotation, rotated, 0, ev.phi_before_rotation, ev.phi_after});
  return ev;
}

RotationEvent apply_T_rotation(InterleavedRun& run, Key rotated, bool with_contributions) {
  return run.rotate_T(rotated, with_contributions);
}

TrialResult regular_access_trial(const Tree& S0, std::span<const Key> base,
                                 std::span<const ExtraSplay> extras) {
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!S0.contains(base[i])) {
      throw KeyError("query " + std::to_string(i) + ": unknown key " + std::to_string(base[i]));
    }
  }
  for (std::size_t i = 0; i < extras.size(); ++i) {
    if (extras[i].position > base.size()) {
      throw std::invalid_argument("extra splay " + std::to_string(i) + ": position out of range");
    }
    if (!S0.contains(extras[i].key)) {
      throw KeyError("extra splay " + std::to_string(i) + ": unknown key " +
                     std::to_string(extras[i].key));
    }
  }
  std::vector<std::size_t> order(extras.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return extras[a].position < extras[b].position;
  });

  TrialResult r;
  Tree plain = S0;
  plain.set_cursor_slot(plain.root_slot());
  r.base_cost = splay_cost(plain, base);

  Tree aug = S0;
  aug.set_cursor_slot(aug.root_slot());
  std::size_t next = 0;
  for (std::size_t i = 0; i <= base.size(); ++i) {
    while (next < order.size() && extras[order[next]].position == i) {
      r.augmented_cost += splay(aug, extras[order[next]].key).move_cost;
      ++next;
    }
    if (i < base.size()) r.augmented_cost += splay(aug, base[i]).move_cost;
  }
  r.ratio = r.augmented_cost == 0 ? (r.base_cost == 0 ? 1.0 : 0.0)
                                  : static_cast<double>(r.base_cost) /
                                        static_cast<double>(r.augmented_cost);
  if (r.augmented_cost == 0 && r.base_cost != 0) {
    throw std::logic_error("augmented run cannot be free when the base run is not");
  }
  return r;
}

namespace {

struct ChainOutcome {
  double best_ratio = 0.0;
  std::uint64_t best_cost = 0;
  std::vector<ExtraSplay> best;
  std::size_t trials = 0;
};

ChainOutcome run_chain(const Tree& S0, std::span<const Key> base, const SearchConfig& cfg,
                       std::size_t chain, std::size_t budget) {
  ChainOutcome out;
  if (budget == 0) return out;
  Rng rng = substream(cfg.seed, chain, kSearchTag);
  const std::size_t m = base.size();
  const std::size_t n = S0.size();
  auto random_key = [&] { return S0.keys()[uniform_below(rng, n)]; };

  std::vector<ExtraSplay> current(cfg.extras);
  for (ExtraSplay& e : current) {
    e.position = uniform_below(rng, m + 1);
    e.key = random_key();
  }
  TrialResult cur = regular_access_trial(S0, base, current);
  out.trials = 1;
  out.best_ratio = cur.ratio;
  out.best_cost = cur.augmented_cost;
  out.best = current;

  while (out.trials < budget && !current.empty()) {
    std::vector<ExtraSplay> cand = current;
    ExtraSplay& e = cand[uniform_below(rng, cand.size())];
    switch (uniform_below(rng, 4)) {
      case 0: e.position = uniform_below(rng, m + 1); break;
      case 1: e.key = random_key(); break;
      case 2:  // pre-splay an upcoming query
        if (e.position < m) e.key = base[e.position];
        break;
      default:  // shift by one
        if (uniform_below(rng, 2) == 0) {
          if (e.position > 0) --e.position;
        } else if (e.position < m) {
          ++e.position;
        }
        break;
    }
    const TrialResult t = regular_access_trial(S0, base, cand);
    ++out.trials;
    if (t.ratio >= cur.ratio) {
      current = std::move(cand);
      cur = t;
      if (t.ratio > out.best_ratio) {
        out.best_ratio = t.ratio;
        out.best_cost = t.augmented_cost;
        out.best = current;
      }
    }
  }
  return out;
}

}  // namespace

SearchResult search_regular_access(const Tree& S0, std::span<const Key> base,
                                   const SearchConfig& config) {
  if (config.chains == 0) throw std::invalid_argument("search needs at least one chain");
  SearchResult result;
  {
    Tree plain = S0;
    plain.set_cursor_slot(plain.root_slot());
    result.base_cost = splay_cost(plain, base);
    result.best_augmented_cost = result.base_cost;
  }
  const std::size_t chains = config.chains;
  std::vector<ChainOutcome> outcomes(chains);
  std::vector<std::size_t> budgets(chains, config.trials / chains);
  for (std::size_t c = 0; c < config.trials % chains; ++c) ++budgets[c];

  unsigned threads = config.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                         : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chains));
  auto worker = [&](unsigned w) {
    for (std::size_t c = w; c < chains; c += threads) {
      outcomes[c] = run_chain(S0, base, config, c, budgets[c]);
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
  }

  bool first = true;
  for (const ChainOutcome& o : outcomes) {
    result.chain_max.push_back(o.best_ratio);
    result.trials += o.trials;
    if (o.trials == 0) continue;
    if (first || o.best_ratio > result.max_ratio) {
      result.max_ratio = o.best_ratio;
      result.best_augmented_cost = o.best_cost;
      result.best_extras = o.best;
      first = false;
    }
  }
  return result;
}

bool AccountingReport::passed() const noexcept {
  return access_violations == 0 && step_violations == 0 && depth_violations == 0 &&
         rotation_violations == 0 && local_sum_mismatches == 0 && restricted && phi_floor_ok &&
         std::abs(telescoping_residual) <= kRankSlack && phi_initial == 0.0 && e <= 3 * R_prime;
}

AccountingReport accounting_run(const ServingProgram& serving, const AccountingOptions& options) {
  const ServiceCheck service = check_service(serving.initial, serving.program, serving.queries);
  if (!service.served) throw std::invalid_argument("offline program does not serve the queries");

  const SimulationResult sim = simulate_program(serving.initial, serving.program);
  InterleavedRun run(sim.initial_prime, sim.initial_prime);

  AccountingReport rep;
  rep.n = serving.initial.size();
  rep.m = serving.queries.size();
  rep.M = sim.source.moves;
  rep.R = sim.source.rotations;
  rep.M_prime = sim.ledger.moves;
  rep.R_prime = sim.ledger.rotations;
  rep.restricted = sim.program.restricted;
  rep.phi_initial = run.phi_initial();

  auto fail = [&](const std::string& what) {
    if (options.abort_on_violation) throw BoundViolation(what, run.snapshot());
  };
  auto account_splay = [&](const SplayEvent& ev) {
    const AccessBoundReport access = check_access_bound(ev);
    const AmortizedDepthReport depth = check_amortized_depth(ev);
    rep.step_violations += access.step_violations;
    if (!ev.local_sums_exact) {
      ++rep.local_sum_mismatches;
      fail("local subtree sums drifted while splaying " + std::to_string(ev.key));
    }
    if (!access.passed) {
      ++rep.access_violations;
      fail("access bound violated splaying " + std::to_string(ev.key));
    }
    if (!depth.passed) {
      ++rep.depth_violations;
      fail("depth bound violated splaying " + std::to_string(ev.key));
    }
  };

  auto replay_ops = [&](std::size_t from, std::size_t to) {
    for (std::size_t j = sim.block_starts[from]; j < sim.block_starts[to]; ++j) {
      const MachineOp& op = sim.program.ops[j];
      if (is_move(op.kind)) {
        run.move_T(op);
      } else if (op.kind == OpKind::Rotate) {
        const RotationEvent rot = run.rotate_T(run.T().cursor());
        for (const SplayEvent& s : rot.splays) account_splay(s);
        rep.max_delta_phi_rotation = std::max(rep.max_delta_phi_rotation, rot.delta_phi_rotation());
        if (!rot.within_bound()) {
          ++rep.rotation_violations;
          fail("rotation bound violated at key " + std::to_string(rot.plan.rotated));
        }
      }
    }
  };

  const std::size_t source_ops = serving.program.size();
  if (serving.queries.empty()) {
    replay_ops(0, source_ops);
  } else {
    for (std::size_t i = 0; i < serving.queries.size(); ++i) {
      account_splay(run.splay_S(serving.queries[i], EventKind::QuerySplay));
      const std::size_t from = service.segment_starts[i];
      const std::size_t to =
          i + 1 < service.segment_starts.size() ? service.segment_starts[i + 1] : source_ops;
      replay_ops(from, to);
    }
  }

  rep.e = run.organizing_splays();
  rep.augmented_S_cost = run.splay_cost();
  rep.sum_amortized = run.sum_amortized();
  rep.phi_final = run.phi();
  rep.telescoping_residual =
      (run.sum_amortized() - run.sum_real()) - (rep.phi_final - rep.phi_initial);
  rep.phi_recompute_residual = run.snapshot().phi - rep.phi_final;
  rep.phi_floor_ok = -static_cast<double>(rep.n + 2) < rep.phi_final + kRankSlack;

  Tree plain = sim.initial_prime;
  plain.set_cursor_slot(plain.root_slot());
  rep.total_S_cost = splay_cost(plain, serving.queries);
  rep.empirical_ratio = rep.augmented_S_cost == 0
                            ? 1.0
                            : static_cast<double>(rep.total_S_cost) /
                                  static_cast<double>(rep.augmented_S_cost);
  rep.cost_per_offline_op = static_cast<double>(rep.total_S_cost) /
                            static_cast<double>(rep.n + rep.M_prime + rep.R_prime);

  BoundTerms& b = rep.bounds;
  b.rotation_term = kRotationBound * static_cast<double>(rep.R_prime);
  b.splay_term = 4.0 * (4.0 + 6.0 * static_cast<double>(rep.M_prime));
  b.ell_multiplier = rep.m + 3 * rep.R_prime;
  b.final_ell_multiplier = rep.m + 6 * rep.M + 3 * rep.R;
  b.final_ell_free = b.final_constant + b.final_M_coefficient * static_cast<double>(rep.M) +
                     b.final_R_coefficient * static_cast<double>(rep.R);

  if (!rep.phi_floor_ok) fail("potential fell to the floor");
  if (std::abs(rep.telescoping_residual) > kRankSlack) fail("telescoping identity broken");
  if (rep.e > 3 * rep.R_prime) fail("too many organizing splays");
  return rep;
}

AccountingReport accounting_run(Strategy strategy, const Tree& initial, std::span<const Key> queries,
                                const AccountingOptions& options) {
  return accounting_run(strategy_program(strategy, initial, queries), options);
}

}  // namespace splaylab
