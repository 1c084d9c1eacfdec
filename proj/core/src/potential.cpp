#include "splaylab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace splaylab {

namespace {

BigInt pow4(std::uint32_t e) {
  BigInt one = 1;
  return one << (2 * e);
}

Slot slot_in(std::span<const Key> keys, Key k) {
  const auto it = std::lower_bound(keys.begin(), keys.end(), k);
  if (it == keys.end() || *it != k) throw KeyError("unknown key " + std::to_string(k));
  return static_cast<Slot>(it - keys.begin());
}

// Post-order accumulation over slots.
std::vector<BigInt> sums_over(const Tree& tree, std::span<const BigInt> weights) {
  const std::size_t n = tree.size();
  std::vector<BigInt> sums(n);
  if (n == 0) return sums;
  std::vector<std::pair<Slot, bool>> stack{{tree.root_slot(), false}};
  while (!stack.empty()) {
    auto [s, expanded] = stack.back();
    stack.pop_back();
    if (!expanded) {
      stack.push_back({s, true});
      for (Slot c : {tree.left_slot(s), tree.right_slot(s)}) {
        if (c != kNoSlot) stack.push_back({c, false});
      }
      continue;
    }
    const auto i = static_cast<std::size_t>(s);
    sums[i] = weights[i];
    for (Slot c : {tree.left_slot(s), tree.right_slot(s)}) {
      if (c != kNoSlot) sums[i] += sums[static_cast<std::size_t>(c)];
    }
  }
  return sums;
}

}  // namespace

const BigInt& WeightAssignment::weight(Key k) const {
  return weights[static_cast<std::size_t>(slot_in(keys, k))];
}

double WeightAssignment::real_weight(Key k) const {
  return std::exp2(log2_scaled(weight(k), scale_exponent));
}

BigInt WeightAssignment::unit() const { return pow4(scale_exponent); }

WeightAssignment assign_weights(const Tree& optimal) {
  return assign_weights(optimal, optimal.height());
}

WeightAssignment assign_weights(const Tree& optimal, std::uint32_t scale_exponent) {
  if (optimal.empty()) throw std::invalid_argument("weights need a nonempty tree");
  WeightAssignment wa;
  wa.depth = optimal.depths();
  const auto max_depth = *std::max_element(wa.depth.begin(), wa.depth.end());
  if (scale_exponent < max_depth) {
    throw std::invalid_argument("scale exponent below the height of the weighting tree");
  }
  wa.scale_exponent = scale_exponent;
  wa.keys.assign(optimal.keys().begin(), optimal.keys().end());
  wa.weights.reserve(wa.keys.size());
  for (const auto d : wa.depth) wa.weights.push_back(pow4(scale_exponent - d));
  return wa;
}

void require_same_keys(const Tree& a, const Tree& b) {
  if (!std::equal(a.keys().begin(), a.keys().end(), b.keys().begin(), b.keys().end())) {
    throw KeySetMismatch("trees hold different key sets");
  }
}

std::vector<BigInt> subtree_sums(const Tree& tree, const WeightAssignment& wa) {
  if (!std::equal(tree.keys().begin(), tree.keys().end(), wa.keys.begin(), wa.keys.end())) {
    throw KeySetMismatch("tree and weight assignment hold different key sets");
  }
  return sums_over(tree, wa.weights);
}

double log2_scaled(const BigInt& value, std::uint32_t scale_exponent) {
  if (value <= 0) throw std::domain_error("log2 of a nonpositive sum");
  const auto top = boost::multiprecision::msb(value);
  double lg;
  if (top < 63) {
    lg = std::log2(static_cast<double>(static_cast<std::uint64_t>(value)));
  } else {
    const auto shift = static_cast<unsigned>(top - 62);
    const auto head = static_cast<std::uint64_t>(value >> shift);
    lg = std::log2(static_cast<double>(head)) + static_cast<double>(shift);
  }
  return lg - 2.0 * static_cast<double>(scale_exponent);
}

double potential_from_sums(std::span<const BigInt> sums, std::uint32_t scale_exponent) {
  double total = 0.0;
  for (const BigInt& s : sums) total += log2_scaled(s, scale_exponent);
  return total;
}

double potential_of(const Tree& tree, const WeightAssignment& wa) {
  return potential_from_sums(subtree_sums(tree, wa), wa.scale_exponent);
}

Slot PotentialSnapshot::slot(Key k) const { return slot_in(keys, k); }

double PotentialSnapshot::rank_S(Key k) const {
  return log2_scaled(sums_S[static_cast<std::size_t>(slot(k))], scale_exponent);
}

double PotentialSnapshot::rank_T(Key k) const {
  return log2_scaled(sums_T[static_cast<std::size_t>(slot(k))], scale_exponent);
}

PotentialSnapshot phi(const Tree& S, const Tree& T) {
  return phi(S, T, std::max(S.height(), T.height()));
}

PotentialSnapshot phi(const Tree& S, const Tree& T, std::uint32_t scale_exponent) {
  require_same_keys(S, T);
  const WeightAssignment wa = assign_weights(T, scale_exponent);
  PotentialSnapshot snap;
  snap.scale_exponent = scale_exponent;
  snap.keys = wa.keys;
  snap.sums_T = sums_over(T, wa.weights);
  snap.sums_S = sums_over(S, wa.weights);
  snap.weights = wa.weights;
  snap.root_S = S.root();
  snap.root_T = T.root();
  snap.P_T = potential_from_sums(snap.sums_T, scale_exponent);
  snap.P_S = potential_from_sums(snap.sums_S, scale_exponent);
  snap.phi = snap.P_S - snap.P_T;
  return snap;
}

std::size_t WeightBoundsReport::failures(int bound) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(),
      [bound](const WeightBoundViolation& v) { return v.bound == bound; }));
}

WeightBoundsReport check_lemma1(const Tree& S, const Tree& T) { return check_lemma1(phi(S, T)); }

WeightBoundsReport check_lemma1(const PotentialSnapshot& snap) {
  WeightBoundsReport report;
  const BigInt one = pow4(snap.scale_exponent);
  const BigInt two = one * 2;
  auto check = [&report](bool ok, int eq, Key k, TreeRole role) {
    ++report.checked[static_cast<std::size_t>(eq - 1)];
    if (!ok) report.violations.push_back({eq, k, role});
  };
  for (std::size_t i = 0; i < snap.keys.size(); ++i) {
    const Key k = snap.keys[i];
    const BigInt& w = snap.weights[i];
    for (const TreeRole role : {TreeRole::T, TreeRole::S}) {
      const BigInt& s = role == TreeRole::T ? snap.sums_T[i] : snap.sums_S[i];
      check(w >= 0, 1, k, role);
      check(w <= one, 2, k, role);
      check(w <= s, 3, k, role);
      check(s < two, 5, k, role);
    }
    check(snap.sums_T[i] < 2 * w, 4, k, TreeRole::T);
  }
  if (!snap.keys.empty()) {
    const BigInt& root_s = snap.sums_S[static_cast<std::size_t>(snap.slot(snap.root_S))];
    const BigInt& root_t = snap.sums_T[static_cast<std::size_t>(snap.slot(snap.root_T))];
    check(root_s == root_t, 6, snap.root_S, TreeRole::S);
  }
  return report;
}

PhiFloorReport check_phi_floor(const Tree& S, const Tree& T) {
  const PotentialSnapshot snap = phi(S, T);
  PhiFloorReport r;
  r.n = snap.keys.size();
  r.phi = snap.phi;
  r.passed = -static_cast<double>(r.n) < snap.phi + kRankSlack;
  return r;
}

}  // namespace splaylab
