#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "splaylab/tree.hpp"

namespace splaylab {

using BigInt = boost::multiprecision::cpp_int;

class KeySetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Slack applied to every inequality asserted on ranks or potentials.
inline constexpr double kRankSlack = 1e-6;

/// Weights derived from the offline tree: a key at depth d weighs 4^-d. Stored
/// exactly as integers at scale 4^D, so the true weight of a key is
/// weights[slot] / 4^D.
struct WeightAssignment {
  std::uint32_t scale_exponent = 0;
  std::vector<Key> keys;
  std::vector<BigInt> weights;       // by slot
  std::vector<std::uint32_t> depth;  // offline-tree depth, by slot

  std::size_t size() const noexcept { return keys.size(); }
  const BigInt& weight(Key k) const;
  double real_weight(Key k) const;
  BigInt unit() const;  // 4^D, the scaled value of weight 1
};

/// `scale_exponent` must be at least the height of `optimal`; by default it is
/// exactly that height.
WeightAssignment assign_weights(const Tree& optimal);
WeightAssignment assign_weights(const Tree& optimal, std::uint32_t scale_exponent);

/// Exact subtree weight sums of `tree`, by slot, at the assignment's scale.
/// Throws KeySetMismatch when the key sets differ.
std::vector<BigInt> subtree_sums(const Tree& tree, const WeightAssignment& wa);

/// log2(value / 4^D) in double precision, for value > 0.
double log2_scaled(const BigInt& value, std::uint32_t scale_exponent);

/// Sum of ranks log2(s(v)) over all nodes.
double potential_of(const Tree& tree, const WeightAssignment& wa);
double potential_from_sums(std::span<const BigInt> sums, std::uint32_t scale_exponent);

/// Exact sums for both trees plus potentials; weights come from T's depths
/// and are carried over to S by key identity.
struct PotentialSnapshot {
  std::uint32_t scale_exponent = 0;
  std::vector<Key> keys;
  std::vector<BigInt> weights;  // by slot
  std::vector<BigInt> sums_T;   // by slot
  std::vector<BigInt> sums_S;   // by slot
  Key root_S = 0;
  Key root_T = 0;
  double P_T = 0.0;
  double P_S = 0.0;
  double phi = 0.0;

  double rank_S(Key k) const;
  double rank_T(Key k) const;
  Slot slot(Key k) const;
};

/// D defaults to the maximum depth over both trees.
PotentialSnapshot phi(const Tree& S, const Tree& T);
PotentialSnapshot phi(const Tree& S, const Tree& T, std::uint32_t scale_exponent);

void require_same_keys(const Tree& a, const Tree& b);

enum class TreeRole : std::uint8_t { S, T };

/// One failed bound, numbered 1..6 (0 <= w, w <= 1, w <= s,
/// s_T < 2 w_T, s < 2, s(root S) = s_T(root T)).
struct WeightBoundViolation {
  int bound = 0;
  Key key = 0;
  TreeRole tree = TreeRole::S;
};

struct WeightBoundsReport {
  std::array<std::size_t, 6> checked{};
  std::vector<WeightBoundViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
  std::size_t failures(int bound) const noexcept;
};

/// Checks the six weight/sum bounds with exact integer comparisons.
WeightBoundsReport check_lemma1(const Tree& S, const Tree& T);
WeightBoundsReport check_lemma1(const PotentialSnapshot& snap);

struct PhiFloorReport {
  std::size_t n = 0;
  double phi = 0.0;
  bool passed = false;
};

/// Checks -n < phi with kRankSlack.
PhiFloorReport check_phi_floor(const Tree& S, const Tree& T);

}  // namespace splaylab
