#pragma once

// Zero-sum subsets of signed tuples and the multiplicity mult(T), computed two
// ways: the Moebius sum over the upset of zero-sum partitions, and the
// alternating count over subfamilies of its minimal elements (crosscut form).

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lacuna/core_arith.hpp"
#include "lacuna/error.hpp"
#include "lacuna/partitions.hpp"
#include "lacuna/sequences.hpp"

namespace lacuna {

inline constexpr int kMaxProfileLength = 20;

/// T = (i_1..i_m; e_1..e_m), indices 1-based into the terms, signs +1 / -1.
struct SignedTuple {
  std::vector<std::size_t> indices;
  std::vector<int> signs;

  int length() const { return static_cast<int>(indices.size()); }

  void validate(std::size_t n) const {
    if (indices.size() != signs.size()) throw Error(Errc::Parse, "indices and signs differ in length");
    for (std::size_t r = 0; r < indices.size(); ++r) {
      if (indices[r] < 1 || indices[r] > n)
        throw Error(Errc::IndexOutOfRange, "index " + std::to_string(indices[r]) + " outside [1, " + std::to_string(n) + "]");
      if (signs[r] != 1 && signs[r] != -1) throw Error(Errc::Parse, "signs must be +1 or -1");
    }
  }

  /// b_r = e_r * a_{i_r}
  std::vector<BigInt> signed_values(const Terms& terms) const {
    validate(terms.size());
    std::vector<BigInt> out;
    out.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) out.push_back(signs[r] * terms[indices[r] - 1]);
    return out;
  }
};

/// All nonempty B subset of [m] (as bitmasks) with zero signed sum.
struct ZeroSumProfile {
  int m = 0;
  std::vector<Mask> sets;     // ascending
  std::vector<bool> member;   // indexed by mask, size 2^m

  bool contains(Mask b) const { return b < member.size() && member[b]; }
  bool empty() const { return sets.empty(); }
};

/// sum_{r in B} e_r a_{i_r}
inline BigInt signed_subset_sum(const SignedTuple& t, Mask subset, const Terms& terms) {
  t.validate(terms.size());
  if (t.length() < 32 && (subset >> t.length()) != 0) throw Error(Errc::IndexOutOfRange, "subset exceeds tuple length");
  BigInt s = 0;
  for (int r = 0; r < t.length(); ++r)
    if (subset >> r & 1) s += t.signs[static_cast<std::size_t>(r)] * terms[t.indices[static_cast<std::size_t>(r)] - 1];
  return s;
}

/// Zero-sum membership over all 2^m masks for the values b_1..b_m.
template <class V>
std::vector<bool> zero_sum_membership(std::span<const V> values) {
  const int m = static_cast<int>(values.size());
  if (m > kMaxProfileLength) throw Error(Errc::TooLarge, "zero-sum profile limited to m <= 20");
  const std::size_t count = std::size_t{1} << m;
  std::vector<V> sums(count);
  std::vector<bool> member(count, false);
  sums[0] = V(0);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + values[static_cast<std::size_t>(low)];
    member[mask] = sums[mask] == 0;
  }
  return member;
}

inline ZeroSumProfile profile_from_membership(int m, std::vector<bool> member) {
  ZeroSumProfile p;
  p.m = m;
  for (Mask b = 1; b < member.size(); ++b)
    if (member[b]) p.sets.push_back(b);
  p.member = std::move(member);
  return p;
}

inline ZeroSumProfile zero_sum_profile(const SignedTuple& t, const Terms& terms) {
  if (t.length() > kMaxProfileLength) throw Error(Errc::TooLarge, "zero-sum profile limited to m <= 20");
  const auto values = t.signed_values(terms);
  return profile_from_membership(t.length(), zero_sum_membership(std::span<const BigInt>(values)));
}

/// Disjoint unions of zero-sum sets are zero-sum.
inline bool is_union_closed(const ZeroSumProfile& p) {
  for (Mask a : p.sets)
    for (Mask b : p.sets)
      if ((a & b) == 0 && !p.contains(a | b)) return false;
  return true;
}

namespace detail {

/// Visits the block masks of every partition of `remaining` into member sets.
template <class F>
void visit_member_partitions(const std::vector<bool>& member, Mask remaining, std::vector<Mask>& blocks, F& visit) {
  if (remaining == 0) {
    visit(blocks);
    return;
  }
  const Mask low = remaining & (~remaining + 1);
  const Mask rest = remaining ^ low;
  // submasks of rest, including the empty one
  Mask s = rest;
  while (true) {
    const Mask block = s | low;
    if (member[block]) {
      blocks.push_back(block);
      visit_member_partitions(member, remaining ^ block, blocks, visit);
      blocks.pop_back();
    }
    if (s == 0) break;
    s = (s - 1) & rest;
  }
}

}  // namespace detail

/// All partitions of [m] whose every block is a zero-sum set, sorted.
inline std::vector<SetPartition> upset_partitions(const ZeroSumProfile& profile, int m) {
  if (m > kMaxPartitionGround) throw Error(Errc::TooLarge, "upset enumeration limited to m <= 12");
  if (profile.m != m) throw Error(Errc::GroundSetMismatch, "profile length differs from m");
  if (!is_union_closed(profile)) throw std::logic_error("zero-sum profile is not closed under disjoint union");
  std::vector<SetPartition> out;
  if (profile.empty() || m == 0) return out;
  std::vector<Mask> blocks;
  auto collect = [&](const std::vector<Mask>& b) { out.emplace_back(m, b); };
  detail::visit_member_partitions(profile.member, full_mask(m), blocks, collect);
  std::sort(out.begin(), out.end());
  return out;
}

/// sum over zero-sum partitions of mu(pi, 1-hat), from a membership table.
inline BigInt multiplicity_from_membership(int m, const std::vector<bool>& member) {
  if (m > kMaxPartitionGround) throw Error(Errc::TooLarge, "multiplicity limited to m <= 12");
  if (m == 0 || !member[full_mask(m)]) return 0;
  std::vector<std::int64_t> by_blocks(static_cast<std::size_t>(m) + 1, 0);
  std::vector<Mask> blocks;
  auto tally = [&](const std::vector<Mask>& b) { ++by_blocks[b.size()]; };
  detail::visit_member_partitions(member, full_mask(m), blocks, tally);
  BigInt total = 0;
  for (std::size_t k = 1; k < by_blocks.size(); ++k)
    if (by_blocks[k]) total += moebius_to_top(k) * BigInt(static_cast<long>(by_blocks[k]));
  return total;
}

/// mult(T) as the Moebius sum over the upset of zero-sum partitions.
inline BigInt mult_moebius(const SignedTuple& t, const Terms& terms) {
  if (t.length() > kMaxPartitionGround) throw Error(Errc::TooLarge, "multiplicity limited to m <= 12");
  const auto profile = zero_sum_profile(t, terms);
  BigInt total = 0;
  for (const auto& pi : upset_partitions(profile, t.length())) total += moebius_to_top(pi);
  return total;
}

inline constexpr std::size_t kMaxCrosscutFamily = 24;

/// Alternating count of nonempty J within min(U) whose join is the top partition.
inline BigInt crosscut_count(const std::vector<SetPartition>& minimal, int m) {
  if (minimal.empty()) return 0;
  if (minimal.size() > kMaxCrosscutFamily) throw Error(Errc::TooLarge, "too many minimal zero-sum partitions");
  std::int64_t total = 0;
  const std::size_t k = minimal.size();
  // depth-first over include/exclude, carrying the running join
  auto rec = [&](auto&& self, std::size_t i, const SetPartition& acc, std::size_t chosen) -> void {
    if (i == k) {
      if (chosen > 0 && acc.is_top()) total += (chosen % 2 == 1) ? 1 : -1;
      return;
    }
    self(self, i + 1, acc, chosen);
    self(self, i + 1, chosen == 0 ? minimal[i] : join(acc, minimal[i]), chosen + 1);
  };
  rec(rec, 0, SetPartition::bottom(m), 0);
  return total;
}

/// mult(T) through the crosscut formula over minimal zero-sum partitions.
inline BigInt mult_crosscut(const SignedTuple& t, const Terms& terms) {
  if (t.length() > kMaxPartitionGround) throw Error(Errc::TooLarge, "multiplicity limited to m <= 12");
  const auto profile = zero_sum_profile(t, terms);
  const auto minimal = minimal_members(upset_partitions(profile, t.length()));
  return crosscut_count(minimal, t.length());
}

}  // namespace lacuna
