#pragma once

// The lattice of set partitions of [m] = {1..m}. Blocks are bitmasks, bit r-1
// standing for element r.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lacuna/core_arith.hpp"
#include "lacuna/error.hpp"

namespace lacuna {

using Mask = std::uint32_t;

inline constexpr int kMaxPartitionGround = 12;

inline Mask full_mask(int m) { return m >= 32 ? ~Mask{0} : (Mask{1} << m) - 1; }

/// "{1,3}" for bits 0 and 2.
inline std::string subset_to_string(Mask b) {
  std::string out = "{";
  bool first = true;
  for (int r = 0; r < 32; ++r) {
    if (!(b >> r & 1)) continue;
    if (!first) out += ',';
    out += std::to_string(r + 1);
    first = false;
  }
  return out + '}';
}

/// A partition of [m] with blocks ordered by least element.
class SetPartition {
 public:
  SetPartition() = default;

  /// Validates that blocks are nonempty, disjoint and cover [m].
  SetPartition(int m, std::vector<Mask> blocks) : ground_(m), blocks_(std::move(blocks)) {
    if (m < 0 || m > 31) throw Error(Errc::TooLarge, "ground set size out of range");
    Mask seen = 0;
    for (Mask b : blocks_) {
      if (b == 0) throw Error(Errc::GroundSetMismatch, "empty block");
      if (b & seen) throw Error(Errc::GroundSetMismatch, "blocks overlap");
      seen |= b;
    }
    if (seen != full_mask(m)) throw Error(Errc::GroundSetMismatch, "blocks do not cover the ground set");
    canonicalize();
  }

  /// From a restricted growth string: element r goes to block rgs[r-1].
  static SetPartition from_rgs(const std::vector<int>& rgs) {
    const int m = static_cast<int>(rgs.size());
    const int k = m == 0 ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<Mask> blocks(static_cast<std::size_t>(k), 0);
    for (int r = 0; r < m; ++r) blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(r)])] |= Mask{1} << r;
    return SetPartition(m, std::move(blocks));
  }

  /// 0-hat, all singletons.
  static SetPartition bottom(int m) {
    std::vector<Mask> blocks;
    for (int r = 0; r < m; ++r) blocks.push_back(Mask{1} << r);
    return SetPartition(m, std::move(blocks));
  }

  /// 1-hat, the single block [m].
  static SetPartition top(int m) { return SetPartition(m, m == 0 ? std::vector<Mask>{} : std::vector<Mask>{full_mask(m)}); }

  int ground() const { return ground_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<Mask>& blocks() const { return blocks_; }
  bool is_top() const { return blocks_.size() == 1 || (ground_ == 0 && blocks_.empty()); }

  /// "{1,2}|{3,4}"
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) out += '|';
      out += subset_to_string(blocks_[i]);
    }
    return out;
  }

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.ground_ == b.ground_ && a.blocks_ == b.blocks_;
  }
  friend bool operator!=(const SetPartition& a, const SetPartition& b) { return !(a == b); }
  friend bool operator<(const SetPartition& a, const SetPartition& b) {
    if (a.ground_ != b.ground_) return a.ground_ < b.ground_;
    return a.blocks_ < b.blocks_;
  }

 private:
  void canonicalize() {
    std::sort(blocks_.begin(), blocks_.end(),
              [](Mask a, Mask b) { return std::countr_zero(a) < std::countr_zero(b); });
  }

  int ground_ = 0;
  std::vector<Mask> blocks_;
};

/// Visits every partition of [m] in restricted-growth-string order.
template <class F>
void for_each_partition(int m, F&& visit) {
  if (m < 1) throw Error(Errc::TooShort, "ground set must be nonempty");
  if (m > kMaxPartitionGround) throw Error(Errc::TooLarge, "partition enumeration limited to m <= 12");
  std::vector<int> rgs(static_cast<std::size_t>(m), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(m), 0);  // max of rgs[0..i]
  while (true) {
    visit(SetPartition::from_rgs(rgs));
    // Advance to the next restricted growth string.
    int i = m - 1;
    while (i > 0 && rgs[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) return;
    ++rgs[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] = std::max(prefix_max[static_cast<std::size_t>(i - 1)], rgs[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < m; ++j) {
      rgs[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
}

/// All Bell(m) partitions of [m], 1 <= m <= 12.
inline std::vector<SetPartition> all_partitions(int m) {
  std::vector<SetPartition> out;
  for_each_partition(m, [&](SetPartition p) { out.push_back(std::move(p)); });
  return out;
}

/// True iff every block of pi lies inside some block of sigma.
inline bool is_refinement(const SetPartition& pi, const SetPartition& sigma) {
  if (pi.ground() != sigma.ground()) throw Error(Errc::GroundSetMismatch, "partitions of different ground sets");
  return std::all_of(pi.blocks().begin(), pi.blocks().end(), [&](Mask b) {
    return std::any_of(sigma.blocks().begin(), sigma.blocks().end(), [&](Mask s) { return (b & ~s) == 0; });
  });
}

/// Least upper bound: connected components of the block-overlap relation.
inline SetPartition join(const SetPartition& pi, const SetPartition& sigma) {
  if (pi.ground() != sigma.ground()) throw Error(Errc::GroundSetMismatch, "partitions of different ground sets");
  std::vector<Mask> merged;
  auto absorb = [&](Mask b) {
    Mask cur = b;
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = merged.begin(); it != merged.end();) {
        if (*it & cur) {
          cur |= *it;
          it = merged.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    merged.push_back(cur);
  };
  for (Mask b : pi.blocks()) absorb(b);
  for (Mask b : sigma.blocks()) absorb(b);
  return SetPartition(pi.ground(), std::move(merged));
}

/// mu(pi, 1-hat) = (-1)^{k-1} (k-1)! with k the number of blocks.
inline BigInt moebius_to_top(std::size_t block_count) {
  if (block_count == 0) return 1;
  BigInt f = factorial(static_cast<unsigned long>(block_count - 1));
  return (block_count % 2 == 1) ? f : BigInt(-f);
}

inline BigInt moebius_to_top(const SetPartition& pi) { return moebius_to_top(pi.block_count()); }

/// Members of the family with no strictly finer member in the family.
inline std::vector<SetPartition> minimal_members(const std::vector<SetPartition>& family) {
  std::vector<SetPartition> out;
  for (const auto& p : family) {
    const bool has_finer = std::any_of(family.begin(), family.end(),
                                       [&](const SetPartition& q) { return q != p && is_refinement(q, p); });
    if (!has_finer && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

}  // namespace lacuna
