#pragma once

// Linear recurrence sequences with a dominant root eta: relations among powers
// of eta modulo the minimal polynomial, multiplicities of offset patterns, the
// resulting slope w_m of 2^m kappa_m(S_n), detection of the eventual affine law
// 2^m kappa_m(S_n) = w n + b, and numeric root diagnostics.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lacuna/core_arith.hpp"
#include "lacuna/error.hpp"
#include "lacuna/moments.hpp"
#include "lacuna/multiplicity.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/sequences.hpp"

namespace lacuna {

/// Integer coefficients, lowest degree first.
using IntPoly = std::vector<BigInt>;
/// Rational coefficients, lowest degree first; the zero polynomial is empty.
using RationalPoly = std::vector<Rational>;

namespace detail {

template <class C>
void trim(std::vector<C>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline IntPoly checked_modulus(IntPoly p) {
  trim(p);
  if (p.size() < 2) throw Error(Errc::ZeroModulus, "modulus must have degree >= 1");
  return p;
}

}  // namespace detail

/// Remainder of q on division by p over the rationals.
inline RationalPoly poly_reduce_mod(const IntPoly& q, const IntPoly& p) {
  const IntPoly mod = detail::checked_modulus(p);
  const std::size_t d = mod.size() - 1;
  RationalPoly r(q.begin(), q.end());
  detail::trim(r);
  const Rational lead(mod.back());
  while (r.size() > d) {
    const std::size_t shift = r.size() - 1 - d;
    const Rational factor = r.back() / lead;
    for (std::size_t j = 0; j <= d; ++j) r[shift + j] -= factor * Rational(mod[j]);
    detail::trim(r);
  }
  return r;
}

/// Offsets (minimum 0) and signs of a tuple shifted to start at index 0.
struct OffsetPattern {
  std::vector<int> offsets;
  std::vector<int> signs;

  int length() const { return static_cast<int>(offsets.size()); }

  void validate() const {
    if (offsets.size() != signs.size()) throw Error(Errc::Parse, "offsets and signs differ in length");
    if (offsets.empty()) return;
    if (*std::min_element(offsets.begin(), offsets.end()) != 0) throw Error(Errc::Parse, "smallest offset must be 0");
    for (int s : signs)
      if (s != 1 && s != -1) throw Error(Errc::Parse, "signs must be +1 or -1");
  }
};

/// Largest difference between consecutive sorted entries.
inline int index_gap(std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  int g = 0;
  for (std::size_t i = 1; i < idx.size(); ++i) g = std::max(g, idx[i] - idx[i - 1]);
  return g;
}

/// sum_j e_j z^{d_j}
inline IntPoly pattern_polynomial(const OffsetPattern& pattern) {
  pattern.validate();
  IntPoly q;
  for (int j = 0; j < pattern.length(); ++j) {
    const auto deg = static_cast<std::size_t>(pattern.offsets[static_cast<std::size_t>(j)]);
    if (q.size() <= deg) q.resize(deg + 1, 0);
    q[deg] += pattern.signs[static_cast<std::size_t>(j)];
  }
  return q;
}

/// For irreducible P with root eta: sum e_j eta^{d_j} = 0 iff P divides sum e_j z^{d_j}.
inline bool eta_relation_holds(const OffsetPattern& pattern, const IntPoly& p) {
  return poly_reduce_mod(pattern_polynomial(pattern), p).empty();
}

/// z^0 .. z^max_power reduced mod P and scaled by one common positive
/// integer, so a signed combination vanishes mod P iff its vector does.
class PowerBasis {
 public:
  PowerBasis(const IntPoly& p, int max_power) {
    const IntPoly mod = detail::checked_modulus(p);
    const std::size_t d = mod.size() - 1;
    std::vector<RationalPoly> rows;
    RationalPoly cur(d, Rational(0));
    cur[0] = 1;
    if (d == 0) cur.clear();
    for (int k = 0; k <= max_power; ++k) {
      rows.push_back(cur);
      // multiply by z and fold the z^d coefficient back
      RationalPoly next(d, Rational(0));
      for (std::size_t j = 0; j + 1 < d; ++j) next[j + 1] = cur[j];
      const Rational top = cur[d - 1] / Rational(mod[d]);
      for (std::size_t j = 0; j < d; ++j) next[j] -= top * Rational(mod[j]);
      cur = std::move(next);
    }
    BigInt scale = 1;
    for (const auto& row : rows)
      for (const auto& c : row) scale = lcm(scale, c.denominator());
    for (const auto& row : rows) {
      std::vector<BigInt> ints;
      for (const auto& c : row) ints.push_back((c * Rational(scale)).numerator());
      big_rows_.push_back(std::move(ints));
    }
    dim_ = d;
  }

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<BigInt>>& big_rows() const { return big_rows_; }

  BigInt max_abs_entry() const {
    BigInt mx = 0;
    for (const auto& r : big_rows_)
      for (const auto& c : r) mx = std::max(mx, BigInt(abs(c)));
    return mx;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<BigInt>> big_rows_;
};

namespace detail {

/// Flat row-major matrix of basis vectors converted to V.
template <class V>
struct FlatBasis {
  using value_type = V;
  std::size_t dim = 0;
  std::vector<V> data;  // row k at [k * dim, (k + 1) * dim)

  explicit FlatBasis(const PowerBasis& basis) : dim(basis.dim()) {
    for (const auto& row : basis.big_rows())
      for (const auto& c : row) {
        if constexpr (std::is_same_v<V, BigInt>) data.push_back(c);
        else data.push_back(to_int64(c));
      }
  }
  const V* row(int k) const { return data.data() + static_cast<std::size_t>(k) * dim; }
};

/// Membership table of subsets whose signed basis combination vanishes.
template <class V>
std::vector<bool> relation_membership(const FlatBasis<V>& basis, std::span<const int> offsets, std::span<const int> signs) {
  const int m = static_cast<int>(offsets.size());
  const std::size_t d = basis.dim;
  const std::size_t count = std::size_t{1} << m;
  std::vector<V> sums(count * d, V(0));
  std::vector<bool> member(count, false);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    const V* src = sums.data() + (mask & (mask - 1)) * d;
    V* dst = sums.data() + mask * d;
    const V* add = basis.row(offsets[static_cast<std::size_t>(low)]);
    bool zero = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (signs[static_cast<std::size_t>(low)] > 0) dst[j] = src[j] + add[j];
      else dst[j] = src[j] - add[j];
      if (dst[j] != 0) zero = false;
    }
    member[mask] = zero;
  }
  return member;
}

/// Calls f with a FlatBasis<int64> when sums of m rows cannot overflow, else BigInt.
template <class F>
decltype(auto) with_basis(const IntPoly& p, int max_power, int m, F&& f) {
  const PowerBasis basis(p, max_power);
  if (BigInt(basis.max_abs_entry() * std::max(1, m)) <= int64_headroom()) return f(FlatBasis<std::int64_t>(basis));
  return f(FlatBasis<BigInt>(basis));
}

}  // namespace detail

/// mult of a tuple whose zero-sum test is the eta-relation on each subset.
inline BigInt pattern_multiplicity(const OffsetPattern& pattern, const IntPoly& p) {
  pattern.validate();
  if (pattern.length() > kMaxPartitionGround) throw Error(Errc::TooLarge, "pattern multiplicity limited to m <= 12");
  if (pattern.length() == 0) return 0;
  const int max_offset = *std::max_element(pattern.offsets.begin(), pattern.offsets.end());
  return detail::with_basis(p, max_offset, pattern.length(), [&](const auto& basis) {
    return multiplicity_from_membership(pattern.length(),
                                        detail::relation_membership(basis, std::span<const int>(pattern.offsets),
                                                                    std::span<const int>(pattern.signs)));
  });
}

inline constexpr double kMaxSlopePatterns = 2e9;

/// w_m: the sum of pattern_multiplicity over all ordered offset patterns with
/// sorted gap <= gap_bound and all sign vectors. Each sorted pattern is
/// visited once and weighted by its number of distinct orderings.
inline BigInt structural_slope(unsigned m, const IntPoly& p, int gap_bound, unsigned threads = 1) {
  if (m == 0) throw Error(Errc::TooShort, "m must be at least 1");
  if (gap_bound < 1) throw Error(Errc::TooShort, "gap bound must be positive");
  if (m > static_cast<unsigned>(kMaxPartitionGround)) throw Error(Errc::TooLarge, "slope sweep limited to m <= 12");
  const double estimate = std::pow(static_cast<double>(gap_bound) + 1.0, static_cast<double>(m) - 1.0) * std::pow(2.0, m);
  if (estimate > kMaxSlopePatterns) throw Error(Errc::TooLarge, "pattern sweep too large for this m and gap bound");
  const int len = static_cast<int>(m);
  const int max_offset = (len - 1) * gap_bound;

  return detail::with_basis(p, max_offset, len, [&](const auto& basis) -> BigInt {
    using V = typename std::decay_t<decltype(basis)>::value_type;
    const std::size_t d = basis.dim;

    // Items are (offset, sign) with sign slot 0 = +1, 1 = -1, visited in
    // nondecreasing (offset, slot) order.
    struct Prefix {
      std::vector<int> offsets;
      std::vector<int> slots;
    };
    std::vector<Prefix> units;
    for (int s0 = 0; s0 < 2; ++s0) {
      if (len == 1) {
        units.push_back({{0}, {s0}});
        continue;
      }
      for (int s1 = s0; s1 < 2; ++s1) units.push_back({{0, 0}, {s0, s1}});
      for (int g = 1; g <= gap_bound; ++g)
        for (int s1 = 0; s1 < 2; ++s1) units.push_back({{0, g}, {s0, s1}});
    }

    return parallel_sum<BigInt>(units.size(), resolve_threads(threads), [&](std::size_t u) {
      BigInt acc = 0;
      std::vector<int> offsets = units[u].offsets;
      std::vector<int> slots = units[u].slots;
      std::vector<int> signs;
      std::vector<int> runs;
      std::vector<V> totals(static_cast<std::size_t>(len + 1) * d, V(0));  // running sum per depth
      auto accumulate = [&](int depth) {
        const V* prev = totals.data() + static_cast<std::size_t>(depth) * d;
        V* cur = totals.data() + static_cast<std::size_t>(depth + 1) * d;
        const V* row = basis.row(offsets[static_cast<std::size_t>(depth)]);
        for (std::size_t j = 0; j < d; ++j) {
          if (slots[static_cast<std::size_t>(depth)] == 0) cur[j] = prev[j] + row[j];
          else cur[j] = prev[j] - row[j];
        }
      };
      for (int i = 0; i < static_cast<int>(offsets.size()); ++i) accumulate(i);

      auto leaf = [&] {
        const V* total = totals.data() + static_cast<std::size_t>(len) * d;
        for (std::size_t j = 0; j < d; ++j)
          if (total[j] != 0) return;
        signs.clear();
        runs.clear();
        for (int i = 0; i < len; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          signs.push_back(slots[ui] == 0 ? 1 : -1);
          if (i > 0 && offsets[ui] == offsets[ui - 1] && slots[ui] == slots[ui - 1]) ++runs.back();
          else runs.push_back(1);
        }
        const BigInt mult = multiplicity_from_membership(
            len, detail::relation_membership(basis, std::span<const int>(offsets), std::span<const int>(signs)));
        if (mult != 0) acc += mult * BigInt(static_cast<long>(detail::multinomial_weight(runs, len)));
      };

      auto rec = [&](auto&& self) -> void {
        const int depth = static_cast<int>(offsets.size());
        if (depth == len) {
          leaf();
          return;
        }
        const int last_offset = offsets.back();
        const int last_slot = slots.back();
        auto push = [&](int off, int slot) {
          offsets.push_back(off);
          slots.push_back(slot);
          accumulate(depth);
          self(self);
          offsets.pop_back();
          slots.pop_back();
        };
        for (int slot = last_slot; slot < 2; ++slot) push(last_offset, slot);
        for (int g = 1; g <= gap_bound; ++g)
          for (int slot = 0; slot < 2; ++slot) push(last_offset + g, slot);
      };
      rec(rec);
      return acc;
    });
  });
}

/// structural_slope at gap_bound and at 2 * gap_bound.
struct SlopeReport {
  BigInt w;
  BigInt w_doubled;
  int gap_bound = 0;
  bool gap_bound_stable = false;
};

inline SlopeReport structural_slope_checked(unsigned m, const IntPoly& p, int gap_bound, unsigned threads = 1) {
  SlopeReport r;
  r.gap_bound = gap_bound;
  r.w = structural_slope(m, p, gap_bound, threads);
  r.w_doubled = structural_slope(m, p, 2 * gap_bound, threads);
  r.gap_bound_stable = r.w == r.w_doubled;
  return r;
}

/// The detected law 2^m kappa_m(S_n) = w n + b for n >= n1.
struct AffineFit {
  BigInt w;
  BigInt b;
  std::size_t n1 = 0;
  bool valid = false;
  std::size_t tail_points = 0;
};

/// Longest exactly affine tail of 2^m * values with integer slope and
/// intercept, covering at least 3 points.
inline AffineFit detect_affine_tail(std::vector<std::pair<std::size_t, Rational>> values, unsigned m) {
  if (values.size() < 4) throw Error(Errc::TooFewPoints, "need at least 4 points");
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const Rational scale = Rational(BigInt(BigInt(1) << m));
  std::vector<Rational> y;
  for (const auto& v : values) y.push_back(v.second * scale);
  const std::size_t last = values.size() - 1;
  const Rational run(BigInt(static_cast<unsigned long>(values[last].first - values[last - 1].first)));
  const Rational w = (y[last] - y[last - 1]) / run;
  const Rational b = y[last] - w * Rational(BigInt(static_cast<unsigned long>(values[last].first)));
  AffineFit fit;
  if (!w.is_integer() || !b.is_integer()) return fit;
  std::size_t start = last - 1;
  while (start > 0 && y[start - 1] == w * Rational(BigInt(static_cast<unsigned long>(values[start - 1].first))) + b) --start;
  fit.tail_points = last - start + 1;
  if (fit.tail_points < 3) return fit;
  fit.w = w.numerator();
  fit.b = b.numerator();
  fit.n1 = values[start].first;
  fit.valid = true;
  return fit;
}

/// Rational roots of P found by the rational-root test (p | r_0, q | r_d).
inline std::vector<Rational> rational_roots(const IntPoly& poly) {
  IntPoly p = detail::checked_modulus(poly);
  std::vector<Rational> roots;
  std::size_t zero_mult = 0;
  while (p.front() == 0) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult) roots.emplace_back(0);
  if (p.size() < 2) return roots;
  auto divisors = [](BigInt v) {
    v = abs(v);
    std::vector<BigInt> out;
    if (v > BigInt(1'000'000'000'000L)) throw Error(Errc::TooLarge, "coefficient too large for the rational-root test");
    const auto x = to_int64(v);
    for (std::int64_t i = 1; i * i <= x; ++i)
      if (x % i == 0) {
        out.emplace_back(static_cast<long>(i));
        if (i * i != x) out.emplace_back(static_cast<long>(x / i));
      }
    return out;
  };
  auto eval = [&](const Rational& z) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + Rational(*it);
    return acc;
  };
  for (const auto& num : divisors(p.front()))
    for (const auto& den : divisors(p.back()))
      for (int sgn : {1, -1}) {
        const Rational z(BigInt(sgn * num), den);
        if (std::find(roots.begin(), roots.end(), z) == roots.end() && eval(z).is_zero()) roots.push_back(z);
      }
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct DominantRootReport {
  bool is_perron = false;
  double eta_estimate = 0.0;
  std::vector<std::complex<double>> roots;
  std::vector<Rational> rational_roots;
  /// Degree >= 2 and a rational root exists, so P is reducible.
  bool irreducibility_warning = false;
};

/// Numeric roots via the companion matrix; P is Perron-like when a unique
/// real root > 1 beats every other root modulus by more than tol.
inline DominantRootReport dominant_root_check(const IntPoly& poly, double tol = 1e-9) {
  const IntPoly p = detail::checked_modulus(poly);
  const std::size_t d = p.size() - 1;
  DominantRootReport report;
  const double lead = p.back().get_d();
  if (d == 1) {
    report.roots.emplace_back(-p[0].get_d() / lead, 0.0);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 1; i < d; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < d; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -p[i].get_d() / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw Error(Errc::RootFindingFailed, "companion eigenvalue iteration failed");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) report.roots.push_back(solver.eigenvalues()[i]);
  }
  std::sort(report.roots.begin(), report.roots.end(),
            [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  const auto& top = report.roots.front();
  report.eta_estimate = top.real();
  const bool real_top = std::abs(top.imag()) <= tol * std::max(1.0, std::abs(top.real()));
  const bool dominant = report.roots.size() == 1 || std::abs(report.roots[1]) < std::abs(top) - tol;
  report.is_perron = real_top && top.real() > 1.0 + tol && dominant;
  report.rational_roots = rational_roots(p);
  report.irreducibility_warning = d >= 2 && !report.rational_roots.empty();
  return report;
}

/// The polynomial whose dominant root drives the sequence, when there is one.
inline std::optional<IntPoly> minimal_polynomial(const SequenceSpec& spec) {
  struct Visitor {
    std::optional<IntPoly> operator()(const seq::Fibonacci&) const { return IntPoly{-1, -1, 1}; }
    std::optional<IntPoly> operator()(const seq::Lucas&) const { return IntPoly{-1, -1, 1}; }
    std::optional<IntPoly> operator()(const seq::Pow2Plus1&) const { return IntPoly{2, -3, 1}; }
    std::optional<IntPoly> operator()(const seq::Geometric& g) const { return IntPoly{BigInt(-g.eta), 1}; }
    std::optional<IntPoly> operator()(const seq::Recurrence& r) const { return r.minpoly; }
    std::optional<IntPoly> operator()(const seq::Explicit&) const { return std::nullopt; }
    std::optional<IntPoly> operator()(const seq::RoundPow&) const { return std::nullopt; }
  };
  return std::visit(Visitor{}, spec.kind);
}

/// (n, kappa_m(S_n)) for n in [n_from, n_to].
inline std::vector<std::pair<std::size_t, Rational>> cumulant_series(const SequenceSpec& spec, unsigned m,
                                                                     std::size_t n_from, std::size_t n_to) {
  if (n_from < 1 || n_from > n_to) throw Error(Errc::TooShort, "need 1 <= n_from <= n_to");
  const Terms all = generate_terms(spec, n_to);
  std::vector<std::pair<std::size_t, Rational>> out;
  for (std::size_t n = n_from; n <= n_to; ++n) out.emplace_back(n, cumulant(detail::prefix(all, n), m));
  return out;
}

}  // namespace lacuna
