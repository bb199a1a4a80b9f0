#pragma once

// Moments and cumulants of S_n(w) = sum_{k<=n} cos(2 pi a_k w), w uniform on [0,1].
//
// E[S_n^m] = 2^-m * #{(i_1..i_m; e_1..e_m) : sum e_r a_{i_r} = 0}. The count is
// the constant term of (sum_k x^{a_k} + x^{-a_k})^m. Cumulants follow from the
// moments; the multiplicity formula and a quadrature rule serve as oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lacuna/core_arith.hpp"
#include "lacuna/error.hpp"
#include "lacuna/multiplicity.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/sequences.hpp"

namespace lacuna {

/// mu_1..mu_M, stored at index m-1.
using MomentVector = std::vector<Rational>;

enum class CountStrategy { MeetInTheMiddle, FullExpansion, PrunedSearch };

namespace detail {

inline Terms prefix(const Terms& terms, std::size_t n) {
  if (n > terms.size()) throw Error(Errc::TooShort, "requested " + std::to_string(n) + " terms, have " + std::to_string(terms.size()));
  return Terms(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(n));
}

/// Calls f with the terms as int64 when m * max(a) fits, else as BigInt.
template <class F>
decltype(auto) with_value_type(const Terms& terms, unsigned m, F&& f) {
  BigInt max_term = 0;
  for (const auto& a : terms) max_term = std::max(max_term, BigInt(abs(a)));
  if (BigInt(max_term * std::max(1u, m)) <= int64_headroom()) {
    std::vector<std::int64_t> v;
    v.reserve(terms.size());
    for (const auto& a : terms) v.push_back(to_int64(a));
    return f(v);
  }
  return f(terms);
}

inline std::int64_t multinomial_weight(std::span<const int> run_lengths, int m) {
  BigInt w = factorial(static_cast<unsigned long>(m));
  for (int r : run_lengths) w /= factorial(static_cast<unsigned long>(r));
  return to_int64(w);
}

/// Counts zero-sum signed tuples by a pruned search over sorted multisets of
/// (index, sign) items, each weighted by its number of orderings.
template <class V>
BigInt zero_sum_count_search(std::vector<V> values, int m) {
  std::sort(values.begin(), values.end(), [](const V& a, const V& b) { return b < a; });
  const std::size_t items = 2 * values.size();
  auto item_value = [&](std::size_t it) -> V { return (it & 1) ? V(-values[it / 2]) : values[it / 2]; };
  BigInt total = 0;
  std::vector<int> runs;
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::size_t start, const V& partial, int slots) -> void {
    if (slots == 0) {
      if (partial == 0) {
        runs.clear();
        for (std::size_t i = 0; i < chosen.size(); ++i) {
          if (i > 0 && chosen[i] == chosen[i - 1]) ++runs.back();
          else runs.push_back(1);
        }
        total += BigInt(static_cast<long>(multinomial_weight(runs, m)));
      }
      return;
    }
    if (start >= items) return;
    // every remaining item has magnitude <= values[start / 2]
    const V reach = V(values[start / 2] * slots);
    const V mag = partial < 0 ? V(-partial) : partial;
    if (reach < mag) return;
    for (std::size_t it = start; it < items; ++it) {
      chosen.push_back(it);
      self(self, it, V(partial + item_value(it)), slots - 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0, V(0), m);
  return total;
}

}  // namespace detail

/// Number of signed tuples of length m with zero sum.
inline BigInt zero_sum_count(const Terms& terms, unsigned m, CountStrategy strategy = CountStrategy::MeetInTheMiddle) {
  if (m == 0) throw Error(Errc::TooShort, "m must be at least 1");
  switch (strategy) {
    case CountStrategy::MeetInTheMiddle:
      return laurent_power_const_term(symmetric_frequency_polynomial(terms), m, ConstTermStrategy::MeetInTheMiddle);
    case CountStrategy::FullExpansion:
      return laurent_power_const_term(symmetric_frequency_polynomial(terms), m, ConstTermStrategy::FullExpansion);
    case CountStrategy::PrunedSearch:
      return detail::with_value_type(terms, m, [&](const auto& v) {
        return detail::zero_sum_count_search(std::vector(v.begin(), v.end()), static_cast<int>(m));
      });
  }
  return 0;
}

/// E[S_n^m] for the given terms a_1..a_n.
inline Rational moment(const Terms& terms, unsigned m, CountStrategy strategy = CountStrategy::MeetInTheMiddle) {
  return Rational(zero_sum_count(terms, m, strategy)) * inverse_power_of_two(m);
}

/// mu_1..mu_{m_max}, sharing the half powers across orders.
inline MomentVector moments(const Terms& terms, unsigned m_max) {
  MomentVector out;
  const auto counts = power_const_terms(symmetric_frequency_polynomial(terms), m_max);
  for (unsigned m = 1; m <= m_max; ++m) out.push_back(Rational(counts[m - 1]) * inverse_power_of_two(m));
  return out;
}

inline constexpr std::int64_t kMaxQuadratureNodes = 10'000'000;

/// (1/N) sum_{j<N} S_n(j/N)^m with N = m * max(a) + 1, which integrates the
/// trigonometric polynomial S_n^m exactly up to rounding.
inline double moment_oracle_quadrature(const Terms& terms, unsigned m) {
  if (m == 0) throw Error(Errc::TooShort, "m must be at least 1");
  BigInt max_term = 0;
  for (const auto& a : terms) max_term = std::max(max_term, a);
  const BigInt nodes_big = max_term * m + 1;
  if (nodes_big > kMaxQuadratureNodes) throw Error(Errc::TooLarge, "quadrature needs " + nodes_big.get_str() + " nodes (cap 10^7)");
  const auto nodes = to_int64(nodes_big);
  std::vector<double> cos_table(static_cast<std::size_t>(nodes));
  for (std::int64_t r = 0; r < nodes; ++r)
    cos_table[static_cast<std::size_t>(r)] =
        static_cast<double>(std::cos(2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) / static_cast<long double>(nodes)));
  std::vector<std::int64_t> step, phase(terms.size(), 0);
  for (const auto& a : terms) step.push_back(to_int64(a) % nodes);
  // Neumaier summation in extended precision
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (std::int64_t j = 0; j < nodes; ++j) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      s += cos_table[static_cast<std::size_t>(phase[k])];
      phase[k] += step[k];
      if (phase[k] >= nodes) phase[k] -= nodes;
    }
    long double p = 1.0L;
    for (unsigned e = 0; e < m; ++e) p *= s;
    const long double t = sum + p;
    if (std::fabs(sum) >= std::fabs(p)) carry += (sum - t) + p;
    else carry += (p - t) + sum;
    sum = t;
  }
  return static_cast<double>((sum + carry) / static_cast<long double>(nodes));
}

/// kappa_m = mu_m - sum_{j=1}^{m-1} C(m-1, j-1) kappa_j mu_{m-j}.
inline std::vector<Rational> moments_to_cumulants(const MomentVector& mu) {
  std::vector<Rational> kappa;
  kappa.reserve(mu.size());
  for (std::size_t m = 1; m <= mu.size(); ++m) {
    Rational k = mu[m - 1];
    for (std::size_t j = 1; j < m; ++j) k -= Rational(binomial(m - 1, j - 1)) * kappa[j - 1] * mu[m - j - 1];
    kappa.push_back(std::move(k));
  }
  return kappa;
}

/// mu_m = sum_{j=1}^{m} C(m-1, j-1) kappa_j mu_{m-j}, mu_0 = 1.
inline MomentVector cumulants_to_moments(const std::vector<Rational>& kappa) {
  MomentVector mu;
  mu.reserve(kappa.size());
  for (std::size_t m = 1; m <= kappa.size(); ++m) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= m; ++j) acc += Rational(binomial(m - 1, j - 1)) * kappa[j - 1] * (m == j ? Rational(1) : mu[m - j - 1]);
    mu.push_back(std::move(acc));
  }
  return mu;
}

/// kappa_1..kappa_{m_max} of S_n.
inline std::vector<Rational> cumulants(const Terms& terms, unsigned m_max) {
  return moments_to_cumulants(moments(terms, m_max));
}

inline Rational cumulant(const Terms& terms, unsigned m) {
  if (m == 0) throw Error(Errc::TooShort, "m must be at least 1");
  return cumulants(terms, m).back();
}

inline constexpr unsigned kMaxMultiplicityRouteM = 6;
inline constexpr std::size_t kMaxMultiplicityRouteN = 12;

/// kappa_m(S_n) = 2^-m sum_T mult(T), summing over sorted representatives of
/// the tuples with their multinomial counts (mult is symmetric in the
/// (index, sign) pairs).
inline Rational cumulant_via_multiplicity(const Terms& terms, std::size_t n, unsigned m, unsigned threads = 1) {
  if (m == 0) throw Error(Errc::TooShort, "m must be at least 1");
  if (m > kMaxMultiplicityRouteM || n > kMaxMultiplicityRouteN)
    throw Error(Errc::TooLarge, "multiplicity route limited to m <= 6, n <= 12");
  const Terms head = detail::prefix(terms, n);
  const BigInt sum = detail::with_value_type(head, m, [&](const auto& values) -> BigInt {
    using V = typename std::decay_t<decltype(values)>::value_type;
    const std::size_t items = 2 * values.size();
    auto item_value = [&](std::size_t it) -> V { return (it & 1) ? V(-values[it / 2]) : values[it / 2]; };
    const int len = static_cast<int>(m);
    return parallel_sum<BigInt>(items, resolve_threads(threads), [&](std::size_t first) {
      BigInt acc = 0;
      std::vector<std::size_t> chosen{first};
      std::vector<V> b;
      std::vector<int> runs;
      auto rec = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(chosen.size()) == len) {
          V total(0);
          for (auto it : chosen) total += item_value(it);
          if (total != 0) return;
          b.clear();
          runs.clear();
          for (std::size_t i = 0; i < chosen.size(); ++i) {
            b.push_back(item_value(chosen[i]));
            if (i > 0 && chosen[i] == chosen[i - 1]) ++runs.back();
            else runs.push_back(1);
          }
          const BigInt mult = multiplicity_from_membership(len, zero_sum_membership(std::span<const V>(b)));
          acc += mult * BigInt(static_cast<long>(detail::multinomial_weight(runs, len)));
          return;
        }
        for (std::size_t it = start; it < items; ++it) {
          chosen.push_back(it);
          self(self, it);
          chosen.pop_back();
        }
      };
      rec(rec, first);
      return acc;
    });
  });
  return Rational(sum) * inverse_power_of_two(m);
}

/// E[X^order] for the arcsine law on (-1, 1): C(2j, j) / 4^j at order 2j.
inline Rational arcsine_moment(unsigned order) {
  if (order % 2 == 1) return 0;
  const unsigned j = order / 2;
  return Rational(binomial(2 * j, j)) * inverse_power_of_two(2 * j);
}

/// Cumulants of one arcsine summand (the independent model), orders 1..m_max.
inline std::vector<Rational> independent_cumulants(unsigned m_max) {
  MomentVector mu;
  for (unsigned k = 1; k <= m_max; ++k) mu.push_back(arcsine_moment(k));
  return moments_to_cumulants(mu);
}

inline Rational independent_cumulant(unsigned m) {
  if (m == 0) throw Error(Errc::TooShort, "m must be at least 1");
  return independent_cumulants(m).back();
}

struct CumulantRow {
  std::size_t n = 0;
  unsigned m = 0;
  Rational kappa;
  Rational independent_n_kappa;  // n * kappa-tilde_m
  Rational diff;                 // kappa - n * kappa-tilde_m
};

struct CumulantTable {
  std::string sequence;
  std::vector<CumulantRow> rows;  // ordered by n, then m
};

/// kappa_m(S_n) next to the independent-model value n * kappa-tilde_m.
inline CumulantTable compare_table(const SequenceSpec& spec, std::size_t n_from, std::size_t n_to, unsigned m_max) {
  if (n_from < 1 || n_from > n_to) throw Error(Errc::TooShort, "need 1 <= n_from <= n_to");
  if (m_max < 1) throw Error(Errc::TooShort, "m_max must be at least 1");
  const Terms all = generate_terms(spec, n_to);
  const auto tilde = independent_cumulants(m_max);
  CumulantTable table{describe(spec), {}};
  for (std::size_t n = n_from; n <= n_to; ++n) {
    const auto kappa = cumulants(detail::prefix(all, n), m_max);
    for (unsigned m = 1; m <= m_max; ++m) {
      Rational indep = Rational(BigInt(static_cast<unsigned long>(n))) * tilde[m - 1];
      table.rows.push_back({n, m, kappa[m - 1], indep, kappa[m - 1] - indep});
    }
  }
  return table;
}

}  // namespace lacuna
