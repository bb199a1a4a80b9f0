#pragma once

// Exact integers, rationals and sparse Laurent polynomials.
//
// BigInt is GMP's mpz_class. Rational wraps mpq_class and keeps it canonical
// (lowest terms, positive denominator) after every operation. BasicLaurent is a
// sorted sparse polynomial in x and 1/x; the exponent and coefficient types are
// template parameters so the counting kernels can run on int64 when the
// magnitudes allow and on BigInt otherwise.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lacuna/error.hpp"

namespace lacuna {

using BigInt = mpz_class;

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

inline BigInt parse_bigint(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  BigInt out;
  if (s.empty() || out.set_str(s, 10) != 0) throw Error(Errc::Parse, "not an integer: '" + std::string(text) + "'");
  return out;
}

inline bool fits_int64(const BigInt& v) { return v.fits_slong_p() && sizeof(long) == 8; }

inline std::int64_t to_int64(const BigInt& v) { return static_cast<std::int64_t>(v.get_si()); }

/// Binomial coefficient C(n, k); zero when k > n.
inline BigInt binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

inline BigInt factorial(unsigned long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

/// Arbitrary-precision rational in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  Rational(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(Errc::Parse, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  bool is_integer() const { return q_.get_den() == 1; }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  const mpq_class& raw() const { return q_; }

  /// "p/q", or just "p" when the denominator is one.
  std::string to_string() const {
    if (is_integer()) return q_.get_num().get_str(10);
    return q_.get_num().get_str(10) + "/" + q_.get_den().get_str(10);
  }

  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(text));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den <= 0) throw Error(Errc::Parse, "denominator must be positive: '" + std::string(text) + "'");
    return Rational(parse_bigint(text.substr(0, slash)), den);
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(Errc::Parse, "division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class q_{0};
};

/// 2^-k as a rational.
inline Rational inverse_power_of_two(unsigned k) {
  BigInt den = 1;
  den <<= k;
  return Rational(BigInt(1), den);
}

namespace detail {

template <class T>
bool is_zero_value(const T& v) {
  return v == 0;
}

template <class T>
T negate(const T& v) {
  return T(-v);
}

}  // namespace detail

/// Sparse Laurent polynomial: sorted (exponent, coefficient) pairs, no zero
/// coefficients, exponents may be negative.
template <class Exp, class Coef>
class BasicLaurent {
 public:
  using Term = std::pair<Exp, Coef>;

  BasicLaurent() = default;

  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static BasicLaurent from_terms(std::vector<Term> terms) {
    BasicLaurent out;
    out.terms_ = std::move(terms);
    out.normalize();
    return out;
  }

  static BasicLaurent monomial(const Exp& e, const Coef& c = Coef(1)) { return from_terms({{e, c}}); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Coef coefficient(const Exp& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Exp& key) { return t.first < key; });
    if (it != terms_.end() && it->first == e) return it->second;
    return Coef(0);
  }

  Coef constant_term() const { return coefficient(Exp(0)); }

  /// P(1/x).
  BasicLaurent reflected() const {
    BasicLaurent out;
    out.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) out.terms_.emplace_back(detail::negate(it->first), it->second);
    return out;
  }

  /// Largest |exponent|.
  Exp max_abs_exponent() const {
    if (terms_.empty()) return Exp(0);
    Exp lo = detail::negate(terms_.front().first);
    Exp hi = terms_.back().first;
    return lo < hi ? hi : lo;
  }

  /// Sum of |coefficients|.
  Coef l1_norm() const {
    Coef s(0);
    for (const auto& t : terms_) s += (t.second < 0 ? detail::negate(t.second) : t.second);
    return s;
  }

  friend bool operator==(const BasicLaurent& a, const BasicLaurent& b) { return a.terms_ == b.terms_; }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
      std::size_t j = i + 1;
      Coef c = std::move(terms_[i].second);
      while (j < terms_.size() && terms_[j].first == terms_[i].first) {
        c += terms_[j].second;
        ++j;
      }
      if (!detail::is_zero_value(c)) {
        if (out != i) terms_[out].first = std::move(terms_[i].first);
        terms_[out].second = std::move(c);
        ++out;
      }
      i = j;
    }
    terms_.resize(out);
  }

  std::vector<Term> terms_;
};

using SparseLaurent = BasicLaurent<BigInt, BigInt>;
using FastLaurent = BasicLaurent<std::int64_t, std::int64_t>;

/// Exact convolution.
template <class Exp, class Coef>
BasicLaurent<Exp, Coef> laurent_mul(const BasicLaurent<Exp, Coef>& a, const BasicLaurent<Exp, Coef>& b) {
  std::vector<typename BasicLaurent<Exp, Coef>::Term> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) prod.emplace_back(Exp(ea + eb), Coef(ca * cb));
  return BasicLaurent<Exp, Coef>::from_terms(std::move(prod));
}

template <class Exp, class Coef>
BasicLaurent<Exp, Coef> laurent_pow(const BasicLaurent<Exp, Coef>& p, unsigned k) {
  BasicLaurent<Exp, Coef> out = BasicLaurent<Exp, Coef>::monomial(Exp(0));
  for (unsigned i = 0; i < k; ++i) out = laurent_mul(out, p);
  return out;
}

/// [x^0] (a * b) = sum_e a[e] b[-e], without forming the product.
template <class Exp, class Coef>
Coef constant_term_of_product(const BasicLaurent<Exp, Coef>& a, const BasicLaurent<Exp, Coef>& b) {
  Coef acc(0);
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  if (ta.empty() || tb.empty()) return acc;
  std::size_t i = 0;
  std::size_t j = tb.size();
  // ta ascending in e, tb scanned descending so -tb[j] ascends with it.
  while (i < ta.size() && j > 0) {
    const Exp target = detail::negate(tb[j - 1].first);
    if (ta[i].first < target) {
      ++i;
    } else if (target < ta[i].first) {
      --j;
    } else {
      acc += ta[i].second * tb[j - 1].second;
      ++i;
      --j;
    }
  }
  return acc;
}

enum class ConstTermStrategy { MeetInTheMiddle, FullExpansion };

namespace detail {

inline BigInt int64_headroom() { return BigInt(std::numeric_limits<std::int64_t>::max() / 4); }

/// True when every intermediate exponent and coefficient of P^k, k <= m, fits int64.
inline bool fits_fast_path(const SparseLaurent& p, unsigned m) {
  if (p.empty()) return true;
  BigInt exp_bound = p.max_abs_exponent() * m;
  BigInt coef_bound;
  mpz_pow_ui(coef_bound.get_mpz_t(), p.l1_norm().get_mpz_t(), m);
  return exp_bound <= int64_headroom() && coef_bound <= int64_headroom();
}

inline FastLaurent to_fast(const SparseLaurent& p) {
  std::vector<FastLaurent::Term> t;
  t.reserve(p.size());
  for (const auto& [e, c] : p.terms()) t.emplace_back(to_int64(e), to_int64(c));
  return FastLaurent::from_terms(std::move(t));
}

template <class Exp, class Coef>
Coef power_const_term(const BasicLaurent<Exp, Coef>& p, unsigned m, ConstTermStrategy strategy) {
  if (strategy == ConstTermStrategy::FullExpansion) return laurent_pow(p, m).constant_term();
  const unsigned hi = (m + 1) / 2;
  const unsigned lo = m / 2;
  const auto a = laurent_pow(p, hi);
  if (lo == hi) return constant_term_of_product(a, a);
  return constant_term_of_product(a, laurent_pow(p, lo));
}

}  // namespace detail

/// [x^0] P^m. The default strategy splits P^m = P^ceil(m/2) * P^floor(m/2)
/// and pairs opposite exponents; FullExpansion multiplies out P^m.
inline BigInt laurent_power_const_term(const SparseLaurent& p, unsigned m,
                                       ConstTermStrategy strategy = ConstTermStrategy::MeetInTheMiddle) {
  if (m == 0) throw Error(Errc::TooShort, "power must be at least 1");
  if (detail::fits_fast_path(p, m)) return BigInt(static_cast<long>(detail::power_const_term(detail::to_fast(p), m, strategy)));
  return detail::power_const_term(p, m, strategy);
}

/// sum_k (x^{a_k} + x^{-a_k}).
inline SparseLaurent symmetric_frequency_polynomial(const std::vector<BigInt>& frequencies) {
  std::vector<SparseLaurent::Term> t;
  t.reserve(2 * frequencies.size());
  for (const auto& a : frequencies) {
    t.emplace_back(a, BigInt(1));
    t.emplace_back(BigInt(-a), BigInt(1));
  }
  return SparseLaurent::from_terms(std::move(t));
}

/// Constant terms of P^1 .. P^m_max, sharing the half powers between orders.
inline std::vector<BigInt> power_const_terms(const SparseLaurent& p, unsigned m_max) {
  std::vector<BigInt> out;
  out.reserve(m_max);
  auto run = [&](const auto& poly) {
    using Poly = std::decay_t<decltype(poly)>;
    std::vector<Poly> powers;  // powers[k] = P^k
    powers.push_back(Poly::monomial(0));
    const unsigned need = (m_max + 1) / 2;
    for (unsigned k = 1; k <= need; ++k) powers.push_back(laurent_mul(powers.back(), poly));
    for (unsigned m = 1; m <= m_max; ++m)
      out.emplace_back(static_cast<BigInt>(constant_term_of_product(powers[(m + 1) / 2], powers[m / 2])));
  };
  if (m_max == 0) return out;
  if (detail::fits_fast_path(p, m_max)) {
    run(detail::to_fast(p));
    return out;
  }
  run(p);
  return out;
}

}  // namespace lacuna
