#pragma once

// Integer frequency sequences (a_k), k = 1, 2, ... and their exact prefixes.

#include <mpfr.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lacuna/core_arith.hpp"
#include "lacuna/error.hpp"

namespace lacuna {

/// The materialized prefix a_1..a_n. Entries are positive; repeats allowed.
using Terms = std::vector<BigInt>;

namespace seq {

struct Explicit {
  std::vector<BigInt> values;
};
/// a_k = 2^k + 1
struct Pow2Plus1 {};
/// F_1 = F_2 = 1
struct Fibonacci {};
/// L_1 = 1, L_2 = 3
struct Lucas {};
/// a_k = c * eta^k
struct Geometric {
  BigInt c{1};
  BigInt eta{2};
};
/// r_d a_{k+d} = -(r_0 a_k + ... + r_{d-1} a_{k+d-1}); coefficients low to high.
struct Recurrence {
  std::vector<BigInt> minpoly;
  std::vector<BigInt> initial;
};
/// a_k = nearest integer to eta^k, eta given in decimal.
struct RoundPow {
  std::string eta;
  unsigned precision_bits = 128;
};

}  // namespace seq

struct SequenceSpec {
  std::variant<seq::Explicit, seq::Pow2Plus1, seq::Fibonacci, seq::Lucas, seq::Geometric, seq::Recurrence, seq::RoundPow>
      kind;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<BigInt> parse_int_list(std::string_view s) {
  std::vector<BigInt> out;
  for (auto part : split(s, ',')) out.push_back(parse_bigint(part));
  return out;
}

inline std::string join_ints(const std::vector<BigInt>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i].get_str();
  }
  return out;
}

}  // namespace detail

/// Parses the sequence mini-language, e.g. "fibonacci", "geometric:c=1,eta=2",
/// "recurrence:poly=-1,-1,1;init=1,1", "explicit:3,5,9",
/// "roundpow:eta=3.14159265358979323846,prec=128".
inline SequenceSpec parse_sequence(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto bad = [&](const std::string& why) { return Error(Errc::Parse, "sequence '" + std::string(text) + "': " + why); };
  auto no_args = [&] {
    if (colon != std::string_view::npos) throw bad("takes no arguments");
  };

  if (head == "pow2plus1") return no_args(), SequenceSpec{seq::Pow2Plus1{}};
  if (head == "fibonacci") return no_args(), SequenceSpec{seq::Fibonacci{}};
  if (head == "lucas") return no_args(), SequenceSpec{seq::Lucas{}};
  if (head == "explicit") {
    if (body.empty()) throw bad("needs a value list");
    return SequenceSpec{seq::Explicit{detail::parse_int_list(body)}};
  }
  if (head == "geometric") {
    seq::Geometric g;
    if (!body.empty()) {
      for (auto kv : detail::split(body, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) throw bad("expected key=value");
        const auto key = kv.substr(0, eq);
        const auto value = parse_bigint(kv.substr(eq + 1));
        if (key == "c") g.c = value;
        else if (key == "eta") g.eta = value;
        else throw bad("unknown key '" + std::string(key) + "'");
      }
    }
    if (g.c < 1) throw bad("c must be positive");
    if (g.eta < 2) throw bad("eta must be at least 2");
    return SequenceSpec{g};
  }
  if (head == "recurrence") {
    seq::Recurrence r;
    bool have_poly = false;
    bool have_init = false;
    for (auto kv : detail::split(body, ';')) {
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw bad("expected key=value");
      const auto key = kv.substr(0, eq);
      if (key == "poly") r.minpoly = detail::parse_int_list(kv.substr(eq + 1)), have_poly = true;
      else if (key == "init") r.initial = detail::parse_int_list(kv.substr(eq + 1)), have_init = true;
      else throw bad("unknown key '" + std::string(key) + "'");
    }
    if (!have_poly || !have_init) throw bad("needs poly= and init=");
    if (r.minpoly.size() < 2 || r.minpoly.back() == 0) throw bad("minimal polynomial needs degree >= 1 and nonzero leading coefficient");
    if (r.initial.size() != r.minpoly.size() - 1) throw bad("initial term count must equal the polynomial degree");
    return SequenceSpec{r};
  }
  if (head == "roundpow") {
    seq::RoundPow rp;
    for (auto kv : detail::split(body, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw bad("expected key=value");
      const auto key = kv.substr(0, eq);
      const auto value = kv.substr(eq + 1);
      if (key == "eta") rp.eta = std::string(value);
      else if (key == "prec") {
        const BigInt p = parse_bigint(value);
        if (p < 16 || p > 1 << 20) throw bad("prec out of range");
        rp.precision_bits = static_cast<unsigned>(p.get_ui());
      } else throw bad("unknown key '" + std::string(key) + "'");
    }
    if (rp.eta.empty()) throw bad("needs eta=");
    return SequenceSpec{rp};
  }
  throw bad("unknown sequence kind");
}

/// Canonical mini-language form of a spec.
inline std::string describe(const SequenceSpec& spec) {
  struct Visitor {
    std::string operator()(const seq::Explicit& e) const { return "explicit:" + detail::join_ints(e.values); }
    std::string operator()(const seq::Pow2Plus1&) const { return "pow2plus1"; }
    std::string operator()(const seq::Fibonacci&) const { return "fibonacci"; }
    std::string operator()(const seq::Lucas&) const { return "lucas"; }
    std::string operator()(const seq::Geometric& g) const { return "geometric:c=" + g.c.get_str() + ",eta=" + g.eta.get_str(); }
    std::string operator()(const seq::Recurrence& r) const {
      return "recurrence:poly=" + detail::join_ints(r.minpoly) + ";init=" + detail::join_ints(r.initial);
    }
    std::string operator()(const seq::RoundPow& r) const {
      return "roundpow:eta=" + r.eta + ",prec=" + std::to_string(r.precision_bits);
    }
  };
  return std::visit(Visitor{}, spec.kind);
}

namespace detail {

inline Terms run_recurrence(const std::vector<BigInt>& minpoly, const std::vector<BigInt>& initial, std::size_t n) {
  const std::size_t d = minpoly.size() - 1;
  Terms out(initial.begin(), initial.begin() + static_cast<std::ptrdiff_t>(std::min(n, initial.size())));
  while (out.size() < n) {
    const std::size_t k = out.size() - d;
    BigInt acc = 0;
    for (std::size_t j = 0; j < d; ++j) acc -= minpoly[j] * out[k + j];
    if (!mpz_divisible_p(acc.get_mpz_t(), minpoly[d].get_mpz_t()))
      throw Error(Errc::NonIntegerRecurrence, "term " + std::to_string(out.size() + 1) + " is not an integer");
    BigInt next;
    mpz_divexact(next.get_mpz_t(), acc.get_mpz_t(), minpoly[d].get_mpz_t());
    out.push_back(std::move(next));
  }
  return out;
}

/// RAII holder for an mpfr_t.
class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

inline Terms round_powers(const seq::RoundPow& spec, std::size_t n) {
  const mpfr_prec_t prec = spec.precision_bits;
  MpfrValue eta(prec), power(prec), nearest(prec), margin(prec), error_bound(prec);
  if (mpfr_set_str(eta.get(), spec.eta.c_str(), 10, MPFR_RNDN) != 0)
    throw Error(Errc::Parse, "eta is not a decimal number: '" + spec.eta + "'");
  if (mpfr_cmp_ui(eta.get(), 1) <= 0) throw Error(Errc::NonPositiveTerm, "eta must exceed 1");
  // Only the decimal conversion and each pow are rounded, so
  // |computed - eta^k| <= eta^k * (k + 2) * 2^(1 - prec).
  Terms out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mpfr_pow_ui(power.get(), eta.get(), k, MPFR_RNDN);
    mpfr_rint(nearest.get(), power.get(), MPFR_RNDN);
    // margin = 1/2 - |x - round(x)| - error bound, must stay >= 2^-8
    mpfr_sub(margin.get(), power.get(), nearest.get(), MPFR_RNDU);
    mpfr_abs(margin.get(), margin.get(), MPFR_RNDU);
    mpfr_d_sub(margin.get(), 0.5, margin.get(), MPFR_RNDD);
    mpfr_mul_ui(error_bound.get(), power.get(), static_cast<unsigned long>(k + 2), MPFR_RNDU);
    mpfr_div_2si(error_bound.get(), error_bound.get(), static_cast<long>(prec) - 1, MPFR_RNDU);
    mpfr_sub(margin.get(), margin.get(), error_bound.get(), MPFR_RNDD);
    if (mpfr_cmp_d(margin.get(), 1.0 / 256.0) < 0)
      throw Error(Errc::RoundingAmbiguous, "eta^" + std::to_string(k) + " is within 2^-8 of a half-integer at " +
                                               std::to_string(spec.precision_bits) + " bits");
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), nearest.get(), MPFR_RNDN);
    if (z < 1) throw Error(Errc::NonPositiveTerm, "round(eta^" + std::to_string(k) + ") is not positive");
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace detail

/// Exact first n terms of the sequence.
inline Terms generate_terms(const SequenceSpec& spec, std::size_t n) {
  if (n == 0) throw Error(Errc::TooShort, "n must be at least 1");
  struct Visitor {
    std::size_t n;
    Terms operator()(const seq::Explicit& e) const {
      if (e.values.size() < n)
        throw Error(Errc::TooShort, "explicit sequence has only " + std::to_string(e.values.size()) + " terms");
      return Terms(e.values.begin(), e.values.begin() + static_cast<std::ptrdiff_t>(n));
    }
    Terms operator()(const seq::Pow2Plus1&) const {
      Terms out;
      for (std::size_t k = 1; k <= n; ++k) {
        BigInt v = 1;
        v <<= k;
        out.push_back(v + 1);
      }
      return out;
    }
    Terms operator()(const seq::Fibonacci&) const { return detail::run_recurrence({-1, -1, 1}, {1, 1}, n); }
    Terms operator()(const seq::Lucas&) const { return detail::run_recurrence({-1, -1, 1}, {1, 3}, n); }
    Terms operator()(const seq::Geometric& g) const {
      Terms out;
      BigInt v = g.c;
      for (std::size_t k = 1; k <= n; ++k) {
        v *= g.eta;
        out.push_back(v);
      }
      return out;
    }
    Terms operator()(const seq::Recurrence& r) const { return detail::run_recurrence(r.minpoly, r.initial, n); }
    Terms operator()(const seq::RoundPow& r) const { return detail::round_powers(r, n); }
  };
  Terms out = std::visit(Visitor{n}, spec.kind);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k] < 1) throw Error(Errc::NonPositiveTerm, "a_" + std::to_string(k + 1) + " = " + out[k].get_str());
  return out;
}

/// min_k a_{k+1} / a_k.
inline Rational hadamard_ratio(const Terms& terms) {
  if (terms.size() < 2) throw Error(Errc::TooShort, "need at least two terms");
  Rational best(terms[1], terms[0]);
  for (std::size_t k = 1; k + 1 < terms.size(); ++k) {
    Rational r(terms[k + 1], terms[k]);
    if (r < best) best = r;
  }
  return best;
}

/// a_n / a_{n-1} in floating point. Diagnostic only.
inline double ratio_limit_estimate(const Terms& terms) {
  if (terms.size() < 2) throw Error(Errc::TooShort, "need at least two terms");
  return Rational(terms[terms.size() - 1], terms[terms.size() - 2]).to_double();
}

}  // namespace lacuna
