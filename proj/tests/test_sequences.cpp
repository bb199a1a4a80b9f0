#include <gtest/gtest.h>

#include <cmath>

#include "lacuna/sequences.hpp"

namespace lacuna {
namespace {

Terms ints(std::initializer_list<long> v) {
  Terms out;
  for (long x : v) out.emplace_back(x);
  return out;
}

Terms terms_of(std::string_view text, std::size_t n) { return generate_terms(parse_sequence(text), n); }

TEST(GenerateTerms, Examples) {
  EXPECT_EQ(terms_of("pow2plus1", 3), ints({3, 5, 9}));
  EXPECT_EQ(terms_of("fibonacci", 5), ints({1, 1, 2, 3, 5}));
  EXPECT_EQ(terms_of("lucas", 4), ints({1, 3, 4, 7}));
  EXPECT_EQ(terms_of("roundpow:eta=3.14159265358979323846264338327950288,prec=128", 3), ints({3, 10, 31}));
  EXPECT_EQ(terms_of("geometric:c=3,eta=5", 3), ints({15, 75, 375}));
  EXPECT_EQ(terms_of("explicit:4,6,7", 2), ints({4, 6}));
}

TEST(GenerateTerms, LucasMatchesBinetRecurrence) {
  const Terms l = terms_of("lucas", 30);
  for (std::size_t k = 2; k < l.size(); ++k) EXPECT_EQ(l[k], l[k - 1] + l[k - 2]);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  EXPECT_EQ(l[19], BigInt(static_cast<long>(std::llround(std::pow(phi, 20)))));
}

TEST(GenerateTerms, Errors) {
  EXPECT_THROW(terms_of("fibonacci", 0), Error);
  try {
    terms_of("explicit:1,2", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooShort);
  }
  try {
    terms_of("recurrence:poly=-1,0,2;init=1,2", 4);  // 2 a_3 = 1
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonIntegerRecurrence);
  }
  try {
    terms_of("recurrence:poly=1,1,1;init=1,1", 4);  // a_3 = -2
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPositiveTerm);
  }
  try {
    terms_of("explicit:3,0,9", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPositiveTerm);
  }
  try {
    terms_of("roundpow:eta=1.5", 2);  // 1.5 is a half-integer
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RoundingAmbiguous);
  }
}

TEST(GenerateTerms, RoundPowNeedsEnoughPrecision) {
  // pi^60 needs about 100 bits before the fractional part is visible.
  EXPECT_NO_THROW(terms_of("roundpow:eta=3.14159265358979323846264338327950288419716939937510,prec=256", 60));
  try {
    terms_of("roundpow:eta=3.14159265358979323846264338327950288419716939937510,prec=64", 60);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RoundingAmbiguous);
  }
}

TEST(GenerateTerms, RecurrenceVariantReproducesFibonacci) {
  const Terms fib = terms_of("fibonacci", 64);
  const Terms rec = terms_of("recurrence:poly=-1,-1,1;init=1,1", 64);
  for (std::size_t n = 1; n <= 64; ++n) EXPECT_EQ(terms_of("recurrence:poly=-1,-1,1;init=1,1", n), Terms(fib.begin(), fib.begin() + n));
  EXPECT_EQ(rec, fib);
  EXPECT_EQ(fib[63], parse_bigint("10610209857723"));
}

TEST(GenerateTerms, IntegerRoundPowIsGeometric) {
  for (int eta : {2, 3, 7}) {
    const std::string e = std::to_string(eta);
    EXPECT_EQ(terms_of("roundpow:eta=" + e, 30), terms_of("geometric:c=1,eta=" + e, 30)) << eta;
  }
}

TEST(GenerateTerms, Deterministic) {
  for (const char* s : {"lucas", "roundpow:eta=2.7,prec=96", "geometric:c=2,eta=3"})
    EXPECT_EQ(terms_of(s, 20), terms_of(s, 20));
}

TEST(ParseSequence, RoundTripsThroughDescribe) {
  for (const char* s : {"pow2plus1", "fibonacci", "lucas", "geometric:c=1,eta=2", "recurrence:poly=-1,-1,1;init=1,1",
                        "explicit:3,5,9", "roundpow:eta=3.14159265358979323846,prec=128"}) {
    EXPECT_EQ(describe(parse_sequence(s)), s);
  }
  EXPECT_EQ(describe(parse_sequence("geometric")), "geometric:c=1,eta=2");
  EXPECT_EQ(describe(parse_sequence("roundpow:eta=2.5")), "roundpow:eta=2.5,prec=128");
}

TEST(ParseSequence, RejectsMalformedInput) {
  for (const char* s : {"", "fib", "pow2plus1:3", "explicit:", "explicit:1,x", "geometric:eta=1", "geometric:c=0",
                        "geometric:q=3", "recurrence:poly=1,1", "recurrence:poly=-1,-1,1;init=1",
                        "recurrence:poly=1,0;init=1", "roundpow:prec=64", "roundpow:eta=2,prec=3"}) {
    try {
      parse_sequence(s);
      ADD_FAILURE() << "accepted '" << s << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Parse) << s;
    }
  }
}

TEST(HadamardRatio, Examples) {
  EXPECT_EQ(hadamard_ratio(ints({2, 4, 8})), Rational(2));
  EXPECT_EQ(hadamard_ratio(terms_of("fibonacci", 5)), Rational(1));
  EXPECT_EQ(hadamard_ratio(terms_of("pow2plus1", 4)), Rational(BigInt(5), BigInt(3)));
  EXPECT_THROW(hadamard_ratio(ints({7})), Error);
}

TEST(RatioLimitEstimate, Examples) {
  EXPECT_DOUBLE_EQ(ratio_limit_estimate(terms_of("geometric:c=1,eta=2", 10)), 2.0);
  EXPECT_NEAR(ratio_limit_estimate(terms_of("fibonacci", 20)), (1 + std::sqrt(5.0)) / 2, 1e-4);
  EXPECT_NEAR(ratio_limit_estimate(terms_of("pow2plus1", 20)), 2.0, 1e-4);
  EXPECT_THROW(ratio_limit_estimate(ints({1})), Error);
}

}  // namespace
}  // namespace lacuna
