#include <gtest/gtest.h>

#include "ratebound/rational.hpp"

using ratebound::Rational;

TEST(Rational, NormalizesSignAndGcd) {
  Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(r.str(), "-3/4");
  EXPECT_EQ(Rational(0, 5).str(), "0/1");
}

TEST(Rational, ParseRoundTrip) {
  EXPECT_EQ(Rational::parse("3/8"), Rational(3, 8));
  EXPECT_EQ(Rational::parse("2/4").str(), "1/2");
  EXPECT_EQ(Rational::parse("5"), Rational(5));
  EXPECT_THROW(Rational::parse("1/0"), std::domain_error);
  EXPECT_ANY_THROW(Rational::parse("1 /2"));
  EXPECT_ANY_THROW(Rational::parse("abc"));
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(1, 2) - Rational(3, 4), Rational(-1, 4));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, OrderingIsExact) {
  // Close values that a double cannot separate reliably.
  Rational a(1, 3), b(333333333333333333LL, 1000000000000000000LL);
  EXPECT_LT(b, a);
  EXPECT_GT(Rational(7, 8), Rational(6, 7));
  EXPECT_EQ(Rational(2, 4) <=> Rational(1, 2), std::strong_ordering::equal);
}

TEST(Rational, OverflowIsReported) {
  Rational big(ratebound::Int128{1} << 100, 1);
  EXPECT_THROW(big * big, std::overflow_error);
}

TEST(Rational, ToDouble) {
  EXPECT_DOUBLE_EQ(Rational(1, 8).to_double(), 0.125);
  EXPECT_DOUBLE_EQ(Rational(-5, 4).to_double(), -1.25);
}
