#include "ffqext/charsums.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

namespace ffq {
namespace {

constexpr double kTol = 1e-9;

std::complex<double> e(double num, double den) {
  return std::polar(1.0, 2 * std::numbers::pi * num / den);
}

TEST(CharSumsTest, GaussSumExamples) {
  Field f3(3);
  // t = 1: eta(1) chi(1); t = 2: eta(2) chi(2) = -e(2/3).
  const auto g = gauss_sum(f3, f3.one()).value;
  EXPECT_LT(std::abs(g - (e(1, 3) - e(2, 3))), kTol);
  EXPECT_LT(std::abs(g - std::complex<double>(0, std::sqrt(3.0))), kTol);

  EXPECT_LT(std::abs(gauss_sum(f3, f3.zero()).value), kTol);

  Field f5(5);
  EXPECT_NEAR(gauss_sum(f5, f5.one()).modulus(), std::sqrt(5.0), kTol);
}

TEST(CharSumsTest, KloostermanExamples) {
  Field f3(3);
  // t = 1: chi(2); t = 2: chi(2 + 2) = chi(1).
  const auto k = kloosterman(f3, f3.one(), f3.one()).value;
  EXPECT_LT(std::abs(k - (e(2, 3) + e(1, 3))), kTol);
  EXPECT_LT(std::abs(k - (-1.0)), kTol);

  Field f7(7);
  EXPECT_LT(std::abs(kloosterman(f7, f7.zero(), f7.zero()).value - 6.0), kTol);
  EXPECT_LE(kloosterman(f7, f7.one(), f7.from_int(2)).modulus(), 2 * std::sqrt(7.0) + kTol);
}

TEST(CharSumsTest, SalieExamples) {
  Field f5(5);
  EXPECT_LT(std::abs(salie(f5, f5.zero(), f5.zero()).value), kTol);
  Field f3(3);
  EXPECT_LT(std::abs(salie(f3, f3.one(), f3.zero()).value - gauss_sum(f3, f3.one()).value), kTol);
  EXPECT_LE(salie(f5, f5.from_int(2), f5.from_int(3)).modulus(), 2 * std::sqrt(5.0) + kTol);
}

TEST(CharSumsTest, SquareGaussExamples) {
  Field f3(3);
  // 1 + chi(1) + chi(4) = 1 + 2 e(1/3).
  const auto v = square_gauss(f3, f3.one()).value;
  EXPECT_LT(std::abs(v - (1.0 + 2.0 * e(1, 3))), kTol);
  EXPECT_LT(std::abs(v - std::complex<double>(0, std::sqrt(3.0))), kTol);

  Field f5(5);
  EXPECT_LT(std::abs(square_gauss(f5, f5.one()).value - gauss_sum(f5, f5.one()).value), kTol);

  Field f7(7);
  const Elem nonsquare = f7.from_int(3);  // 3^3 = 27 = -1 mod 7
  EXPECT_EQ(f7.eta(nonsquare), -1);
  EXPECT_LT(std::abs(square_gauss(f7, nonsquare).value + gauss_sum(f7, f7.one()).value), kTol);

  EXPECT_THROW(square_gauss(f7, f7.zero()), std::invalid_argument);
}

// Classical exact statements over every q <= 49 with p odd.
class CharSumBounds : public ::testing::TestWithParam<const char*> {};

TEST_P(CharSumBounds, AllParameters) {
  const Field f = Field::parse(GetParam());
  const double sq = std::sqrt(static_cast<double>(f.q()));
  for (std::uint32_t a = 0; a < f.q(); ++a) {
    const Elem ea{a};
    if (a != 0) {
      EXPECT_NEAR(gauss_sum(f, ea).modulus(), sq, kTol);
      EXPECT_LT(square_gauss_identity_error(f, ea), kTol);
    }
    for (std::uint32_t b = 0; b < f.q(); ++b) {
      const Elem eb{b};
      if (a != 0 && b != 0) EXPECT_LE(kloosterman(f, ea, eb).modulus(), 2 * sq + kTol);
      if (a != 0 || b != 0) EXPECT_LE(salie(f, ea, eb).modulus(), 2 * sq + kTol);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(UpTo49, CharSumBounds,
                         ::testing::Values("3", "5", "7", "9", "11", "13", "17", "19", "23",
                                           "25", "27", "29", "31", "37", "41", "43", "47",
                                           "49"));

}  // namespace
}  // namespace ffq
