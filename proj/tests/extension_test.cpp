#include "ffqext/extension.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace ffq {
namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

ExponentPair pair(Rational p, Rational r) { return {Exponent(p), Exponent(r)}; }

std::shared_ptr<const SphereSet> sphere_ptr(const char* spec, int d, int j) {
  const Field f = Field::parse(spec);
  return std::make_shared<const SphereSet>(sphere(f, d, f.from_int(j)));
}

TEST(ExponentTest, ParseAndPrint) {
  EXPECT_EQ(parse_rational("12/7"), R(12, 7));
  EXPECT_EQ(parse_rational("4"), R(4));
  EXPECT_EQ(parse_rational("10/6"), R(5, 3));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_EQ(to_string(R(5, 3)), "5/3");
  EXPECT_EQ(to_string(R(4)), "4");
  EXPECT_TRUE(Exponent::parse("inf").is_infinite());
  EXPECT_EQ(Exponent::parse("inf").reciprocal(), R(0));
  EXPECT_EQ(Exponent::parse("5/3").reciprocal(), R(3, 5));
  EXPECT_EQ(Exponent::parse("5/3").str(), "5/3");
  EXPECT_THROW(Exponent(R(1, 2)), std::invalid_argument);
  EXPECT_THROW(Exponent::infinity().value(), std::logic_error);
}

TEST(ExponentTest, TomasSteinPredicate) {
  EXPECT_TRUE(tomas_stein_predicate(pair(R(12, 7), R(4)), 4));
  EXPECT_FALSE(tomas_stein_predicate(pair(R(5, 3), R(4)), 4));
  EXPECT_TRUE(tomas_stein_predicate({Exponent(1), Exponent::infinity()}, 4));
  // Just below the first threshold 10/3.
  EXPECT_FALSE(tomas_stein_predicate({Exponent::infinity(), Exponent(R(10, 3) - R(1, 1000))}, 4));
  EXPECT_TRUE(tomas_stein_predicate({Exponent::infinity(), Exponent(R(10, 3))}, 4));
  EXPECT_FALSE(tomas_stein_predicate({Exponent(1), Exponent(4)}, 4));
}

TEST(ExponentTest, TomasSteinCornerIsOnTheBoundary) {
  for (int d = 2; d <= 20; ++d) {
    const Rational p = tomas_stein_p_at_r4(d);
    EXPECT_EQ(p, R(4 * d - 4, 3 * d - 5));
    if (R(2 * d + 2, d - 1) <= 4) {
      EXPECT_TRUE(tomas_stein_predicate(pair(p, R(4)), d));
      EXPECT_FALSE(tomas_stein_predicate(pair(p - R(1, 100000), R(4)), d));
    }
  }
}

TEST(ExponentTest, MainTheoremExponent) {
  EXPECT_EQ(main_theorem_exponent(4).p.value(), R(5, 3));
  EXPECT_EQ(main_theorem_exponent(4).r.value(), R(4));
  EXPECT_EQ(main_theorem_exponent(6).p.value(), R(32, 21));
  EXPECT_THROW(main_theorem_exponent(5), std::invalid_argument);
  EXPECT_THROW(main_theorem_exponent(2), std::invalid_argument);
  for (int d = 4; d <= 20; d += 2) {
    const Rational improved = main_theorem_exponent(d).p.value();
    EXPECT_EQ(improved, R(12 * d - 8, 9 * d - 12));
    EXPECT_LT(improved, tomas_stein_p_at_r4(d)) << d;
  }
}

TEST(NecessaryConditionsTest, OddSphereInThreeDimensions) {
  const auto nc = NecessaryConditions::odd_sphere(3);
  EXPECT_EQ(nc.min_r(), R(3));
  EXPECT_EQ(nc.factor(), R(2));
  // r >= 2p/(p-1): at p = 2 the boundary is r = 4.
  EXPECT_TRUE(nc.holds(pair(R(2), R(4))));
  EXPECT_FALSE(nc.holds(pair(R(2), R(4) - R(1, 1000))));
  EXPECT_FALSE(nc.holds({Exponent::infinity(), Exponent(R(3) - R(1, 1000))}));
  EXPECT_TRUE(nc.holds({Exponent::infinity(), Exponent(3)}));
  EXPECT_THROW(NecessaryConditions::odd_sphere(4), std::invalid_argument);
}

TEST(NecessaryConditionsTest, EvenConjectureAtFourDimensions) {
  const auto nc = NecessaryConditions::even_conjecture(4);
  EXPECT_EQ(nc.factor(), R(6, 4));
  // 4 = p * (3/2) / (p - 1)  =>  p = 8/5.
  const auto p = nc.critical_p(Exponent(4));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, R(8, 5));
  EXPECT_TRUE(nc.holds(pair(R(8, 5), R(4))));
  EXPECT_FALSE(nc.holds(pair(R(8, 5) - R(1, 1000), R(4))));
  // The improved exponent 5/3 lies inside the conjectured region.
  EXPECT_TRUE(nc.holds(main_theorem_exponent(4)));
  // r at or below the factor admits no finite p.
  EXPECT_FALSE(nc.critical_p(Exponent(R(3, 2))).has_value());
}

TEST(NecessaryConditionsTest, SpecialisationsMatchGeneralForm) {
  for (int d = 3; d <= 11; d += 2) {
    EXPECT_EQ(NecessaryConditions::odd_sphere(d).factor(), R(d + 1, d - 1));
    EXPECT_EQ(NecessaryConditions::odd_sphere(d).min_r(), R(2 * d, d - 1));
  }
  for (int d = 2; d <= 12; d += 2) {
    EXPECT_EQ(NecessaryConditions::even_conjecture(d).factor(), R(d + 2, d));
  }
  // k = 0: r >= dp / (alpha (p - 1)).
  const NecessaryConditions k0(R(7, 2), 0, 5);
  EXPECT_EQ(k0.factor(), R(5) / R(7, 2));
  const ExponentPair e = pair(R(3), R(4));
  const bool expected = R(4) >= R(10, 7) && R(4) >= R(5) * R(3) / (R(7, 2) * R(2));
  EXPECT_EQ(k0.holds(e), expected);
  EXPECT_THROW(NecessaryConditions(R(5), 0, 5), std::invalid_argument);
  EXPECT_THROW(NecessaryConditions(R(3), 3, 5), std::invalid_argument);
}

TEST(FigureTest, CornersAtFourDimensions) {
  const auto rows = figure_data(4);
  auto has = [&](const std::string& series, Rational x, Rational y) {
    for (const auto& v : rows)
      if (v.series == series && v.inv_p == x && v.inv_r == y) return true;
    return false;
  };
  EXPECT_TRUE(has("tomas_stein", R(7, 12), R(1, 4)));
  EXPECT_TRUE(has("improved", R(3, 5), R(1, 4)));
  EXPECT_TRUE(has("conjecture_even", R(5, 8), R(1, 4)));
  for (const std::string s : {"tomas_stein", "improved", "necessary_odd", "conjecture_even"}) {
    EXPECT_TRUE(has(s, 0, 0)) << s;
    EXPECT_TRUE(has(s, 1, 0)) << s;
  }
}

TEST(FigureTest, ImprovedSeriesOnlyForEvenDimensions) {
  for (int d : {3, 5}) {
    for (const auto& v : figure_data(d)) EXPECT_NE(v.series, "improved");
  }
  std::stringstream ss;
  const auto rows = figure_data(6);
  write_figure_csv(ss, rows);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "series,vertex,inv_p,inv_r,inv_p_value,inv_r_value");
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "tomas_stein,0,0,0,0,0");
}

TEST(ExtensionRatioTest, FullSphereAtLeastOne) {
  const auto s = sphere_ptr("5", 4, 1);
  const auto rep = extension_ratio(SurfaceFn::ones(s), main_theorem_exponent(4));
  EXPECT_NEAR(rep.denominator, 1.0, 1e-12);
  EXPECT_GE(rep.ratio, 1.0);
  EXPECT_EQ(rep.support.size(), s->size());
}

TEST(ExtensionRatioTest, SingletonClosedForm) {
  for (const char* spec : {"3", "5", "7"}) {
    for (int d = 2; d <= 4; ++d) {
      if (std::string(spec) == "7" && d == 4) continue;  // checked below at one point
      const auto s = sphere_ptr(spec, d, 1);
      for (const auto& e : {pair(R(5, 3), R(4)), pair(R(2), R(3)), pair(R(7, 5), R(9, 2))}) {
        const std::size_t pos[] = {s->size() / 2};
        const auto rep = extension_ratio(SurfaceFn::indicator(s, pos), e);
        EXPECT_NEAR(rep.ratio, singleton_ratio(*s, e), 1e-9 * rep.ratio);
      }
    }
  }
  const auto s = sphere_ptr("7", 4, 3);
  const std::size_t pos[] = {0};
  const auto e = main_theorem_exponent(4);
  EXPECT_NEAR(extension_ratio(SurfaceFn::indicator(s, pos), e).ratio, singleton_ratio(*s, e),
              1e-9 * singleton_ratio(*s, e));
}

TEST(ExtensionRatioTest, CircleAgainstBruteForce) {
  // E = S_1 in F_3^2, p = 2, r = 4, recomputed straight from the definitions.
  const Field f(3);
  const auto s = sphere_ptr("3", 2, 1);
  const Space& space = s->space();
  double num = 0;
  for (std::uint64_t m = 0; m < space.size(); ++m) {
    Complex acc = 0;
    for (auto x : s->indices()) {
      acc += f.chi(f.neg(space.dot(space.point(x), space.point(m))));
    }
    num += std::pow(std::abs(acc / 4.0), 4);
  }
  const double expected = std::pow(num, 0.25) / 1.0;
  const auto rep = extension_ratio(SurfaceFn::ones(s), pair(R(2), R(4)));
  EXPECT_NEAR(rep.ratio, expected, 1e-12);
}

TEST(ExtensionRatioTest, MonotoneInExponentsAndScaleInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  const auto s = sphere_ptr("5", 3, 2);
  for (int t = 0; t < 5; ++t) {
    std::vector<Complex> v(s->size());
    for (auto& z : v) z = {nd(rng), nd(rng)};
    const SurfaceFn f(s, v);
    const auto lo_p = extension_ratio(f, pair(R(3, 2), R(4)));
    const auto hi_p = extension_ratio(f, pair(R(3), R(4)));
    // Norms on a probability space grow with p, so the ratio can only drop.
    EXPECT_GE(hi_p.denominator, lo_p.denominator * (1 - 1e-12));
    EXPECT_LE(hi_p.ratio, lo_p.ratio * (1 + 1e-12));
    const auto hi_r = extension_ratio(f, pair(R(2), R(6)));
    const auto lo_r = extension_ratio(f, pair(R(2), R(3)));
    EXPECT_LE(hi_r.numerator, lo_r.numerator * (1 + 1e-12));

    std::vector<Complex> w = v;
    const Complex c = std::polar(2.5, 0.7);
    for (auto& z : w) z *= c;
    EXPECT_NEAR(extension_ratio(SurfaceFn(s, w), pair(R(3, 2), R(4))).ratio, lo_p.ratio,
                1e-10 * lo_p.ratio);
  }
}

TEST(ExtensionRatioTest, ZeroFunctionRejected) {
  const auto s = sphere_ptr("3", 2, 1);
  EXPECT_THROW(extension_ratio(SurfaceFn(s, std::vector<Complex>(s->size())), pair(R(2), R(4))),
               std::invalid_argument);
}

TEST(RStarTest, StrategyNames) {
  for (auto st : {RStarStrategy::singletons, RStarStrategy::full, RStarStrategy::caps,
                  RStarStrategy::subspaces, RStarStrategy::random, RStarStrategy::ascent,
                  RStarStrategy::all}) {
    EXPECT_EQ(parse_strategy(to_string(st)), st);
  }
  EXPECT_THROW(parse_strategy("simulated_annealing"), std::invalid_argument);
}

TEST(RStarTest, StrategiesAtTheImprovedExponent) {
  const auto s = sphere_ptr("3", 4, 1);
  const auto e = main_theorem_exponent(4);
  const auto single = rstar_lower_bound(s, e, RStarStrategy::singletons, 1, 8);
  EXPECT_NEAR(single.ratio, singleton_ratio(*s, e), 1e-9 * single.ratio);
  EXPECT_EQ(single.support.size(), 1u);
  EXPECT_GE(rstar_lower_bound(s, e, RStarStrategy::full, 1, 8).ratio, 1.0);

  double best_single = 0;
  for (auto st : {RStarStrategy::singletons, RStarStrategy::full, RStarStrategy::caps,
                  RStarStrategy::subspaces, RStarStrategy::random, RStarStrategy::ascent}) {
    const auto rep = rstar_lower_bound(s, e, st, 7, 16);
    EXPECT_GT(rep.ratio, 0.0) << to_string(st);
    EXPECT_LE(rep.ratio, 16.0) << to_string(st);
    best_single = std::max(best_single, rep.ratio);
  }
  const auto all = rstar_lower_bound(s, e, RStarStrategy::all, 7, 16);
  EXPECT_LE(all.ratio, 16.0);
  EXPECT_GE(all.ratio, rstar_lower_bound(s, e, RStarStrategy::caps, 7, 16).ratio);
}

TEST(RStarTest, Deterministic) {
  const auto s = sphere_ptr("5", 2, 1);
  const auto e = pair(R(2), R(4));
  const auto a = rstar_lower_bound(s, e, RStarStrategy::all, 3, 20);
  const auto b = rstar_lower_bound(s, e, RStarStrategy::all, 3, 20);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.descriptor, b.descriptor);
  EXPECT_EQ(a.support, b.support);
}

TEST(EasyformTest, SingletonAndFullSphere) {
  const Field f(3);
  const SphereSet s(Space(f, 4), f.one());
  const auto one = easyform_check(PointSet::on_sphere(s, {s.indices()[0]}));
  EXPECT_DOUBLE_EQ(one.value, 1.0);
  // 3^{8 + (4 - 16) * 3/5} = 3^{4/5}
  EXPECT_NEAR(one.bound, std::pow(3.0, 0.8), 1e-12);
  const auto full = easyform_check(PointSet::on_sphere(s, s.indices()));
  EXPECT_LE(full.ratio, 16.0);
  EXPECT_NEAR(full.bound, std::pow(static_cast<double>(s.size()), 2.4) * std::pow(3.0, 0.8),
              1e-9 * full.bound);
}

TEST(RatioOutputTest, CsvAndJson) {
  const auto s = sphere_ptr("3", 2, 1);
  const auto rep = extension_ratio(SurfaceFn::ones(s), pair(R(5, 3), R(4)), "full");
  std::stringstream csv;
  write_ratio_csv_header(csv);
  write_ratio_csv_row(csv, rep);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "p,r,q,d,j,descriptor,numerator,denominator,ratio");
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("5/3,4,3,2,1,full,", 0), 0u) << line;

  std::stringstream js;
  write_ratio_json(js, rep);
  EXPECT_NE(js.str().find("\"descriptor\""), std::string::npos);
}

}  // namespace
}  // namespace ffq
