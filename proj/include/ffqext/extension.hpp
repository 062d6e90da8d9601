#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "ffqext/fourier.hpp"
#include "ffqext/incidence.hpp"
#include "ffqext/report.hpp"

namespace ffq {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);
// "a/b", "a" or "inf"/"infinity"
Rational parse_rational(std::string_view s);

// A Lebesgue exponent in [1, infinity], kept exact.
class Exponent {
 public:
  Exponent(Rational value);  // NOLINT: implicit from rationals is intended
  Exponent(std::int64_t value) : Exponent(Rational(value)) {}  // NOLINT
  static Exponent infinity();
  static Exponent parse(std::string_view s);

  bool is_infinite() const { return infinite_; }
  // Throws std::logic_error when infinite.
  const Rational& value() const;
  // 1/p, zero for p = infinity.
  Rational reciprocal() const;
  double to_double() const;
  std::string str() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  Rational value_{1};
  bool infinite_ = false;
};

struct ExponentPair {
  Exponent p;
  Exponent r;
};

// r >= (2d+2)/(d-1) and r >= p(d+1)/((p-1)(d-1)), exactly.
bool tomas_stein_predicate(const ExponentPair& e, int d);

// ((12d-8)/(9d-12), 4); throws std::invalid_argument unless d is even, >= 4.
ExponentPair main_theorem_exponent(int d);
// (4d-4)/(3d-5): the Tomas-Stein p at r = 4.
Rational tomas_stein_p_at_r4(int d);

// Necessary conditions for a variety of size ~ q^alpha containing an affine
// subspace of dimension k:  r >= 2d/alpha  and  r >= p(d-k)/((p-1)(alpha-k)).
// With k = 0 the second inequality is r >= dp/(alpha(p-1)).
class NecessaryConditions {
 public:
  // Throws std::invalid_argument unless 0 < alpha < d and 0 <= k < alpha.
  NecessaryConditions(Rational alpha, int k, int d);

  // alpha = d - 1, k = (d - 1)/2: spheres in odd d when -1 is a square.
  static NecessaryConditions odd_sphere(int d);
  // alpha = d - 1, k = (d - 2)/2: the even-dimensional conjecture.
  static NecessaryConditions even_conjecture(int d);

  // 2d / alpha
  Rational min_r() const;
  // (d - k) / (alpha - k)
  Rational factor() const;
  bool holds(const ExponentPair& e) const;
  // Smallest p with r >= p * factor / (p - 1) at this r, or nullopt if no
  // finite p satisfies it.
  std::optional<Rational> critical_p(const Exponent& r) const;

  const Rational& alpha() const { return alpha_; }
  int k() const { return k_; }
  int d() const { return d_; }

 private:
  Rational alpha_;
  int k_;
  int d_;
};

// Boundary polylines in the (1/p, 1/r) plane.
struct FigureVertex {
  std::string series;
  int vertex = 0;
  Rational inv_p;
  Rational inv_r;
};
// Series: tomas_stein, improved (even d >= 4), necessary_odd,
// conjecture_even. Every series starts at (0, 0) and ends at the trivial
// point (1, 0).
std::vector<FigureVertex> figure_data(int d);
void write_figure_csv(std::ostream& os, std::span<const FigureVertex> rows);

struct RatioReport {
  ExponentPair exponents{Exponent(1), Exponent(1)};
  std::uint32_t q = 0;
  int d = 0;
  std::uint32_t j = 0;
  std::string descriptor;
  double numerator = 0;    // ||(f dsigma)^||_{L^r(dm)}
  double denominator = 0;  // ||f||_{L^p(S, dsigma)}
  double ratio = 0;
  std::vector<std::uint64_t> support;  // witness support, point indices
};

// Throws std::invalid_argument if f vanishes identically.
RatioReport extension_ratio(const SurfaceFn& f, const ExponentPair& e,
                            std::string descriptor = "custom");

// q^{d/r} |S|^{1/p - 1}: the ratio of any singleton indicator.
double singleton_ratio(const SphereSet& s, const ExponentPair& e);

enum class RStarStrategy { singletons, full, caps, subspaces, random, ascent, all };
RStarStrategy parse_strategy(std::string_view s);
std::string_view to_string(RStarStrategy s);

// Best ratio found over the strategy's family of test functions. This is a
// lower bound for R*(p -> r), never an estimate of it. `budget` is the number
// of random candidates (random, subspaces) or coordinate-ascent steps.
RatioReport rstar_lower_bound(std::shared_ptr<const SphereSet> s, const ExponentPair& e,
                              RStarStrategy strategy, std::uint64_t seed,
                              std::uint64_t budget);

// Lambda_4(E) against |E|^{4/p} q^{3d-4} q^{(4-4d)/p}, p = (12d-8)/(9d-12).
BoundReport easyform_check(const PointSet& e, Witness w = {});

void write_ratio_csv_header(std::ostream& os);
void write_ratio_csv_row(std::ostream& os, const RatioReport& r);
void write_ratio_json(std::ostream& os, const RatioReport& r);

}  // namespace ffq
