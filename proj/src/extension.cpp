#include "ffqext/extension.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace ffq {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_i64(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad rational: '" + std::string(s) + "'");
  }
  return v;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

Rational parse_rational(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_i64(s));
  const auto den = parse_i64(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(parse_i64(s.substr(0, slash)), den);
}

// ---------------------------------------------------------------------------

Exponent::Exponent(Rational value) : value_(value) {
  if (value_ < 1) throw std::invalid_argument("exponents must be >= 1");
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  return e;
}

Exponent Exponent::parse(std::string_view s) {
  if (s == "inf" || s == "infinity") return infinity();
  return Exponent(parse_rational(s));
}

const Rational& Exponent::value() const {
  if (infinite_) throw std::logic_error("infinite exponent has no rational value");
  return value_;
}

Rational Exponent::reciprocal() const {
  return infinite_ ? Rational(0) : Rational(1) / value_;
}

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : ffq::to_double(value_);
}

std::string Exponent::str() const { return infinite_ ? "inf" : to_string(value_); }

// ---------------------------------------------------------------------------
// Predicates are evaluated on (x, y) = (1/p, 1/r), where every condition is
// linear: r >= A is y <= 1/A, and r >= c p/(p-1) is y <= (1 - x)/c.

bool tomas_stein_predicate(const ExponentPair& e, int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  const Rational x = e.p.reciprocal();
  const Rational y = e.r.reciprocal();
  return y <= Rational(d - 1, 2 * d + 2) && y <= (1 - x) * Rational(d - 1, d + 1);
}

ExponentPair main_theorem_exponent(int d) {
  if (d < 4 || d % 2 != 0) {
    throw std::invalid_argument("the improved exponent needs even d >= 4");
  }
  return {Exponent(Rational(12 * d - 8, 9 * d - 12)), Exponent(4)};
}

Rational tomas_stein_p_at_r4(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  return Rational(4 * d - 4, 3 * d - 5);
}

NecessaryConditions::NecessaryConditions(Rational alpha, int k, int d)
    : alpha_(alpha), k_(k), d_(d) {
  if (!(alpha > 0 && alpha < d)) throw std::invalid_argument("need 0 < alpha < d");
  if (!(k >= 0 && Rational(k) < alpha)) throw std::invalid_argument("need 0 <= k < alpha");
}

NecessaryConditions NecessaryConditions::odd_sphere(int d) {
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("odd_sphere needs odd d >= 3");
  return NecessaryConditions(Rational(d - 1), (d - 1) / 2, d);
}

NecessaryConditions NecessaryConditions::even_conjecture(int d) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("even_conjecture needs even d >= 2");
  return NecessaryConditions(Rational(d - 1), (d - 2) / 2, d);
}

Rational NecessaryConditions::min_r() const { return Rational(2 * d_) / alpha_; }

Rational NecessaryConditions::factor() const {
  return Rational(d_ - k_) / (alpha_ - k_);
}

bool NecessaryConditions::holds(const ExponentPair& e) const {
  const Rational x = e.p.reciprocal();
  const Rational y = e.r.reciprocal();
  return y <= 1 / min_r() && y <= (1 - x) / factor();
}

std::optional<Rational> NecessaryConditions::critical_p(const Exponent& r) const {
  // y <= (1 - x)/c  <=>  x <= 1 - c y
  const Rational bound = 1 - factor() * r.reciprocal();
  if (bound <= 0) return std::nullopt;
  return 1 / bound;
}

// ---------------------------------------------------------------------------

std::vector<FigureVertex> figure_data(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  std::vector<FigureVertex> rows;
  auto emit = [&](const std::string& series, std::vector<std::pair<Rational, Rational>> pts) {
    int k = 0;
    for (auto& [x, y] : pts) rows.push_back({series, k++, x, y});
  };
  const Rational quarter(1, 4);

  const Rational ts_top(d - 1, 2 * d + 2);
  std::vector<std::pair<Rational, Rational>> ts = {{0, 0}, {0, ts_top}, {Rational(1, 2), ts_top}};
  if (quarter < ts_top) ts.emplace_back(1 / tomas_stein_p_at_r4(d), quarter);
  ts.emplace_back(1, 0);
  emit("tomas_stein", ts);

  if (d >= 4 && d % 2 == 0) {
    const auto p0 = main_theorem_exponent(d).p.value();
    emit("improved",
         {{0, 0}, {0, ts_top}, {Rational(1, 2), ts_top}, {1 / p0, quarter}, {1, 0}});
  }

  const Rational nec_top(d - 1, 2 * d);
  {
    // Odd-dimensional sphere: factor (d+1)/(d-1).
    const Rational c(d + 1, d - 1);
    std::vector<std::pair<Rational, Rational>> pts = {{0, 0}, {0, nec_top}, {1 - c * nec_top, nec_top}};
    if (quarter < nec_top) pts.emplace_back(1 - c * quarter, quarter);
    pts.emplace_back(1, 0);
    emit("necessary_odd", pts);
  }
  {
    // Even-dimensional conjecture: factor (d+2)/d.
    const Rational c(d + 2, d);
    std::vector<std::pair<Rational, Rational>> pts = {{0, 0}, {0, nec_top}, {1 - c * nec_top, nec_top}};
    if (quarter < nec_top) pts.emplace_back(1 - c * quarter, quarter);
    pts.emplace_back(1, 0);
    emit("conjecture_even", pts);
  }
  return rows;
}

void write_figure_csv(std::ostream& os, std::span<const FigureVertex> rows) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "series,vertex,inv_p,inv_r,inv_p_value,inv_r_value\n";
  for (const auto& v : rows) {
    os << v.series << ',' << v.vertex << ',' << to_string(v.inv_p) << ','
       << to_string(v.inv_r) << ',' << to_double(v.inv_p) << ',' << to_double(v.inv_r)
       << '\n';
  }
  os.precision(old);
}

// ---------------------------------------------------------------------------

RatioReport extension_ratio(const SurfaceFn& f, const ExponentPair& e,
                            std::string descriptor) {
  const SphereSet& s = *f.surface;
  const double den = lp_norm_surface(f, e.p.to_double());
  if (!(den > 0)) throw std::invalid_argument("extension ratio of the zero function");
  const GridFn hat = surface_measure_transform(f);
  RatioReport rep;
  rep.exponents = e;
  rep.q = s.space().q();
  rep.d = s.dim();
  rep.j = s.radius().v;
  rep.descriptor = std::move(descriptor);
  rep.numerator = lr_norm_phase(hat, e.r.to_double());
  rep.denominator = den;
  rep.ratio = rep.numerator / rep.denominator;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (f.values[k] != Complex{}) rep.support.push_back(s.indices()[k]);
  }
  return rep;
}

double singleton_ratio(const SphereSet& s, const ExponentPair& e) {
  const double q = s.space().q();
  const double n = static_cast<double>(s.size());
  return std::pow(q, s.dim() * to_double(e.r.reciprocal())) *
         std::pow(n, to_double(e.p.reciprocal()) - 1.0);
}

RStarStrategy parse_strategy(std::string_view s) {
  for (auto st : {RStarStrategy::singletons, RStarStrategy::full, RStarStrategy::caps,
                  RStarStrategy::subspaces, RStarStrategy::random, RStarStrategy::ascent,
                  RStarStrategy::all}) {
    if (to_string(st) == s) return st;
  }
  throw std::invalid_argument("unknown strategy: '" + std::string(s) + "'");
}

std::string_view to_string(RStarStrategy s) {
  switch (s) {
    case RStarStrategy::singletons: return "singletons";
    case RStarStrategy::full: return "full";
    case RStarStrategy::caps: return "caps";
    case RStarStrategy::subspaces: return "subspaces";
    case RStarStrategy::random: return "random";
    case RStarStrategy::ascent: return "ascent";
    case RStarStrategy::all: return "all";
  }
  return "?";
}

namespace {

using SpherePtr = std::shared_ptr<const SphereSet>;

SurfaceFn indicator_of(const SpherePtr& s, std::span<const std::uint64_t> indices) {
  std::vector<std::size_t> pos;
  for (auto idx : indices) {
    if (auto k = s->position(idx)) pos.push_back(*k);
  }
  return SurfaceFn::indicator(s, pos);
}

// Keeps the larger ratio; ties go to the earlier candidate.
void consider(RatioReport& best, bool& have, RatioReport cand) {
  if (!have || cand.ratio > best.ratio) {
    best = std::move(cand);
    have = true;
  }
}

void scan_singletons(const SpherePtr& s, const ExponentPair& e, RatioReport& best, bool& have) {
  for (std::size_t k = 0; k < s->size(); ++k) {
    const std::size_t pos[] = {k};
    consider(best, have, extension_ratio(SurfaceFn::indicator(s, pos), e, "singleton"));
  }
}

void scan_caps(const SpherePtr& s, const ExponentPair& e, RatioReport& best, bool& have) {
  const Space& space = s->space();
  for (int axis = 0; axis < space.dim(); ++axis) {
    for (std::uint32_t c = 0; c < space.q(); ++c) {
      std::vector<std::size_t> pos;
      for (std::size_t k = 0; k < s->size(); ++k) {
        if (space.coord(s->indices()[k], axis).v == c) pos.push_back(k);
      }
      if (pos.empty()) continue;
      consider(best, have,
               extension_ratio(SurfaceFn::indicator(s, pos), e,
                               "cap:x" + std::to_string(axis + 1) + "=" + std::to_string(c)));
    }
  }
}

void scan_subspaces(const SpherePtr& s, const ExponentPair& e, std::mt19937_64& rng,
                    std::uint64_t budget, RatioReport& best, bool& have) {
  const Space& space = s->space();
  const auto found = max_affine_in_sphere(*s, 16, rng());
  if (found.witness) {
    const auto f = indicator_of(s, found.witness->point_indices());
    consider(best, have,
             extension_ratio(f, e, "subspace_in_sphere:k=" + std::to_string(found.best_k)));
  }
  for (std::uint64_t t = 0; t < budget; ++t) {
    const int k = 1 + static_cast<int>(t % static_cast<std::uint64_t>(space.dim()));
    const auto h = AffineSubspace::random(space, k, rng);
    const auto f = indicator_of(s, h.point_indices());
    if (std::all_of(f.values.begin(), f.values.end(), [](Complex c) { return c == Complex{}; })) {
      continue;
    }
    consider(best, have, extension_ratio(f, e, "subspace_slice:k=" + std::to_string(k)));
  }
}

void scan_random(const SpherePtr& s, const ExponentPair& e, std::mt19937_64& rng,
                 std::uint64_t budget, RatioReport& best, bool& have) {
  const std::size_t n = s->size();
  for (std::uint64_t t = 0; t < budget; ++t) {
    // Sizes from a geometric ladder between 1 and |S|.
    const double frac = budget > 1 ? static_cast<double>(t % 8) / 7.0 : 1.0;
    const auto size = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(std::pow(static_cast<double>(n), frac))), 1, n);
    std::vector<std::size_t> pool(n);
    for (std::size_t k = 0; k < n; ++k) pool[k] = k;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(size);
    consider(best, have,
             extension_ratio(SurfaceFn::indicator(s, pool), e, "random:" + std::to_string(size)));
  }
}

// Random complex start, then single-point perturbations kept only when the
// ratio increases. The transform is updated incrementally.
void coordinate_ascent(const SpherePtr& s, const ExponentPair& e, std::mt19937_64& rng,
                       std::uint64_t budget, RatioReport& best, bool& have) {
  const Space& space = s->space();
  const Field& field = space.field();
  const std::size_t n = s->size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<Complex> f(n);
  for (auto& c : f) c = {gauss(rng), gauss(rng)};
  SurfaceFn start(s, f);
  GridFn hat = surface_measure_transform(start);
  const double p = e.p.to_double();
  const double r = e.r.to_double();
  const double inv_size = 1.0 / static_cast<double>(n);

  auto ratio_of = [&](const GridFn& h, const std::vector<Complex>& v) {
    double den = 0;
    if (std::isinf(p)) {
      den = linf_norm(v);
    } else {
      for (auto c : v) den += std::pow(std::abs(c), p);
      den = std::pow(den * inv_size, 1.0 / p);
    }
    return lr_norm_phase(h, r) / den;
  };
  double current = ratio_of(hat, f);

  std::vector<Complex> row(space.size());
  for (std::uint64_t step = 0; step < budget; ++step) {
    const std::size_t k = pick(rng);
    const FVector x = s->point(k);
    const Complex delta{gauss(rng), gauss(rng)};
    for (std::uint64_t m = 0; m < space.size(); ++m) {
      row[m] = field.chi(field.neg(space.dot(x, space.point(m)))) * inv_size;
    }
    GridFn trial = hat;
    for (std::uint64_t m = 0; m < space.size(); ++m) trial[m] += delta * row[m];
    f[k] += delta;
    const double cand = ratio_of(trial, f);
    if (cand > current) {
      current = cand;
      hat = std::move(trial);
    } else {
      f[k] -= delta;
    }
  }
  // Recompute from scratch so the report does not carry incremental drift.
  consider(best, have, extension_ratio(SurfaceFn(s, f), e, "ascent"));
}

}  // namespace

RatioReport rstar_lower_bound(std::shared_ptr<const SphereSet> s, const ExponentPair& e,
                              RStarStrategy strategy, std::uint64_t seed,
                              std::uint64_t budget) {
  if (!s || s->size() == 0) throw std::invalid_argument("empty surface");
  std::mt19937_64 rng(seed);
  RatioReport best;
  bool have = false;
  const bool all = strategy == RStarStrategy::all;
  if (all || strategy == RStarStrategy::singletons) scan_singletons(s, e, best, have);
  if (all || strategy == RStarStrategy::full) {
    consider(best, have, extension_ratio(SurfaceFn::ones(s), e, "full"));
  }
  if (all || strategy == RStarStrategy::caps) scan_caps(s, e, best, have);
  if (all || strategy == RStarStrategy::subspaces) scan_subspaces(s, e, rng, budget, best, have);
  if (all || strategy == RStarStrategy::random) scan_random(s, e, rng, budget, best, have);
  if (all || strategy == RStarStrategy::ascent) coordinate_ascent(s, e, rng, budget, best, have);
  return best;
}

BoundReport easyform_check(const PointSet& e, Witness w) {
  const int d = e.space().dim();
  const double q = e.space().q();
  const Rational p = main_theorem_exponent(d).p.value();
  const double four_over_p = to_double(Rational(4) / p);
  const double q_exp = (3 * d - 4) + to_double(Rational(4 - 4 * d) / p);
  const double n = static_cast<double>(e.size());
  const double bound = std::pow(n, four_over_p) * std::pow(q, q_exp);
  w.q = e.space().q();
  w.d = d;
  if (e.radius()) w.j = e.radius()->v;
  w.set_size = e.size();
  return BoundReport::make("easyform", static_cast<double>(lambda4_direct(e)), bound,
                           std::move(w), true);
}

// ---------------------------------------------------------------------------

void write_ratio_csv_header(std::ostream& os) {
  os << "p,r,q,d,j,descriptor,numerator,denominator,ratio\n";
}

void write_ratio_csv_row(std::ostream& os, const RatioReport& r) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << r.exponents.p.str() << ',' << r.exponents.r.str() << ',' << r.q << ',' << r.d
     << ',' << r.j << ',' << r.descriptor << ',' << r.numerator << ',' << r.denominator
     << ',' << r.ratio << '\n';
  os.precision(old);
}

void write_ratio_json(std::ostream& os, const RatioReport& r) {
  nlohmann::json j = {{"p", r.exponents.p.str()},   {"r", r.exponents.r.str()},
                      {"q", r.q},                   {"d", r.d},
                      {"j", r.j},                   {"descriptor", r.descriptor},
                      {"numerator", r.numerator},   {"denominator", r.denominator},
                      {"ratio", r.ratio},           {"support", r.support}};
  os << j.dump(2) << '\n';
}

}  // namespace ffq
