#include "ffqext/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "ffqext/fourier.hpp"
#include "ffqext/parallel.hpp"

namespace ffq {

PointSet::PointSet(Space space, std::vector<std::uint64_t> indices)
    : space_(std::move(space)), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.back() >= space_.size()) {
    throw std::out_of_range("point index out of range");
  }
}

PointSet PointSet::on_sphere(const SphereSet& s, std::vector<std::uint64_t> indices) {
  PointSet e(s.space(), std::move(indices));
  for (auto idx : e.indices_) {
    if (!s.contains(idx)) throw std::invalid_argument("point is not on the sphere");
  }
  e.radius_ = s.radius();
  return e;
}

PointSet PointSet::from_points(const Space& space, std::span<const FVector> pts) {
  std::vector<std::uint64_t> idx;
  idx.reserve(pts.size());
  for (const auto& x : pts) idx.push_back(space.index(x));
  return PointSet(space, std::move(idx));
}

std::vector<FVector> PointSet::points() const {
  std::vector<FVector> pts;
  for (auto idx : indices_) pts.push_back(space_.point(idx));
  return pts;
}

PointSet PointSet::translated(const FVector& v) const {
  const std::uint64_t vi = space_.index(v);
  std::vector<std::uint64_t> out;
  for (auto idx : indices_) out.push_back(space_.add_index(idx, vi));
  return PointSet(space_, std::move(out));
}

PointSet PointSet::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != space_.dim()) {
    throw std::invalid_argument("permutation size must equal d");
  }
  std::vector<std::uint64_t> out;
  for (auto idx : indices_) {
    const FVector x = space_.point(idx);
    FVector y = x;
    for (int i = 0; i < space_.dim(); ++i) y.coords[i] = x.coords[perm[i]];
    out.push_back(space_.index(y));
  }
  return PointSet(space_, std::move(out));
}

// ---------------------------------------------------------------------------

std::uint64_t lambda4_direct(const PointSet& e) {
  const Space& space = e.space();
  const auto& idx = e.indices();
  std::uint64_t total = 0;
  if (space.size() <= (std::uint64_t{1} << 24)) {
    std::vector<std::uint32_t> tally(space.size(), 0);
    std::vector<std::uint64_t> touched;
    for (auto x : idx) {
      for (auto y : idx) {
        const auto s = space.add_index(x, y);
        if (tally[s]++ == 0) touched.push_back(s);
      }
    }
    for (auto s : touched) total += std::uint64_t{tally[s]} * tally[s];
  } else {
    std::unordered_map<std::uint64_t, std::uint64_t> tally;
    for (auto x : idx) {
      for (auto y : idx) ++tally[space.add_index(x, y)];
    }
    for (const auto& [s, r] : tally) total += r * r;
  }
  return total;
}

double lambda4_fourier_raw(const PointSet& e) {
  const Space& space = e.space();
  const GridFn hat = fourier_transform(GridFn::indicator(space, e.indices()));
  double acc = 0;
  for (auto c : hat.values()) {
    const double a2 = std::norm(c);
    acc += a2 * a2;
  }
  return acc * std::pow(static_cast<double>(space.q()), 3 * space.dim());
}

std::uint64_t lambda4_fourier(const PointSet& e) {
  const double raw = lambda4_fourier_raw(e);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) >= 0.4) {
    throw std::logic_error("Fourier additive energy is not near an integer");
  }
  return static_cast<std::uint64_t>(rounded);
}

std::uint64_t dot_count(const PointSet& e, Elem j) {
  const Space& space = e.space();
  const auto pts = e.points();
  std::uint64_t count = 0;
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      if (space.dot(x, y) == j) ++count;
    }
  }
  return count;
}

namespace {

Witness fill_witness(const PointSet& e, Witness w) {
  w.q = e.space().q();
  w.d = e.space().dim();
  if (e.radius()) w.j = e.radius()->v;
  w.set_size = e.size();
  return w;
}

bool theorem_hypotheses(int d) { return d % 2 == 0 && d >= 4; }

}  // namespace

BoundReport dot_count_report(const PointSet& e, Elem j, Witness w) {
  const double q = e.space().q();
  const int d = e.space().dim();
  const double n = static_cast<double>(e.size());
  const double bound = n * n / q + std::pow(q, (d - 2) / 2.0) * n;
  w = fill_witness(e, std::move(w));
  w.j = j.v;
  return BoundReport::make("dot_count", static_cast<double>(dot_count(e, j)), bound,
                           std::move(w), theorem_hypotheses(d));
}

std::uint64_t collinear_triple_count(const PointSet& e, CollinearStrategy strategy) {
  const Space& space = e.space();
  const Field& f = space.field();
  const auto pts = e.points();
  const std::size_t n = pts.size();
  std::uint64_t count = 0;

  if (strategy == CollinearStrategy::direct) {
    if (n > kDirectCollinearLimit) {
      throw std::invalid_argument("direct collinear count is limited to small sets");
    }
    const FVector zero = space.origin();
    for (const auto& x : pts) {
      for (const auto& z : pts) {
        const FVector zx = space.sub(z, x);
        for (const auto& zp : pts) {
          if (zp == z) continue;
          const FVector xzp = space.sub(x, zp);
          for (std::uint32_t s = 1; s < f.q(); ++s) {
            const FVector a = space.scale(Elem{s}, zx);
            for (std::uint32_t sp = 1; sp < f.q(); ++sp) {
              if (space.add(a, space.scale(Elem{sp}, xzp)) == zero) ++count;
            }
          }
        }
      }
    }
    return count;
  }

  // For x != z, z' solves the equation iff z' = x + alpha (z - x) with
  // alpha not in {0, 1}, and then s = alpha s' for each of the q - 1
  // choices of s'. x = z admits no solution with z' != z.
  std::vector<bool> member(space.size(), false);
  for (auto idx : e.indices()) member[idx] = true;
  for (const auto& x : pts) {
    for (const auto& z : pts) {
      if (x == z) continue;
      const FVector dir = space.sub(z, x);
      for (std::uint32_t a = 2; a < f.q(); ++a) {
        const FVector zp = space.add(x, space.scale(Elem{a}, dir));
        if (member[space.index(zp)]) count += f.q() - 1;
      }
    }
  }
  return count;
}

BoundReport collinear_triple_report(const PointSet& e, Witness w) {
  const double q = e.space().q();
  const int d = e.space().dim();
  const double n = static_cast<double>(e.size());
  const double bound = q * n * n + std::pow(q, (d + 2) / 2.0) * n;
  return BoundReport::make("collinear", static_cast<double>(collinear_triple_count(e)),
                           bound, fill_witness(e, std::move(w)), theorem_hypotheses(d));
}

double lambda4_bound(double e_size, double q, int d) {
  const double cube = e_size * e_size * e_size;
  const double second = cube / q + std::pow(q, (d - 2) / 4.0) * std::pow(e_size, 2.5) +
                        std::pow(q, (3 * d - 4) / 4.0) * std::pow(e_size, 1.5);
  return std::min(cube, second);
}

RegimeBound piecewise_lambda4_bound(double e_size, double q, int d) {
  constexpr double kSlack = 1 + 1e-12;
  const double t4 = std::pow(q, (3 * d - 4) / 6.0);
  const double t3 = std::pow(q, (d - 1) / 2.0);
  const double t2 = std::pow(q, (d + 2) / 2.0);
  if (e_size <= t4 * kSlack) return {e_size * e_size * e_size, 4};
  if (e_size <= t3 * kSlack) return {std::pow(q, (3 * d - 4) / 4.0) * std::pow(e_size, 1.5), 3};
  if (e_size <= t2 * kSlack) return {std::pow(q, (d - 2) / 4.0) * std::pow(e_size, 2.5), 2};
  return {e_size * e_size * e_size / q, 1};
}

// ---------------------------------------------------------------------------

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

const std::vector<std::string> kFamilies = {"full", "singleton", "cap", "slices", "random"};

std::vector<std::uint64_t> random_subset(const SphereSet& s, std::size_t k,
                                         std::mt19937_64& rng) {
  std::vector<std::uint64_t> pool = s.indices();
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

std::vector<std::size_t> size_ladder(std::size_t n) {
  std::vector<std::size_t> ladder;
  constexpr int kSteps = 8;
  for (int t = 0; t < kSteps; ++t) {
    const double v = std::pow(static_cast<double>(n), t / double(kSteps - 1));
    ladder.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(v)), 1, n));
  }
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
  return ladder;
}

std::vector<std::uint64_t> draw(const SphereSet& s, const std::string& family,
                                std::mt19937_64& rng) {
  const Space& space = s.space();
  std::uniform_int_distribution<std::size_t> pick_point(0, s.size() - 1);
  if (family == "full") return s.indices();
  if (family == "singleton") return {s.indices()[pick_point(rng)]};
  if (family == "random") {
    const auto ladder = size_ladder(s.size());
    std::uniform_int_distribution<std::size_t> pick(0, ladder.size() - 1);
    return random_subset(s, ladder[pick(rng)], rng);
  }
  if (family == "cap") {
    // Choose the first coordinate of a random sphere point so the cap is
    // never empty.
    const Elem c = space.coord(s.indices()[pick_point(rng)], 0);
    std::vector<std::uint64_t> cap;
    for (auto idx : s.indices()) {
      if (space.coord(idx, 0) == c) cap.push_back(idx);
    }
    return cap;
  }
  if (family == "slices") {
    std::uniform_int_distribution<int> count(1, 3);
    std::vector<std::uint64_t> out;
    const int k = std::max(space.dim() - 1, 0);
    for (int attempt = 0; attempt < 32 && out.empty(); ++attempt) {
      const int slices = count(rng);
      for (int t = 0; t < slices; ++t) {
        const auto h = AffineSubspace::random(space, k, rng);
        for (auto idx : h.point_indices()) {
          if (s.contains(idx)) out.push_back(idx);
        }
      }
    }
    if (out.empty()) out.push_back(s.indices()[pick_point(rng)]);
    return out;
  }
  throw std::invalid_argument("unknown sampler family: " + family);
}

}  // namespace

std::vector<std::string> parse_sampler_spec(std::string_view spec) {
  if (spec == "all") return {"all"};
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto name = std::string(spec.substr(start, comma - start));
    if (std::find(kFamilies.begin(), kFamilies.end(), name) == kFamilies.end()) {
      throw std::invalid_argument("unknown sampler family: '" + name + "'");
    }
    out.push_back(name);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<SampledSet> sample_sets(const SphereSet& s, std::string_view sampler_spec,
                                    std::size_t n_samples, std::uint64_t seed) {
  const auto families = parse_sampler_spec(sampler_spec);
  if (s.size() == 0) throw std::invalid_argument("cannot sample from an empty sphere");
  std::vector<SampledSet> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::string family;
    if (families.front() == "all") {
      static const std::vector<std::string> cycle = {"random", "cap", "random", "slices"};
      family = i == 0 ? "full" : i == 1 ? "singleton" : cycle[(i - 2) % cycle.size()];
    } else {
      family = families[i % families.size()];
    }
    auto rng = sample_rng(seed, i);
    out.push_back({PointSet::on_sphere(s, draw(s, family, rng)), family, seed, i});
  }
  return out;
}

std::vector<BoundReport> bound_reports_for(const SphereSet& s, const SampledSet& sample,
                                           bool with_points) {
  const PointSet& e = sample.set;
  Witness w;
  w.sampler = sample.sampler;
  w.seed = sample.seed;
  w.sample = sample.index;
  w = fill_witness(e, std::move(w));
  if (with_points) w.points = e.indices();
  const double q = s.space().q();
  const int d = s.dim();
  const bool hyp = theorem_hypotheses(d);
  const double n = static_cast<double>(e.size());
  const double l4 = static_cast<double>(lambda4_direct(e));

  std::vector<BoundReport> out;
  out.push_back(BoundReport::make("lambda4_long", l4, lambda4_bound(n, q, d), w, hyp));
  out.push_back(BoundReport::make("lambda4_piecewise", l4,
                                  piecewise_lambda4_bound(n, q, d).bound, w, hyp));
  out.push_back(dot_count_report(e, s.radius(), w));
  out.push_back(collinear_triple_report(e, w));
  return out;
}

std::vector<BoundReport> scan_bounds(const SphereSet& s, std::string_view sampler_spec,
                                     std::size_t n_samples, std::uint64_t seed,
                                     bool with_points) {
  const auto samples = sample_sets(s, sampler_spec, n_samples, seed);
  auto per_sample = parallel_map(samples.size(), [&](std::size_t i) {
    return bound_reports_for(s, samples[i], with_points);
  });
  std::vector<BoundReport> out;
  for (auto& batch : per_sample) {
    for (auto& r : batch) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ffq
