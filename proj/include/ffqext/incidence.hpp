#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffqext/geometry.hpp"
#include "ffqext/report.hpp"

namespace ffq {

// A duplicate-free set of points of F_q^d, optionally constrained to a sphere.
class PointSet {
 public:
  // Sorts and deduplicates; no sphere constraint.
  PointSet(Space space, std::vector<std::uint64_t> indices);
  // Throws std::invalid_argument if some point is off the sphere.
  static PointSet on_sphere(const SphereSet& s, std::vector<std::uint64_t> indices);
  static PointSet from_points(const Space& space, std::span<const FVector> pts);

  const Space& space() const { return space_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<std::uint64_t>& indices() const { return indices_; }
  std::vector<FVector> points() const;
  // Radius of the parent sphere, when constrained.
  std::optional<Elem> radius() const { return radius_; }

  PointSet translated(const FVector& v) const;
  // Applies a coordinate permutation to every point.
  PointSet permuted(std::span<const int> perm) const;

 private:
  Space space_;
  std::vector<std::uint64_t> indices_;
  std::optional<Elem> radius_;
};

// Number of (x, y, z, k) in E^4 with x + y = z + k, as sum_s r(s)^2 over the
// pair-sum representation counts r(s).
std::uint64_t lambda4_direct(const PointSet& e);

// q^{3d} sum_m |E^(m)|^4 with the definitional transform of the indicator,
// rounded. Throws std::logic_error if the value is not within 0.4 of an
// integer.
std::uint64_t lambda4_fourier(const PointSet& e);
double lambda4_fourier_raw(const PointSet& e);

// #{(x, y) in E^2 : x.y = j}
std::uint64_t dot_count(const PointSet& e, Elem j);
// Count with the bound q^{-1}|E|^2 + q^{(d-2)/2}|E|; flagged out of
// hypotheses unless d is even and >= 4.
BoundReport dot_count_report(const PointSet& e, Elem j, Witness w = {});

// #{(x, z, z', s, s') in E^3 x (F_q^*)^2 : z != z', s(z - x) + s'(x - z') = 0}
enum class CollinearStrategy { direct, lines };
std::uint64_t collinear_triple_count(const PointSet& e,
                                     CollinearStrategy strategy = CollinearStrategy::lines);
// Bound q|E|^2 + q^{(d+2)/2}|E|.
BoundReport collinear_triple_report(const PointSet& e, Witness w = {});
// Strategy `direct` is only accepted up to this size.
inline constexpr std::size_t kDirectCollinearLimit = 20;

// min{|E|^3, q^{-1}|E|^3 + q^{(d-2)/4}|E|^{5/2} + q^{(3d-4)/4}|E|^{3/2}}
double lambda4_bound(double e_size, double q, int d);

// Single-term regime bound. Regimes by |E| with thresholds
// T4 = q^{(3d-4)/6}, T3 = q^{(d-1)/2}, T2 = q^{(d+2)/2}:
//   4: |E| <= T4          -> |E|^3
//   3: T4 < |E| <= T3     -> q^{(3d-4)/4}|E|^{3/2}
//   2: T3 < |E| <= T2     -> q^{(d-2)/4}|E|^{5/2}
//   1: |E| > T2           -> q^{-1}|E|^3
// At a threshold the regime covering smaller sets wins.
struct RegimeBound {
  double bound = 0;
  int regime = 0;
};
RegimeBound piecewise_lambda4_bound(double e_size, double q, int d);

// Sampling of subsets of a sphere for bound scans.
//
// Families: "full" (the sphere), "singleton", "cap" ({x : x_1 = c} on S),
// "slices" (union of S with 1-3 random affine hyperplanes), "random"
// (uniform subset with size from a geometric ladder). "all" puts full and
// singleton first and then cycles random, cap, random, slices. A
// comma-separated list cycles through the named families.
struct SampledSet {
  PointSet set;
  std::string sampler;
  std::uint64_t seed = 0;   // scan seed
  std::uint64_t index = 0;  // sample index within the scan
};

// Throws std::invalid_argument for an unknown family.
std::vector<std::string> parse_sampler_spec(std::string_view spec);

// Sample i depends only on (seed, i).
std::vector<SampledSet> sample_sets(const SphereSet& s, std::string_view sampler_spec,
                                    std::size_t n_samples, std::uint64_t seed);

// For every sampled set: "lambda4_long", "lambda4_piecewise", "dot_count"
// and "collinear" reports. Returned in sample order.
std::vector<BoundReport> scan_bounds(const SphereSet& s, std::string_view sampler_spec,
                                     std::size_t n_samples, std::uint64_t seed,
                                     bool with_points = false);
std::vector<BoundReport> bound_reports_for(const SphereSet& s, const SampledSet& sample,
                                           bool with_points = false);

// Deterministic per-sample generator.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace ffq
