#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ffqext/field.hpp"

namespace ffq {

// A point of F_q^d.
struct FVector {
  std::vector<Elem> coords;

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const FVector&, const FVector&) = default;
};

// The ambient space F_q^d.
//
// Points are indexed row-major over the canonical element order, first
// coordinate most significant: index(x) = sum_i x_i q^{d-1-i}. This is the
// lexicographic order on coordinate tuples and the layout of every grid.
class Space {
 public:
  Space(Field field, int d);

  const Field& field() const { return field_; }
  int dim() const { return d_; }
  std::uint32_t q() const { return field_.q(); }
  // q^d
  std::uint64_t size() const { return size_; }

  FVector point(std::uint64_t index) const;
  std::uint64_t index(const FVector& x) const;
  // Coordinate i of the point with the given index, without decoding it.
  Elem coord(std::uint64_t index, int i) const;
  FVector origin() const;

  Elem norm2(const FVector& x) const;
  // Diagonal form sum_i a_i x_i^2.
  Elem form(std::span<const Elem> weights, const FVector& x) const;
  // Throws std::invalid_argument on dimension mismatch.
  Elem dot(const FVector& x, const FVector& y) const;
  FVector add(const FVector& x, const FVector& y) const;
  FVector sub(const FVector& x, const FVector& y) const;
  FVector scale(Elem c, const FVector& x) const;
  // Index of x + y computed from indices.
  std::uint64_t add_index(std::uint64_t x, std::uint64_t y) const;

  bool operator==(const Space& other) const {
    return d_ == other.d_ && field_ == other.field_;
  }

 private:
  Field field_;
  int d_;
  std::uint64_t size_;
  std::vector<std::uint64_t> stride_;
  void check_dim(const FVector& x) const;
};

// S_j = { x : sum_i a_i x_i^2 = j }, with all a_i = 1 for the sphere.
class SphereSet {
 public:
  // Throws std::invalid_argument for j = 0 or a zero weight.
  SphereSet(Space space, Elem j, std::vector<Elem> weights = {});

  const Space& space() const { return space_; }
  int dim() const { return space_.dim(); }
  Elem radius() const { return j_; }
  const std::vector<Elem>& weights() const { return weights_; }
  bool is_standard() const;

  std::size_t size() const { return indices_.size(); }
  // Point indices in increasing (canonical) order.
  const std::vector<std::uint64_t>& indices() const { return indices_; }
  FVector point(std::size_t k) const { return space_.point(indices_[k]); }
  std::vector<FVector> points() const;
  bool contains(std::uint64_t index) const { return member_[index]; }
  bool contains(const FVector& x) const { return member_[space_.index(x)]; }
  // Position of a member in indices(), or nullopt.
  std::optional<std::size_t> position(std::uint64_t index) const;

 private:
  Space space_;
  Elem j_;
  std::vector<Elem> weights_;
  std::vector<std::uint64_t> indices_;
  std::vector<bool> member_;
};

// Convenience wrapper for the standard sphere.
SphereSet sphere(const Field& field, int d, Elem j);

// offset + span(basis), basis linearly independent.
class AffineSubspace {
 public:
  // Throws std::invalid_argument if the basis is dependent or dimensions
  // disagree.
  AffineSubspace(const Space& space, FVector offset, std::vector<FVector> basis);

  int dim() const { return static_cast<int>(basis_.size()); }
  const FVector& offset() const { return offset_; }
  const std::vector<FVector>& basis() const { return basis_; }
  const Space& space() const { return space_; }

  // The q^k points offset + sum c_i b_i, coefficient tuples in canonical order.
  std::vector<FVector> points() const;
  std::vector<std::uint64_t> point_indices() const;

  // Uniformly random k-dimensional affine subspace.
  static AffineSubspace random(const Space& space, int k, std::mt19937_64& rng);

 private:
  Space space_;
  FVector offset_;
  std::vector<FVector> basis_;
};

// Rank of a list of vectors over F_q.
int rank(const Space& space, std::span<const FVector> vectors);

std::vector<FVector> subspace_points(const AffineSubspace& h);

struct IntersectionReport {
  std::uint64_t count = 0;
  double bound = 0;  // q^{k-1} + q^{(d-1)/2}
  double ratio = 0;
};

IntersectionReport sphere_subspace_intersection(const AffineSubspace& h,
                                                const SphereSet& s);

struct SubspaceSearchResult {
  int best_k = 0;
  // Witness of dimension best_k, or nullopt when the sphere is empty.
  std::optional<AffineSubspace> witness;
  bool exhaustive = true;
};

inline constexpr std::uint64_t kExhaustiveSearchLimit = 10000;

// Largest affine subspace contained in S. Exhaustive when
// q^d <= kExhaustiveSearchLimit; otherwise a seeded greedy search from
// `budget` random base points, which only certifies a lower bound.
SubspaceSearchResult max_affine_in_sphere(const SphereSet& s,
                                          std::uint64_t budget = 64,
                                          std::uint64_t seed = 0);

// Line-oriented point format: one point per line, coordinates separated by a
// single space. For n > 1 each coordinate is its coefficient vector c0:c1:...
void write_points(std::ostream& os, const Field& field,
                  std::span<const FVector> points);
std::vector<FVector> read_points(std::istream& is, const Field& field, int d);
std::string format_point(const Field& field, const FVector& x);

}  // namespace ffq
