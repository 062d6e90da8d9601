#include "ffqext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ffq {

Space::Space(Field field, int d) : field_(std::move(field)), d_(d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  stride_.assign(d, 1);
  size_ = 1;
  for (int i = d - 1; i >= 0; --i) {
    stride_[i] = size_;
    size_ *= field_.q();
    if (size_ > (std::uint64_t{1} << 32)) {
      throw std::invalid_argument("q^d too large");
    }
  }
}

void Space::check_dim(const FVector& x) const {
  if (static_cast<int>(x.dim()) != d_) {
    throw std::invalid_argument("dimension mismatch");
  }
}

FVector Space::point(std::uint64_t index) const {
  FVector x;
  x.coords.resize(d_);
  const std::uint32_t q = field_.q();
  for (int i = d_ - 1; i >= 0; --i) {
    x.coords[i] = Elem{static_cast<std::uint32_t>(index % q)};
    index /= q;
  }
  return x;
}

std::uint64_t Space::index(const FVector& x) const {
  check_dim(x);
  std::uint64_t idx = 0;
  for (int i = 0; i < d_; ++i) idx = idx * field_.q() + x.coords[i].v;
  return idx;
}

Elem Space::coord(std::uint64_t index, int i) const {
  return Elem{static_cast<std::uint32_t>(index / stride_[i] % field_.q())};
}

FVector Space::origin() const {
  return FVector{std::vector<Elem>(d_, field_.zero())};
}

Elem Space::norm2(const FVector& x) const { return dot(x, x); }

Elem Space::form(std::span<const Elem> weights, const FVector& x) const {
  check_dim(x);
  if (weights.empty()) return norm2(x);
  Elem acc = field_.zero();
  for (int i = 0; i < d_; ++i) {
    acc = field_.add(acc, field_.mul(weights[i], field_.square(x.coords[i])));
  }
  return acc;
}

Elem Space::dot(const FVector& x, const FVector& y) const {
  check_dim(x);
  check_dim(y);
  Elem acc = field_.zero();
  for (int i = 0; i < d_; ++i) {
    acc = field_.add(acc, field_.mul(x.coords[i], y.coords[i]));
  }
  return acc;
}

FVector Space::add(const FVector& x, const FVector& y) const {
  check_dim(x);
  check_dim(y);
  FVector r = x;
  for (int i = 0; i < d_; ++i) r.coords[i] = field_.add(x.coords[i], y.coords[i]);
  return r;
}

FVector Space::sub(const FVector& x, const FVector& y) const {
  check_dim(x);
  check_dim(y);
  FVector r = x;
  for (int i = 0; i < d_; ++i) r.coords[i] = field_.sub(x.coords[i], y.coords[i]);
  return r;
}

FVector Space::scale(Elem c, const FVector& x) const {
  check_dim(x);
  FVector r = x;
  for (auto& e : r.coords) e = field_.mul(c, e);
  return r;
}

std::uint64_t Space::add_index(std::uint64_t x, std::uint64_t y) const {
  const std::uint32_t q = field_.q();
  std::uint64_t result = 0;
  std::uint64_t place = 1;
  for (int i = d_ - 1; i >= 0; --i) {
    const Elem s = field_.add(Elem{static_cast<std::uint32_t>(x % q)},
                              Elem{static_cast<std::uint32_t>(y % q)});
    result += s.v * place;
    place *= q;
    x /= q;
    y /= q;
  }
  return result;
}

// ---------------------------------------------------------------------------

SphereSet::SphereSet(Space space, Elem j, std::vector<Elem> weights)
    : space_(std::move(space)), j_(j), weights_(std::move(weights)) {
  if (j_.v == 0) {
    throw std::invalid_argument(
        "sphere radius j must be nonzero (spheres S_j are only defined for j "
        "in F_q^*)");
  }
  if (weights_.empty()) {
    weights_.assign(space_.dim(), space_.field().one());
  }
  if (static_cast<int>(weights_.size()) != space_.dim()) {
    throw std::invalid_argument("one weight per coordinate required");
  }
  for (auto w : weights_) {
    if (w.v == 0) throw std::invalid_argument("weights must be nonzero");
  }
  member_.assign(space_.size(), false);
  for (std::uint64_t idx = 0; idx < space_.size(); ++idx) {
    if (space_.form(weights_, space_.point(idx)) == j_) {
      indices_.push_back(idx);
      member_[idx] = true;
    }
  }
}

bool SphereSet::is_standard() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [](Elem w) { return w.v == 1; });
}

std::vector<FVector> SphereSet::points() const {
  std::vector<FVector> pts;
  pts.reserve(indices_.size());
  for (auto idx : indices_) pts.push_back(space_.point(idx));
  return pts;
}

std::optional<std::size_t> SphereSet::position(std::uint64_t index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

SphereSet sphere(const Field& field, int d, Elem j) {
  return SphereSet(Space(field, d), j);
}

// ---------------------------------------------------------------------------

int rank(const Space& space, std::span<const FVector> vectors) {
  const Field& f = space.field();
  std::vector<FVector> rows(vectors.begin(), vectors.end());
  int r = 0;
  for (int col = 0; col < space.dim() && r < static_cast<int>(rows.size()); ++col) {
    auto pivot = std::find_if(rows.begin() + r, rows.end(), [&](const FVector& v) {
      return v.coords[col].v != 0;
    });
    if (pivot == rows.end()) continue;
    std::swap(rows[r], *pivot);
    const Elem inv = f.inv(rows[r].coords[col]);
    rows[r] = space.scale(inv, rows[r]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (static_cast<int>(k) == r || rows[k].coords[col].v == 0) continue;
      rows[k] = space.sub(rows[k], space.scale(rows[k].coords[col], rows[r]));
    }
    ++r;
  }
  return r;
}

AffineSubspace::AffineSubspace(const Space& space, FVector offset,
                               std::vector<FVector> basis)
    : space_(space), offset_(std::move(offset)), basis_(std::move(basis)) {
  if (static_cast<int>(offset_.dim()) != space_.dim()) {
    throw std::invalid_argument("offset dimension mismatch");
  }
  for (const auto& b : basis_) {
    if (static_cast<int>(b.dim()) != space_.dim()) {
      throw std::invalid_argument("basis vector dimension mismatch");
    }
  }
  if (rank(space_, basis_) != static_cast<int>(basis_.size())) {
    throw std::invalid_argument("affine subspace basis is linearly dependent");
  }
}

std::vector<FVector> AffineSubspace::points() const {
  const Field& f = space_.field();
  const std::uint32_t q = f.q();
  const int k = dim();
  std::uint64_t count = 1;
  for (int i = 0; i < k; ++i) count *= q;
  std::vector<FVector> pts;
  pts.reserve(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    FVector x = offset_;
    std::uint64_t c = code;
    // Coefficient of basis_[0] is the most significant digit.
    for (int i = k - 1; i >= 0; --i) {
      const Elem coef{static_cast<std::uint32_t>(c % q)};
      c /= q;
      if (coef.v != 0) x = space_.add(x, space_.scale(coef, basis_[i]));
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

std::vector<std::uint64_t> AffineSubspace::point_indices() const {
  std::vector<std::uint64_t> idx;
  for (const auto& x : points()) idx.push_back(space_.index(x));
  return idx;
}

AffineSubspace AffineSubspace::random(const Space& space, int k,
                                      std::mt19937_64& rng) {
  if (k < 0 || k > space.dim()) throw std::invalid_argument("bad subspace dimension");
  std::uniform_int_distribution<std::uint64_t> pick(0, space.size() - 1);
  FVector offset = space.point(pick(rng));
  std::vector<FVector> basis;
  while (static_cast<int>(basis.size()) < k) {
    basis.push_back(space.point(pick(rng)));
    if (rank(space, basis) != static_cast<int>(basis.size())) basis.pop_back();
  }
  return AffineSubspace(space, std::move(offset), std::move(basis));
}

std::vector<FVector> subspace_points(const AffineSubspace& h) { return h.points(); }

IntersectionReport sphere_subspace_intersection(const AffineSubspace& h,
                                                const SphereSet& s) {
  if (!(h.space() == s.space())) {
    throw std::invalid_argument("subspace and sphere live in different spaces");
  }
  IntersectionReport rep;
  for (auto idx : h.point_indices()) {
    if (s.contains(idx)) ++rep.count;
  }
  const double q = s.space().q();
  const int d = s.dim();
  rep.bound = std::pow(q, h.dim() - 1) + std::pow(q, (d - 1) / 2.0);
  rep.ratio = static_cast<double>(rep.count) / rep.bound;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Nonzero directions with first nonzero coordinate 1, in canonical order.
std::vector<std::uint64_t> projective_directions(const Space& space) {
  std::vector<std::uint64_t> dirs;
  for (std::uint64_t idx = 1; idx < space.size(); ++idx) {
    for (int i = 0; i < space.dim(); ++i) {
      const Elem c = space.coord(idx, i);
      if (c.v == 0) continue;
      if (c.v == 1) dirs.push_back(idx);
      break;
    }
  }
  return dirs;
}

class SubspaceGrower {
 public:
  explicit SubspaceGrower(const SphereSet& s) : s_(s), space_(s.space()) {
    const Field& f = space_.field();
    for (std::uint32_t t = 1; t < f.q(); ++t) multiples_.push_back(Elem{t});
  }

  // Whether every point of {p + t w : p in pts, t != 0} is on the sphere.
  bool extends(const std::vector<std::uint64_t>& pts, std::uint64_t w) const {
    const FVector dir = space_.point(w);
    for (Elem t : multiples_) {
      const std::uint64_t step = space_.index(space_.scale(t, dir));
      for (auto p : pts) {
        if (!s_.contains(space_.add_index(p, step))) return false;
      }
    }
    return true;
  }

  std::vector<std::uint64_t> extend(const std::vector<std::uint64_t>& pts,
                                    std::uint64_t w) const {
    std::vector<std::uint64_t> out = pts;
    const FVector dir = space_.point(w);
    for (Elem t : multiples_) {
      const std::uint64_t step = space_.index(space_.scale(t, dir));
      for (auto p : pts) out.push_back(space_.add_index(p, step));
    }
    return out;
  }

  bool independent(const std::vector<FVector>& basis, std::uint64_t w) const {
    std::vector<FVector> b = basis;
    b.push_back(space_.point(w));
    return rank(space_, b) == static_cast<int>(b.size());
  }

  void search(const std::vector<std::uint64_t>& pts, std::vector<FVector>& basis,
              const std::vector<std::uint64_t>& cands, std::uint64_t base,
              SubspaceSearchResult& best) const {
    if (static_cast<int>(basis.size()) > best.best_k) {
      best.best_k = static_cast<int>(basis.size());
      best.witness = AffineSubspace(space_, space_.point(base), basis);
    }
    if (static_cast<int>(basis.size()) + static_cast<int>(cands.size()) <= best.best_k) {
      return;
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const std::uint64_t w = cands[i];
      if (!independent(basis, w) || !extends(pts, w)) continue;
      auto grown = extend(pts, w);
      std::vector<std::uint64_t> next;
      for (std::size_t k = i + 1; k < cands.size(); ++k) {
        if (extends(grown, cands[k])) next.push_back(cands[k]);
      }
      basis.push_back(space_.point(w));
      search(grown, basis, next, base, best);
      basis.pop_back();
      if (best.best_k >= space_.dim()) return;
    }
  }

  const SphereSet& s_;
  const Space& space_;
  std::vector<Elem> multiples_;
};

}  // namespace

SubspaceSearchResult max_affine_in_sphere(const SphereSet& s,
                                          std::uint64_t budget,
                                          std::uint64_t seed) {
  SubspaceSearchResult best;
  const Space& space = s.space();
  if (s.size() == 0) return best;
  best.best_k = 0;
  best.witness = AffineSubspace(space, s.point(0), {});

  SubspaceGrower grower(s);
  const auto dirs = projective_directions(space);

  if (space.size() <= kExhaustiveSearchLimit) {
    best.exhaustive = true;
    for (auto base : s.indices()) {
      std::vector<std::uint64_t> pts{base};
      std::vector<std::uint64_t> cands;
      for (auto w : dirs) {
        if (grower.extends(pts, w)) cands.push_back(w);
      }
      std::vector<FVector> basis;
      grower.search(pts, basis, cands, base, best);
    }
    return best;
  }

  // Greedy growth from random base points; smallest direction first.
  best.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  for (std::uint64_t trial = 0; trial < budget; ++trial) {
    const std::uint64_t base = s.indices()[pick(rng)];
    std::vector<std::uint64_t> pts{base};
    std::vector<FVector> basis;
    for (auto w : dirs) {
      if (grower.independent(basis, w) && grower.extends(pts, w)) {
        pts = grower.extend(pts, w);
        basis.push_back(space.point(w));
      }
    }
    if (static_cast<int>(basis.size()) > best.best_k) {
      best.best_k = static_cast<int>(basis.size());
      best.witness = AffineSubspace(space, space.point(base), basis);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::string format_point(const Field& field, const FVector& x) {
  std::ostringstream os;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (i) os << ' ';
    if (field.n() == 1) {
      os << x.coords[i].v;
    } else {
      const auto c = field.coeffs(x.coords[i]);
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) os << ':';
        os << c[k];
      }
    }
  }
  return os.str();
}

void write_points(std::ostream& os, const Field& field,
                  std::span<const FVector> points) {
  for (const auto& x : points) os << format_point(field, x) << '\n';
}

std::vector<FVector> read_points(std::istream& is, const Field& field, int d) {
  std::vector<FVector> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    FVector x;
    std::string tok;
    while (ls >> tok) {
      std::vector<std::uint32_t> c;
      std::istringstream ts(tok);
      std::string part;
      while (std::getline(ts, part, ':')) c.push_back(static_cast<std::uint32_t>(std::stoul(part)));
      if (c.size() != field.n()) throw std::invalid_argument("bad coordinate: " + tok);
      x.coords.push_back(field.from_coeffs(c));
    }
    if (static_cast<int>(x.dim()) != d) throw std::invalid_argument("bad point: " + line);
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace ffq
