#include "ffqext/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ffqext/charsums.hpp"

namespace ffq {

GridFn::GridFn(Space space, Side side)
    : space_(std::move(space)), side_(side), values_(space_.size(), Complex{}) {}

GridFn::GridFn(Space space, Side side, std::vector<Complex> values)
    : space_(std::move(space)), side_(side), values_(std::move(values)) {
  if (values_.size() != space_.size()) {
    throw std::invalid_argument("grid function needs exactly q^d values");
  }
}

GridFn GridFn::indicator(const Space& space, std::span<const std::uint64_t> indices,
                         Side side) {
  GridFn g(space, side);
  for (auto idx : indices) g.values_.at(idx) = 1.0;
  return g;
}

GridFn GridFn::constant(const Space& space, Complex c, Side side) {
  return GridFn(space, side, std::vector<Complex>(space.size(), c));
}

SurfaceFn::SurfaceFn(std::shared_ptr<const SphereSet> s, std::vector<Complex> v)
    : surface(std::move(s)), values(std::move(v)) {
  if (!surface) throw std::invalid_argument("surface function without surface");
  if (values.size() != surface->size()) {
    throw std::invalid_argument("surface function needs one value per point");
  }
}

SurfaceFn SurfaceFn::ones(std::shared_ptr<const SphereSet> s) {
  const auto n = s->size();
  return SurfaceFn(std::move(s), std::vector<Complex>(n, 1.0));
}

SurfaceFn SurfaceFn::indicator(std::shared_ptr<const SphereSet> s,
                               std::span<const std::size_t> positions) {
  std::vector<Complex> v(s->size(), 0.0);
  for (auto k : positions) v.at(k) = 1.0;
  return SurfaceFn(std::move(s), std::move(v));
}

namespace {

// Flattened coordinate table: coords[idx * d + i].
std::vector<Elem> coordinate_table(const Space& space) {
  const int d = space.dim();
  std::vector<Elem> table(space.size() * d);
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    for (int i = 0; i < d; ++i) table[idx * d + i] = space.coord(idx, i);
  }
  return table;
}

// Sum over x of chi(sign * x.m) f(x), for every m.
std::vector<Complex> naive_character_sum(const GridFn& f, bool negate) {
  const Space& space = f.space();
  const Field& field = space.field();
  const int d = space.dim();
  const auto coords = coordinate_table(space);

  std::vector<std::uint64_t> support;
  for (std::uint64_t x = 0; x < space.size(); ++x) {
    if (f[x] != Complex{}) support.push_back(x);
  }
  std::vector<Complex> out(space.size());
  for (std::uint64_t m = 0; m < space.size(); ++m) {
    const Elem* mc = &coords[m * d];
    Complex acc = 0;
    for (auto x : support) {
      const Elem* xc = &coords[x * d];
      Elem dot = field.zero();
      for (int i = 0; i < d; ++i) dot = field.add(dot, field.mul(xc[i], mc[i]));
      acc += field.chi(negate ? field.neg(dot) : dot) * f[x];
    }
    out[m] = acc;
  }
  return out;
}

// Axis-by-axis evaluation of the same sum.
std::vector<Complex> factorized_character_sum(const GridFn& f, bool negate) {
  const Space& space = f.space();
  const Field& field = space.field();
  const std::uint32_t q = space.q();
  std::vector<Complex> kernel(std::size_t{q} * q);
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t m = 0; m < q; ++m) {
      const Elem prod = field.mul(Elem{x}, Elem{m});
      kernel[std::size_t{x} * q + m] = field.chi(negate ? field.neg(prod) : prod);
    }
  }
  std::vector<Complex> cur = f.values();
  std::vector<Complex> next(cur.size());
  std::vector<Complex> line(q);
  std::uint64_t stride = space.size();
  for (int axis = 0; axis < space.dim(); ++axis) {
    stride /= q;
    const std::uint64_t block = stride * q;
    for (std::uint64_t outer = 0; outer < space.size(); outer += block) {
      for (std::uint64_t inner = 0; inner < stride; ++inner) {
        const std::uint64_t base = outer + inner;
        for (std::uint32_t x = 0; x < q; ++x) line[x] = cur[base + x * stride];
        for (std::uint32_t m = 0; m < q; ++m) {
          Complex acc = 0;
          for (std::uint32_t x = 0; x < q; ++x) acc += kernel[std::size_t{x} * q + m] * line[x];
          next[base + m * stride] = acc;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

double qpow(std::uint32_t q, int d) { return std::pow(static_cast<double>(q), d); }

void require_side(const GridFn& f, Side side) {
  if (f.side() != side) {
    throw std::invalid_argument(side == Side::space
                                    ? "expected a space-side grid function"
                                    : "expected a phase-side grid function");
  }
}

}  // namespace

GridFn fourier_transform(const GridFn& f) {
  require_side(f, Side::space);
  auto v = naive_character_sum(f, true);
  const double scale = 1.0 / qpow(f.space().q(), f.space().dim());
  for (auto& c : v) c *= scale;
  return GridFn(f.space(), Side::phase, std::move(v));
}

GridFn fast_fourier_transform(const GridFn& f) {
  require_side(f, Side::space);
  auto v = factorized_character_sum(f, true);
  const double scale = 1.0 / qpow(f.space().q(), f.space().dim());
  for (auto& c : v) c *= scale;
  return GridFn(f.space(), Side::phase, std::move(v));
}

GridFn inverse_transform(const GridFn& g) {
  require_side(g, Side::phase);
  return GridFn(g.space(), Side::space, naive_character_sum(g, false));
}

GridFn fast_inverse_transform(const GridFn& g) {
  require_side(g, Side::phase);
  return GridFn(g.space(), Side::space, factorized_character_sum(g, false));
}

PlancherelResult plancherel_check(const GridFn& f, const GridFn& g) {
  if (!(f.space() == g.space())) {
    throw std::invalid_argument("plancherel_check needs functions on one space");
  }
  const auto fh = fourier_transform(f);
  const auto gh = fourier_transform(g);
  PlancherelResult r;
  for (std::size_t m = 0; m < fh.size(); ++m) r.lhs += fh[m] * std::conj(gh[m]);
  for (std::size_t x = 0; x < f.size(); ++x) r.rhs += f[x] * std::conj(g[x]);
  r.rhs /= qpow(f.space().q(), f.space().dim());
  r.error = std::abs(r.lhs - r.rhs);
  return r;
}

GridFn surface_measure_transform(const SurfaceFn& f) {
  const SphereSet& s = *f.surface;
  if (s.size() == 0) throw std::invalid_argument("surface is empty");
  const Space& space = s.space();
  const Field& field = space.field();
  const int d = space.dim();
  const auto coords = coordinate_table(space);
  GridFn out(space, Side::phase);
  const double inv_size = 1.0 / static_cast<double>(s.size());
  for (std::uint64_t m = 0; m < space.size(); ++m) {
    const Elem* mc = &coords[m * d];
    Complex acc = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (f.values[k] == Complex{}) continue;
      const Elem* xc = &coords[s.indices()[k] * d];
      Elem dot = field.zero();
      for (int i = 0; i < d; ++i) dot = field.add(dot, field.mul(xc[i], mc[i]));
      acc += field.chi(field.neg(dot)) * f.values[k];
    }
    out[m] = acc * inv_size;
  }
  return out;
}

Complex sphere_hat_direct(const SphereSet& s, const FVector& m) {
  const Space& space = s.space();
  const Field& field = space.field();
  Complex acc = 0;
  for (auto idx : s.indices()) {
    acc += field.chi(field.neg(space.dot(space.point(idx), m)));
  }
  return acc / qpow(space.q(), space.dim());
}

namespace {

// sum_{r != 0} eta^d(r) chi(j r + |m|^2 / (4 r))
Complex radial_sum(const Field& field, Elem j, Elem norm_m, int d) {
  const Elem quarter = field.inv(field.from_int(4));
  const Elem c = field.mul(norm_m, quarter);
  Complex acc = 0;
  for (std::uint32_t v = 1; v < field.q(); ++v) {
    const Elem r{v};
    const Elem arg = field.add(field.mul(j, r), field.mul(c, field.inv(r)));
    const double twist = (d % 2 == 0) ? 1.0 : static_cast<double>(field.eta(r));
    acc += twist * field.chi(arg);
  }
  return acc;
}

Complex gauss_power(const Field& field, int d) {
  const Complex g = gauss_sum(field, field.one()).value;
  Complex gd = 1.0;
  for (int i = 0; i < d; ++i) gd *= g;
  return gd;
}

void require_standard(const SphereSet& s) {
  if (!s.is_standard()) {
    throw std::invalid_argument("closed form requires the standard sphere");
  }
}

}  // namespace

Complex sphere_hat_closed_form(const SphereSet& s, const FVector& m) {
  require_standard(s);
  const Space& space = s.space();
  const Field& field = space.field();
  const int d = space.dim();
  const double q = space.q();
  const bool at_origin = space.index(m) == 0;
  const double eta_minus_one_d =
      (d % 2 == 0) ? 1.0 : static_cast<double>(field.eta(field.neg(field.one())));
  const Complex sum = radial_sum(field, s.radius(), space.norm2(m), d);
  return (at_origin ? 1.0 / q : 0.0) +
         std::pow(q, -d - 1) * eta_minus_one_d * gauss_power(field, d) * sum;
}

EvenFormValue sphere_hat_even_form(const SphereSet& s, const FVector& m) {
  require_standard(s);
  const Space& space = s.space();
  const Field& field = space.field();
  const int d = space.dim();
  if (d % 2 != 0) throw std::invalid_argument("even form requires even d");
  const double q = space.q();
  const Complex k = gauss_power(field, d) / std::pow(q, d / 2);
  if (std::abs(k) > 1.0 + 1e-9) throw std::logic_error("|K| exceeds 1");
  const bool at_origin = space.index(m) == 0;
  const Complex sum = radial_sum(field, s.radius(), space.norm2(m), d);
  return {(at_origin ? 1.0 / q : 0.0) + k * std::pow(q, -(d + 2) / 2.0) * sum, k};
}

// ---------------------------------------------------------------------------

double lp_norm_space(const GridFn& f, double p) {
  if (std::isinf(p)) return linf_norm(f.values());
  double acc = 0;
  for (auto c : f.values()) acc += std::pow(std::abs(c), p);
  return std::pow(acc / static_cast<double>(f.size()), 1.0 / p);
}

double lr_norm_phase(const GridFn& g, double r) {
  if (std::isinf(r)) return linf_norm(g.values());
  double acc = 0;
  for (auto c : g.values()) acc += std::pow(std::abs(c), r);
  return std::pow(acc, 1.0 / r);
}

double lp_norm_surface(const SurfaceFn& f, double p) {
  if (std::isinf(p)) return linf_norm(f.values);
  double acc = 0;
  for (auto c : f.values) acc += std::pow(std::abs(c), p);
  return std::pow(acc / static_cast<double>(f.values.size()), 1.0 / p);
}

double linf_norm(std::span<const Complex> values) {
  double m = 0;
  for (auto c : values) m = std::max(m, std::abs(c));
  return m;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("truncated grid file");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

constexpr char kMagic[4] = {'F', 'F', 'Q', 'G'};

}  // namespace

void write_grid_csv(std::ostream& os, const GridFn& g) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "index,re,im\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << i << ',' << g[i].real() << ',' << g[i].imag() << '\n';
  }
  os.precision(old_precision);
}

void write_grid_binary(std::ostream& os, const GridFn& g) {
  const Field& f = g.space().field();
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, f.p());
  put_le<std::uint32_t>(os, f.n());
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.space().dim()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.side()));
  for (auto c : g.values()) {
    put_le<double>(os, c.real());
    put_le<double>(os, c.imag());
  }
}

GridFn read_grid_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw std::runtime_error("not a grid file");
  }
  const auto p = get_le<std::uint32_t>(is);
  const auto n = get_le<std::uint32_t>(is);
  const auto d = get_le<std::uint32_t>(is);
  const auto side = get_le<std::uint32_t>(is);
  if (side > 1) throw std::runtime_error("bad grid side");
  Space space(Field(p, n), static_cast<int>(d));
  std::vector<Complex> values(space.size());
  for (auto& c : values) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    c = {re, im};
  }
  return GridFn(space, static_cast<Side>(side), std::move(values));
}

}  // namespace ffq
