#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "ffqext/geometry.hpp"

namespace ffq {

using Complex = std::complex<double>;

// Which measure a grid function is paired with: the normalized counting
// measure dx on the space side, plain counting measure dm on the phase side.
enum class Side : std::uint32_t { space = 0, phase = 1 };

// A complex-valued function on all of F_q^d, in Space index order.
class GridFn {
 public:
  GridFn(Space space, Side side);
  GridFn(Space space, Side side, std::vector<Complex> values);

  static GridFn indicator(const Space& space, std::span<const std::uint64_t> indices,
                          Side side = Side::space);
  static GridFn constant(const Space& space, Complex c, Side side = Side::space);

  const Space& space() const { return space_; }
  Side side() const { return side_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex operator[](std::uint64_t idx) const { return values_[idx]; }
  Complex& operator[](std::uint64_t idx) { return values_[idx]; }

 private:
  Space space_;
  Side side_;
  std::vector<Complex> values_;
};

// A function on an enumerated surface, values in SphereSet::indices() order.
struct SurfaceFn {
  std::shared_ptr<const SphereSet> surface;
  std::vector<Complex> values;

  SurfaceFn(std::shared_ptr<const SphereSet> s, std::vector<Complex> v);
  static SurfaceFn ones(std::shared_ptr<const SphereSet> s);
  static SurfaceFn indicator(std::shared_ptr<const SphereSet> s,
                             std::span<const std::size_t> positions);
};

// f^(m) = q^{-d} sum_x chi(-x.m) f(x), term by term. Zero entries of f are
// skipped.
GridFn fourier_transform(const GridFn& f);
// Same values via d passes of size-q transforms along each axis.
GridFn fast_fourier_transform(const GridFn& f);
// f(x) = sum_m chi(x.m) g(m), term by term.
GridFn inverse_transform(const GridFn& g);
GridFn fast_inverse_transform(const GridFn& g);

struct PlancherelResult {
  Complex lhs;  // sum_m f^(m) conj(g^(m))
  Complex rhs;  // q^{-d} sum_x f(x) conj(g(x))
  double error = 0;
};
PlancherelResult plancherel_check(const GridFn& f, const GridFn& g);

// (f dsigma)^(m) = |S|^{-1} sum_{x in S} chi(-x.m) f(x). Throws for empty S.
GridFn surface_measure_transform(const SurfaceFn& f);

// Definitional sphere transform at one phase point.
Complex sphere_hat_direct(const SphereSet& s, const FVector& m);

// Closed form: q^{-1} delta_0(m) + q^{-d-1} eta^d(-1) G^d
//   * sum_{r != 0} eta^d(r) chi(j r + |m|^2 / (4 r)).
// Requires the standard sphere (unit weights).
Complex sphere_hat_closed_form(const SphereSet& s, const FVector& m);

struct EvenFormValue {
  Complex value;
  Complex k;  // G^d / q^{d/2}
};
// Even-d form q^{-1} delta_0(m) + K q^{-(d+2)/2} sum_r chi(j r + |m|^2/(4r)).
// Throws std::invalid_argument for odd d, std::logic_error if |K| > 1.
EvenFormValue sphere_hat_even_form(const SphereSet& s, const FVector& m);

// Norms with the measure conventions of each side.
double lp_norm_space(const GridFn& f, double p);   // (q^{-d} sum |f|^p)^{1/p}
double lr_norm_phase(const GridFn& g, double r);   // (sum |g|^r)^{1/r}
double lp_norm_surface(const SurfaceFn& f, double p);  // (|S|^{-1} sum |f|^p)^{1/p}
double linf_norm(std::span<const Complex> values);

// Grid serialization. CSV: header "index,re,im", one row per point.
// Binary: "FFQG", then uint32 p, n, d, side, then q^d pairs of float64
// (re, im); all little-endian.
void write_grid_csv(std::ostream& os, const GridFn& g);
void write_grid_binary(std::ostream& os, const GridFn& g);
// The field is rebuilt with its default modulus.
GridFn read_grid_binary(std::istream& is);

}  // namespace ffq
