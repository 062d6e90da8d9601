#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ffq {

// An element of F_q, stored as its index in canonical order.
//
// For q = p^n with coefficient vector (c_0, ..., c_{n-1}) over Z_p the index
// is c_0 + c_1 p + ... + c_{n-1} p^{n-1}. Numeric order of the index is the
// lexicographic order on coefficient vectors read from the leading
// coefficient down. For prime q the index is the residue itself.
struct Elem {
  std::uint32_t v = 0;

  friend constexpr auto operator<=>(Elem, Elem) = default;
};

// Arithmetic context for F_q with q = p^n, p an odd prime.
//
// Immutable after construction; copies share the same lookup tables and are
// safe to use from several threads.
class Field {
 public:
  // Largest field order supported. Multiplication tables are only built for
  // q <= kTableLimit; larger fields fall back to polynomial arithmetic.
  static constexpr std::uint32_t kMaxOrder = 1u << 16;
  static constexpr std::uint32_t kTableLimit = 1024;

  // F_p^n with the built-in modulus for (p, n).
  Field(std::uint32_t p, std::uint32_t n = 1);
  // F_p^n with an explicit monic modulus, coefficients low to high
  // (length n + 1, last entry 1). Throws if it is not irreducible.
  Field(std::uint32_t p, std::vector<std::uint32_t> modulus);

  // Parses "q", "p^n" or "p^n:c0,c1,...,cn".
  static Field parse(std::string_view spec);

  // Built-in modulus used for (p, n). For n = 2 and p = 3 mod 4 this is
  // x^2 + 1, for n = 2 otherwise x^2 - g with g the least non-square, and
  // for other n the first irreducible monic polynomial in index order.
  static std::vector<std::uint32_t> default_modulus(std::uint32_t p,
                                                    std::uint32_t n);
  static bool is_irreducible(std::uint32_t p,
                             std::span<const std::uint32_t> modulus);

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const;
  // Inverse of parse(); always in the "p^n:c0,...,cn" form.
  std::string describe() const;

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  // Image of an integer in the prime subfield.
  Elem from_int(std::int64_t k) const;
  Elem from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Elem a) const;
  // Throws std::out_of_range when v >= q.
  Elem at(std::uint32_t v) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  // Throws std::domain_error for a = 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const;
  Elem square(Elem a) const { return mul(a, a); }

  // Absolute trace to Z_p.
  std::uint32_t trace(Elem a) const;
  // Additive character exp(2 pi i Tr(a) / p).
  std::complex<double> chi(Elem a) const;
  // Quadratic character, with eta(0) = 0.
  int eta(Elem a) const;

  bool operator==(const Field& other) const;

 private:
  struct Tables;
  std::shared_ptr<const Tables> t_;
  std::uint32_t p_ = 0;
  std::uint32_t n_ = 0;
  std::uint32_t q_ = 0;

  Elem slow_mul(Elem a, Elem b) const;
  Elem slow_add(Elem a, Elem b) const;
  void build(std::vector<std::uint32_t> modulus);
};

bool is_prime(std::uint64_t n);

}  // namespace ffq
