#pragma once

#include <complex>
#include <string_view>

#include "ffqext/field.hpp"

namespace ffq {

enum class SumKind { gauss, kloosterman, salie, square_gauss };

std::string_view to_string(SumKind kind);

// Value of one exponential sum, evaluated term by term.
struct SumValue {
  std::complex<double> value;
  std::uint32_t q = 0;
  SumKind kind = SumKind::gauss;
  Elem a;
  Elem b;

  double modulus() const { return std::abs(value); }
};

// G_a = sum_{t != 0} eta(t) chi(a t)
SumValue gauss_sum(const Field& f, Elem a);
// sum_{t != 0} chi(a t + b / t)
SumValue kloosterman(const Field& f, Elem a, Elem b);
// sum_{t != 0} eta(t) chi(a t + b / t)
SumValue salie(const Field& f, Elem a, Elem b);
// sum_{s in F_q} chi(t s^2); throws std::invalid_argument for t = 0.
SumValue square_gauss(const Field& f, Elem t);

// |sum_s chi(t s^2) - eta(t) G(eta, chi)| for t != 0.
double square_gauss_identity_error(const Field& f, Elem t);

}  // namespace ffq
