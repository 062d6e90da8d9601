#include "ffqext/charsums.hpp"

#include <stdexcept>

namespace ffq {

std::string_view to_string(SumKind kind) {
  switch (kind) {
    case SumKind::gauss: return "gauss";
    case SumKind::kloosterman: return "kloosterman";
    case SumKind::salie: return "salie";
    case SumKind::square_gauss: return "square_gauss";
  }
  return "?";
}

SumValue gauss_sum(const Field& f, Elem a) {
  std::complex<double> acc = 0;
  for (std::uint32_t t = 1; t < f.q(); ++t) {
    acc += static_cast<double>(f.eta(Elem{t})) * f.chi(f.mul(a, Elem{t}));
  }
  return {acc, f.q(), SumKind::gauss, a, f.zero()};
}

namespace {

std::complex<double> twisted(const Field& f, Elem a, Elem b, bool use_eta) {
  std::complex<double> acc = 0;
  for (std::uint32_t v = 1; v < f.q(); ++v) {
    const Elem t{v};
    const auto term = f.chi(f.add(f.mul(a, t), f.mul(b, f.inv(t))));
    acc += use_eta ? static_cast<double>(f.eta(t)) * term : term;
  }
  return acc;
}

}  // namespace

SumValue kloosterman(const Field& f, Elem a, Elem b) {
  return {twisted(f, a, b, false), f.q(), SumKind::kloosterman, a, b};
}

SumValue salie(const Field& f, Elem a, Elem b) {
  return {twisted(f, a, b, true), f.q(), SumKind::salie, a, b};
}

SumValue square_gauss(const Field& f, Elem t) {
  if (t.v == 0) {
    throw std::invalid_argument("square_gauss requires t != 0");
  }
  std::complex<double> acc = 0;
  for (std::uint32_t s = 0; s < f.q(); ++s) {
    acc += f.chi(f.mul(t, f.square(Elem{s})));
  }
  return {acc, f.q(), SumKind::square_gauss, t, f.zero()};
}

double square_gauss_identity_error(const Field& f, Elem t) {
  const auto lhs = square_gauss(f, t).value;
  const auto rhs = static_cast<double>(f.eta(t)) * gauss_sum(f, f.one()).value;
  return std::abs(lhs - rhs);
}

}  // namespace ffq
