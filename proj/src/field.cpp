#include "ffqext/field.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ffq {

namespace {

using Poly = std::vector<std::uint32_t>;  // coefficients low to high

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo monic g over Z_p.
Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    const std::uint64_t lead = f.back();
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      const std::uint64_t sub = lead * g[i] % p;
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
    }
    trim(f);
  }
  return f;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint32_t parse_u32(std::string_view s) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad integer in field spec: '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

struct Field::Tables {
  Poly modulus;
  std::vector<std::uint16_t> add;  // q*q, empty when q > kTableLimit
  std::vector<std::uint16_t> mul;
  std::vector<std::uint32_t> neg;
  std::vector<std::uint32_t> inv;
  std::vector<std::uint32_t> trace;
  std::vector<std::complex<double>> chi;
  std::vector<std::int8_t> eta;
};

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool Field::is_irreducible(std::uint32_t p,
                           std::span<const std::uint32_t> modulus) {
  Poly f(modulus.begin(), modulus.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  // Any reducible f has a monic factor of degree <= n/2.
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const std::uint64_t count = ipow(p, static_cast<std::uint32_t>(k));
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(k + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[k] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> Field::default_modulus(std::uint32_t p,
                                                  std::uint32_t n) {
  if (n == 1) return {0, 1};
  if (n == 2) {
    if (p % 4 == 3) return {1, 0, 1};
    // Least non-square g by Euler's criterion; modulus x^2 - g.
    for (std::uint32_t g = 2; g < p; ++g) {
      std::uint64_t r = 1;
      for (std::uint32_t e = 0; e < (p - 1) / 2; ++e) r = r * g % p;
      if (r == p - 1) return {p - g, 0, 1};
    }
  }
  const std::uint64_t count = ipow(p, n);
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly f(n + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < n; ++i) {
      f[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    f[n] = 1;
    if (is_irreducible(p, f)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

Field::Field(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (p == 2) throw std::invalid_argument("characteristic 2 is not supported");
  if (n == 0) throw std::invalid_argument("extension degree must be >= 1");
  build(default_modulus(p, n));
}

Field::Field(std::uint32_t p, std::vector<std::uint32_t> modulus) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (p == 2) throw std::invalid_argument("characteristic 2 is not supported");
  if (modulus.size() < 2 || modulus.back() != 1) {
    throw std::invalid_argument("modulus must be monic of degree >= 1");
  }
  for (auto c : modulus) {
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  }
  if (!is_irreducible(p, modulus)) {
    throw std::invalid_argument("modulus is not irreducible");
  }
  n_ = static_cast<std::uint32_t>(modulus.size() - 1);
  build(std::move(modulus));
}

void Field::build(std::vector<std::uint32_t> modulus) {
  const std::uint64_t q = ipow(p_, n_);
  if (q > kMaxOrder) throw std::invalid_argument("field order too large");
  q_ = static_cast<std::uint32_t>(q);

  auto t = std::make_shared<Tables>();
  t->modulus = std::move(modulus);
  t_ = t;  // slow_* only need the modulus

  t->neg.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    auto c = coeffs(Elem{a});
    for (auto& x : c) x = (p_ - x) % p_;
    t->neg[a] = from_coeffs(c).v;
  }
  if (q_ <= kTableLimit) {
    t->add.resize(std::size_t{q_} * q_);
    t->mul.resize(std::size_t{q_} * q_);
    for (std::uint32_t a = 0; a < q_; ++a) {
      for (std::uint32_t b = 0; b < q_; ++b) {
        t->add[std::size_t{a} * q_ + b] =
            static_cast<std::uint16_t>(slow_add(Elem{a}, Elem{b}).v);
        t->mul[std::size_t{a} * q_ + b] =
            static_cast<std::uint16_t>(slow_mul(Elem{a}, Elem{b}).v);
      }
    }
  }
  t->inv.assign(q_, 0);
  for (std::uint32_t a = 1; a < q_; ++a) t->inv[a] = pow(Elem{a}, q_ - 2).v;

  std::vector<std::complex<double>> roots(p_);
  for (std::uint32_t k = 0; k < p_; ++k) {
    roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / p_);
  }
  t->trace.resize(q_);
  t->chi.resize(q_);
  t->eta.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    // Tr(a) = a + a^p + ... + a^{p^{n-1}} lies in the prime subfield.
    Elem acc = zero();
    Elem frob{a};
    for (std::uint32_t i = 0; i < n_; ++i) {
      acc = add(acc, frob);
      frob = pow(frob, p_);
    }
    if (acc.v >= p_) throw std::logic_error("trace left the prime subfield");
    t->trace[a] = acc.v;
    t->chi[a] = roots[acc.v];
    if (a == 0) {
      t->eta[a] = 0;
    } else {
      t->eta[a] = pow(Elem{a}, (q_ - 1) / 2) == one() ? 1 : -1;
    }
  }
}

Field Field::parse(std::string_view spec) {
  std::string_view head = spec;
  std::string_view tail;
  bool explicit_modulus = false;
  if (auto colon = spec.find(':'); colon != std::string_view::npos) {
    head = spec.substr(0, colon);
    tail = spec.substr(colon + 1);
    explicit_modulus = true;
  }
  std::uint32_t p = 0;
  std::uint32_t n = 1;
  if (auto caret = head.find('^'); caret != std::string_view::npos) {
    p = parse_u32(head.substr(0, caret));
    n = parse_u32(head.substr(caret + 1));
  } else {
    const std::uint32_t q = parse_u32(head);
    if (q < 2) throw std::invalid_argument("field order must be >= 2");
    p = q;
    for (std::uint32_t d = 2; d * d <= q; ++d) {
      if (q % d == 0) {
        p = d;
        break;
      }
    }
    n = 0;
    std::uint64_t acc = 1;
    while (acc < q) {
      acc *= p;
      ++n;
    }
    if (acc != q) throw std::invalid_argument("field order must be a prime power");
  }
  if (!explicit_modulus) return Field(p, n);

  std::vector<std::uint32_t> modulus;
  while (!tail.empty()) {
    auto comma = tail.find(',');
    modulus.push_back(parse_u32(tail.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    tail = tail.substr(comma + 1);
  }
  if (modulus.size() != n + 1) {
    throw std::invalid_argument("modulus must have n + 1 coefficients");
  }
  return Field(p, std::move(modulus));
}

const std::vector<std::uint32_t>& Field::modulus() const { return t_->modulus; }

std::string Field::describe() const {
  std::ostringstream os;
  os << p_ << '^' << n_ << ':';
  for (std::size_t i = 0; i < t_->modulus.size(); ++i) {
    if (i) os << ',';
    os << t_->modulus[i];
  }
  return os.str();
}

Elem Field::from_int(std::int64_t k) const {
  const std::int64_t p = p_;
  return Elem{static_cast<std::uint32_t>(((k % p) + p) % p)};
}

Elem Field::from_coeffs(std::span<const std::uint32_t> c) const {
  if (c.size() > n_) throw std::invalid_argument("too many coefficients");
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw std::invalid_argument("coefficient out of range");
    v = v * p_ + c[i];
  }
  return Elem{v};
}

std::vector<std::uint32_t> Field::coeffs(Elem a) const {
  std::vector<std::uint32_t> c(n_);
  std::uint32_t v = a.v;
  for (std::uint32_t i = 0; i < n_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

Elem Field::at(std::uint32_t v) const {
  if (v >= q_) throw std::out_of_range("element index out of range");
  return Elem{v};
}

Elem Field::slow_add(Elem a, Elem b) const {
  auto ca = coeffs(a);
  auto cb = coeffs(b);
  for (std::uint32_t i = 0; i < n_; ++i) ca[i] = (ca[i] + cb[i]) % p_;
  return from_coeffs(ca);
}

Elem Field::slow_mul(Elem a, Elem b) const {
  const auto ca = coeffs(a);
  const auto cb = coeffs(b);
  Poly prod(2 * n_ - 1, 0);
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t k = 0; k < n_; ++k) {
      prod[i + k] = static_cast<std::uint32_t>(
          (prod[i + k] + std::uint64_t{ca[i]} * cb[k]) % p_);
    }
  }
  Poly r = poly_mod(std::move(prod), t_->modulus, p_);
  r.resize(n_, 0);
  return from_coeffs(r);
}

Elem Field::add(Elem a, Elem b) const {
  if (!t_->add.empty()) return Elem{t_->add[std::size_t{a.v} * q_ + b.v]};
  if (n_ == 1) return Elem{(a.v + b.v) % p_};
  return slow_add(a, b);
}

Elem Field::neg(Elem a) const { return Elem{t_->neg[a.v]}; }

Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem Field::mul(Elem a, Elem b) const {
  if (!t_->mul.empty()) return Elem{t_->mul[std::size_t{a.v} * q_ + b.v]};
  if (n_ == 1) {
    return Elem{static_cast<std::uint32_t>(std::uint64_t{a.v} * b.v % p_)};
  }
  return slow_mul(a, b);
}

Elem Field::inv(Elem a) const {
  if (a.v == 0) throw std::domain_error("inverse of zero in F_q");
  if (!t_->inv.empty()) return Elem{t_->inv[a.v]};
  return pow(a, q_ - 2);
}

Elem Field::pow(Elem a, std::uint64_t k) const {
  Elem result = one();
  while (k > 0) {
    if (k & 1) result = mul(result, a);
    a = mul(a, a);
    k >>= 1;
  }
  return result;
}

std::uint32_t Field::trace(Elem a) const { return t_->trace[a.v]; }

std::complex<double> Field::chi(Elem a) const { return t_->chi[a.v]; }

int Field::eta(Elem a) const { return t_->eta[a.v]; }

bool Field::operator==(const Field& other) const {
  return p_ == other.p_ && n_ == other.n_ && t_->modulus == other.t_->modulus;
}

}  // namespace ffq
