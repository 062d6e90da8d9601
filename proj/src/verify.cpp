#include "ffqext/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ffqext/charsums.hpp"

namespace ffq {

namespace {

struct Worst {
  double value = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  void offer(double v, std::uint32_t x, std::uint32_t y) {
    if (v > value) *this = {v, x, y};
  }
};

CheckRecord record(std::string name, std::uint32_t q, const Worst& w, double limit) {
  return {std::move(name), q, w.value, limit, w.value <= limit, w.a, w.b};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

std::vector<CheckRecord> character_sum_checks(const Field& f, double tol) {
  const double sq = std::sqrt(static_cast<double>(f.q()));
  Worst gauss, identity, kloos, sal;
  for (std::uint32_t a = 0; a < f.q(); ++a) {
    if (a != 0) {
      gauss.offer(std::abs(gauss_sum(f, Elem{a}).modulus() - sq), a, 0);
      identity.offer(square_gauss_identity_error(f, Elem{a}), a, 0);
    }
    for (std::uint32_t b = 0; b < f.q(); ++b) {
      if (a != 0 && b != 0) kloos.offer(kloosterman(f, Elem{a}, Elem{b}).modulus(), a, b);
      if (a != 0 || b != 0) sal.offer(salie(f, Elem{a}, Elem{b}).modulus(), a, b);
    }
  }
  return {record("gauss_modulus", f.q(), gauss, tol),
          record("square_identity", f.q(), identity, tol),
          record("kloosterman", f.q(), kloos, 2 * sq + tol),
          record("salie", f.q(), sal, 2 * sq + tol)};
}

SphereTransformCheck check_sphere_transform(const SphereSet& s) {
  if (!s.is_standard()) throw std::invalid_argument("check needs the standard sphere");
  const Space& space = s.space();
  const Field& f = space.field();
  const int d = space.dim();
  const auto hat = fourier_transform(GridFn::indicator(space, s.indices()));

  SphereTransformCheck out;
  out.q = f.q();
  out.d = d;
  out.j = s.radius().v;
  out.points = space.size();
  const double decay_scale = std::pow(f.q(), (d + 1) / 2.0);
  const bool even = d % 2 == 0;
  double even_error = 0;
  for (std::uint64_t m = 0; m < space.size(); ++m) {
    const FVector pm = space.point(m);
    const Complex closed = sphere_hat_closed_form(s, pm);
    out.max_error = std::max(out.max_error, std::abs(closed - hat[m]));
    if (m != 0) out.decay_ratio = std::max(out.decay_ratio, std::abs(hat[m]) * decay_scale);
    if (even) {
      even_error = std::max(even_error, std::abs(sphere_hat_even_form(s, pm).value - closed));
    }
  }
  if (even) {
    const Complex g = gauss_sum(f, f.one()).value;
    out.k_modulus = std::abs(std::pow(g, d)) / std::pow(f.q(), d / 2.0);
    out.even_form_error = even_error;
  }
  return out;
}

TransformBench bench_transforms(const Space& space, int runs, std::uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("runs must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(space.size());
  for (auto& z : v) z = {nd(rng), nd(rng)};
  const GridFn f(space, Side::space, std::move(v));

  using Clock = std::chrono::steady_clock;
  std::vector<double> naive, fast;
  TransformBench out;
  for (int r = 0; r < runs; ++r) {
    auto t0 = Clock::now();
    const GridFn a = fourier_transform(f);
    auto t1 = Clock::now();
    const GridFn b = fast_fourier_transform(f);
    auto t2 = Clock::now();
    naive.push_back(std::chrono::duration<double>(t1 - t0).count());
    fast.push_back(std::chrono::duration<double>(t2 - t1).count());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.max_difference = std::max(out.max_difference, std::abs(a[i] - b[i]));
    }
  }
  out.q = space.q();
  out.d = space.dim();
  out.runs = runs;
  out.naive_seconds = median(naive);
  out.fast_seconds = median(fast);
  out.speedup = out.fast_seconds > 0 ? out.naive_seconds / out.fast_seconds : INFINITY;
  return out;
}

}  // namespace ffq
